//! Confocal-quadric machinery: the n parameters λʲ through a point, the
//! signed squared semi-axis table, coordinate recovery, the norm and
//! orthogonality identities, poles, support distances, the dual system
//! centred at the point, focal conics, central-section radii and focal
//! cones with their shared axes.
//!
//! Signed squares (aᵢ² − λ may be negative) are kept as signed reals
//! throughout; square roots are only taken where an actual length is
//! needed.

use serde::{Deserialize, Serialize};

use crate::conjugate::Ellipsoid;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, MatN, SymMatN, VecN};

/// Bisection iterations for the λ-roots; the interlacing brackets make
/// plain bisection unconditionally convergent.
const BISECT_ITERS: usize = 60;

/// The n confocal parameters through a point, with the signed squared
/// semi-axis table (aᵢʲ)² = aᵢ² − λʲ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfocalTriple {
    pub base: Ellipsoid,
    pub point: VecN,
    /// λ¹ < λ² < … < λⁿ.
    pub lambdas: Vec<f64>,
}

impl ConfocalTriple {
    /// Signed squared semi-axis (aᵢʲ)², i = coordinate, j = confocal index
    /// (both zero-based).
    pub fn signed_sq(&self, i: usize, j: usize) -> f64 {
        self.base.squared(i) - self.lambdas[j]
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Interlacing residual: 0 when λ¹ < aₙ² < λ² < … < λⁿ < a₁² holds.
    pub fn interlacing_ok(&self) -> bool {
        let n = self.dim();
        let mut sq: Vec<f64> = (0..n).map(|i| self.base.squared(i)).collect();
        sq.sort_by(|a, b| a.partial_cmp(b).unwrap()); // ascending
        for j in 0..n {
            let lo = if j == 0 { f64::NEG_INFINITY } else { sq[j - 1] };
            if !(self.lambdas[j] > lo && self.lambdas[j] < sq[j]) {
                return false;
            }
        }
        true
    }

    /// Unit normal at `point` of the j-th confocal through it.
    pub fn unit_normal(&self, j: usize) -> VecN {
        let n = self.dim();
        let v = VecN(
            (0..n)
                .map(|i| self.point[i] / self.signed_sq(i, j))
                .collect(),
        );
        v.scaled(1.0 / v.norm())
    }
}

/// Evaluate f(λ) = Σᵢ pᵢ² Π_{j≠i}(aⱼ²−λ) − Πᵢ(aᵢ²−λ).
fn confocal_fn(ell: &Ellipsoid, p: &VecN, lam: f64) -> f64 {
    let n = ell.dim();
    let mut total = -(0..n).map(|i| ell.squared(i) - lam).product::<f64>();
    for i in 0..n {
        let prod: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| ell.squared(j) - lam)
            .product();
        total += p[i] * p[i] * prod;
    }
    total
}

/// The n distinct confocal parameters through `p`, found by bisection in
/// the interlacing brackets (…, aₙ²), (aₙ², aₙ₋₁²), …; the lowest bracket
/// is extended downward by doubling until the sign changes.
pub fn lambda_roots(ell: &Ellipsoid, p: &VecN) -> Result<ConfocalTriple> {
    ell.require_strict()?;
    if p.dim() != ell.dim() || !p.is_finite() {
        return Err(Error::InvalidMatrix);
    }
    let n = ell.dim();
    let scale = p.norm().max(ell.semi_axis(0));
    if (0..n).any(|i| p[i].abs() <= 1e-14 * scale) {
        return Err(Error::PointOnCoordinateHyperplane);
    }

    let mut sq: Vec<f64> = (0..n).map(|i| ell.squared(i)).collect();
    sq.sort_by(|a, b| a.partial_cmp(b).unwrap()); // ascending

    let mut lambdas = Vec::with_capacity(n);
    for j in 0..n {
        let hi = sq[j];
        let mut lo = if j == 0 {
            // extend downward until f < 0 (f(−∞) = −∞)
            let mut lo = sq[0] - sq[n - 1].max(1.0);
            let mut width = sq[n - 1].max(1.0);
            while confocal_fn(ell, p, lo) >= 0.0 {
                width *= 2.0;
                lo -= width;
                if !lo.is_finite() {
                    return Err(Error::DegenerateConfocalConfiguration);
                }
            }
            lo
        } else {
            sq[j - 1]
        };
        let mut hi = hi;
        let f_lo = confocal_fn(ell, p, lo);
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            let f_mid = confocal_fn(ell, p, mid);
            if (f_mid >= 0.0) == (f_lo >= 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lambdas.push(0.5 * (lo + hi));
    }
    Ok(ConfocalTriple {
        base: ell.clone(),
        point: p.clone(),
        lambdas,
    })
}

/// Coordinate recovery from the signed-square table:
/// xᵢ² = Πⱼ(aᵢ²−λʲ) / Π_{j≠i}(aᵢ²−aⱼ²). Returns the squares.
pub fn recover_coordinates(t: &ConfocalTriple) -> Result<Vec<f64>> {
    let n = t.dim();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let num: f64 = (0..n).map(|j| t.signed_sq(i, j)).product();
        let den: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| t.base.squared(i) - t.base.squared(j))
            .product();
        if den == 0.0 {
            return Err(Error::DegenerateConfocalConfiguration);
        }
        out.push(num / den);
    }
    Ok(out)
}

/// Coordinate magnitudes |xᵢ| from the signed-square products.
pub fn recover_magnitudes(t: &ConfocalTriple) -> Result<Vec<f64>> {
    Ok(recover_coordinates(t)?
        .into_iter()
        .map(|sq| sq.max(0.0).sqrt())
        .collect())
}

/// Both sides of the norm identity |x|² = Σⱼ (aⱼʲ)².
pub fn norm_square_identity(t: &ConfocalTriple) -> (f64, f64) {
    let lhs = t.point.dot(&t.point);
    let rhs: f64 = (0..t.dim()).map(|j| t.signed_sq(j, j)).sum();
    (lhs, rhs)
}

/// Orthogonality residual of the confocals j and k at the point:
/// ((a₁ᵏ)² − (a₁ʲ)²) Σᵢ xᵢ²/((aᵢʲ)²(aᵢᵏ)²); ≈ 0 for j ≠ k.
pub fn orthogonality_residual(t: &ConfocalTriple, j: usize, k: usize) -> f64 {
    let s: f64 = (0..t.dim())
        .map(|i| t.point[i] * t.point[i] / (t.signed_sq(i, j) * t.signed_sq(i, k)))
        .sum();
    (t.signed_sq(0, k) - t.signed_sq(0, j)) * s
}

/// Pole of the hyperplane ⟨h, x⟩ = 1 with respect to the ellipsoid:
/// ξᵢ = hᵢ aᵢ².
pub fn pole(h: &VecN, ell: &Ellipsoid) -> Result<VecN> {
    if h.norm() == 0.0 || !h.is_finite() {
        return Err(Error::InvalidMatrix);
    }
    Ok(VecN(
        (0..ell.dim()).map(|i| h[i] * ell.squared(i)).collect(),
    ))
}

/// Signed squared support distances (pʲ)² of the tangent hyperplanes at
/// the point, via the product formula
/// (pʲ)² = Πᵢ(aᵢʲ)² / Π_{k≠j}((a₁ʲ)² − (a₁ᵏ)²).
pub fn support_distances(t: &ConfocalTriple) -> Vec<f64> {
    let n = t.dim();
    (0..n)
        .map(|j| {
            let num: f64 = (0..n).map(|i| t.signed_sq(i, j)).product();
            let den: f64 = (0..n)
                .filter(|&k| k != j)
                .map(|k| t.signed_sq(0, j) - t.signed_sq(0, k))
                .product();
            num / den
        })
        .collect()
}

/// (pʲ)² through the normal-vector route: 1/(pʲ)² = Σᵢ xᵢ²/(aᵢʲ)⁴.
/// Independent of [`support_distances`]; the two must agree.
pub fn support_distance_via_normal(t: &ConfocalTriple, j: usize) -> f64 {
    let s: f64 = (0..t.dim())
        .map(|i| {
            let d = t.signed_sq(i, j);
            t.point[i] * t.point[i] / (d * d)
        })
        .sum();
    1.0 / s
}

/// The confocal system dual to the base system, centred at the point:
/// principal directions are the n tangent-plane normals, and the k-th
/// dual quadric carries the signed squared axes {aₖ² − λʲ}ⱼ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualSystem {
    pub center: VecN,
    /// Columns: unit normals u₁ … uₙ of the confocals at the centre.
    pub frame: MatN,
    /// `axes_sq[k][j]` = aₖ² − λʲ.
    pub axes_sq: Vec<Vec<f64>>,
}

pub fn dual_system(t: &ConfocalTriple) -> DualSystem {
    let n = t.dim();
    let frame = MatN::from_columns(&(0..n).map(|j| t.unit_normal(j)).collect::<Vec<_>>());
    let axes_sq = (0..n)
        .map(|k| (0..n).map(|j| t.base.squared(k) - t.lambdas[j]).collect())
        .collect();
    DualSystem {
        center: t.point.clone(),
        frame,
        axes_sq,
    }
}

impl DualSystem {
    /// Residual of the k-th dual quadric equation at a world point
    /// (Σⱼ ⟨y−c, uⱼ⟩²/(aₖʲ)² − 1); the origin must lie on every one.
    pub fn quadric_residual(&self, k: usize, y: &VecN) -> f64 {
        let rel = y.sub(&self.center);
        let n = self.center.dim();
        let s: f64 = (0..n)
            .map(|j| rel.dot(&self.frame.column(j)).powi(2) / self.axes_sq[k][j])
            .sum();
        s - 1.0
    }
}

// ── Conics in 3-space ───────────────────────────────────────────────────────

/// A central conic embedded in a plane of 3-space, described by signed
/// squared semi-axes (negative = hyperbolic axis).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignedConic {
    pub center: VecN,
    /// Unit, mutually orthogonal in-plane axis directions.
    pub axes: [VecN; 2],
    /// Signed squared semi-axes along `axes`; not both negative unless
    /// flagged imaginary.
    pub signed_sq: [f64; 2],
    pub imaginary: bool,
}

impl SignedConic {
    pub fn plane_normal(&self) -> VecN {
        self.axes[0].cross(&self.axes[1])
    }

    /// A real point of the conic for parameter `t`: cos/sin for an
    /// ellipse, ±cosh/sinh (branch picked by sign of cos t) for a
    /// hyperbola.
    pub fn sample(&self, t: f64) -> Result<VecN> {
        if self.imaginary {
            return Err(Error::ImaginaryConic);
        }
        let [s1, s2] = self.signed_sq;
        let (u, v) = if s1 > 0.0 && s2 > 0.0 {
            (s1.sqrt() * t.cos(), s2.sqrt() * t.sin())
        } else if s1 > 0.0 {
            let branch = if t.cos() >= 0.0 { 1.0 } else { -1.0 };
            (
                branch * s1.sqrt() * t.sin().cosh(),
                (-s2).sqrt() * t.sin().sinh(),
            )
        } else {
            let branch = if t.cos() >= 0.0 { 1.0 } else { -1.0 };
            (
                (-s1).sqrt() * t.sin().sinh(),
                branch * s2.sqrt() * t.sin().cosh(),
            )
        };
        Ok(self
            .center
            .add(&self.axes[0].scaled(u))
            .add(&self.axes[1].scaled(v)))
    }

    /// Residual of the in-plane conic equation at a world point.
    pub fn residual(&self, y: &VecN) -> f64 {
        let rel = y.sub(&self.center);
        let u = rel.dot(&self.axes[0]);
        let v = rel.dot(&self.axes[1]);
        u * u / self.signed_sq[0] + v * v / self.signed_sq[1] - 1.0
    }
}

/// The k-th focal conic of the confocal pencil of a 3-axis ellipsoid
/// (zero-based k). k = 2 is the focal ellipse in the plane x₃ = 0, k = 1
/// the focal hyperbola in x₂ = 0, and k = 0 carries no real points and is
/// returned with the imaginary flag.
pub fn focal_quadric(ell: &Ellipsoid, k: usize) -> Result<SignedConic> {
    ell.require_strict()?;
    if ell.dim() != 3 || k >= 3 {
        return Err(Error::InvalidEllipsoid);
    }
    let lam = ell.squared(k);
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let e = |i: usize| {
        let mut v = VecN::zeros(3);
        v[i] = 1.0;
        v
    };
    let axes = [e(others[0]), e(others[1])];
    let signed_sq = [ell.squared(others[0]) - lam, ell.squared(others[1]) - lam];
    let imaginary = signed_sq[0] < 0.0 && signed_sq[1] < 0.0;
    Ok(SignedConic {
        center: VecN::zeros(3),
        axes,
        signed_sq,
        imaginary,
    })
}

/// Squared semi-axes of the central section parallel to the tangent plane
/// at a surface point x: (ρ¹ⱼ)² = λʲ − λ¹ for j ≥ 2, ascending in j.
pub fn central_section_radii(ell: &Ellipsoid, x: &VecN) -> Result<Vec<f64>> {
    if ell.surface_residual(x).abs() > 1e-9 {
        return Err(Error::PointNotOnSurface);
    }
    let t = lambda_roots(ell, x)?;
    Ok((1..t.dim()).map(|j| t.lambdas[j] - t.lambdas[0]).collect())
}

/// Quadratic cone with the given apex: directions u through the apex with
/// uᵀKu = 0 are exactly the rays meeting the conic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeQuadric {
    pub apex: VecN,
    pub form: SymMatN,
}

/// Cone over a signed conic from an apex, built by eliminating the
/// ray/plane intersection parameter and clearing all denominators:
/// K = s₂ g₁g₁ᵀ + s₁ g₂g₂ᵀ − s₁s₂ mmᵀ with gᵢ = ⟨w,eᵢ⟩m − ⟨w,m⟩eᵢ,
/// w the apex relative to the conic centre and m the plane normal.
pub fn focal_cone(apex: &VecN, conic: &SignedConic) -> Result<ConeQuadric> {
    if conic.imaginary {
        return Err(Error::ImaginaryConic);
    }
    let m = conic.plane_normal();
    let w = apex.sub(&conic.center);
    let wm = w.dot(&m);
    let scale = w.norm().max(conic.signed_sq[0].abs().sqrt());
    if wm.abs() <= 1e-12 * scale.max(1e-300) {
        return Err(Error::DegenerateCone);
    }
    let [s1, s2] = conic.signed_sq;
    let g1 = m
        .scaled(w.dot(&conic.axes[0]))
        .sub(&conic.axes[0].scaled(wm));
    let g2 = m
        .scaled(w.dot(&conic.axes[1]))
        .sub(&conic.axes[1].scaled(wm));
    let form = SymMatN::from_fn(3, |i, j| {
        s2 * g1[i] * g1[j] + s1 * g2[i] * g2[j] - s1 * s2 * m[i] * m[j]
    });
    Ok(ConeQuadric {
        apex: apex.clone(),
        form,
    })
}

/// Shared-axes report for the two real focal cones at an apex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeAxesReport {
    /// ‖K₂K₃ − K₃K₂‖ after normalising both forms to unit Frobenius norm.
    pub commutator_residual: f64,
    /// Columns: the common orthonormal axis frame l₁ l₂ l₃.
    pub frame: MatN,
    /// Largest off-diagonal entry of either form in the shared frame.
    pub diagonalization_residual: f64,
    /// Eigenvalues of the two normalised forms in the shared frame.
    pub cone_eigenvalues: [Vec<f64>; 2],
}

/// Builds the cones over the focal ellipse and focal hyperbola at `apex`,
/// verifies they commute after normalisation, and extracts the shared
/// eigenframe. The apex must not be the centre (the conics are centred
/// there and every cone degenerates).
pub fn cone_axes_check(apex: &VecN, ell: &Ellipsoid) -> Result<ConeAxesReport> {
    if apex.norm() == 0.0 {
        return Err(Error::DegenerateCone);
    }
    let ellipse = focal_quadric(ell, 2)?;
    let hyperbola = focal_quadric(ell, 1)?;
    let ke = focal_cone(apex, &ellipse)?;
    let kh = focal_cone(apex, &hyperbola)?;
    shared_cone_frame(&ke.form, &kh.form)
}

/// Shared eigenframe of two commuting symmetric forms.
pub fn shared_cone_frame(ka: &SymMatN, kb: &SymMatN) -> Result<ConeAxesReport> {
    let na = ka.frobenius();
    let nb = kb.frobenius();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::DegenerateCone);
    }
    let a = ka.scaled(1.0 / na);
    let b = kb.scaled(1.0 / nb);
    let commutator_residual = a.commutator_norm(&b);

    // a generic combination has simple spectrum unless the forms share a
    // degenerate subspace, in which case any frame of it works; verify by
    // the diagonalisation residual and retry with another weight if needed
    let mut best: Option<(f64, MatN)> = None;
    for w in [0.381_966_011_250_105, 0.707, 0.111] {
        let combo = a.add(&b.scaled(w));
        let (_, frame) = sym_eigen(&combo)?;
        let res = offdiag_residual(&a, &frame).max(offdiag_residual(&b, &frame));
        if best.as_ref().is_none_or(|(r, _)| res < *r) {
            best = Some((res, frame));
        }
        if best.as_ref().unwrap().0 < 1e-12 {
            break;
        }
    }
    let (diagonalization_residual, frame) = best.unwrap();
    let eigs = |k: &SymMatN| -> Vec<f64> {
        (0..3)
            .map(|i| {
                let c = frame.column(i);
                c.dot(&k.mul_vec(&c))
            })
            .collect()
    };
    Ok(ConeAxesReport {
        commutator_residual,
        cone_eigenvalues: [eigs(&a), eigs(&b)],
        frame,
        diagonalization_residual,
    })
}

fn offdiag_residual(k: &SymMatN, frame: &MatN) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let ci = frame.column(i);
            let cj = frame.column(j);
            worst = worst.max(ci.dot(&k.mul_vec(&cj)).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ell321() -> Ellipsoid {
        Ellipsoid::new(vec![3.0, 2.0, 1.0]).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng) -> VecN {
        VecN(vec![
            rng.gen_range(0.2..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            rng.gen_range(0.2..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            rng.gen_range(0.2..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
        ])
    }

    #[test]
    fn lambda_roots_unit_point() {
        // frozen cubic: f(λ) = λ³ − 11λ² + 21λ + 13 for p=(1,1,1), (3,2,1)
        let t = lambda_roots(&ell321(), &VecN::from_slice(&[1.0, 1.0, 1.0])).unwrap();
        let expected = [
            -0.4884991804756804,
            3.217_536_127_973_134,
            8.270_963_052_502_546,
        ];
        for (got, want) in t.lambdas.iter().zip(expected) {
            assert_relative_eq!(*got, want, epsilon = 1e-10);
        }
        assert!(t.interlacing_ok());
        // brackets (−∞,1), (1,4), (4,9)
        assert!(t.lambdas[0] < 1.0);
        assert!(t.lambdas[1] > 1.0 && t.lambdas[1] < 4.0);
        assert!(t.lambdas[2] > 4.0 && t.lambdas[2] < 9.0);
    }

    #[test]
    fn lambda_zero_on_surface() {
        let ell = ell321();
        let mut p = VecN::from_slice(&[1.0, 1.0, 1.0]);
        let s = (p.dot(&p) / 3.0).sqrt(); // not on surface yet
        let _ = s;
        // scale p onto the surface
        let norm = (0..3)
            .map(|i| p[i] * p[i] / ell.squared(i))
            .sum::<f64>()
            .sqrt();
        p = p.scaled(1.0 / norm);
        let t = lambda_roots(&ell, &p).unwrap();
        assert!(t.lambdas[0].abs() < 1e-9, "λ¹ = {}", t.lambdas[0]);
    }

    #[test]
    fn zero_coordinate_rejected() {
        assert_eq!(
            lambda_roots(&ell321(), &VecN::from_slice(&[1.0, 0.0, 1.0])).unwrap_err(),
            Error::PointOnCoordinateHyperplane
        );
    }

    #[test]
    fn non_strict_rejected() {
        let ell = Ellipsoid::new(vec![2.0, 2.0, 1.0]).unwrap();
        assert_eq!(
            lambda_roots(&ell, &VecN::from_slice(&[1.0, 1.0, 1.0])).unwrap_err(),
            Error::NonStrictEllipsoid
        );
    }

    #[test]
    fn coordinate_roundtrip_unit_point() {
        let t = lambda_roots(&ell321(), &VecN::from_slice(&[1.0, 1.0, 1.0])).unwrap();
        for sq in recover_coordinates(&t).unwrap() {
            assert_relative_eq!(sq, 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn identities_random_points() {
        let ell = ell321();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let t = lambda_roots(&ell, &p).unwrap();
            assert!(t.interlacing_ok());
            // coordinate recovery
            let sq = recover_coordinates(&t).unwrap();
            let mag = recover_magnitudes(&t).unwrap();
            for i in 0..3 {
                assert_relative_eq!(sq[i], p[i] * p[i], max_relative = 1e-9);
                assert_relative_eq!(mag[i], p[i].abs(), max_relative = 1e-9);
            }
            // norm-square identity
            let (lhs, rhs) = norm_square_identity(&t);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            // pairwise orthogonality
            for (j, k) in [(0, 1), (0, 2), (1, 2)] {
                assert!(orthogonality_residual(&t, j, k).abs() <= 1e-9);
            }
            // support distances: product formula vs normal-vector route
            let pj = support_distances(&t);
            for j in 0..3 {
                let other = support_distance_via_normal(&t, j);
                assert_relative_eq!(pj[j], other, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn two_dimensional_case() {
        let ell = Ellipsoid::new(vec![2.0, 1.0]).unwrap();
        // point on the ellipse with nonzero coordinates
        let t0: f64 = 0.8;
        let p = VecN::from_slice(&[2.0 * t0.cos(), t0.sin()]);
        let t = lambda_roots(&ell, &p).unwrap();
        assert!(t.lambdas[0].abs() < 1e-9);
        assert!(t.lambdas[1] > 1.0 && t.lambdas[1] < 4.0);
        let (lhs, rhs) = norm_square_identity(&t);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        assert!(orthogonality_residual(&t, 0, 1).abs() <= 1e-10);
    }

    #[test]
    fn pole_examples() {
        let ell = ell321();
        let xi = pole(&VecN::from_slice(&[1.0 / 9.0, 0.0, 0.0]), &ell).unwrap();
        assert_relative_eq!(xi[0], 1.0);
        let xi = pole(&VecN::from_slice(&[1.0 / 3.0, 0.0, 0.0]), &ell).unwrap();
        assert_relative_eq!(xi[0], 3.0);
        assert!(ell.surface_residual(&xi).abs() < 1e-12);
        // conjugacy: for x in the plane ⟨h,x⟩=1, xᵀA⁻²ξ = 1
        let h = VecN::from_slice(&[0.3, -0.2, 0.5]);
        let xi = pole(&h, &ell).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            // sample x in the hyperplane
            let mut x = VecN(vec![
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                0.0,
            ]);
            x[2] = (1.0 - h[0] * x[0] - h[1] * x[1]) / h[2];
            let s: f64 = (0..3).map(|i| x[i] * xi[i] / ell.squared(i)).sum();
            assert_relative_eq!(s, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn duality_origin_on_dual_quadrics() {
        let ell = ell321();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let origin = VecN::zeros(3);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let t = lambda_roots(&ell, &p).unwrap();
            let dual = dual_system(&t);
            // frame orthonormal
            let ftf = dual.frame.transpose().mul_mat(&dual.frame);
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ftf[(i, j)] - want).abs() < 1e-10);
                }
            }
            for k in 0..3 {
                assert!(
                    dual.quadric_residual(k, &origin).abs() <= 1e-9,
                    "dual quadric {k} misses origin"
                );
            }
        }
    }

    #[test]
    fn focal_conics_of_321() {
        let ell = ell321();
        let fe = focal_quadric(&ell, 2).unwrap();
        assert_relative_eq!(fe.signed_sq[0], 8.0);
        assert_relative_eq!(fe.signed_sq[1], 3.0);
        assert!(!fe.imaginary);
        let fh = focal_quadric(&ell, 1).unwrap();
        assert_relative_eq!(fh.signed_sq[0], 5.0);
        assert_relative_eq!(fh.signed_sq[1], -3.0);
        assert!(!fh.imaginary);
        let fi = focal_quadric(&ell, 0).unwrap();
        assert!(fi.imaginary);
    }

    #[test]
    fn central_section_vertex_and_random() {
        let ell = ell321();
        // near-vertex surface point (exact vertex has zero coordinates)
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let mut p = random_point(&mut rng);
            let norm = (0..3)
                .map(|i| p[i] * p[i] / ell.squared(i))
                .sum::<f64>()
                .sqrt();
            p = p.scaled(1.0 / norm);
            let rho = central_section_radii(&ell, &p).unwrap();
            // cross-check: section of the ellipsoid by the central plane
            // normal to n(x), via the 2×2 restricted quadric
            let nx = VecN((0..3).map(|i| p[i] / ell.squared(i)).collect());
            let n_unit = nx.scaled(1.0 / nx.norm());
            let seed = if n_unit[0].abs() < 0.9 {
                VecN::from_slice(&[1.0, 0.0, 0.0])
            } else {
                VecN::from_slice(&[0.0, 1.0, 0.0])
            };
            let t1 = seed
                .sub(&n_unit.scaled(n_unit.dot(&seed)))
                .normalized()
                .unwrap();
            let t2 = n_unit.cross(&t1);
            let minv = SymMatN::from_fn(3, |i, j| if i == j { 1.0 / ell.squared(i) } else { 0.0 });
            let b = SymMatN::from_fn(2, |i, j| {
                let u = if i == 0 { &t1 } else { &t2 };
                let v = if j == 0 { &t1 } else { &t2 };
                u.dot(&minv.mul_vec(v))
            });
            let (vals, _) = sym_eigen(&b).unwrap();
            let mut direct = [1.0 / vals[0], 1.0 / vals[1]];
            direct.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut got = rho.clone();
            got.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_relative_eq!(got[0], direct[0], max_relative = 1e-9);
            assert_relative_eq!(got[1], direct[1], max_relative = 1e-9);
        }
    }

    #[test]
    fn off_surface_point_rejected_for_sections() {
        let ell = ell321();
        assert_eq!(
            central_section_radii(&ell, &VecN::from_slice(&[1.0, 1.0, 1.0])).unwrap_err(),
            Error::PointNotOnSurface
        );
    }

    #[test]
    fn cone_over_ellipse_symmetric_apex() {
        // apex on the conic's axis over an ellipse: right elliptic cone,
        // K diagonal in the natural frame
        let conic = SignedConic {
            center: VecN::zeros(3),
            axes: [
                VecN::from_slice(&[1.0, 0.0, 0.0]),
                VecN::from_slice(&[0.0, 1.0, 0.0]),
            ],
            signed_sq: [4.0, 1.0],
            imaginary: false,
        };
        let apex = VecN::from_slice(&[0.0, 0.0, 2.0]);
        let k = focal_cone(&apex, &conic).unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(k.form.get(i, j).abs() < 1e-12);
            }
        }
        // the ray towards the ellipse vertex lies on the cone
        let d = VecN::from_slice(&[2.0, 0.0, -2.0]);
        assert!(k.form.quad_form(&d).abs() < 1e-10 * k.form.frobenius());
    }

    #[test]
    fn cone_from_origin_through_focal_ellipse_vertex() {
        let ell = ell321();
        let fe = focal_quadric(&ell, 2).unwrap();
        let apex = VecN::from_slice(&[0.1, 0.2, 0.5]);
        let k = focal_cone(&apex, &fe).unwrap();
        // direction from apex to the conic vertex (√8, 0, 0)
        let d = VecN::from_slice(&[8.0f64.sqrt(), 0.0, 0.0]).sub(&apex);
        assert!(k.form.quad_form(&d).abs() <= 1e-9 * k.form.frobenius() * d.dot(&d));
    }

    #[test]
    fn cone_sampling_residuals() {
        let ell = ell321();
        let fe = focal_quadric(&ell, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let apex = random_point(&mut rng);
        let k = focal_cone(&apex, &fe).unwrap();
        for i in 0..20 {
            let t = i as f64 * 0.31;
            let pt = fe.sample(t).unwrap();
            let d = pt.sub(&apex);
            let res = k.form.quad_form(&d) / (k.form.frobenius() * d.dot(&d));
            assert!(res.abs() <= 1e-9, "sample {i}: residual {res}");
        }
    }

    #[test]
    fn apex_in_conic_plane_is_degenerate() {
        let ell = ell321();
        let fe = focal_quadric(&ell, 2).unwrap();
        let apex = VecN::from_slice(&[0.5, 0.7, 0.0]); // in the x₃=0 plane
        assert_eq!(focal_cone(&apex, &fe).unwrap_err(), Error::DegenerateCone);
    }

    #[test]
    fn cone_axes_shared_frame() {
        let ell = ell321();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let apex = random_point(&mut rng);
            let report = cone_axes_check(&apex, &ell).unwrap();
            assert!(report.commutator_residual <= 1e-8);
            assert!(report.diagonalization_residual <= 1e-8);
            // frame agrees with the confocal normals at the apex
            let t = lambda_roots(&ell, &apex).unwrap();
            for j in 0..3 {
                let nj = t.unit_normal(j);
                let best = (0..3)
                    .map(|k| nj.dot(&report.frame.column(k)).abs())
                    .fold(0.0f64, f64::max);
                assert!(best > 1.0 - 1e-7, "normal {j} not in shared frame");
            }
            // cone axis magnitudes: eigenvalues of K_k are
            // proportional to 1/(aₖⁱ)² in the shared frame
            for (slot, k_ell) in [(0usize, 2usize), (1, 1)] {
                let evs = &report.cone_eigenvalues[slot];
                // eigenvalues must be proportional to 1/(aₖⁱ)²; the common
                // factor may be negative (overall form orientation)
                let table: Vec<f64> = (0..3)
                    .map(|j| 1.0 / (ell.squared(k_ell) - t.lambdas[j]))
                    .collect();
                let mut es: Vec<f64> = evs.clone();
                let mut ts: Vec<f64> = table.clone();
                es.sort_by(|a, b| a.partial_cmp(b).unwrap());
                ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let matches = |scale: f64, flipped: bool| -> bool {
                    (0..3).all(|i| {
                        let want = scale * if flipped { ts[2 - i] } else { ts[i] };
                        (es[i] - want).abs() <= 1e-6 * want.abs().max(1e-12)
                    })
                };
                let aligned = matches(es[2] / ts[2], false) || matches(es[0] / ts[2], true);
                assert!(
                    aligned,
                    "cone eigenvalues not proportional to the axis table"
                );
            }
        }
    }

    #[test]
    fn cone_axes_rejects_origin_apex() {
        assert_eq!(
            cone_axes_check(&VecN::zeros(3), &ell321()).unwrap_err(),
            Error::DegenerateCone
        );
    }

    #[test]
    fn cone_axes_apex_on_principal_plane() {
        // apex with a zero first coordinate: the forms share a degenerate
        // eigenspace, and the frame extraction must still diagonalise both
        let apex = VecN::from_slice(&[0.0, 0.8, 0.5]);
        let report = cone_axes_check(&apex, &ell321()).unwrap();
        assert!(report.commutator_residual <= 1e-8);
        assert!(report.diagonalization_residual <= 1e-8);
    }
}
