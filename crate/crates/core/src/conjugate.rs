//! Complete systems of conjugate semi-diameters: validation, the two
//! matrix invariants (sum of squares and spanned volume), random
//! generation, and the spectral ground truth for the axes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, MatN, SymMatN, VecN};

/// Central ellipsoid in canonical position, semi-axes sorted decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid {
    semi_axes: Vec<f64>,
    strict: bool,
}

impl Ellipsoid {
    pub fn new(semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.len() < 2
            || semi_axes.iter().any(|a| !a.is_finite() || *a <= 0.0)
            || semi_axes.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::InvalidEllipsoid);
        }
        let strict = semi_axes.windows(2).all(|w| w[0] > w[1]);
        Ok(Ellipsoid { semi_axes, strict })
    }

    pub fn dim(&self) -> usize {
        self.semi_axes.len()
    }

    pub fn semi_axes(&self) -> &[f64] {
        &self.semi_axes
    }

    pub fn semi_axis(&self, i: usize) -> f64 {
        self.semi_axes[i]
    }

    pub fn squared(&self, i: usize) -> f64 {
        self.semi_axes[i] * self.semi_axes[i]
    }

    /// Whether the axes are strictly decreasing (required for confocal work).
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn require_strict(&self) -> Result<()> {
        if self.strict {
            Ok(())
        } else {
            Err(Error::NonStrictEllipsoid)
        }
    }

    /// Residual of the surface equation Σ xᵢ²/aᵢ² − 1 at `p`.
    pub fn surface_residual(&self, p: &VecN) -> f64 {
        let s: f64 = (0..self.dim()).map(|i| p[i] * p[i] / self.squared(i)).sum();
        s - 1.0
    }
}

/// How an axes result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Oracle,
    Chasles,
}

/// Principal directions (orthonormal columns) with semi-axis lengths,
/// sorted decreasing. Directions are unoriented lines; they are
/// canonicalised so the largest-magnitude component of each is positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxesResult {
    pub directions: MatN,
    pub lengths: Vec<f64>,
    pub provenance: Provenance,
}

impl AxesResult {
    pub fn new(dirs: Vec<VecN>, lengths: Vec<f64>, provenance: Provenance) -> Self {
        let mut order: Vec<usize> = (0..lengths.len()).collect();
        order.sort_by(|&i, &j| lengths[j].partial_cmp(&lengths[i]).unwrap());
        let mut cols = Vec::with_capacity(dirs.len());
        let mut sorted_lengths = Vec::with_capacity(lengths.len());
        for &k in &order {
            let mut c = dirs[k].clone();
            let mut imax = 0;
            for i in 1..c.dim() {
                if c[i].abs() > c[imax].abs() {
                    imax = i;
                }
            }
            if c[imax] < 0.0 {
                c = c.scaled(-1.0);
            }
            cols.push(c);
            sorted_lengths.push(lengths[k]);
        }
        AxesResult {
            directions: MatN::from_columns(&cols),
            lengths: sorted_lengths,
            provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    /// Largest relative length error against `other` (indices aligned
    /// after both are sorted decreasing).
    pub fn max_length_rel_err(&self, other: &AxesResult) -> f64 {
        self.lengths
            .iter()
            .zip(&other.lengths)
            .map(|(a, b)| (a - b).abs() / b.abs().max(1e-300))
            .fold(0.0, f64::max)
    }

    /// Largest principal angle (radians) between matching axis lines.
    ///
    /// Axes whose lengths agree within `len_tol` (relative) are treated as
    /// a degenerate group and compared as subspaces, not as single lines.
    pub fn max_direction_angle(&self, other: &AxesResult, len_tol: f64) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut i = 0;
        while i < n {
            // group of near-equal lengths in self
            let mut j = i + 1;
            while j < n
                && (self.lengths[i] - self.lengths[j]).abs() <= len_tol * self.lengths[i].abs()
            {
                j += 1;
            }
            let cols_a: Vec<VecN> = (i..j).map(|k| self.directions.column(k)).collect();
            let cols_b: Vec<VecN> = (i..j).map(|k| other.directions.column(k)).collect();
            worst = worst.max(subspace_angle(&cols_a, &cols_b));
            i = j;
        }
        worst
    }
}

/// Largest principal angle between span(a) and span(b) (same dimension).
///
/// Computed through the rejection norms sin θ = ‖(I − P_b)aᵢ‖ rather than
/// arccos of inner products, which cannot resolve angles below ~1e-8.
fn subspace_angle(a: &[VecN], b: &[VecN]) -> f64 {
    let k = a.len();
    if k == 1 {
        let mut u = a[0].clone();
        if u.dot(&b[0]) < 0.0 {
            u = u.scaled(-1.0);
        }
        let rej = u.sub(&b[0].scaled(b[0].dot(&u)));
        return rej.norm().min(1.0).asin();
    }
    // R = A − B(BᵀA); sin θ_max = σ_max(R), via eigen of RᵀR (k ≤ 3)
    let r: Vec<VecN> = a
        .iter()
        .map(|ai| {
            let mut rej = ai.clone();
            for bj in b {
                rej = rej.sub(&bj.scaled(bj.dot(ai)));
            }
            rej
        })
        .collect();
    let rtr = SymMatN::from_fn(k, |i, j| r[i].dot(&r[j]));
    match sym_eigen(&rtr) {
        Ok((vals, _)) => vals[0].max(0.0).sqrt().min(1.0).asin(),
        Err(_) => std::f64::consts::FRAC_PI_2,
    }
}

/// n linearly independent semi-diameters, stored as the columns of X.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugateSystem {
    x: MatN,
}

impl ConjugateSystem {
    pub fn new(diameters: Vec<VecN>) -> Result<Self> {
        let n = diameters.len();
        if n < 2 || diameters.iter().any(|d| d.dim() != n || !d.is_finite()) {
            return Err(Error::InvalidMatrix);
        }
        let x = MatN::from_columns(&diameters);
        let scale: f64 = diameters.iter().map(|d| d.norm()).product();
        if x.det().abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::DegenerateConjugateSystem);
        }
        Ok(ConjugateSystem { x })
    }

    pub fn dim(&self) -> usize {
        self.x.n
    }

    pub fn diameter(&self, i: usize) -> VecN {
        self.x.column(i)
    }

    pub fn matrix(&self) -> &MatN {
        &self.x
    }

    /// XXᵀ, the Gram-like form whose eigen-structure carries the axes.
    pub fn gram(&self) -> SymMatN {
        SymMatN::from_general(&self.x.mul_mat(&self.x.transpose()))
    }
}

/// The quadric M = (XXᵀ)⁻¹ for which the diameters are conjugate:
/// (xⁱ)ᵀ M xʲ = δᵢⱼ.
pub fn implied_quadric(sys: &ConjugateSystem) -> Result<SymMatN> {
    let gram = sys.gram().to_full();
    let inv = gram
        .inverse()
        .map_err(|_| Error::DegenerateConjugateSystem)?;
    Ok(SymMatN::from_general(&inv))
}

/// Conjugacy residual Σ eᵢfᵢ/aᵢ² of two directions with respect to the
/// canonical ellipsoid; zero exactly when the directions are conjugate.
pub fn check_conjugacy(e: &VecN, f: &VecN, ell: &Ellipsoid) -> Result<f64> {
    if e.norm() == 0.0 || f.norm() == 0.0 {
        return Err(Error::InvalidMatrix);
    }
    Ok((0..ell.dim()).map(|i| e[i] * f[i] / ell.squared(i)).sum())
}

/// Σ ‖xⁱ‖²; constant (= Σ aᵢ²) over all complete conjugate systems.
pub fn sum_of_squares(sys: &ConjugateSystem) -> f64 {
    (0..sys.dim())
        .map(|i| sys.diameter(i).dot(&sys.diameter(i)))
        .sum()
}

/// det X; the spanned parallelepiped volume, constant (= ±Π aᵢ) over all
/// complete conjugate systems.
pub fn volume(sys: &ConjugateSystem) -> f64 {
    sys.x.det()
}

/// Haar-ish random orthogonal matrix from QR of a Gaussian sample.
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> MatN {
    loop {
        let cols: Vec<VecN> = (0..n)
            .map(|_| {
                VecN(
                    (0..n)
                        .map(|_| {
                            // Box-Muller
                            let u1: f64 = rng.gen_range(1e-12..1.0);
                            let u2: f64 = rng.gen_range(0.0..1.0);
                            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                        })
                        .collect(),
                )
            })
            .collect();
        if let Ok(q) = crate::linalg::orthonormalize(&cols) {
            return MatN::from_columns(&q);
        }
    }
}

/// Random complete conjugate system of the canonical ellipsoid: X = A·O
/// with O Haar-random orthogonal, so XᵀA⁻²X = I by construction.
pub fn random_system(ell: &Ellipsoid, seed: u64) -> ConjugateSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ell.dim();
    let o = random_orthogonal(n, &mut rng);
    let cols: Vec<VecN> = (0..n)
        .map(|j| {
            let mut c = o.column(j);
            for i in 0..n {
                c[i] *= ell.semi_axis(i);
            }
            c
        })
        .collect();
    ConjugateSystem::new(cols).expect("A·O is nonsingular")
}

/// Random conjugate system of a *rotated* copy of the ellipsoid:
/// X = Q·A·O. Returns the rotation so tests can predict the axes frame.
pub fn random_rotated_system(ell: &Ellipsoid, seed: u64) -> (ConjugateSystem, MatN) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ell.dim();
    let q = random_orthogonal(n, &mut rng);
    let o = random_orthogonal(n, &mut rng);
    let cols: Vec<VecN> = (0..n)
        .map(|j| {
            let mut c = o.column(j);
            for i in 0..n {
                c[i] *= ell.semi_axis(i);
            }
            q.mul_vec(&c)
        })
        .collect();
    (ConjugateSystem::new(cols).expect("Q·A·O is nonsingular"), q)
}

/// Random point with all coordinates bounded away from zero, for the
/// confocal identities (which assume nonzero coordinates).
pub fn random_nonzero_point(ell: &Ellipsoid, seed: u64) -> VecN {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VecN(
        (0..ell.dim())
            .map(|i| {
                let m = ell.semi_axis(i);
                rng.gen_range(0.1 * m..0.9 * m) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
            })
            .collect(),
    )
}

/// Ground truth for the axes: eigen-decomposition of XXᵀ. Lengths are the
/// square roots of the eigenvalues, directions the eigenvectors.
pub fn axes_oracle(sys: &ConjugateSystem) -> Result<AxesResult> {
    let (vals, vecs) = sym_eigen(&sys.gram())?;
    if vals.iter().any(|&v| v <= 0.0) {
        return Err(Error::DegenerateConjugateSystem);
    }
    let lengths: Vec<f64> = vals.iter().map(|v| v.sqrt()).collect();
    let dirs: Vec<VecN> = (0..sys.dim()).map(|k| vecs.column(k)).collect();
    Ok(AxesResult::new(dirs, lengths, Provenance::Oracle))
}
