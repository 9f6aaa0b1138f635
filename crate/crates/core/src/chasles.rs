//! The full 3D axis construction: frame at the distinguished diameter,
//! dual focal conics, central projection onto the hyperbola plane,
//! quartic intersection, the four common cone edges, the autopolar
//! diagonal triangle, and the intercept lengths.

use serde::{Deserialize, Serialize};

use crate::confocal::{focal_cone, shared_cone_frame, SignedConic};
use crate::conjugate::{AxesResult, ConjugateSystem, Provenance};
use crate::error::{Error, Result};
use crate::linalg::VecN;
use crate::poly::{real_roots, RealPoly};
use crate::rytz::{rytz_axes, section_ellipse};

/// Tolerance ladder for the pipeline; residual checks default to 1e-8,
/// orthogonality to 1e-10, degeneracy merging to 1e-7 of scale.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual acceptance for intersection points and cone membership.
    pub residual: f64,
    /// Orthogonality checks between frame vectors and diagonals.
    pub ortho: f64,
    /// Relative threshold below which configurations count as degenerate.
    pub degeneracy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-8,
            ortho: 1e-10,
            degeneracy: 1e-7,
        }
    }
}

/// Orthogonal frame at the distinguished diameter endpoint P: the surface
/// normal u₁ and the axis directions u₂ (minor), u₃ (major) of the
/// section ellipse cut by the plane of the other two diameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChaslesFrame {
    pub p: VecN,
    pub q: VecN,
    pub r: VecN,
    /// Unit normal at P (outward: ⟨P, u₁⟩ > 0).
    pub u1: VecN,
    /// Section minor-axis direction.
    pub u2: VecN,
    /// Section major-axis direction.
    pub u3: VecN,
    /// Section semi-axes, ρ₂ < ρ₃.
    pub rho2: f64,
    pub rho3: f64,
    /// Apex (the centre O) in frame coordinates relative to P.
    pub apex: [f64; 3],
    /// Which input diameter plays P.
    pub role: usize,
}

impl ChaslesFrame {
    /// x′ = a₁² − a₂² of the dual confocal system: ρ₂².
    pub fn param_a(&self) -> f64 {
        self.rho2 * self.rho2
    }

    /// b = a₂² − a₃² of the dual confocal system: ρ₃² − ρ₂².
    pub fn param_b(&self) -> f64 {
        self.rho3 * self.rho3 - self.rho2 * self.rho2
    }

    /// World point from frame coordinates (relative to P).
    pub fn to_world(&self, x: f64, y: f64, z: f64) -> VecN {
        self.p
            .add(&self.u1.scaled(x))
            .add(&self.u2.scaled(y))
            .add(&self.u3.scaled(z))
    }
}

/// Builds the frame with diameter `role` distinguished as P.
pub fn build_frame(sys: &ConjugateSystem, role: usize, tol: &Tolerances) -> Result<ChaslesFrame> {
    if sys.dim() != 3 {
        return Err(Error::InvalidMatrix);
    }
    let p = sys.diameter(role);
    let q = sys.diameter((role + 1) % 3);
    let r = sys.diameter((role + 2) % 3);

    let mut u1 = q.cross(&r).normalized().map_err(|e| e.at("build_frame"))?;
    if u1.dot(&p) < 0.0 {
        u1 = u1.scaled(-1.0);
    }

    let ([pj, pk], basis) = section_ellipse(sys, (role + 1) % 3, (role + 2) % 3)?;
    let tr = rytz_axes(pj, pk)?;
    // a rotationally symmetric section (ρ₂ = ρ₃) is accepted here; the
    // pipeline routes such frames to the in-plane branches, which cover
    // exactly the geometries that produce them
    let (rho3, rho2) = tr.axis_lengths;
    let lift = |d: [f64; 2]| basis[0].scaled(d[0]).add(&basis[1].scaled(d[1]));
    let mut u3 = lift(tr.axis_dirs[0]); // major
    let mut u2 = lift(tr.axis_dirs[1]); // minor

    // orient so the apex coordinates y′, z′ come out nonnegative
    let rel = p.scaled(-1.0); // O − P
    if rel.dot(&u2) < 0.0 {
        u2 = u2.scaled(-1.0);
    }
    if rel.dot(&u3) < 0.0 {
        u3 = u3.scaled(-1.0);
    }
    let apex = [rel.dot(&u1), rel.dot(&u2), rel.dot(&u3)];

    let frame = ChaslesFrame {
        p,
        q,
        r,
        u1,
        u2,
        u3,
        rho2,
        rho3,
        apex,
        role,
    };
    // the three frame lines must be mutually perpendicular
    let worst = frame
        .u1
        .dot(&frame.u2)
        .abs()
        .max(frame.u1.dot(&frame.u3).abs())
        .max(frame.u2.dot(&frame.u3).abs());
    if worst > tol.ortho {
        return Err(Error::Pipeline {
            step: "build_frame",
            source: Box::new(Error::DegenerateConjugateSystem),
        });
    }
    Ok(frame)
}

/// The focal conics of the dual confocal system centred at P: an ellipse
/// in the (u₁,u₂) plane with signed squares (ρ₃², ρ₃²−ρ₂²) and a
/// hyperbola in the (u₁,u₃) plane with (ρ₂², −(ρ₃²−ρ₂²)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualFocalConics {
    pub ellipse: SignedConic,
    pub hyperbola: SignedConic,
}

pub fn dual_focal_conics(frame: &ChaslesFrame) -> Result<DualFocalConics> {
    let (rho2, rho3) = (frame.rho2, frame.rho3);
    if !(rho3 > rho2 && rho2 > 0.0) {
        return Err(Error::DegenerateDuality);
    }
    let s = rho3 * rho3 - rho2 * rho2;
    let ellipse = SignedConic {
        center: frame.p.clone(),
        axes: [frame.u1.clone(), frame.u2.clone()],
        signed_sq: [rho3 * rho3, s],
        imaginary: false,
    };
    let hyperbola = SignedConic {
        center: frame.p.clone(),
        axes: [frame.u1.clone(), frame.u3.clone()],
        signed_sq: [rho2 * rho2, -s],
        imaginary: false,
    };
    Ok(DualFocalConics { ellipse, hyperbola })
}

/// Conic kind of the central projection of the focal ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Hyperbola,
}

/// General conic A x² + B xz + C z² + D x + E z + F = 0 in the hyperbola
/// plane, fitted through projected sample points of the focal ellipse.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectedConic {
    /// [A, B, C, D, E, F] in the (u₁, u₃) plane coordinates about P.
    pub coeffs: [f64; 6],
    pub kind: ConicKind,
    /// Worst scaled residual of the fit over the sample points.
    pub fit_residual: f64,
    /// Images of the minor-axis endpoints of the focal ellipse (absent
    /// when the projecting ray is parallel to the image plane).
    pub c_bar: Option<[f64; 2]>,
    pub d_bar: Option<[f64; 2]>,
    /// Endpoints of the image diameter conjugate to C̄D̄ (parallel to the
    /// fixed axis line), when that chord meets the image conic.
    pub e_bar: Option<[f64; 2]>,
    pub f_bar: Option<[f64; 2]>,
}

impl ProjectedConic {
    pub fn eval(&self, x: f64, z: f64) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        a * x * x + b * x * z + c * z * z + d * x + e * z + f
    }
}

/// Projects a point (xs, ys) of the dual focal ellipse (frame coordinates
/// in its plane) from the apex onto the hyperbola plane; None when the
/// ray is parallel to the image plane.
fn project_point(apex: [f64; 3], xs: f64, ys: f64) -> Option<[f64; 2]> {
    let [xp, yp, zp] = apex;
    let dy = yp - ys;
    if dy.abs() < 1e-12 * yp.abs().max(1.0) {
        return None;
    }
    let t = yp / dy;
    Some([xp + t * (xs - xp), zp - t * zp])
}

/// Central projection of the dual focal ellipse onto the hyperbola plane
/// as a fitted general conic, with the synthetic trace points C̄ D̄ Ē F̄.
pub fn project_focal_ellipse(frame: &ChaslesFrame, tol: &Tolerances) -> Result<ProjectedConic> {
    let [_, yp, _] = frame.apex;
    if yp.abs() < tol.degeneracy {
        return Err(Error::DegenerateCone.at("project_focal_ellipse"));
    }
    let (a, b) = (frame.param_a(), frame.param_b());
    let (ea, eb) = ((a + b).sqrt(), b.sqrt()); // focal-ellipse semi-axes

    // sample the ellipse, skipping rays parallel to the image plane
    let mut rows: Vec<[f64; 6]> = Vec::new();
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let n_samples = 24;
    for i in 0..n_samples {
        let t = std::f64::consts::TAU * (i as f64 + 0.37) / n_samples as f64;
        let (xs, ys) = (ea * t.cos(), eb * t.sin());
        if let Some([px, pz]) = project_point(frame.apex, xs, ys) {
            rows.push([px * px, px * pz, pz * pz, px, pz, 1.0]);
            pts.push([px, pz]);
        }
    }
    if rows.len() < 5 {
        return Err(Error::DegenerateCone.at("project_focal_ellipse"));
    }
    let coeffs = conic_nullspace(&rows)?;

    // fit residual, scaled per point
    let mut worst: f64 = 0.0;
    let cscale = coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
    for (row, pt) in rows.iter().zip(&pts) {
        let v: f64 = row.iter().zip(&coeffs).map(|(r, c)| r * c).sum();
        let scale: f64 = cscale * (1.0 + pt[0] * pt[0] + pt[1] * pt[1]);
        worst = worst.max(v.abs() / scale);
    }
    if worst > 1e-9 {
        return Err(Error::Pipeline {
            step: "project_focal_ellipse",
            source: Box::new(Error::InvalidMatrix),
        });
    }

    let disc = coeffs[1] * coeffs[1] - 4.0 * coeffs[0] * coeffs[2];
    let dscale = coeffs.iter().map(|c| c * c).sum::<f64>();
    let kind = if disc > 1e-10 * dscale {
        ConicKind::Hyperbola
    } else if disc < -1e-10 * dscale {
        ConicKind::Ellipse
    } else {
        ConicKind::Parabola
    };

    // synthetic annotations: images of the minor-axis endpoints C, D and
    // the conjugate image diameter ĒF̄ through the midpoint of C̄D̄,
    // parallel to the fixed axis line
    let c_bar = project_point(frame.apex, 0.0, eb);
    let d_bar = project_point(frame.apex, 0.0, -eb);
    let (e_bar, f_bar) = match (c_bar, d_bar) {
        (Some(c), Some(d)) => {
            let z = (c[1] + d[1]) / 2.0;
            let [ca, cb, cc, cd, ce, cf] = coeffs;
            let qa = ca;
            let qb = cb * z + cd;
            let qc = cc * z * z + ce * z + cf;
            let disc2 = qb * qb - 4.0 * qa * qc;
            if disc2 >= 0.0 && qa.abs() > 1e-14 {
                let s = disc2.sqrt();
                (
                    Some([(-qb - s) / (2.0 * qa), z]),
                    Some([(-qb + s) / (2.0 * qa), z]),
                )
            } else {
                (None, None)
            }
        }
        _ => (None, None),
    };

    Ok(ProjectedConic {
        coeffs,
        kind,
        fit_residual: worst,
        c_bar,
        d_bar,
        e_bar,
        f_bar,
    })
}

/// One-dimensional nullspace vector of the sample design matrix by
/// Gaussian elimination with full pivoting (rank 5 expected).
fn conic_nullspace(rows: &[[f64; 6]]) -> Result<[f64; 6]> {
    let m = rows.len();
    let mut a: Vec<[f64; 6]> = rows.to_vec();
    let mut col_perm: [usize; 6] = [0, 1, 2, 3, 4, 5];
    let mut rank = 0;
    for k in 0..5 {
        // find pivot over remaining rows/cols
        let (mut pi, mut pj, mut pv) = (k, k, 0.0f64);
        for i in k..m {
            for j in k..6 {
                if a[i][j].abs() > pv {
                    (pi, pj, pv) = (i, j, a[i][j].abs());
                }
            }
        }
        if pv < 1e-13 {
            break;
        }
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            col_perm.swap(k, pj);
        }
        for i in 0..m {
            if i == k {
                continue;
            }
            let f = a[i][k] / a[k][k];
            if f == 0.0 {
                continue;
            }
            for j in k..6 {
                a[i][j] -= f * a[k][j];
            }
        }
        rank += 1;
    }
    if rank < 5 {
        return Err(Error::InvalidMatrix);
    }
    // back-substitute with the free variable (permuted col 5) set to 1
    let mut x = [0.0f64; 6];
    x[5] = 1.0;
    for k in (0..5).rev() {
        let mut s = 0.0;
        for j in k + 1..6 {
            s += a[k][j] * x[j];
        }
        x[k] = -s / a[k][k];
    }
    let mut out = [0.0f64; 6];
    for k in 0..6 {
        out[col_perm[k]] = x[k];
    }
    // normalise
    let n = out.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in out.iter_mut() {
        *c /= n;
    }
    Ok(out)
}

/// The intersection quartic in the ellipse-plane ordinate y, assembled
/// from the frame parameters; coefficients are cross-validated against a
/// direct elimination of the projection system before use.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuarticInstance {
    pub a: f64,
    pub b: f64,
    pub x_apex: f64,
    pub y_apex: f64,
    pub z_apex: f64,
    /// α = ab − b x′² + (a+b) y′² + a z′².
    pub alpha: f64,
    /// β(x) = beta0 + beta1·x.
    pub beta0: f64,
    pub beta1: f64,
    /// γ = y′² b (the projection-equation constant before clearing; the
    /// quartic's constant term is γ²b²).
    pub gamma: f64,
    /// Degree-4 polynomial in y whose real roots give the intersections.
    pub quartic: RealPoly,
    /// Worst scaled mismatch between the assembled coefficients and the
    /// two-branch product of the eliminated projection equation, sampled
    /// at 10 ordinates.
    pub assembly_residual: f64,
}

/// Assembles the quartic for parameters (a, b, x′, y′, z′).
///
/// The elimination squares the projection equation once, so the quartic
/// is exactly the product of the two x-sign branches of
/// α y² − β(x) y − γb = 0; every root must be back-substituted.
pub fn quartic_instance(a: f64, b: f64, xp: f64, yp: f64, zp: f64) -> Result<QuarticInstance> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InconsistentInput("a, b must be positive".into()));
    }
    if yp == 0.0 {
        return Err(Error::InconsistentInput(
            "y' = 0 is handled by the in-plane special case".into(),
        ));
    }
    let alpha = a * b - b * xp * xp + (a + b) * yp * yp + a * zp * zp;
    let gamma = yp * yp * b;
    // product of the two sign branches of the eliminated equation, with
    // constant term γ·b = y′²b²:
    //   c₄ = α² + 4b x′²y′²(a+b)
    //   c₃ = −4αab y′
    //   c₂ = −2α y′²b² + 4a²b²y′² − 4x′²b²y′²(a+b)
    //   c₁ = 4ab³y′³
    //   c₀ = y′⁴b⁴
    let c4 = alpha * alpha + 4.0 * b * xp * xp * yp * yp * (a + b);
    let c3 = -4.0 * alpha * a * b * yp;
    let c2 = yp * yp * b * b * (-2.0 * alpha + 4.0 * a * a - 4.0 * xp * xp * (a + b));
    let c1 = 4.0 * a * b * b * b * yp * yp * yp;
    let c0 = yp * yp * yp * yp * b * b * b * b;
    let quartic = RealPoly::new(vec![c0, c1, c2, c3, c4]);

    let inst = QuarticInstance {
        a,
        b,
        x_apex: xp,
        y_apex: yp,
        z_apex: zp,
        alpha,
        beta0: 2.0 * yp * b * a,
        beta1: -2.0 * yp * b * xp,
        gamma,
        quartic,
        assembly_residual: 0.0,
    };
    let residual = inst.validate_against_elimination();
    Ok(QuarticInstance {
        assembly_residual: residual,
        ..inst
    })
}

impl QuarticInstance {
    /// Residuals of both projection-system equations at an ellipse point
    /// (x, y): (hyperbola equation of the image, ellipse membership).
    pub fn system_residuals(&self, x: f64, y: f64) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        let [xp, yp, zp] = [self.x_apex, self.y_apex, self.z_apex];
        let dy = yp - y;
        if dy == 0.0 {
            return (f64::INFINITY, f64::INFINITY);
        }
        let t = yp / dy;
        let u = xp + t * (x - xp);
        let w = zp - t * zp;
        let r1 = u * u / a - w * w / b - 1.0;
        let r2 = x * x / (a + b) + y * y / b - 1.0;
        (r1, r2)
    }

    /// Cross-validates the assembled coefficients against the two-branch
    /// product of the eliminated equation at 10 sample ordinates; returns
    /// the worst scaled mismatch.
    fn validate_against_elimination(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        let [xp, yp, _] = [self.x_apex, self.y_apex, self.z_apex];
        let gb = yp * yp * b * b;
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            let y = -1.3 + 0.29 * i as f64;
            // Σβ = 4ab y′, Πβ = 4y′²b(a²b − x′²(b−y²)(a+b))
            let sum_beta = 4.0 * a * b * yp;
            let prod_beta = 4.0 * yp * yp * b * (a * a * b - xp * xp * (b - y * y) * (a + b));
            let lhs = (self.alpha * y * y - gb) * (self.alpha * y * y - gb)
                - sum_beta * y * (self.alpha * y * y - gb)
                + prod_beta * y * y;
            let rhs = self.quartic.eval(y);
            let scale = self.quartic.residual_scale(y);
            worst = worst.max((lhs - rhs).abs() / scale);
        }
        worst
    }
}

/// Closed-form ordinates for the x′ = 0 branch, where β loses its
/// x-dependence and the quartic collapses to a repeated quadratic:
/// y = (ab y′ ± √(γb(a² + α)))/α.
pub fn special_case_x0(a: f64, b: f64, yp: f64, zp: f64) -> Result<[f64; 2]> {
    if !(a > 0.0 && b > 0.0) || yp == 0.0 {
        return Err(Error::InconsistentInput(
            "requires a, b > 0 and y' ≠ 0".into(),
        ));
    }
    let alpha = a * b + (a + b) * yp * yp + a * zp * zp;
    let gb = yp * yp * b * b; // γ·b
    let disc = gb * (a * a + alpha);
    let s = disc.sqrt();
    Ok([(a * b * yp - s) / alpha, (a * b * yp + s) / alpha])
}

/// Outcome of the y′ = 0 analysis: the apex lies in the hyperbola plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Y0Classification {
    pub alpha: f64,
    /// α = 0 exactly when the apex is on the focal hyperbola.
    pub on_hyperbola: bool,
    /// For the on-hyperbola case: frame coordinates of the two foci the
    /// edges join the apex to.
    pub foci: Option<[[f64; 3]; 2]>,
    /// Axis data in frame coordinates: direction and length pairs (the
    /// plane-normal axis plus the two in-plane confocal normals).
    pub axes: Vec<([f64; 3], f64)>,
}

/// Handles apexes in the hyperbola plane (y′ = 0). Tests the hyperbola
/// membership α = 0; either way the axes come from the in-plane confocal
/// pair through the apex (tangent and normal when on the hyperbola) plus
/// the plane normal itself.
pub fn special_case_y0(a: f64, b: f64, xp: f64, zp: f64) -> Result<Y0Classification> {
    // b = 0 (rotationally symmetric section) is admitted: the in-plane
    // family degenerates gracefully and covers the sphere-like inputs
    if !(a > 0.0 && b >= 0.0) {
        return Err(Error::InconsistentInput("requires a > 0 and b ≥ 0".into()));
    }
    let alpha = a * b - b * xp * xp + a * zp * zp;
    let scale = (a * b).max(b * xp * xp).max(a * zp * zp);
    let on_hyperbola = alpha.abs() <= 1e-12 * scale;

    let axes = in_plane_axes(a, b, xp, zp, alpha, PlaneCase::HyperbolaPlane)?;
    let foci = if on_hyperbola {
        let c = (a + b).sqrt();
        Some([[c, 0.0, 0.0], [-c, 0.0, 0.0]])
    } else {
        None
    };
    Ok(Y0Classification {
        alpha,
        on_hyperbola,
        foci,
        axes,
    })
}

enum PlaneCase {
    /// Apex in the (u₁,u₃) plane: y′ = 0.
    HyperbolaPlane,
    /// Apex in the (u₁,u₂) plane: z′ = 0.
    EllipsePlane,
}

/// Axes when the apex lies in one of the dual principal planes, from the
/// 2D confocal family through it: each member with shifted parameter τ
/// contributes the normal direction and the length √(a+τ); the plane
/// normal contributes the third axis.
fn in_plane_axes(
    a: f64,
    b: f64,
    xp: f64,
    inplane: f64,
    alpha_y0: f64,
    case: PlaneCase,
) -> Result<Vec<([f64; 3], f64)>> {
    let mut axes: Vec<([f64; 3], f64)> = Vec::new();
    let (tau_coeffs, normal_axis_len): (Vec<f64>, f64) = match case {
        PlaneCase::HyperbolaPlane => {
            // τ² + (a−b−x′²−z′²)τ − α = 0, members x′²/(a+τ) + z′²/(τ−b) = 1
            (
                vec![-alpha_y0, a - b - xp * xp - inplane * inplane, 1.0],
                a.sqrt(),
            )
        }
        PlaneCase::EllipsePlane => {
            // τ² + (a−x′²−y′²)τ − a y′² = 0, members x′²/(a+τ) + y′²/τ = 1
            (
                vec![-a * inplane * inplane, a - xp * xp - inplane * inplane, 1.0],
                (a + b).sqrt(),
            )
        }
    };
    // the plane-normal axis
    match case {
        PlaneCase::HyperbolaPlane => axes.push(([0.0, 1.0, 0.0], normal_axis_len)),
        PlaneCase::EllipsePlane => axes.push(([0.0, 0.0, 1.0], normal_axis_len)),
    }
    let poly = RealPoly::new(tau_coeffs);
    let roots = real_roots(&poly, None, 1e-10)?;
    if roots.iter().map(|r| r.multiplicity).sum::<usize>() < 2 {
        return Err(Error::DegenerateConfocalConfiguration);
    }
    let scale = a.abs().max(b.abs()).max(xp * xp).max(inplane * inplane);
    let mut taus: Vec<f64> = Vec::new();
    for r in &roots {
        for _ in 0..r.multiplicity {
            taus.push(r.value);
        }
    }
    for tau in taus.into_iter().take(2) {
        let len_sq = a + tau;
        if len_sq <= 0.0 {
            return Err(Error::DegenerateConfocalConfiguration);
        }
        let dir = match case {
            PlaneCase::HyperbolaPlane => {
                let d2 = tau - b;
                if d2.abs() <= 1e-10 * scale || inplane.abs() <= 1e-10 * scale.sqrt() {
                    // flat-member limit: normal along u₃
                    [0.0, 0.0, 1.0]
                } else {
                    let v = [xp / len_sq, 0.0, inplane / d2];
                    let n = (v[0] * v[0] + v[2] * v[2]).sqrt();
                    [v[0] / n, 0.0, v[2] / n]
                }
            }
            PlaneCase::EllipsePlane => {
                if tau.abs() <= 1e-10 * scale || inplane.abs() <= 1e-10 * scale.sqrt() {
                    [0.0, 1.0, 0.0]
                } else {
                    let v = [xp / len_sq, inplane / tau, 0.0];
                    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
                    [v[0] / n, v[1] / n, 0.0]
                }
            }
        };
        axes.push((dir, len_sq.sqrt()));
    }
    // deduplicate directions if the flat-member limit fired twice
    if axes.len() == 3 {
        let d1 = axes[1].0;
        let d2 = axes[2].0;
        let dot = d1[0] * d2[0] + d1[1] * d2[1] + d1[2] * d2[2];
        if dot.abs() > 1.0 - 1e-9 {
            // replace the second with the in-plane direction orthogonal
            // to the first
            let ortho = match case {
                PlaneCase::HyperbolaPlane => [-d1[2], 0.0, d1[0]],
                PlaneCase::EllipsePlane => [-d1[1], d1[0], 0.0],
            };
            axes[2].0 = ortho;
        }
    }
    Ok(axes)
}

/// Classification of the surviving common-edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeClass {
    FourReal,
    TwoReal,
    Degenerate,
}

/// The common edges of the two focal cones through the centre.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeSet {
    /// Unit direction of each edge (world coordinates, through O).
    pub dirs: Vec<VecN>,
    /// The generating focal-ellipse points (frame plane coordinates).
    pub ellipse_points: Vec<[f64; 2]>,
    pub class: EdgeClass,
    /// Worst residual of the surviving points in the projection system.
    pub worst_residual: f64,
    /// Roots rejected by back-substitution (squaring artefacts).
    pub rejected_roots: Vec<f64>,
}

/// Intersects the focal hyperbola with the projected ellipse by the
/// filtered quartic roots and lifts the survivors to edge directions.
pub fn common_edges(
    frame: &ChaslesFrame,
    inst: &QuarticInstance,
    conics: &DualFocalConics,
    tol: &Tolerances,
) -> Result<EdgeSet> {
    let roots = real_roots(&inst.quartic, None, 1e-9).map_err(|e| e.at("common_edges"))?;
    let (a, b) = (inst.a, inst.b);
    let mut dirs = Vec::new();
    let mut pts = Vec::new();
    let mut rejected = Vec::new();
    let mut worst: f64 = 0.0;

    let ke = focal_cone(&VecN::zeros(3), &conics.ellipse).map_err(|e| e.at("common_edges"))?;
    let kh = focal_cone(&VecN::zeros(3), &conics.hyperbola).map_err(|e| e.at("common_edges"))?;

    for root in &roots {
        let y = root.value;
        // the squaring step may have introduced this root: reject unless
        // a sign branch of x satisfies both equations
        if (y - inst.y_apex).abs() <= tol.degeneracy * inst.y_apex.abs().max(1.0) {
            rejected.push(y);
            continue;
        }
        let x_sq = (a + b) * (1.0 - y * y / b);
        if x_sq < -tol.residual * (a + b) {
            rejected.push(y);
            continue;
        }
        let mut accepted = false;
        for sign in [1.0, -1.0] {
            let x = sign * x_sq.max(0.0).sqrt();
            let (r1, r2) = inst.system_residuals(x, y);
            if r1.abs() <= tol.residual && r2.abs() <= tol.residual {
                let world = frame.to_world(x, y, 0.0);
                let dir = world.normalized().map_err(|e| e.at("common_edges"))?;
                // must annihilate both cone forms
                let re = ke.form.quad_form(&dir) / ke.form.frobenius();
                let rh = kh.form.quad_form(&dir) / kh.form.frobenius();
                if re.abs() <= tol.residual && rh.abs() <= tol.residual {
                    worst = worst
                        .max(r1.abs())
                        .max(r2.abs())
                        .max(re.abs())
                        .max(rh.abs());
                    dirs.push(dir);
                    pts.push([x, y]);
                    accepted = true;
                    break;
                }
            }
        }
        if !accepted {
            rejected.push(y);
        }
        // a tangency (double root) contributes a single edge, so the
        // class degrades through the final count on its own
    }

    let class = match dirs.len() {
        4 => EdgeClass::FourReal,
        2 | 3 => EdgeClass::TwoReal,
        _ => EdgeClass::Degenerate,
    };
    if dirs.is_empty() {
        return Err(Error::NoRealEdges { found: 0 });
    }
    Ok(EdgeSet {
        dirs,
        ellipse_points: pts,
        class,
        worst_residual: worst,
        rejected_roots: rejected,
    })
}

/// The three diagonal lines of the complete quadrilateral of four edge
/// directions: intersections of the three opposite plane pairs, pairwise
/// orthogonal and cross-validated against the shared cone eigenframe.
pub fn axes_from_edges(
    edges: &EdgeSet,
    conics: &DualFocalConics,
    tol: &Tolerances,
) -> Result<[VecN; 3]> {
    if edges.dirs.len() != 4 {
        return Err(Error::NoRealEdges {
            found: edges.dirs.len(),
        });
    }
    let e = &edges.dirs;
    let mut diags: Vec<VecN> = Vec::with_capacity(3);
    for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let n1 = e[i].cross(&e[j]);
        let n2 = e[k].cross(&e[l]);
        let d = n1
            .cross(&n2)
            .normalized()
            .map_err(|e| e.at("axes_from_edges"))?;
        diags.push(d);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if diags[i].dot(&diags[j]).abs() > 1e-8 {
                return Err(Error::Pipeline {
                    step: "axes_from_edges",
                    source: Box::new(Error::DegenerateConjugateSystem),
                });
            }
        }
    }
    // cross-validate against the shared eigenframe of the two cone forms
    let ke = focal_cone(&VecN::zeros(3), &conics.ellipse)?;
    let kh = focal_cone(&VecN::zeros(3), &conics.hyperbola)?;
    let report = shared_cone_frame(&ke.form, &kh.form)?;
    if report.commutator_residual > tol.residual {
        return Err(Error::Pipeline {
            step: "axes_from_edges",
            source: Box::new(Error::DegenerateCone),
        });
    }
    for d in &diags {
        let best = (0..3)
            .map(|k| d.dot(&report.frame.column(k)).abs())
            .fold(0.0f64, f64::max);
        if best < 1.0 - 1e-6 {
            return Err(Error::Pipeline {
                step: "axes_from_edges",
                source: Box::new(Error::DegenerateCone),
            });
        }
    }
    Ok([diags[0].clone(), diags[1].clone(), diags[2].clone()])
}

/// Intercept lengths: the plane through P orthogonal to each axis
/// direction cuts every edge at the matching semi-axis distance from O.
/// Returns (lengths aligned with `dirs`, worst relative spread over the
/// four edges).
pub fn axes_lengths(
    frame: &ChaslesFrame,
    dirs: &[VecN; 3],
    edges: &EdgeSet,
    tol: &Tolerances,
) -> Result<([f64; 3], f64)> {
    let mut lengths = [0.0f64; 3];
    let mut worst_spread: f64 = 0.0;
    for (k, dir) in dirs.iter().enumerate() {
        let offset = dir.dot(&frame.p);
        let mut cuts = Vec::new();
        for e in &edges.dirs {
            let denom = dir.dot(e);
            if denom.abs() > 1e-12 {
                cuts.push((offset / denom).abs());
            }
        }
        if cuts.is_empty() {
            return Err(Error::Pipeline {
                step: "axes_lengths",
                source: Box::new(Error::NoRealEdges { found: 0 }),
            });
        }
        let mean = cuts.iter().sum::<f64>() / cuts.len() as f64;
        let spread = cuts.iter().map(|c| (c - mean).abs()).fold(0.0, f64::max) / mean.max(1e-300);
        worst_spread = worst_spread.max(spread);
        if spread > 100.0 * tol.residual {
            return Err(Error::Pipeline {
                step: "axes_lengths",
                source: Box::new(Error::DegenerateConjugateSystem),
            });
        }
        lengths[k] = mean;
    }
    Ok((lengths, worst_spread))
}

/// Which branch produced the final axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PipelineBranch {
    /// Quartic intersection, four edges, diagonal triangle, intercepts.
    Generic,
    /// Apex in the hyperbola plane: in-plane confocal immediate solution.
    HyperbolaPlane,
    /// Apex in the ellipse plane: in-plane confocal immediate solution.
    EllipsePlane,
}

/// Full construction record for audit and rendering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChaslesTrace {
    pub frame: ChaslesFrame,
    pub branch: PipelineBranch,
    pub conics: Option<DualFocalConics>,
    pub projected: Option<ProjectedConic>,
    pub quartic: Option<QuarticInstance>,
    pub edges: Option<EdgeSet>,
    pub axis_dirs: Vec<VecN>,
    pub axis_lengths: Vec<f64>,
    /// Worst relative spread of the four intercept lengths per axis.
    pub intercept_spread: f64,
    /// Roles rejected before this frame was accepted.
    pub roles_tried: Vec<usize>,
    /// Set when the run needed a degraded branch or lost edges.
    pub degenerate: bool,
    pub y0_classification: Option<Y0Classification>,
}

/// Runs the whole construction on a conjugate system.
pub fn chasles_axes(sys: &ConjugateSystem) -> Result<(AxesResult, ChaslesTrace)> {
    chasles_axes_with(sys, &Tolerances::default())
}

pub fn chasles_axes_with(
    sys: &ConjugateSystem,
    tol: &Tolerances,
) -> Result<(AxesResult, ChaslesTrace)> {
    let mut roles_tried = Vec::new();
    let mut last_err: Option<Error> = None;

    // Prefer a role whose frame is fully generic; retry with the other
    // diameters distinguished before falling back to the special planes.
    let mut frames: Vec<ChaslesFrame> = Vec::new();
    for role in 0..3 {
        match build_frame(sys, role, tol) {
            Ok(f) => frames.push(f),
            Err(e) => {
                roles_tried.push(role);
                last_err = Some(e);
            }
        }
    }
    if frames.is_empty() {
        return Err(last_err
            .unwrap_or(Error::DegenerateConjugateSystem)
            .at("chasles_axes"));
    }

    let scale = sys
        .diameter(0)
        .norm()
        .max(sys.diameter(1).norm())
        .max(sys.diameter(2).norm());
    let genericity = |f: &ChaslesFrame| -> f64 {
        let [_, yp, zp] = f.apex;
        yp.abs().min(zp.abs()).min(f.rho3 - f.rho2) / scale
    };
    // most generic first
    let mut order: Vec<usize> = (0..frames.len()).collect();
    order.sort_by(|&i, &j| {
        genericity(&frames[j])
            .partial_cmp(&genericity(&frames[i]))
            .unwrap()
    });

    for &fi in &order {
        let frame = &frames[fi];
        if genericity(frame) > tol.degeneracy {
            match run_generic(sys, frame.clone(), tol) {
                Ok(mut out) => {
                    out.1.roles_tried = roles_tried.clone();
                    return Ok(out);
                }
                Err(e) => {
                    roles_tried.push(frame.role);
                    last_err = Some(e);
                }
            }
        }
    }
    // special branches on the least degenerate frame
    let frame = frames[order[0]].clone();
    let [_, yp, zp] = frame.apex;
    let branch = if yp.abs() / scale <= tol.degeneracy {
        PipelineBranch::HyperbolaPlane
    } else if zp.abs() / scale <= tol.degeneracy {
        PipelineBranch::EllipsePlane
    } else {
        return Err(last_err
            .unwrap_or(Error::DegenerateConjugateSystem)
            .at("chasles_axes"));
    };
    run_in_plane(sys, frame, branch, roles_tried, tol)
}

fn run_generic(
    _sys: &ConjugateSystem,
    frame: ChaslesFrame,
    tol: &Tolerances,
) -> Result<(AxesResult, ChaslesTrace)> {
    let conics = dual_focal_conics(&frame)?;
    let projected = project_focal_ellipse(&frame, tol)?;
    let [xp, yp, zp] = frame.apex;
    let inst = quartic_instance(frame.param_a(), frame.param_b(), xp, yp, zp)?;
    if inst.assembly_residual > 1e-10 {
        return Err(Error::Pipeline {
            step: "quartic_instance",
            source: Box::new(Error::InvalidMatrix),
        });
    }
    let edges = common_edges(&frame, &inst, &conics, tol)?;
    if edges.class != EdgeClass::FourReal {
        return Err(Error::NoRealEdges {
            found: edges.dirs.len(),
        }
        .at("common_edges"));
    }
    let dirs = axes_from_edges(&edges, &conics, tol)?;
    let (lengths, spread) = axes_lengths(&frame, &dirs, &edges, tol)?;

    let axes = AxesResult::new(dirs.to_vec(), lengths.to_vec(), Provenance::Chasles);
    let trace = ChaslesTrace {
        frame,
        branch: PipelineBranch::Generic,
        conics: Some(conics),
        projected: Some(projected),
        quartic: Some(inst),
        edges: Some(edges),
        axis_dirs: dirs.to_vec(),
        axis_lengths: lengths.to_vec(),
        intercept_spread: spread,
        roles_tried: Vec::new(),
        degenerate: false,
        y0_classification: None,
    };
    Ok((axes, trace))
}

fn run_in_plane(
    _sys: &ConjugateSystem,
    frame: ChaslesFrame,
    branch: PipelineBranch,
    roles_tried: Vec<usize>,
    tol: &Tolerances,
) -> Result<(AxesResult, ChaslesTrace)> {
    let (a, b) = (frame.param_a(), frame.param_b());
    let [xp, yp, zp] = frame.apex;
    let (axes_frame, y0_classification, edges) = match branch {
        PipelineBranch::HyperbolaPlane => {
            let cls = special_case_y0(a, b, xp, zp)?;
            let edges = cls.foci.as_ref().map(|foci| {
                let dirs: Vec<VecN> = foci
                    .iter()
                    .filter_map(|f| frame.to_world(f[0], f[1], f[2]).normalized().ok())
                    .collect();
                EdgeSet {
                    dirs,
                    ellipse_points: Vec::new(),
                    class: EdgeClass::TwoReal,
                    worst_residual: 0.0,
                    rejected_roots: Vec::new(),
                }
            });
            (cls.axes.clone(), Some(cls), edges)
        }
        PipelineBranch::EllipsePlane => {
            let axes = in_plane_axes(a, b, xp, yp, 0.0, PlaneCase::EllipsePlane)?;
            (axes, None, None)
        }
        PipelineBranch::Generic => unreachable!(),
    };
    let mut dirs = Vec::with_capacity(3);
    let mut lengths = Vec::with_capacity(3);
    for (d, l) in &axes_frame {
        dirs.push(
            frame
                .to_world(d[0], d[1], d[2])
                .sub(&frame.p)
                .normalized()?,
        );
        lengths.push(*l);
    }
    // orthogonality sanity
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            if dirs[i].dot(&dirs[j]).abs() > 100.0 * tol.ortho {
                return Err(Error::Pipeline {
                    step: "in_plane_axes",
                    source: Box::new(Error::DegenerateConfocalConfiguration),
                });
            }
        }
    }
    let axes = AxesResult::new(dirs.clone(), lengths.clone(), Provenance::Chasles);
    let conics = dual_focal_conics(&frame).ok();
    let trace = ChaslesTrace {
        frame,
        branch,
        conics,
        projected: None,
        quartic: None,
        edges,
        axis_dirs: dirs,
        axis_lengths: lengths,
        intercept_spread: 0.0,
        roles_tried,
        degenerate: false,
        y0_classification,
    };
    Ok((axes, trace))
}
