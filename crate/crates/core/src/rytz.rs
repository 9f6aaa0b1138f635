//! Axis recovery for an ellipse from one conjugate semi-diameter pair,
//! via the two-circle normal construction, keeping the full point trace
//! for rendering.
//!
//! Given the pair (P, Q) at centre O: drop the perpendicular to OQ
//! through P and mark M, L on it at distance |OQ| from P (L the
//! reflection of M at P). The bisectors of the angle L-O-M are the axis
//! lines, and the parallels to them through P meet the line OM at T and
//! P′ whose distances from O are the semi-axis lengths.
//!
//! (The classical variant instead rotates Q by a quarter turn to Q⋆ and
//! works from the circle about the midpoint K of PQ⋆; M and L land on the
//! same normal line either way, so only the normal-line form is built.)

use serde::{Deserialize, Serialize};

use crate::conjugate::ConjugateSystem;
use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, VecN};

pub type Vec2 = [f64; 2];

fn dot2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm2(a: Vec2) -> f64 {
    dot2(a, a).sqrt()
}

fn cross2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn rot90(a: Vec2) -> Vec2 {
    [-a[1], a[0]]
}

fn unit2(a: Vec2) -> Vec2 {
    let n = norm2(a);
    [a[0] / n, a[1] / n]
}

fn add2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale2(a: Vec2, s: f64) -> Vec2 {
    [a[0] * s, a[1] * s]
}

/// Construction record: inputs, the auxiliary points M, L, T, P′, the axis
/// directions and the sorted axis lengths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RytzTrace {
    pub p: Vec2,
    pub q: Vec2,
    pub m: Vec2,
    pub l: Vec2,
    pub t: Vec2,
    pub p_prime: Vec2,
    /// Unit axis directions; `axis_dirs[0]` carries `axis_lengths.0`.
    pub axis_dirs: [Vec2; 2],
    /// (major, minor).
    pub axis_lengths: (f64, f64),
    /// Circle input (|P| = |Q|, P ⟂ Q): directions are arbitrary.
    pub degenerate_circle: bool,
    /// Input pair was already principal; bisector construction bypassed.
    pub principal_input: bool,
}

/// Axis directions and lengths of the ellipse determined by the conjugate
/// semi-diameter pair (P, Q), with the construction trace.
pub fn rytz_axes(p: Vec2, q: Vec2) -> Result<RytzTrace> {
    let scale = norm2(p).max(norm2(q));
    if scale == 0.0 || cross2(p, q).abs() <= 1e-12 * norm2(p) * norm2(q) {
        return Err(Error::DegenerateConjugatePair);
    }

    // Already-principal input: P ⟂ Q. The normal line through P is the
    // line OP itself, so M and L collapse onto it and the bisectors are
    // undefined; the pair already is the answer.
    if dot2(unit2(p), unit2(q)).abs() <= 1e-12 {
        let (lp, lq) = (norm2(p), norm2(q));
        let circle = (lp - lq).abs() <= 1e-12 * scale;
        let (d_major, d_minor, major, minor) = if lp >= lq {
            (unit2(p), unit2(q), lp, lq)
        } else {
            (unit2(q), unit2(p), lq, lp)
        };
        return Ok(RytzTrace {
            p,
            q,
            m: add2(p, rot90(q)),
            l: sub2(p, rot90(q)),
            t: scale2(d_minor, minor),
            p_prime: scale2(d_major, major),
            axis_dirs: [d_major, d_minor],
            axis_lengths: (major, minor),
            degenerate_circle: circle,
            principal_input: true,
        });
    }

    // M on the side of OQ rotated by +π/2 from P, L its reflection at P.
    let m = add2(p, rot90(q));
    let l = sub2(p, rot90(q));

    // Axis lines = bisectors of the angle L-O-M.
    let b1 = unit2(add2(unit2(m), unit2(l)));
    let b2 = rot90(b1);

    // T, P′: parallels to b1, b2 through P, cut by the line OM.
    // Solve s·M − t·b = P for each bisector b.
    let hit = |b: Vec2| -> Vec2 {
        let det = cross2(m, scale2(b, -1.0));
        let s = cross2(p, scale2(b, -1.0)) / det;
        scale2(m, s)
    };
    let t_pt = hit(b1);
    let p_prime = hit(b2);

    // |OP′| is the semi-axis along b1, |OT| the one along b2. The line
    // intersections lose digits when M or L is short, so the returned
    // lengths are snapped to the exact half-sum/half-difference of |OM|
    // and |OL| (the two-circle radii), which the intersections estimate.
    let (om, ol) = (norm2(m), norm2(l));
    let hi = 0.5 * (om + ol);
    let lo = 0.5 * (om - ol).abs();
    let est_b1 = norm2(p_prime);
    let len_b1 = if (est_b1 - hi).abs() <= (est_b1 - lo).abs() {
        hi
    } else {
        lo
    };
    let len_b2 = hi + lo - len_b1;
    let (axis_dirs, axis_lengths) = if len_b1 >= len_b2 {
        ([b1, b2], (len_b1, len_b2))
    } else {
        ([b2, b1], (len_b2, len_b1))
    };

    Ok(RytzTrace {
        p,
        q,
        m,
        l,
        t: t_pt,
        p_prime,
        axis_dirs,
        axis_lengths,
        degenerate_circle: false,
        principal_input: false,
    })
}

/// Express the two diameters xʲ, xᵏ of a 3D system in an orthonormal basis
/// of their span; they form a conjugate pair of the section ellipse cut by
/// that plane. Returns the pair and the plane basis.
pub fn section_ellipse(
    sys: &ConjugateSystem,
    j: usize,
    k: usize,
) -> Result<([Vec2; 2], [VecN; 2])> {
    let xj = sys.diameter(j);
    let xk = sys.diameter(k);
    let basis = orthonormalize(&[xj.clone(), xk.clone()])?;
    let pj = [basis[0].dot(&xj), basis[1].dot(&xj)];
    let pk = [basis[0].dot(&xk), basis[1].dot(&xk)];
    Ok(([pj, pk], [basis[0].clone(), basis[1].clone()]))
}
