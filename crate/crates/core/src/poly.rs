//! Real polynomials up to degree 4 and their real roots.
//!
//! Roots are found by closed forms (stable quadratic, trigonometric /
//! Cardano cubic, Ferrari quartic via a resolvent cubic) and then polished
//! with a few guarded Newton steps; the ill-conditioned quartics near
//! double roots that the cone-intersection step produces are the reason
//! for the polish-and-merge policy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Merge threshold for root multiplicity detection, relative to root scale.
pub const MULTIPLICITY_MERGE: f64 = 1e-7;

/// Dense real polynomial, coefficients in ascending order (`c[k]` · x^k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPoly {
    pub coeffs: Vec<f64>,
}

/// A real root together with its detected multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: f64,
    pub multiplicity: usize,
}

impl RealPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        RealPoly { coeffs }
    }

    /// Coefficients given from the leading term down (c_k .. c_0).
    pub fn from_descending(c: &[f64]) -> Self {
        RealPoly {
            coeffs: c.iter().rev().copied().collect(),
        }
    }

    /// Degree after trimming numerically negligible leading coefficients.
    pub fn degree(&self) -> Option<usize> {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.abs() > 1e-14 * scale)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RealPoly {
        if self.coeffs.len() <= 1 {
            return RealPoly::new(vec![0.0]);
        }
        RealPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| (i as f64 + 1.0) * c)
                .collect(),
        )
    }

    /// Backward-error scale at x: Σ |c_i| |x|^i.
    pub fn residual_scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc: f64, c| acc * ax + c.abs())
            .max(f64::MIN_POSITIVE)
    }
}

/// All real roots of `p` (degree ≤ 4), sorted increasing, with roots closer
/// than `MULTIPLICITY_MERGE`·scale merged and flagged. When a bracket hint
/// is given only the roots inside it are returned.
pub fn real_roots(p: &RealPoly, bracket_hint: Option<(f64, f64)>, tol: f64) -> Result<Vec<Root>> {
    if tol <= 0.0 || !p.coeffs.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidMatrix);
    }
    let deg = p.degree().ok_or(Error::DegeneratePolynomial)?;
    if deg == 0 {
        // nonzero constant: no roots
        return Ok(Vec::new());
    }
    if deg > 4 {
        return Err(Error::UnsupportedQuarticShape(format!("degree {deg} > 4")));
    }
    let c = &p.coeffs[..=deg];
    let mut raw = match deg {
        1 => vec![-c[0] / c[1]],
        2 => quadratic_roots(c[2], c[1], c[0]),
        3 => cubic_roots(c[3], c[2], c[1], c[0]),
        4 => quartic_roots(c[4], c[3], c[2], c[1], c[0]),
        _ => unreachable!(),
    };

    // polish with up to 3 guarded Newton steps
    let dp = p.derivative();
    for r in raw.iter_mut() {
        for _ in 0..3 {
            let f = p.eval(*r);
            let d = dp.eval(*r);
            if d == 0.0 {
                break;
            }
            let step = f / d;
            if !step.is_finite() {
                break;
            }
            let next = *r - step;
            if p.eval(next).abs() <= f.abs() {
                *r = next;
            } else {
                break;
            }
        }
    }

    // double-root rescue: a multiple root is also a root of p′, where the
    // closed forms lose it to rounding far more easily than the
    // derivative does; stationary points with tiny residual are roots.
    if deg >= 2 {
        if let Some(dd) = dp.degree() {
            let dc = &dp.coeffs[..=dd];
            let crit = match dd {
                1 => vec![-dc[0] / dc[1]],
                2 => quadratic_roots(dc[2], dc[1], dc[0]),
                3 => cubic_roots(dc[3], dc[2], dc[1], dc[0]),
                _ => Vec::new(),
            };
            for c in crit {
                if p.eval(c).abs() <= 1e-11 * p.residual_scale(c)
                    && !raw
                        .iter()
                        .any(|r| (r - c).abs() <= MULTIPLICITY_MERGE * c.abs().max(1.0))
                {
                    raw.push(c);
                    raw.push(c); // counts double; merging flags it
                }
            }
        }
    }

    raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // residual acceptance
    raw.retain(|&r| p.eval(r).abs() <= tol.max(1e-9) * p.residual_scale(r));

    // merge near-coincident roots
    let scale = raw.iter().fold(1.0f64, |m, r| m.max(r.abs()));
    let mut merged: Vec<Root> = Vec::new();
    for r in raw {
        match merged.last_mut() {
            Some(last) if (r - last.value).abs() <= MULTIPLICITY_MERGE * scale => {
                // keep the average, bump multiplicity
                last.value =
                    (last.value * last.multiplicity as f64 + r) / (last.multiplicity + 1) as f64;
                last.multiplicity += 1;
            }
            _ => merged.push(Root {
                value: r,
                multiplicity: 1,
            }),
        }
    }

    if let Some((lo, hi)) = bracket_hint {
        merged.retain(|r| r.value >= lo && r.value <= hi);
    }
    Ok(merged)
}

/// Stable quadratic: avoids cancellation by computing the larger-magnitude
/// root first and the other via the product of roots.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        // b == 0 and disc == 0 → double root at 0, or c == 0
        if b == 0.0 {
            let r = (-c / a).max(0.0).sqrt();
            return if disc == 0.0 {
                vec![0.0, 0.0]
            } else {
                vec![-r, r]
            };
        }
        return vec![0.0, 0.0];
    }
    vec![q / a, c / q]
}

fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    // normalize, depress: x = t − b/(3a);  t³ + pt + q
    let b = b / a;
    let c = c / a;
    let d = d / a;
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let mut roots = depressed_cubic_roots(p, q);
    for r in roots.iter_mut() {
        *r -= shift;
    }
    roots
}

fn depressed_cubic_roots(p: f64, q: f64) -> Vec<f64> {
    if p == 0.0 && q == 0.0 {
        return vec![0.0];
    }
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    if disc > 0.0 {
        // three distinct real roots: trigonometric form (p < 0 here)
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    } else {
        // one real root (or borderline multiple): Cardano
        let half_q = q / 2.0;
        let s = (half_q * half_q + p * p * p / 27.0).max(0.0).sqrt();
        let u = (-half_q + s).cbrt();
        let v = (-half_q - s).cbrt();
        let r0 = u + v;
        if disc == 0.0 && (p != 0.0 || q != 0.0) {
            // double root alongside the simple one
            vec![r0, -r0 / 2.0, -r0 / 2.0]
        } else {
            vec![r0]
        }
    }
}

fn quartic_roots(a: f64, b: f64, c: f64, d: f64, e: f64) -> Vec<f64> {
    // depress: y = x + b/(4a);  y⁴ + p y² + q y + r
    let b = b / a;
    let c = c / a;
    let d = d / a;
    let e = e / a;
    let shift = b / 4.0;
    let b2 = b * b;
    let p = c - 3.0 * b2 / 8.0;
    let q = d - b * c / 2.0 + b2 * b / 8.0;
    let r = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;
    let mut roots = depressed_quartic_roots(p, q, r);
    for x in roots.iter_mut() {
        *x -= shift;
    }
    roots
}

/// Ferrari: split y⁴ + py² + qy + r into (y² + uy + v)(y² − uy + w) where
/// u² is a nonnegative root of the resolvent t³ + 2pt² + (p² − 4r)t − q².
fn depressed_quartic_roots(p: f64, q: f64, r: f64) -> Vec<f64> {
    let scale = p.abs().max(q.abs()).max(r.abs()).max(1.0);
    if q.abs() <= 1e-14 * scale {
        // biquadratic
        let mut out = Vec::new();
        for s in quadratic_roots(1.0, p, r) {
            if s > 0.0 {
                out.push(s.sqrt());
                out.push(-s.sqrt());
            } else if s >= -1e-13 * scale {
                out.push(0.0);
            }
        }
        return out;
    }
    let res = cubic_roots(1.0, 2.0 * p, p * p - 4.0 * r, -q * q);
    // the largest real resolvent root is ≥ 0 when real factorisation exists
    let u2 = res.into_iter().fold(f64::NEG_INFINITY, f64::max);
    if u2.is_nan() || u2 <= 0.0 {
        return Vec::new();
    }
    let u = u2.sqrt();
    let w = (p + u2 + q / u) / 2.0;
    let v = (p + u2 - q / u) / 2.0;
    let mut out = quadratic_roots(1.0, u, v);
    out.extend(quadratic_roots(1.0, -u, w));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simple_quadratic() {
        // y² − 1 → {−1, 1}
        let p = RealPoly::new(vec![-1.0, 0.0, 1.0]);
        let roots = real_roots(&p, None, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert_relative_eq!(roots[0].value, -1.0, epsilon = 1e-14);
        assert_relative_eq!(roots[1].value, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_poly_is_degenerate() {
        let p = RealPoly::new(vec![0.0, 0.0]);
        assert_eq!(
            real_roots(&p, None, 1e-12),
            Err(Error::DegeneratePolynomial)
        );
    }

    #[test]
    fn conic_intersection_quartic() {
        // 24y⁴ − 44y² + 4y + 1: four real roots, frozen from a bisection
        // scan over sign changes on [−2, 2].
        let p = RealPoly::from_descending(&[24.0, 0.0, -44.0, 4.0, 1.0]);
        let roots = real_roots(&p, None, 1e-12).unwrap();
        let expected = [
            -1.389849009381349,
            -0.112279652462027,
            0.206002674287472,
            1.296125987555904,
        ];
        assert_eq!(roots.len(), 4);
        for (r, e) in roots.iter().zip(expected) {
            assert_relative_eq!(r.value, e, epsilon = 1e-11);
            assert_eq!(r.multiplicity, 1);
        }
    }

    #[test]
    fn quadratic_special_case_instance() {
        // 3y² − 2y − 1 → {1, −1/3}; both satisfy αy²−βy−γ exactly
        let p = RealPoly::from_descending(&[3.0, -2.0, -1.0]);
        let roots = real_roots(&p, None, 1e-12).unwrap();
        assert_relative_eq!(roots[0].value, -1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(roots[1].value, 1.0, epsilon = 1e-14);
        for r in roots {
            assert!((3.0 * r.value * r.value - 2.0 * r.value - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn double_root_merged() {
        // (y−1)²(y+2)² = y⁴ + 2y³ − 3y² − 4y + 4
        let p = RealPoly::from_descending(&[1.0, 2.0, -3.0, -4.0, 4.0]);
        let roots = real_roots(&p, None, 1e-6).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].multiplicity, 2);
        assert_eq!(roots[1].multiplicity, 2);
        assert_relative_eq!(roots[0].value, -2.0, epsilon = 1e-6);
        assert_relative_eq!(roots[1].value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn bracket_hint_filters() {
        let p = RealPoly::new(vec![-1.0, 0.0, 1.0]); // roots ±1
        let roots = real_roots(&p, Some((0.0, 2.0)), 1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(roots[0].value, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cubic_three_roots() {
        // x³ − x = x(x−1)(x+1)
        let p = RealPoly::from_descending(&[1.0, 0.0, -1.0, 0.0]);
        let roots = real_roots(&p, None, 1e-12).unwrap();
        assert_eq!(roots.len(), 3);
        assert_relative_eq!(roots[0].value, -1.0, epsilon = 1e-13);
        assert_relative_eq!(roots[1].value, 0.0, epsilon = 1e-13);
        assert_relative_eq!(roots[2].value, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn planted_roots_recovered() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let mut rs: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // require separation so multiplicities don't trigger
            if rs.windows(2).any(|w| (w[1] - w[0]).abs() < 1e-4) {
                continue;
            }
            let lead = rng.gen_range(0.5..4.0);
            // expand lead·∏(x−rᵢ)
            let mut c = vec![lead];
            for r in &rs {
                let mut next = vec![0.0; c.len() + 1];
                for (i, &ci) in c.iter().enumerate() {
                    next[i] += -r * ci;
                    next[i + 1] += ci;
                }
                c = next;
            }
            let p = RealPoly::new(c);
            let roots = real_roots(&p, None, 1e-9).unwrap();
            assert_eq!(roots.len(), 4, "roots {rs:?}");
            for (got, want) in roots.iter().zip(&rs) {
                let denom = want.abs().max(1.0);
                assert!(
                    (got.value - want).abs() / denom <= 1e-9,
                    "planted {want} got {}",
                    got.value
                );
            }
        }
    }
}
