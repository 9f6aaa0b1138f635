//! Dense polynomials with exact rational coefficients, the exhaustive
//! rational-root test, and quartic factorisation helpers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rat::{divisors, rat, rational_sqrt, Rat};
use crate::error::{Error, Result};

/// Dense polynomial over Q, coefficients ascending (`c[k]`·x^k), trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rat::zero());
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly {
            coeffs: vec![Rat::zero()],
        }
    }

    pub fn from_descending(c: &[Rat]) -> Self {
        Self::new(c.iter().rev().cloned().collect())
    }

    pub fn from_i64_descending(c: &[i64]) -> Self {
        Self::from_descending(
            &c.iter()
                .map(|&n| Rat::from_integer(BigInt::from(n)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> &Rat {
        self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        RatPoly::new(out)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, s: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Result<RatPoly> {
        if self.is_zero() {
            return Err(Error::DegeneratePolynomial);
        }
        let l = self.lead().clone();
        Ok(self.scale(&(Rat::one() / l)))
    }

    /// p(x + h) by repeated Horner shifts.
    pub fn taylor_shift(&self, h: &Rat) -> RatPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let add = c[j + 1].clone() * h;
                c[j] += add;
            }
        }
        RatPoly::new(c)
    }

    /// Synthetic division by (x − r); remainder must be zero.
    pub fn deflate(&self, r: &Rat) -> Result<RatPoly> {
        let mut out = vec![Rat::zero(); self.coeffs.len() - 1];
        let mut carry = Rat::zero();
        for i in (0..self.coeffs.len()).rev() {
            let v = &self.coeffs[i] + &carry;
            if i == 0 {
                if !v.is_zero() {
                    return Err(Error::InconsistentInput("not a root".into()));
                }
            } else {
                out[i - 1] = v.clone();
                carry = v * r;
            }
        }
        Ok(RatPoly::new(out))
    }

    /// Integer coefficients after clearing denominators (content kept).
    pub fn integer_cleared(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            let d = c.denom();
            lcm = num_integer::lcm(lcm, d.clone());
        }
        self.coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect()
    }

    /// Primitive integer coefficients: clears denominators and removes the
    /// content; the sign of the leading coefficient is preserved.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let ints = self.integer_cleared();
        let mut gcd = BigInt::zero();
        for v in &ints {
            gcd = num_integer::gcd(gcd, v.clone());
        }
        if gcd.is_zero() {
            return ints;
        }
        ints.into_iter().map(|v| v / &gcd).collect()
    }

    /// Display-friendly descending integer coefficients.
    pub fn primitive_integer_descending(&self) -> Vec<BigInt> {
        let mut v = self.primitive_integer();
        v.reverse();
        v
    }
}

impl std::fmt::Display for RatPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => {
                    if a.is_one() {
                        write!(f, "x")?
                    } else {
                        write!(f, "{a}·x")?
                    }
                }
                _ => {
                    if a.is_one() {
                        write!(f, "x^{i}")?
                    } else {
                        write!(f, "{a}·x^{i}")?
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// All rational roots of `p`, found by clearing denominators and testing
/// every ±(divisor of the constant)/(divisor of the leading coefficient)
/// pair exactly. Returns the roots sorted; also reports how many
/// candidates were evaluated (the exhaustiveness witness).
pub fn rational_root_test(p: &RatPoly) -> Result<(Vec<Rat>, usize)> {
    if p.is_zero() {
        return Err(Error::DegeneratePolynomial);
    }
    let ints = p.primitive_integer();
    // strip x^k | p: zero is a root
    let k = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = Vec::new();
    if k > 0 {
        roots.push(Rat::zero());
    }
    let body = &ints[k..];
    if body.len() <= 1 {
        roots.sort();
        return Ok((roots, 0));
    }
    let c0 = &body[0];
    let cl = body.last().unwrap();
    let nums = divisors(c0);
    let dens = divisors(cl);
    // float pre-screen: a candidate whose floating Horner value is far
    // outside the rounding envelope cannot be an exact root, so the
    // expensive exact evaluation only runs on the survivors
    let fc: Vec<f64> = body
        .iter()
        .map(|c| num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::INFINITY))
        .collect();
    let screen = |x: f64| -> bool {
        let mut val = 0.0f64;
        let mut mag = 0.0f64;
        for c in fc.iter().rev() {
            val = val * x + c;
            mag = mag * x.abs() + c.abs();
        }
        !(val.is_finite() && mag.is_finite()) || val.abs() <= 1e-9 * mag.max(1e-300)
    };
    let mut tested = 0usize;
    for m in &nums {
        for n in &dens {
            let m = BigInt::from(m.clone());
            let n = BigInt::from(n.clone());
            if !num_integer::gcd(m.clone(), n.clone()).is_one() {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = Rat::new(&m * BigInt::from(sign), n.clone());
                tested += 1;
                let approx = num_traits::ToPrimitive::to_f64(&cand).unwrap_or(f64::NAN);
                if approx.is_finite() && !screen(approx) {
                    continue;
                }
                let mut acc = Rat::zero();
                for c in body.iter().rev() {
                    acc = acc * &cand + Rat::from_integer(c.clone());
                }
                if acc.is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok((roots, tested))
}

/// Depressed form of a degree-4 polynomial: returns (p, q, r, shift) such
/// that substituting y = t − shift into the monic quartic gives
/// t⁴ + p t² + q t + r.
pub fn depressed_quartic(quartic: &RatPoly) -> Result<(Rat, Rat, Rat, Rat)> {
    if quartic.degree() != 4 {
        return Err(Error::UnsupportedQuarticShape("degree must be 4".into()));
    }
    let m = quartic.monic()?;
    let shift = &m.coeffs[3] / rat(4, 1);
    let dep = m.taylor_shift(&-shift.clone());
    debug_assert!(dep.coeffs[3].is_zero());
    Ok((
        dep.coeffs[2].clone(),
        dep.coeffs[1].clone(),
        dep.coeffs[0].clone(),
        shift,
    ))
}

/// Resolvent cubic z³ − pz² − 4rz + (4pr − q²) of the depressed quartic
/// t⁴ + pt² + qt + r; for an irreducible quartic the roots are
/// ruler-and-compass constructible exactly when this cubic has a rational
/// root.
pub fn resolvent_cubic(p: &Rat, q: &Rat, r: &Rat) -> RatPoly {
    RatPoly::new(vec![
        p * r * rat(4, 1) - q * q,
        r * rat(-4, 1),
        -p.clone(),
        Rat::one(),
    ])
}

/// Exact factorisation of a depressed monic quartic into two monic
/// rational quadratics (t² + ut + v)(t² − ut + w), if one exists.
///
/// u² must be a rational root of t³ + 2pt² + (p²−4r)t − q² that is the
/// square of a rational; the u = 0 (biquadratic) branch needs p² − 4r to
/// be a square. The coefficient-matching system is solved exactly, so the
/// search is complete without any enumeration bound.
pub fn quadratic_factor_split(p: &Rat, q: &Rat, r: &Rat) -> Result<Option<(RatPoly, RatPoly)>> {
    // u = 0 branch: t⁴ + pt² + r = (t² + v)(t² + w)
    if q.is_zero() {
        let disc = p * p - r * rat(4, 1);
        if let Some(s) = rational_sqrt(&disc) {
            let v = (p.clone() + &s) / rat(2, 1);
            let w = (p.clone() - &s) / rat(2, 1);
            return Ok(Some((
                RatPoly::new(vec![v, Rat::zero(), Rat::one()]),
                RatPoly::new(vec![w, Rat::zero(), Rat::one()]),
            )));
        }
    }
    let cubic = RatPoly::new(vec![
        -(q * q),
        p * p - r * rat(4, 1),
        p * rat(2, 1),
        Rat::one(),
    ]);
    let (roots, _) = rational_root_test(&cubic)?;
    for t0 in roots {
        if t0.is_negative() || t0.is_zero() {
            continue;
        }
        if let Some(u) = rational_sqrt(&t0) {
            let w = (p.clone() + &t0 + q / &u) / rat(2, 1);
            let v = (p.clone() + &t0 - q / &u) / rat(2, 1);
            let f1 = RatPoly::new(vec![v.clone(), u.clone(), Rat::one()]);
            let f2 = RatPoly::new(vec![w.clone(), -u.clone(), Rat::one()]);
            // verify exactly
            let prod = f1.mul(&f2);
            let target = RatPoly::new(vec![
                r.clone(),
                q.clone(),
                p.clone(),
                Rat::zero(),
                Rat::one(),
            ]);
            if prod == target {
                return Ok(Some((f1, f2)));
            }
        }
    }
    Ok(None)
}
