//! Arithmetic in the real quadratic field Q(√d) and the exact root search
//! for cubics over it.
//!
//! The root search writes a candidate root as λ + ν√d and derives the
//! rational-part / surd-part equations A(λ,ν) = B(λ,ν) = 0 symbolically,
//! then reduces each branch to exhaustive rational-root existence. A
//! Sylvester-resultant elimination covers cubics whose split does not
//! factor the convenient way.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{rational_sqrt, Rat};
use super::ratpoly::{rational_root_test, RatPoly};
use crate::error::{Error, Result};

/// λ + ν√d with exact rational components; d squarefree, d > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadFieldElem {
    pub d: i64,
    pub lam: Rat,
    pub nu: Rat,
}

impl QuadFieldElem {
    pub fn new(d: i64, lam: Rat, nu: Rat) -> Self {
        QuadFieldElem { d, lam, nu }
    }

    pub fn from_rat(d: i64, lam: Rat) -> Self {
        QuadFieldElem {
            d,
            lam,
            nu: Rat::zero(),
        }
    }

    pub fn zero(d: i64) -> Self {
        Self::from_rat(d, Rat::zero())
    }

    pub fn one(d: i64) -> Self {
        Self::from_rat(d, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.lam.is_zero() && self.nu.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.nu.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.d, &self.lam + &o.lam, &self.nu + &o.nu)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.d, &self.lam - &o.lam, &self.nu - &o.nu)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.d, -self.lam.clone(), -self.nu.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = Rat::from_integer(BigInt::from(self.d));
        Self::new(
            self.d,
            &self.lam * &o.lam + &d * &self.nu * &o.nu,
            &self.lam * &o.nu + &self.nu * &o.lam,
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.d, self.lam.clone(), -self.nu.clone())
    }

    /// Field norm λ² − dν².
    pub fn norm(&self) -> Rat {
        let d = Rat::from_integer(BigInt::from(self.d));
        &self.lam * &self.lam - d * &self.nu * &self.nu
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::InconsistentInput("division by zero in Q(√d)".into()));
        }
        let c = self.conj();
        Ok(Self::new(self.d, c.lam / &n, c.nu / n))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Approximate real value.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &Rat| {
            let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        };
        f(&self.lam) + f(&self.nu) * (self.d as f64).sqrt()
    }
}

impl std::fmt::Display for QuadFieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.nu.is_zero() {
            return write!(f, "{}", self.lam);
        }
        if self.lam.is_zero() {
            return write!(f, "{}·√{}", self.nu, self.d);
        }
        if self.nu.is_negative() {
            write!(f, "{} - {}·√{}", self.lam, -self.nu.clone(), self.d)
        } else {
            write!(f, "{} + {}·√{}", self.lam, self.nu, self.d)
        }
    }
}

/// Dense polynomial with coefficients in Q(√d), ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFPoly {
    pub d: i64,
    pub coeffs: Vec<QuadFieldElem>,
}

impl QFPoly {
    pub fn new(d: i64, mut coeffs: Vec<QuadFieldElem>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QFPoly { d, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &QuadFieldElem) -> QuadFieldElem {
        let mut acc = QuadFieldElem::zero(self.d);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn monic(&self) -> Result<QFPoly> {
        let lead = self.coeffs.last().unwrap();
        if lead.is_zero() {
            return Err(Error::DegeneratePolynomial);
        }
        let inv = lead.inverse()?;
        Ok(QFPoly::new(
            self.d,
            self.coeffs.iter().map(|c| c.mul(&inv)).collect(),
        ))
    }

    /// p(x + h).
    pub fn taylor_shift(&self, h: &QuadFieldElem) -> QFPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let add = c[j + 1].mul(h);
                c[j] = c[j].add(&add);
            }
        }
        QFPoly::new(self.d, c)
    }
}

impl std::fmt::Display for QFPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})·x")?,
                _ => write!(f, "({c})·x^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Bivariate rational polynomial in (λ, ν), stored as a polynomial in λ
/// whose coefficients are polynomials in ν.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    /// `lam_coeffs[i]` = coefficient of λ^i, a polynomial in ν.
    pub lam_coeffs: Vec<RatPoly>,
}

impl BiPoly {
    fn zero() -> Self {
        BiPoly {
            lam_coeffs: vec![RatPoly::zero()],
        }
    }

    fn trim(mut self) -> Self {
        while self.lam_coeffs.len() > 1 && self.lam_coeffs.last().is_some_and(|p| p.is_zero()) {
            self.lam_coeffs.pop();
        }
        self
    }

    fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.lam_coeffs.len().max(o.lam_coeffs.len());
        let mut out = vec![RatPoly::zero(); n];
        for (i, p) in self.lam_coeffs.iter().enumerate() {
            out[i] = out[i].add(p);
        }
        for (i, p) in o.lam_coeffs.iter().enumerate() {
            out[i] = out[i].add(p);
        }
        BiPoly { lam_coeffs: out }.trim()
    }

    fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut out = vec![RatPoly::zero(); self.lam_coeffs.len() + o.lam_coeffs.len() - 1];
        for (i, a) in self.lam_coeffs.iter().enumerate() {
            for (j, b) in o.lam_coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BiPoly { lam_coeffs: out }.trim()
    }

    fn scale_rat(&self, s: &Rat) -> BiPoly {
        BiPoly {
            lam_coeffs: self.lam_coeffs.iter().map(|p| p.scale(s)).collect(),
        }
        .trim()
    }

    fn lam_degree(&self) -> usize {
        self.lam_coeffs.len() - 1
    }

    /// Specialise ν := value, yielding a univariate polynomial in λ.
    fn at_nu(&self, nu: &Rat) -> RatPoly {
        RatPoly::new(self.lam_coeffs.iter().map(|p| p.eval(nu)).collect())
    }

    /// True when every monomial has λ-degree ≥ 1.
    fn divisible_by_lam(&self) -> bool {
        self.lam_coeffs[0].is_zero()
    }

    fn div_lam(&self) -> BiPoly {
        BiPoly {
            lam_coeffs: self.lam_coeffs[1..].to_vec(),
        }
        .trim()
    }
}

/// Symbolic split of p(λ + ν√d) into rational part A and surd part B:
/// p(λ + ν√d) = A(λ,ν) + B(λ,ν)·√d.
pub fn split(p: &QFPoly) -> (BiPoly, BiPoly) {
    let d = Rat::from_integer(BigInt::from(p.d));
    // powers of (λ + ν√d): (A_k, B_k) with A_{k+1} = λA_k + dνB_k,
    // B_{k+1} = νA_k + λB_k
    let lam = BiPoly {
        lam_coeffs: vec![RatPoly::zero(), RatPoly::new(vec![Rat::one()])],
    };
    let nu = BiPoly {
        lam_coeffs: vec![RatPoly::new(vec![Rat::zero(), Rat::one()])],
    };
    let mut a_k = BiPoly {
        lam_coeffs: vec![RatPoly::new(vec![Rat::one()])],
    };
    let mut b_k = BiPoly::zero();
    let mut a_total = BiPoly::zero();
    let mut b_total = BiPoly::zero();
    for c in &p.coeffs {
        // coefficient (c_a + c_b√d) times (A_k + B_k√d)
        a_total = a_total
            .add(&a_k.scale_rat(&c.lam))
            .add(&b_k.scale_rat(&(&c.nu * &d)));
        b_total = b_total
            .add(&a_k.scale_rat(&c.nu))
            .add(&b_k.scale_rat(&c.lam));
        let next_a = lam.mul(&a_k).add(&nu.mul(&b_k).scale_rat(&d));
        let next_b = nu.mul(&a_k).add(&lam.mul(&b_k));
        a_k = next_a;
        b_k = next_b;
    }
    (a_total, b_total)
}

/// Branch record kept as the exhaustiveness witness of the root search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchRecord {
    pub name: String,
    /// Primitive integer coefficients, descending.
    pub poly_descending: Vec<String>,
    pub rational_roots: Vec<String>,
    pub candidates_tested: usize,
}

/// Witness of the Q(√d) root search: which path ran, the branch
/// polynomials it derived, and every candidate count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QfSearchWitness {
    pub method: String,
    pub branches: Vec<BranchRecord>,
    pub notes: Vec<String>,
}

/// Searches for a root of the cubic in Q(√d). Returns the root (if any)
/// together with the full derivation witness.
pub fn qf_root_search(p: &QFPoly) -> Result<(Option<QuadFieldElem>, QfSearchWitness)> {
    if p.coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::DegeneratePolynomial);
    }
    let p = p.monic()?;
    let (a, b) = split(&p);
    let mut notes = vec![format!(
        "split of the candidate λ + ν·√{}: surd-part cube term carries the factor d = {}",
        p.d, p.d
    )];

    // convenient pattern: A = λ·(λ² + c₂ν² + c₀), B has only even λ-powers
    let pattern = a.divisible_by_lam()
        && {
            let q = a.div_lam();
            q.lam_degree() == 2
                && q.lam_coeffs[1].is_zero()
                && q.lam_coeffs[2].degree() == 0
                && q.lam_coeffs[0].degree() <= 2
                && q.lam_coeffs[0].coeffs.get(1).is_none_or(|c| c.is_zero())
        }
        && b.lam_degree() == 2
        && b.lam_coeffs[1].is_zero();

    if pattern {
        let mut branches = Vec::new();
        // λ = 0 branch: solve B(0, ν) = 0 over Q
        let b0 = b.lam_coeffs[0].clone();
        let (roots0, tested0) = rational_root_test(&b0)?;
        branches.push(BranchRecord {
            name: "lambda = 0".into(),
            poly_descending: b0
                .primitive_integer_descending()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            rational_roots: roots0.iter().map(|r| r.to_string()).collect(),
            candidates_tested: tested0,
        });
        for nu0 in &roots0 {
            let cand = QuadFieldElem::new(p.d, Rat::zero(), nu0.clone());
            if p.eval(&cand).is_zero() {
                return Ok((
                    Some(cand),
                    QfSearchWitness {
                        method: "surd-split branches".into(),
                        branches,
                        notes,
                    },
                ));
            }
        }
        // λ ≠ 0 branch: λ² = s(ν) from A/λ = 0; substitute into B
        let q = a.div_lam();
        // q = λ² + q0(ν): s(ν) = −q0(ν)
        let s_poly = q.lam_coeffs[0].neg();
        let lead_inv = Rat::one() / q.lam_coeffs[2].coeffs[0].clone();
        let s_poly = s_poly.scale(&lead_inv);
        let bsub = b.lam_coeffs[2].mul(&s_poly).add(&b.lam_coeffs[0]);
        let (roots1, tested1) = rational_root_test(&bsub)?;
        branches.push(BranchRecord {
            name: "lambda ≠ 0 (λ² eliminated)".into(),
            poly_descending: bsub
                .primitive_integer_descending()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            rational_roots: roots1.iter().map(|r| r.to_string()).collect(),
            candidates_tested: tested1,
        });
        for nu0 in &roots1 {
            let lam_sq = s_poly.eval(nu0);
            if let Some(lam0) = rational_sqrt(&lam_sq) {
                for l in [lam0.clone(), -lam0.clone()] {
                    let cand = QuadFieldElem::new(p.d, l, nu0.clone());
                    if p.eval(&cand).is_zero() {
                        return Ok((
                            Some(cand),
                            QfSearchWitness {
                                method: "surd-split branches".into(),
                                branches,
                                notes,
                            },
                        ));
                    }
                }
            }
        }
        return Ok((
            None,
            QfSearchWitness {
                method: "surd-split branches".into(),
                branches,
                notes,
            },
        ));
    }

    // general path: eliminate λ by the Sylvester resultant of A and B
    let res = sylvester_resultant(&a, &b);
    if res.is_zero() {
        return Err(Error::InconsistentInput(
            "resultant vanished identically; cubic is degenerate".into(),
        ));
    }
    let (nu_candidates, tested) = rational_root_test(&res)?;
    let mut branches = vec![BranchRecord {
        name: "resultant in ν".into(),
        poly_descending: res
            .primitive_integer_descending()
            .iter()
            .map(|c| c.to_string())
            .collect(),
        rational_roots: nu_candidates.iter().map(|r| r.to_string()).collect(),
        candidates_tested: tested,
    }];
    for nu0 in &nu_candidates {
        let pa = a.at_nu(nu0);
        let pb = b.at_nu(nu0);
        let g = poly_gcd(&pa, &pb);
        let (lams, tested_l) = rational_root_test(&g)?;
        branches.push(BranchRecord {
            name: format!("λ-gcd at ν = {nu0}"),
            poly_descending: g
                .primitive_integer_descending()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            rational_roots: lams.iter().map(|r| r.to_string()).collect(),
            candidates_tested: tested_l,
        });
        for l in lams {
            let cand = QuadFieldElem::new(p.d, l, nu0.clone());
            if p.eval(&cand).is_zero() {
                return Ok((
                    Some(cand),
                    QfSearchWitness {
                        method: "resultant elimination".into(),
                        branches,
                        notes,
                    },
                ));
            }
        }
    }
    notes.push(format!("{} ν-candidates exhausted", nu_candidates.len()));
    Ok((
        None,
        QfSearchWitness {
            method: "resultant elimination".into(),
            branches,
            notes,
        },
    ))
}

/// Resultant of A and B with respect to λ (Sylvester determinant with
/// polynomial-in-ν entries, Laplace expansion).
fn sylvester_resultant(a: &BiPoly, b: &BiPoly) -> RatPoly {
    let m = a.lam_degree();
    let n = b.lam_degree();
    if m == 0 {
        // constant in λ
        return pow_poly(&a.lam_coeffs[0], n);
    }
    if n == 0 {
        return pow_poly(&b.lam_coeffs[0], m);
    }
    let size = m + n;
    let mut mat = vec![vec![RatPoly::zero(); size]; size];
    for row in 0..n {
        for (k, c) in a.lam_coeffs.iter().enumerate() {
            mat[row][row + (m - k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in b.lam_coeffs.iter().enumerate() {
            mat[n + row][row + (n - k)] = c.clone();
        }
    }
    poly_det(&mat)
}

fn pow_poly(p: &RatPoly, k: usize) -> RatPoly {
    let mut out = RatPoly::new(vec![Rat::one()]);
    for _ in 0..k {
        out = out.mul(p);
    }
    out
}

fn poly_det(m: &[Vec<RatPoly>]) -> RatPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = RatPoly::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let sub = entry.mul(&poly_det(&minor));
        det = if j % 2 == 0 {
            det.add(&sub)
        } else {
            det.sub(&sub)
        };
    }
    det
}

/// Monic polynomial gcd over Q by the Euclidean algorithm.
fn poly_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_zero() {
        a
    } else {
        a.monic().unwrap()
    }
}

fn poly_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if b.is_zero() {
        return a.clone();
    }
    let mut r = a.clone();
    let db = b.degree();
    let lead = b.lead().clone();
    while !r.is_zero() && r.degree() >= db {
        let shift = r.degree() - db;
        let f = r.lead() / &lead;
        let mut sub = vec![Rat::zero(); shift];
        sub.extend(b.coeffs.iter().map(|c| c * &f));
        let next = r.sub(&RatPoly::new(sub));
        // exact arithmetic: the leading term cancels, so the degree
        // strictly drops (or the remainder vanishes)
        if !next.is_zero() && next.degree() == r.degree() {
            break;
        }
        r = next;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    fn qf(d: i64, l: (i64, i64), n: (i64, i64)) -> QuadFieldElem {
        QuadFieldElem::new(d, rat(l.0, l.1), rat(n.0, n.1))
    }

    #[test]
    fn field_ops() {
        let x = qf(6, (1, 2), (3, 1));
        let y = qf(6, (-2, 3), (1, 5));
        let z = x.mul(&y);
        // (1/2 + 3√6)(−2/3 + √6/5) = (1/2·−2/3 + 6·3/5) + (1/2·1/5 + 3·−2/3)√6
        assert_eq!(z.lam, rat(-1, 3) + rat(18, 5));
        assert_eq!(z.nu, rat(1, 10) - rat(2, 1));
        let inv = x.inverse().unwrap();
        assert!(x.mul(&inv).sub(&QuadFieldElem::one(6)).is_zero());
    }

    #[test]
    fn split_of_depressed_cubic() {
        // x³ − (139/18)x + (328/243)√6 over Q(√6)
        let p = QFPoly::new(
            6,
            vec![
                qf(6, (0, 1), (328, 243)),
                qf(6, (-139, 18), (0, 1)),
                qf(6, (0, 1), (0, 1)),
                QuadFieldElem::one(6),
            ],
        );
        let (a, b) = split(&p);
        // A = λ³ + 18λν² − (139/18)λ
        assert!(a.divisible_by_lam());
        let q = a.div_lam();
        assert_eq!(q.lam_coeffs[0].coeffs[2], rat(18, 1));
        assert_eq!(q.lam_coeffs[0].coeffs[0], rat(-139, 18));
        // B = 3λ²ν + 6ν³ − (139/18)ν + 328/243: the ν³ term carries d = 6
        assert_eq!(b.lam_coeffs[2], RatPoly::new(vec![rat(0, 1), rat(3, 1)]));
        assert_eq!(b.lam_coeffs[0].coeffs[3], rat(6, 1));
    }

    #[test]
    fn branch_analysis_of_pinned_cubic() {
        let p = QFPoly::new(
            6,
            vec![
                qf(6, (0, 1), (328, 243)),
                qf(6, (-139, 18), (0, 1)),
                qf(6, (0, 1), (0, 1)),
                QuadFieldElem::one(6),
            ],
        );
        let (root, witness) = qf_root_search(&p).unwrap();
        assert!(root.is_none(), "the pinned cubic must have no Q(√6) root");
        assert_eq!(witness.method, "surd-split branches");
        assert_eq!(witness.branches.len(), 2);
        // recomputed branch polynomials (the independently derived split)
        assert_eq!(
            witness.branches[0].poly_descending,
            vec!["2916", "0", "-3753", "656"]
        );
        assert_eq!(
            witness.branches[1].poly_descending,
            vec!["-11664", "0", "3753", "328"]
        );
        assert!(witness.branches.iter().all(|b| b.rational_roots.is_empty()));
    }

    #[test]
    fn planted_pure_surd_root() {
        // (x − (1+√d))(x² + x + 1) over Q(√5), expanded
        let d = 5;
        let r = qf(d, (1, 1), (1, 1));
        let q2 = [
            QuadFieldElem::one(d),
            QuadFieldElem::one(d),
            QuadFieldElem::one(d),
        ];
        // multiply (x − r)·(x² + x + 1)
        let mut coeffs = vec![QuadFieldElem::zero(d); 4];
        for (i, c) in q2.iter().enumerate() {
            coeffs[i + 1] = coeffs[i + 1].add(c);
            coeffs[i] = coeffs[i].sub(&r.mul(c));
        }
        let p = QFPoly::new(d, coeffs);
        let (root, _w) = qf_root_search(&p).unwrap();
        assert_eq!(root, Some(r));
    }

    #[test]
    fn rational_root_in_field() {
        // (x − 2)(x² + √6x + 3): root 2 with ν = 0
        let d = 6;
        let two = qf(d, (2, 1), (0, 1));
        let q2 = [
            qf(d, (3, 1), (0, 1)),
            qf(d, (0, 1), (1, 1)),
            QuadFieldElem::one(d),
        ];
        let mut coeffs = vec![QuadFieldElem::zero(d); 4];
        for (i, c) in q2.iter().enumerate() {
            coeffs[i + 1] = coeffs[i + 1].add(c);
            coeffs[i] = coeffs[i].sub(&two.mul(c));
        }
        let p = QFPoly::new(d, coeffs);
        let (root, _) = qf_root_search(&p).unwrap();
        assert_eq!(root, Some(two));
    }

    #[test]
    fn taylor_shift_reproduces_depression() {
        // intermediate cubic c³ + (11/√6)c² − c − 12/√6; 11/√6 = (11/6)√6
        let p = QFPoly::new(
            6,
            vec![
                qf(6, (0, 1), (-2, 1)),
                qf(6, (-1, 1), (0, 1)),
                qf(6, (0, 1), (11, 6)),
                QuadFieldElem::one(6),
            ],
        );
        // shift = (c² coeff)/3 = (11/18)√6; depressed = p(x − shift)
        let shift = qf(6, (0, 1), (11, 18));
        let dep = p.taylor_shift(&shift.neg());
        assert!(dep.coeffs[2].is_zero());
        assert_eq!(dep.coeffs[1], qf(6, (-139, 18), (0, 1)));
        assert_eq!(dep.coeffs[0], qf(6, (0, 1), (328, 243)));
    }
}
