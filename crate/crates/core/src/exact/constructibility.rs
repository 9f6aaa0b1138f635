//! Ruler-and-compass constructibility of the conic-intersection quartic,
//! decided over exact rationals by two independent routes:
//!
//! 1. the classical criterion — reducibility over Q, then the standard
//!    resolvent cubic of the depressed quartic (rational resolvent root
//!    ⟺ constructible roots, for an irreducible quartic);
//! 2. the quadratic-surd route — factor the quartic as
//!    (√lc·y² + c)² − (ey + f)², eliminate e and f into a cubic for c
//!    over Q(√d) with lc = s²·d, and search that cubic for a field root.
//!
//! A root construction exists exactly when c, e, f are constructible,
//! which for the cubic over Q(√d) reduces to having a root in the field;
//! the two routes must therefore always agree, and any disagreement is
//! flagged rather than reconciled.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::qf::{qf_root_search, QFPoly, QfSearchWitness, QuadFieldElem};
use super::rat::{rat, squarefree_split, Rat};
use super::ratpoly::{
    depressed_quartic, quadratic_factor_split, rational_root_test, resolvent_cubic, RatPoly,
};
use crate::error::{Error, Result};

/// Constructibility verdict for the real intersection points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every root lies in a tower of quadratic extensions.
    Planar,
    /// Planar because the quartic splits into degree ≤ 2 rational factors.
    ReduciblePlanar,
    /// Some real root cannot be constructed by ruler and compasses.
    Solid,
}

impl Verdict {
    pub fn is_planar(&self) -> bool {
        matches!(self, Verdict::Planar | Verdict::ReduciblePlanar)
    }
}

/// Evidence justifying a verdict; every branch carries the exhaustively
/// checked data that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Rational roots and, when their removal leaves degree ≤ 2, the
    /// remaining factor (all constructible).
    RationalFactors {
        roots: Vec<String>,
        remainder_descending: Vec<String>,
    },
    /// Two rational quadratic factors of the (shifted) quartic.
    QuadraticFactors {
        first: Vec<String>,
        second: Vec<String>,
    },
    /// A rational root after removal leaves an irreducible cubic whose
    /// real roots are not constructible.
    MixedCubicObstruction {
        rational_roots: Vec<String>,
        cubic_descending: Vec<String>,
    },
    /// Irreducible quartic: the resolvent cubic decided the verdict.
    Resolvent {
        resolvent_descending: Vec<String>,
        rational_roots: Vec<String>,
        candidates_tested: usize,
    },
    /// The quartic degenerated to degree ≤ 2 at the parameter level.
    DegreeDrop { degree: usize },
    /// Surd-route outcome: the cubic for the factorisation parameter and
    /// the field-root search record.
    SurdResolvent {
        d: i64,
        cubic_descending: Vec<String>,
        depressed_descending: Vec<String>,
        shift: String,
        root: Option<String>,
        search: QfSearchWitness,
    },
}

/// Constructibility report: the verdict with its witness and the method
/// tags that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructibilityReport {
    pub verdict: Verdict,
    pub method_tags: Vec<String>,
    pub witness: Witness,
    pub notes: Vec<String>,
}

fn fmt_descending(p: &RatPoly) -> Vec<String> {
    p.primitive_integer_descending()
        .iter()
        .map(|c| c.to_string())
        .collect()
}

fn fmt_qf_descending(p: &QFPoly) -> Vec<String> {
    p.coeffs.iter().rev().map(|c| c.to_string()).collect()
}

/// Classical-criterion constructibility of a rational quartic's roots.
pub fn quartic_constructibility(q: &RatPoly) -> Result<ConstructibilityReport> {
    if q.degree() != 4 {
        return Err(Error::UnsupportedQuarticShape(format!(
            "expected degree 4, got {}",
            q.degree()
        )));
    }
    let tags = vec!["standard-resolvent".to_string()];

    // 1. rational linear factors
    let (roots, _tested) = rational_root_test(q)?;
    if !roots.is_empty() {
        let mut rest = q.clone();
        for r in &roots {
            // deflate repeatedly while the root persists
            while rest.degree() > 0 && rest.eval(r).is_zero() {
                rest = rest.deflate(r)?;
            }
        }
        if rest.degree() <= 2 {
            return Ok(ConstructibilityReport {
                verdict: Verdict::ReduciblePlanar,
                method_tags: tags,
                witness: Witness::RationalFactors {
                    roots: roots.iter().map(|r| r.to_string()).collect(),
                    remainder_descending: fmt_descending(&rest),
                },
                notes: vec![],
            });
        }
        // degree-3 remainder: if it has a rational root we would have
        // found it above, so it is an irreducible cubic — solid.
        return Ok(ConstructibilityReport {
            verdict: Verdict::Solid,
            method_tags: tags,
            witness: Witness::MixedCubicObstruction {
                rational_roots: roots.iter().map(|r| r.to_string()).collect(),
                cubic_descending: fmt_descending(&rest),
            },
            notes: vec![
                "a rational root splits off an irreducible cubic; its real roots have degree 3"
                    .into(),
            ],
        });
    }

    // 2. rational quadratic pairs (complete search on the depressed form)
    let (p, qq, r, shift) = depressed_quartic(q)?;
    if let Some((f1, f2)) = quadratic_factor_split(&p, &qq, &r)? {
        // un-shift the factors back to the original variable
        let back = |f: &RatPoly| f.taylor_shift(&-shift.clone());
        return Ok(ConstructibilityReport {
            verdict: Verdict::ReduciblePlanar,
            method_tags: tags,
            witness: Witness::QuadraticFactors {
                first: fmt_descending(&back(&f1)),
                second: fmt_descending(&back(&f2)),
            },
            notes: vec![],
        });
    }

    // 3. irreducible: the resolvent cubic decides
    let res = resolvent_cubic(&p, &qq, &r);
    let (res_roots, tested) = rational_root_test(&res)?;
    let verdict = if res_roots.is_empty() {
        Verdict::Solid
    } else {
        Verdict::Planar
    };
    Ok(ConstructibilityReport {
        verdict,
        method_tags: tags,
        witness: Witness::Resolvent {
            resolvent_descending: fmt_descending(&res),
            rational_roots: res_roots.iter().map(|r| r.to_string()).collect(),
            candidates_tested: tested,
        },
        notes: vec![],
    })
}

/// The elimination system for factoring lc·y⁴ + c₂y² + c₁y + c₀ as
/// (√lc·y² + c)² − (ey + f)²: the cubic for c over Q(√d), its depressed
/// form and the shift between them.
#[derive(Debug, Clone)]
pub struct ResolventSystem {
    pub d: i64,
    /// √lc = s·√d.
    pub s: Rat,
    pub cubic: QFPoly,
    pub shift: QuadFieldElem,
    pub depressed: QFPoly,
}

/// Builds the surd resolvent system. The quartic must have a zero cubic
/// term and a positive leading coefficient whose squarefree part exceeds
/// one (otherwise √lc is rational and the route degenerates to the
/// rational factor search).
pub fn resolvent_system(q: &RatPoly) -> Result<ResolventSystem> {
    if q.degree() != 4 {
        return Err(Error::UnsupportedQuarticShape("degree must be 4".into()));
    }
    // denominators cleared but content kept: the surd pattern lives in
    // the leading coefficient exactly as given
    let ints = q.integer_cleared();
    if !ints[3].is_zero() {
        return Err(Error::UnsupportedQuarticShape(
            "cubic term must vanish".into(),
        ));
    }
    if !ints[4].is_positive() {
        return Err(Error::UnsupportedQuarticShape(
            "leading coefficient must be positive".into(),
        ));
    }
    let (s_int, d_int) = squarefree_split(ints[4].magnitude());
    let d: i64 = d_int
        .to_string()
        .parse()
        .map_err(|_| Error::UnsupportedQuarticShape("discriminant too large".into()))?;
    if d <= 1 {
        return Err(Error::UnsupportedQuarticShape(
            "leading coefficient is a perfect square; use the rational factor search".into(),
        ));
    }
    let s = Rat::from_integer(BigInt::from(s_int));
    let c2 = Rat::from_integer(ints[2].clone());
    let c1 = Rat::from_integer(ints[1].clone());
    let c0 = Rat::from_integer(ints[0].clone());

    // eliminate e, f from 2√lc·c − e² = c₂, −2ef = c₁, c² − f² = c₀:
    //   c³ − (c₂/(2s√d))·c² − c₀·c + (c₂c₀ − c₁²/4)/(2s√d) = 0
    let inv_2sd = Rat::one() / (&s * rat(2, 1) * Rat::from_integer(BigInt::from(d)));
    let c2_coeff = QuadFieldElem::new(d, Rat::zero(), -(&c2 * &inv_2sd));
    let c0_coeff = QuadFieldElem::new(
        d,
        Rat::zero(),
        (&c2 * &c0 - &c1 * &c1 / rat(4, 1)) * &inv_2sd,
    );
    let cubic = QFPoly::new(
        d,
        vec![
            c0_coeff,
            QuadFieldElem::from_rat(d, -c0),
            c2_coeff,
            QuadFieldElem::one(d),
        ],
    );
    // depress: shift = (c²-coefficient)/3
    let third = QuadFieldElem::from_rat(d, rat(1, 3));
    let shift = cubic.coeffs[2].mul(&third);
    let depressed = cubic.taylor_shift(&shift.neg());
    Ok(ResolventSystem {
        d,
        s,
        cubic,
        shift,
        depressed,
    })
}

/// Surd-route constructibility of a zero-cubic-term quartic: the roots
/// are constructible exactly when the factorisation cubic has a root in
/// Q(√d).
pub fn surd_route_constructibility(q: &RatPoly) -> Result<ConstructibilityReport> {
    let sys = resolvent_system(q)?;
    let (root, search) = qf_root_search(&sys.depressed)?;
    let verdict = if root.is_some() {
        Verdict::Planar
    } else {
        Verdict::Solid
    };
    let root_str = root.as_ref().map(|r| {
        // report the root of the *undepressed* cubic: c = t − shift
        let orig = r.sub(&sys.shift);
        format!("{orig}")
    });
    Ok(ConstructibilityReport {
        verdict,
        method_tags: vec!["quadratic-surd-resolvent".to_string()],
        witness: Witness::SurdResolvent {
            d: sys.d,
            cubic_descending: fmt_qf_descending(&sys.cubic),
            depressed_descending: fmt_qf_descending(&sys.depressed),
            shift: format!("{}", sys.shift),
            root: root_str,
            search,
        },
        notes: vec![],
    })
}

/// Combined report over the α = 0 parameter branch: the reduced quartic
/// from (a, b, x′, y′, z′²), both constructibility routes, and the
/// agreement flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamConstructibility {
    /// Primitive integer quartic, descending.
    pub quartic_descending: Vec<String>,
    pub surd_route: Option<ConstructibilityReport>,
    pub standard_route: ConstructibilityReport,
    /// The two verdicts agree (they must; a false value flags a defect).
    pub routes_agree: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Reduced quartic of the α = 0 branch in its source form:
/// (x′²/y′²)((a+b)/b)·y⁴ + ((a² − x′²(a+b))/y′²)·y² + (a/y′)·y + 1/4.
pub fn reduced_quartic_alpha0(a: &Rat, b: &Rat, x: &Rat, y: &Rat) -> Result<RatPoly> {
    if y.is_zero() {
        return Err(Error::InconsistentInput("y' must be nonzero".into()));
    }
    let ab = a.clone() + b;
    let c4 = x * x / (y * y) * &ab / b;
    let c2 = (a * a - x * x * &ab) / (y * y);
    let c1 = a / y;
    let c0 = rat(1, 4);
    Ok(RatPoly::new(vec![c0, c1, c2, Rat::zero(), c4]))
}

/// Decides constructibility for exact parameters (a, b, x′, y′, z′²) on
/// the α = 0 branch, running both routes and cross-checking them.
///
/// z′ enters every formula only through its square, so the input carries
/// z′² and all arithmetic stays in Q.
pub fn constructibility_from_parameters(
    a: &Rat,
    b: &Rat,
    x: &Rat,
    y: &Rat,
    z_sq: &Rat,
) -> Result<ParamConstructibility> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::InconsistentInput("a and b must be positive".into()));
    }
    let mut notes = Vec::new();
    let alpha = a * b - b * x * x + (a.clone() + b) * y * y + a * z_sq;

    if x.is_zero() {
        // β loses its x-dependence and the intersection ordinate solves a
        // plain quadratic: α y² − 2ab y′ y − y′²b² = 0 — planar whatever
        // α is, so the branch constraint is not required here.
        if y.is_zero() {
            return Err(Error::InconsistentInput("x′ = y′ = 0 is degenerate".into()));
        }
        let quad = RatPoly::new(vec![
            -(y * y * b * b),
            -(a * b * y * rat(2, 1)),
            alpha.clone(),
        ]);
        let (roots, _) = rational_root_test(&quad)?;
        let mut qnotes = vec!["x′ = 0 reduces the intersection to a quadratic".to_string()];
        for r in &roots {
            if r == y {
                qnotes.push(format!(
                    "root y = {r} equals y′ and is rejected as an intersection (ray parallel to the image plane)"
                ));
            }
        }
        if !roots.is_empty() {
            qnotes.push(format!(
                "rational roots: {}",
                roots
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        let report = ConstructibilityReport {
            verdict: Verdict::Planar,
            method_tags: vec!["degree-drop".to_string()],
            witness: Witness::DegreeDrop { degree: 2 },
            notes: qnotes,
        };
        return Ok(ParamConstructibility {
            quartic_descending: fmt_descending(&quad),
            surd_route: None,
            standard_route: report,
            routes_agree: true,
            verdict: Verdict::Planar,
            notes,
        });
    }

    // the branch constraint: 0 = ab − b x′² + (a+b) y′² + a z′²
    if !alpha.is_zero() {
        return Err(Error::InconsistentInput(format!(
            "parameters violate the branch constraint: α = {alpha} ≠ 0"
        )));
    }

    let quartic = reduced_quartic_alpha0(a, b, x, y)?;
    let prim = RatPoly::new(
        quartic
            .primitive_integer()
            .into_iter()
            .map(Rat::from_integer)
            .collect(),
    );
    let standard = quartic_constructibility(&prim)?;
    let surd = match surd_route_constructibility(&prim) {
        Ok(rep) => Some(rep),
        Err(Error::UnsupportedQuarticShape(msg)) => {
            notes.push(format!("surd route unavailable: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let routes_agree = surd
        .as_ref()
        .is_none_or(|s| s.verdict.is_planar() == standard.verdict.is_planar());
    if !routes_agree {
        notes.push("route disagreement: the verdicts differ and must be investigated".into());
    }
    let verdict = standard.verdict;
    Ok(ParamConstructibility {
        quartic_descending: fmt_descending(&prim),
        surd_route: surd,
        standard_route: standard,
        routes_agree,
        verdict,
        notes,
    })
}
