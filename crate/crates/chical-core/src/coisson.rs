//! Momentum filtration, the coisson (vertex Poisson) structure of the
//! associated graded, and the quasiclassical-limit comparisons.
//!
//! The coisson products are the single-contraction restriction of the Wick
//! exponential, inheriting the same Koszul convention as the quantum
//! engine, so the symbol comparisons are sign-consistent by construction.

use crate::cartan::{lie_even, vf_bracket, VectorField};
use crate::check::{expect_eq, fail, CheckResult};
use crate::series::OpeSeries;
use crate::superjet::{binomial, partial, qi, translate_pow, Monomial, Parity, Q, State};
use crate::vertex::{base_bilinear, contraction, pole_bound};
use num::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoissonError {
    #[error("coisson products are defined for n >= 0 (got {0}); the -1 product is the plain multiplication")]
    NegativeMode(i64),
}

/// Filtration weight: the maximum count of momentum letters over the
/// monomials of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiltrationDegree(pub u32);

pub fn filtration_degree(a: &State) -> FiltrationDegree {
    FiltrationDegree(
        a.terms()
            .map(|(m, _)| m.momentum_letters())
            .max()
            .unwrap_or(0),
    )
}

/// The part of a state with exactly p momentum letters.
pub fn momentum_part(a: &State, p: i64) -> State {
    if p < 0 {
        return State::zero();
    }
    a.terms()
        .filter(|(m, _)| m.momentum_letters() as i64 == p)
        .fold(State::zero(), |mut acc, (m, c)| {
            acc.add_term(m.clone(), c.clone());
            acc
        })
}

/// A class in the associated graded: a representative together with its
/// filtration degree, well-defined modulo the next-lower filtration step.
#[derive(Clone, Debug)]
pub struct SymbolClass {
    pub representative: State,
    pub degree: u32,
}

pub fn symbol(a: &State) -> SymbolClass {
    let degree = filtration_degree(a).0;
    SymbolClass {
        representative: momentum_part(a, degree as i64),
        degree,
    }
}

/// The coisson n-th product for n >= 0: the Wick sum restricted to exactly
/// one contraction.
pub fn coisson_nprod(a: &State, n: i64, b: &State) -> Result<State, CoissonError> {
    if n < 0 {
        return Err(CoissonError::NegativeMode(n));
    }
    Ok(base_bilinear(a, b, |ja, jb| coisson_jet(ja, n, jb)))
}

fn coisson_jet(ja: &Monomial, n: i64, jb: &Monomial) -> State {
    let mut out = State::zero();
    let left_parity = ja.parity();
    for &(u, _) in ja.factors() {
        let du = partial(&u, &State::from_term(ja.clone(), Q::one()));
        if du.is_zero() {
            continue;
        }
        for &(v, _) in jb.factors() {
            let c = match contraction(&u, &v) {
                Some(c) => c,
                None => continue,
            };
            let j = -n - 1 - c.power;
            if j < 0 {
                continue;
            }
            let dv = partial(&v, &State::from_term(jb.clone(), Q::one()));
            if dv.is_zero() {
                continue;
            }
            let mut coeff = c.coefficient.clone();
            if v.parity().is_odd() && (left_parity.is_odd()) != (u.parity().is_odd()) {
                coeff = -coeff;
            }
            let mut fact = Q::one();
            for i in 1..=j {
                fact *= qi(i);
            }
            let left = translate_pow(&du, j as u32);
            out = out.add(&left.mul(&dv).scale(&(coeff / fact)));
        }
    }
    out
}

/// The complete (purely singular) coisson OPE series of two states.
pub fn coisson_series(a: &State, b: &State) -> Result<OpeSeries, CoissonError> {
    let bound = pole_bound(a, b);
    let mut pairs = Vec::new();
    for n in 0..bound {
        let c = coisson_nprod(a, n, b)?;
        if !c.is_zero() {
            pairs.push((-n - 1, c));
        }
    }
    Ok(OpeSeries::new(pairs, -1))
}

/// Quasiclassical comparison for one pair: the quantum product drops the
/// filtration degree by at least one for n >= 0 and its top symbol is the
/// coisson product of the symbols; the -1 product preserves the degree
/// with top part the plain product.
pub fn check_quasiclassical(a: &State, b: &State, n: i64) -> CheckResult {
    if n < 0 {
        return fail("quasiclassical", format!("mode must be >= 0, got {n}"));
    }
    let p = filtration_degree(a).0 as i64;
    let q = filtration_degree(b).0 as i64;
    let quantum = crate::vertex::nprod(a, n, b);
    if !quantum.is_zero() && (filtration_degree(&quantum).0 as i64) > p + q - 1 {
        return fail(
            "quasiclassical",
            format!(
                "degree bound violated: deg a_{{({n})}} b = {} > {} (a = {a}, b = {b})",
                filtration_degree(&quantum).0,
                p + q - 1
            ),
        );
    }
    let a_top = momentum_part(a, p);
    let b_top = momentum_part(b, q);
    let classical = coisson_nprod(&a_top, n, &b_top).expect("n >= 0");
    expect_eq(
        "quasiclassical",
        &format!("symbol of a_({n}) b, a = {a}, b = {b}"),
        momentum_part(&quantum, p + q - 1),
        momentum_part(&classical, p + q - 1),
    )?;

    // the -1 product: degree bound p + q, top part the plain product
    let minus_one = crate::vertex::nprod(a, -1, b);
    if !minus_one.is_zero() && (filtration_degree(&minus_one).0 as i64) > p + q {
        return fail(
            "quasiclassical",
            format!("degree bound violated for the -1 product (a = {a}, b = {b})"),
        );
    }
    expect_eq(
        "quasiclassical",
        &format!("top of a_(-1) b is the plain product, a = {a}, b = {b}"),
        momentum_part(&minus_one, p + q),
        momentum_part(&a_top.mul(&b_top), p + q),
    )
}

fn pair_sign(a: &State, b: &State) -> Option<Q> {
    let pa = a.homogeneous_parity()?;
    let pb = b.homogeneous_parity()?;
    Some(if pa == Parity::Odd && pb == Parity::Odd {
        -Q::one()
    } else {
        Q::one()
    })
}

/// Both Leibniz forms of the coisson structure: the products are super
/// derivations of the multiplication, and the mirrored form expands the
/// left factor through translations.
pub fn check_coisson_leibniz(a: &State, b: &State, c: &State, n: i64) -> CheckResult {
    if n < 0 {
        return fail("coisson-leibniz", format!("mode must be >= 0, got {n}"));
    }
    let sign_ab = match pair_sign(a, b) {
        Some(s) => s,
        None => {
            return fail(
                "coisson-leibniz",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };
    // derivation form: a_(n)(bc) = (a_(n)b) c + (-1)^{|a||b|} b (a_(n)c)
    let lhs = coisson_nprod(a, n, &b.mul(c)).expect("n >= 0");
    let rhs = coisson_nprod(a, n, b)
        .expect("n >= 0")
        .mul(c)
        .add(&b.mul(&coisson_nprod(a, n, c).expect("n >= 0")).scale(&sign_ab));
    expect_eq(
        "coisson-leibniz",
        &format!("derivation form, n = {n}, a = {a}, b = {b}, c = {c}"),
        lhs,
        rhs,
    )?;

    // mirrored form: (bc)_(n) a = sum_j 1/j! (d^j b)(c_(n+j) a)
    //                            + (-1)^{|b||c|} 1/j! (d^j c)(b_(n+j) a)
    let sign_bc = match pair_sign(b, c) {
        Some(s) => s,
        None => {
            return fail(
                "coisson-leibniz",
                format!("non-homogeneous input: b = {b}, c = {c}"),
            )
        }
    };
    let lhs = coisson_nprod(&b.mul(c), n, a).expect("n >= 0");
    let mut rhs = State::zero();
    let j_max = pole_bound(c, a).max(pole_bound(b, a)).max(n) - n;
    let mut fact = Q::one();
    for j in 0..=j_max {
        if j > 0 {
            fact *= qi(j);
        }
        let inv = Q::one() / &fact;
        let first = coisson_nprod(c, n + j, a).expect("n >= 0");
        if !first.is_zero() {
            rhs = rhs.add(&translate_pow(b, j as u32).mul(&first).scale(&inv));
        }
        let second = coisson_nprod(b, n + j, a).expect("n >= 0");
        if !second.is_zero() {
            rhs = rhs.add(
                &translate_pow(c, j as u32)
                    .mul(&second)
                    .scale(&(inv * &sign_bc)),
            );
        }
    }
    expect_eq(
        "coisson-leibniz",
        &format!("mirrored form, n = {n}, a = {a}, b = {b}, c = {c}"),
        lhs,
        rhs,
    )
}

/// Skew-commutativity of the coisson products, entirely within the
/// classical engine.
pub fn check_coisson_skew(a: &State, b: &State) -> CheckResult {
    let sign = match pair_sign(a, b) {
        Some(s) => s,
        None => {
            return fail(
                "coisson-skew",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };
    let bound = pole_bound(a, b).max(pole_bound(b, a));
    for n in 0..bound {
        let lhs = coisson_nprod(a, n, b).expect("n >= 0");
        let mut rhs = State::zero();
        let mut fact = Q::one();
        for j in 0..=(bound - n) {
            if j > 0 {
                fact *= qi(j);
            }
            let inner = coisson_nprod(b, n + j, a).expect("n >= 0");
            if inner.is_zero() {
                continue;
            }
            let mut c = Q::one() / &fact;
            if j % 2 == 1 {
                c = -c;
            }
            rhs = rhs.add(&translate_pow(&inner, j as u32).scale(&c));
        }
        if (n + 1) % 2 == 1 {
            rhs = rhs.neg();
        }
        rhs = rhs.scale(&sign);
        expect_eq(
            "coisson-skew",
            &format!("n = {n}, a = {a}, b = {b}"),
            lhs,
            rhs,
        )?;
    }
    Ok(())
}

/// The commutator formula of the coisson Lie* structure, n, m >= 0.
pub fn check_coisson_commutator(a: &State, b: &State, c: &State, n: i64, m: i64) -> CheckResult {
    if n < 0 || m < 0 {
        return fail("coisson-commutator", format!("modes must be >= 0, got {n}, {m}"));
    }
    let sign = match pair_sign(a, b) {
        Some(s) => s,
        None => {
            return fail(
                "coisson-commutator",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };
    let lhs = coisson_nprod(a, n, &coisson_nprod(b, m, c).expect("m >= 0"))
        .expect("n >= 0")
        .sub(
            &coisson_nprod(b, m, &coisson_nprod(a, n, c).expect("n >= 0"))
                .expect("m >= 0")
                .scale(&sign),
        );
    let mut rhs = State::zero();
    for s in 0..pole_bound(a, b) {
        let coef = binomial(n, s);
        if coef.is_zero() {
            continue;
        }
        let ab = coisson_nprod(a, s, b).expect("s >= 0");
        if ab.is_zero() {
            continue;
        }
        rhs = rhs.add(&coisson_nprod(&ab, n + m - s, c).expect("n + m - s >= 0").scale(&coef));
    }
    expect_eq(
        "coisson-commutator",
        &format!("n = {n}, m = {m}, a = {a}, b = {b}, c = {c}"),
        lhs,
        rhs,
    )
}

/// Subleading term of the quantum normal-ordering identity: the
/// degree-(p+q+r-1) symbol of (a_(-1) b)_(n) c equals the mirrored coisson
/// Leibniz expansion of the symbols.
pub fn check_quantized_leibniz(a: &State, b: &State, c: &State, n: i64) -> CheckResult {
    if n < 0 {
        return fail("quantized-leibniz", format!("mode must be >= 0, got {n}"));
    }
    let p = filtration_degree(a).0 as i64;
    let q = filtration_degree(b).0 as i64;
    let r = filtration_degree(c).0 as i64;
    let a_top = momentum_part(a, p);
    let b_top = momentum_part(b, q);
    let c_top = momentum_part(c, r);
    let sign_ab = match pair_sign(&a_top, &b_top) {
        Some(s) => s,
        None => {
            return fail(
                "quantized-leibniz",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };

    let quantum = crate::vertex::nprod(&crate::vertex::nprod(a, -1, b), n, c);
    let lhs = momentum_part(&quantum, p + q + r - 1);

    // (ab)_(n) c at the symbol level, expanded by the mirrored Leibniz form
    let mut rhs = State::zero();
    let j_max = (pole_bound(&b_top, &c_top).max(pole_bound(&a_top, &c_top)).max(n)) - n;
    let mut fact = Q::one();
    for j in 0..=j_max {
        if j > 0 {
            fact *= qi(j);
        }
        let inv = Q::one() / &fact;
        let first = coisson_nprod(&b_top, n + j, &c_top).expect("n >= 0");
        if !first.is_zero() {
            rhs = rhs.add(&translate_pow(&a_top, j as u32).mul(&first).scale(&inv));
        }
        let second = coisson_nprod(&a_top, n + j, &c_top).expect("n >= 0");
        if !second.is_zero() {
            rhs = rhs.add(
                &translate_pow(&b_top, j as u32)
                    .mul(&second)
                    .scale(&(inv * &sign_ab)),
            );
        }
    }
    expect_eq(
        "quantized-leibniz",
        &format!("n = {n}, a = {a}, b = {b}, c = {c}"),
        lhs,
        momentum_part(&rhs, p + q + r - 1),
    )
}

/// An element of the jet Lie algebra of vector fields: a sum of iterated
/// translates of embedded fields.
#[derive(Clone, Debug)]
pub struct JetField {
    pub terms: Vec<(u32, VectorField)>,
}

impl JetField {
    pub fn embed(&self) -> State {
        let mut out = State::zero();
        for (k, f) in &self.terms {
            out = out.add(&translate_pow(&lie_even(f), *k));
        }
        out
    }
}

/// The jet Lie* bracket: for generators the kernel is the first-order pole
/// at the bracket of the fields; translates act as the z1- and
/// z2-derivatives of the kernel.
pub fn jet_lie_bracket(a: &JetField, b: &JetField) -> OpeSeries {
    use std::collections::BTreeMap;
    let mut coeffs: BTreeMap<i64, State> = BTreeMap::new();
    for (na, fa) in &a.terms {
        for (nb, fb) in &b.terms {
            let bracket = lie_even(&vf_bracket(fa, fb));
            if bracket.is_zero() {
                continue;
            }
            // start from bracket * t^(-1), then d_z1^na d_z2^nb
            let mut series: Vec<(i64, State)> = vec![(-1, bracket)];
            for _ in 0..*na {
                series = series
                    .into_iter()
                    .map(|(k, s)| (k - 1, s.scale(&qi(k))))
                    .collect();
            }
            for _ in 0..*nb {
                let mut next: BTreeMap<i64, State> = BTreeMap::new();
                for (k, s) in series {
                    let e = next.entry(k).or_insert_with(State::zero);
                    *e = e.add(&crate::superjet::translate(&s));
                    let e = next.entry(k - 1).or_insert_with(State::zero);
                    *e = e.add(&s.scale(&qi(-k)));
                }
                series = next.into_iter().collect();
            }
            for (k, s) in series {
                let e = coeffs.entry(k).or_insert_with(State::zero);
                *e = e.add(&s);
            }
        }
    }
    OpeSeries::new(coeffs, -1)
}

/// The bracket agrees with the coisson OPE of the embedded jets.
pub fn check_jet_bracket(a: &JetField, b: &JetField) -> CheckResult {
    let expected = jet_lie_bracket(a, b);
    let got = coisson_series(&a.embed(), &b.embed()).expect("modes >= 0");
    expect_eq(
        "jet-bracket",
        "coisson series of the embeddings",
        got,
        expected,
    )
}
