//! The free-field vertex algebra on a polynomial chart: mode actions, two
//! independent n-th-product algorithms (recursive normal ordering and the
//! closed-form Wick sum), OPE assembly, and exact checkers for
//! skew-commutativity, the Borcherds commutator, the general three-domain
//! Borcherds identity and the normal-ordering formula.
//!
//! Base letters u(i), du(i) are central for all vertex operations: products
//! are bilinear over the base ring with the Koszul factor
//! (-1)^{|w'||a|} for the base part w' of the right operand passing the jet
//! part a of the left operand.

use crate::check::{expect_eq, fail, CheckResult};
use crate::series::{expand_inverse_difference, ExpansionDomain, OpeSeries};
use crate::superjet::{
    binomial, partial, qi, translate, Generator, Kind, Monomial, Q, State,
};
use num::{One, Signed, Zero};

/// A mode label a_(n) of one of the four jet-0 field generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeIndex {
    pub generator: Generator,
    pub n: i64,
}

impl ModeIndex {
    pub fn new(generator: Generator, n: i64) -> ModeIndex {
        assert!(generator.jet == 0 && generator.kind.is_jet());
        ModeIndex { generator, n }
    }
}

/// A contraction value: coefficient times (z1-z2)^power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionValue {
    pub power: i64,
    pub coefficient: Q,
}

/// Coefficient of the central element of the mode algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralTerm {
    pub value: Q,
}

/// The vacuum.
pub fn vacuum() -> State {
    State::one()
}

/// The annihilation partner of a jet-family generator at level l, with the
/// sign of its mode action: x acts as -d/dp, p as +d/dx, dx as +d/dpd,
/// pd as +d/ddx.
fn annihilation_partner(kind: Kind, index: u32, l: u32) -> (Generator, i64) {
    match kind {
        Kind::X => (Generator::px(index, l), -1),
        Kind::Px => (Generator::x(index, l), 1),
        Kind::Dx => (Generator::pdx(index, l), 1),
        Kind::Pdx => (Generator::dx(index, l), 1),
        _ => unreachable!("base letters have no modes"),
    }
}

/// Applies the mode g_(n) of a jet-0 generator to a state: creation modes
/// (n < 0) multiply by g^(-n-1) on the left, annihilation modes (n >= 0)
/// act as signed partial derivatives.
pub fn apply_mode(m: &ModeIndex, b: &State) -> State {
    if m.n < 0 {
        let jet = (-m.n - 1) as u32;
        let g = Generator::new(m.generator.kind, m.generator.index, jet);
        State::generator(g).mul(b)
    } else {
        let (partner, sign) = annihilation_partner(m.generator.kind, m.generator.index, m.n as u32);
        partial(&partner, b).scale(&qi(sign))
    }
}

/// The two-point function of a pair of jet generators: zero unless the
/// kinds pair up (p with x, dx with pd) at equal index, in which case the
/// value is +-C(l+k, k) (-1)^k (z1-z2)^(-l-k-1), the minus belonging to
/// the (x, p) order.
pub fn contraction(u: &Generator, v: &Generator) -> Option<ContractionValue> {
    let pair_sign = match (u.kind, v.kind) {
        (Kind::Px, Kind::X) => 1,
        (Kind::X, Kind::Px) => -1,
        (Kind::Pdx, Kind::Dx) => 1,
        (Kind::Dx, Kind::Pdx) => 1,
        _ => return None,
    };
    if u.index != v.index {
        return None;
    }
    let k = u.jet as i64;
    let l = v.jet as i64;
    let mut coefficient = binomial(l + k, k);
    if k % 2 == 1 {
        coefficient = -coefficient;
    }
    if pair_sign < 0 {
        coefficient = -coefficient;
    }
    Some(ContractionValue {
        power: -(l + k + 1),
        coefficient,
    })
}

/// Upper bound B such that the n-th product of the jet parts vanishes for
/// all n >= B.  Contractions form a partial matching of left letters with
/// right letters of the partner kind, each pair contributing depth
/// k + l + 1; pairing the deepest jets of each class bounds every matching.
fn pole_bound_monomials(a: &Monomial, b: &Monomial) -> i64 {
    fn jets_desc(m: &Monomial, kind: Kind) -> Vec<i64> {
        let mut out = Vec::new();
        for (g, e) in m.factors() {
            if g.kind == kind {
                for _ in 0..*e {
                    out.push(g.jet as i64);
                }
            }
        }
        out.sort_unstable_by(|x, y| y.cmp(x));
        out
    }
    let mut bound = 0i64;
    for (ka, kb) in [
        (Kind::Px, Kind::X),
        (Kind::X, Kind::Px),
        (Kind::Pdx, Kind::Dx),
        (Kind::Dx, Kind::Pdx),
    ] {
        let ja = jets_desc(a, ka);
        let jb = jets_desc(b, kb);
        for i in 0..ja.len().min(jb.len()) {
            bound += ja[i] + jb[i] + 1;
        }
    }
    bound
}

/// Pole bound for states: a_(n) b = 0 for every n >= pole_bound(a, b).
pub fn pole_bound(a: &State, b: &State) -> i64 {
    let mut bound = 0;
    for (ma, _) in a.terms() {
        for (mb, _) in b.terms() {
            bound = bound.max(pole_bound_monomials(ma, mb));
        }
    }
    bound
}

/// Splits every term of a state into (base monomial, jet monomial,
/// coefficient).
fn split_terms(a: &State) -> Vec<(Monomial, Monomial, Q)> {
    a.terms()
        .map(|(m, c)| {
            let (base, jet) = m.split_base();
            (base, jet, c.clone())
        })
        .collect()
}

/// Base-ring bilinearity shared by both product algorithms: peels the u/du
/// letters off both operands, runs `jet_product` on the jet parts and
/// reassembles with the Koszul factor (-1)^{|w'||a|}.
pub(crate) fn base_bilinear(
    a: &State,
    b: &State,
    mut jet_product: impl FnMut(&Monomial, &Monomial) -> State,
) -> State {
    let mut out = State::zero();
    for (base_a, jet_a, ca) in split_terms(a) {
        for (base_b, jet_b, cb) in split_terms(b) {
            let base = match base_a.mul(&base_b) {
                Some(pair) => pair,
                None => continue,
            };
            let mut coeff = &ca * &cb;
            if base.1 < 0 {
                coeff = -coeff;
            }
            if base_b.parity().is_odd() && jet_a.parity().is_odd() {
                coeff = -coeff;
            }
            let core = jet_product(&jet_a, &jet_b);
            if core.is_zero() {
                continue;
            }
            let base_state = State::from_term(base.0, coeff);
            out = out.add(&base_state.mul(&core));
        }
    }
    out
}

/// The exact n-th product, computed by the field recursion: the field of a
/// monomial is the normal-ordered product of the field of its leading
/// letter (with the 1/k! k-th derivative prefactor folded into binomials)
/// and the field of the rest.
pub fn nprod(a: &State, n: i64, b: &State) -> State {
    base_bilinear(a, b, |ja, jb| {
        nprod_jet(ja, n, &State::from_term(jb.clone(), Q::one()))
    })
}

/// Recursive n-th product on pure jet states.  `b` contains no base
/// letters.
fn nprod_jet(a: &Monomial, n: i64, b: &State) -> State {
    if b.is_zero() {
        return State::zero();
    }
    if a.is_one() {
        return if n == -1 { b.clone() } else { State::zero() };
    }
    // peel the leading letter g^(k); a = g_(-k-1) applied to the rest
    let (g, e) = a.factors()[0];
    let mut rest_factors = a.factors().to_vec();
    if e == 1 {
        rest_factors.remove(0);
    } else {
        rest_factors[0].1 -= 1;
    }
    let rest = Monomial::from_normal_factors(rest_factors);
    let k = g.jet as i64;
    let g_odd = g.parity().is_odd();
    let rest_odd = rest.parity().is_odd();

    let mut out = State::zero();

    // creation half: sum over p <= -1 of C(p,k)(-1)^k g^(k-p-1) *
    // (rest)_(n-p-1) b; terms die once n-p-1 reaches the pole bound of the
    // rest against b
    let bound = b
        .terms()
        .map(|(mb, _)| pole_bound_monomials(&rest, mb))
        .max()
        .unwrap_or(0);
    let p_lo = n - bound;
    for p in p_lo..=-1 {
        let mut c = binomial(p, k);
        if c.is_zero() {
            continue;
        }
        if k % 2 == 1 {
            c = -c;
        }
        let inner = nprod_jet(&rest, n - p - 1, b);
        if inner.is_zero() {
            continue;
        }
        let creation = Generator::new(g.kind, g.index, (k - p - 1) as u32);
        out = out.add(&State::generator(creation).mul(&inner).scale(&c));
    }

    // annihilation half with the super normal-ordering sign
    // (-1)^{|g||rest|}; modes above the deepest jet of b annihilate it
    let ann_max = b.max_jet().map(|j| j as i64).unwrap_or(-1);
    for p in k..=(k + ann_max) {
        let mut c = binomial(p, k);
        if c.is_zero() {
            continue;
        }
        if k % 2 == 1 {
            c = -c;
        }
        if g_odd && rest_odd {
            c = -c;
        }
        let mode = ModeIndex::new(Generator::new(g.kind, g.index, 0), p - k);
        let hit = apply_mode(&mode, b);
        if hit.is_zero() {
            continue;
        }
        let inner = nprod_jet(&rest, n - p - 1, &hit);
        out = out.add(&inner.scale(&c));
    }

    out
}

/// The closed-form Wick product: the same contract as `nprod`, evaluated by
/// expanding exp((z1-z2) d (x) Id) exp(sum <u,v> d/du (x) d/dv) on a (x) b
/// and reading off the coefficient of (z1-z2)^(-n-1).  Serves as the
/// independent oracle for `nprod`.
pub fn wick_nprod(a: &State, n: i64, b: &State) -> State {
    base_bilinear(a, b, |ja, jb| wick_jet(ja, n, jb))
}

/// One partially contracted tensor term: coefficient, accumulated power of
/// (z1-z2), left and right factors.
struct WickTerm {
    coeff: Q,
    power: i64,
    left: Monomial,
    right: Monomial,
}

fn wick_jet(ja: &Monomial, n: i64, jb: &Monomial) -> State {
    let mut layer = vec![WickTerm {
        coeff: Q::one(),
        power: 0,
        left: ja.clone(),
        right: jb.clone(),
    }];
    let mut out = State::zero();
    let mut level: i64 = 0;
    while !layer.is_empty() {
        // finish each term of the current contraction level: apply the
        // translation exponential and extract the requested coefficient
        for t in &layer {
            let j = -n - 1 - t.power;
            if j < 0 {
                continue;
            }
            let mut left = State::from_term(t.left.clone(), t.coeff.clone());
            for _ in 0..j {
                left = translate(&left);
            }
            let mut fact = Q::one();
            for i in 1..=j {
                fact *= qi(i);
            }
            let contrib = left.mul(&State::from_term(t.right.clone(), Q::one()));
            out = out.add(&contrib.scale(&(Q::one() / fact)));
        }
        // contract once more; dividing by the new level folds in 1/r!
        level += 1;
        let mut next: Vec<WickTerm> = Vec::new();
        for t in &layer {
            let left_parity = t.left.parity();
            for &(u, _) in t.left.factors() {
                let du = partial(&u, &State::from_term(t.left.clone(), Q::one()));
                if du.is_zero() {
                    continue;
                }
                for &(v, _) in t.right.factors() {
                    let c = match contraction(&u, &v) {
                        Some(c) => c,
                        None => continue,
                    };
                    let dv = partial(&v, &State::from_term(t.right.clone(), Q::one()));
                    if dv.is_zero() {
                        continue;
                    }
                    // tensor action sign: d/dv jumps over (d/du a), whose
                    // parity is |a| + |u|
                    let mut sign = Q::one();
                    if v.parity().is_odd()
                        && (left_parity.is_odd()) != (u.parity().is_odd())
                    {
                        sign = -sign;
                    }
                    for (ml, cl) in du.terms() {
                        for (mr, cr) in dv.terms() {
                            next.push(WickTerm {
                                coeff: &t.coeff * &c.coefficient * cl * cr * &sign
                                    / qi(level),
                                power: t.power + c.power,
                                left: ml.clone(),
                                right: mr.clone(),
                            });
                        }
                    }
                }
            }
        }
        layer = next;
    }
    out
}

/// Assembles the OPE a(z1) o b(z2) as a series with its complete singular
/// part and the regular part computed to `horizon`.
pub fn ope(a: &State, b: &State, horizon: i64) -> OpeSeries {
    assert!(horizon >= 0);
    let bound = pole_bound(a, b);
    let mut pairs = Vec::new();
    for n in (-horizon - 1)..bound {
        let c = nprod(a, n, b);
        if !c.is_zero() {
            pairs.push((-n - 1, c));
        }
    }
    let series = OpeSeries::new(pairs, horizon);
    debug_assert!(series.min_power() >= -bound);
    series
}

/// The parity sign (-1)^{|a||b|} for parity-homogeneous states; mixed
/// states are rejected by the callers that need it.
fn koszul_pair_sign(a: &State, b: &State) -> Option<Q> {
    let pa = a.homogeneous_parity()?;
    let pb = b.homogeneous_parity()?;
    Some(if pa.is_odd() && pb.is_odd() {
        -Q::one()
    } else {
        Q::one()
    })
}

/// Skew-commutativity: a_(n) b = (-1)^{|a||b|} (-1)^{n+1}
/// sum_j (-1)^j / j! d^j (b_(n+j) a), checked for every n from the deepest
/// pole to the horizon.
pub fn check_skew(a: &State, b: &State, horizon: i64) -> CheckResult {
    let sign = match koszul_pair_sign(a, b) {
        Some(s) => s,
        None => return fail("skew", format!("non-homogeneous input: a = {a}, b = {b}")),
    };
    let bound = pole_bound(a, b).max(pole_bound(b, a));
    for n in (-horizon - 1)..bound {
        let lhs = nprod(a, n, b);
        let mut rhs = State::zero();
        let mut fact = Q::one();
        for j in 0..=(bound - n).max(0) {
            if j > 0 {
                fact *= qi(j);
            }
            let inner = nprod(b, n + j, a);
            if inner.is_zero() {
                continue;
            }
            let mut c = Q::one() / &fact;
            if j % 2 == 1 {
                c = -c;
            }
            rhs = rhs.add(&translate_iter(&inner, j as u32).scale(&c));
        }
        let mut total = if (n + 1).rem_euclid(2) == 1 {
            rhs.neg()
        } else {
            rhs
        };
        total = total.scale(&sign);
        expect_eq("skew", &format!("n = {n}, a = {a}, b = {b}"), lhs, total)?;
    }
    Ok(())
}

fn translate_iter(s: &State, k: u32) -> State {
    let mut out = s.clone();
    for _ in 0..k {
        out = translate(&out);
    }
    out
}

/// Borcherds commutator formula: a_(n)(b_(m)c) - (-1)^{|a||b|} b_(m)(a_(n)c)
/// = sum_{s>=0} C(n,s) (a_(s)b)_(n+m-s) c, exact and finite.
pub fn check_commutator(a: &State, b: &State, c: &State, n: i64, m: i64) -> CheckResult {
    let sign = match koszul_pair_sign(a, b) {
        Some(s) => s,
        None => {
            return fail(
                "commutator",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };
    let lhs = nprod(a, n, &nprod(b, m, c)).sub(&nprod(b, m, &nprod(a, n, c)).scale(&sign));
    let rhs = commutator_rhs(a, b, c, n, m);
    expect_eq(
        "commutator",
        &format!("n = {n}, m = {m}, a = {a}, b = {b}, c = {c}"),
        lhs,
        rhs,
    )
}

/// The right-hand side of the commutator formula; shared with the gluing
/// of lie_bracket and with the l = 0 bit-identity check.
pub fn commutator_rhs(a: &State, b: &State, c: &State, n: i64, m: i64) -> State {
    let bound = pole_bound(a, b);
    let mut rhs = State::zero();
    for s in 0..bound {
        let coef = binomial(n, s);
        if coef.is_zero() {
            continue;
        }
        let ab = nprod(a, s, b);
        if ab.is_zero() {
            continue;
        }
        rhs = rhs.add(&nprod(&ab, n + m - s, c).scale(&coef));
    }
    rhs
}

/// Outcome of a general Borcherds evaluation: the three residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorcherdsResidues {
    pub t1: State,
    pub t2: State,
    pub t3: State,
}

/// Evaluates the three residues of the chiral Jacobi identity on the test
/// function (z1-z3)^n (z2-z3)^m (z1-z2)^(-l), each in its own expansion
/// domain.  T1 and T2 take the coefficient of dz1 dz2 / (z1-z3)(z2-z3),
/// T3 of dz1 dz2 / (z1-z2)(z2-z3).
pub fn borcherds_residues(
    a: &State,
    b: &State,
    c: &State,
    n: i64,
    m: i64,
    l: i64,
) -> BorcherdsResidues {
    // T1: expand (z1-z2)^(-l) in powers of (z2-z3)/(z1-z3); entries are
    // (z1-z3)^alpha (z2-z3)^beta, the residue pairs a_(alpha + n) with
    // b_(beta + m) after multiplying in the monomial part
    let order_t1 = (pole_bound(b, c) - m).max(0);
    let t1_table = expand_inverse_difference(ExpansionDomain::D13GtD23, -l, order_t1);
    let mut t1 = State::zero();
    for ((alpha, beta), coef) in &t1_table {
        let inner = nprod(b, m + beta, c);
        if inner.is_zero() {
            continue;
        }
        t1 = t1.add(&nprod(a, n + alpha, &inner).scale(coef));
    }

    let order_t2 = (pole_bound(a, c) - n).max(0);
    let t2_table = expand_inverse_difference(ExpansionDomain::D23GtD13, -l, order_t2);
    let mut t2 = State::zero();
    for ((alpha, beta), coef) in &t2_table {
        let inner = nprod(a, n + alpha, c);
        if inner.is_zero() {
            continue;
        }
        t2 = t2.add(&nprod(b, m + beta, &inner).scale(coef));
    }

    // T3: expand (z1-z3)^n in powers of (z1-z2)/(z2-z3); entries are
    // (z1-z2)^gamma (z2-z3)^delta
    let order_t3 = (pole_bound(a, b) + l).max(0);
    let t3_table = expand_inverse_difference(ExpansionDomain::D23GtD12, n, order_t3);
    let mut t3 = State::zero();
    for ((gamma, delta), coef) in &t3_table {
        let ab = nprod(a, gamma - l, b);
        if ab.is_zero() {
            continue;
        }
        t3 = t3.add(&nprod(&ab, m + delta, c).scale(coef));
    }

    BorcherdsResidues { t1, t2, t3 }
}

/// General Borcherds identity via the three residue expansions:
/// T1 - (-1)^{|a||b|} T2 = T3.
pub fn check_borcherds(a: &State, b: &State, c: &State, n: i64, m: i64, l: i64) -> CheckResult {
    let sign = match koszul_pair_sign(a, b) {
        Some(s) => s,
        None => {
            return fail(
                "borcherds",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };
    let r = borcherds_residues(a, b, c, n, m, l);
    let lhs = r.t1.sub(&r.t2.scale(&sign));
    expect_eq(
        "borcherds",
        &format!("n = {n}, m = {m}, l = {l}, a = {a}, b = {b}, c = {c}"),
        lhs,
        r.t3,
    )
}

/// Normal-ordering formula: (a_(-1) b)_(n) c = sum_j a_(-1-j)(b_(n+j)c)
/// + (-1)^{|a||b|} b_(n-j-1)(a_(j)c).
pub fn check_normal_ordering(a: &State, b: &State, c: &State, n: i64) -> CheckResult {
    let sign = match koszul_pair_sign(a, b) {
        Some(s) => s,
        None => {
            return fail(
                "normal-ordering",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };
    let lhs = nprod(&nprod(a, -1, b), n, c);
    let mut rhs = State::zero();
    let j_max = (pole_bound(b, c) - n).max(pole_bound(a, c)).max(0);
    for j in 0..=j_max {
        let first = nprod(b, n + j, c);
        if !first.is_zero() {
            rhs = rhs.add(&nprod(a, -1 - j, &first));
        }
        let second = nprod(a, j, c);
        if !second.is_zero() {
            rhs = rhs.add(&nprod(b, n - j - 1, &second).scale(&sign));
        }
    }
    expect_eq(
        "normal-ordering",
        &format!("n = {n}, a = {a}, b = {b}, c = {c}"),
        lhs,
        rhs,
    )
}

/// The central coefficient of the bracket of two mode generators in the
/// Heisenberg-Clifford mode algebra: delta-paired at opposite levels, with
/// the even pair antisymmetric and the odd pair symmetric.
pub fn gamma_bracket(g: &ModeIndex, h: &ModeIndex) -> CentralTerm {
    let delta = g.generator.index == h.generator.index && g.n + h.n + 1 == 0;
    let value = match (g.generator.kind, h.generator.kind) {
        (Kind::Px, Kind::X) => 1,
        (Kind::X, Kind::Px) => -1,
        (Kind::Pdx, Kind::Dx) | (Kind::Dx, Kind::Pdx) => 1,
        _ => 0,
    };
    CentralTerm {
        value: if delta { qi(value) } else { Q::zero() },
    }
}

/// A formal integral of the OPE: the Lie-algebra bracket of z^n a dz and
/// z^m b dz is sum_j C(n,j) z^(n+m-j) (a_(j) b) dz, returned as a reduced
/// list of (mode, state) pairs sorted by mode.
pub fn lie_bracket(p: (i64, &State), q: (i64, &State)) -> Vec<(i64, State)> {
    let (n, a) = p;
    let (m, b) = q;
    let mut acc: std::collections::BTreeMap<i64, State> = std::collections::BTreeMap::new();
    for j in 0..pole_bound(a, b) {
        let coef = binomial(n, j);
        if coef.is_zero() {
            continue;
        }
        let ab = nprod(a, j, b);
        if ab.is_zero() {
            continue;
        }
        let entry = acc.entry(n + m - j).or_insert_with(State::zero);
        *entry = entry.add(&ab.scale(&coef));
    }
    acc.into_iter().filter(|(_, s)| !s.is_zero()).collect()
}

/// Checks the operator form of `lie_bracket` on a sample state:
/// [a_(n), b_(m)] s = sum over the bracket of (k, v): v_(k) s.
pub fn check_lie_bracket_operator(
    p: (i64, &State),
    q: (i64, &State),
    sample: &State,
) -> CheckResult {
    let (n, a) = p;
    let (m, b) = q;
    let sign = match koszul_pair_sign(a, b) {
        Some(s) => s,
        None => {
            return fail(
                "lie-bracket",
                format!("non-homogeneous input: a = {a}, b = {b}"),
            )
        }
    };
    let lhs = nprod(a, n, &nprod(b, m, sample))
        .sub(&nprod(b, m, &nprod(a, n, sample)).scale(&sign));
    let mut rhs = State::zero();
    for (k, v) in lie_bracket(p, q) {
        rhs = rhs.add(&nprod(&v, k, sample));
    }
    expect_eq(
        "lie-bracket",
        &format!("n = {n}, m = {m}, a = {a}, b = {b}, s = {sample}"),
        lhs,
        rhs,
    )
}

/// Is the coefficient exactly +-1 or a bare rational (used by witnesses).
pub fn render_q(c: &Q) -> String {
    if c.is_negative() {
        format!("-{}", c.abs())
    } else {
        format!("{c}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superjet::q;

    fn st(g: Generator) -> State {
        State::generator(g)
    }

    fn x(i: u32, n: u32) -> State {
        st(Generator::x(i, n))
    }
    fn px(i: u32, n: u32) -> State {
        st(Generator::px(i, n))
    }
    fn dx(i: u32, n: u32) -> State {
        st(Generator::dx(i, n))
    }
    fn pdx(i: u32, n: u32) -> State {
        st(Generator::pdx(i, n))
    }

    #[test]
    fn vacuum_axioms() {
        let a = px(1, 0).mul(&x(2, 1));
        for n in 0..4 {
            assert!(nprod(&a, n, &vacuum()).is_zero());
        }
        assert_eq!(nprod(&a, -1, &vacuum()), a);
        assert_eq!(nprod(&a, -2, &vacuum()), translate(&a));
        // the unit field is the identity
        let b = x(1, 0).mul(&dx(1, 1));
        assert_eq!(nprod(&vacuum(), -1, &b), b);
        for n in [-3, -2, 0, 1] {
            assert!(nprod(&vacuum(), n, &b).is_zero());
        }
    }

    #[test]
    fn mode_actions() {
        let m = ModeIndex::new(Generator::px(1, 0), 0);
        assert_eq!(apply_mode(&m, &x(1, 0)), State::one());
        let m = ModeIndex::new(Generator::x(1, 0), 0);
        assert_eq!(apply_mode(&m, &px(1, 0)), State::one().neg());
        let m = ModeIndex::new(Generator::dx(1, 0), 0);
        assert_eq!(apply_mode(&m, &pdx(1, 0)), State::one());
        let m = ModeIndex::new(Generator::pdx(1, 0), 0);
        assert_eq!(apply_mode(&m, &dx(1, 0)), State::one());
    }

    #[test]
    fn contraction_table_small() {
        // <p(1,1), x(1,1)> = -2 (z1-z2)^-3
        let c = contraction(&Generator::px(1, 1), &Generator::x(1, 1)).unwrap();
        assert_eq!(c.power, -3);
        assert_eq!(c.coefficient, qi(-2));
        // index mismatch pairs to nothing
        assert!(contraction(&Generator::px(1, 0), &Generator::x(2, 0)).is_none());
        // odd pairs are positive both ways
        let c = contraction(&Generator::dx(1, 0), &Generator::pdx(1, 2)).unwrap();
        assert_eq!(c.coefficient, qi(1));
        assert_eq!(c.power, -3);
    }

    #[test]
    fn vector_field_acts_on_functions() {
        // (p(1,0) x(2,0))_(0) x(1,0) = x(2,0)
        let a = px(1, 0).mul(&x(2, 0));
        assert_eq!(nprod(&a, 0, &x(1, 0)), x(2, 0));
    }

    #[test]
    fn minus_one_product_normal_orders() {
        // (x1^2)_(-1) p(1,0) = x1^2 p(1,0) - 2 x(1,1)
        let f = x(1, 0).mul(&x(1, 0));
        let got = nprod(&f, -1, &px(1, 0));
        let expected = f.mul(&px(1, 0)).sub(&x(1, 1).scale(&qi(2)));
        assert_eq!(got, expected);
    }

    #[test]
    fn wick_matches_on_contractions() {
        // the double contraction of p(1,1) against x(1,1) sits at
        // (z1-z2)^-3 with coefficient -2
        assert_eq!(wick_nprod(&px(1, 1), 2, &x(1, 1)), State::one().scale(&qi(-2)));
        assert_eq!(nprod(&px(1, 1), 2, &x(1, 1)), State::one().scale(&qi(-2)));
        // p_(-1) modes reproduce the jet partial derivative at every level
        let b = x(1, 2).mul(&x(2, 0));
        for l in 0..=2 {
            let got = wick_nprod(&px(1, 0), l, &b);
            let partner = Generator::x(1, l as u32);
            assert_eq!(got, partial(&partner, &b));
        }
    }

    #[test]
    fn ope_against_vacuum_is_translation_exponential() {
        let a = px(1, 0).mul(&dx(2, 1));
        let series = ope(&a, &vacuum(), 3);
        assert_eq!(series.min_power(), 0);
        let mut fact = Q::one();
        for j in 0..=3i64 {
            if j > 0 {
                fact *= qi(j);
            }
            let expected = translate_iter(&a, j as u32).scale(&(Q::one() / &fact));
            assert_eq!(series.coefficient(j).unwrap(), expected);
        }
    }

    #[test]
    fn ope_first_pole_of_momentum_vs_coordinate() {
        let series = ope(&px(1, 0), &x(1, 0), 0);
        assert_eq!(series.coefficient(-1).unwrap(), State::one());
        assert_eq!(series.min_power(), -1);
        // regular part starts with the creation product p_(-1) x
        assert_eq!(series.coefficient(0).unwrap(), px(1, 0).mul(&x(1, 0)));
    }

    #[test]
    fn skew_on_paired_generators() {
        check_skew(&px(1, 0), &x(1, 0), 4).unwrap();
        check_skew(&dx(1, 0), &pdx(1, 0), 4).unwrap();
        check_skew(&x(1, 0), &x(1, 0), 4).unwrap();
    }

    #[test]
    fn commutator_of_paired_modes_is_central() {
        // a = p(1,0), b = x(1,0): [a_(n), b_(m)] c = delta_{n+m+1,0} c
        let a = px(1, 0);
        let b = x(1, 0);
        let c = x(2, 0).mul(&dx(1, 1));
        for n in -2..=2 {
            for m in -2..=2 {
                let lhs = nprod(&a, n, &nprod(&b, m, &c)).sub(&nprod(&b, m, &nprod(&a, n, &c)));
                let expected = if n + m + 1 == 0 { c.clone() } else { State::zero() };
                assert_eq!(lhs, expected, "n = {n}, m = {m}");
                check_commutator(&a, &b, &c, n, m).unwrap();
            }
        }
    }

    #[test]
    fn borcherds_l_zero_reduces_to_commutator() {
        let a = px(1, 0).mul(&x(2, 0));
        let b = x(1, 0).mul(&px(2, 0));
        let c = x(1, 1);
        for n in -2..=2 {
            for m in -2..=2 {
                let r = borcherds_residues(&a, &b, &c, n, m, 0);
                assert_eq!(r.t1, nprod(&a, n, &nprod(&b, m, &c)));
                assert_eq!(r.t2, nprod(&b, m, &nprod(&a, n, &c)));
                assert_eq!(r.t3, commutator_rhs(&a, &b, &c, n, m));
                check_borcherds(&a, &b, &c, n, m, 0).unwrap();
            }
        }
    }

    #[test]
    fn borcherds_n_zero_l_one_is_normal_ordering() {
        let a = px(1, 0);
        let b = x(2, 0);
        let c = x(1, 0).mul(&x(2, 1));
        for m in -2..=2 {
            check_borcherds(&a, &b, &c, 0, m, 1).unwrap();
            check_normal_ordering(&a, &b, &c, m).unwrap();
        }
        // the stated example: both sides equal x(2,0) at n = 0
        let lhs = nprod(&nprod(&a, -1, &b), 0, &x(1, 0));
        assert_eq!(lhs, x(2, 0));
    }

    #[test]
    fn borcherds_nonpositive_l_matches_binomial_expansion() {
        let a = px(1, 0).mul(&dx(1, 0));
        let b = pdx(1, 0);
        let c = dx(1, 1);
        for l in [-2i64, -1, 0] {
            for n in -1..=1 {
                check_borcherds(&a, &b, &c, n, 0, l).unwrap();
            }
        }
    }

    #[test]
    fn odd_odd_products_respect_signs() {
        // dx_(0) pd = +1 and pd_(0) dx = +1; skew closes the pair
        assert_eq!(nprod(&dx(1, 0), 0, &pdx(1, 0)), State::one());
        assert_eq!(nprod(&pdx(1, 0), 0, &dx(1, 0)), State::one());
        assert_eq!(wick_nprod(&dx(1, 0), 0, &pdx(1, 0)), State::one());
        assert_eq!(wick_nprod(&pdx(1, 0), 0, &dx(1, 0)), State::one());
    }

    #[test]
    fn gamma_bracket_examples() {
        let g = ModeIndex::new(Generator::px(1, 0), 2);
        let h = ModeIndex::new(Generator::x(1, 0), -3);
        assert_eq!(gamma_bracket(&g, &h).value, qi(1));
        let g = ModeIndex::new(Generator::px(1, 0), 0);
        let h = ModeIndex::new(Generator::x(2, 0), -1);
        assert_eq!(gamma_bracket(&g, &h).value, qi(0));
        let g = ModeIndex::new(Generator::pdx(1, 0), 1);
        let h = ModeIndex::new(Generator::dx(1, 0), -2);
        assert_eq!(gamma_bracket(&g, &h).value, qi(1));
        // reversed even pair flips sign
        let g = ModeIndex::new(Generator::x(1, 0), 2);
        let h = ModeIndex::new(Generator::px(1, 0), -3);
        assert_eq!(gamma_bracket(&g, &h).value, qi(-1));
    }

    #[test]
    fn gamma_bracket_as_operators() {
        let samples = [x(1, 1).mul(&dx(1, 0)), px(1, 0).mul(&x(2, 0)), vacuum()];
        let pairs = [
            (ModeIndex::new(Generator::px(1, 0), 2), ModeIndex::new(Generator::x(1, 0), -3)),
            (ModeIndex::new(Generator::px(1, 0), 0), ModeIndex::new(Generator::x(2, 0), -1)),
            (ModeIndex::new(Generator::pdx(1, 0), 1), ModeIndex::new(Generator::dx(1, 0), -2)),
            (ModeIndex::new(Generator::dx(1, 0), 0), ModeIndex::new(Generator::pdx(1, 0), -1)),
        ];
        for (g, h) in &pairs {
            let central = gamma_bracket(g, h);
            let odd_pair = g.generator.parity().is_odd() && h.generator.parity().is_odd();
            for s in &samples {
                let gh = apply_mode(g, &apply_mode(h, s));
                let hg = apply_mode(h, &apply_mode(g, s));
                let bracket = if odd_pair { gh.add(&hg) } else { gh.sub(&hg) };
                assert_eq!(bracket, s.scale(&central.value));
            }
        }
    }

    #[test]
    fn lie_bracket_of_paired_fields() {
        let a = px(1, 0);
        let b = x(1, 0);
        for n in -2..=2i64 {
            for m in -2..=2i64 {
                let br = lie_bracket((n, &a), (m, &b));
                assert_eq!(br, vec![(n + m, State::one())]);
            }
        }
        // the unit brackets to zero against anything
        for n in -2..=2i64 {
            assert!(lie_bracket((n, &vacuum()), (0, &b)).is_empty());
        }
        // operator comparison on samples
        let s = x(1, 0).mul(&px(1, 1));
        check_lie_bracket_operator((1, &a), (-2, &b), &s).unwrap();
        check_lie_bracket_operator((1, &a.mul(&x(2, 0))), (0, &b.mul(&px(2, 0))), &s).unwrap();
    }

    #[test]
    fn translation_covariance() {
        let a = px(1, 0).mul(&x(1, 0));
        let b = x(1, 1).mul(&dx(2, 0));
        for n in -3..=3i64 {
            let lhs = nprod(&translate(&a), n, &b);
            let rhs = nprod(&a, n - 1, &b).scale(&qi(-n));
            assert_eq!(lhs, rhs, "n = {n}");
            let total = translate(&nprod(&a, n, &b));
            let split = nprod(&translate(&a), n, &b).add(&nprod(&a, n, &translate(&b)));
            assert_eq!(total, split, "n = {n}");
        }
    }

    #[test]
    fn base_ring_bilinearity() {
        let u = st(Generator::u(1));
        let du = st(Generator::du(1));
        let a = px(1, 0);
        let b = x(1, 0);
        // even base factors pass freely
        assert_eq!(nprod(&u.mul(&a), 0, &b), u.mul(&nprod(&a, 0, &b)));
        // odd base factor on the right passes the odd jet part of the left
        let a_odd = pdx(1, 0);
        let b_odd = dx(1, 0);
        let lhs = nprod(&a_odd, 0, &du.mul(&b_odd));
        let rhs = du.mul(&nprod(&a_odd, 0, &b_odd)).neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn wick_oracle_on_small_mixed_states() {
        let cases = [
            (px(1, 0).mul(&x(1, 0)), x(1, 0)),
            (px(1, 1).mul(&pdx(1, 0)), x(1, 1).mul(&dx(1, 0))),
            (dx(1, 0).mul(&dx(2, 0)), pdx(2, 0).mul(&pdx(1, 0))),
            (px(1, 0).mul(&px(1, 0)), x(1, 0).mul(&x(1, 0))),
            (pdx(1, 1).mul(&x(2, 0)), dx(1, 1).mul(&px(2, 0))),
        ];
        for (a, b) in &cases {
            let bound = pole_bound(a, b);
            for n in -4..bound {
                assert_eq!(
                    nprod(a, n, b),
                    wick_nprod(a, n, b),
                    "n = {n}, a = {a}, b = {b}"
                );
            }
        }
    }

    #[test]
    fn zero_mode_is_a_derivation() {
        let a = px(1, 0).mul(&x(2, 0));
        let b = x(1, 0);
        let c = x(1, 1).mul(&dx(1, 0));
        for n in [-2i64, -1, 0, 1] {
            let lhs = nprod(&a, 0, &nprod(&b, n, &c));
            let rhs = nprod(&nprod(&a, 0, &b), n, &c).add(&nprod(&b, n, &nprod(&a, 0, &c)));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn fractional_coefficients_render() {
        assert_eq!(render_q(&q(-2, 3)), "-2/3");
        assert_eq!(render_q(&qi(5)), "5");
    }
}
