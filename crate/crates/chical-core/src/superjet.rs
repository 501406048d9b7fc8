//! Sparse super-commutative polynomial ring in jet variables over the
//! rationals.
//!
//! Generators come in six kinds: the base coordinates `u(i)` and their
//! differentials `du(i)` (jet 0 only), and four families of jet variables
//! `x(i,n)`, `p(i,n)`, `dx(i,n)`, `pd(i,n)` standing for the coordinate
//! functions, momenta, form variables and form momenta of the fibre.  The
//! `dx`, `pd` and `du` families are odd; odd generators square to zero and
//! anticommute, with all Koszul signs determined by transposition counting
//! during normal-form sorting.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational coefficient type used throughout the engine.
pub type Q = BigRational;

/// Convenience constructor for small rational constants.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for small integer constants.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Generalized binomial coefficient C(n, k) for arbitrary integer n, k >= 0.
pub fn binomial(n: i64, k: i64) -> Q {
    assert!(k >= 0, "binomial: k must be non-negative");
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    BigRational::new(num, den)
}

/// Generator kind; the declaration order is the global kind order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// Base coordinate u(i), even, jet 0.
    U,
    /// Base differential du(i), odd, jet 0.
    Du,
    /// Fibre coordinate x(i,n), even.
    X,
    /// Fibre momentum p(i,n), even.
    Px,
    /// Fibre form dx(i,n), odd.
    Dx,
    /// Fibre form momentum pd(i,n), odd.
    Pdx,
}

impl Kind {
    pub fn is_odd(self) -> bool {
        matches!(self, Kind::Du | Kind::Dx | Kind::Pdx)
    }

    /// True for the four jet families acted on by the translation.
    pub fn is_jet(self) -> bool {
        matches!(self, Kind::X | Kind::Px | Kind::Dx | Kind::Pdx)
    }

    /// True for the momentum letters counted by the filtration.
    pub fn is_momentum(self) -> bool {
        matches!(self, Kind::Px | Kind::Pdx)
    }
}

/// Parity of a generator or of a homogeneous monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Parity classification of a whole polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateParity {
    Even,
    Odd,
    Mixed,
    Zero,
}

/// A single symbol of the ring.  The derived ordering (kind, index, jet)
/// is the global total order used by normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub kind: Kind,
    pub index: u32,
    pub jet: u32,
}

impl Generator {
    pub fn new(kind: Kind, index: u32, jet: u32) -> Generator {
        debug_assert!(index >= 1, "generator index must be positive");
        debug_assert!(
            kind.is_jet() || jet == 0,
            "base generators carry jet 0 only"
        );
        Generator { kind, index, jet }
    }

    pub fn u(i: u32) -> Generator {
        Generator::new(Kind::U, i, 0)
    }
    pub fn du(i: u32) -> Generator {
        Generator::new(Kind::Du, i, 0)
    }
    pub fn x(i: u32, n: u32) -> Generator {
        Generator::new(Kind::X, i, n)
    }
    pub fn px(i: u32, n: u32) -> Generator {
        Generator::new(Kind::Px, i, n)
    }
    pub fn dx(i: u32, n: u32) -> Generator {
        Generator::new(Kind::Dx, i, n)
    }
    pub fn pdx(i: u32, n: u32) -> Generator {
        Generator::new(Kind::Pdx, i, n)
    }

    pub fn parity(&self) -> Parity {
        if self.kind.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::U => write!(f, "u({})", self.index),
            Kind::Du => write!(f, "du({})", self.index),
            Kind::X => write!(f, "x({},{})", self.index, self.jet),
            Kind::Px => write!(f, "p({},{})", self.index, self.jet),
            Kind::Dx => write!(f, "dx({},{})", self.index, self.jet),
            Kind::Pdx => write!(f, "pd({},{})", self.index, self.jet),
        }
    }
}

/// A normal-form monomial: factors strictly increasing in the global order,
/// exponent 1 on every odd generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    /// The empty monomial (the vacuum).
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn single(g: Generator) -> Monomial {
        Monomial {
            factors: vec![(g, 1)],
        }
    }

    /// Builds a monomial from an unsorted factor list; returns the normal
    /// form and the Koszul sign, or None when an odd square appears.
    pub fn from_factors(mut raw: Vec<(Generator, u32)>) -> Option<(Monomial, i8)> {
        // insertion sort counting odd transpositions; lists are tiny
        let mut sign = 1i8;
        let mut i = 1;
        while i < raw.len() {
            let mut j = i;
            while j > 0 && raw[j - 1].0 > raw[j].0 {
                if raw[j - 1].0.parity().is_odd() && raw[j].0.parity().is_odd() {
                    // odd generators have exponent 1, an odd product of
                    // transpositions reduces to one swap per pair
                    if (raw[j - 1].1 * raw[j].1) % 2 == 1 {
                        sign = -sign;
                    }
                }
                raw.swap(j - 1, j);
                j -= 1;
            }
            i += 1;
        }
        let mut factors: Vec<(Generator, u32)> = Vec::with_capacity(raw.len());
        for (g, e) in raw {
            if e == 0 {
                continue;
            }
            if let Some(last) = factors.last_mut() {
                if last.0 == g {
                    if g.parity().is_odd() {
                        return None; // odd square
                    }
                    last.1 += e;
                    continue;
                }
            }
            if g.parity().is_odd() && e > 1 {
                return None;
            }
            factors.push((g, e));
        }
        Some((Monomial { factors }, sign))
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    /// Rebuilds a monomial from factors already in normal form.
    pub(crate) fn from_normal_factors(factors: Vec<(Generator, u32)>) -> Monomial {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors
            .iter()
            .all(|(g, e)| *e >= 1 && (!g.parity().is_odd() || *e == 1)));
        Monomial { factors }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total number of letters, counted with multiplicity.
    pub fn letters(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn parity(&self) -> Parity {
        let odd: u32 = self
            .factors
            .iter()
            .filter(|(g, _)| g.parity().is_odd())
            .map(|&(_, e)| e)
            .sum();
        if odd.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Count of momentum letters (p, pd), the filtration weight.
    pub fn momentum_letters(&self) -> u32 {
        self.factors
            .iter()
            .filter(|(g, _)| g.kind.is_momentum())
            .map(|&(_, e)| e)
            .sum()
    }

    /// Largest jet among jet-family letters, or None if there are none.
    pub fn max_jet(&self) -> Option<u32> {
        self.factors
            .iter()
            .filter(|(g, _)| g.kind.is_jet())
            .map(|(g, _)| g.jet)
            .max()
    }

    pub fn exponent_of(&self, g: &Generator) -> u32 {
        self.factors
            .iter()
            .find(|(h, _)| h == g)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Super-commutative product of two normal forms.
    /// Returns None when an odd square makes the product vanish.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, i8)> {
        let mut out: Vec<(Generator, u32)> =
            Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut sign = 1i8;
        let mut it_a = self.factors.iter().peekable();
        let mut it_b = other.factors.iter().peekable();
        // odd letters of `self` not yet consumed; a b-letter placed now
        // jumps over all of them
        let mut odd_rest_a: u32 = self
            .factors
            .iter()
            .filter(|(g, _)| g.parity().is_odd())
            .count() as u32;
        loop {
            match (it_a.peek(), it_b.peek()) {
                (Some(&&(ga, ea)), Some(&&(gb, eb))) => {
                    if ga < gb {
                        out.push((ga, ea));
                        if ga.parity().is_odd() {
                            odd_rest_a -= 1;
                        }
                        it_a.next();
                    } else if ga > gb {
                        if gb.parity().is_odd() && odd_rest_a % 2 == 1 {
                            sign = -sign;
                        }
                        out.push((gb, eb));
                        it_b.next();
                    } else {
                        if ga.parity().is_odd() {
                            return None; // odd square
                        }
                        out.push((ga, ea + eb));
                        it_a.next();
                        it_b.next();
                    }
                }
                (Some(&&(ga, ea)), None) => {
                    out.push((ga, ea));
                    it_a.next();
                }
                (None, Some(&&(gb, eb))) => {
                    if gb.parity().is_odd() && odd_rest_a % 2 == 1 {
                        sign = -sign;
                    }
                    out.push((gb, eb));
                    it_b.next();
                }
                (None, None) => break,
            }
        }
        Some((Monomial { factors: out }, sign))
    }

    /// Splits into the base part (u/du letters) and the jet part.
    /// No sign arises: base letters precede jet letters in the global order.
    pub fn split_base(&self) -> (Monomial, Monomial) {
        let (base, jet): (Vec<_>, Vec<_>) = self
            .factors
            .iter()
            .cloned()
            .partition(|(g, _)| !g.kind.is_jet());
        (Monomial { factors: base }, Monomial { factors: jet })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (g, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{g}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse super-polynomial: monomial -> nonzero rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct State {
    terms: BTreeMap<Monomial, Q>,
}

impl State {
    pub fn zero() -> State {
        State::default()
    }

    /// The vacuum: the empty monomial with coefficient 1.
    pub fn one() -> State {
        State::from_term(Monomial::one(), Q::one())
    }

    pub fn from_term(m: Monomial, c: Q) -> State {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        State { terms }
    }

    pub fn generator(g: Generator) -> State {
        State::from_term(Monomial::single(g), Q::one())
    }

    pub fn constant(c: Q) -> State {
        State::from_term(Monomial::one(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &State) -> State {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> State {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> State {
        if c.is_zero() {
            return State::zero();
        }
        State {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// Super-commutative product.
    pub fn mul(&self, other: &State) -> State {
        let mut out = State::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    pub fn parity(&self) -> StateParity {
        if self.terms.is_empty() {
            return StateParity::Zero;
        }
        let mut it = self.terms.keys();
        let first = it.next().unwrap().parity();
        for m in it {
            if m.parity() != first {
                return StateParity::Mixed;
            }
        }
        match first {
            Parity::Even => StateParity::Even,
            Parity::Odd => StateParity::Odd,
        }
    }

    /// Parity of a parity-homogeneous state, None for mixed states.
    /// The zero state is even by convention.
    pub fn homogeneous_parity(&self) -> Option<Parity> {
        match self.parity() {
            StateParity::Even | StateParity::Zero => Some(Parity::Even),
            StateParity::Odd => Some(Parity::Odd),
            StateParity::Mixed => None,
        }
    }

    /// Largest jet over all jet letters, or None when no jet letter occurs.
    pub fn max_jet(&self) -> Option<u32> {
        self.terms.keys().filter_map(|m| m.max_jet()).max()
    }

    /// Applies an additive map term by term.
    pub fn map_terms(&self, mut f: impl FnMut(&Monomial, &Q) -> State) -> State {
        let mut out = State::zero();
        for (m, c) in &self.terms {
            out = out.add(&f(m, c));
        }
        out
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// The translation derivation: an even derivation with
/// `translate(g^(n)) = (n+1) g^(n+1)` on jet generators; u and du are
/// annihilated (the base is z-constant).
pub fn translate(a: &State) -> State {
    derive_even(a, |g| {
        if g.kind.is_jet() {
            let up = Generator::new(g.kind, g.index, g.jet + 1);
            State::from_term(Monomial::single(up), qi(g.jet as i64 + 1))
        } else {
            State::zero()
        }
    })
}

/// Iterated translation, `translate^k / k!` is *not* folded in here.
pub fn translate_pow(a: &State, k: u32) -> State {
    let mut out = a.clone();
    for _ in 0..k {
        out = translate(&out);
    }
    out
}

/// The base derivative with respect to u(i): an even derivation killing all
/// jet generators and all du(j).
pub fn base_derivative(i: u32, a: &State) -> State {
    derive_even(a, |g| {
        if g.kind == Kind::U && g.index == i {
            State::one()
        } else {
            State::zero()
        }
    })
}

/// An even derivation defined by its values on generators.  One copy of
/// each letter is replaced in place by its image, so Koszul signs reduce
/// to those of the in-order products.
fn derive_even(a: &State, on_gen: impl Fn(&Generator) -> State) -> State {
    a.map_terms(|m, c| {
        let mut out = State::zero();
        for (pos, &(g, e)) in m.factors().iter().enumerate() {
            let image = on_gen(&g);
            if image.is_zero() {
                continue;
            }
            let before = Monomial {
                factors: m.factors()[..pos].to_vec(),
            };
            let mut after_factors = m.factors()[pos..].to_vec();
            if e == 1 {
                after_factors.remove(0);
            } else {
                after_factors[0].1 -= 1;
            }
            let after = Monomial {
                factors: after_factors,
            };
            let term = State::from_term(before, c * qi(e as i64))
                .mul(&image)
                .mul(&State::from_term(after, Q::one()));
            out = out.add(&term);
        }
        out
    })
}

/// Left super partial derivative with respect to a single generator:
/// `partial(g, g) = 1`, odd generators pick up Koszul signs from the
/// letters they jump over.
pub fn partial(g: &Generator, a: &State) -> State {
    let g_odd = g.parity().is_odd();
    a.map_terms(|m, c| {
        let pos = match m.factors().iter().position(|(h, _)| h == g) {
            Some(p) => p,
            None => return State::zero(),
        };
        let (_, e) = m.factors()[pos];
        let mut sign_neg = false;
        if g_odd {
            let odd_before = m.factors()[..pos]
                .iter()
                .filter(|(h, _)| h.parity().is_odd())
                .map(|&(_, e)| e)
                .sum::<u32>();
            sign_neg = odd_before % 2 == 1;
        }
        let mut rest: Vec<(Generator, u32)> = m.factors().to_vec();
        if e == 1 {
            rest.remove(pos);
        } else {
            rest[pos].1 -= 1;
        }
        let mut coeff = c * qi(e as i64);
        if sign_neg {
            coeff = -coeff;
        }
        let (rest_m, s) = Monomial::from_factors(rest).expect("normal form stays valid");
        debug_assert_eq!(s, 1);
        State::from_term(rest_m, coeff)
    })
}

/// Parity report for a state.
pub fn parity(a: &State) -> StateParity {
    a.parity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn st(g: Generator) -> State {
        State::generator(g)
    }

    #[test]
    fn unit_law() {
        let a = st(Generator::x(1, 0)).mul(&st(Generator::dx(2, 1)));
        assert_eq!(State::one().mul(&a), a);
        assert_eq!(a.mul(&State::one()), a);
    }

    #[test]
    fn odd_square_vanishes() {
        let dx = st(Generator::dx(1, 0));
        assert!(dx.mul(&dx).is_zero());
    }

    #[test]
    fn odd_anticommutation() {
        let a = st(Generator::dx(1, 0));
        let b = st(Generator::dx(2, 0));
        assert_eq!(a.mul(&b), b.mul(&a).neg());
    }

    #[test]
    fn translate_on_generators() {
        let x10 = st(Generator::x(1, 0));
        assert_eq!(translate(&x10), st(Generator::x(1, 1)));
        assert!(translate(&State::one()).is_zero());
        let x11 = st(Generator::x(1, 1));
        assert_eq!(translate(&x11), st(Generator::x(1, 2)).scale(&qi(2)));
    }

    #[test]
    fn base_derivative_examples() {
        let u1 = st(Generator::u(1));
        let u2 = st(Generator::u(2));
        assert_eq!(base_derivative(1, &u1.mul(&u2)), u2);
        assert!(base_derivative(1, &st(Generator::x(1, 0))).is_zero());
        let x10 = st(Generator::x(1, 0));
        let a = u1.mul(&u1).mul(&x10);
        assert_eq!(base_derivative(1, &a), u1.mul(&x10).scale(&qi(2)));
    }

    #[test]
    fn partial_examples() {
        let x1 = Generator::x(1, 0);
        let x2 = Generator::x(2, 0);
        let dx1 = Generator::dx(1, 0);
        let dx2 = Generator::dx(2, 0);
        let prod = st(x1).mul(&st(x2));
        assert_eq!(partial(&x1, &prod), st(x2));
        let dprod = st(dx1).mul(&st(dx2));
        assert_eq!(partial(&dx1, &dprod), st(dx2));
        assert_eq!(partial(&dx2, &dprod), st(dx1).neg());
    }

    #[test]
    fn parity_classification() {
        assert_eq!(parity(&State::one()), StateParity::Even);
        assert_eq!(parity(&st(Generator::dx(1, 0))), StateParity::Odd);
        assert_eq!(
            parity(&State::one().add(&st(Generator::dx(1, 0)))),
            StateParity::Mixed
        );
        assert_eq!(parity(&State::zero()), StateParity::Zero);
    }

    #[test]
    fn rendering_canonical() {
        let s = State::from_term(
            Monomial::from_factors(vec![
                (Generator::x(1, 1), 1),
                (Generator::u(1), 1),
                (Generator::dx(2, 0), 1),
            ])
            .unwrap()
            .0,
            q(-2, 3),
        );
        assert_eq!(s.to_string(), "-2/3*u(1)*x(1,1)*dx(2,0)");
    }

    // strategies for property tests

    fn arb_generator() -> impl Strategy<Value = Generator> {
        (0u8..6, 1u32..=2, 0u32..=2).prop_map(|(k, i, n)| {
            let kind = [Kind::U, Kind::Du, Kind::X, Kind::Px, Kind::Dx, Kind::Pdx][k as usize];
            Generator::new(kind, i, if kind.is_jet() { n } else { 0 })
        })
    }

    fn arb_monomial() -> impl Strategy<Value = State> {
        proptest::collection::vec(arb_generator(), 0..4).prop_map(|gens| {
            let mut s = State::one();
            for g in gens {
                s = s.mul(&State::generator(g));
            }
            s
        })
    }

    fn arb_state() -> impl Strategy<Value = State> {
        proptest::collection::vec((arb_monomial(), -3i64..=3), 1..3).prop_map(|parts| {
            let mut s = State::zero();
            for (m, c) in parts {
                s = s.add(&m.scale(&qi(c)));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn mul_associative(a in arb_state(), b in arb_state(), c in arb_state()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn mul_super_commutative(a in arb_monomial(), b in arb_monomial()) {
            let sign = match (a.homogeneous_parity(), b.homogeneous_parity()) {
                (Some(Parity::Odd), Some(Parity::Odd)) => -1,
                _ => 1,
            };
            prop_assert_eq!(a.mul(&b), b.mul(&a).scale(&qi(sign)));
        }

        #[test]
        fn translate_is_derivation(a in arb_state(), b in arb_state()) {
            let lhs = translate(&a.mul(&b));
            let rhs = translate(&a).mul(&b).add(&a.mul(&translate(&b)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn base_derivative_is_derivation(a in arb_state(), b in arb_state()) {
            let lhs = base_derivative(1, &a.mul(&b));
            let rhs = base_derivative(1, &a)
                .mul(&b)
                .add(&a.mul(&base_derivative(1, &b)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn partial_signed_leibniz(g in arb_generator(), a in arb_monomial(), b in arb_state()) {
            let lhs = partial(&g, &a.mul(&b));
            let sign = if g.parity().is_odd()
                && a.homogeneous_parity() == Some(Parity::Odd)
            {
                -1
            } else {
                1
            };
            let rhs = partial(&g, &a)
                .mul(&b)
                .add(&a.mul(&partial(&g, &b)).scale(&qi(sign)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn odd_partial_squares_to_zero(a in arb_state()) {
            let g = Generator::dx(1, 0);
            prop_assert!(partial(&g, &partial(&g, &a)).is_zero());
        }

        #[test]
        fn partials_super_commute(a in arb_state()) {
            // odd pair anticommutes, even/odd pair commutes
            let g = Generator::dx(1, 0);
            let h = Generator::pdx(2, 1);
            let gh = partial(&g, &partial(&h, &a));
            let hg = partial(&h, &partial(&g, &a));
            prop_assert_eq!(gh, hg.neg());
            let e = Generator::x(1, 0);
            let ge = partial(&g, &partial(&e, &a));
            let eg = partial(&e, &partial(&g, &a));
            prop_assert_eq!(ge, eg);
        }

        #[test]
        fn translate_commutes_with_base_derivative(a in arb_state()) {
            let lhs = translate(&base_derivative(1, &a));
            let rhs = base_derivative(1, &translate(&a));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
