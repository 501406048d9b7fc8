//! Deterministic spanning sets of normal-form monomials, used by the
//! extensional operator-equality checks.

use crate::superjet::{Generator, Kind, Monomial};

/// Bounds for a spanning set.
#[derive(Clone, Copy, Debug)]
pub struct SpanBounds {
    /// Number of fibre coordinates.
    pub n: u32,
    /// Number of base coordinates.
    pub m: u32,
    /// Total letters per monomial, counted with multiplicity.
    pub max_letters: u32,
    /// Largest jet on x/p/dx/pd letters.
    pub max_jet: u32,
}

/// The ordered generator pool for the given bounds.
pub fn generator_pool(b: &SpanBounds) -> Vec<Generator> {
    let mut pool = Vec::new();
    for i in 1..=b.m {
        pool.push(Generator::u(i));
    }
    for i in 1..=b.m {
        pool.push(Generator::du(i));
    }
    for kind in [Kind::X, Kind::Px, Kind::Dx, Kind::Pdx] {
        for i in 1..=b.n {
            for jet in 0..=b.max_jet {
                pool.push(Generator::new(kind, i, jet));
            }
        }
    }
    pool.sort();
    pool
}

/// Every normal-form monomial over the pool with at most `max_letters`
/// letters, the empty monomial included, in a deterministic order.
pub fn spanning_monomials(b: &SpanBounds) -> Vec<Monomial> {
    let pool = generator_pool(b);
    let mut out = Vec::new();
    let mut current: Vec<(Generator, u32)> = Vec::new();
    fn rec(
        pool: &[Generator],
        from: usize,
        letters_left: u32,
        current: &mut Vec<(Generator, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        out.push(
            Monomial::from_factors(current.clone())
                .expect("factors are strictly increasing")
                .0,
        );
        for idx in from..pool.len() {
            let g = pool[idx];
            let cap = if g.parity().is_odd() { 1 } else { letters_left };
            for e in 1..=cap {
                if e > letters_left {
                    break;
                }
                current.push((g, e));
                rec(pool, idx + 1, letters_left - e, current, out);
                current.pop();
            }
        }
    }
    rec(&pool, 0, b.max_letters, &mut current, &mut out);
    out.sort();
    out.dedup();
    out
}

/// The subset of the spanning set living in the form ring: x and dx at
/// jet 0, u and du.
pub fn spanning_form_monomials(b: &SpanBounds) -> Vec<Monomial> {
    let restricted = SpanBounds { max_jet: 0, ..*b };
    spanning_monomials(&restricted)
        .into_iter()
        .filter(|m| {
            m.factors()
                .iter()
                .all(|(g, _)| matches!(g.kind, Kind::X | Kind::Dx | Kind::U | Kind::Du))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_stable() {
        let b = SpanBounds {
            n: 1,
            m: 0,
            max_letters: 2,
            max_jet: 0,
        };
        // generators: x, p, dx, pd; monomials of degree <= 2:
        // 1, four singletons, x^2, p^2, and the six square-free pairs
        let span = spanning_monomials(&b);
        assert_eq!(span.len(), 1 + 4 + 2 + 6);
    }

    #[test]
    fn respects_odd_exponent_cap() {
        let b = SpanBounds {
            n: 1,
            m: 1,
            max_letters: 3,
            max_jet: 1,
        };
        for m in spanning_monomials(&b) {
            for (g, e) in m.factors() {
                if g.parity().is_odd() {
                    assert_eq!(*e, 1);
                }
            }
            assert!(m.letters() <= 3);
        }
    }
}
