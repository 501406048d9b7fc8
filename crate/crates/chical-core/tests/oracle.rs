//! Exhaustive small-scale agreement of the two n-th-product algorithms.
//!
//! The recursive normal-ordering product and the closed-form Wick sum are
//! mutually independent implementations; any sign-convention slip shows up
//! as a mismatch here.

use chical_core::span::{spanning_monomials, SpanBounds};
use chical_core::superjet::{Monomial, Q, State};
use chical_core::vertex::{nprod, pole_bound, wick_nprod};
use num::One;

fn st(m: &Monomial) -> State {
    State::from_term(m.clone(), Q::one())
}

#[test]
fn oracle_equivalence_exhaustive_two_letters() {
    let bounds = SpanBounds {
        n: 2,
        m: 0,
        max_letters: 2,
        max_jet: 1,
    };
    let span = spanning_monomials(&bounds);
    for ma in &span {
        for mb in &span {
            let a = st(ma);
            let b = st(mb);
            let bound = pole_bound(&a, &b);
            for n in -2..bound {
                assert_eq!(
                    nprod(&a, n, &b),
                    wick_nprod(&a, n, &b),
                    "n = {n}, a = {a}, b = {b}"
                );
            }
        }
    }
}

#[test]
fn oracle_equivalence_three_letters_with_base() {
    let bounds = SpanBounds {
        n: 1,
        m: 1,
        max_letters: 3,
        max_jet: 2,
    };
    let span = spanning_monomials(&bounds);
    // stride through the set to keep the quadratic pairing affordable
    let picks: Vec<_> = span.iter().step_by(13).collect();
    for ma in &picks {
        for mb in &picks {
            let a = st(ma);
            let b = st(mb);
            let bound = pole_bound(&a, &b);
            for n in -3..bound {
                assert_eq!(
                    nprod(&a, n, &b),
                    wick_nprod(&a, n, &b),
                    "n = {n}, a = {a}, b = {b}"
                );
            }
        }
    }
}
