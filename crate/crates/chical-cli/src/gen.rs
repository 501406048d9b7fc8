//! Seeded random instance generation for the verification suites.
//!
//! Monomials draw at most `letters` generators with jets up to `jet` and
//! indices up to N (fibre) and M (base); coefficients are drawn from
//! {-3..3} without 0.  Everything is driven by an explicit ChaCha stream,
//! so identical parameters reproduce identical instances.

use chical_core::cartan::VectorField;
use chical_core::gaussmanin::Connection;
use chical_core::superjet::{qi, Generator, Kind, Parity, State};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub n: u32,
    pub m: u32,
    pub letters: u32,
    pub jet: u32,
    pub deg: u32,
}

impl GenParams {
    pub fn echo(&self, cases: u32) -> String {
        format!(
            "cases={cases} N={} M={} deg={} jet={} letters={}",
            self.n, self.m, self.deg, self.jet, self.letters
        )
    }
}

pub type Rng32 = ChaCha8Rng;

fn coeff(rng: &mut Rng32) -> i64 {
    let c = rng.random_range(1..=3i64);
    if rng.random_bool(0.5) {
        c
    } else {
        -c
    }
}

fn random_generator(rng: &mut Rng32, p: &GenParams) -> Generator {
    // base letters appear only when the chart has a base
    let kinds: &[Kind] = if p.m > 0 {
        &[Kind::U, Kind::Du, Kind::X, Kind::Px, Kind::Dx, Kind::Pdx]
    } else {
        &[Kind::X, Kind::Px, Kind::Dx, Kind::Pdx]
    };
    let kind = kinds[rng.random_range(0..kinds.len())];
    let index = match kind {
        Kind::U | Kind::Du => rng.random_range(1..=p.m),
        _ => rng.random_range(1..=p.n),
    };
    let jet = if kind.is_jet() {
        rng.random_range(0..=p.jet)
    } else {
        0
    };
    Generator::new(kind, index, jet)
}

/// One random monomial with a random small coefficient; may come out zero
/// when an odd letter repeats, in which case the caller redraws.
fn random_monomial(rng: &mut Rng32, p: &GenParams) -> State {
    let count = rng.random_range(0..=p.letters);
    let mut s = State::constant(qi(coeff(rng)));
    for _ in 0..count {
        s = s.mul(&State::generator(random_generator(rng, p)));
    }
    s
}

/// A random state with one to three monomials.
pub fn random_state(rng: &mut Rng32, p: &GenParams) -> State {
    loop {
        let terms = rng.random_range(1..=3);
        let mut s = State::zero();
        for _ in 0..terms {
            s = s.add(&random_monomial(rng, p));
        }
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random parity-homogeneous state.
pub fn random_homogeneous_state(rng: &mut Rng32, p: &GenParams) -> State {
    let want = if rng.random_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    };
    loop {
        let terms = rng.random_range(1..=2);
        let mut s = State::zero();
        for _ in 0..terms {
            let m = random_monomial(rng, p);
            if m.homogeneous_parity() == Some(want) && !m.is_zero() {
                s = s.add(&m);
            }
        }
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random coefficient polynomial in x (jet 0) and u of total degree at
/// most `deg`, for vector-field components.
pub fn random_coefficient_poly(rng: &mut Rng32, n: u32, m: u32, deg: u32) -> State {
    let terms = rng.random_range(0..=2);
    let mut s = State::zero();
    for _ in 0..terms {
        let d = rng.random_range(0..=deg);
        let mut mono = State::constant(qi(coeff(rng)));
        for _ in 0..d {
            let g = if m > 0 && rng.random_bool(0.4) {
                Generator::u(rng.random_range(1..=m))
            } else {
                Generator::x(rng.random_range(1..=n), 0)
            };
            mono = mono.mul(&State::generator(g));
        }
        s = s.add(&mono);
    }
    s
}

/// A random vector field on an N-dimensional chart over an M-dimensional
/// base.
pub fn random_vector_field(rng: &mut Rng32, n: u32, m: u32, deg: u32) -> VectorField {
    let components = (0..n)
        .map(|_| random_coefficient_poly(rng, n, m, deg))
        .collect();
    VectorField::new(components)
}

/// A random connection: M lifting fields.
pub fn random_connection(rng: &mut Rng32, m: u32, n: u32, deg: u32) -> Connection {
    let xi = (0..m)
        .map(|_| random_vector_field(rng, n, m, deg))
        .collect();
    Connection::new(n as usize, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generation_is_deterministic() {
        let p = GenParams {
            n: 2,
            m: 1,
            letters: 4,
            jet: 2,
            deg: 2,
        };
        let mut a = Rng32::seed_from_u64(7);
        let mut b = Rng32::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(random_state(&mut a, &p), random_state(&mut b, &p));
        }
        let mut a = Rng32::seed_from_u64(9);
        let mut b = Rng32::seed_from_u64(9);
        assert_eq!(
            random_connection(&mut a, 2, 2, 2),
            random_connection(&mut b, 2, 2, 2)
        );
    }

    #[test]
    fn homogeneous_states_are_homogeneous() {
        let p = GenParams {
            n: 2,
            m: 0,
            letters: 4,
            jet: 2,
            deg: 2,
        };
        let mut rng = Rng32::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_homogeneous_state(&mut rng, &p);
            assert!(s.homogeneous_parity().is_some());
        }
    }

    #[test]
    fn coefficient_polys_stay_in_bounds() {
        let mut rng = Rng32::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_coefficient_poly(&mut rng, 2, 2, 2);
            for (m, _) in f.terms() {
                assert!(m.letters() <= 2);
                for (g, _) in m.factors() {
                    assert!(matches!(g.kind, Kind::X | Kind::U));
                }
            }
        }
    }
}
