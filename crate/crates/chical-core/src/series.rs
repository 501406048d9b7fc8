//! Laurent-type expansions in one difference variable and the
//! domain-dependent re-expansion tables used by the Borcherds-identity
//! checker.

use crate::superjet::{binomial, Q, State};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default horizon for the regular part of an OPE.
pub const DEFAULT_HORIZON: i64 = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("regular part not computed to that order (requested {requested}, horizon {horizon})")]
    BeyondHorizon { requested: i64, horizon: i64 },
}

/// A finite window of a Laurent expansion in (z1-z2): the complete singular
/// part plus the regular part up to `max_computed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpeSeries {
    coeffs: BTreeMap<i64, State>,
    min_power: i64,
    max_computed: i64,
}

impl OpeSeries {
    /// Assembles a series from (power, coefficient) pairs.  Zero
    /// coefficients are dropped; everything below the smallest stored power
    /// is identically zero by construction.
    pub fn new(pairs: impl IntoIterator<Item = (i64, State)>, max_computed: i64) -> OpeSeries {
        let mut coeffs = BTreeMap::new();
        for (k, s) in pairs {
            if !s.is_zero() {
                debug_assert!(k <= max_computed);
                coeffs.insert(k, s);
            }
        }
        let min_power = coeffs.keys().next().copied().unwrap_or(0);
        OpeSeries {
            coeffs,
            min_power,
            max_computed,
        }
    }

    pub fn min_power(&self) -> i64 {
        self.min_power
    }

    pub fn max_computed(&self) -> i64 {
        self.max_computed
    }

    /// Deepest pole order present, 0 for a regular series.
    pub fn pole_order(&self) -> i64 {
        (-self.min_power).max(0)
    }

    /// The coefficient of (z1-z2)^k; requests beyond the computed horizon
    /// are errors, anything below the singular part is zero.
    pub fn coefficient(&self, k: i64) -> Result<State, SeriesError> {
        if k > self.max_computed {
            return Err(SeriesError::BeyondHorizon {
                requested: k,
                horizon: self.max_computed,
            });
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(State::zero))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &State)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl std::fmt::Display for OpeSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 (horizon {})", self.max_computed);
        }
        let mut first = true;
        for (k, s) in &self.coeffs {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "[{k}] {s}")?;
        }
        write!(f, " (horizon {})", self.max_computed)
    }
}

/// Which of the three geometric expansions of an inverse difference applies.
///
/// The tags name the dominant difference: `D13GtD23` expands on
/// |z1-z3| > |z2-z3|, and so on.  The first two expand powers of (z1-z2)
/// in the variables (z1-z3, z2-z3); the third expands powers of (z1-z3)
/// in the variables (z1-z2, z2-z3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionDomain {
    D13GtD23,
    D23GtD13,
    D23GtD12,
}

/// Sparse bivariate table: (exponent of first variable, exponent of second
/// variable) -> rational coefficient.  The variable pair depends on the
/// domain that produced the table.
pub type BivariateTable = BTreeMap<(i64, i64), Q>;

/// Expands the domain's inverse difference raised to `exponent` as a
/// geometric-type series, up to `order` terms of the expansion parameter.
/// Non-negative exponents yield the finite binomial table.
///
/// * `D13GtD23`: (z1-z2)^e = sum_j C(e,j) (-1)^j (z1-z3)^(e-j) (z2-z3)^j,
///   table keys are (exponent of z1-z3, exponent of z2-z3);
/// * `D23GtD13`: (z1-z2)^e = (-1)^e sum_j C(e,j) (-1)^j (z2-z3)^(e-j)
///   (z1-z3)^j, same key convention;
/// * `D23GtD12`: (z1-z3)^e = sum_j C(e,j) (z2-z3)^(e-j) (z1-z2)^j,
///   table keys are (exponent of z1-z2, exponent of z2-z3).
pub fn expand_inverse_difference(
    domain: ExpansionDomain,
    exponent: i64,
    order: i64,
) -> BivariateTable {
    assert!(order >= 0, "expansion order must be non-negative");
    let j_max = if exponent >= 0 {
        exponent.min(order)
    } else {
        order
    };
    let mut table = BivariateTable::new();
    for j in 0..=j_max {
        let c = binomial(exponent, j);
        if c.is_zero() {
            continue;
        }
        let (key, value) = match domain {
            ExpansionDomain::D13GtD23 => {
                let v = if j % 2 == 0 { c } else { -c };
                ((exponent - j, j), v)
            }
            ExpansionDomain::D23GtD13 => {
                let mut v = if j % 2 == 0 { c } else { -c };
                if exponent.rem_euclid(2) == 1 {
                    v = -v;
                }
                ((j, exponent - j), v)
            }
            ExpansionDomain::D23GtD12 => ((j, exponent - j), c),
        };
        table.insert(key, value);
    }
    table
}

/// Re-expands (z1-z2)^(-s-1) (z2-z3)^(-t-1) in the domain where (z1-z2) is
/// dominant against (z2-z3): the coefficient of
/// (z1-z3)^(-j-1) (z2-z3)^(-t+j-s-1) is C(j, s), tabulated for j <= order.
/// Keys are (exponent of z1-z3, exponent of z2-z3).
pub fn reexpand_double_pole(s: i64, t: i64, order: i64) -> BivariateTable {
    assert!(s >= 0 && t >= 0, "pole orders must be non-negative");
    assert!(order >= 0);
    let mut table = BivariateTable::new();
    for j in 0..=order {
        let c = binomial(j, s);
        if !c.is_zero() {
            table.insert((-j - 1, -t + j - s - 1), c);
        }
    }
    table
}

/// Multiplies two sparse bivariate tables (same variable pair).
pub fn table_mul(a: &BivariateTable, b: &BivariateTable) -> BivariateTable {
    let mut out = BivariateTable::new();
    for ((p1, q1), c1) in a {
        for ((p2, q2), c2) in b {
            let key = (p1 + p2, q1 + q2);
            let v = out.entry(key).or_insert_with(Q::zero);
            *v += c1 * c2;
            if v.is_zero() {
                out.remove(&key);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superjet::qi;

    #[test]
    fn coefficient_window() {
        let s = OpeSeries::new([(-1, State::one())], 4);
        assert_eq!(s.coefficient(-3), Ok(State::zero()));
        assert_eq!(s.coefficient(-1), Ok(State::one()));
        assert_eq!(s.coefficient(0), Ok(State::zero()));
        assert!(matches!(
            s.coefficient(5),
            Err(SeriesError::BeyondHorizon { .. })
        ));
        assert_eq!(s.min_power(), -1);
    }

    #[test]
    fn geometric_expansions_match_their_displays() {
        // 1/(z1-z2) on |z1-z3| > |z2-z3|: coefficient 1 at every
        // (z2-z3)^j (z1-z3)^(-j-1)
        let t = expand_inverse_difference(ExpansionDomain::D13GtD23, -1, 2);
        for j in 0..=2 {
            assert_eq!(t.get(&(-1 - j, j)), Some(&qi(1)));
        }
        // the companion expansion carries the overall minus
        let t = expand_inverse_difference(ExpansionDomain::D23GtD13, -1, 2);
        for j in 0..=2 {
            assert_eq!(t.get(&(j, -1 - j)), Some(&qi(-1)));
        }
        // 1/(z1-z3) on |z2-z3| > |z1-z2| alternates
        let t = expand_inverse_difference(ExpansionDomain::D23GtD12, -1, 3);
        for j in 0..=3 {
            assert_eq!(t.get(&(j, -1 - j)), Some(&qi(if j % 2 == 0 { 1 } else { -1 })));
        }
    }

    #[test]
    fn positive_exponents_are_finite_binomials() {
        let t = expand_inverse_difference(ExpansionDomain::D13GtD23, 2, 10);
        let vals: Vec<_> = (0..=2).map(|j| t[&(2 - j, j)].clone()).collect();
        assert_eq!(vals, vec![qi(1), qi(-2), qi(1)]);
        assert_eq!(t.len(), 3);

        let t = expand_inverse_difference(ExpansionDomain::D23GtD13, 2, 10);
        let vals: Vec<_> = (0..=2).map(|j| t[&(j, 2 - j)].clone()).collect();
        assert_eq!(vals, vec![qi(1), qi(-2), qi(1)]);

        // the third domain expands a sum, not a difference
        let t = expand_inverse_difference(ExpansionDomain::D23GtD12, 2, 10);
        let vals: Vec<_> = (0..=2).map(|j| t[&(j, 2 - j)].clone()).collect();
        assert_eq!(vals, vec![qi(1), qi(2), qi(1)]);
    }

    #[test]
    fn reexpand_double_pole_examples() {
        // s=0, t=0: C(j,0) = 1
        let t = reexpand_double_pole(0, 0, 2);
        for j in 0..=2 {
            assert_eq!(t.get(&(-j - 1, j - 1)), Some(&qi(1)));
        }
        // s=1, t=0: C(j,1) = j, frozen from the direct binomial expansion
        // of (1-w)^(-2)
        let t = reexpand_double_pole(1, 0, 3);
        assert_eq!(t.get(&(-1, -2)), None); // j=0 coefficient 0
        for j in 1..=3 {
            assert_eq!(t.get(&(-j - 1, j - 2)), Some(&qi(j)));
        }
        // s=0, t=5, order 0: leading term only
        let t = reexpand_double_pole(0, 5, 0);
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(&(-1, -6)), Some(&qi(1)));
    }

    #[test]
    fn expansion_times_difference_is_one() {
        // (z1-z2) = (z1-z3) - (z2-z3) times the geometric table of
        // 1/(z1-z2) telescopes to 1 up to the computed order
        let order = 6;
        let inv = expand_inverse_difference(ExpansionDomain::D13GtD23, -1, order);
        let mut diff = BivariateTable::new();
        diff.insert((1, 0), qi(1));
        diff.insert((0, 1), qi(-1));
        let prod = table_mul(&inv, &diff);
        // complete entries have (z2-z3)-degree < order
        for ((p, q), c) in &prod {
            if *q < order {
                assert_eq!((p, q, c), (&0, &0, &qi(1)));
            }
        }
        assert_eq!(prod.get(&(0, 0)), Some(&qi(1)));
    }

    #[test]
    fn reexpansion_times_pole_recovers_single_pole() {
        // table(s,t) * (z1-z2)^(s+1) = (z2-z3)^(-t-1) up to the order
        for (s, t) in [(0i64, 0i64), (1, 0), (2, 3), (0, 5)] {
            let order = 8;
            let table = reexpand_double_pole(s, t, order);
            let pole = expand_inverse_difference(ExpansionDomain::D13GtD23, s + 1, order);
            let prod = table_mul(&table, &pole);
            for ((p, q), c) in &prod {
                // entries with (z1-z3)-degree above the truncation tail
                // are exact
                if *p > -(order - s) {
                    assert_eq!((p, q), (&0, &(-t - 1)), "stray term {c} at {p},{q}");
                    assert_eq!(c, &qi(1));
                }
            }
            assert_eq!(prod.get(&(0, -t - 1)), Some(&qi(1)));
        }
    }
}
