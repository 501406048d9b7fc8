//! Connections, curvature, the classical and chiral connection-complex
//! differentials, and the exponential gluing isomorphisms with their
//! cocycle checks.
//!
//! Operators on states are opaque linear endomorphisms compared
//! extensionally on documented spanning sets of normal-form monomials.

use crate::cartan::{cl_d, cl_iota, cl_lie, d_ch, iota_ch, lie_ch, vf_bracket, Form, VectorField};
use crate::check::{expect_eq, CheckResult};
use crate::span::{spanning_form_monomials, spanning_monomials, SpanBounds};
use crate::superjet::{base_derivative, qi, Generator, Monomial, Q, State};
use crate::vertex::nprod;
use num::One;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("mismatched dimensions: ({m1}, {n1}) vs ({m2}, {n2})")]
    DimensionMismatch { m1: usize, n1: usize, m2: usize, n2: usize },
}

/// A connection on the chart: one lifting vector field per base coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    n: usize,
    xi: Vec<VectorField>,
}

impl Connection {
    pub fn new(n: usize, xi: Vec<VectorField>) -> Connection {
        for f in &xi {
            assert_eq!(f.dim(), n, "component dimension mismatch");
        }
        Connection { n, xi }
    }

    pub fn flat(m: usize, n: usize) -> Connection {
        Connection {
            n,
            xi: vec![VectorField::zero(n); m],
        }
    }

    /// Number of base coordinates.
    pub fn base_dim(&self) -> usize {
        self.xi.len()
    }

    /// Number of fibre coordinates.
    pub fn fibre_dim(&self) -> usize {
        self.n
    }

    /// The lifting field of d/du_i, 1-based.
    pub fn xi(&self, i: usize) -> &VectorField {
        &self.xi[i - 1]
    }
}

/// The curvature components R_ij for i < j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curvature {
    m: usize,
    n: usize,
    r: Vec<((usize, usize), VectorField)>,
}

impl Curvature {
    /// R_ij for arbitrary index order; antisymmetry is handled by lookup.
    pub fn component(&self, i: usize, j: usize) -> VectorField {
        if i == j {
            return VectorField::zero(self.n);
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        let f = self
            .r
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, f)| f.clone())
            .unwrap_or_else(|| VectorField::zero(self.n));
        if flip {
            f.scale(&-Q::one())
        } else {
            f
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &VectorField)> {
        self.r.iter().map(|(k, f)| (k, f))
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(|(_, f)| f.is_zero())
    }
}

/// Componentwise base derivative of a vector field.
fn vf_base_derivative(i: usize, f: &VectorField) -> VectorField {
    VectorField::new(
        f.components()
            .iter()
            .map(|c| base_derivative(i as u32, c))
            .collect(),
    )
}

/// The curvature R_ij = d_{u_i} xi_j - d_{u_j} xi_i + [xi_i, xi_j].
pub fn curvature(c: &Connection) -> Curvature {
    let m = c.base_dim();
    let mut r = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            let f = vf_base_derivative(i, c.xi(j))
                .sub(&vf_base_derivative(j, c.xi(i)))
                .add(&vf_bracket(c.xi(i), c.xi(j)));
            r.push(((i, j), f));
        }
    }
    Curvature { m, n: c.fibre_dim(), r }
}

/// The Bianchi identity: the cyclic sum of d_{u_i} R_jk + [xi_i, R_jk]
/// vanishes for every i < j < k.
pub fn bianchi_check(c: &Connection) -> CheckResult {
    let m = c.base_dim();
    let r = curvature(c);
    for i in 1..=m {
        for j in (i + 1)..=m {
            for k in (j + 1)..=m {
                let mut total = VectorField::zero(c.fibre_dim());
                for (p, q, s) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let rqs = r.component(q, s);
                    total = total
                        .add(&vf_base_derivative(p, &rqs))
                        .add(&vf_bracket(c.xi(p), &rqs));
                }
                expect_eq(
                    "bianchi",
                    &format!("cyclic sum at ({i},{j},{k})"),
                    total,
                    VectorField::zero(c.fibre_dim()),
                )?;
            }
        }
    }
    Ok(())
}

/// An opaque linear endomorphism of states with a description tag.
#[derive(Clone)]
pub struct ConnectionOperator {
    tag: String,
    op: Rc<dyn Fn(&State) -> State>,
}

impl ConnectionOperator {
    pub fn new(tag: impl Into<String>, op: impl Fn(&State) -> State + 'static) -> Self {
        ConnectionOperator {
            tag: tag.into(),
            op: Rc::new(op),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn apply(&self, s: &State) -> State {
        (self.op)(s)
    }

    pub fn compose(&self, inner: &ConnectionOperator) -> ConnectionOperator {
        let f = self.op.clone();
        let g = inner.op.clone();
        ConnectionOperator {
            tag: format!("{} . {}", self.tag, inner.tag),
            op: Rc::new(move |s| f(&g(s))),
        }
    }
}

impl std::fmt::Debug for ConnectionOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ConnectionOperator({})", self.tag)
    }
}

/// The zero mode of a fixed state as a memoized linear operator; the cache
/// is keyed per input monomial.
pub fn zero_mode_op(a: State) -> impl Fn(&State) -> State {
    let cache: RefCell<HashMap<Monomial, State>> = RefCell::new(HashMap::new());
    move |s: &State| {
        let mut out = State::zero();
        for (m, c) in s.terms() {
            let hit = cache
                .borrow_mut()
                .entry(m.clone())
                .or_insert_with(|| nprod(&a, 0, &State::from_term(m.clone(), Q::one())))
                .clone();
            out = out.add(&hit.scale(c));
        }
        out
    }
}

fn du_state(i: usize) -> State {
    State::generator(Generator::du(i as u32))
}

/// The chiral connection-complex differential
/// du_i (d_{u_i} + (lie xi_i)_(0)) + (d_ch)_(0) - du_i du_j (iota R_ij)_(0),
/// with the du multiplication applied on the left after the derivation.
pub fn d_chiral(c: &Connection) -> ConnectionOperator {
    let m = c.base_dim();
    let n = c.fibre_dim();
    let lie_ops: Vec<_> = (1..=m)
        .map(|i| zero_mode_op(lie_ch(c.xi(i))))
        .collect();
    let r = curvature(c);
    let iota_ops: Vec<((usize, usize), _)> = r
        .iter()
        .map(|(&(i, j), f)| ((i, j), zero_mode_op(iota_ch(f))))
        .collect();
    let d0 = zero_mode_op(d_ch(n));
    ConnectionOperator::new(format!("D_chiral(M={m},N={n})"), move |s| {
        let mut out = d0(s);
        for (i, lie) in lie_ops.iter().enumerate() {
            let t = base_derivative(i as u32 + 1, s).add(&lie(s));
            out = out.add(&du_state(i + 1).mul(&t));
        }
        for ((i, j), iota) in &iota_ops {
            let t = iota(s);
            out = out.sub(&du_state(*i).mul(&du_state(*j)).mul(&t));
        }
        out
    })
}

/// The classical counterpart acting on the form ring:
/// du_i (d_{u_i} + Lie_{xi_i}) + d - du_i du_j iota_{R_ij}.
pub fn d_classical(c: &Connection) -> ConnectionOperator {
    let m = c.base_dim();
    let n = c.fibre_dim();
    let xi: Vec<_> = (1..=m).map(|i| c.xi(i).clone()).collect();
    let r = curvature(c);
    let r_comps: Vec<((usize, usize), VectorField)> =
        r.iter().map(|(&k, f)| (k, f.clone())).collect();
    ConnectionOperator::new(format!("D_classical(M={m},N={n})"), move |s| {
        let form = Form::new(s.clone());
        let mut out = cl_d(n, &form).into_state();
        for (i, field) in xi.iter().enumerate() {
            let t = base_derivative(i as u32 + 1, s).add(&cl_lie(field, &form).into_state());
            out = out.add(&du_state(i + 1).mul(&t));
        }
        for ((i, j), f) in &r_comps {
            let t = cl_iota(f, &form).into_state();
            out = out.sub(&du_state(*i).mul(&du_state(*j)).mul(&t));
        }
        out
    })
}

/// The gluing isomorphism exp(iota_{nabla_2 - nabla_1}): the exponent
/// raises exterior u-degree, so the series truncates at M + 1 terms.
pub fn glue(c1: &Connection, c2: &Connection, classical: bool) -> Result<ConnectionOperator, GlueError> {
    if c1.base_dim() != c2.base_dim() || c1.fibre_dim() != c2.fibre_dim() {
        return Err(GlueError::DimensionMismatch {
            m1: c1.base_dim(),
            n1: c1.fibre_dim(),
            m2: c2.base_dim(),
            n2: c2.fibre_dim(),
        });
    }
    let m = c1.base_dim();
    let diffs: Vec<VectorField> = (1..=m)
        .map(|i| c2.xi(i).sub(c1.xi(i)))
        .collect();
    let theta: Rc<dyn Fn(&State) -> State> = if classical {
        let diffs = diffs.clone();
        Rc::new(move |s: &State| {
            let form = Form::new(s.clone());
            let mut out = State::zero();
            for (i, f) in diffs.iter().enumerate() {
                out = out.add(&du_state(i + 1).mul(&cl_iota(f, &form).into_state()));
            }
            out
        })
    } else {
        let iota_ops: Vec<_> = diffs
            .iter()
            .map(|f| zero_mode_op(iota_ch(f)))
            .collect();
        Rc::new(move |s: &State| {
            let mut out = State::zero();
            for (i, op) in iota_ops.iter().enumerate() {
                out = out.add(&du_state(i + 1).mul(&op(s)));
            }
            out
        })
    };
    let kind = if classical { "classical" } else { "chiral" };
    Ok(ConnectionOperator::new(
        format!("glue[{kind}](M={m})"),
        move |s| {
            let mut out = s.clone();
            let mut power = s.clone();
            let mut fact = Q::one();
            for k in 1..=(m as i64 + 1) {
                power = theta(&power);
                if power.is_zero() {
                    break;
                }
                fact *= qi(k);
                out = out.add(&power.scale(&(Q::one() / &fact)));
            }
            out
        },
    ))
}

/// Extensional operator equality on a spanning sample.
pub fn check_operators_equal(
    name: &str,
    lhs: &ConnectionOperator,
    rhs: &ConnectionOperator,
    samples: &[Monomial],
) -> CheckResult {
    for m in samples {
        let s = State::from_term(m.clone(), Q::one());
        expect_eq(
            name,
            &format!("{} vs {} on {}", lhs.tag(), rhs.tag(), m),
            lhs.apply(&s),
            rhs.apply(&s),
        )?;
    }
    Ok(())
}

/// D squared vanishes on the full spanning set within the bounds, both
/// classically and chirally.
pub fn check_dsquare(c: &Connection, bounds: &SpanBounds) -> CheckResult {
    let d = d_chiral(c);
    for m in spanning_monomials(bounds) {
        let s = State::from_term(m.clone(), Q::one());
        expect_eq(
            "dsquare-chiral",
            &format!("D^2 on {m}"),
            d.apply(&d.apply(&s)),
            State::zero(),
        )?;
    }
    let d = d_classical(c);
    for m in spanning_form_monomials(bounds) {
        let s = State::from_term(m.clone(), Q::one());
        expect_eq(
            "dsquare-classical",
            &format!("D^2 on {m}"),
            d.apply(&d.apply(&s)),
            State::zero(),
        )?;
    }
    Ok(())
}

/// The three identities used in the proof that the chiral differential
/// squares to zero, each checked separately on the sample:
/// the square of the lifted connection is the lifted curvature, the
/// de Rham zero mode pairs with the curvature contraction to the curvature
/// Lie lift, and the lifted connection anti-commutes with the curvature
/// contraction (the contraction of the Bianchi bracket).
pub fn check_dsquare_proof_identities(c: &Connection, samples: &[Monomial]) -> CheckResult {
    let m = c.base_dim();
    let n = c.fibre_dim();
    let r = curvature(c);
    let lie_ops: Vec<_> = (1..=m).map(|i| zero_mode_op(lie_ch(c.xi(i)))).collect();
    let lie_nabla = move |s: &State| {
        let mut out = State::zero();
        for (i, lie) in lie_ops.iter().enumerate() {
            let t = base_derivative(i as u32 + 1, s).add(&lie(s));
            out = out.add(&du_state(i + 1).mul(&t));
        }
        out
    };
    let lie_r_ops: Vec<((usize, usize), _)> = r
        .iter()
        .map(|(&k, f)| (k, zero_mode_op(lie_ch(f))))
        .collect();
    let lie_r = move |s: &State| {
        let mut out = State::zero();
        for ((i, j), op) in &lie_r_ops {
            out = out.add(&du_state(*i).mul(&du_state(*j)).mul(&op(s)));
        }
        out
    };
    let iota_r_ops: Vec<((usize, usize), _)> = r
        .iter()
        .map(|(&k, f)| (k, zero_mode_op(iota_ch(f))))
        .collect();
    let iota_r = move |s: &State| {
        let mut out = State::zero();
        for ((i, j), op) in &iota_r_ops {
            out = out.add(&du_state(*i).mul(&du_state(*j)).mul(&op(s)));
        }
        out
    };
    let d0 = zero_mode_op(d_ch(n));

    for mono in samples {
        let s = State::from_term(mono.clone(), Q::one());
        expect_eq(
            "dsquare-proof",
            &format!("lifted-connection square is the curvature lift on {mono}"),
            lie_nabla(&lie_nabla(&s)),
            lie_r(&s),
        )?;
        expect_eq(
            "dsquare-proof",
            &format!("de Rham zero mode pairs with the curvature contraction on {mono}"),
            d0(&iota_r(&s)).add(&iota_r(&d0(&s))),
            lie_r(&s),
        )?;
        expect_eq(
            "dsquare-proof",
            &format!("connection lift anti-commutes with the curvature contraction on {mono}"),
            lie_nabla(&iota_r(&s)).add(&iota_r(&lie_nabla(&s))),
            State::zero(),
        )?;
    }
    Ok(())
}

/// Exterior-degree structure of the chiral differential on a sample: the
/// three summands raise the du-count by 0, 1 and 2, and the degree-0 piece
/// is exactly the de Rham zero mode.
pub fn check_du_degree_decomposition(c: &Connection, samples: &[Monomial]) -> CheckResult {
    let n = c.fibre_dim();
    let d = d_chiral(c);
    let d0 = zero_mode_op(d_ch(n));
    for mono in samples {
        let s = State::from_term(mono.clone(), Q::one());
        let base_degree = du_count(mono);
        let image = d.apply(&s);
        let mut by_shift: std::collections::BTreeMap<i64, State> = std::collections::BTreeMap::new();
        for (m, coeff) in image.terms() {
            let shift = du_count(m) as i64 - base_degree as i64;
            by_shift
                .entry(shift)
                .or_insert_with(State::zero)
                .add_term(m.clone(), coeff.clone());
        }
        for shift in by_shift.keys() {
            if !(0..=2).contains(shift) {
                return crate::check::fail(
                    "du-degree",
                    format!("summand shifting du-degree by {shift} on {mono}"),
                );
            }
        }
        expect_eq(
            "du-degree",
            &format!("degree-0 part is the de Rham zero mode on {mono}"),
            by_shift.remove(&0).unwrap_or_else(State::zero),
            d0(&s),
        )?;
    }
    Ok(())
}

fn du_count(m: &Monomial) -> u32 {
    m.factors()
        .iter()
        .filter(|(g, _)| g.kind == crate::superjet::Kind::Du)
        .map(|&(_, e)| e)
        .sum()
}

/// The gluing operator intertwines the two differentials on the sample:
/// glue . D_1 = D_2 . glue, classically and chirally.
pub fn check_intertwine(
    c1: &Connection,
    c2: &Connection,
    classical: bool,
    samples: &[Monomial],
) -> Result<CheckResult, GlueError> {
    let g = glue(c1, c2, classical)?;
    let (d1, d2) = if classical {
        (d_classical(c1), d_classical(c2))
    } else {
        (d_chiral(c1), d_chiral(c2))
    };
    Ok(check_operators_equal(
        "intertwine",
        &g.compose(&d1),
        &d2.compose(&g),
        samples,
    ))
}

/// The cocycle condition glue(c1 -> c3) = glue(c2 -> c3) . glue(c1 -> c2)
/// on the sample.
pub fn check_cocycle(
    c1: &Connection,
    c2: &Connection,
    c3: &Connection,
    classical: bool,
    samples: &[Monomial],
) -> Result<CheckResult, GlueError> {
    let g13 = glue(c1, c3, classical)?;
    let g12 = glue(c1, c2, classical)?;
    let g23 = glue(c2, c3, classical)?;
    Ok(check_operators_equal(
        "cocycle",
        &g13,
        &g23.compose(&g12),
        samples,
    ))
}

/// Gluing back and forth is the identity on the sample.
pub fn check_glue_inverse(
    c1: &Connection,
    c2: &Connection,
    classical: bool,
    samples: &[Monomial],
) -> Result<CheckResult, GlueError> {
    let fwd = glue(c1, c2, classical)?;
    let back = glue(c2, c1, classical)?;
    let id = ConnectionOperator::new("identity", |s: &State| s.clone());
    Ok(check_operators_equal(
        "glue-inverse",
        &back.compose(&fwd),
        &id,
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superjet::qi;

    fn xg(i: u32) -> State {
        State::generator(Generator::x(i, 0))
    }
    fn ug(i: u32) -> State {
        State::generator(Generator::u(i))
    }

    fn field(n: usize, comps: Vec<State>) -> VectorField {
        assert_eq!(comps.len(), n);
        VectorField::new(comps)
    }

    #[test]
    fn curvature_worked_example() {
        // xi_1 = u_2 x_1 d_1, xi_2 = 0 gives R_12 = -x_1 d_1
        let xi1 = field(1, vec![ug(2).mul(&xg(1))]);
        let xi2 = VectorField::zero(1);
        let c = Connection::new(1, vec![xi1, xi2]);
        let r = curvature(&c);
        assert_eq!(r.component(1, 2), field(1, vec![xg(1).neg()]));
        assert_eq!(r.component(2, 1), field(1, vec![xg(1)]));
        // flat and repeated connections have no curvature
        assert!(curvature(&Connection::flat(2, 2)).is_zero());
        let same = field(1, vec![xg(1)]);
        let c = Connection::new(1, vec![same.clone(), same]);
        assert!(curvature(&c).is_zero());
    }

    #[test]
    fn bianchi_holds() {
        // vacuous for M = 2
        let c = Connection::new(1, vec![VectorField::zero(1); 2]);
        bianchi_check(&c).unwrap();
        // a genuinely curved M = 3 example
        let c = Connection::new(
            2,
            vec![
                field(2, vec![ug(2).mul(&xg(1)), xg(2)]),
                field(2, vec![ug(3), xg(1).mul(&xg(1))]),
                field(2, vec![ug(1).mul(&ug(2)), xg(1).mul(&xg(2))]),
            ],
        );
        bianchi_check(&c).unwrap();
    }

    fn small_bounds() -> SpanBounds {
        SpanBounds {
            n: 1,
            m: 2,
            max_letters: 2,
            max_jet: 1,
        }
    }

    #[test]
    fn flat_differential_squares_to_zero() {
        let c = Connection::flat(2, 1);
        check_dsquare(&c, &small_bounds()).unwrap();
    }

    #[test]
    fn curved_differential_squares_to_zero() {
        let xi1 = field(1, vec![ug(2).mul(&xg(1))]);
        let xi2 = field(1, vec![xg(1)]);
        let c = Connection::new(1, vec![xi1, xi2]);
        check_dsquare(&c, &small_bounds()).unwrap();
        let samples = spanning_monomials(&small_bounds());
        check_dsquare_proof_identities(&c, &samples).unwrap();
        check_du_degree_decomposition(&c, &samples).unwrap();
    }

    #[test]
    fn classical_flat_example() {
        // flat M = 1: D(x_1) = dx_1
        let c = Connection::flat(1, 1);
        let d = d_classical(&c);
        assert_eq!(
            d.apply(&xg(1)),
            State::generator(Generator::dx(1, 0))
        );
        // with xi_1 = x_1 d_1: D(x_1) = dx_1 + du_1 x_1
        let c = Connection::new(1, vec![field(1, vec![xg(1)])]);
        let d = d_classical(&c);
        let expected = State::generator(Generator::dx(1, 0))
            .add(&State::generator(Generator::du(1)).mul(&xg(1)));
        assert_eq!(d.apply(&xg(1)), expected);
    }

    #[test]
    fn glue_shapes() {
        let c1 = Connection::flat(1, 1);
        let c2 = Connection::new(1, vec![field(1, vec![xg(1)])]);
        // identical connections glue by the identity
        let g = glue(&c1, &c1, false).unwrap();
        let s = xg(1).mul(&State::generator(Generator::px(1, 0)));
        assert_eq!(g.apply(&s), s);
        // M = 1 truncates after the linear term
        let g = glue(&c1, &c2, false).unwrap();
        let got = g.apply(&State::generator(Generator::dx(1, 0)));
        let expected = State::generator(Generator::dx(1, 0))
            .add(&State::generator(Generator::du(1)).mul(&xg(1)));
        assert_eq!(got, expected);
        // dimension mismatch is an error
        assert!(glue(&c1, &Connection::flat(2, 1), false).is_err());
    }

    #[test]
    fn intertwine_and_cocycle() {
        let samples = spanning_monomials(&small_bounds());
        let c1 = Connection::flat(2, 1);
        let c2 = Connection::new(
            1,
            vec![field(1, vec![xg(1)]), field(1, vec![ug(1)])],
        );
        let c3 = Connection::new(
            1,
            vec![field(1, vec![ug(2).mul(&xg(1))]), VectorField::zero(1)],
        );
        for classical in [false, true] {
            let samples: Vec<Monomial> = if classical {
                spanning_form_monomials(&small_bounds())
            } else {
                samples.clone()
            };
            check_intertwine(&c1, &c2, classical, &samples)
                .unwrap()
                .unwrap();
            check_cocycle(&c1, &c2, &c3, classical, &samples)
                .unwrap()
                .unwrap();
            check_glue_inverse(&c1, &c2, classical, &samples)
                .unwrap()
                .unwrap();
        }
    }

    #[test]
    fn flat_chiral_matches_curvature_example() {
        // the worked curvature connection keeps D^2 = 0 with u-dependence
        let xi1 = field(1, vec![ug(2).mul(&xg(1)).scale(&qi(2))]);
        let xi2 = field(1, vec![ug(1)]);
        let c = Connection::new(1, vec![xi1, xi2]);
        check_dsquare(&c, &small_bounds()).unwrap();
    }
}
