//! The randomized verification suites behind `chical verify`.
//!
//! Every suite draws its instances from one seeded ChaCha stream, in case
//! order, so a (suite, seed, parameters) triple pins the exact workload.
//! Each case yields one check line; the first failure inside a case is its
//! witness.

use crate::gen::{
    random_connection, random_homogeneous_state, random_state, random_vector_field, GenParams,
    Rng32,
};
use crate::report::CheckLine;
use chical_core::cartan::{
    check_cartan_relations, check_classical_package, check_comparison, check_lie_ch_ope,
    check_loop_modes, d_ch, lie_ch, Form, VectorField,
};
use chical_core::coisson::{
    check_coisson_commutator, check_coisson_leibniz, check_coisson_skew, check_jet_bracket,
    check_quantized_leibniz, check_quasiclassical, JetField,
};
use chical_core::gaussmanin::{
    bianchi_check, check_cocycle, check_dsquare, check_dsquare_proof_identities,
    check_du_degree_decomposition, check_glue_inverse, check_intertwine,
};
use chical_core::span::{spanning_monomials, SpanBounds};
use chical_core::superjet::{qi, Generator, State};
use chical_core::vertex::{
    check_borcherds, check_commutator, check_normal_ordering, check_skew, nprod, pole_bound,
    wick_nprod,
};
use chical_core::CheckResult;
use rand::{Rng, SeedableRng};
use thiserror::Error;

/// Suite names accepted by `verify --suite`, in canonical order.
pub const SUITE_NAMES: &[&str] = &[
    "skew",
    "commutator",
    "borcherds",
    "normal-ordering",
    "cartan",
    "anomaly",
    "dsquare",
    "glue",
    "quasiclassical",
];

#[derive(Debug, Error)]
#[error("unknown suite '{0}'; expected one of skew, commutator, borcherds, normal-ordering, cartan, anomaly, dsquare, glue, quasiclassical, all")]
pub struct UnknownSuite(pub String);

#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    pub cases: u32,
    pub gen: GenParams,
}

/// Runs one named suite (or `all`) and returns its check lines.
pub fn run_suite(name: &str, p: &SuiteParams) -> Result<Vec<CheckLine>, UnknownSuite> {
    let mut out = Vec::new();
    if name == "all" {
        for suite in SUITE_NAMES {
            run_one(suite, p, &mut out);
        }
        return Ok(out);
    }
    if !SUITE_NAMES.contains(&name) {
        return Err(UnknownSuite(name.to_string()));
    }
    run_one(name, p, &mut out);
    Ok(out)
}

fn run_one(name: &str, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    let mut rng = Rng32::seed_from_u64(p.seed);
    match name {
        "skew" => skew_suite(&mut rng, p, out),
        "commutator" => commutator_suite(&mut rng, p, out),
        "borcherds" => borcherds_suite(&mut rng, p, out),
        "normal-ordering" => normal_ordering_suite(&mut rng, p, out),
        "cartan" => cartan_suite(&mut rng, p, out),
        "anomaly" => anomaly_suite(&mut rng, p, out),
        "dsquare" => dsquare_suite(&mut rng, p, out),
        "glue" => glue_suite(&mut rng, p, out),
        "quasiclassical" => quasiclassical_suite(&mut rng, p, out),
        _ => unreachable!("validated by run_suite"),
    }
}

fn push(out: &mut Vec<CheckLine>, name: String, r: CheckResult) {
    out.push(CheckLine::from_result(name, r));
}

fn skew_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    for case in 0..p.cases {
        let a = random_homogeneous_state(rng, &p.gen);
        let b = random_homogeneous_state(rng, &p.gen);
        push(out, format!("skew[{case:03}]"), check_skew(&a, &b, 4));
    }
}

fn mode_range(rng: &mut Rng32) -> i64 {
    rng.random_range(-2..=2)
}

fn commutator_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    for case in 0..p.cases {
        let a = random_homogeneous_state(rng, &p.gen);
        let b = random_homogeneous_state(rng, &p.gen);
        let c = random_state(rng, &p.gen);
        let n = mode_range(rng);
        let m = mode_range(rng);
        push(
            out,
            format!("commutator[{case:03}]"),
            check_commutator(&a, &b, &c, n, m),
        );
    }
}

fn borcherds_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    for case in 0..p.cases {
        let a = random_homogeneous_state(rng, &p.gen);
        let b = random_homogeneous_state(rng, &p.gen);
        let c = random_state(rng, &p.gen);
        let n = mode_range(rng);
        let m = mode_range(rng);
        let l = mode_range(rng);
        push(
            out,
            format!("borcherds[{case:03}]"),
            check_borcherds(&a, &b, &c, n, m, l),
        );
    }
}

fn normal_ordering_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    for case in 0..p.cases {
        let a = random_homogeneous_state(rng, &p.gen);
        let b = random_homogeneous_state(rng, &p.gen);
        let c = random_state(rng, &p.gen);
        let n = mode_range(rng);
        push(
            out,
            format!("normal-ordering[{case:03}]"),
            check_normal_ordering(&a, &b, &c, n),
        );
    }
}

/// A random differential form: letters in x (jet 0), dx (jet 0), u, du.
fn random_form(rng: &mut Rng32, p: &GenParams) -> Form {
    loop {
        let terms = rng.random_range(1..=2);
        let mut s = State::zero();
        for _ in 0..terms {
            let count = rng.random_range(0..=p.letters.min(3));
            let mut mono = State::constant(qi(if rng.random_bool(0.5) { 1 } else { -1 }));
            for _ in 0..count {
                let g = match rng.random_range(0..if p.m > 0 { 4 } else { 2 }) {
                    0 => Generator::x(rng.random_range(1..=p.n), 0),
                    1 => Generator::dx(rng.random_range(1..=p.n), 0),
                    2 => Generator::u(rng.random_range(1..=p.m)),
                    _ => Generator::du(rng.random_range(1..=p.m)),
                };
                mono = mono.mul(&State::generator(g));
            }
            s = s.add(&mono);
        }
        if !s.is_zero() {
            return Form::new(s);
        }
    }
}

/// The worked nonlinear vector field x_1^2 d/dx_1.
fn squared_field(n: usize) -> VectorField {
    let x1 = State::generator(Generator::x(1, 0));
    let mut comps = vec![State::zero(); n];
    comps[0] = x1.mul(&x1);
    VectorField::new(comps)
}

fn cartan_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    // pinned worked value: (d_ch)_(1) lie_ch(x1^2 d_1) = -2 dx1
    let got = nprod(&d_ch(1), 1, &lie_ch(&squared_field(1)));
    let expected = State::generator(Generator::dx(1, 0)).scale(&qi(-2));
    push(
        out,
        "cartan[worked d-mode-1]".to_string(),
        chical_core::check::expect_eq("cartan", "(d_ch)_(1) lie_ch(x1^2 d_1)", got, expected),
    );

    let relative = GenParams { m: 0, ..p.gen };
    for case in 0..p.cases {
        let xi = random_vector_field(rng, relative.n, 0, relative.deg);
        let eta = random_vector_field(rng, relative.n, 0, relative.deg);
        let forms: Vec<Form> = (0..3).map(|_| random_form(rng, &relative)).collect();
        let samples: Vec<State> = (0..3).map(|_| random_state(rng, &relative)).collect();

        let mut result = check_classical_package(&xi, &eta, &forms);
        if result.is_ok() {
            result = check_cartan_relations(&xi, &eta, &samples);
        }
        if result.is_ok() {
            for omega in &forms {
                result = check_comparison(&xi, omega);
                if result.is_err() {
                    break;
                }
            }
        }
        if result.is_ok() {
            result = check_loop_modes(&xi, &eta, &samples[0], &[-2, -1, 0, 1, 2]);
        }
        push(out, format!("cartan[{case:03}]"), result);
    }
}

fn anomaly_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    // pinned worked pair: even-only pole 2 of (x2 d1, x1 d2) is -1
    let xi = VectorField::new(vec![State::generator(Generator::x(2, 0)), State::zero()]);
    let eta = VectorField::new(vec![State::zero(), State::generator(Generator::x(1, 0))]);
    let got = nprod(
        &chical_core::cartan::lie_even(&xi),
        1,
        &chical_core::cartan::lie_even(&eta),
    );
    push(
        out,
        "anomaly[worked pole-2]".to_string(),
        chical_core::check::expect_eq(
            "anomaly",
            "even-only pole 2 of (x2 d1, x1 d2)",
            got,
            State::one().neg(),
        ),
    );

    let relative = GenParams { m: 0, ..p.gen };
    for case in 0..p.cases {
        let xi = random_vector_field(rng, relative.n, 0, relative.deg);
        let eta = random_vector_field(rng, relative.n, 0, relative.deg);
        push(out, format!("anomaly[{case:03}]"), check_lie_ch_ope(&xi, &eta));
    }
}

fn dsquare_bounds(p: &SuiteParams) -> SpanBounds {
    SpanBounds {
        n: p.gen.n,
        m: p.gen.m,
        max_letters: 3,
        max_jet: p.gen.jet.min(2),
    }
}

fn dsquare_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    let bounds = dsquare_bounds(p);
    let span = spanning_monomials(&bounds);
    for case in 0..p.cases {
        let c = random_connection(rng, p.gen.m, p.gen.n, p.gen.deg);
        let mut result = bianchi_check(&c);
        if result.is_ok() {
            result = check_dsquare(&c, &bounds);
        }
        if result.is_ok() {
            result = check_dsquare_proof_identities(&c, &span);
        }
        if result.is_ok() {
            result = check_du_degree_decomposition(&c, &span);
        }
        push(out, format!("dsquare[{case:03}]"), result);
    }
    // one higher-base connection so the triple products in the Bianchi and
    // anti-commutation identities are exercised beyond vacuity
    let c3 = random_connection(rng, 3, p.gen.n.min(2), p.gen.deg.min(1));
    let small = SpanBounds {
        n: p.gen.n.min(2),
        m: 3,
        max_letters: 2,
        max_jet: 1,
    };
    let span3 = spanning_monomials(&small);
    let mut result = bianchi_check(&c3);
    if result.is_ok() {
        result = check_dsquare_proof_identities(&c3, &span3);
    }
    push(out, "dsquare[base-3]".to_string(), result);
}

fn glue_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    let bounds = dsquare_bounds(p);
    let chiral_span = spanning_monomials(&bounds);
    let classical_span = chical_core::span::spanning_form_monomials(&bounds);
    for case in 0..p.cases {
        let c1 = random_connection(rng, p.gen.m, p.gen.n, p.gen.deg);
        let c2 = random_connection(rng, p.gen.m, p.gen.n, p.gen.deg);
        let c3 = random_connection(rng, p.gen.m, p.gen.n, p.gen.deg);
        let mut result: CheckResult = Ok(());
        for classical in [false, true] {
            let span = if classical {
                &classical_span
            } else {
                &chiral_span
            };
            if result.is_ok() {
                result = check_intertwine(&c1, &c2, classical, span).expect("same dims");
            }
            if result.is_ok() {
                result = check_cocycle(&c1, &c2, &c3, classical, span).expect("same dims");
            }
            if result.is_ok() {
                result = check_glue_inverse(&c1, &c2, classical, span).expect("same dims");
            }
        }
        push(out, format!("glue[{case:03}]"), result);
    }
}

fn quasiclassical_suite(rng: &mut Rng32, p: &SuiteParams, out: &mut Vec<CheckLine>) {
    for case in 0..p.cases {
        let a = random_homogeneous_state(rng, &p.gen);
        let b = random_homogeneous_state(rng, &p.gen);
        let c = random_homogeneous_state(rng, &p.gen);
        let n = rng.random_range(0..=2);
        let m = rng.random_range(0..=2);
        let mut result = check_quasiclassical(&a, &b, n);
        if result.is_ok() {
            result = check_coisson_skew(&a, &b);
        }
        if result.is_ok() {
            result = check_coisson_commutator(&a, &b, &c, n, m);
        }
        if result.is_ok() {
            result = check_coisson_leibniz(&a, &b, &c, n);
        }
        push(out, format!("quasiclassical[{case:03}]"), result);
    }
    // quantized-Leibniz symbol comparison on its own half-length run
    for case in 0..p.cases.div_ceil(2) {
        let a = random_homogeneous_state(rng, &p.gen);
        let b = random_homogeneous_state(rng, &p.gen);
        let c = random_homogeneous_state(rng, &p.gen);
        let n = rng.random_range(0..=2);
        push(
            out,
            format!("quantized-leibniz[{case:03}]"),
            check_quantized_leibniz(&a, &b, &c, n),
        );
    }
    // jet-field brackets against the coisson engine
    for case in 0..p.cases.min(10) {
        let a = JetField {
            terms: vec![(
                rng.random_range(0..=2),
                random_vector_field(rng, p.gen.n, 0, p.gen.deg),
            )],
        };
        let b = JetField {
            terms: vec![(
                rng.random_range(0..=2),
                random_vector_field(rng, p.gen.n, 0, p.gen.deg),
            )],
        };
        push(
            out,
            format!("jet-bracket[{case:03}]"),
            check_jet_bracket(&a, &b),
        );
    }
}

/// The oracle-equivalence sweep used by the acceptance gate: every n-th
/// product from -4 up to the pole bound, two independent algorithms.
pub fn oracle_equivalence_cases(seed: u64, cases: u32, gen: &GenParams) -> Vec<CheckLine> {
    let mut rng = Rng32::seed_from_u64(seed);
    let mut out = Vec::new();
    for case in 0..cases {
        let a = random_homogeneous_state(&mut rng, gen);
        let b = random_homogeneous_state(&mut rng, gen);
        let bound = pole_bound(&a, &b);
        let mut result: CheckResult = Ok(());
        for n in -4..bound {
            let lhs = nprod(&a, n, &b);
            let rhs = wick_nprod(&a, n, &b);
            if lhs != rhs {
                result = Err(chical_core::CheckFailure {
                    check: "oracle".into(),
                    witness: format!("n = {n}, a = {a}, b = {b}: {lhs} vs {rhs}"),
                });
                break;
            }
        }
        out.push(CheckLine::from_result(format!("oracle[{case:03}]"), result));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_params(cases: u32) -> SuiteParams {
        SuiteParams {
            seed: 11,
            cases,
            gen: GenParams {
                n: 2,
                m: 2,
                letters: 3,
                jet: 1,
                deg: 1,
            },
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nonsense", &quick_params(1)).is_err());
    }

    #[test]
    fn small_suites_pass() {
        let p = quick_params(2);
        for name in ["skew", "commutator", "normal-ordering", "quasiclassical"] {
            let lines = run_suite(name, &p).unwrap();
            assert!(!lines.is_empty());
            for l in &lines {
                assert!(l.pass, "{}: {:?}", l.name, l.witness);
            }
        }
    }

    #[test]
    fn determinism_across_runs() {
        let p = quick_params(3);
        let a = run_suite("skew", &p).unwrap();
        let b = run_suite("skew", &p).unwrap();
        let names_a: Vec<_> = a.iter().map(|l| (&l.name, l.pass)).collect();
        let names_b: Vec<_> = b.iter().map(|l| (&l.name, l.pass)).collect();
        assert_eq!(names_a, names_b);
    }
}
