//! Command-line surface: argument definitions and dispatch into the engine.

use crate::gen::GenParams;
use crate::parse::{
    parse_connection, parse_state, parse_vector_field, scan_vf_dimension, IndexBounds, ParseError,
};
use crate::report::{CheckLine, Report};
use crate::suites::{run_suite, SuiteParams, UnknownSuite};
use chical_core::cartan::{d_ch, iota_ch, lie_ch};
use chical_core::coisson::coisson_nprod;
use chical_core::gaussmanin::{
    bianchi_check, check_cocycle, check_dsquare, check_dsquare_proof_identities,
    check_du_degree_decomposition, check_glue_inverse, check_intertwine, Connection,
};
use chical_core::span::{spanning_form_monomials, spanning_monomials, SpanBounds};
use chical_core::vertex::{nprod, ope};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Help or version text; prints to stdout and exits 0.
    #[error("{0}")]
    Help(String),
    /// Wrong invocation or malformed input; exits 2.
    #[error("{0}")]
    Usage(String),
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<UnknownSuite> for CliError {
    fn from(e: UnknownSuite) -> CliError {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "chical",
    version,
    about = "Exact calculator and verifier for the chiral Cartan calculus on coordinate charts"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Operator product expansion of two states
    Ope {
        a: String,
        b: String,
        /// Regular-part horizon
        #[arg(long, default_value_t = 4)]
        horizon: i64,
    },
    /// The n-th product a_(n) b
    Nprod {
        a: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        b: String,
    },
    /// Chiral Lie derivative lift of a vector field
    #[command(name = "lie-ch")]
    LieCh {
        vf: String,
        /// Chart dimension; inferred from the field when omitted
        #[arg(long = "N")]
        n: Option<u32>,
    },
    /// Chiral contraction lift of a vector field
    #[command(name = "iota-ch")]
    IotaCh {
        vf: String,
        #[arg(long = "N")]
        n: Option<u32>,
    },
    /// The chiral de Rham differential
    #[command(name = "d-ch")]
    DCh {
        #[arg(long = "N")]
        n: u32,
    },
    /// Zero-mode application a_(0) b
    #[command(name = "zero-mode")]
    ZeroMode { a: String, b: String },
    /// Nilpotence of the connection differentials on a spanning set
    Dsquare {
        #[arg(long)]
        connection: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_letters: u32,
        #[arg(long, default_value_t = 2)]
        max_jet: u32,
    },
    /// Gluing isomorphisms: intertwining, invertibility and the cocycle
    Glue {
        #[arg(long)]
        c1: PathBuf,
        #[arg(long)]
        c2: PathBuf,
        #[arg(long)]
        c3: Option<PathBuf>,
        /// Check the classical complex instead of the chiral one
        #[arg(long)]
        classical: bool,
        #[arg(long, default_value_t = 2)]
        max_letters: u32,
        #[arg(long, default_value_t = 1)]
        max_jet: u32,
    },
    /// The coisson n-th product (n >= 0)
    Coisson {
        a: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        b: String,
    },
    /// Seeded randomized verification suites
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, env = "CHICAL_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: u32,
        #[arg(long = "N", default_value_t = 2)]
        n: u32,
        #[arg(long = "M", default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        deg: u32,
        #[arg(long, default_value_t = 2)]
        jet: u32,
    },
}

/// Parses an argv slice (without the binary name) and executes it.
pub fn run(argv: &[String]) -> Result<Report, CliError> {
    let started = Instant::now();
    let cli = Cli::try_parse_from(std::iter::once("chical".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        })?;
    let mut report = dispatch(cli.cmd)?;
    report.argv = argv.join(" ");
    report.timing_ms = started.elapsed().as_millis();
    Ok(report)
}

fn free_bounds() -> IndexBounds {
    IndexBounds::default()
}

fn dispatch(cmd: Cmd) -> Result<Report, CliError> {
    match cmd {
        Cmd::Ope { a, b, horizon } => {
            if horizon < 0 {
                return Err(CliError::Usage("horizon must be non-negative".into()));
            }
            let sa = parse_state(&a, free_bounds())?;
            let sb = parse_state(&b, free_bounds())?;
            let mut r = Report::new("ope");
            r.input("a", &a);
            r.input("b", &b);
            r.input("horizon", horizon);
            let series = ope(&sa, &sb, horizon);
            r.result("min-power", series.min_power());
            r.result("horizon", series.max_computed());
            for (k, s) in series.iter() {
                r.result(format!("result[{k}]"), s);
            }
            Ok(r)
        }
        Cmd::Nprod { a, n, b } => {
            let sa = parse_state(&a, free_bounds())?;
            let sb = parse_state(&b, free_bounds())?;
            let mut r = Report::new("nprod");
            r.input("a", &a);
            r.input("n", n);
            r.input("b", &b);
            r.result("result", nprod(&sa, n, &sb));
            Ok(r)
        }
        Cmd::LieCh { vf, n } => {
            let dim = resolve_dim(&vf, n)?;
            let field = parse_vector_field(&vf, dim, free_bounds())?;
            let mut r = Report::new("lie-ch");
            r.input("vf", &vf);
            r.input("N", dim);
            r.result("result", lie_ch(&field));
            Ok(r)
        }
        Cmd::IotaCh { vf, n } => {
            let dim = resolve_dim(&vf, n)?;
            let field = parse_vector_field(&vf, dim, free_bounds())?;
            let mut r = Report::new("iota-ch");
            r.input("vf", &vf);
            r.input("N", dim);
            r.result("result", iota_ch(&field));
            Ok(r)
        }
        Cmd::DCh { n } => {
            if n == 0 {
                return Err(CliError::Usage("chart dimension must be positive".into()));
            }
            let mut r = Report::new("d-ch");
            r.input("N", n);
            r.result("result", d_ch(n as usize));
            Ok(r)
        }
        Cmd::ZeroMode { a, b } => {
            let sa = parse_state(&a, free_bounds())?;
            let sb = parse_state(&b, free_bounds())?;
            let mut r = Report::new("zero-mode");
            r.input("a", &a);
            r.input("b", &b);
            r.result("result", nprod(&sa, 0, &sb));
            Ok(r)
        }
        Cmd::Dsquare {
            connection,
            max_letters,
            max_jet,
        } => {
            let c = load_connection(&connection)?;
            let bounds = SpanBounds {
                n: c.fibre_dim() as u32,
                m: c.base_dim() as u32,
                max_letters,
                max_jet,
            };
            let mut r = Report::new("dsquare");
            r.input("connection", connection.display());
            r.input("M", c.base_dim());
            r.input("N", c.fibre_dim());
            r.input("max-letters", max_letters);
            r.input("max-jet", max_jet);
            let span = spanning_monomials(&bounds);
            r.checks
                .push(CheckLine::from_result("bianchi", bianchi_check(&c)));
            r.checks
                .push(CheckLine::from_result("dsquare", check_dsquare(&c, &bounds)));
            r.checks.push(CheckLine::from_result(
                "proof-identities",
                check_dsquare_proof_identities(&c, &span),
            ));
            r.checks.push(CheckLine::from_result(
                "du-degree",
                check_du_degree_decomposition(&c, &span),
            ));
            Ok(r)
        }
        Cmd::Glue {
            c1,
            c2,
            c3,
            classical,
            max_letters,
            max_jet,
        } => {
            let conn1 = load_connection(&c1)?;
            let conn2 = load_connection(&c2)?;
            if conn1.base_dim() != conn2.base_dim() || conn1.fibre_dim() != conn2.fibre_dim() {
                return Err(CliError::Usage(format!(
                    "mismatched dimensions: {} is (M={}, N={}), {} is (M={}, N={})",
                    c1.display(),
                    conn1.base_dim(),
                    conn1.fibre_dim(),
                    c2.display(),
                    conn2.base_dim(),
                    conn2.fibre_dim()
                )));
            }
            let bounds = SpanBounds {
                n: conn1.fibre_dim() as u32,
                m: conn1.base_dim() as u32,
                max_letters,
                max_jet,
            };
            let span = if classical {
                spanning_form_monomials(&bounds)
            } else {
                spanning_monomials(&bounds)
            };
            let mut r = Report::new("glue");
            r.input("c1", c1.display());
            r.input("c2", c2.display());
            if let Some(p) = &c3 {
                r.input("c3", p.display());
            }
            r.input("classical", classical);
            r.input("max-letters", max_letters);
            r.input("max-jet", max_jet);
            r.checks.push(CheckLine::from_result(
                "intertwine",
                check_intertwine(&conn1, &conn2, classical, &span).expect("dims checked"),
            ));
            r.checks.push(CheckLine::from_result(
                "inverse",
                check_glue_inverse(&conn1, &conn2, classical, &span).expect("dims checked"),
            ));
            if let Some(p) = &c3 {
                let conn3 = load_connection(p)?;
                if conn3.base_dim() != conn1.base_dim() || conn3.fibre_dim() != conn1.fibre_dim() {
                    return Err(CliError::Usage(format!(
                        "mismatched dimensions: {} is (M={}, N={})",
                        p.display(),
                        conn3.base_dim(),
                        conn3.fibre_dim()
                    )));
                }
                r.checks.push(CheckLine::from_result(
                    "cocycle",
                    check_cocycle(&conn1, &conn2, &conn3, classical, &span).expect("dims checked"),
                ));
            }
            Ok(r)
        }
        Cmd::Coisson { a, n, b } => {
            let sa = parse_state(&a, free_bounds())?;
            let sb = parse_state(&b, free_bounds())?;
            let mut r = Report::new("coisson");
            r.input("a", &a);
            r.input("n", n);
            r.input("b", &b);
            let value = coisson_nprod(&sa, n, &sb).map_err(|e| CliError::Usage(e.to_string()))?;
            r.result("result", value);
            Ok(r)
        }
        Cmd::Verify {
            suite,
            seed,
            cases,
            n,
            m,
            deg,
            jet,
        } => {
            if n == 0 {
                return Err(CliError::Usage("N must be positive".into()));
            }
            let params = SuiteParams {
                seed,
                cases,
                gen: GenParams {
                    n,
                    m,
                    letters: 4,
                    jet,
                    deg,
                },
            };
            let mut r = Report::new("verify");
            r.seed = Some(seed);
            r.input("suite", &suite);
            r.input("params", params.gen.echo(cases));
            r.checks = run_suite(&suite, &params)?;
            Ok(r)
        }
    }
}

fn resolve_dim(vf: &str, flag: Option<u32>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        if n == 0 {
            return Err(CliError::Usage("chart dimension must be positive".into()));
        }
        return Ok(n as usize);
    }
    let scanned = scan_vf_dimension(vf)?;
    if scanned == 0 {
        return Err(CliError::Usage(
            "cannot infer the chart dimension from a field without directions; pass --N".into(),
        ));
    }
    Ok(scanned)
}

fn load_connection(path: &Path) -> Result<Connection, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_connection(&text)?)
}
