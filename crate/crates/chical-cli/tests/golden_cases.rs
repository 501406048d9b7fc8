//! The golden corpus: worked examples with pinned byte-exact reports.
//!
//! Regenerate with CHICAL_BLESS=1 after an intentional format change, then
//! review the diff against the documented values before committing.

use std::fs;
use std::path::PathBuf;

/// (file stem, argv) for every golden invocation.
pub const CASES: &[(&str, &[&str])] = &[
    ("nprod-contraction-even", &["nprod", "p(1,0)", "0", "x(1,0)"]),
    ("zero-mode-contraction-even-rev", &["zero-mode", "x(1,0)", "p(1,0)"]),
    ("zero-mode-contraction-odd", &["zero-mode", "dx(1,0)", "pd(1,0)"]),
    ("zero-mode-contraction-odd-rev", &["zero-mode", "pd(1,0)", "dx(1,0)"]),
    ("nprod-contraction-depth", &["nprod", "p(1,1)", "2", "x(1,1)"]),
    ("nprod-translate-via-vacuum", &["nprod", "x(1,0)", "-2", "1"]),
    ("nprod-translate-jet-one", &["nprod", "x(1,1)", "-2", "1"]),
    ("nprod-translate-of-unit", &["nprod", "1", "-2", "1"]),
    ("nprod-unit-minus-one", &["nprod", "1", "-1", "x(1,0)"]),
    ("nprod-unit-zero", &["nprod", "1", "0", "x(1,0)"]),
    ("nprod-against-vacuum", &["nprod", "p(1,0)", "-1", "1"]),
    ("ope-vacuum-exponential", &["ope", "x(1,0)", "1", "--horizon", "2"]),
    ("ope-momentum-coordinate", &["ope", "p(1,0)", "x(1,0)", "--horizon", "1"]),
    ("nprod-vector-field-on-function", &["nprod", "p(1,0)*x(2,0)", "0", "x(1,0)"]),
    ("nprod-quadratic-normal-order", &["nprod", "x(1,0)*x(1,0)", "-1", "p(1,0)"]),
    ("nprod-even-anomaly", &["nprod", "x(2,0)*p(1,0)", "1", "x(1,0)*p(2,0)"]),
    ("d-ch-two-dims", &["d-ch", "--N", "2"]),
    ("lie-ch-linear", &["lie-ch", "x(1,0) d(1)"]),
    ("lie-ch-off-diagonal", &["lie-ch", "x(2,0) d(1)", "--N", "2"]),
    ("iota-ch-off-diagonal", &["iota-ch", "x(1,0) d(2)", "--N", "2"]),
    (
        "nprod-d-mode-one-on-lift",
        &[
            "nprod",
            "p(1,0)*dx(1,0)",
            "1",
            "2*x(1,0)*dx(1,0)*pd(1,0)+x(1,0)^2*p(1,0)",
        ],
    ),
    ("zero-mode-d-squared", &["zero-mode", "p(1,0)*dx(1,0)", "p(1,0)*dx(1,0)"]),
    (
        "zero-mode-d-on-iota",
        &["zero-mode", "p(1,0)*dx(1,0)", "x(1,0)*pd(1,0)"],
    ),
    ("coisson-bracket-even", &["coisson", "p(1,0)", "0", "x(1,0)"]),
    ("coisson-bracket-depth", &["coisson", "p(1,1)", "2", "x(1,1)"]),
    (
        "verify-skew-report",
        &[
            "verify", "--suite", "skew", "--seed", "7", "--cases", "5", "--N", "2", "--M", "0",
        ],
    ),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs every golden case; returns one message per mismatch.  Setting
/// CHICAL_BLESS rewrites the corpus instead.
pub fn run_all() -> Vec<String> {
    let bless = std::env::var("CHICAL_BLESS").is_ok();
    let dir = golden_dir();
    if bless {
        fs::create_dir_all(&dir).expect("create golden directory");
    }
    let mut failures = Vec::new();
    for (name, argv) in CASES {
        let argv: Vec<String> = argv.iter().map(|s| s.to_string()).collect();
        let rendered = match chical_cli::run(&argv) {
            Ok(report) => {
                if !report.all_pass() {
                    failures.push(format!("{name}: report contains failing checks"));
                    continue;
                }
                report.render_stable()
            }
            Err(e) => {
                failures.push(format!("{name}: command error: {e}"));
                continue;
            }
        };
        let path = dir.join(format!("{name}.txt"));
        if bless {
            fs::write(&path, &rendered).expect("write golden file");
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(expected) => {
                if expected != rendered {
                    failures.push(format!(
                        "{name}: mismatch\n--- expected\n{expected}--- got\n{rendered}"
                    ));
                }
            }
            Err(e) => failures.push(format!("{name}: cannot read {}: {e}", path.display())),
        }
    }
    failures
}
