#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// A command whose stdout is pinned in `tests/golden/<name>.out`.
pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const QUBIT: &str = "tests/fixtures/qubit.mtopos";
const ALGEBRA: &str = "tests/fixtures/algebra.mtopos";
const BAD: &str = "tests/fixtures/bad_projector.mtopos";

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase { name: "parse_qubit", args: &["--spec", QUBIT, "parse"], exit: 0 },
    GoldenCase { name: "parse_algebra", args: &["--spec", ALGEBRA, "parse"], exit: 0 },
    GoldenCase { name: "parse_bad_projector", args: &["--spec", BAD, "parse"], exit: 1 },
    GoldenCase { name: "verify_heyting_m2", args: &["verify-heyting", "M2"], exit: 0 },
    GoldenCase { name: "verify_heyting_t2_pretty", args: &["--spec", ALGEBRA, "verify-heyting", "T2", "--pretty"], exit: 0 },
    GoldenCase { name: "enumerate_ideals_t2", args: &["--spec", ALGEBRA, "enumerate-ideals", "T2"], exit: 0 },
    GoldenCase {
        name: "truth_invariant_subsets",
        args: &["--spec", ALGEBRA, "truth", "--mset", "P", "--kind", "invariant-subsets"],
        exit: 0,
    },
    GoldenCase {
        name: "truth_member",
        args: &["--spec", ALGEBRA, "truth", "--mset", "R", "--kind", "member", "--point", "one", "--subset", "{e}"],
        exit: 0,
    },
    GoldenCase {
        name: "valuate_classical",
        args: &["--spec", ALGEBRA, "valuate-classical", "--state", "heads", "--quantity", "A", "--range", "{0}"],
        exit: 0,
    },
    GoldenCase {
        name: "valuate_quantum",
        args: &["--spec", QUBIT, "valuate-quantum", "--state", "psi", "--op", "A", "--range", "{1}"],
        exit: 0,
    },
    GoldenCase {
        name: "valuate_ray",
        args: &["--spec", QUBIT, "valuate", "--state", "psi", "--op", "A", "--range", "{1}", "--mode", "ray", "--depth", "3"],
        exit: 0,
    },
    GoldenCase {
        name: "valuate_vector",
        args: &["--spec", QUBIT, "valuate", "--state", "e2", "--op", "B", "--range", "{1}", "--mode", "vector", "--universe", "U"],
        exit: 0,
    },
    GoldenCase {
        name: "valuate_density",
        args: &["--spec", QUBIT, "valuate", "--state", "mixed", "--op", "A", "--range", "{1}", "--mode", "density", "--depth", "2"],
        exit: 0,
    },
    GoldenCase {
        name: "equal_sp",
        args: &["--spec", QUBIT, "equal", "--mode", "sp", "--state", "e1", "--other", "plus", "--depth", "2"],
        exit: 0,
    },
    GoldenCase {
        name: "equal_context",
        args: &["--spec", QUBIT, "equal", "--mode", "context", "--rays", "V", "--state", "e1", "--other", "plus", "--universe", "U"],
        exit: 0,
    },
    GoldenCase {
        name: "equal_sieve",
        args: &["--spec", QUBIT, "equal", "--mode", "sieve", "--context", "(Pz,Pplus)", "--state", "e1", "--other", "plus"],
        exit: 0,
    },
    GoldenCase {
        name: "polar_rays",
        args: &["--spec", QUBIT, "polar", "--rays", "V", "--xi", "(e2)", "--universe", "U"],
        exit: 0,
    },
    GoldenCase {
        name: "polar_strings",
        args: &["--spec", QUBIT, "polar", "--rays", "V", "--strings", "(Pz),(Pplus,Pz)", "--universe", "U"],
        exit: 0,
    },
    GoldenCase {
        name: "closure_rays",
        args: &["--spec", QUBIT, "closure", "--rays", "V", "--xi", "(e1)", "--universe", "U"],
        exit: 0,
    },
    GoldenCase {
        name: "sieve",
        args: &["--spec", QUBIT, "sieve", "--context", "(Pz,Pplus)", "--state", "e1", "--op", "A", "--range", "{1}"],
        exit: 0,
    },
    GoldenCase { name: "query_ray_up", args: &["--spec", QUBIT, "query", "ray_up"], exit: 0 },
    GoldenCase { name: "selftest", args: &["selftest", "--seed", "42"], exit: 0 },
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{name}.out"))
}

/// Runs the built binary from the crate directory.
pub fn run_binary(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mtopos"))
        .args(args)
        .current_dir(crate_dir())
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Compares one golden case, rewriting the file when `UPDATE_GOLDEN` is set.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let (code, stdout, stderr) = run_binary(case.args);
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {} (stderr: {stderr})", case.name, case.exit));
    }
    let path = golden_path(case.name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &stdout).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path)
        .map_err(|e| format!("{}: {e} (set UPDATE_GOLDEN=1 to create)", path.display()))?;
    if want != stdout {
        return Err(format!("{}: output differs from {}", case.name, rel(&path)));
    }
    Ok(())
}

fn rel(p: &Path) -> String {
    p.strip_prefix(crate_dir()).unwrap_or(p).display().to_string()
}
