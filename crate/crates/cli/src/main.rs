use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gwnull_core::oracle::{gw_classical, gw_divisor, quantum_monk, struct_const};
use gwnull_core::pipeline::{decide, DeciderConfig, Decision};
use gwnull_core::splits::{enumerate_splits_capped, DegreeSplit, DEFAULT_SPLIT_CAP};
use gwnull_core::suite::{selftest, Level, StandardOracle};
use gwnull_core::sysbuild::{assemble_system, export_hnpe, BuildMode, BuildOptions};
use gwnull_core::woodward::{correction_element, lift_degrees, reduce_to_complete, GwInstance};
use gwnull_core::Permutation;

const EXIT_INPUT: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_SELFTEST_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "gwnull", version, about = "Decide vanishing of three-point Gromov-Witten invariants on flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pruned,
    Unpruned,
    ChainElim,
}

impl From<Mode> for BuildMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Pruned => BuildMode::Pruned,
            Mode::Unpruned => BuildMode::Unpruned,
            Mode::ChainElim => BuildMode::ChainElim,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and print the verdict as JSON.
    Decide {
        /// Instance JSON file, or `-` for standard input.
        instance: PathBuf,
        /// One trial over the rationals instead of prime-field trials.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, env = "GWNULL_SEED", default_value_t = DeciderConfig::default().seed)]
        seed: u64,
        #[arg(long, value_enum, default_value = "pruned")]
        mode: Mode,
        /// Separate `s, t` for each `M_h`.
        #[arg(long)]
        per_h_st: bool,
        #[arg(long, default_value_t = DEFAULT_SPLIT_CAP)]
        split_cap: usize,
        #[arg(long, default_value_t = DeciderConfig::default().gb_budget)]
        budget: usize,
        /// Write the system of the first split to this file.
        #[arg(long)]
        emit_system: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Print the lifted degree vector and the correction element.
    Lift { instance: PathBuf },
    /// Print the equivalent complete-flag instance.
    Reduce { instance: PathBuf },
    /// List the degree splits of the lifted degree.
    Splits {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SPLIT_CAP)]
        cap: usize,
    },
    /// Print the polynomial system for one split.
    Build {
        instance: PathBuf,
        /// Split as nested JSON rows; defaults to the first split.
        #[arg(long)]
        split: Option<String>,
        #[arg(long, value_enum, default_value = "pruned")]
        mode: Mode,
        #[arg(long)]
        per_h_st: bool,
        /// Write the variable sidecar JSON here.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combinatorial oracles; arguments and results are JSON.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Print the parametric template of an instance.
    ExportHnpe { instance: PathBuf },
    /// Run the oracle suites and print the report.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: SelftestLevel,
        #[arg(long, env = "GWNULL_SEED", default_value_t = DeciderConfig::default().seed)]
        seed: u64,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum OracleOp {
    /// `{"u": [...], "v": [...], "w": [...]}` -> `c_{u,v}^w`.
    StructConst { json: String },
    /// `{"r": int, "w": [...]}` -> the quantum Monk expansion.
    QuantumMonk { json: String },
    /// `{"u": [...], "v": [...], "w": [...], "d": [...]}` -> the invariant, for
    /// degree zero or a simple transposition `v`.
    Gw { json: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum SelftestLevel {
    Quick,
    Full,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GwInstance, Failure> {
    Ok(GwInstance::from_json(&read_input(path)?)?)
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn perm_field(v: &serde_json::Value, key: &str) -> Result<Permutation, Failure> {
    let entries: Vec<usize> = serde_json::from_value(v.get(key).cloned().ok_or_else(|| Failure(format!("missing `{key}`")))?)?;
    Ok(Permutation::new(entries)?)
}

fn simple_index(p: &Permutation) -> Option<usize> {
    (1..p.n()).find(|&r| *p == Permutation::simple_transposition(p.n(), r))
}

fn oracle(op: OracleOp) -> Result<serde_json::Value, Failure> {
    match op {
        OracleOp::StructConst { json } => {
            let v: serde_json::Value = serde_json::from_str(&json)?;
            let (u, vv, w) = (perm_field(&v, "u")?, perm_field(&v, "v")?, perm_field(&v, "w")?);
            same_size(&[&u, &vv, &w])?;
            Ok(json!({ "value": struct_const(&u, &vv, &w) }))
        }
        OracleOp::QuantumMonk { json } => {
            let v: serde_json::Value = serde_json::from_str(&json)?;
            let w = perm_field(&v, "w")?;
            let r: usize = serde_json::from_value(v.get("r").cloned().ok_or_else(|| Failure("missing `r`".into()))?)?;
            if r == 0 || r >= w.n() {
                return Err(Failure(format!("r = {r} must lie in [1, {}]", w.n() - 1)));
            }
            Ok(json!({ "terms": quantum_monk(r, &w).entries() }))
        }
        OracleOp::Gw { json } => {
            let v: serde_json::Value = serde_json::from_str(&json)?;
            let (u, vv, w) = (perm_field(&v, "u")?, perm_field(&v, "v")?, perm_field(&v, "w")?);
            same_size(&[&u, &vv, &w])?;
            let d: Vec<u32> = serde_json::from_value(v.get("d").cloned().unwrap_or_else(|| json!(vec![0; u.n() - 1])))?;
            if d.len() != u.n() - 1 {
                return Err(Failure(format!("degree vector has length {}, expected {}", d.len(), u.n() - 1)));
            }
            let value = if d.iter().all(|&x| x == 0) {
                gw_classical(&u, &vv, &w)
            } else if let Some(r) = simple_index(&vv) {
                gw_divisor(&u, r, &w, &d)
            } else {
                return Err(Failure("positive degree needs a simple transposition as `v`".into()));
            };
            Ok(json!({ "value": value }))
        }
    }
}

fn same_size(ps: &[&Permutation]) -> Result<(), Failure> {
    if ps.iter().any(|p| p.n() != ps[0].n() || p.n() < 2) {
        return Err(Failure("permutations must share one size n >= 2".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Decide { instance, exact, trials, seed, mode, per_h_st, split_cap, budget, emit_system, sequential } => {
            let inst = load(&instance)?;
            let cfg = DeciderConfig {
                trials,
                seed,
                exact,
                mode: mode.into(),
                per_h_st,
                split_cap,
                gb_budget: budget,
                parallel: !sequential,
                record_timing: true,
                ..DeciderConfig::default()
            };
            if let Some(path) = emit_system {
                let complete = reduce_to_complete(&inst)?;
                let splits = enumerate_splits_capped(&complete.dhat, split_cap)?;
                fs::write(&path, assemble_system(&complete, &splits[0], &cfg.build_options()).to_text())?;
            }
            let verdict = decide(&inst, &cfg)?;
            print_json(&verdict);
            Ok(if verdict.decision == Decision::Inconclusive { EXIT_INCONCLUSIVE } else { 0 })
        }
        Command::Lift { instance } => {
            let inst = load(&instance)?;
            let dhat = lift_degrees(&inst.shape, &inst.degree)?;
            let w_prime = correction_element(&inst.shape, &dhat);
            print_json(&json!({ "dhat": dhat, "w_prime": w_prime }));
            Ok(0)
        }
        Command::Reduce { instance } => {
            let complete = reduce_to_complete(&load(&instance)?)?;
            print_json(&complete.to_gw_instance());
            Ok(0)
        }
        Command::Splits { instance, cap } => {
            let complete = reduce_to_complete(&load(&instance)?)?;
            print_json(&enumerate_splits_capped(&complete.dhat, cap)?);
            Ok(0)
        }
        Command::Build { instance, split, mode, per_h_st, sidecar, out } => {
            let complete = reduce_to_complete(&load(&instance)?)?;
            let split = match split {
                Some(text) => {
                    let rows: Vec<Vec<u32>> = serde_json::from_str(&text)?;
                    let ok = rows.len() + 1 == complete.n
                        && rows.iter().enumerate().all(|(h, r)| r.len() == h + 1)
                        && rows.iter().map(|r| r.iter().sum::<u32>()).eq(complete.dhat.iter().copied());
                    if !ok {
                        return Err(Failure(format!("split does not decompose the lifted degree {:?}", complete.dhat)));
                    }
                    DegreeSplit::new(rows)
                }
                None => enumerate_splits_capped(&complete.dhat, DEFAULT_SPLIT_CAP)?.remove(0),
            };
            let bundle = assemble_system(&complete, &split, &BuildOptions { mode: mode.into(), per_h_st });
            if let Some(path) = sidecar {
                fs::write(path, bundle.sidecar_json())?;
            }
            match out {
                Some(path) => fs::write(path, bundle.to_text())?,
                None => print!("{}", bundle.to_text()),
            }
            Ok(0)
        }
        Command::Oracle { op } => {
            print_json(&oracle(op)?);
            Ok(0)
        }
        Command::ExportHnpe { instance } => {
            print_json(&export_hnpe(&load(&instance)?)?);
            Ok(0)
        }
        Command::Selftest { level, seed, timing } => {
            let level = match level {
                SelftestLevel::Quick => Level::Quick,
                SelftestLevel::Full => Level::Full,
            };
            let cfg = DeciderConfig { seed, record_timing: timing, ..DeciderConfig::default() };
            let report = selftest(level, &cfg, &StandardOracle);
            println!("{}", report.to_json());
            Ok(if report.fail == 0 { 0 } else { EXIT_SELFTEST_FAILED })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
