//! `mubgame` — verify MUB constructions, certify the perfect strategy,
//! compute classical bounds, run see-saw optimizations and relabelling
//! scans, and emit the bound table as CSV or JSON.
//!
//! Exit codes: 0 success, 1 certification/verification failure, 2 usage
//! error, 3 enumeration budget exceeded. `MUBGAME_THREADS` caps the rayon
//! pool (default: all cores).

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use mubgame::bounds::{bounds_table, to_csv as bounds_csv, to_json as bounds_json, BoundsConfig};
use mubgame::game::{certify, classical_upper_bound, CoinKind};
use mubgame::mub::{dpp_relabellings, standard_set, verify_mub_set, MubSet, Permutation};
use mubgame::optimize::{seesaw, SeesawConfig};
use mubgame::search::{classical_exhaustive_with_budget, scan, ScanBudget, ScanMode};
use mubgame::{Error, PrimeDim};

#[derive(Parser)]
#[command(name = "mubgame", version, about = "MUB guessing-game toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Wf,
    Dpp,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoinArg {
    Quantum,
    Classical,
}

impl From<CoinArg> for CoinKind {
    fn from(c: CoinArg) -> CoinKind {
        match c {
            CoinArg::Quantum => CoinKind::Quantum,
            CoinArg::Classical => CoinKind::Classical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check mutual unbiasedness of a constructed measurement set.
    Verify {
        #[arg(long)]
        dim: u64,
        /// Basis family: plain Wootters-Fields or the shifted variant.
        #[arg(long, value_enum, default_value_t = FamilyArg::Wf)]
        family: FamilyArg,
        /// Which of the d+1 pool bases to drop (default: the computational one).
        #[arg(long, default_value_t = 0)]
        excluded: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Certify the closed-form perfect strategy at an odd prime dimension.
    Certify {
        #[arg(long)]
        dim: u64,
    },
    /// Exact classical-coin optimum by enumerating all d^d guess rules.
    Classical {
        #[arg(long)]
        dim: u64,
        #[arg(long, default_value_t = 0)]
        excluded: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// See-saw optimization of the guessing probability for one set.
    Seesaw {
        #[arg(long)]
        dim: u64,
        #[arg(long, value_enum, default_value_t = CoinArg::Quantum)]
        coin: CoinArg,
        #[arg(long, value_enum, default_value_t = FamilyArg::Wf)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0)]
        excluded: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Sweep every excluded-basis choice and relabelling tuple.
    Scan {
        #[arg(long)]
        dim: u64,
        #[arg(long, value_enum, default_value_t = CoinArg::Quantum)]
        coin: CoinArg,
        /// exhaustive, cyclic, or random(N)
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        /// See-saw restarts per configuration.
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Emit the bound table (QUB/QLB/CLB/CUB) for a list of prime dimensions.
    Bounds {
        /// Comma-separated dimensions, e.g. 2,3,5,7
        #[arg(long, value_delimiter = ',')]
        dims: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        /// See-saw restarts per scanned configuration.
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        /// Random relabelling samples per scan for d ≥ 5.
        #[arg(long, default_value_t = 200)]
        qlb_samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("MUBGAME_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: MUBGAME_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => 3,
        Error::NotPrime(_)
        | Error::OddPrimeRequired(_)
        | Error::InvalidInput(_)
        | Error::ExcludedOutOfRange { .. }
        | Error::RelabellingCount { .. } => 2,
        _ => 1,
    }
}

fn build_set(dim: u64, family: FamilyArg, excluded: usize) -> Result<MubSet, Error> {
    let d = PrimeDim::new(dim)?;
    match family {
        FamilyArg::Wf => {
            let ids = vec![Permutation::identity(d.as_usize()); d.as_usize()];
            standard_set(d, excluded, &ids)
        }
        FamilyArg::Dpp => {
            if excluded != 0 {
                return Err(Error::InvalidInput(
                    "the shifted family is defined on the computational-excluded subset".into(),
                ));
            }
            standard_set(d, 0, &dpp_relabellings(d)?)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Serialization(format!("writing {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Verify {
            dim,
            family,
            excluded,
            tol,
        } => {
            let set = build_set(dim, family, excluded)?;
            let report = verify_mub_set(&set, tol);
            println!(
                "dim {dim}, family {}, excluded {excluded}: worst deviation {:.3e} (tol {tol:.1e})",
                set.family(),
                report.worst_deviation
            );
            if report.ok {
                println!("mutually unbiased: yes");
                Ok(ExitCode::SUCCESS)
            } else {
                if let Some((a, b, i, j)) = report.offending_pair {
                    println!("offending overlap: bases ({a},{b}), entry ({i},{j})");
                }
                println!("mutually unbiased: no");
                Ok(ExitCode::from(1))
            }
        }
        Command::Certify { dim } => {
            let d = PrimeDim::new(dim)?;
            if dim == 2 {
                return Err(Error::InvalidInput(
                    "no closed-form strategy at d = 2; run `mubgame seesaw --dim 2` instead".into(),
                ));
            }
            let report = certify(d)?;
            println!("dim {dim} perfect-strategy certification (tolerance 1e-9):");
            println!("  unbiasedness deviation   {:.3e}", report.mub_deviation);
            println!(
                "  POVM projective           {}",
                if report.povm_projective { "yes" } else { "no" }
            );
            println!("  max |<phi_i|phi_j>|       {:.3e}", report.max_phi_overlap);
            println!("  |P_g - 1|                 {:.3e}", report.pg_deviation);
            if report.passed() {
                println!("certified: guessing probability 1 attained");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("certification FAILED");
                Ok(ExitCode::from(1))
            }
        }
        Command::Classical {
            dim,
            excluded,
            out,
            format,
        } => {
            let set = build_set(dim, FamilyArg::Wf, excluded)?;
            let optimum = classical_exhaustive_with_budget(&set, &ScanBudget::default())?;
            let d = PrimeDim::new(dim)?;
            println!(
                "dim {dim}, excluded {excluded}: classical optimum {:.17} over {} rules (upper bound {:.17})",
                optimum.value,
                optimum.maps_evaluated,
                classical_upper_bound(d)
            );
            println!("best rule: {:?}", optimum.best_map.assignment());
            if out.is_some() {
                let text = match format {
                    FormatArg::Csv => {
                        let rule: Vec<String> = optimum
                            .best_map
                            .assignment()
                            .iter()
                            .map(|v| v.to_string())
                            .collect();
                        format!(
                            "dim,excluded,value,best_map,maps_evaluated\n{},{},{:.16e},{},{}\n",
                            dim,
                            excluded,
                            optimum.value,
                            rule.join("-"),
                            optimum.maps_evaluated
                        )
                    }
                    FormatArg::Json => serde_json::to_string_pretty(&serde_json::json!({
                        "dim": dim,
                        "excluded": excluded,
                        "value": optimum.value,
                        "best_map": optimum.best_map.assignment(),
                        "maps_evaluated": optimum.maps_evaluated,
                    }))
                    .expect("json encoding cannot fail"),
                };
                emit(out.as_ref(), &text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Seesaw {
            dim,
            coin,
            family,
            excluded,
            seed,
            eps,
            restarts,
            out,
            format,
        } => {
            let set = build_set(dim, family, excluded)?;
            let config = SeesawConfig {
                epsilon: eps,
                max_rounds: 500,
                restarts,
                master_seed: seed,
            };
            let coin: CoinKind = coin.into();
            let result = seesaw(&set, coin, &config)?;
            let monotone = result.per_restart.iter().filter(|r| r.monotone_ok).count();
            println!(
                "dim {dim}, family {}, coin {coin}: best value {:.17} over {restarts} restarts (seed {seed})",
                set.family(),
                result.best_value
            );
            println!(
                "monotone traces {monotone}/{restarts}, povm valid: {}, certificate gap {:.3e}",
                result.certificate.is_valid_povm, result.certificate.discrimination_gap
            );
            if out.is_some() {
                let text = match format {
                    FormatArg::Json => result.to_json(),
                    FormatArg::Csv => {
                        let mut text =
                            String::from("restart,seed,rounds,final_value,monotone_ok,converged\n");
                        for (i, r) in result.per_restart.iter().enumerate() {
                            text.push_str(&format!(
                                "{},{},{},{:.16e},{},{}\n",
                                i, r.seed, r.rounds, r.final_value, r.monotone_ok, r.converged
                            ));
                        }
                        text
                    }
                };
                emit(out.as_ref(), &text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            dim,
            coin,
            mode,
            seed,
            eps,
            restarts,
            out,
            format,
        } => {
            let d = PrimeDim::new(dim)?;
            let mode: ScanMode = mode.parse()?;
            let config = SeesawConfig {
                epsilon: eps,
                max_rounds: 500,
                restarts,
                master_seed: seed,
            };
            let coin: CoinKind = coin.into();
            let report = scan(d, coin, mode, &config, &ScanBudget::default())?;
            println!(
                "dim {dim}, coin {coin}, mode {mode}: {} configs",
                report.total_configs_evaluated
            );
            println!(
                "min {:.17} at excluded {} relabellings {:?}",
                report.min_value, report.min_config.excluded, report.min_config.relabellings
            );
            println!(
                "max {:.17} at excluded {} relabellings {:?}",
                report.max_value, report.max_config.excluded, report.max_config.relabellings
            );
            let text = match format {
                FormatArg::Csv => report.to_csv(),
                FormatArg::Json => report.to_json(),
            };
            if out.is_some() {
                emit(out.as_ref(), &text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds {
            dims,
            seed,
            eps,
            restarts,
            qlb_samples,
            out,
            format,
        } => {
            if dims.is_empty() {
                return Err(Error::InvalidInput(
                    "--dims must list at least one dimension".into(),
                ));
            }
            let mut config = BoundsConfig::new(seed);
            config.epsilon = eps;
            config.restarts = restarts;
            config.qlb_samples = qlb_samples;
            let rows = bounds_table(&dims, &config)?;
            for r in &rows {
                println!(
                    "d={:<3} {}  {:.17}  ({})",
                    r.dim, r.bound, r.value, r.method
                );
            }
            let text = match format {
                FormatArg::Csv => bounds_csv(&rows),
                FormatArg::Json => bounds_json(&rows),
            };
            if let Some(path) = out.as_ref() {
                emit(Some(path), &text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
