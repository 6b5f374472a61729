//! The guessing-probability bound table: per dimension, the analytical
//! quantum upper bound (QUB = 1), the see-saw/scan quantum lower bound
//! (QLB), the exhaustive or see-saw classical lower bound (CLB), and the
//! closed-form classical upper bound (CUB).
//!
//! Every emitted row carries the method plus the seed and configuration
//! count needed to re-run it bit-for-bit. CSV values print with 17
//! significant digits so parsing a file reproduces the exact doubles.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game::{classical_upper_bound, CoinKind};
use crate::mub::MubSet;
use crate::numtheory::PrimeDim;
use crate::optimize::{derive_seed, seesaw, SeesawConfig};
use crate::search::{classical_exhaustive_with_budget, scan, ScanBudget, ScanMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    #[serde(rename = "QUB")]
    Qub,
    #[serde(rename = "QLB")]
    Qlb,
    #[serde(rename = "CLB")]
    Clb,
    #[serde(rename = "CUB")]
    Cub,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundKind::Qub => "QUB",
            BoundKind::Qlb => "QLB",
            BoundKind::Clb => "CLB",
            BoundKind::Cub => "CUB",
        };
        write!(f, "{s}")
    }
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "QUB" => Ok(BoundKind::Qub),
            "QLB" => Ok(BoundKind::Qlb),
            "CLB" => Ok(BoundKind::Clb),
            "CUB" => Ok(BoundKind::Cub),
            other => Err(Error::InvalidInput(format!("unknown bound kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "closed-form")]
    ClosedForm,
    #[serde(rename = "exhaustive")]
    Exhaustive,
    #[serde(rename = "seesaw")]
    Seesaw,
    #[serde(rename = "scan")]
    Scan,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::ClosedForm => "closed-form",
            Method::Exhaustive => "exhaustive",
            Method::Seesaw => "seesaw",
            Method::Scan => "scan",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" => Ok(Method::ClosedForm),
            "exhaustive" => Ok(Method::Exhaustive),
            "seesaw" => Ok(Method::Seesaw),
            "scan" => Ok(Method::Scan),
            other => Err(Error::InvalidInput(format!("unknown method {other:?}"))),
        }
    }
}

/// One line of the bound table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub dim: u64,
    pub bound: BoundKind,
    pub value: f64,
    pub method: Method,
    pub seed: Option<u64>,
    pub configs: Option<u64>,
}

/// Knobs for the numerical rows of the table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundsConfig {
    pub seed: u64,
    pub epsilon: f64,
    /// See-saw restarts per scanned configuration.
    pub restarts: usize,
    /// Sample count for the randomized QLB scan at d ≥ 5.
    pub qlb_samples: usize,
    /// Restarts of the classical-coin see-saw used for CLB beyond d = 7.
    pub clb_restarts: usize,
    pub budget: ScanBudget,
}

impl BoundsConfig {
    pub fn new(seed: u64) -> Self {
        BoundsConfig {
            seed,
            epsilon: 1e-6,
            restarts: 10,
            qlb_samples: 200,
            clb_restarts: 50,
            budget: ScanBudget::default(),
        }
    }
}

/// Relabelling modes the QLB scan defaults to per dimension: everything for
/// d ≤ 3, random sampling beyond (the exhaustive space at d = 5 and the
/// cyclic space at d = 7 hold 10^10 and 10^6 see-saw configurations).
pub fn default_qlb_mode(d: PrimeDim, qlb_samples: usize) -> ScanMode {
    if d.value() <= 3 {
        ScanMode::Exhaustive
    } else {
        ScanMode::Random {
            samples: qlb_samples,
        }
    }
}

/// Assemble the four bound rows for every requested dimension.
pub fn bounds_table(dims: &[u64], config: &BoundsConfig) -> Result<Vec<BoundRow>> {
    let mut rows = Vec::with_capacity(dims.len() * 4);
    for (k, &dim) in dims.iter().enumerate() {
        let d = PrimeDim::new(dim)?;
        rows.push(BoundRow {
            dim,
            bound: BoundKind::Qub,
            value: 1.0,
            method: Method::ClosedForm,
            seed: None,
            configs: None,
        });

        // QLB: minimum over excluded bases and relabellings
        let mode = default_qlb_mode(d, config.qlb_samples);
        let scan_seed = derive_seed(config.seed, 2 * k as u64);
        let seesaw_cfg = SeesawConfig {
            epsilon: config.epsilon,
            max_rounds: 500,
            restarts: config.restarts,
            master_seed: scan_seed,
        };
        let report = scan(d, CoinKind::Quantum, mode, &seesaw_cfg, &config.budget)?;
        let mut qlb = report.min_value;
        let mut configs = report.total_configs_evaluated;
        if matches!(mode, ScanMode::Random { .. }) {
            // A random sample rarely hits the identity labelling, which is
            // where the scan minimum sits, so evaluate it for every subset
            // as well (exhaustive and cyclic plans already contain it).
            let n = d.as_usize();
            let ids = vec![crate::mub::Permutation::identity(n); n];
            for excluded in 0..=n {
                let set = crate::mub::standard_set(d, excluded, &ids)?;
                let cfg = SeesawConfig {
                    master_seed: derive_seed(scan_seed, excluded as u64),
                    ..seesaw_cfg
                };
                let result = seesaw(&set, CoinKind::Quantum, &cfg)?;
                qlb = qlb.min(result.best_value);
                configs += 1;
            }
        }
        rows.push(BoundRow {
            dim,
            bound: BoundKind::Qlb,
            value: qlb,
            method: Method::Scan,
            seed: Some(scan_seed),
            configs: Some(configs),
        });

        rows.push(BoundRow {
            dim,
            bound: BoundKind::Cub,
            value: classical_upper_bound(d),
            method: Method::ClosedForm,
            seed: None,
            configs: None,
        });

        // CLB: exact for d ≤ 7, classical-coin see-saw beyond
        let wf = MubSet::wf_set(d)?;
        if (dim as u128).pow(dim as u32) <= config.budget.max_classical_maps as u128 {
            let optimum = classical_exhaustive_with_budget(&wf, &config.budget)?;
            rows.push(BoundRow {
                dim,
                bound: BoundKind::Clb,
                value: optimum.value,
                method: Method::Exhaustive,
                seed: None,
                configs: Some(optimum.maps_evaluated),
            });
        } else {
            let clb_seed = derive_seed(config.seed, 2 * k as u64 + 1);
            let cfg = SeesawConfig {
                epsilon: config.epsilon,
                max_rounds: 500,
                restarts: config.clb_restarts,
                master_seed: clb_seed,
            };
            let result = seesaw(&wf, CoinKind::Classical, &cfg)?;
            rows.push(BoundRow {
                dim,
                bound: BoundKind::Clb,
                value: result.best_value,
                method: Method::Seesaw,
                seed: Some(clb_seed),
                configs: Some(config.clb_restarts as u64),
            });
        }
    }
    Ok(rows)
}

/// `dim,bound,value,method,seed,configs` with 17-significant-digit floats.
pub fn to_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("dim,bound,value,method,seed,configs\n");
    for r in rows {
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        let configs = r.configs.map(|c| c.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{:.16e},{},{},{}\n",
            r.dim, r.bound, r.value, r.method, seed, configs
        ));
    }
    out
}

pub fn from_csv(text: &str) -> Result<Vec<BoundRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Serialization("empty CSV".into()))?;
    if header.trim() != "dim,bound,value,method,seed,configs" {
        return Err(Error::Serialization(format!(
            "unexpected header {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Serialization(format!(
                "line {}: expected 6 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_opt = |s: &str| -> Result<Option<u64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|e| Error::Serialization(format!("line {}: {e}", lineno + 2)))
            }
        };
        rows.push(BoundRow {
            dim: fields[0]
                .parse()
                .map_err(|e| Error::Serialization(format!("line {}: {e}", lineno + 2)))?,
            bound: fields[1].parse()?,
            value: fields[2]
                .parse()
                .map_err(|e| Error::Serialization(format!("line {}: {e}", lineno + 2)))?,
            method: fields[3].parse()?,
            seed: parse_opt(fields[4])?,
            configs: parse_opt(fields[5])?,
        });
    }
    Ok(rows)
}

pub fn to_json(rows: &[BoundRow]) -> String {
    serde_json::to_string_pretty(rows).expect("BoundRow serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<Vec<BoundRow>> {
    serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
}
