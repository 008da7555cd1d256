//! Experiment orchestration: configuration, strategy construction, seed
//! batteries, parallel sweeps, and CSV/JSON emission. The CLI in main.rs is
//! a thin wrapper over this module so tests can drive it directly.

use std::fs;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run, Outcome, RunParams, RunRecord, SamplingModel, Strategy};
use crate::strategies::{
    CollectAll, DOutParams, DOutStrategy, SublogParams, SublogStrategy, SuperlogParams,
    SuperlogStrategy,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub strategy: String,
    pub n: usize,
    /// Sweep list; a single run uses ks[0].
    pub ks: Vec<usize>,
    pub model: SamplingModel,
    pub seeds: Vec<u64>,
    /// 0 means a per-strategy automatic budget.
    pub max_rounds: u64,
    /// Use the asymptotic parameter constants instead of the desk-scale ones.
    pub fidelity: bool,
    /// d for the d-out strategies.
    pub d: usize,
    pub ledger: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            strategy: "sublog".into(),
            n: 1000,
            ks: vec![2],
            model: SamplingModel::RelaxedPairs,
            seeds: (0..10).collect(),
            max_rounds: 0,
            fidelity: false,
            d: 3,
            ledger: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.seeds.is_empty() {
            return Err("seed list is empty".into());
        }
        if self.n < 4 {
            return Err(format!("n = {} < 4", self.n));
        }
        if self.ks.is_empty() || self.ks.iter().any(|&k| k == 0) {
            return Err("K list must be nonempty with K >= 1".into());
        }
        Ok(())
    }
}

pub fn build_strategy(cfg: &ExperimentConfig, k: usize) -> Result<Box<dyn Strategy>, String> {
    let n = cfg.n;
    Ok(match cfg.strategy.as_str() {
        "first-edge" => Box::new(crate::engine::FirstEdge),
        "always-skip" => Box::new(crate::engine::AlwaysSkip),
        "collect-all" => Box::new(CollectAll),
        "sublog" => {
            let p = if cfg.fidelity {
                SublogParams::fidelity(n, k)
            } else {
                SublogParams::desk(n, k)
            };
            Box::new(SublogStrategy::new(n, k, p))
        }
        "superlog" => {
            let p = if cfg.fidelity {
                SuperlogParams::fidelity(n, k)
            } else {
                SuperlogParams::desk(n, k)
            };
            Box::new(SuperlogStrategy::new(n, k, p))
        }
        "d-out" => Box::new(DOutStrategy::new(n, DOutParams::new(cfg.d, k))),
        "intermediate" => Box::new(DOutStrategy::intermediate(n, DOutParams::new(cfg.d, k))),
        other => return Err(format!("unknown strategy '{other}'")),
    })
}

/// Generous round ceiling when the config does not pin one; strategies fail
/// via their own phase budgets well before this.
pub fn auto_max_rounds(cfg: &ExperimentConfig, k: usize) -> u64 {
    let n = cfg.n as f64;
    let ln = n.ln();
    match cfg.strategy.as_str() {
        "first-edge" | "always-skip" => (10.0 * n) as u64,
        "collect-all" => (2.0 * n * ln).ceil() as u64,
        "sublog" => (6.0 * n + 12.0 * n * ln / k as f64 + 4.0e4 * n / k as f64).ceil() as u64,
        "superlog" => (10.0 * n).ceil() as u64,
        "d-out" | "intermediate" => {
            ((cfg.d as f64 + 3.0) * n + 4.0 * n * ln / k as f64).ceil() as u64
        }
        _ => (20.0 * n * ln).ceil() as u64,
    }
}

pub fn run_one(cfg: &ExperimentConfig, k: usize, seed: u64) -> Result<RunRecord, String> {
    let mut strategy = build_strategy(cfg, k)?;
    let max_rounds = if cfg.max_rounds > 0 {
        cfg.max_rounds
    } else {
        auto_max_rounds(cfg, k)
    };
    let params = RunParams {
        n: cfg.n,
        k,
        model: cfg.model,
        seed,
        max_rounds,
        ledger: cfg.ledger,
    };
    run(&params, strategy.as_mut(), None).map_err(|e| e.to_string())
}

fn outcome_tag(o: &Outcome) -> String {
    match o {
        Outcome::Hamiltonian(_) => "hamiltonian".into(),
        Outcome::Constructed => "constructed".into(),
        Outcome::NotCertified => "not_certified".into(),
        Outcome::BudgetExhausted => "budget_exhausted".into(),
        Outcome::PhaseFailed(w) => format!("phase_failed({})", w.replace(',', ";")),
    }
}

fn outcome_success(o: &Outcome) -> bool {
    matches!(o, Outcome::Hamiltonian(_) | Outcome::Constructed)
}

pub fn median(sorted: &[u64]) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid] as f64
    } else {
        (sorted[mid - 1] + sorted[mid]) as f64 / 2.0
    })
}

pub struct SweepCell {
    pub k: usize,
    pub records: Vec<(u64, RunRecord)>,
}

pub struct SweepSummary {
    pub cells: Vec<SweepCell>,
}

/// Runs the full (K × seed) battery in parallel. Output order is sorted by
/// (K, seed) so the result is independent of the parallelism level.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepSummary, String> {
    cfg.validate()?;
    let mut jobs: Vec<(usize, u64)> = Vec::new();
    for &k in &cfg.ks {
        for &s in &cfg.seeds {
            jobs.push((k, s));
        }
    }
    let mut results: Vec<(usize, u64, RunRecord)> = jobs
        .par_iter()
        .map(|&(k, s)| run_one(cfg, k, s).map(|r| (k, s, r)))
        .collect::<Result<Vec<_>, _>>()?;
    results.sort_by_key(|(k, s, _)| (*k, *s));
    let mut cells: Vec<SweepCell> = Vec::new();
    for (k, s, r) in results {
        match cells.last_mut() {
            Some(cell) if cell.k == k => cell.records.push((s, r)),
            _ => cells.push(SweepCell {
                k,
                records: vec![(s, r)],
            }),
        }
    }
    Ok(SweepSummary { cells })
}

pub const SWEEP_CSV_HEADER: &str = "strategy,n,K,seed,row,phases,total,outcome,\
runs,successes,success_rate,median_total,mean_total,stddev_total,\
median_over_n,median_over_theory";

/// Long-format CSV: one row per run, then one flagged aggregate row per
/// (n, K) cell. Medians/means are over successful runs only, with the count
/// disclosed in the `successes` column.
pub fn sweep_csv(cfg: &ExperimentConfig, summary: &SweepSummary) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for cell in &summary.cells {
        for (seed, r) in &cell.records {
            let phases: Vec<String> = r
                .phase_rounds
                .iter()
                .map(|(p, c)| format!("{p}:{c}"))
                .collect();
            out.push_str(&format!(
                "{},{},{},{},run,{},{},{},,,,,,,,\n",
                r.strategy,
                cfg.n,
                cell.k,
                seed,
                phases.join(";"),
                r.total_rounds,
                outcome_tag(&r.outcome),
            ));
        }
        let mut totals: Vec<u64> = cell
            .records
            .iter()
            .filter(|(_, r)| outcome_success(&r.outcome))
            .map(|(_, r)| r.total_rounds)
            .collect();
        totals.sort_unstable();
        let runs = cell.records.len();
        let successes = totals.len();
        let rate = successes as f64 / runs as f64;
        let med = median(&totals);
        let mean = if totals.is_empty() {
            None
        } else {
            Some(totals.iter().sum::<u64>() as f64 / totals.len() as f64)
        };
        let stddev = match (totals.len(), mean) {
            (len, Some(m)) if len >= 2 => {
                let var = totals
                    .iter()
                    .map(|&t| (t as f64 - m).powi(2))
                    .sum::<f64>()
                    / (len - 1) as f64;
                Some(var.sqrt())
            }
            _ => None,
        };
        // per-phase medians across successful runs
        let mut phase_totals: Vec<(String, Vec<u64>)> = Vec::new();
        for (_, r) in cell
            .records
            .iter()
            .filter(|(_, r)| outcome_success(&r.outcome))
        {
            for (p, c) in &r.phase_rounds {
                match phase_totals.iter_mut().find(|(q, _)| q == p) {
                    Some((_, v)) => v.push(*c),
                    None => phase_totals.push((p.clone(), vec![*c])),
                }
            }
        }
        let phase_medians: Vec<String> = phase_totals
            .iter_mut()
            .map(|(p, v)| {
                v.sort_unstable();
                format!("{p}:{}", median(v).unwrap_or(0.0))
            })
            .collect();
        let fmt = |x: Option<f64>| x.map(|v| format!("{v:.2}")).unwrap_or_default();
        let n = cfg.n as f64;
        let theory = n * n.ln() / (2.0 * cell.k as f64);
        let strategy = cell
            .records
            .first()
            .map(|(_, r)| r.strategy.clone())
            .unwrap_or_else(|| cfg.strategy.clone());
        out.push_str(&format!(
            "{},{},{},,agg,{},,,{},{},{:.3},{},{},{},{},{}\n",
            strategy,
            cfg.n,
            cell.k,
            phase_medians.join(";"),
            runs,
            successes,
            rate,
            fmt(med),
            fmt(mean),
            fmt(stddev),
            fmt(med.map(|m| m / n)),
            fmt(med.map(|m| m / theory)),
        ));
    }
    out
}

/// Loads config defaults from a JSON file; caller-supplied flags override.
pub fn load_config_file(path: &str) -> Result<ExperimentConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))
}
