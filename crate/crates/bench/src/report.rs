//! Benchmark report types. Reports are pure aggregations over the raw
//! per-episode rows they carry, so every statistic can be recomputed.

use serde::{Deserialize, Serialize};

/// One benchmark episode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpisodeRowOut {
    pub target: String,
    pub episode: usize,
    pub seed: u64,
    /// Generator depth for random targets, minimal depth for named states.
    pub lambda: usize,
    pub max_len: usize,
    pub success: bool,
    pub gates_used: usize,
    pub total_reward: f64,
    pub final_fidelity: f64,
    pub circuit: String,
}

/// Aggregate over a group of rows (one λ bucket, one named state, or all).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupStats {
    pub key: String,
    pub episodes: usize,
    pub mean_gates: f64,
    pub std_gates: f64,
    pub success_rate: f64,
    /// Reconstructed-depth statistics; absent when λ = 0 for the group.
    pub lambda_mean: Option<f64>,
    pub lambda_std: Option<f64>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
    (mean, var.sqrt())
}

impl GroupStats {
    /// Aggregate `rows`; population standard deviations.
    pub fn from_rows(key: &str, rows: &[&EpisodeRowOut]) -> GroupStats {
        let gates: Vec<f64> = rows.iter().map(|r| r.gates_used as f64).collect();
        let (mean_gates, std_gates) = mean_std(&gates);
        let successes = rows.iter().filter(|r| r.success).count();
        let lambdas: Vec<f64> = rows
            .iter()
            .filter(|r| r.lambda > 0)
            .map(|r| r.gates_used as f64 / r.lambda as f64 * 100.0)
            .collect();
        let (lambda_mean, lambda_std) = if lambdas.len() == rows.len() && !rows.is_empty() {
            let (m, s) = mean_std(&lambdas);
            (Some(m), Some(s))
        } else {
            (None, None)
        };
        GroupStats {
            key: key.to_string(),
            episodes: rows.len(),
            mean_gates,
            std_gates,
            success_rate: if rows.is_empty() {
                0.0
            } else {
                successes as f64 / rows.len() as f64
            },
            lambda_mean,
            lambda_std,
        }
    }
}

/// Full report for one benchmark invocation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub agent: String,
    pub level: Option<String>,
    pub episodes: Vec<EpisodeRowOut>,
    pub groups: Vec<GroupStats>,
    pub overall: GroupStats,
}

impl BenchReport {
    /// Build a report, grouping rows by `group_of(row)` in first-seen order.
    pub fn new(
        agent: &str,
        level: Option<String>,
        episodes: Vec<EpisodeRowOut>,
        group_of: impl Fn(&EpisodeRowOut) -> String,
    ) -> BenchReport {
        let mut keys: Vec<String> = Vec::new();
        for row in &episodes {
            let key = group_of(row);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        let groups = keys
            .iter()
            .map(|key| {
                let rows: Vec<&EpisodeRowOut> =
                    episodes.iter().filter(|r| &group_of(r) == key).collect();
                GroupStats::from_rows(key, &rows)
            })
            .collect();
        let all: Vec<&EpisodeRowOut> = episodes.iter().collect();
        let overall = GroupStats::from_rows("overall", &all);
        BenchReport {
            agent: agent.to_string(),
            level,
            episodes,
            groups,
            overall,
        }
    }
}
