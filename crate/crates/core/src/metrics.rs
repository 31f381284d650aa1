//! Episode metrics: gate counts and the reconstructed circuit-depth Λ.
//!
//! Λ normalizes the number of gates an agent used against the depth λ the
//! target generator spent, as a percentage. A truncated episode counts the
//! full budget `L`, so with `L = 2λ` the ceiling is exactly 200%.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of one finished episode, the unit of metric aggregation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub lambda: usize,
    pub max_len: usize,
    pub gates_used: usize,
    pub success: bool,
    pub final_fidelity: f64,
}

impl EpisodeOutcome {
    /// Λ of this episode, in percent.
    pub fn lambda_percent(&self) -> f64 {
        reconstructed_depth(self.gates_used, self.lambda).expect("lambda ≥ 1 by construction")
    }
}

/// Gates used by an episode: the steps taken on success, the full budget on
/// truncation (the remaining calculation length is zero).
pub fn gates_used(max_len: usize, steps_taken: usize, success: bool) -> usize {
    if success {
        steps_taken
    } else {
        max_len
    }
}

/// Reconstructed circuit-depth `Λ = (n_g / λ) · 100`, in percent.
pub fn reconstructed_depth(gates_used: usize, lambda: usize) -> Result<f64> {
    if lambda == 0 {
        return Err(Error::InvalidConfig("lambda must be ≥ 1".into()));
    }
    Ok(gates_used as f64 / lambda as f64 * 100.0)
}

/// Mean and population standard deviation of Λ over the last `window`
/// episodes. Errors when fewer than `window` episodes exist.
pub fn trailing_mean(outcomes: &[EpisodeOutcome], window: usize) -> Result<(f64, f64)> {
    if outcomes.len() < window || window == 0 {
        return Err(Error::InsufficientEpisodes {
            have: outcomes.len(),
            need: window.max(1),
        });
    }
    let tail = &outcomes[outcomes.len() - window..];
    let values: Vec<f64> = tail.iter().map(|o| o.lambda_percent()).collect();
    let mean = values.iter().sum::<f64>() / window as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / window as f64;
    Ok((mean, var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(gates_used: usize, lambda: usize) -> EpisodeOutcome {
        EpisodeOutcome {
            lambda,
            max_len: 2 * lambda,
            gates_used,
            success: gates_used < 2 * lambda,
            final_fidelity: 1.0,
        }
    }

    #[test]
    fn gates_used_cases() {
        assert_eq!(gates_used(10, 5, true), 5);
        assert_eq!(gates_used(10, 10, false), 10);
        assert_eq!(gates_used(10, 10, true), 10);
    }

    #[test]
    fn reconstructed_depth_cases() {
        assert_eq!(reconstructed_depth(5, 5).unwrap(), 100.0);
        assert_eq!(reconstructed_depth(10, 5).unwrap(), 200.0);
        assert_eq!(reconstructed_depth(3, 4).unwrap(), 75.0);
        assert!(reconstructed_depth(3, 0).is_err());
    }

    #[test]
    fn truncated_episode_hits_the_ceiling() {
        let o = outcome(10, 5);
        assert_eq!(o.lambda_percent(), 200.0);
    }

    #[test]
    fn lambda_strictly_increases_with_gate_count() {
        let mut last = 0.0;
        for n_g in 1..=10 {
            let v = reconstructed_depth(n_g, 5).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn trailing_mean_constant() {
        let outcomes: Vec<_> = (0..100).map(|_| outcome(6, 4)).collect();
        let (mean, std) = trailing_mean(&outcomes, 100).unwrap();
        assert_eq!(mean, 150.0);
        assert_eq!(std, 0.0);
    }

    #[test]
    fn trailing_mean_alternating() {
        // Alternating 100% / 200% has mean 150 and population std 50.
        let outcomes: Vec<_> = (0..100)
            .map(|i| if i % 2 == 0 { outcome(5, 5) } else { outcome(10, 5) })
            .collect();
        let (mean, std) = trailing_mean(&outcomes, 100).unwrap();
        assert!((mean - 150.0).abs() < 1e-12);
        assert!((std - 50.0).abs() < 1e-12);
    }

    #[test]
    fn trailing_mean_needs_enough_history() {
        let outcomes: Vec<_> = (0..10).map(|_| outcome(5, 5)).collect();
        assert!(matches!(
            trailing_mean(&outcomes, 100),
            Err(Error::InsufficientEpisodes { have: 10, need: 100 })
        ));
    }

    #[test]
    fn trailing_mean_uses_only_the_tail() {
        let mut outcomes: Vec<_> = (0..50).map(|_| outcome(10, 5)).collect();
        outcomes.extend((0..100).map(|_| outcome(5, 5)));
        let (mean, std) = trailing_mean(&outcomes, 100).unwrap();
        assert_eq!(mean, 100.0);
        assert_eq!(std, 0.0);
    }
}
