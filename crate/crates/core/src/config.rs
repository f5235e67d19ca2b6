use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::module::max_card;

/// Knobs shared by every checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckConfig {
    pub exec: Exec,
    /// Largest module enumerated element by element.
    pub max_card: u128,
    /// Random trials per sampled check.
    pub trials: usize,
    /// Hom sets up to this size are enumerated instead of sampled.
    pub exhaustive_hom: u128,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> CheckConfig {
        CheckConfig {
            exec: Exec::default(),
            max_card: max_card(),
            trials: 100,
            exhaustive_hom: 64,
            seed: 0,
        }
    }
}

impl CheckConfig {
    pub fn with_seed(self, seed: u64) -> CheckConfig {
        CheckConfig { seed, ..self }
    }

    pub fn with_trials(self, trials: usize) -> CheckConfig {
        CheckConfig { trials, ..self }
    }

    pub fn with_exec(self, exec: Exec) -> CheckConfig {
        CheckConfig { exec, ..self }
    }

    /// A seed derived from the base seed and a check-local stream index.
    pub fn stream(&self, index: u64) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}
