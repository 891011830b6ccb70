//! Stimulus sequencing across participants.
//!
//! Every participant sees each dataset once, always in catalog order, at
//! one of the five noise levels. Participants are grouped in aligned blocks
//! of five; within a block each dataset's levels are a seeded rotation, so
//! the block covers every (dataset, level) pair exactly once.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StenoError};
use crate::noise::NoiseLevel;

pub const DATASET_COUNT: usize = 9;
pub const BLOCK_SIZE: usize = NoiseLevel::ALL.len();

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub dataset: String,
    pub level: NoiseLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StimulusPlan {
    pub participant: usize,
    pub assignments: Vec<Assignment>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlanOptions {
    /// Accept catalogs with other than nine datasets.
    pub allow_any_dataset_count: bool,
}

pub fn build_stimulus_plan(datasets: &[String], participant: usize, seed: u64) -> Result<StimulusPlan> {
    build_stimulus_plan_with(datasets, participant, seed, PlanOptions::default())
}

pub fn build_stimulus_plan_with(
    datasets: &[String],
    participant: usize,
    seed: u64,
    options: PlanOptions,
) -> Result<StimulusPlan> {
    if datasets.is_empty() || (!options.allow_any_dataset_count && datasets.len() != DATASET_COUNT) {
        return Err(StenoError::Config(format!(
            "a stimulus plan needs {DATASET_COUNT} datasets, got {}",
            datasets.len()
        )));
    }
    let block = participant / BLOCK_SIZE;
    let slot = participant % BLOCK_SIZE;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    let mut levels = NoiseLevel::ALL;
    levels.shuffle(&mut rng);
    let assignments = datasets
        .iter()
        .map(|d| {
            let offset = rng.random_range(0..BLOCK_SIZE);
            Assignment {
                dataset: d.clone(),
                level: levels[(slot + offset) % BLOCK_SIZE],
            }
        })
        .collect();
    Ok(StimulusPlan {
        participant,
        assignments,
    })
}
