//! Dataset catalog for a study data directory.
//!
//! Layout:
//!
//! ```text
//! data/
//!   catalog.json        # seed, canvas, ordered dataset entries
//!   <dataset>.csv       # x,y series, one per entry
//!   sessions.jsonl      # event log written by the study service
//! ```

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{DatasetProperties, TrendDirection};
use crate::error::{Result, StenoError};
use crate::io::{load_series_csv, save_series_csv};
use crate::noise::{inject_gaussian_noise, NoiseLevel};
use crate::series::TimeSeries;
use crate::stroke::CanvasSpec;

pub const CATALOG_FILE: &str = "catalog.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub id: String,
    /// CSV path relative to the catalog directory.
    pub file: PathBuf,
    pub properties: DatasetProperties,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    /// Master seed for plans and stimulus noise.
    pub seed: u64,
    #[serde(default)]
    pub canvas: CanvasSpec,
    pub datasets: Vec<DatasetEntry>,
    #[serde(skip)]
    root: PathBuf,
}

impl Catalog {
    pub fn new(root: impl Into<PathBuf>, seed: u64, datasets: Vec<DatasetEntry>) -> Self {
        Self {
            seed,
            canvas: CanvasSpec::default(),
            datasets,
            root: root.into(),
        }
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(CATALOG_FILE);
        let text = fs::read_to_string(&path).map_err(|e| {
            StenoError::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        let mut c: Catalog = serde_json::from_str(&text)?;
        c.root = dir.to_path_buf();
        c.canvas.validate()?;
        if c.datasets.is_empty() {
            return Err(StenoError::Config("catalog lists no datasets".into()));
        }
        Ok(c)
    }

    pub fn save(&self) -> Result<()> {
        fs::create_dir_all(&self.root)?;
        fs::write(self.root.join(CATALOG_FILE), serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn dataset_ids(&self) -> Vec<String> {
        self.datasets.iter().map(|d| d.id.clone()).collect()
    }

    pub fn entry(&self, id: &str) -> Result<(usize, &DatasetEntry)> {
        self.datasets
            .iter()
            .enumerate()
            .find(|(_, d)| d.id == id)
            .ok_or_else(|| StenoError::Config(format!("dataset `{id}` is not in the catalog")))
    }

    pub fn load_series(&self, id: &str) -> Result<TimeSeries> {
        let (_, e) = self.entry(id)?;
        load_series_csv(&self.root.join(&e.file))
    }

    /// Seed for the noise of one (dataset, level) stimulus.
    pub fn stimulus_seed(&self, dataset_index: usize, level: NoiseLevel) -> u64 {
        stimulus_seed(self.seed, dataset_index, level)
    }

    /// The stimulus series in data units.
    pub fn stimulus(&self, id: &str, level: NoiseLevel) -> Result<TimeSeries> {
        let (idx, _) = self.entry(id)?;
        let base = self.load_series(id)?;
        inject_gaussian_noise(&base, level, self.stimulus_seed(idx, level))
    }

    /// Dataset properties, with noise marked present for any noisy level.
    pub fn properties(&self, id: &str, level: NoiseLevel) -> Result<DatasetProperties> {
        let (_, e) = self.entry(id)?;
        Ok(e.properties.with_noise(level != NoiseLevel::None))
    }
}

pub fn stimulus_seed(master: u64, dataset_index: usize, level: NoiseLevel) -> u64 {
    // splitmix-style scramble so neighboring indices get unrelated streams
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15_u64.wrapping_mul(dataset_index as u64 * 8 + level.index() as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Names and observed properties of the nine reference datasets.
pub fn reference_datasets() -> Vec<(&'static str, &'static str, DatasetProperties)> {
    use TrendDirection::*;
    let p = |trend, periodic, peaks_valleys| DatasetProperties {
        trend,
        periodic,
        peaks_valleys,
        noisy: true,
    };
    vec![
        ("apple", "Daily Apple stock closing price", p(Up, false, true)),
        ("astronomy", "Radio astronomy signal", p(Constant, false, true)),
        ("chicago", "Monthly homicide rate in Chicago", p(Constant, true, true)),
        ("temperature", "Daily high temperature at JFK airport", p(Constant, true, false)),
        ("doge", "Daily Doge coin closing price", p(Down, false, true)),
        ("eeg", "Single channel of EEG data", p(Up, false, true)),
        ("flights", "Weekly US domestic flights", p(Up, false, true)),
        ("tourists", "Monthly tourists in New Zealand", p(Up, false, false)),
        ("unemployment", "US monthly unemployment in agriculture", p(Constant, true, true)),
    ]
}

/// Writes a catalog of nine synthetic stand-ins for the reference datasets,
/// each built to show the listed properties.
pub fn write_synthetic_catalog(dir: &Path, seed: u64, samples: usize) -> Result<Catalog> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for (i, (id, desc, props)) in reference_datasets().into_iter().enumerate() {
        let series = synthetic_series(&props, samples, seed.wrapping_add(i as u64));
        let file = PathBuf::from(format!("{id}.csv"));
        save_series_csv(&series, &dir.join(&file))?;
        entries.push(DatasetEntry {
            id: id.to_string(),
            file,
            properties: props,
            description: Some(format!("synthetic stand-in: {desc}")),
        });
    }
    let catalog = Catalog::new(dir, seed, entries);
    catalog.save()?;
    Ok(catalog)
}

/// Trend ramp, optional 12-cycle seasonality, optional prominent bumps and
/// a mild random walk.
pub fn synthetic_series(props: &DatasetProperties, samples: usize, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = samples.max(2);
    let slope = match props.trend {
        TrendDirection::Up => 4.0,
        TrendDirection::Down => -4.0,
        TrendDirection::Constant => 0.0,
    };
    let bumps: Vec<(f64, f64, f64)> = if props.peaks_valleys {
        (0..3)
            .map(|k| {
                let center = 0.2 + 0.3 * k as f64 + rng.random_range(-0.05..0.05);
                let height = if k % 2 == 0 { 3.0 } else { -2.5 };
                (center, height, 0.015)
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut walk = 0.0;
    let ys = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            walk += rng.random_range(-0.02..0.02);
            let mut y = slope * t + walk;
            if props.periodic {
                y += 1.5 * (2.0 * PI * 12.0 * t).sin();
            }
            for &(c, h, w) in &bumps {
                y += h * (-((t - c) / w).powi(2)).exp();
            }
            y
        })
        .collect();
    TimeSeries::uniform(ys, (n - 1) as f64).expect("grid is strictly increasing")
}
