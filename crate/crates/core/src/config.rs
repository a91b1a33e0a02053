//! Knobs shared by the sampling and enumeration routines.

use crate::geometry::{PointConfig, DEFAULT_POINT_BUDGET};
use crate::par::Exec;

#[derive(Clone, Debug)]
pub struct Config {
    /// Base seed; every trial derives its own stream from it.
    pub seed: u64,
    /// Sampled points per extension degree.
    pub trials: usize,
    /// Largest extension degree used when sampling curve points.
    pub max_ext: u32,
    pub point_budget: u128,
    /// Largest extension degree for point counts of surfaces and containment searches.
    pub ext_budget: u32,
    /// Overrides the default series truncation.
    pub truncation: Option<usize>,
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            trials: 5,
            max_ext: 6,
            point_budget: DEFAULT_POINT_BUDGET,
            ext_budget: 2,
            truncation: None,
            exec: Exec::default(),
        }
    }
}

impl Config {
    pub fn points(&self) -> PointConfig {
        PointConfig { budget: self.point_budget, exec: self.exec }
    }
}
