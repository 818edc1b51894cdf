use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sequence rule for the inertial weights `α_k` or relaxation weights `ρ_k`,
/// indexed from `k = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    Constant {
        value: f64,
    },
    /// `min(start + slope·(k − 1), cap)`
    Ramp {
        start: f64,
        slope: f64,
        cap: f64,
    },
    /// Explicit values; the last one is held past the end.
    Table {
        values: Vec<f64>,
    },
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Schedule::Constant { value }
    }

    pub fn at(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        match self {
            Schedule::Constant { value } => *value,
            Schedule::Ramp { start, slope, cap } => (start + slope * (k.saturating_sub(1)) as f64).min(*cap),
            Schedule::Table { values } => values[(k.saturating_sub(1)).min(values.len() - 1)],
        }
    }

    /// The value the sequence settles at.
    pub fn limit(&self) -> f64 {
        match self {
            Schedule::Constant { value } => *value,
            Schedule::Ramp { start, slope, cap } => {
                if *slope > 0.0 {
                    *cap
                } else if *slope == 0.0 {
                    start.min(*cap)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Schedule::Table { values } => *values.last().expect("non-empty table"),
        }
    }

    fn values_for_check(&self) -> Vec<f64> {
        match self {
            Schedule::Constant { value } => vec![*value],
            Schedule::Ramp { start, cap, .. } => vec![start.min(*cap), *cap],
            Schedule::Table { values } => values.clone(),
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        match self {
            Schedule::Constant { .. } => true,
            Schedule::Ramp { slope, .. } => *slope >= 0.0,
            Schedule::Table { values } => values.windows(2).all(|w| w[0] <= w[1]),
        }
    }

    /// Inertial schedules: nondecreasing with values in `[0, 1)`.
    pub fn check_inertial(&self) -> Result<()> {
        self.check_shape()?;
        if !self.is_nondecreasing() {
            return Err(Error::usage("inertial schedule must be nondecreasing"));
        }
        if self.values_for_check().iter().any(|a| !(0.0..1.0).contains(a)) {
            return Err(Error::usage("inertial weights must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Relaxation schedules: strictly positive.
    pub fn check_relaxation(&self) -> Result<()> {
        self.check_shape()?;
        let positive = match self {
            // a decreasing ramp eventually crosses zero
            Schedule::Ramp { start, slope, cap } => start.min(*cap) > 0.0 && *slope >= 0.0,
            _ => self.values_for_check().iter().all(|r| *r > 0.0),
        };
        if !positive {
            return Err(Error::usage("relaxation weights must be positive"));
        }
        Ok(())
    }

    fn check_shape(&self) -> Result<()> {
        match self {
            Schedule::Table { values } if values.is_empty() => Err(Error::usage("empty schedule table")),
            _ if self.values_for_check().iter().any(|v| !v.is_finite()) => Err(Error::usage("schedule values must be finite")),
            _ => Ok(()),
        }
    }
}
