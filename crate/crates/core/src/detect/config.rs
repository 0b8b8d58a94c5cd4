use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Connectivity;
use crate::enhance::NormalizationParams;
use crate::error::{invalid, Result};
use crate::morph::{SeShape, StructuringElement};
use crate::scalar::Scalar;

/// Structuring element as written in a config file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeSpec {
    pub shape: SeShape,
    pub size: usize,
}

impl Default for SeSpec {
    fn default() -> Self {
        Self { shape: SeShape::Square, size: 3 }
    }
}

impl SeSpec {
    pub fn build(&self) -> Result<StructuringElement> {
        if self.size.is_multiple_of(2) {
            return Err(invalid(format!("structuring element size must be odd, got {}", self.size)));
        }
        match self.shape {
            SeShape::Square => StructuringElement::square(self.size),
            SeShape::Disk => Ok(StructuringElement::disk(self.size / 2)),
            SeShape::Custom => Err(invalid("custom structuring elements cannot be configured by file")),
        }
    }
}

/// Every tunable of the detection pipeline. All fields are optional in the
/// JSON form and fall back to the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound = "T: Scalar")]
pub struct PipelineConfig<T> {
    pub normalization: NormalizationParams<T>,
    /// Convergence step for the iterative threshold (gray levels).
    pub t0: T,
    pub se: SeSpec,
    /// Contours below this pixel count are dropped after closing and are
    /// never flagged.
    pub min_area: usize,
    /// A contour is flagged when its texture density is at least this many
    /// times the whole-image density.
    pub ratio_factor: T,
    pub connectivity: Connectivity,
}

impl<T: Scalar> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self {
            normalization: NormalizationParams::default(),
            t0: T::lit(0.5),
            se: SeSpec::default(),
            min_area: 50,
            ratio_factor: T::lit(5.0),
            connectivity: Connectivity::Eight,
        }
    }
}

impl<T: Scalar> PipelineConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.normalization.validate()?;
        if !(self.t0 > T::zero()) {
            return Err(invalid("t0 must be positive"));
        }
        if !(self.ratio_factor > T::one()) {
            return Err(invalid("ratio_factor must exceed 1"));
        }
        if self.min_area < 1 {
            return Err(invalid("min_area must be at least 1"));
        }
        self.se.build()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(T) -> U) -> PipelineConfig<U> {
        PipelineConfig {
            normalization: NormalizationParams {
                subtract_fraction: f(self.normalization.subtract_fraction),
                top_fraction: f(self.normalization.top_fraction),
                activation_threshold: f(self.normalization.activation_threshold),
            },
            t0: f(self.t0),
            se: self.se,
            min_area: self.min_area,
            ratio_factor: f(self.ratio_factor),
            connectivity: self.connectivity,
        }
    }
}
