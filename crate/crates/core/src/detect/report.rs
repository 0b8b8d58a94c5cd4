//! JSON form of [`DetectionReport`].
//!
//! Keys appear in a fixed order and every float is written with six
//! significant digits.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ContourVerdict, DetectionReport, PipelineConfig};
use crate::error::Result;
use crate::scalar::Scalar;

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

fn r6<T: Scalar>(v: T) -> f64 {
    round_sig(v.as_f64(), 6)
}

#[derive(Serialize, Deserialize)]
struct WireContour {
    label: u32,
    area: usize,
    centroid: [f64; 2],
    local_value: f64,
    is_plasmodium: bool,
}

#[derive(Serialize, Deserialize)]
struct WireReport {
    image: String,
    width: usize,
    height: usize,
    global_value: f64,
    threshold: Option<f64>,
    contours: Vec<WireContour>,
    plasmodium_found: bool,
    config: PipelineConfig<f64>,
}

impl<T: Scalar> Serialize for DetectionReport<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireReport {
            image: self.image.clone(),
            width: self.width,
            height: self.height,
            global_value: r6(self.global_value),
            threshold: self.threshold.map(r6),
            contours: self
                .contours
                .iter()
                .map(|c| WireContour {
                    label: c.label,
                    area: c.area,
                    centroid: [r6(c.centroid[0]), r6(c.centroid[1])],
                    local_value: r6(c.local_value),
                    is_plasmodium: c.is_plasmodium,
                })
                .collect(),
            plasmodium_found: self.plasmodium_found,
            config: self.config.map_scalar(r6),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for DetectionReport<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireReport::deserialize(d)?;
        Ok(DetectionReport {
            image: w.image,
            width: w.width,
            height: w.height,
            global_value: T::lit(w.global_value),
            threshold: w.threshold.map(T::lit),
            contours: w
                .contours
                .into_iter()
                .map(|c| ContourVerdict {
                    label: c.label,
                    area: c.area,
                    centroid: [T::lit(c.centroid[0]), T::lit(c.centroid[1])],
                    local_value: T::lit(c.local_value),
                    is_plasmodium: c.is_plasmodium,
                })
                .collect(),
            plasmodium_found: w.plasmodium_found,
            config: w.config.map_scalar(T::lit),
        })
    }
}

impl<T: Scalar> DetectionReport<T> {
    /// Pretty-printed JSON followed by a newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The report as it reads back after serialization.
    pub fn rounded(&self) -> Self {
        let r = |v: T| T::lit(r6(v));
        Self {
            image: self.image.clone(),
            width: self.width,
            height: self.height,
            global_value: r(self.global_value),
            threshold: self.threshold.map(r),
            contours: self
                .contours
                .iter()
                .map(|c| ContourVerdict {
                    centroid: [r(c.centroid[0]), r(c.centroid[1])],
                    local_value: r(c.local_value),
                    ..c.clone()
                })
                .collect(),
            plasmodium_found: self.plasmodium_found,
            config: self.config.map_scalar(r),
        }
    }
}
