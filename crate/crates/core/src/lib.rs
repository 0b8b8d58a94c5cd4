//! Detection of malaria parasites in stained blood-film images.
//!
//! The pipeline sharpens each colour plane with a Laplacian filter,
//! averages to gray, inverts, normalizes illumination, binarizes with an
//! iterative two-class threshold and cleans the mask with a closing. Each
//! remaining contour is then tested for surface roughness: a parasite's
//! share of strong Sobel gradient pixels is much higher than the image
//! average, a smooth red cell's is not.
//!
//! Real-valued stages are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar for the common case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod detect;
pub mod enhance;
pub mod error;
pub mod imgcore;
pub mod morph;
pub mod overlay;
pub mod scalar;
pub mod segment;
pub mod synth;
pub mod texture;

pub use detect::{run_pipeline, Connectivity, LabelMap};
pub use error::{Error, Result};
pub use imgcore::{BinaryImage, ColorImage, GrayImage, Histogram};
pub use morph::StructuringElement;
pub use scalar::Scalar;

pub type PipelineConfig = detect::PipelineConfig<f64>;
pub type DetectionReport = detect::DetectionReport<f64>;
pub type ContourVerdict = detect::ContourVerdict<f64>;
pub type SignedImage = imgcore::SignedImage<f64>;
pub type Kernel = imgcore::Kernel<f64>;
pub type GradientMap = texture::GradientMap<f64>;
pub type ThresholdResult = segment::ThresholdResult<f64>;
pub type NormalizationParams = enhance::NormalizationParams<f64>;

pub type PipelineConfigF32 = detect::PipelineConfig<f32>;
pub type DetectionReportF32 = detect::DetectionReport<f32>;
pub type SignedImageF32 = imgcore::SignedImage<f32>;
pub type GradientMapF32 = texture::GradientMap<f32>;
