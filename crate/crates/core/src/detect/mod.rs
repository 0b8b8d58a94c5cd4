//! Contour labelling, texture-density classification and the end-to-end
//! detection pipeline.

mod classify;
mod config;
mod label;
mod pipeline;
mod report;

pub use classify::{classify, contour_density, density_verdict, global_density, ContourVerdict, DetectionReport};
pub use config::{PipelineConfig, SeSpec};
pub use label::{label_components, ComponentStats, Connectivity, LabelMap};
pub use pipeline::{run_pipeline, run_pipeline_traced, PipelineTrace};
pub use report::round_sig;
