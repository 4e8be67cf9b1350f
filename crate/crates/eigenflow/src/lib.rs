pub mod error;
pub mod field;
pub mod geometry;
pub mod morse_flow;
pub mod persistence;
pub mod sampled;
pub mod simplicial;
pub mod eigen;
pub mod pipeline;
pub mod oracle;
pub mod plot;
pub mod bench;
pub mod cli;

pub use error::Error;
pub use pipeline::{analyze, AnalysisConfig, AnalysisResult};
pub use sampled::SampledSystem;
