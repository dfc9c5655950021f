//! Polar curves and discriminants of minimal surface singularities.
//!
//! Everything is computed exactly from the weighted dual resolution graph.

pub mod check;
pub mod cycles;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod iso;
pub mod limit_tree;
pub mod linalg;
pub mod polar;
pub mod realize;
pub mod report;
pub mod scott;

pub use cycles::RationalCycle;
pub use error::CrossCheckError;
pub use graph::{parse_graph, ParseError, Reduction, ResolutionGraph, VertexAnalysis, VertexId, Violation};
pub use report::{analyze, AnalysisReport, AnalyzeError, AnalyzeOptions, LimitTrees};
