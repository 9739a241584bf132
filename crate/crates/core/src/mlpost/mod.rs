//! Splits, leakage filtering, id maps, export and statistics.

mod export;
mod ids;
mod split;
mod stats;

use std::io;

pub use export::{
    domain_pairs, export_coo, json_to_axioms, owl_to_json, subproperty_pairs, taxonomy_pairs,
    type_pairs, CooExport, CooManifest, TableInfo, MANIFEST_FILE,
};
pub use ids::{build_id_maps, IdMap, IdMaps, ID_FILES};
pub use split::{filter_inversion_leakage, largest_remainder, split, validate_ratios, Split};
pub use stats::{
    abox_stats, avg_triples_per_property, axiom_coverage, categorize, compute_stats, round2,
    schema_stats, stats_markdown, AboxStats, PropertyCategory, SchemaStats, StatsReport,
    AXIOM_TYPES,
};

#[derive(Debug, thiserror::Error)]
pub enum MlError {
    #[error("split ratios {0:?} must be positive and sum to 1")]
    InvalidRatios([f64; 3]),
    #[error("{0} has no id")]
    Unmapped(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
