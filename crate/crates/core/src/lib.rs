//! Community characterization with internal and external dominating sets.
//!
//! Load a [`Graph`], obtain [`Community`] values from a file, a GML attribute
//! or local detection, then measure each community with greedy dominating
//! sets, slopes against random subsets, and structural statistics.

pub mod community;
pub mod detect;
pub mod distribution;
pub mod domsets;
pub mod error;
pub mod generators;
pub mod gml;
pub mod graph;
pub mod keywords;
pub mod metrics;
pub mod slopes;

pub use community::{
    load_communities, neighbors_in, neighbors_out, write_communities, Community, NodeSubset,
};
pub use detect::{detect_communities, DetectParams, DetectedCommunity, SeedStrategy, SweepRule};
pub use distribution::{summarize, DistributionSummary};
pub use domsets::{edr, greedy, greedy_eds, greedy_ids, idr, Criterion, DomSetResult, Mode};
pub use error::{Error, Result};
pub use graph::{DirectedPolicy, Graph, LoadReport, NodeId};
pub use keywords::{
    build_keyword_list, load_metadata, predict_keywords, prediction_curve, KeywordEntry,
    MetadataTable, NodeMetadata, PredictionReport,
};
pub use metrics::{
    aggregate_stats, clustering_coefficient, community_stats, profile_community, CommunityProfile,
    CommunityStats, NetworkSummary, ProfileConfig,
};
pub use slopes::{eslope, expected_ratio, islope, EstimatorParams, SlopeResult};
