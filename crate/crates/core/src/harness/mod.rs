//! Reports, persistence, shard merging, reference fixtures and run manifests.

pub mod cache;
pub mod corpus;
mod manifest;
mod merge;
mod persist;
mod report;

pub use manifest::RunManifest;
pub use merge::{compare, merge, Comparison, MergeError};
pub use persist::{from_json, load, persist, to_json, PersistError, SCHEMA_VERSION};
pub use report::{fingerprint, Backend, SearchMode, SearchReport, SearchStats, ShardMap, Timing};
