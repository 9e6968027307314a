use std::collections::BTreeSet;

use super::report::{SearchReport, ShardMap, Timing};
use crate::exactpoly::BivariatePoly;
use crate::nullsearch::ShardSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MergeError {
    #[error("no fragments")]
    Empty,
    #[error("fragments disagree on {0}")]
    Mismatch(&'static str),
    #[error("shard {0} appears twice")]
    Duplicate(ShardSpec),
}

/// Combines shard fragments of one run. A complete set yields the same report
/// as an unsharded run, apart from timing.
pub fn merge(fragments: &[SearchReport]) -> Result<SearchReport, MergeError> {
    let first = fragments.first().ok_or(MergeError::Empty)?;
    let mut shards = Vec::new();
    let mut seen = BTreeSet::new();
    let mut raw: BTreeSet<BivariatePoly> = BTreeSet::new();
    let mut families = Vec::new();
    let mut stats = super::report::SearchStats::default();
    let mut shard_seconds = Vec::new();
    let mut wall: f64 = 0.0;
    for f in fragments {
        if f.fingerprint != first.fingerprint {
            return Err(MergeError::Mismatch("fingerprint"));
        }
        if f.backend != first.backend {
            return Err(MergeError::Mismatch("backend"));
        }
        if f.shard_map.total_units != first.shard_map.total_units {
            return Err(MergeError::Mismatch("work unit count"));
        }
        for s in &f.shard_map.shards {
            if !seen.insert((s.index, s.count)) {
                return Err(MergeError::Duplicate(*s));
            }
            shards.push(*s);
        }
        raw.extend(f.raw.iter().cloned());
        families.extend(f.families.iter().cloned());
        stats += &f.stats;
        shard_seconds.extend(f.timing.shard_seconds.iter().copied());
        wall = wall.max(f.timing.wall_seconds);
    }
    shards.sort_by_key(|s| (s.count, s.index));
    let mut shard_map = ShardMap { shards, total_units: first.shard_map.total_units };
    let complete = shard_map.is_complete();
    if complete {
        shard_map.shards = vec![ShardSpec::default()];
    }
    let mut report = SearchReport::assemble(
        first.degree,
        first.n_terms,
        first.backend,
        first.mode,
        first.constraints,
        raw.into_iter().collect(),
        families,
        stats,
        shard_map,
    );
    if complete {
        report.raw = SearchReport::swap_closure(&report.polynomials);
        report.raw_count = report.raw.len();
    }
    report.timing = Timing { wall_seconds: wall, shard_seconds };
    Ok(report)
}

/// Canonical polynomials found by only one of two reports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comparison {
    pub only_first: Vec<BivariatePoly>,
    pub only_second: Vec<BivariatePoly>,
}

impl Comparison {
    pub fn agree(&self) -> bool {
        self.only_first.is_empty() && self.only_second.is_empty()
    }
}

pub fn compare(a: &SearchReport, b: &SearchReport) -> Comparison {
    let sa: BTreeSet<&BivariatePoly> = a.polynomials.iter().collect();
    let sb: BTreeSet<&BivariatePoly> = b.polynomials.iter().collect();
    Comparison {
        only_first: sa.difference(&sb).map(|p| (*p).clone()).collect(),
        only_second: sb.difference(&sa).map(|p| (*p).clone()).collect(),
    }
}
