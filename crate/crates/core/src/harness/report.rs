use std::fmt;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exactpoly::BivariatePoly;
use crate::nullsearch::{ConstraintSet, FamilyWitness, ShardSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Nullspace,
    Mip,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Nullspace => "nullspace",
            Backend::Mip => "mip",
        })
    }
}

/// Whether a run looks for sharp polynomials only or counts isolated
/// members with a given number of terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Sharp,
    Isolated,
}

/// Additive counters; shard fragments sum to the single-run totals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub work_units: u64,
    pub nodes: u64,
    pub leaves: u64,
    pub rank_pruned: u64,
    pub zero_row_rejected: u64,
    pub prefilter_rejected: u64,
    pub exact_checks: u64,
    pub high_dimension: u64,
    pub accepted: u64,
    pub families: u64,
    pub audited: u64,
    pub audit_failures: u64,
    pub lp_solves: u64,
    pub pivots: u64,
}

impl AddAssign<&SearchStats> for SearchStats {
    fn add_assign(&mut self, o: &SearchStats) {
        self.work_units += o.work_units;
        self.nodes += o.nodes;
        self.leaves += o.leaves;
        self.rank_pruned += o.rank_pruned;
        self.zero_row_rejected += o.zero_row_rejected;
        self.prefilter_rejected += o.prefilter_rejected;
        self.exact_checks += o.exact_checks;
        self.high_dimension += o.high_dimension;
        self.accepted += o.accepted;
        self.families += o.families;
        self.audited += o.audited;
        self.audit_failures += o.audit_failures;
        self.lp_solves += o.lp_solves;
        self.pivots += o.pivots;
    }
}

/// Which part of the work-unit list a report covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardMap {
    pub shards: Vec<ShardSpec>,
    pub total_units: usize,
}

impl ShardMap {
    pub fn is_complete(&self) -> bool {
        let Some(first) = self.shards.first() else {
            return false;
        };
        let mut idx: Vec<usize> = self.shards.iter().map(|s| s.index).collect();
        idx.sort_unstable();
        self.shards.iter().all(|s| s.count == first.count) && idx == (0..first.count).collect::<Vec<_>>()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub shard_seconds: Vec<f64>,
}

/// One backend run.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub degree: u32,
    pub n_terms: usize,
    pub backend: Backend,
    pub mode: SearchMode,
    pub constraints: ConstraintSet,
    pub fingerprint: String,
    /// Canonical forms, sorted, no duplicates.
    pub polynomials: Vec<BivariatePoly>,
    /// Every accepted polynomial without swap identification, sorted. Reports
    /// loaded from JSON hold the swap closure of `polynomials` here.
    pub raw: Vec<BivariatePoly>,
    pub raw_count: usize,
    pub families: Vec<FamilyWitness>,
    pub stats: SearchStats,
    pub shard_map: ShardMap,
    pub timing: Timing,
}

impl SearchReport {
    /// Assembles a report from raw accepted polynomials in any order.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        degree: u32,
        n_terms: usize,
        backend: Backend,
        mode: SearchMode,
        constraints: ConstraintSet,
        mut raw: Vec<BivariatePoly>,
        mut families: Vec<FamilyWitness>,
        stats: SearchStats,
        shard_map: ShardMap,
    ) -> SearchReport {
        raw.sort();
        raw.dedup();
        let mut polynomials: Vec<BivariatePoly> = raw.iter().map(BivariatePoly::canonical_form).collect();
        polynomials.sort();
        polynomials.dedup();
        families.sort_by(|a, b| a.support.monomials().cmp(b.support.monomials()));
        SearchReport {
            degree,
            n_terms,
            backend,
            mode,
            constraints,
            fingerprint: fingerprint(degree, n_terms, mode, constraints),
            polynomials,
            raw_count: raw.len(),
            raw,
            families,
            stats,
            shard_map,
            timing: Timing::default(),
        }
    }

    /// `raw` rebuilt as `polynomials` together with their swaps.
    pub fn swap_closure(polynomials: &[BivariatePoly]) -> Vec<BivariatePoly> {
        let mut raw: Vec<BivariatePoly> =
            polynomials.iter().flat_map(|p| [p.clone(), p.swap_vars()]).collect();
        raw.sort();
        raw.dedup();
        raw
    }
}

/// Deterministic hash of everything that determines the result set. The
/// backend is excluded so that both backends of one problem agree.
pub fn fingerprint(degree: u32, n_terms: usize, mode: SearchMode, constraints: ConstraintSet) -> String {
    let text = format!("v1;d={degree};n={n_terms};mode={mode:?};constraints={constraints}");
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(12).map(|b| format!("{b:02x}")).collect()
}
