//! Versioned JSON form of [`SearchReport`]. Numbers that can grow without
//! bound are written as decimal strings; loading re-verifies every stored
//! polynomial. Timings are kept only in the manifest.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::manifest::RunManifest;
use super::report::{fingerprint, Backend, SearchMode, SearchReport, SearchStats, ShardMap, Timing};
use crate::exactpoly::{is_member, BivariatePoly, Monomial, Support};
use crate::nullsearch::{ConstraintSet, FamilyWitness};
use crate::rational::Rational;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("re-verification failed: {0}")]
    Verification(String),
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    j: u32,
    k: u32,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTerm>,
    symmetric: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonFamily {
    support: Vec<(u32, u32)>,
    nullspace_dim: usize,
    members: Vec<JsonPoly>,
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    schema_version: u32,
    degree: u32,
    n_terms: usize,
    backend: Backend,
    mode: SearchMode,
    constraints: ConstraintSet,
    fingerprint: String,
    polynomials: Vec<JsonPoly>,
    raw_count: usize,
    families: Vec<JsonFamily>,
    stats: SearchStats,
    shard_map: ShardMap,
    manifest: Option<RunManifest>,
}

fn poly_to_json(p: &BivariatePoly) -> JsonPoly {
    JsonPoly {
        terms: p
            .terms()
            .map(|(m, c)| JsonTerm { j: m.j, k: m.k, num: c.numer().to_string(), den: c.denom().to_string() })
            .collect(),
        symmetric: p.is_symmetric(),
    }
}

fn poly_from_json(p: &JsonPoly) -> Result<BivariatePoly, PersistError> {
    let mut terms = Vec::with_capacity(p.terms.len());
    for t in &p.terms {
        let parse = |s: &str| s.parse::<BigInt>().map_err(|_| PersistError::Schema(format!("bad integer {s:?}")));
        let (num, den) = (parse(&t.num)?, parse(&t.den)?);
        if den <= BigInt::from(0) {
            return Err(PersistError::Schema(format!("nonpositive denominator {den}")));
        }
        let c = Rational::from_ratio(num.clone(), den.clone());
        if c.is_zero() || c.numer() != num || c.denom() != den {
            return Err(PersistError::Schema(format!("coefficient {}/{} not in lowest terms or zero", t.num, t.den)));
        }
        terms.push((Monomial::new(t.j, t.k), c));
    }
    let poly = BivariatePoly::from_terms(terms);
    if poly.term_count() != p.terms.len() {
        return Err(PersistError::Schema("duplicate monomial".into()));
    }
    if poly.is_symmetric() != p.symmetric {
        return Err(PersistError::Schema(format!("symmetric flag wrong for {poly}")));
    }
    Ok(poly)
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &SearchReport, manifest: Option<&RunManifest>) -> String {
    let doc = JsonReport {
        schema_version: SCHEMA_VERSION,
        degree: report.degree,
        n_terms: report.n_terms,
        backend: report.backend,
        mode: report.mode,
        constraints: report.constraints,
        fingerprint: report.fingerprint.clone(),
        polynomials: report.polynomials.iter().map(poly_to_json).collect(),
        raw_count: report.raw_count,
        families: report
            .families
            .iter()
            .map(|f| JsonFamily {
                support: f.support.monomials().iter().map(|m| (m.j, m.k)).collect(),
                nullspace_dim: f.nullspace_dim,
                members: f.members.iter().map(poly_to_json).collect(),
            })
            .collect(),
        stats: report.stats.clone(),
        shard_map: report.shard_map.clone(),
        manifest: manifest.cloned(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Parses and validates a report; every polynomial is checked for
/// membership again.
pub fn from_json(text: &str) -> Result<(SearchReport, Option<RunManifest>), PersistError> {
    let doc: JsonReport = serde_json::from_str(text)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(PersistError::Schema(format!("unsupported schema version {}", doc.schema_version)));
    }
    let d = doc.degree;
    let expect = fingerprint(d, doc.n_terms, doc.mode, doc.constraints);
    if doc.fingerprint != expect {
        return Err(PersistError::Schema(format!("fingerprint {} does not match {expect}", doc.fingerprint)));
    }
    let polynomials = doc.polynomials.iter().map(poly_from_json).collect::<Result<Vec<_>, _>>()?;
    for w in polynomials.windows(2) {
        if w[0] >= w[1] {
            return Err(PersistError::Schema("polynomials not strictly sorted".into()));
        }
    }
    for p in &polynomials {
        if p.canonical_form() != *p {
            return Err(PersistError::Schema(format!("{p} is not in canonical form")));
        }
        verify_member(p, d, doc.n_terms)?;
    }
    let raw = SearchReport::swap_closure(&polynomials);
    if doc.raw_count < polynomials.len() || doc.raw_count > raw.len() {
        return Err(PersistError::Schema(format!(
            "raw count {} outside [{}, {}]",
            doc.raw_count,
            polynomials.len(),
            raw.len()
        )));
    }
    if doc.shard_map.is_complete() && doc.raw_count != raw.len() {
        return Err(PersistError::Schema(format!("raw count {} but swap closure has {}", doc.raw_count, raw.len())));
    }
    let mut families = Vec::with_capacity(doc.families.len());
    for f in &doc.families {
        let support = Support::new(f.support.iter().map(|&(j, k)| Monomial::new(j, k)));
        let members: Vec<BivariatePoly> = f.members.iter().map(poly_from_json).collect::<Result<_, _>>()?;
        let [a, b]: [BivariatePoly; 2] =
            members.try_into().map_err(|_| PersistError::Schema("family needs two members".into()))?;
        for m in [&a, &b] {
            verify_member(m, d, doc.n_terms)?;
            if m.support() != support {
                return Err(PersistError::Verification(format!("family member {m} off its support")));
            }
        }
        if a == b || f.nullspace_dim < 2 {
            return Err(PersistError::Verification("family members must differ".into()));
        }
        families.push(FamilyWitness { support, nullspace_dim: f.nullspace_dim, members: [a, b] });
    }
    let report = SearchReport {
        degree: d,
        n_terms: doc.n_terms,
        backend: doc.backend,
        mode: doc.mode,
        constraints: doc.constraints,
        fingerprint: doc.fingerprint,
        polynomials,
        raw,
        raw_count: doc.raw_count,
        families,
        stats: doc.stats,
        shard_map: doc.shard_map,
        timing: manifest_timing(doc.manifest.as_ref()),
    };
    Ok((report, doc.manifest))
}

fn manifest_timing(m: Option<&RunManifest>) -> Timing {
    m.map(|m| Timing { wall_seconds: m.wall_seconds, shard_seconds: m.shard_seconds.clone() }).unwrap_or_default()
}

fn verify_member(p: &BivariatePoly, d: u32, n: usize) -> Result<(), PersistError> {
    let r = is_member(p, d);
    if !r.is_member() {
        return Err(PersistError::Verification(format!("{p}: {}", r.failures().join("; "))));
    }
    if p.term_count() != n {
        return Err(PersistError::Verification(format!("{p} has {} terms, expected {n}", p.term_count())));
    }
    Ok(())
}

pub fn persist(path: &Path, report: &SearchReport, manifest: Option<&RunManifest>) -> Result<(), PersistError> {
    std::fs::write(path, to_json(report, manifest))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(SearchReport, Option<RunManifest>), PersistError> {
    from_json(&std::fs::read_to_string(path)?)
}
