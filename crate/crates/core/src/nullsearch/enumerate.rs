//! Support enumeration for the nullspace backend.
//!
//! The degree-`d` part `T` of a support is chosen first; it fixes the rows of
//! `A'`. The lower monomials are then chosen by depth-first search in index
//! order while an echelon form of their columns is kept modulo 19. Work is cut
//! into units `(T, first one or two lower indices)` whose order is fixed, so a
//! shard is a contiguous range of units.

use std::time::Instant;

use rayon::prelude::*;

use super::check::{basis_entry, check_support_with, exact_stage, AuditMode, SupportStatus, SupportSystem, PREFILTER_PRIMES};
use super::constraints::{ConstraintSet, ShardSpec};
use super::family::{find_family, FamilyWitness};
use super::matrix::{rank_mod_rows, RationalMatrix};
use crate::exactpoly::{minimal_term_count, BivariatePoly, Monomial, Support};
use crate::harness::{Backend, SearchMode, SearchReport, SearchStats, ShardMap, Timing};
use crate::mipsearch::lp::LpError;
use crate::rational::{binomial_q, Rational};

const P: u64 = PREFILTER_PRIMES[0];
const Q: u64 = PREFILTER_PRIMES[1];

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    /// Defaults to [`ConstraintSet::for_sharp`] for sharp searches and to
    /// [`ConstraintSet::PURE_TERMS`] otherwise.
    pub constraints: Option<ConstraintSet>,
    pub shard: ShardSpec,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub audit: AuditMode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("degree must be between 1 and 60, got {0}")]
    Degree(u32),
    #[error("{n} terms cannot give degree {d}: need d <= 2N - 3")]
    TermCount { d: u32, n: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("thread pool: {0}")]
    Pool(String),
}

struct Cand {
    m: Monomial,
    residues: Vec<u64>,
    exact: Vec<Rational>,
    /// Entries on the rows of the chosen top monomials.
    top_exact: Vec<Rational>,
    mask: u64,
}

struct TopPlan {
    top: Vec<Monomial>,
    cands: Vec<Cand>,
    final_residues: Vec<u64>,
    final_exact: Vec<Rational>,
    /// Exponent of `x` in each row monomial.
    row_j: Vec<u32>,
    full_mask: u64,
    pure_x: u32,
    pure_y: u32,
}

#[derive(Clone, Copy, Debug)]
struct Unit {
    top: usize,
    prefix: [u16; 2],
    len: u8,
}

#[derive(Default)]
struct UnitResult {
    accepted: Vec<BivariatePoly>,
    families: Vec<FamilyWitness>,
    stats: SearchStats,
}

fn residue(v: &Rational, p: u64) -> u64 {
    v.mod_prime(p).expect("integer entries")
}

struct Plan {
    d: u32,
    n: usize,
    mode: SearchMode,
    cs: ConstraintSet,
    audit: AuditMode,
    lower: Vec<Monomial>,
    tops: Vec<Vec<Monomial>>,
    prefix_len: usize,
}

impl Plan {
    fn new(d: u32, n: usize, mode: SearchMode, cs: ConstraintSet, audit: AuditMode) -> Plan {
        let cs = cs.effective(d);
        let top_cands = cs.top_candidates(d);
        let lower = cs.lower_candidates(d);
        let t = top_cands.len();
        let mut tops: Vec<Vec<Monomial>> = (1u64..(1 << t))
            .filter(|bits| bits.count_ones() as usize <= n)
            .filter(|&bits| !cs.top_pure_only || bits == (1 << t) - 1)
            .map(|bits| (0..t).filter(|i| bits >> i & 1 == 1).map(|i| top_cands[i]).collect())
            .collect();
        tops.sort();
        let prefix_len = if tops.len() == 1 { 2 } else { 1 };
        Plan { d, n, mode, cs, audit, lower, tops, prefix_len }
    }

    fn top_plan(&self, ti: usize) -> TopPlan {
        let d = self.d;
        let top = self.tops[ti].clone();
        let rows: Vec<Monomial> = Monomial::of_degree(d).filter(|m| !top.contains(m)).collect();
        let pure_x = top.iter().filter(|m| m.k == 0).count() as u32;
        let pure_y = top.iter().filter(|m| m.j == 0).count() as u32;
        // Column x^j y^k vanishes on the rows x^a y^{d-a} with a < j or
        // d - a < k. Sorted by min(j, k), the rows with a < s or d - a < s
        // are settled once the search has passed every candidate below s.
        let mut lower: Vec<Monomial> = self.admissible_lower(ti).collect();
        lower.sort_by_key(|m| (m.j.min(m.k), m.degree(), m.k));
        let cands = lower
            .into_iter()
            .map(|m| {
                let exact: Vec<Rational> = rows.iter().map(|r| basis_entry(d, r.j, m)).collect();
                let mask = exact.iter().enumerate().filter(|(_, v)| !v.is_zero()).fold(0u64, |acc, (i, _)| acc | 1 << i);
                let residues = exact.iter().map(|v| residue(v, P)).collect();
                let top_exact = top.iter().map(|t| basis_entry(d, t.j, m)).collect();
                Cand { m, residues, exact, top_exact, mask }
            })
            .collect();
        let final_exact: Vec<Rational> = rows.iter().map(|r| binomial_q(d, r.j)).collect();
        let final_residues = final_exact.iter().map(|v| residue(v, P)).collect();
        let row_j = rows.iter().map(|r| r.j).collect();
        let full_mask = if rows.is_empty() { 0 } else { u64::MAX >> (64 - rows.len()) };
        TopPlan { top, cands, final_residues, final_exact, row_j, full_mask, pure_x, pure_y }
    }

    fn admissible_lower(&self, ti: usize) -> impl Iterator<Item = Monomial> + '_ {
        let top = &self.tops[ti];
        let has_x = top.iter().any(|m| m.k == 0);
        let has_y = top.iter().any(|m| m.j == 0);
        let pure = self.cs.pure_terms;
        self.lower.iter().copied().filter(move |m| !(pure && ((m.k == 0 && has_x) || (m.j == 0 && has_y))))
    }

    fn units(&self) -> Vec<Unit> {
        let mut out = Vec::new();
        for (ti, top) in self.tops.iter().enumerate() {
            let slots = self.n - top.len();
            let nc = self.admissible_lower(ti).count();
            if slots > nc {
                continue;
            }
            match self.prefix_len.min(slots) {
                0 => out.push(Unit { top: ti, prefix: [0, 0], len: 0 }),
                1 => out.extend((0..nc).map(|i| Unit { top: ti, prefix: [i as u16, 0], len: 1 })),
                _ => {
                    for i in 0..nc {
                        for j in i + 1..nc {
                            out.push(Unit { top: ti, prefix: [i as u16, j as u16], len: 2 });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Incremental echelon form over `GF(19)`, kept as a stack.
struct Echelon {
    rows: usize,
    basis: Vec<u64>,
    pivots: Vec<usize>,
    scratch: Vec<u64>,
}

impl Echelon {
    fn new(rows: usize) -> Self {
        Echelon { rows, basis: Vec::new(), pivots: Vec::new(), scratch: vec![0; rows] }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` into `scratch`; returns the first nonzero position.
    fn reduce(&mut self, v: &[u64]) -> Option<usize> {
        self.scratch.copy_from_slice(v);
        for (b, &piv) in self.pivots.iter().enumerate() {
            let f = self.scratch[piv];
            if f == 0 {
                continue;
            }
            let base = &self.basis[b * self.rows..(b + 1) * self.rows];
            for (s, &e) in self.scratch.iter_mut().zip(base) {
                *s = (*s + (P - f) * e) % P;
            }
        }
        self.scratch.iter().position(|&x| x != 0)
    }

    /// Adds `v` if it is independent of the stack.
    fn push(&mut self, v: &[u64]) -> bool {
        let Some(piv) = self.reduce(v) else {
            return false;
        };
        let inv = super::modp::inv_mod(self.scratch[piv], P);
        for s in self.scratch.iter_mut() {
            *s = *s * inv % P;
        }
        self.basis.extend_from_slice(&self.scratch);
        self.pivots.push(piv);
        true
    }

    fn pop(&mut self) {
        self.pivots.pop();
        self.basis.truncate(self.pivots.len() * self.rows);
    }
}

struct Dfs<'a> {
    plan: &'a Plan,
    tp: &'a TopPlan,
    slots: usize,
    chosen: Vec<usize>,
    grew: Vec<bool>,
    ech: Echelon,
    /// Depth at which the mod-19 echelon first lost a column.
    degenerate_from: Option<usize>,
    pure_x: u32,
    pure_y: u32,
    dm1: u32,
    mask_stack: Vec<u64>,
    out: UnitResult,
}

impl<'a> Dfs<'a> {
    fn new(plan: &'a Plan, tp: &'a TopPlan) -> Self {
        Dfs {
            plan,
            tp,
            slots: plan.n - tp.top.len(),
            chosen: Vec::new(),
            grew: Vec::new(),
            ech: Echelon::new(tp.final_residues.len()),
            degenerate_from: None,
            pure_x: tp.pure_x,
            pure_y: tp.pure_y,
            dm1: 0,
            mask_stack: vec![0],
            out: UnitResult::default(),
        }
    }

    fn sharp(&self) -> bool {
        self.plan.mode == SearchMode::Sharp
    }

    fn mask(&self) -> u64 {
        *self.mask_stack.last().unwrap()
    }

    /// Exact independence of the chosen columns plus `extra`.
    fn independent_exact(&self, extra: usize) -> bool {
        let idx: Vec<usize> = self.chosen.iter().copied().chain([extra]).collect();
        let rows = self.tp.final_residues.len();
        if rows < idx.len() {
            return false;
        }
        let mut m: Vec<Vec<u64>> =
            (0..rows).map(|r| idx.iter().map(|&c| residue(&self.tp.cands[c].exact[r], Q)).collect()).collect();
        if rank_mod_rows(&mut m, idx.len(), Q) == idx.len() {
            return true;
        }
        let exact = RationalMatrix::from_rows(
            (0..rows).map(|r| idx.iter().map(|&c| self.tp.cands[c].exact[r].clone()).collect()).collect(),
        );
        exact.rank() == idx.len()
    }

    fn try_push(&mut self, i: usize) -> bool {
        let c = &self.tp.cands[i];
        let m = c.m;
        let cs = self.plan.cs;
        self.out.stats.nodes += 1;
        let px = self.pure_x + u32::from(m.k == 0);
        let py = self.pure_y + u32::from(m.j == 0);
        if cs.pure_terms && (px > 1 || py > 1) {
            return false;
        }
        if cs.no_adjacent && self.chosen.iter().any(|&o| self.tp.cands[o].m.is_adjacent(m)) {
            return false;
        }
        let grew = self.ech.push(&c.residues);
        let degenerate = self.degenerate_from.is_some() || !grew;
        if self.sharp() && degenerate && !self.independent_exact(i) {
            if grew {
                self.ech.pop();
            }
            self.out.stats.rank_pruned += 1;
            return false;
        }
        if !grew && self.degenerate_from.is_none() {
            self.degenerate_from = Some(self.chosen.len());
        }
        self.grew.push(grew);
        self.chosen.push(i);
        self.pure_x = px;
        self.pure_y = py;
        self.dm1 += u32::from(m.degree() + 1 == self.plan.d);
        let mask = self.mask() | c.mask;
        self.mask_stack.push(mask);
        true
    }

    fn pop(&mut self) {
        let i = self.chosen.pop().unwrap();
        let m = self.tp.cands[i].m;
        if self.grew.pop().unwrap() {
            self.ech.pop();
        }
        if self.degenerate_from == Some(self.chosen.len()) {
            self.degenerate_from = None;
        }
        self.pure_x -= u32::from(m.k == 0);
        self.pure_y -= u32::from(m.j == 0);
        self.dm1 -= u32::from(m.degree() + 1 == self.plan.d);
        self.mask_stack.pop();
    }

    fn run_unit(&mut self, unit: &Unit) -> Result<(), SearchError> {
        self.out.stats.work_units += 1;
        for &i in &unit.prefix[..unit.len as usize] {
            if !self.try_push(i as usize) {
                return Ok(());
            }
        }
        let start = unit.prefix[..unit.len as usize].last().map_or(0, |&i| i as usize + 1);
        self.dfs(start)
    }

    fn dfs(&mut self, start: usize) -> Result<(), SearchError> {
        let left = self.slots - self.chosen.len();
        if left == 0 {
            return self.leaf();
        }
        let nc = self.tp.cands.len();
        if nc < left {
            return Ok(());
        }
        let last_only_dm1 = left == 1 && self.needs_dm1();
        let mut settled = None;
        for i in start..=nc - left {
            let m = self.tp.cands[i].m;
            let level = m.j.min(m.k);
            if settled != Some(level) {
                if !self.settled_rows_consistent(level) {
                    self.out.stats.rank_pruned += 1;
                    break;
                }
                settled = Some(level);
            }
            if last_only_dm1 && self.tp.cands[i].m.degree() + 1 != self.plan.d {
                continue;
            }
            if self.try_push(i) {
                self.dfs(i + 1)?;
                self.pop();
            }
        }
        Ok(())
    }

    /// Whether the rows `x^a y^{d-a}` with `min(a, d - a) < level`, which no
    /// later candidate touches, still admit a solution using the chosen
    /// columns.
    fn settled_rows_consistent(&self, level: u32) -> bool {
        let d = self.plan.d;
        let rows: Vec<usize> =
            (0..self.tp.row_j.len()).filter(|&r| self.tp.row_j[r].min(d - self.tp.row_j[r]) < level).collect();
        if rows.is_empty() {
            return true;
        }
        let mask = rows.iter().fold(0u64, |acc, &r| acc | 1 << r);
        if self.mask() & mask != mask {
            return false;
        }
        let cols = self.chosen.len();
        let residue_rows = |with_final: bool| -> Vec<Vec<u64>> {
            rows.iter()
                .map(|&r| {
                    let mut row: Vec<u64> = self.chosen.iter().map(|&c| self.tp.cands[c].residues[r]).collect();
                    if with_final {
                        row.push(self.tp.final_residues[r]);
                    }
                    row
                })
                .collect()
        };
        let rank_c = rank_mod_rows(&mut residue_rows(false), cols, P);
        let rank_cf = rank_mod_rows(&mut residue_rows(true), cols + 1, P);
        if rank_cf != rank_c && rank_c == cols {
            // Full column rank survives lifting to Q, and [C | f] only gains.
            return false;
        }
        let exact = |with_final: bool| {
            RationalMatrix::from_rows(
                rows.iter()
                    .map(|&r| {
                        let mut row: Vec<Rational> =
                            self.chosen.iter().map(|&c| self.tp.cands[c].exact[r].clone()).collect();
                        if with_final {
                            row.push(self.tp.final_exact[r].clone());
                        }
                        row
                    })
                    .collect(),
            )
        };
        if rank_c < cols {
            return rank_cf == rank_c || exact(true).rank() == exact(false).rank();
        }
        // The settled rows fix every chosen coefficient.
        let kernel = exact(true).nullspace();
        let [v] = kernel.as_slice() else {
            return false;
        };
        let t = &v[cols];
        if t.is_zero() {
            return false;
        }
        let c: Vec<Rational> = v[..cols].iter().map(|x| x / t).collect();
        self.residuals_admissible(&c)
    }

    /// Coefficients `c` of the chosen columns must be positive, and later
    /// columns only add nonnegative amounts on every row, so the remaining
    /// right-hand side stays nonnegative and each top coefficient positive.
    fn residuals_admissible(&self, c: &[Rational]) -> bool {
        if c.iter().any(|x| !x.is_positive()) {
            return false;
        }
        let used = |r: usize, top: bool| -> Rational {
            self.chosen
                .iter()
                .zip(c)
                .map(|(&i, x)| {
                    let e = if top { &self.tp.cands[i].top_exact[r] } else { &self.tp.cands[i].exact[r] };
                    if e.is_zero() { Rational::zero() } else { -(e * x) }
                })
                .sum()
        };
        let free_ok = (0..self.tp.final_exact.len()).all(|r| used(r, false) <= self.tp.final_exact[r]);
        free_ok
            && self.tp.top.iter().enumerate().all(|(r, t)| used(r, true) < binomial_q(self.plan.d, t.j))
    }

    fn needs_dm1(&self) -> bool {
        self.plan.cs.degree_d_minus_1 && self.plan.d > 1 && self.dm1 == 0
    }

    fn support(&self) -> Support {
        Support::new(self.tp.top.iter().copied().chain(self.chosen.iter().map(|&i| self.tp.cands[i].m)))
    }

    fn leaf(&mut self) -> Result<(), SearchError> {
        let cs = self.plan.cs;
        if cs.pure_terms && (self.pure_x != 1 || self.pure_y != 1) {
            return Ok(());
        }
        if self.needs_dm1() {
            return Ok(());
        }
        self.out.stats.leaves += 1;
        if self.mask() != self.tp.full_mask {
            self.out.stats.zero_row_rejected += 1;
            return Ok(());
        }
        let d = self.plan.d;
        if self.ech.rank() == self.chosen.len() && self.ech.reduce(&self.tp.final_residues).is_some() {
            // [L | final] has full column rank mod 19, so A' has trivial kernel.
            self.out.stats.prefilter_rejected += 1;
            let support = self.support();
            if self.plan.audit.selects(&support) {
                self.out.stats.audited += 1;
                let system = SupportSystem::new(d, &support).expect("valid support");
                if !system.submatrix.nullspace().is_empty() {
                    self.out.stats.audit_failures += 1;
                }
            }
            return Ok(());
        }
        let support = self.support();
        let result = check_support_with(d, &support, self.plan.audit);
        match (&result.status, result.audit) {
            (SupportStatus::RejectedPrefilter { .. }, Some(ok)) => {
                self.out.stats.prefilter_rejected += 1;
                self.out.stats.audited += 1;
                self.out.stats.audit_failures += u64::from(!ok);
            }
            (SupportStatus::RejectedPrefilter { .. }, None) => self.out.stats.prefilter_rejected += 1,
            (SupportStatus::RejectedZeroRow, _) => self.out.stats.zero_row_rejected += 1,
            _ => self.out.stats.exact_checks += 1,
        }
        match result.status {
            SupportStatus::Accepted(p) => {
                self.out.stats.accepted += 1;
                self.out.accepted.push(p);
            }
            SupportStatus::RejectedNullspaceDimHigh(_) => {
                self.out.stats.high_dimension += 1;
                if self.plan.mode == SearchMode::Isolated {
                    let system = SupportSystem::new(d, &support).expect("valid support");
                    let kernel = system.submatrix.nullspace();
                    self.out.stats.lp_solves += 1;
                    if let Some(w) = find_family(&system, &kernel)? {
                        self.out.stats.families += 1;
                        self.out.families.push(w);
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn run_units(plan: &Plan, units: &[Unit]) -> Result<UnitResult, SearchError> {
    let groups: Vec<&[Unit]> = units.chunk_by(|a, b| a.top == b.top).collect();
    let results: Vec<Result<UnitResult, SearchError>> = groups
        .par_iter()
        .flat_map_iter(|group| {
            let tp = plan.top_plan(group[0].top);
            let per_unit: Vec<Result<UnitResult, SearchError>> = group
                .par_iter()
                .map(|u| {
                    let mut dfs = Dfs::new(plan, &tp);
                    dfs.run_unit(u)?;
                    Ok(dfs.out)
                })
                .collect();
            per_unit
        })
        .collect();
    let mut total = UnitResult::default();
    for r in results {
        let r = r?;
        total.accepted.extend(r.accepted);
        total.families.extend(r.families);
        total.stats += &r.stats;
    }
    Ok(total)
}

fn search(d: u32, n: usize, mode: SearchMode, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    if d == 0 || d > 60 {
        return Err(SearchError::Degree(d));
    }
    if 2 * n < d as usize + 3 {
        return Err(SearchError::TermCount { d, n });
    }
    let started = Instant::now();
    let cs = config.constraints.unwrap_or_else(|| default_constraints(d, mode)).effective(d);
    let plan = Plan::new(d, n, mode, cs, config.audit);
    let units = plan.units();
    let (lo, hi) = config.shard.range(units.len());
    let slice = &units[lo..hi];
    let total = match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| SearchError::Pool(e.to_string()))?
            .install(|| run_units(&plan, slice))?,
        None => run_units(&plan, slice)?,
    };
    let shard_map = ShardMap { shards: vec![config.shard], total_units: units.len() };
    let mut report = SearchReport::assemble(
        d,
        n,
        Backend::Nullspace,
        mode,
        cs,
        total.accepted,
        total.families,
        total.stats,
        shard_map,
    );
    let secs = started.elapsed().as_secs_f64();
    report.timing = Timing { wall_seconds: secs, shard_seconds: vec![secs] };
    Ok(report)
}

/// Constraints used when a run does not name its own.
pub fn default_constraints(d: u32, mode: SearchMode) -> ConstraintSet {
    match mode {
        SearchMode::Sharp => ConstraintSet::for_sharp(d).effective(d),
        SearchMode::Isolated => ConstraintSet::PURE_TERMS.effective(d),
    }
}

/// All sharp polynomials of degree `d` under the configured constraints.
pub fn enumerate_sharp(d: u32, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    if d == 0 {
        return Err(SearchError::Degree(d));
    }
    search(d, minimal_term_count(d), SearchMode::Sharp, config)
}

/// Isolated members of `H(2, d)` with exactly `n` terms, plus witnesses for
/// supports that carry a positive-dimensional family.
pub fn enumerate_with_terms(d: u32, n: usize, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    search(d, n, SearchMode::Isolated, config)
}

/// Kernel dimension and exact result of one support, outside any search.
pub fn exact_only(d: u32, support: &Support) -> Option<super::check::SupportResult> {
    SupportSystem::new(d, support).map(|s| exact_stage(&s))
}
