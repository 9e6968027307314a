//! Depth-first branch and bound over the indicator variables.

use std::time::Instant;

use rayon::prelude::*;

use super::lp::{LpError, LpTableau, DEFAULT_PIVOT_BUDGET};
use super::model::{build_model, node_tableau, BranchNode, MipModel};
use crate::exactpoly::{BivariatePoly, Support};
use crate::harness::{Backend, SearchMode, SearchReport, SearchStats, ShardMap, Timing};
use crate::nullsearch::{check_support_with, AuditMode, ConstraintSet, SearchError, ShardSpec, SupportStatus};

#[derive(Clone, Debug)]
pub struct MipConfig {
    pub constraints: Option<ConstraintSet>,
    pub jobs: Option<usize>,
    /// Subtrees rooted at this depth are handed to workers.
    pub split_depth: usize,
    pub pivot_budget: u64,
    /// With pruning off only cardinality and the fixing rules cut the tree.
    pub lp_pruning: bool,
}

impl Default for MipConfig {
    fn default() -> Self {
        MipConfig { constraints: None, jobs: None, split_depth: 4, pivot_budget: DEFAULT_PIVOT_BUDGET, lp_pruning: true }
    }
}

/// Supports of the leaves that pass verification, with their polynomials.
#[derive(Clone, Debug, Default)]
pub struct Feasible {
    pub supports: Vec<Support>,
    pub polynomials: Vec<BivariatePoly>,
    pub stats: SearchStats,
}

impl Feasible {
    fn absorb(&mut self, other: Feasible) {
        self.supports.extend(other.supports);
        self.polynomials.extend(other.polynomials);
        self.stats += &other.stats;
    }
}

struct Walker<'a> {
    model: &'a MipModel,
    tab: Option<LpTableau>,
    trail: Vec<usize>,
    out: Feasible,
    /// Frontier collection instead of descent below this depth.
    frontier: Option<(usize, Vec<BranchNode>)>,
}

impl<'a> Walker<'a> {
    fn new(model: &'a MipModel, cfg: &'a MipConfig, node: &BranchNode) -> Self {
        let tab = cfg.lp_pruning.then(|| {
            let mut t = node_tableau(model, node);
            t.budget = cfg.pivot_budget;
            t
        });
        Walker { model, tab, trail: Vec::new(), out: Feasible::default(), frontier: None }
    }

    fn fix(&mut self, node: &mut BranchNode, i: usize, v: bool) {
        node.fixed[i] = Some(v);
        self.trail.push(i);
        if let Some(t) = self.tab.as_mut() {
            for (var, b) in self.model.bound_changes(i, Some(v)) {
                t.set_bounds(var, b);
            }
        }
    }

    fn undo(&mut self, node: &mut BranchNode, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().expect("nonempty trail");
            node.fixed[i] = None;
            if let Some(t) = self.tab.as_mut() {
                for (var, b) in self.model.bound_changes(i, None) {
                    t.set_bounds(var, b);
                }
            }
        }
    }

    /// Fixing rules to a fixpoint; `false` on a conflict.
    fn propagate(&mut self, node: &mut BranchNode) -> bool {
        let n = self.model.n_terms;
        loop {
            let mut changed = false;
            let ones = node.ones();
            let free = node.free();
            if ones > n || ones + free < n {
                return false;
            }
            if free > 0 && (ones == n || ones + free == n) {
                let v = ones < n;
                for i in 0..node.fixed.len() {
                    if node.fixed[i].is_none() {
                        self.fix(node, i, v);
                    }
                }
                continue;
            }
            for g in 0..self.model.at_most_one.len() {
                let group = &self.model.at_most_one[g];
                let set = group.iter().filter(|&&i| node.fixed[i] == Some(true)).count();
                if set > 1 {
                    return false;
                }
                if set == 1 {
                    let open: Vec<usize> = group.iter().copied().filter(|&i| node.fixed[i].is_none()).collect();
                    for i in open {
                        self.fix(node, i, false);
                        changed = true;
                    }
                }
            }
            for g in 0..self.model.at_least_one.len() {
                let group = &self.model.at_least_one[g];
                if group.iter().any(|&i| node.fixed[i] == Some(true)) {
                    continue;
                }
                let open: Vec<usize> = group.iter().copied().filter(|&i| node.fixed[i].is_none()).collect();
                match open.len() {
                    0 => return false,
                    1 => {
                        self.fix(node, open[0], true);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn visit(&mut self, node: &mut BranchNode) -> Result<(), LpError> {
        let mark = self.trail.len();
        let result = self.visit_inner(node);
        self.undo(node, mark);
        result
    }

    fn visit_inner(&mut self, node: &mut BranchNode) -> Result<(), LpError> {
        if !self.propagate(node) {
            return Ok(());
        }
        self.out.stats.nodes += 1;
        if let Some(t) = self.tab.as_mut() {
            self.out.stats.lp_solves += 1;
            let before = t.pivots;
            let ok = t.check();
            self.out.stats.pivots += t.pivots - before;
            if !ok? {
                return Ok(());
            }
        }
        if node.free() == 0 {
            self.leaf(node);
            return Ok(());
        }
        if let Some((depth, nodes)) = self.frontier.as_mut() {
            if node.depth >= *depth {
                nodes.push(node.clone());
                return Ok(());
            }
        }
        let var = self.branch_var(node);
        for v in [true, false] {
            let mark = self.trail.len();
            self.fix(node, var, v);
            node.depth += 1;
            let r = self.visit(node);
            node.depth -= 1;
            self.undo(node, mark);
            r?;
        }
        Ok(())
    }

    /// Last free indicator in monomial order, so top-degree monomials are
    /// decided first.
    fn branch_var(&self, node: &BranchNode) -> usize {
        (0..node.fixed.len()).rev().find(|&i| node.fixed[i].is_none()).expect("free variable")
    }

    fn leaf(&mut self, node: &BranchNode) {
        self.out.stats.leaves += 1;
        let support = Support::new(
            node.fixed.iter().enumerate().filter(|(_, f)| **f == Some(true)).map(|(i, _)| self.model.monomials[i]),
        );
        self.out.stats.exact_checks += 1;
        let result = check_support_with(self.model.d, &support, AuditMode::Off);
        if let SupportStatus::Accepted(p) = result.status {
            if self.symmetric_ok(&p) {
                self.out.stats.accepted += 1;
                self.out.supports.push(support);
                self.out.polynomials.push(p);
            }
        }
    }

    /// The tie-breaking row, checked on the verified polynomial.
    fn symmetric_ok(&self, p: &BivariatePoly) -> bool {
        let (mut left, mut right) = (crate::Rational::zero(), crate::Rational::zero());
        for (m, c) in p.terms() {
            if m.j > m.k {
                left += c;
            } else if m.j < m.k {
                right += c;
            }
        }
        left >= right
    }
}

/// All verified supports of the model, in no particular order.
pub fn enumerate_feasible(model: &MipModel, cfg: &MipConfig) -> Result<Feasible, LpError> {
    let root = BranchNode::root(model);
    let mut w = Walker::new(model, cfg, &root);
    w.frontier = Some((cfg.split_depth, Vec::new()));
    let mut node = root.clone();
    w.visit(&mut node)?;
    let (_, frontier) = w.frontier.take().expect("frontier");
    let mut total = w.out;
    let parts: Vec<Result<Feasible, LpError>> = frontier
        .par_iter()
        .map(|start| {
            let mut w = Walker::new(model, cfg, start);
            let mut node = start.clone();
            w.visit(&mut node)?;
            Ok(w.out)
        })
        .collect();
    for p in parts {
        total.absorb(p?);
    }
    total.stats.work_units = frontier.len() as u64;
    Ok(total)
}

/// Sharp polynomials of degree `d` from the MIP backend.
pub fn enumerate_mip(d: u32, cfg: &MipConfig) -> Result<SearchReport, SearchError> {
    if d == 0 || d > 60 {
        return Err(SearchError::Degree(d));
    }
    let started = Instant::now();
    let cs = cfg.constraints.unwrap_or(ConstraintSet::for_sharp(d)).effective(d);
    let model = build_model(d, cs);
    let run = || enumerate_feasible(&model, cfg);
    let found = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| SearchError::Pool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let raw = SearchReport::swap_closure(&found.polynomials);
    let shard_map = ShardMap { shards: vec![ShardSpec::default()], total_units: found.stats.work_units as usize };
    let mut report =
        SearchReport::assemble(d, model.n_terms, Backend::Mip, SearchMode::Sharp, cs, raw, Vec::new(), found.stats, shard_map);
    let secs = started.elapsed().as_secs_f64();
    report.timing = Timing { wall_seconds: secs, shard_seconds: vec![secs] };
    Ok(report)
}
