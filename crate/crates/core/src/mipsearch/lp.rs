//! Exact feasibility simplex over bounded variables.
//!
//! Each constraint row `r` gets a slack `s_r = sum a_{r,j} x_j` carrying the
//! row bounds. The tableau keeps every basic variable as a combination of the
//! nonbasic ones; nonbasic values may sit anywhere inside their bounds.
//! A check repeatedly repairs the least-index basic variable that is out of
//! bounds, pivoting with a nonbasic variable that can move it: the one with
//! the largest coefficient for the first [`GREEDY_PIVOTS`] pivots, then the
//! least-index one (Bland's rule). When no such variable exists the row
//! certifies infeasibility.

use crate::rational::Rational;

/// Default cap on pivots per feasibility check.
pub const DEFAULT_PIVOT_BUDGET: u64 = 1_000_000;
/// Pivots per solve before switching to Bland's rule.
pub const GREEDY_PIVOTS: u64 = 50;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Bounds {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Bounds {
    pub fn free() -> Self {
        Bounds::default()
    }

    pub fn at_least(lo: Rational) -> Self {
        Bounds { lo: Some(lo), hi: None }
    }

    pub fn at_most(hi: Rational) -> Self {
        Bounds { lo: None, hi: Some(hi) }
    }

    pub fn between(lo: Rational, hi: Rational) -> Self {
        Bounds { lo: Some(lo), hi: Some(hi) }
    }

    pub fn fixed(v: Rational) -> Self {
        Bounds { lo: Some(v.clone()), hi: Some(v) }
    }

    fn below(&self, v: &Rational) -> bool {
        self.lo.as_ref().is_some_and(|lo| v < lo)
    }

    fn above(&self, v: &Rational) -> bool {
        self.hi.as_ref().is_some_and(|hi| v > hi)
    }

    /// Nearest point of the interval.
    fn clamp(&self, v: &Rational) -> Rational {
        if self.below(v) {
            self.lo.clone().unwrap()
        } else if self.above(v) {
            self.hi.clone().unwrap()
        } else {
            v.clone()
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(lo), Some(hi)) if lo > hi)
    }
}

/// `lo <= A x <= hi` with bounds on `x`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub var_bounds: Vec<Bounds>,
    pub rows: Vec<(Vec<(usize, Rational)>, Bounds)>,
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> Self {
        LinearSystem { var_bounds: vec![Bounds::free(); n_vars], rows: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.var_bounds.len()
    }

    pub fn add_var(&mut self, b: Bounds) -> usize {
        self.var_bounds.push(b);
        self.var_bounds.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, b: Bounds) {
        self.rows.push((coeffs, b));
    }

    /// Exact check of a candidate point against every bound and row.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let vars_ok = self.var_bounds.iter().zip(x).all(|(b, v)| !b.below(v) && !b.above(v));
        vars_ok
            && self.rows.iter().all(|(coeffs, b)| {
                let v: Rational = coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
                !b.below(&v) && !b.above(&v)
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("pivot budget of {0} exhausted")]
    PivotBudget(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

#[derive(Clone, Debug)]
pub struct LpTableau {
    n_struct: usize,
    /// Dense rows over all variables; row `r` reads
    /// `x[basic[r]] = sum_v a[r][v] x[v]` over nonbasic `v`.
    a: Vec<Vec<Rational>>,
    basic: Vec<usize>,
    /// Row of each basic variable.
    row_of: Vec<Option<usize>>,
    bounds: Vec<Bounds>,
    values: Vec<Rational>,
    pub pivots: u64,
    pub budget: u64,
}

impl LpTableau {
    pub fn new(system: &LinearSystem) -> Self {
        let n = system.n_vars();
        let m = system.rows.len();
        let total = n + m;
        let mut bounds = system.var_bounds.clone();
        let mut values: Vec<Rational> = bounds.iter().map(|b| b.clamp(&Rational::zero())).collect();
        let mut a = Vec::with_capacity(m);
        let mut row_of = vec![None; total];
        let mut basic = Vec::with_capacity(m);
        for (r, (coeffs, b)) in system.rows.iter().enumerate() {
            let mut row = vec![Rational::zero(); total];
            let mut v = Rational::zero();
            for (j, c) in coeffs {
                row[*j] += c;
                v += c * &values[*j];
            }
            a.push(row);
            bounds.push(b.clone());
            values.push(v);
            basic.push(n + r);
            row_of[n + r] = Some(r);
        }
        LpTableau { n_struct: n, a, basic, row_of, bounds, values, pivots: 0, budget: DEFAULT_PIVOT_BUDGET }
    }

    pub fn n_struct(&self) -> usize {
        self.n_struct
    }

    pub fn bounds(&self, v: usize) -> &Bounds {
        &self.bounds[v]
    }

    pub fn value(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    /// Replaces the bounds of a variable. A nonbasic variable is moved inside
    /// the new interval; basic ones are repaired by the next [`check`].
    ///
    /// [`check`]: LpTableau::check
    pub fn set_bounds(&mut self, v: usize, b: Bounds) {
        if self.row_of[v].is_none() {
            let target = b.clamp(&self.values[v]);
            if target != self.values[v] {
                self.update_nonbasic(v, target);
            }
        }
        self.bounds[v] = b;
    }

    fn update_nonbasic(&mut self, j: usize, v: Rational) {
        let delta = &v - &self.values[j];
        for (r, row) in self.a.iter().enumerate() {
            if !row[j].is_zero() {
                let b = self.basic[r];
                self.values[b].add_mul(&row[j], &delta);
            }
        }
        self.values[j] = v;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let i = self.basic[r];
        let pivot = self.a[r][j].clone();
        let inv = pivot.recip();
        // Solve row r for x_j.
        let mut new_row: Vec<Rational> = self.a[r].iter().map(|c| if c.is_zero() { Rational::zero() } else { -(c * &inv) }).collect();
        new_row[j] = Rational::zero();
        new_row[i] = inv;
        for (r2, row) in self.a.iter_mut().enumerate() {
            if r2 == r || row[j].is_zero() {
                continue;
            }
            let f = std::mem::take(&mut row[j]);
            for (v, c) in new_row.iter().enumerate() {
                if !c.is_zero() {
                    row[v].add_mul(&f, c);
                }
            }
        }
        self.a[r] = new_row;
        self.basic[r] = j;
        self.row_of[j] = Some(r);
        self.row_of[i] = None;
        self.pivots += 1;
    }

    /// Pivots basic `x_i` (row `r`) out against `x_j`, setting `x_i = v`.
    fn pivot_and_update(&mut self, r: usize, j: usize, v: Rational) {
        let i = self.basic[r];
        let theta = (&v - &self.values[i]) / &self.a[r][j];
        self.values[i] = v;
        self.values[j] += &theta;
        for (r2, row) in self.a.iter().enumerate() {
            if r2 != r && !row[j].is_zero() {
                let b = self.basic[r2];
                self.values[b].add_mul(&row[j], &theta);
            }
        }
        self.pivot(r, j);
    }

    /// Runs to a feasible point or an infeasibility certificate.
    pub fn check(&mut self) -> Result<bool, LpError> {
        if self.bounds.iter().any(Bounds::is_empty) {
            return Ok(false);
        }
        let start = self.pivots;
        loop {
            if self.pivots - start >= self.budget {
                return Err(LpError::PivotBudget(self.budget));
            }
            // Least-index violated basic variable.
            let violated = self
                .basic
                .iter()
                .enumerate()
                .filter(|(_, &b)| self.bounds[b].below(&self.values[b]) || self.bounds[b].above(&self.values[b]))
                .min_by_key(|(_, &b)| b)
                .map(|(r, &b)| (r, b));
            let Some((r, i)) = violated else {
                return Ok(true);
            };
            let raise = self.bounds[i].below(&self.values[i]);
            let row = &self.a[r];
            let eligible = |j: &usize| {
                let c = &row[*j];
                if c.is_zero() || self.row_of[*j].is_some() {
                    return false;
                }
                let can_up = self.bounds[*j].hi.as_ref().is_none_or(|hi| self.values[*j] < *hi);
                let can_down = self.bounds[*j].lo.as_ref().is_none_or(|lo| self.values[*j] > *lo);
                if raise == c.is_positive() {
                    can_up
                } else {
                    can_down
                }
            };
            // Largest coefficient first; Bland's rule once a solve runs long,
            // which rules out cycling.
            let entering = if self.pivots - start < GREEDY_PIVOTS {
                (0..row.len()).filter(eligible).max_by(|&a, &b| row[a].abs().cmp(&row[b].abs()).then(b.cmp(&a)))
            } else {
                (0..row.len()).find(eligible)
            };
            let Some(j) = entering else {
                return Ok(false);
            };
            let target = if raise { self.bounds[i].lo.clone() } else { self.bounds[i].hi.clone() };
            self.pivot_and_update(r, j, target.expect("violated side is bounded"));
        }
    }

    /// Structural part of the current assignment.
    pub fn point(&self) -> Vec<Rational> {
        self.values[..self.n_struct].to_vec()
    }
}

/// One-shot feasibility of a system.
pub fn solve(system: &LinearSystem) -> Result<LpOutcome, LpError> {
    let mut t = LpTableau::new(system);
    Ok(if t.check()? { LpOutcome::Feasible(t.point()) } else { LpOutcome::Infeasible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn simple_feasible() {
        // x + y = 3, x - y >= 1, x, y >= 0.
        let mut s = LinearSystem::new(2);
        s.var_bounds = vec![Bounds::at_least(q(0)), Bounds::at_least(q(0))];
        s.add_row(vec![(0, q(1)), (1, q(1))], Bounds::fixed(q(3)));
        s.add_row(vec![(0, q(1)), (1, q(-1))], Bounds::at_least(q(1)));
        let LpOutcome::Feasible(x) = solve(&s).unwrap() else { panic!() };
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn simple_infeasible() {
        let mut s = LinearSystem::new(2);
        s.var_bounds = vec![Bounds::between(q(0), q(1)), Bounds::between(q(0), q(1))];
        s.add_row(vec![(0, q(1)), (1, q(1))], Bounds::at_least(q(3)));
        assert_eq!(solve(&s).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn rational_vertex() {
        // 3x = 1.
        let mut s = LinearSystem::new(1);
        s.add_row(vec![(0, q(3))], Bounds::fixed(q(1)));
        assert_eq!(solve(&s).unwrap(), LpOutcome::Feasible(vec![Rational::new(1, 3)]));
    }

    #[test]
    fn bound_changes_warm_start() {
        let mut s = LinearSystem::new(2);
        s.var_bounds = vec![Bounds::between(q(0), q(5)), Bounds::between(q(0), q(5))];
        s.add_row(vec![(0, q(1)), (1, q(2))], Bounds::fixed(q(4)));
        let mut t = LpTableau::new(&s);
        assert!(t.check().unwrap());
        t.set_bounds(1, Bounds::fixed(q(3)));
        assert!(!t.check().unwrap());
        t.set_bounds(1, Bounds::between(q(0), q(5)));
        t.set_bounds(0, Bounds::fixed(q(2)));
        assert!(t.check().unwrap());
        assert_eq!(t.point(), vec![q(2), q(1)]);
    }

    /// Brute-force oracle over a grid: any grid point satisfying the system
    /// proves feasibility; we only demand the solver agrees when it finds one.
    fn grid_feasible(s: &LinearSystem) -> bool {
        let pts: Vec<Rational> = (-4..=4).map(|v| Rational::new(v, 2)).collect();
        let n = s.n_vars();
        let mut idx = vec![0usize; n];
        loop {
            let x: Vec<Rational> = idx.iter().map(|&i| pts[i].clone()).collect();
            if s.satisfied_by(&x) {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                idx[k] += 1;
                if idx[k] < pts.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    proptest! {
        #[test]
        fn witnesses_are_exact(rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), -4i64..=4, 0i64..=3), 1..5)) {
            let mut s = LinearSystem::new(3);
            s.var_bounds = vec![Bounds::between(q(-2), q(2)); 3];
            for (coeffs, lo, width) in rows {
                let c = coeffs.into_iter().enumerate().map(|(j, v)| (j, q(v))).collect();
                s.add_row(c, Bounds::between(q(lo), q(lo + width)));
            }
            match solve(&s).unwrap() {
                LpOutcome::Feasible(x) => prop_assert!(s.satisfied_by(&x)),
                LpOutcome::Infeasible => prop_assert!(!grid_feasible(&s)),
            }
        }
    }
}
