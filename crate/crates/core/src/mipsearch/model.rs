use crate::exactpoly::{minimal_term_count, Monomial};
use crate::nullsearch::ConstraintSet;
use crate::rational::{binomial_q, Rational};

use super::lp::{self, Bounds, LinearSystem, LpError, LpOutcome, LpTableau};

/// Upper bound on the coefficient of `x^j y^k` in any member of `H(2, d)`.
///
/// Homogenizing with `x + y` turns a member into `(x+y)^d`, so for every
/// `0 <= i <= d-j-k` the product `c * binom(d-j-k, i)` is at most the
/// coefficient `binom(d, j+i)` of `x^{j+i} y^{d-j-i}`.
pub fn coefficient_bound(d: u32, m: Monomial) -> Rational {
    let free = d - m.degree();
    (0..=free)
        .map(|i| binomial_q(d, m.j + i) / binomial_q(free, i))
        .min()
        .expect("nonempty range")
}

/// The older bound `min(binom(d, j), binom(d, k))`.
pub fn weak_bound(d: u32, m: Monomial) -> Rational {
    binomial_q(d, m.j).min(binomial_q(d, m.k))
}

/// Mixed 0-1 feasibility model for supports of size `n_terms`.
///
/// Each monomial carries a coefficient `c_i` in `[0, m_i]` and an indicator
/// `b_i` with `c_i <= m_i b_i`. The indicators live in the branching state;
/// `system` relaxes them through `y_i = t (1 - b_i)`, with rows
/// `c_i + m_i y_i <= m_i t`.
///
/// The relaxation is homogenized with a scale variable `t`: a point
/// `(c, t)` stands for `c / t`. Members of lower degree satisfy every other
/// row, so the degree-`d` coefficients are normalized to sum to at least 1,
/// which only a point with `t > 0` and a nonzero top part can meet.
#[derive(Clone, Debug)]
pub struct MipModel {
    pub d: u32,
    pub n_terms: usize,
    pub constraints: ConstraintSet,
    pub monomials: Vec<Monomial>,
    pub upper: Vec<Rational>,
    /// Indicators fixed to 1 by the model itself.
    pub forced: Vec<bool>,
    pub system: LinearSystem,
    /// Index of `t` in `system`.
    pub scale: usize,
    /// Index of `y_0`; `y_i` follows at `slack + i`.
    pub slack: usize,
    /// Tableau index of the row `c_i - t`, for monomials whose coefficient
    /// is 1 whenever they appear.
    pub unit_rows: Vec<Option<usize>>,
    /// Index groups with at most one indicator set.
    pub at_most_one: Vec<Vec<usize>>,
    /// Index groups with at least one indicator set.
    pub at_least_one: Vec<Vec<usize>>,
}

impl MipModel {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Bounds of `c_i` and of its unit row, if any, for a fixing state of
    /// `b_i`.
    pub fn bound_changes(&self, i: usize, state: Option<bool>) -> Vec<(usize, Bounds)> {
        let on = self.forced[i] || state == Some(true);
        // Every row but the normalization is homogeneous and that one is a
        // lower bound, so scaling a point up keeps it feasible. A positive
        // coefficient can therefore be taken to be at least 1.
        let var = if on {
            Bounds::at_least(Rational::one())
        } else if state == Some(false) {
            Bounds::fixed(Rational::zero())
        } else {
            Bounds::at_least(Rational::zero())
        };
        let slack = if on { Bounds::fixed(Rational::zero()) } else { Bounds::at_least(Rational::zero()) };
        let mut out = vec![(i, var), (self.slack + i, slack)];
        if let Some(r) = self.unit_rows[i] {
            // The only pure power of a variable takes the value at (1, 0).
            out.push((r, if on { Bounds::fixed(Rational::zero()) } else { Bounds::free() }));
        }
        out
    }
}

/// Builds the model for sharp supports of degree `d`.
///
/// With the odd-degree flags of `constraints` in force, `x^d` and `y^d` are
/// fixed with coefficient 1 and the excluded monomials never get variables.
pub fn build_model(d: u32, constraints: ConstraintSet) -> MipModel {
    build_model_with_terms(d, minimal_term_count(d), constraints)
}

pub fn build_model_with_terms(d: u32, n_terms: usize, constraints: ConstraintSet) -> MipModel {
    let cs = constraints.effective(d);
    let top = cs.top_candidates(d);
    let lower = cs.lower_candidates(d);
    let mut monomials: Vec<Monomial> = lower.iter().chain(top.iter()).copied().collect();
    monomials.sort();
    let n = monomials.len();
    let forced: Vec<bool> = monomials.iter().map(|m| cs.top_pure_only && m.degree() == d).collect();
    let upper: Vec<Rational> = monomials.iter().map(|&m| coefficient_bound(d, m)).collect();

    let mut system = LinearSystem::new(n);
    let scale = system.add_var(Bounds::at_least(Rational::zero()));
    let slack = system.n_vars();
    for _ in 0..n {
        system.add_var(Bounds::at_least(Rational::zero()));
    }
    let mut model = MipModel {
        d,
        n_terms,
        constraints: cs,
        monomials,
        upper,
        forced,
        system,
        scale,
        slack,
        unit_rows: vec![None; n],
        at_most_one: Vec::new(),
        at_least_one: Vec::new(),
    };
    let one = Rational::one();

    // p(x, 1-x) - 1 vanishes degree by degree.
    for deg in 0..=d {
        let mut coeffs: Vec<(usize, Rational)> = model
            .monomials
            .iter()
            .enumerate()
            .filter(|(_, m)| m.j <= deg && deg - m.j <= m.k)
            .map(|(i, m)| {
                let c = binomial_q(m.k, deg - m.j);
                (i, if (deg - m.j) % 2 == 1 { -c } else { c })
            })
            .collect();
        if deg == 0 {
            coeffs.push((scale, -one.clone()));
        }
        model.system.add_row(coeffs, Bounds::fixed(Rational::zero()));
    }
    for i in 0..n {
        let m = model.upper[i].clone();
        model.system.add_row(vec![(i, one.clone()), (slack + i, m.clone()), (scale, -m)], Bounds::at_most(Rational::zero()));
    }
    // At most `k` of the group `g` set: the y_i add up to at least (|g| - k) t.
    let scaled = |g: &[usize], k: usize| -> Vec<(usize, Rational)> {
        let mut row: Vec<(usize, Rational)> = g.iter().map(|&i| (slack + i, one.clone())).collect();
        row.push((scale, Rational::from_integer(k as i64 - g.len() as i64)));
        row
    };
    let all: Vec<usize> = (0..n).collect();
    model.system.add_row(scaled(&all, n_terms), Bounds::at_least(Rational::zero()));
    // Left half of the diagram weighs at least as much as the right half.
    let sym: Vec<(usize, Rational)> = model
        .monomials
        .iter()
        .enumerate()
        .filter(|(_, m)| m.j != m.k)
        .map(|(i, m)| (i, if m.j > m.k { one.clone() } else { -one.clone() }))
        .collect();
    if !sym.is_empty() {
        model.system.add_row(sym, Bounds::at_least(Rational::zero()));
    }
    // Normalization of the degree-d part.
    let top_row: Vec<(usize, Rational)> =
        (0..n).filter(|&i| model.monomials[i].degree() == d).map(|i| (i, one.clone())).collect();
    model.system.add_row(top_row, Bounds::at_least(one.clone()));

    let idx = |pred: &dyn Fn(&Monomial) -> bool| -> Vec<usize> {
        model.monomials.iter().enumerate().filter(|(_, m)| pred(m)).map(|(i, _)| i).collect()
    };
    let mut at_most = Vec::new();
    let mut at_least = Vec::new();
    at_least.push(idx(&|m| m.degree() == d));
    if cs.pure_terms {
        for pure in [idx(&|m| m.k == 0), idx(&|m| m.j == 0)] {
            at_most.push(pure.clone());
            at_least.push(pure);
        }
    }
    if cs.degree_d_minus_1 && d > 1 {
        at_least.push(idx(&|m| m.degree() == d - 1));
    }
    if cs.no_adjacent {
        for a in 0..n {
            for b in a + 1..n {
                let (ma, mb) = (model.monomials[a], model.monomials[b]);
                if ma.degree() < d && ma.is_adjacent(mb) {
                    at_most.push(vec![a, b]);
                }
            }
        }
    }
    at_most.retain(|g: &Vec<usize>| g.len() > 1);
    for g in &at_most {
        model.system.add_row(scaled(g, 1), Bounds::at_least(Rational::zero()));
    }
    for i in 0..n {
        if model.forced[i] || (cs.pure_terms && model.monomials[i].is_pure()) {
            model.unit_rows[i] = Some(model.system.n_vars() + model.system.rows.len());
            model.system.add_row(vec![(i, one.clone()), (scale, -one.clone())], Bounds::free());
        }
    }
    for i in 0..n {
        for (v, b) in model.bound_changes(i, None) {
            model.set_system_bounds(v, b);
        }
    }
    model.at_most_one = at_most;
    model.at_least_one = at_least;
    model
}

impl MipModel {
    fn set_system_bounds(&mut self, v: usize, b: Bounds) {
        set_bounds_in(&mut self.system, v, b);
    }
}

fn set_bounds_in(sys: &mut LinearSystem, v: usize, b: Bounds) {
    let n = sys.n_vars();
    if v < n {
        sys.var_bounds[v] = b;
    } else {
        sys.rows[v - n].1 = b;
    }
}

/// Partial assignment of the indicators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchNode {
    pub fixed: Vec<Option<bool>>,
    pub depth: usize,
}

impl BranchNode {
    pub fn root(model: &MipModel) -> BranchNode {
        let fixed = model.forced.iter().map(|&f| f.then_some(true)).collect();
        BranchNode { fixed, depth: 0 }
    }

    pub fn ones(&self) -> usize {
        self.fixed.iter().filter(|f| **f == Some(true)).count()
    }

    pub fn free(&self) -> usize {
        self.fixed.iter().filter(|f| f.is_none()).count()
    }
}

/// Tableau of the model with the node's fixings applied.
pub fn node_tableau(model: &MipModel, node: &BranchNode) -> LpTableau {
    let mut t = LpTableau::new(&model.system);
    for (i, f) in node.fixed.iter().enumerate() {
        if f.is_some() {
            for (v, b) in model.bound_changes(i, *f) {
                t.set_bounds(v, b);
            }
        }
    }
    t
}

/// LP relaxation of the node. A feasible point is returned as the
/// coefficients `c / t`.
pub fn lp_feasible(model: &MipModel, node: &BranchNode) -> Result<LpOutcome, LpError> {
    let mut sys = model.system.clone();
    for (i, f) in node.fixed.iter().enumerate() {
        for (v, b) in model.bound_changes(i, *f) {
            set_bounds_in(&mut sys, v, b);
        }
    }
    Ok(match lp::solve(&sys)? {
        LpOutcome::Feasible(x) => {
            let t = x[model.scale].clone();
            LpOutcome::Feasible(x[..model.len()].iter().map(|c| c / &t).collect())
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_model() {
        let model = build_model(3, ConstraintSet::for_sharp(3));
        assert_eq!(model.monomials, vec![Monomial::new(1, 1), Monomial::new(3, 0), Monomial::new(0, 3)]);
        assert_eq!(model.upper[0], Rational::from_integer(3));
        let root = BranchNode::root(&model);
        let LpOutcome::Feasible(x) = lp_feasible(&model, &root).unwrap() else { panic!("root infeasible") };
        assert_eq!(x[0], Rational::from_integer(3));
        let mut off = root.clone();
        off.fixed[0] = Some(false);
        assert_eq!(lp_feasible(&model, &off).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn bound_is_tighter_than_weak_bound() {
        for d in 1..=15 {
            for m in Monomial::up_to_degree(1, d) {
                assert!(coefficient_bound(d, m) <= weak_bound(d, m));
                assert!(coefficient_bound(d, m).is_positive());
            }
        }
        assert_eq!(coefficient_bound(3, Monomial::new(1, 1)), Rational::from_integer(3));
    }
}
