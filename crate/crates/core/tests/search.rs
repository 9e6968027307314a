use std::collections::{BTreeMap, BTreeSet};

use sharppoly::constructor::{compose_closure, even_count_formula};
use sharppoly::diagram::structural_check;
use sharppoly::exactpoly::{is_member, minimal_term_count, BivariatePoly};
use sharppoly::harness::corpus::{self, COUNTS_EVEN, COUNTS_ODD};
use sharppoly::harness::SearchReport;
use sharppoly::mipsearch::lp::{Bounds, LinearSystem, LpError, LpTableau};
use sharppoly::mipsearch::{build_model, coefficient_bound, enumerate_feasible, enumerate_mip, MipConfig};
use sharppoly::nullsearch::{
    enumerate_sharp, enumerate_with_terms, exact_only, exact_stage, AuditMode, ConstraintSet, SearchConfig,
    SupportStatus, SupportSystem,
};
use sharppoly::{Monomial, Rational, Support};

fn sharp(d: u32) -> SearchReport {
    enumerate_sharp(d, &SearchConfig::default()).unwrap()
}

fn subsets(items: &[Monomial], k: usize, start: usize, cur: &mut Vec<Monomial>, out: &mut dyn FnMut(&[Monomial])) {
    if cur.len() == k {
        out(cur);
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - cur.len() {
            break;
        }
        cur.push(items[i]);
        subsets(items, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Every support of size `n` in degrees `1..=d`, solved exactly with no
/// pruning at all.
fn brute_force(d: u32, n: usize) -> (BTreeSet<BivariatePoly>, usize) {
    let all: Vec<Monomial> = Monomial::up_to_degree(1, d).collect();
    let mut found = BTreeSet::new();
    let mut families = 0;
    subsets(&all, n, 0, &mut Vec::new(), &mut |ms| {
        let support = Support::new(ms.iter().copied());
        let system = SupportSystem::new(d, &support).unwrap();
        match exact_stage(&system).status {
            SupportStatus::Accepted(p) => {
                found.insert(p);
            }
            SupportStatus::RejectedNullspaceDimHigh(_) => families += 1,
            _ => {}
        }
    });
    (found, families)
}

#[test]
fn pruned_search_matches_brute_force() {
    for (d, n) in [(3, 3), (5, 4), (3, 4), (4, 4)] {
        let (oracle, _) = brute_force(d, n);
        let report = enumerate_with_terms(d, n, &SearchConfig::default()).unwrap();
        let got: BTreeSet<BivariatePoly> = report.raw.iter().cloned().collect();
        assert_eq!(got, oracle, "d={d} N={n}");
    }
}

#[test]
fn mip_pruning_does_not_change_results() {
    for d in 1..=7 {
        let model = build_model(d, ConstraintSet::for_sharp(d));
        let with = enumerate_feasible(&model, &MipConfig::default()).unwrap();
        let without = enumerate_feasible(&model, &MipConfig { lp_pruning: false, ..Default::default() }).unwrap();
        let a: BTreeSet<_> = with.polynomials.into_iter().collect();
        let b: BTreeSet<_> = without.polynomials.into_iter().collect();
        assert_eq!(a, b, "d={d}");
        assert!(without.stats.nodes >= with.stats.nodes);
    }
}

#[test]
fn backends_agree_small() {
    for d in 1..=9 {
        let a = sharp(d);
        let b = enumerate_mip(d, &MipConfig::default()).unwrap();
        assert_eq!(a.polynomials, b.polynomials, "d={d}");
        assert_eq!(a.raw_count, b.raw_count, "d={d}");
    }
}

#[test]
fn coefficient_bounds_hold_for_reference_polynomials() {
    for (d, list) in corpus::SHARP_ODD.data {
        for s in *list {
            let p: BivariatePoly = s.parse().unwrap();
            for q in [p.clone(), p.swap_vars()] {
                for (m, c) in q.terms() {
                    assert!(*c <= coefficient_bound(*d, *m), "{m} in {s}");
                }
            }
        }
    }
}

#[test]
fn even_degrees_are_compositions() {
    let mut odd = BTreeMap::new();
    for d in [1, 3, 5, 7] {
        odd.insert(d, sharp(d).raw);
    }
    for d in [4, 6, 8] {
        let closure = compose_closure(d, &odd).unwrap();
        assert_eq!(sharp(d).raw, closure, "d={d}");
    }
}

#[test]
fn even_count_formula_matches_counts() {
    let a = |n: usize| COUNTS_ODD.data.iter().find(|(k, _)| *k == n).map_or(0, |(_, v)| *v);
    for n in [4, 5, 6] {
        let expected = COUNTS_EVEN.data.iter().find(|(k, _)| *k == n).unwrap().1;
        assert_eq!(even_count_formula(a, n), expected, "N={n}");
    }
}

#[test]
fn diagrams_of_found_polynomials() {
    let mut reports: Vec<SearchReport> = (1..=11).map(sharp).collect();
    reports.push(enumerate_with_terms(3, 4, &SearchConfig::default()).unwrap());
    for r in &reports {
        for p in &r.raw {
            let check = structural_check(p, r.degree).unwrap();
            assert!(check.passes(), "{p}: {:?}", check.violations);
            assert!(check.single_source);
            let sharp = r.n_terms == minimal_term_count(r.degree);
            assert_eq!(check.sinks_equal_support, sharp.then_some(true), "{p}");
        }
    }
}

#[test]
fn raw_sets_are_swap_closed_and_supports_unique() {
    for d in 1..=10 {
        let r = sharp(d);
        assert_eq!(r.raw, SearchReport::swap_closure(&r.polynomials));
        assert_eq!(r.raw_count, r.raw.len());
        let supports: BTreeSet<Support> = r.raw.iter().map(BivariatePoly::support).collect();
        assert_eq!(supports.len(), r.raw.len(), "d={d}");
        for p in &r.raw {
            assert!(is_member(p, d).is_member());
            let again = exact_only(d, &p.support()).unwrap();
            assert_eq!(again.accepted(), Some(p));
            assert_eq!(again.nullspace_dim, Some(1));
        }
    }
}

#[test]
fn prefilter_audit() {
    let sampled = enumerate_sharp(11, &SearchConfig { audit: AuditMode::Sample, ..Default::default() }).unwrap();
    assert_eq!(sampled.stats.audit_failures, 0);
    let all = enumerate_sharp(7, &SearchConfig { audit: AuditMode::All, ..Default::default() }).unwrap();
    assert_eq!(all.stats.audit_failures, 0);
    assert_eq!(all.stats.audited, all.stats.prefilter_rejected);
    let off = enumerate_with_terms(6, 5, &SearchConfig { audit: AuditMode::Off, ..Default::default() }).unwrap();
    assert_eq!(off.stats.audited, 0);
}

#[test]
fn pivot_budget_is_enforced() {
    // x1 + x2 + x3 = 4 with each x_i in [1, 2]; the start point violates the row.
    let mut sys = LinearSystem::new(3);
    for v in 0..3 {
        sys.var_bounds[v] = Bounds::between(Rational::one(), Rational::from_integer(2));
    }
    sys.add_row((0..3).map(|v| (v, Rational::one())).collect(), Bounds::fixed(Rational::from_integer(4)));
    let mut t = LpTableau::new(&sys);
    t.budget = 0;
    assert_eq!(t.check(), Err(LpError::PivotBudget(0)));
    let mut t = LpTableau::new(&sys);
    assert_eq!(t.check(), Ok(true));
    assert!(sys.satisfied_by(&t.point()));

    let r = enumerate_mip(9, &MipConfig::default()).unwrap();
    assert!(r.stats.pivots <= 40 * r.stats.lp_solves.max(1));
}
