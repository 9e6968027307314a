//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Set `SHARP_EXTENDED=1` for the long optional runs. A criterion listed in
//! `KNOWN_DIVERGENCES` still prints FAIL but does not fail the target.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use sharppoly::constructor::{compose_closure, even_count_formula, pell_degrees, scan_uniqueness};
use sharppoly::diagram::structural_check;
use sharppoly::exactpoly::{is_member, minimal_term_count, BivariatePoly};
use sharppoly::harness::corpus::{self, A143105, COUNTS_EVEN, COUNTS_NEXT, COUNTS_ODD, PELL};
use sharppoly::harness::SearchReport;
use sharppoly::mipsearch::lp::{solve, Bounds, LinearSystem, LpError, LpOutcome, LpTableau};
use sharppoly::mipsearch::{enumerate_mip, MipConfig};
use sharppoly::nullsearch::{
    enumerate_sharp, enumerate_with_terms, exact_only, exact_stage, AuditMode, SearchConfig, SupportStatus,
    SupportSystem,
};
use sharppoly::{Monomial, Rational, Support};

/// (criterion, reason)
const KNOWN_DIVERGENCES: &[(u32, &str)] =
    &[(5, "the reference count omits (x+y)^3, which is isolated with 4 terms")];

type Outcome = Result<String, String>;

struct Run {
    extended: bool,
    cache: BTreeMap<(u32, usize), SearchReport>,
}

impl Run {
    fn report(&mut self, d: u32, n: usize) -> &SearchReport {
        self.cache.entry((d, n)).or_insert_with(|| {
            let cfg = SearchConfig::default();
            if n == minimal_term_count(d) {
                enumerate_sharp(d, &cfg).unwrap()
            } else {
                enumerate_with_terms(d, n, &cfg).unwrap()
            }
        })
    }

    fn sharp(&mut self, d: u32) -> &SearchReport {
        self.report(d, minimal_term_count(d))
    }
}

fn lookup(table: &[(usize, u64)], n: usize) -> u64 {
    table.iter().find(|(k, _)| *k == n).map(|(_, v)| *v).expect("tabulated")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

fn classification(run: &mut Run) -> Outcome {
    let mut notes = Vec::new();
    for d in (1..=13).step_by(2) {
        let (polys, secs) = timed(|| run.sharp(d).polynomials.clone());
        let expected = corpus::sharp_odd(d).unwrap();
        if polys != expected {
            return Err(format!("d={d}: got {} polynomials, expected {}", polys.len(), expected.len()));
        }
        notes.push(format!("d={d} {secs:.1}s"));
    }
    Ok(notes.join(", "))
}

fn classification_extended(run: &mut Run) -> Outcome {
    if !run.extended {
        return Ok("skipped; set SHARP_EXTENDED=1".into());
    }
    let (polys, secs) = timed(|| run.sharp(15).polynomials.clone());
    if polys != corpus::sharp_odd(15).unwrap() {
        return Err(format!("d=15: {} polynomials", polys.len()));
    }
    Ok(format!("d=15 {secs:.0}s"))
}

fn odd_counts(run: &mut Run) -> Outcome {
    let mut got = Vec::new();
    for n in 2..=8usize {
        let d = (2 * n - 3) as u32;
        let c = run.sharp(d).raw_count as u64;
        if c != lookup(COUNTS_ODD.data, n) {
            return Err(format!("N={n}: {c}"));
        }
        got.push(c.to_string());
    }
    Ok(format!("({})", got.join(",")))
}

fn even_counts(run: &mut Run) -> Outcome {
    let mut got = Vec::new();
    let top = if run.extended { 12 } else { 10 };
    for d in (2..=top).step_by(2) {
        let n = (d as usize + 4) / 2;
        let c = run.report(d, n).raw_count as u64;
        if c != lookup(COUNTS_EVEN.data, n) {
            return Err(format!("d={d}: {c}"));
        }
        got.push(format!("d={d}:{c}"));
    }
    let mut odd = BTreeMap::new();
    for d in [1, 3, 5, 7] {
        odd.insert(d, run.sharp(d).raw.clone());
    }
    for d in [4, 6, 8] {
        let closure = compose_closure(d, &odd).map_err(|e| e.to_string())?;
        if closure != run.sharp(d).raw {
            return Err(format!("d={d}: composition closure differs"));
        }
    }
    Ok(format!("{}; closure equal for d=4,6,8", got.join(" ")))
}

fn isolated_counts(run: &mut Run) -> Outcome {
    let r = run.report(3, 4);
    let (count, families) = (r.raw_count as u64, r.families.len());
    let mut line = format!("(3,4): {count} isolated, {families} families");
    let mut ok = count == lookup(COUNTS_NEXT.data, 4) && families == 0;
    let mut expected = format!("{} and 0 families", lookup(COUNTS_NEXT.data, 4));
    for (d, n) in [(5u32, 5usize), (7, 6)] {
        let c = run.report(d, n).raw_count as u64;
        line.push_str(&format!("; ({d},{n}): {c}"));
        ok &= c == lookup(COUNTS_NEXT.data, n);
        expected.push_str(&format!(", {}", lookup(COUNTS_NEXT.data, n)));
    }
    if ok {
        Ok(line)
    } else {
        Err(format!("{line}; expected {expected}"))
    }
}

fn backends(run: &mut Run) -> Outcome {
    let mut slowest = (0, 0.0);
    for d in 1..=11 {
        let (mip, secs) = timed(|| enumerate_mip(d, &MipConfig::default()).map_err(|e| e.to_string()));
        let mip = mip?;
        let null = run.sharp(d);
        if mip.polynomials != null.polynomials || mip.raw_count != null.raw_count {
            return Err(format!("d={d}: mip {} vs nullspace {}", mip.raw_count, null.raw_count));
        }
        if secs > slowest.1 {
            slowest = (d, secs);
        }
    }
    Ok(format!("d=1..11 identical; slowest mip d={} {:.1}s", slowest.0, slowest.1))
}

fn scan() -> Outcome {
    let degrees: Vec<u32> = (1..=149).step_by(2).collect();
    let (records, secs) = timed(|| scan_uniqueness(&degrees, 1));
    let records = records.map_err(|e| e.to_string())?;
    let unresolved: Vec<u32> = records.iter().filter(|r| !r.found_noninvariant).map(|r| r.degree).collect();
    if unresolved != A143105.data {
        return Err(format!("unresolved degrees {unresolved:?}"));
    }
    Ok(format!("{} degrees without a construction, {secs:.0}s", unresolved.len()))
}

fn pell() -> Outcome {
    let got: Vec<String> = pell_degrees(5).iter().map(|v| v.to_string()).collect();
    let want: Vec<String> = PELL.data.iter().map(|v| v.to_string()).collect();
    if got == want {
        Ok(got.join(", "))
    } else {
        Err(got.join(", "))
    }
}

fn properties(run: &mut Run) -> Outcome {
    let mut reports: Vec<SearchReport> = (1..=11).map(|d| run.sharp(d).clone()).collect();
    reports.push(run.report(3, 4).clone());
    let mut checked = 0;
    for r in &reports {
        if r.raw != SearchReport::swap_closure(&r.polynomials) || r.raw_count != r.raw.len() {
            return Err(format!("d={}: raw set not swap closed", r.degree));
        }
        let supports: BTreeSet<Support> = r.raw.iter().map(BivariatePoly::support).collect();
        if supports.len() != r.raw.len() {
            return Err(format!("d={}: two polynomials share a support", r.degree));
        }
        let sharp = r.n_terms == minimal_term_count(r.degree);
        for p in &r.raw {
            let d = r.degree;
            let by_definition = p.degree() == Some(d)
                && p.restrict_to_line().is_one()
                && p.terms().all(|(_, c)| !c.is_negative());
            if !is_member(p, d).is_member() || !by_definition {
                return Err(format!("{p}: membership"));
            }
            let q = p.quotient_by_line().map_err(|e| e.to_string())?;
            if &(&BivariatePoly::line() * &q) + &BivariatePoly::one() != *p {
                return Err(format!("{p}: quotient"));
            }
            let check = structural_check(p, d).map_err(|e| e.to_string())?;
            if !check.passes() || !check.single_source || (sharp && check.sinks_equal_support != Some(true)) {
                return Err(format!("{p}: diagram {:?}", check.violations));
            }
            let again = exact_only(d, &p.support()).ok_or("invalid support")?;
            if again.accepted() != Some(p) || again.nullspace_dim != Some(1) {
                return Err(format!("{p}: support does not determine it"));
            }
            checked += 1;
        }
    }
    let audited = enumerate_sharp(11, &SearchConfig { audit: AuditMode::Sample, ..Default::default() })
        .map_err(|e| e.to_string())?;
    if audited.stats.audit_failures != 0 {
        return Err("prefilter audit failed".into());
    }
    simplex_checks()?;
    let a = |n: usize| COUNTS_ODD.data.iter().find(|(k, _)| *k == n).map_or(0, |(_, v)| *v);
    for n in [4, 5, 6] {
        if even_count_formula(a, n) != lookup(COUNTS_EVEN.data, n) {
            return Err(format!("b_{n} formula"));
        }
    }
    Ok(format!(
        "{checked} polynomials; audit {} of {} prefilter rejections; b_4..b_6 ok",
        audited.stats.audited, audited.stats.prefilter_rejected
    ))
}

fn simplex_checks() -> Result<(), String> {
    // A vertex with fractional coordinates, reached exactly.
    let mut sys = LinearSystem::new(2);
    sys.add_row(vec![(0, Rational::from_integer(3)), (1, Rational::from_integer(2))], Bounds::fixed(Rational::one()));
    sys.add_row(vec![(0, Rational::one()), (1, -Rational::one())], Bounds::fixed(Rational::zero()));
    match solve(&sys).map_err(|e| e.to_string())? {
        LpOutcome::Feasible(x) if x == vec![Rational::new(1, 5), Rational::new(1, 5)] => {}
        other => return Err(format!("simplex: {other:?}")),
    }
    let mut t = LpTableau::new(&sys);
    t.budget = 0;
    if t.check() != Err(LpError::PivotBudget(0)) {
        return Err("pivot budget not enforced".into());
    }
    Ok(())
}

fn brute_force_gate(run: &mut Run) -> Outcome {
    for (d, n) in [(3u32, 3usize), (5, 4)] {
        let all: Vec<Monomial> = Monomial::up_to_degree(1, d).collect();
        let mut oracle = BTreeSet::new();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let support = Support::new(idx.iter().map(|&i| all[i]));
            let system = SupportSystem::new(d, &support).ok_or("invalid support")?;
            if let SupportStatus::Accepted(p) = exact_stage(&system).status {
                oracle.insert(p);
            }
            // Next n-subset in lexicographic order.
            let Some(i) = (0..n).rev().find(|&i| idx[i] < all.len() - n + i) else { break };
            idx[i] += 1;
            for k in i + 1..n {
                idx[k] = idx[k - 1] + 1;
            }
        }
        let got: BTreeSet<BivariatePoly> = run.sharp(d).raw.iter().cloned().collect();
        if got != oracle {
            return Err(format!("d={d}: pruned {} vs exhaustive {}", got.len(), oracle.len()));
        }
    }
    Ok("d=3 and d=5 identical to exhaustive search".into())
}

fn main() -> ExitCode {
    let extended = std::env::var("SHARP_EXTENDED").is_ok_and(|v| v == "1");
    let mut run = Run { extended, cache: BTreeMap::new() };
    type Check = fn(&mut Run) -> Outcome;
    let criteria: [(u32, &str, Check); 10] = [
        (1, "odd-degree classification up to d=13", classification),
        (2, "classification at d=15 (optional)", classification_extended),
        (3, "sharp counts for N=2..8", odd_counts),
        (4, "even-degree counts and compositions", even_counts),
        (5, "isolated 4-term cubics", isolated_counts),
        (6, "nullspace and mip backends agree", backends),
        (7, "substitution scan to 149", |_| scan()),
        (8, "nonuniqueness degrees", |_| pell()),
        (9, "property suites", properties),
        (10, "exhaustive oracle gate", brute_force_gate),
    ];
    let mut unexpected = 0;
    for (id, name, check) in criteria {
        let (outcome, secs) = timed(|| check(&mut run));
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.1}s]"),
            Err(detail) => match KNOWN_DIVERGENCES.iter().find(|(k, _)| *k == id) {
                Some((_, why)) => println!("FAIL {id:>2} {name}: {detail} (known divergence: {why})"),
                None => {
                    println!("FAIL {id:>2} {name}: {detail}");
                    unexpected += 1;
                }
            },
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
