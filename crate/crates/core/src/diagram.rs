//! Sign diagrams of the quotient `q` in `p - 1 = (x + y - 1) q`, with sink and
//! source detection.
//!
//! The coefficient of `x^j y^k` in `p - 1` equals
//! `q[j-1][k] + q[j][k-1] - q[j][k]`. A sink is a position whose own sign is
//! `N` or `0` while the entries below and to the left are `P` or `0`, not all
//! three zero; the coefficient there is then forced positive. A source is the
//! sign dual and forces a negative coefficient.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::exactpoly::{is_member, minimal_term_count, BivariatePoly, Monomial, PolyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    P,
    N,
    Z,
}

impl Sign {
    fn of(c: &crate::rational::Rational) -> Sign {
        match c.signum() {
            1 => Sign::P,
            -1 => Sign::N,
            _ => Sign::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::P => 'P',
            Sign::N => 'N',
            Sign::Z => '0',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("quotient has degree {actual}, above {limit}")]
    DegreeOverflow { actual: u32, limit: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `grid[j][k]` is the sign of the coefficient of `x^j y^k` in `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignDiagram {
    pub d: u32,
    grid: Vec<Vec<Sign>>,
}

impl SignDiagram {
    /// Sign at `(j, k)`; anything outside the grid reads as zero.
    pub fn at(&self, j: i64, k: i64) -> Sign {
        if j < 0 || k < 0 || j > self.d as i64 || k > self.d as i64 {
            return Sign::Z;
        }
        self.grid[j as usize][k as usize]
    }

    pub fn size(&self) -> usize {
        self.grid.len()
    }
}

pub fn sign_diagram(q: &BivariatePoly, d: u32) -> Result<SignDiagram, DiagramError> {
    if let Some(actual) = q.degree() {
        if actual + 1 > d {
            return Err(DiagramError::DegreeOverflow { actual, limit: d.saturating_sub(1) });
        }
    }
    let n = d as usize + 1;
    let mut grid = vec![vec![Sign::Z; n]; n];
    for (m, c) in q.terms() {
        grid[m.j as usize][m.k as usize] = Sign::of(c);
    }
    Ok(SignDiagram { d, grid })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramAnalysis {
    pub sinks: BTreeSet<Monomial>,
    pub sources: BTreeSet<Monomial>,
    pub sink_count: usize,
}

fn is_sink(e: Sign, left: Sign, below: Sign) -> bool {
    e != Sign::P && left != Sign::N && below != Sign::N && !(e == Sign::Z && left == Sign::Z && below == Sign::Z)
}

fn is_source(e: Sign, left: Sign, below: Sign) -> bool {
    e != Sign::N && left != Sign::P && below != Sign::P && !(e == Sign::Z && left == Sign::Z && below == Sign::Z)
}

pub fn analyze(diag: &SignDiagram) -> DiagramAnalysis {
    let mut sinks = BTreeSet::new();
    let mut sources = BTreeSet::new();
    for j in 0..=diag.d as i64 {
        for k in 0..=diag.d as i64 {
            let (e, left, below) = (diag.at(j, k), diag.at(j, k - 1), diag.at(j - 1, k));
            let m = Monomial::new(j as u32, k as u32);
            if is_sink(e, left, below) {
                sinks.insert(m);
            }
            if is_source(e, left, below) {
                sources.insert(m);
            }
        }
    }
    DiagramAnalysis { sink_count: sinks.len(), sinks, sources }
}

/// The diagram of `p`, via the exact quotient.
pub fn diagram_of(p: &BivariatePoly, d: u32) -> Result<SignDiagram, DiagramError> {
    sign_diagram(&p.quotient_by_line()?, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub analysis: DiagramAnalysis,
    pub sinks_in_support: bool,
    pub single_source: bool,
    pub enough_sinks: bool,
    /// Only evaluated for sharp input.
    pub sinks_equal_support: Option<bool>,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structural consistency of a member of `H(2, d)` with its sign diagram.
pub fn structural_check(p: &BivariatePoly, d: u32) -> Result<CheckReport, DiagramError> {
    let diag = diagram_of(p, d)?;
    let analysis = analyze(&diag);
    let support = p.support();
    let mut violations = Vec::new();
    let outside: Vec<String> =
        analysis.sinks.iter().filter(|m| !support.contains(**m)).map(|m| m.to_string()).collect();
    if !outside.is_empty() {
        violations.push(format!("sinks outside the support: {}", outside.join(", ")));
    }
    let single_source = analysis.sources.len() == 1 && analysis.sources.contains(&Monomial::ONE);
    if !single_source {
        let list: Vec<String> = analysis.sources.iter().map(|m| m.to_string()).collect();
        violations.push(format!("expected one source at the origin, found [{}]", list.join(", ")));
    }
    let min = minimal_term_count(d);
    let enough_sinks = analysis.sink_count >= min;
    if !enough_sinks {
        violations.push(format!("{} sinks, fewer than {min}", analysis.sink_count));
    }
    let sharp = is_member(p, d).is_member() && p.term_count() == min;
    let sinks_equal_support = sharp.then(|| analysis.sinks.iter().copied().eq(support.monomials().iter().copied()));
    if sinks_equal_support == Some(false) {
        violations.push("sharp polynomial whose sinks differ from its support".to_string());
    }
    Ok(CheckReport { sinks_in_support: outside.is_empty(), single_source, enough_sinks, sinks_equal_support, analysis, violations })
}

/// Grid with `x` powers as rows from the top down to `x^0`, `y` powers as
/// columns, and sinks in brackets.
pub struct DiagramDisplay<'a> {
    pub diagram: &'a SignDiagram,
    pub sinks: &'a BTreeSet<Monomial>,
}

impl fmt::Display for DiagramDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.diagram.d;
        let label = |j: u32, var: char| match j {
            0 => "1".to_string(),
            1 => var.to_string(),
            _ => format!("{var}^{j}"),
        };
        let width = label(d, 'x').len().max(label(d, 'y').len()).max(3);
        let cellw = width + 1;
        for j in (0..=d).rev() {
            write!(f, "{:>width$}", label(j, 'x'))?;
            for k in 0..=d {
                let s = self.diagram.at(j as i64, k as i64).symbol();
                let cell = if self.sinks.contains(&Monomial::new(j, k)) { format!("[{s}]") } else { format!(" {s} ") };
                write!(f, "{cell:>cellw$}")?;
            }
            writeln!(f)?;
        }
        write!(f, "{:>width$}", "")?;
        for k in 0..=d {
            write!(f, "{:>cellw$}", format!("{} ", label(k, 'y')))?;
        }
        writeln!(f)
    }
}
