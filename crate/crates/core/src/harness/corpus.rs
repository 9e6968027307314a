//! Reference data: the classification of odd-degree sharp polynomials up to
//! degree 17, counts for the three highest degrees per term count, and the
//! degree sequences.

use std::collections::BTreeSet;

use serde::Serialize;

use super::report::{SearchMode, SearchReport};
use crate::exactpoly::{minimal_term_count, BivariatePoly};

/// One fixture with the place it comes from.
#[derive(Clone, Copy, Debug)]
pub struct Fixture<T: 'static> {
    pub source: &'static str,
    pub data: T,
}

const CLASSIFICATION: &str = "classification of odd-degree sharp polynomials, d <= 17";
const COUNTS: &str = "counts by term count for the top three degrees";

/// Sharp polynomials of odd degree, up to swap. In the second degree-13
/// entry the `x^3y^3` coefficient is `91/2`.
pub const SHARP_ODD: Fixture<&[(u32, &[&str])]> = Fixture {
    source: CLASSIFICATION,
    data: &[
        (1, &["x + y"]),
        (3, &["x^3 + 3xy + y^3"]),
        (5, &["x^5 + 5x^3y + 5xy^2 + y^5"]),
        (
            7,
            &[
                "x^7 + 7x^3y + 14x^2y^3 + 7xy^5 + y^7",
                "x^7 + 7x^3y + 7x^3y^3 + 7xy^3 + y^7",
                "x^7 + 7/2x^5y + 7/2xy + 7/2xy^5 + y^7",
            ],
        ),
        (9, &["x^9 + 9x^7y + 27x^5y^2 + 30x^3y^3 + 9xy^4 + y^9"]),
        (
            11,
            &[
                "x^11 + 11x^9y + 44x^7y^2 + 77x^5y^3 + 55x^3y^4 + 11xy^5 + y^11",
                "x^11 + 11x^5y + 11x^5y^5 + 55x^4y^3 + 55x^3y^5 + 11xy^5 + y^11",
            ],
        ),
        (
            13,
            &[
                "x^13 + 13x^11y + 65x^9y^2 + 156x^7y^3 + 182x^5y^4 + 91x^3y^5 + 13xy^6 + y^13",
                "x^13 + 13x^11y + 65x^9y^2 + 221/2x^7y^3 + 91/2x^3y^3 + 91/2x^3y^7 + 13xy^6 + y^13",
                "x^13 + 234/25x^11y + 143/5x^8y^2 + 143/5x^7y^4 + 91/25xy + 143/25xy^6 + 91/25xy^11 + y^13",
                "x^13 + 234/25x^11y + 143/5x^9y^2 + 143/5x^7y^3 + 91/25xy + 143/25xy^6 + 91/25xy^11 + y^13",
            ],
        ),
        (
            15,
            &[
                "x^15 + 15x^13y + 90x^11y^2 + 275x^9y^3 + 450x^7y^4 + 378x^5y^5 + 140x^3y^6 + 15xy^7 + y^15",
                "x^15 + 140x^9y^3 + 15x^7y + 420x^7y^4 + 15x^7y^7 + 378x^5y^5 + 140x^3y^6 + 15xy^7 + y^15",
            ],
        ),
        (17, &["x^17 + 17x^15y + 119x^13y^2 + 442x^11y^3 + 935x^9y^4 + 1122x^7y^5 + 714x^5y^6 + 204x^3y^7 + 17xy^8 + y^17"]),
    ],
};

/// Sharp counts without swap identification, `d = 2N - 3`, indexed from `N = 2`.
pub const COUNTS_ODD: Fixture<&[(usize, u64)]> =
    Fixture { source: COUNTS, data: &[(2, 1), (3, 1), (4, 2), (5, 4), (6, 2), (7, 4), (8, 8), (9, 4), (10, 2)] };

/// Sharp counts for `d = 2N - 4`.
pub const COUNTS_EVEN: Fixture<&[(usize, u64)]> =
    Fixture { source: COUNTS, data: &[(2, 0), (3, 3), (4, 4), (5, 10), (6, 24), (7, 32), (8, 56)] };

/// Isolated members with `N` terms for `d = 2N - 5`.
pub const COUNTS_NEXT: Fixture<&[(usize, u64)]> =
    Fixture { source: COUNTS, data: &[(2, 0), (3, 0), (4, 11), (5, 38), (6, 88), (7, 198)] };

/// Degrees up to 149 where the substitution procedure finds nothing new.
pub const A143105: Fixture<&[u32]> = Fixture {
    source: "OEIS A143105",
    data: &[1, 3, 5, 9, 17, 21, 33, 41, 45, 53, 69, 77, 81, 93, 105, 113, 117, 125, 129, 141, 149],
};

/// Degrees where uniqueness is known to hold.
pub const A143106: Fixture<&[u32]> = Fixture { source: "OEIS A143106", data: &[1, 3, 5, 9, 17] };

pub const PELL: Fixture<&[u64]> =
    Fixture { source: "nonuniqueness degrees ((7+4√3)^k + (7-4√3)^k)/2", data: &[7, 97, 1351, 18817, 262087] };

/// Canonical forms of the listed sharp polynomials of degree `d`.
pub fn sharp_odd(d: u32) -> Option<Vec<BivariatePoly>> {
    let (_, list) = SHARP_ODD.data.iter().find(|(deg, _)| *deg == d)?;
    let mut out: Vec<BivariatePoly> =
        list.iter().map(|s| s.parse::<BivariatePoly>().expect("fixture parses").canonical_form()).collect();
    out.sort();
    Some(out)
}

fn lookup(f: &Fixture<&[(usize, u64)]>, n: usize) -> Option<u64> {
    f.data.iter().find(|(k, _)| *k == n).map(|(_, v)| *v)
}

/// Expected raw count for `n` terms in degree `d`, if tabulated.
pub fn expected_count(d: u32, n: usize) -> Option<(u64, &'static str)> {
    let d = d as usize;
    if d + 3 == 2 * n {
        lookup(&COUNTS_ODD, n).map(|c| (c, COUNTS_ODD.source))
    } else if d + 4 == 2 * n {
        lookup(&COUNTS_EVEN, n).map(|c| (c, COUNTS_EVEN.source))
    } else if d + 5 == 2 * n {
        lookup(&COUNTS_NEXT, n).map(|c| (c, COUNTS_NEXT.source))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusMismatch {
    pub what: String,
    pub source: &'static str,
    pub expected: String,
    pub actual: String,
}

/// Compares a report with the fixtures that cover it; an empty list means
/// agreement or no applicable fixture.
pub fn check_report(report: &SearchReport) -> Vec<CorpusMismatch> {
    let mut out = Vec::new();
    let d = report.degree;
    if let Some((count, source)) = expected_count(d, report.n_terms) {
        let actual = report.raw_count as u64;
        if actual != count {
            out.push(CorpusMismatch {
                what: format!("raw count, d={d}, N={}", report.n_terms),
                source,
                expected: count.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    let sharp_run = report.mode == SearchMode::Sharp || report.n_terms == minimal_term_count(d);
    if let (true, Some(expected)) = (sharp_run, sharp_odd(d)) {
        let want: BTreeSet<&BivariatePoly> = expected.iter().collect();
        let got: BTreeSet<&BivariatePoly> = report.polynomials.iter().collect();
        if want != got {
            let fmt = |s: &BTreeSet<&BivariatePoly>| s.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ");
            let missing: BTreeSet<&BivariatePoly> = want.difference(&got).copied().collect();
            let extra: BTreeSet<&BivariatePoly> = got.difference(&want).copied().collect();
            out.push(CorpusMismatch {
                what: format!("sharp polynomials, d={d}"),
                source: SHARP_ODD.source,
                expected: format!("missing [{}]", fmt(&missing)),
                actual: format!("unexpected [{}]", fmt(&extra)),
            });
        }
    }
    out
}
