use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactpoly::Monomial;

/// Structural restrictions applied while enumerating supports.
///
/// Each flag is one of the search simplifications; all are sound for sharp
/// polynomials of odd degree, and only `pure_terms` is assumed for even
/// degree or for non-sharp term counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintSet {
    /// Degree-`d` part is exactly `{x^d, y^d}` (odd `d`).
    pub top_pure_only: bool,
    /// Exactly one pure power of each variable.
    pub pure_terms: bool,
    /// At least one monomial of degree `d - 1` (odd `d > 1`).
    pub degree_d_minus_1: bool,
    /// No `x^j y^{d-1-j}` with even `j` (odd `d`).
    pub even_j_exclusion: bool,
    /// No two lower monomials `x^{k+1} y^m`, `x^k y^{m+1}` together.
    pub no_adjacent: bool,
}

impl ConstraintSet {
    pub const NONE: ConstraintSet = ConstraintSet {
        top_pure_only: false,
        pure_terms: false,
        degree_d_minus_1: false,
        even_j_exclusion: false,
        no_adjacent: false,
    };

    pub const PURE_TERMS: ConstraintSet = ConstraintSet { pure_terms: true, ..Self::NONE };

    /// The default set for a sharp search of degree `d`.
    pub fn for_sharp(d: u32) -> ConstraintSet {
        if d % 2 == 1 {
            ConstraintSet {
                top_pure_only: true,
                pure_terms: true,
                degree_d_minus_1: true,
                even_j_exclusion: true,
                no_adjacent: true,
            }
        } else {
            Self::PURE_TERMS
        }
    }

    /// Flags that only hold for odd degree are ignored for even `d`.
    pub fn effective(self, d: u32) -> ConstraintSet {
        if d % 2 == 1 {
            self
        } else {
            ConstraintSet { top_pure_only: false, degree_d_minus_1: false, even_j_exclusion: false, ..self }
        }
    }

    /// Degree-`d` monomials that may appear.
    pub fn top_candidates(self, d: u32) -> Vec<Monomial> {
        let cs = self.effective(d);
        if cs.top_pure_only {
            vec![Monomial::new(d, 0), Monomial::new(0, d)]
        } else {
            Monomial::of_degree(d).collect()
        }
    }

    /// Monomials of degree `1..d-1` that may appear, ignoring the top part.
    pub fn lower_candidates(self, d: u32) -> Vec<Monomial> {
        let cs = self.effective(d);
        Monomial::up_to_degree(1, d.saturating_sub(1))
            .filter(|m| !(cs.top_pure_only && cs.pure_terms && m.is_pure()))
            .filter(|m| !(cs.even_j_exclusion && d > 1 && m.degree() == d - 1 && m.j % 2 == 0))
            .collect()
    }

    pub fn names(self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (on, name) in [
            (self.top_pure_only, "top-pure-only"),
            (self.pure_terms, "pure-terms"),
            (self.degree_d_minus_1, "degree-d-minus-1"),
            (self.even_j_exclusion, "even-j-exclusion"),
            (self.no_adjacent, "no-adjacent"),
        ] {
            if on {
                out.push(name);
            }
        }
        out
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        if names.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", names.join(","))
        }
    }
}

/// `index/count`, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShardSpec {
    pub index: usize,
    pub count: usize,
}

impl Default for ShardSpec {
    fn default() -> Self {
        ShardSpec { index: 0, count: 1 }
    }
}

impl ShardSpec {
    /// Contiguous slice `[start, end)` of `total` work units.
    pub fn range(self, total: usize) -> (usize, usize) {
        (self.index * total / self.count, (self.index + 1) * total / self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid shard spec {0:?}; expected i/k with 0 <= i < k")]
pub struct ParseShardError(pub String);

impl FromStr for ShardSpec {
    type Err = ParseShardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseShardError(s.to_string());
        let (i, k) = s.split_once('/').ok_or_else(err)?;
        let index: usize = i.trim().parse().map_err(|_| err())?;
        let count: usize = k.trim().parse().map_err(|_| err())?;
        if count == 0 || index >= count {
            return Err(err());
        }
        Ok(ShardSpec { index, count })
    }
}

impl fmt::Display for ShardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_lower_candidates() {
        let cs = ConstraintSet::for_sharp(3);
        assert_eq!(cs.lower_candidates(3), vec![Monomial::new(1, 1)]);
        let c13 = cs.lower_candidates(13);
        assert_eq!(c13.len(), 61);
        assert!(c13.iter().all(|m| m.is_mixed()));
    }

    #[test]
    fn even_ignores_odd_flags() {
        let cs = ConstraintSet::for_sharp(3).effective(4);
        assert_eq!(cs, ConstraintSet { no_adjacent: true, ..ConstraintSet::PURE_TERMS });
        assert_eq!(ConstraintSet::for_sharp(4).top_candidates(4).len(), 5);
    }

    #[test]
    fn shards() {
        let s: ShardSpec = "2/3".parse().unwrap();
        assert_eq!(s.range(10), (6, 10));
        assert!("3/3".parse::<ShardSpec>().is_err());
        assert!("1".parse::<ShardSpec>().is_err());
        let total = 17;
        let mut covered = 0;
        for i in 0..5 {
            let (a, b) = ShardSpec { index: i, count: 5 }.range(total);
            assert_eq!(a, covered);
            covered = b;
        }
        assert_eq!(covered, total);
    }
}
