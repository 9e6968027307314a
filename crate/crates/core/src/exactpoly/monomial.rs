use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// The monomial `x^j y^k`.
///
/// Ordered graded-lexicographically: by total degree, then by the exponent of
/// `x` descending. Within degree 3 this gives `x^3 < x^2y < xy^2 < y^3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Monomial {
    pub j: u32,
    pub k: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { j: 0, k: 0 };

    pub const fn new(j: u32, k: u32) -> Monomial {
        Monomial { j, k }
    }

    pub const fn degree(self) -> u32 {
        self.j + self.k
    }

    /// Involves both variables.
    pub const fn is_mixed(self) -> bool {
        self.j > 0 && self.k > 0
    }

    /// A nonconstant power of a single variable.
    pub const fn is_pure(self) -> bool {
        (self.j == 0) != (self.k == 0)
    }

    pub const fn swap(self) -> Monomial {
        Monomial { j: self.k, k: self.j }
    }

    pub const fn times(self, other: Monomial) -> Monomial {
        Monomial { j: self.j + other.j, k: self.k + other.k }
    }

    /// Same-degree neighbours `x^k y^{m+1}` and `x^{k+1} y^m`.
    pub fn is_adjacent(self, other: Monomial) -> bool {
        self.degree() == other.degree() && self.j.abs_diff(other.j) == 1
    }

    /// All monomials of degree exactly `d`, in graded-lex order.
    pub fn of_degree(d: u32) -> impl Iterator<Item = Monomial> {
        (0..=d).rev().map(move |j| Monomial::new(j, d - j))
    }

    /// All monomials with `lo <= degree <= hi`, in graded-lex order.
    pub fn up_to_degree(lo: u32, hi: u32) -> impl Iterator<Item = Monomial> {
        (lo..=hi).flat_map(Monomial::of_degree)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(other.j.cmp(&self.j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.j == 0 && self.k == 0 {
            return write!(f, "1");
        }
        match self.j {
            0 => {}
            1 => write!(f, "x")?,
            j => write!(f, "x^{j}")?,
        }
        match self.k {
            0 => Ok(()),
            1 => write!(f, "y"),
            k => write!(f, "y^{k}"),
        }
    }
}

/// A set of monomials, kept sorted in graded-lex order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Support {
    monomials: Vec<Monomial>,
}

impl Support {
    pub fn new(monomials: impl IntoIterator<Item = Monomial>) -> Support {
        let mut monomials: Vec<Monomial> = monomials.into_iter().collect();
        monomials.sort_unstable();
        monomials.dedup();
        Support { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.monomials.binary_search(&m).is_ok()
    }

    /// Monomials of degree exactly `d`.
    pub fn top_part(&self, d: u32) -> impl Iterator<Item = Monomial> + '_ {
        self.monomials.iter().copied().filter(move |m| m.degree() == d)
    }

    /// Monomials of degree below `d`.
    pub fn lower_part(&self, d: u32) -> impl Iterator<Item = Monomial> + '_ {
        self.monomials.iter().copied().filter(move |m| m.degree() < d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.monomials.last().map(|m| m.degree())
    }

    pub fn swap(&self) -> Support {
        Support::new(self.monomials.iter().map(|m| m.swap()))
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.monomials.iter().all(|m| other.contains(*m))
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}
