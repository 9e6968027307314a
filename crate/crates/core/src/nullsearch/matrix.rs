use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::modp::{inv_mod, mul_mod};
use crate::rational::Rational;

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        RationalMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Submatrix with the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        RationalMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Integer rows obtained by clearing each row's denominators. Row scaling
    /// preserves rank and kernel.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()));
                row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
            })
            .collect()
    }

    /// Fraction-free (Bareiss) row echelon form. Returns the echelon rows and
    /// the pivot column of each nonzero row.
    fn bareiss(&self) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut m = self.integer_rows();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..self.rows {
                for k in c + 1..self.cols {
                    let (v, rem) = (&m[r][c] * &m[i][k] - &m[i][c] * &m[r][k]).div_rem(&prev);
                    debug_assert!(rem.is_zero());
                    m[i][k] = v;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        m.truncate(pivots.len());
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().1.len()
    }

    /// Kernel basis. Each vector is a primitive integer vector whose last
    /// nonzero coordinate is positive; one vector per free column, in column
    /// order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (echelon, pivots) = self.bareiss();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (row, &pc) in echelon.iter().zip(&pivots).rev() {
                    let mut acc = Rational::zero();
                    for c in pc + 1..self.cols {
                        if !row[c].is_zero() && !x[c].is_zero() {
                            acc += Rational::from_bigint(row[c].clone()) * &x[c];
                        }
                    }
                    x[pc] = -acc / Rational::from_bigint(row[pc].clone());
                }
                primitive(x)
            })
            .collect()
    }

    /// Rank over `GF(p)`, or `None` when some entry has a denominator
    /// divisible by `p`.
    pub fn rank_mod(&self, p: u64) -> Option<usize> {
        let mut m: Vec<Vec<u64>> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            m.push(self.row(r).iter().map(|v| v.mod_prime(p)).collect::<Option<_>>()?);
        }
        Some(rank_mod_rows(&mut m, self.cols, p))
    }
}

/// Rank of a dense matrix over `GF(p)`, destroying the input.
pub fn rank_mod_rows(m: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let f = mul_mod(m[i][c], inv, p);
            for k in c..cols {
                let sub = mul_mod(f, m[r][k], p);
                m[i][k] = (m[i][k] + p - sub) % p;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Scales to a primitive integer vector with positive last nonzero entry.
pub fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let Some(last) = v.iter().rev().find(|c| !c.is_zero()) else {
        return v;
    };
    let sign = if last.is_negative() { -BigInt::one() } else { BigInt::one() };
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| Rational::from_bigint(c / &g * &sign)).collect()
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn kernel_of_small_example() {
        let m = RationalMatrix::from_i64(&[&[-1, 3], &[-1, 3]]);
        assert_eq!(m.nullspace(), vec![vec![q(3), q(1)]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rank_mod(19), Some(1));
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let m = RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(m.nullspace().is_empty());
        assert_eq!(m.rank_mod(19), Some(3));
    }

    #[test]
    fn determinant_nineteen() {
        let m = RationalMatrix::from_i64(&[&[19, 0], &[0, 1]]);
        assert_eq!(m.rank_mod(19), Some(1));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rational_entries() {
        let m = RationalMatrix::from_rows(vec![vec![Rational::new(1, 2), Rational::new(-1, 3)]]);
        assert_eq!(m.nullspace(), vec![vec![q(2), q(3)]]);
        assert_eq!(RationalMatrix::from_rows(vec![vec![Rational::new(1, 19)]]).rank_mod(19), None);
    }

    #[test]
    fn empty_shapes() {
        let m = RationalMatrix::zeros(0, 2);
        assert_eq!(m.nullspace().len(), 2);
        assert_eq!(m.rank_mod(19), Some(0));
    }
}
