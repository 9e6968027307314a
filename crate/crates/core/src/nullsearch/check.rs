use serde::Serialize;

use super::matrix::RationalMatrix;
use crate::exactpoly::{is_member, BivariatePoly, Monomial, PolyError, Support};
use crate::rational::{binomial_q, Rational};

/// First and second primes of the modular prefilter.
pub const PREFILTER_PRIMES: [u64; 2] = [19, 10007];

/// `b_{j,k} = x^j y^k - x^j y^k (x + y)^{d - j - k}`.
pub fn basis_poly(j: u32, k: u32, d: u32) -> Result<BivariatePoly, PolyError> {
    if j + k >= d {
        return Err(PolyError::InvalidDegree { degree: j + k, expected: "below the target degree" });
    }
    let m = Monomial::new(j, k);
    let head = BivariatePoly::monomial(m, Rational::one());
    Ok(&head - &BivariatePoly::line_power(d - j - k).shift(m, &Rational::one()))
}

/// Column of `x^j y^k` in [`build_matrix`]; requires `1 <= j + k <= d - 1`.
pub fn column_index(m: Monomial) -> usize {
    let t = m.degree() as usize;
    (t - 1) * (t + 2) / 2 + (t - m.j as usize)
}

/// Number of lower columns; the `(x+y)^d` column sits at this index.
pub fn lower_column_count(d: u32) -> usize {
    let d = d as usize;
    (d - 1) * (d + 2) / 2
}

/// Degree-`d` coefficient of `x^a y^{d-a}` in `b_{j,k}`.
pub fn basis_entry(d: u32, a: u32, m: Monomial) -> Rational {
    if m.j <= a && a + m.k <= d {
        -binomial_q(d - m.degree(), a - m.j)
    } else {
        Rational::zero()
    }
}

/// The matrix mapping `(.., c_{j,k}, .., t)` to the degree-`d` coefficients of
/// `t (x+y)^d + sum c_{j,k} b_{j,k}`. Rows run `x^d, x^{d-1}y, .., y^d`.
pub fn build_matrix(d: u32) -> RationalMatrix {
    assert!(d >= 1);
    let lower: Vec<Monomial> = Monomial::up_to_degree(1, d - 1).collect();
    let mut a = RationalMatrix::zeros(d as usize + 1, lower.len() + 1);
    for (r, row) in Monomial::of_degree(d).enumerate() {
        for (c, m) in lower.iter().enumerate() {
            a.set(r, c, basis_entry(d, row.j, *m));
        }
        a.set(r, lower.len(), binomial_q(d, row.j));
    }
    a
}

fn row_index(d: u32, m: Monomial) -> usize {
    (d - m.j) as usize
}

/// `A'`: the support's lower columns plus the final column, restricted to
/// degree-`d` rows missing from the support.
pub fn support_submatrix(a: &RationalMatrix, support: &Support, d: u32) -> RationalMatrix {
    let mut cols: Vec<usize> = support.lower_part(d).map(column_index).collect();
    cols.push(lower_column_count(d));
    let rows: Vec<usize> =
        Monomial::of_degree(d).filter(|m| !support.contains(*m)).map(|m| row_index(d, m)).collect();
    a.select(&rows, &cols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModularVerdict {
    DefinitelyTrivialKernel,
    Unknown,
}

/// Full column rank mod `p` proves the rational kernel is trivial.
pub fn modular_prefilter(m: &RationalMatrix, p: u64) -> ModularVerdict {
    match m.rank_mod(p) {
        Some(r) if r == m.cols() => ModularVerdict::DefinitelyTrivialKernel,
        _ => ModularVerdict::Unknown,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportStatus {
    /// Support has a constant term or a monomial above degree `d`.
    RejectedInvalid,
    /// `A'` has a row `(0, .., 0, c)`.
    RejectedZeroRow,
    RejectedPrefilter { prime: u64 },
    RejectedNullspaceDim0,
    RejectedNullspaceDimHigh(usize),
    /// The kernel vector has zero `(x+y)^d` coordinate.
    RejectedFinalZero,
    RejectedNegativity,
    RejectedZeroCoefficient,
    RejectedDegreeDrop,
    Accepted(BivariatePoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportResult {
    pub status: SupportStatus,
    pub nullspace_dim: Option<usize>,
    /// Set when a prefilter rejection was re-checked exactly; `true` means the
    /// exact kernel was trivial as claimed.
    pub audit: Option<bool>,
}

impl SupportResult {
    fn new(status: SupportStatus, nullspace_dim: Option<usize>) -> Self {
        SupportResult { status, nullspace_dim, audit: None }
    }

    pub fn accepted(&self) -> Option<&BivariatePoly> {
        match &self.status {
            SupportStatus::Accepted(p) => Some(p),
            _ => None,
        }
    }
}

/// Which prefilter rejections are re-run through exact elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AuditMode {
    Off,
    /// Deterministic 1% sample keyed on the support.
    #[default]
    Sample,
    All,
}

impl AuditMode {
    pub fn selects(self, support: &Support) -> bool {
        match self {
            AuditMode::Off => false,
            AuditMode::All => true,
            AuditMode::Sample => support_hash(support).is_multiple_of(100),
        }
    }
}

/// FNV-1a over the exponents; stable across platforms and runs.
pub fn support_hash(support: &Support) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for m in support.monomials() {
        for v in [m.j, m.k] {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
    }
    h
}

/// The linear system attached to a support.
pub struct SupportSystem<'a> {
    pub d: u32,
    pub support: &'a Support,
    pub lower: Vec<Monomial>,
    pub submatrix: RationalMatrix,
}

impl<'a> SupportSystem<'a> {
    /// `None` when the support has a constant term or exceeds degree `d`.
    pub fn new(d: u32, support: &'a Support) -> Option<Self> {
        if d == 0 || support.contains(Monomial::ONE) || support.max_degree().is_some_and(|t| t > d) {
            return None;
        }
        let lower: Vec<Monomial> = support.lower_part(d).collect();
        let mut cols: Vec<Rational> = Vec::new();
        let missing: Vec<Monomial> = Monomial::of_degree(d).filter(|m| !support.contains(*m)).collect();
        let mut rows = Vec::with_capacity(missing.len());
        for row in &missing {
            cols.clear();
            cols.extend(lower.iter().map(|m| basis_entry(d, row.j, *m)));
            cols.push(binomial_q(d, row.j));
            rows.push(cols.clone());
        }
        let submatrix = if rows.is_empty() {
            RationalMatrix::zeros(0, lower.len() + 1)
        } else {
            RationalMatrix::from_rows(rows)
        };
        Some(SupportSystem { d, support, lower, submatrix })
    }

    pub fn has_zero_row(&self) -> bool {
        let n = self.lower.len();
        (0..self.submatrix.rows()).any(|r| self.submatrix.row(r)[..n].iter().all(Rational::is_zero))
    }

    /// `t (x+y)^d + sum c_i b_i` for a kernel vector `(c_1, .., c_n, t)`.
    pub fn polynomial(&self, v: &[Rational]) -> BivariatePoly {
        let n = self.lower.len();
        let t = &v[n];
        let mut p = BivariatePoly::from_terms(self.lower.iter().copied().zip(v[..n].iter().cloned()));
        for row in Monomial::of_degree(self.d) {
            let mut c = t * binomial_q(self.d, row.j);
            for (m, ci) in self.lower.iter().zip(v) {
                let e = basis_entry(self.d, row.j, *m);
                if !e.is_zero() {
                    c += e * ci;
                }
            }
            p.add_term(row, &c);
        }
        p
    }
}

pub fn check_support(d: u32, support: &Support) -> SupportResult {
    check_support_with(d, support, AuditMode::Sample)
}

/// Zero-row shortcut, then the prefilter primes, then exact elimination.
pub fn check_support_with(d: u32, support: &Support, audit: AuditMode) -> SupportResult {
    let Some(system) = SupportSystem::new(d, support) else {
        return SupportResult::new(SupportStatus::RejectedInvalid, None);
    };
    if system.has_zero_row() {
        return SupportResult::new(SupportStatus::RejectedZeroRow, None);
    }
    for p in PREFILTER_PRIMES {
        if modular_prefilter(&system.submatrix, p) == ModularVerdict::DefinitelyTrivialKernel {
            let mut result = SupportResult::new(SupportStatus::RejectedPrefilter { prime: p }, Some(0));
            if audit.selects(support) {
                result.audit = Some(system.submatrix.nullspace().is_empty());
            }
            return result;
        }
    }
    exact_stage(&system)
}

/// Exact kernel computation and reconstruction, skipping the filters.
pub fn exact_stage(system: &SupportSystem<'_>) -> SupportResult {
    let kernel = system.submatrix.nullspace();
    let dim = kernel.len();
    match dim {
        0 => return SupportResult::new(SupportStatus::RejectedNullspaceDim0, Some(0)),
        1 => {}
        _ => return SupportResult::new(SupportStatus::RejectedNullspaceDimHigh(dim), Some(dim)),
    }
    let v = &kernel[0];
    let t = v.last().expect("final column").clone();
    if t.is_zero() {
        return SupportResult::new(SupportStatus::RejectedFinalZero, Some(1));
    }
    let scaled: Vec<Rational> = v.iter().map(|c| c / &t).collect();
    let p = system.polynomial(&scaled);
    let status = classify(&p, system.support, system.d);
    SupportResult::new(status, Some(1))
}

/// Final acceptance checks on a reconstructed polynomial.
pub fn classify(p: &BivariatePoly, support: &Support, d: u32) -> SupportStatus {
    if p.terms().any(|(_, c)| c.is_negative()) {
        return SupportStatus::RejectedNegativity;
    }
    if p.degree() != Some(d) {
        return SupportStatus::RejectedDegreeDrop;
    }
    if p.support() != *support {
        return SupportStatus::RejectedZeroCoefficient;
    }
    debug_assert!(is_member(p, d).is_member());
    SupportStatus::Accepted(p.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(ms: &[(u32, u32)]) -> Support {
        Support::new(ms.iter().map(|&(j, k)| Monomial::new(j, k)))
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis_poly(1, 1, 3).unwrap(), "xy - x^2y - xy^2".parse().unwrap());
        let p = &BivariatePoly::line_power(3) + &basis_poly(1, 1, 3).unwrap().scale(&Rational::from_integer(3));
        assert_eq!(p, "x^3 + 3xy + y^3".parse().unwrap());
        assert!(basis_poly(2, 1, 3).is_err());
        for d in 1..=9 {
            for m in Monomial::up_to_degree(0, d - 1) {
                assert!(basis_poly(m.j, m.k, d).unwrap().restrict_to_line().is_zero());
            }
        }
    }

    #[test]
    fn matrix_degree_three() {
        let a = build_matrix(3);
        let expect = RationalMatrix::from_i64(&[
            &[-1, 0, -1, 0, 0, 1],
            &[-2, -1, -1, -1, 0, 3],
            &[-1, -2, 0, -1, -1, 3],
            &[0, -1, 0, 0, -1, 1],
        ]);
        assert_eq!(a, expect);
        assert_eq!(build_matrix(1), RationalMatrix::from_i64(&[&[1], &[1]]));
    }

    #[test]
    fn column_indices_follow_order() {
        for (i, m) in Monomial::up_to_degree(1, 8).enumerate() {
            assert_eq!(column_index(m), i);
        }
        assert_eq!(lower_column_count(3), 5);
    }

    #[test]
    fn submatrices() {
        let a = build_matrix(3);
        let s = sup(&[(1, 1), (3, 0), (0, 3)]);
        assert_eq!(support_submatrix(&a, &s, 3), RationalMatrix::from_i64(&[&[-1, 3], &[-1, 3]]));
        let s2 = sup(&[(2, 1), (3, 0), (0, 3)]);
        // Only the row of xy^2 remains; x^2y is not below degree 3 so only the
        // final column is selected.
        assert_eq!(support_submatrix(&a, &s2, 3), RationalMatrix::from_i64(&[&[3]]));
        let full = sup(&[(3, 0), (2, 1), (1, 2), (0, 3)]);
        assert_eq!(support_submatrix(&a, &full, 3).rows(), 0);
    }

    #[test]
    fn prefilter_verdicts() {
        let m = RationalMatrix::from_i64(&[&[-1, 3], &[-1, 3]]);
        assert_eq!(modular_prefilter(&m, 19), ModularVerdict::Unknown);
        let id = RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(modular_prefilter(&id, 19), ModularVerdict::DefinitelyTrivialKernel);
        let deg = RationalMatrix::from_i64(&[&[19, 0], &[0, 1]]);
        assert_eq!(modular_prefilter(&deg, 19), ModularVerdict::Unknown);
        assert!(deg.nullspace().is_empty());
    }

    #[test]
    fn cubic_support() {
        let r = check_support(3, &sup(&[(1, 1), (3, 0), (0, 3)]));
        assert_eq!(r.accepted(), Some(&"x^3 + 3xy + y^3".parse().unwrap()));
        assert_eq!(r.nullspace_dim, Some(1));
        let r = check_support(3, &sup(&[(2, 1), (3, 0), (0, 3)]));
        assert!(r.accepted().is_none());
    }

    #[test]
    fn septic_support() {
        let f7: BivariatePoly = "x^7 + 7x^5y + 14x^3y^2 + 7xy^3 + y^7".parse().unwrap();
        let r = check_support(7, &f7.support());
        assert_eq!(r.accepted(), Some(&f7));
    }

    #[test]
    fn invalid_supports() {
        assert_eq!(check_support(3, &sup(&[(0, 0), (3, 0)])).status, SupportStatus::RejectedInvalid);
        assert_eq!(check_support(2, &sup(&[(3, 0)])).status, SupportStatus::RejectedInvalid);
        assert_eq!(check_support(3, &sup(&[(3, 0), (0, 3)])).status, SupportStatus::RejectedZeroRow);
    }
}
