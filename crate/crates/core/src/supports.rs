//! Exponent sets: extraction from polynomials and validity checks.
//!
//! A support is a finite set of lattice points, stored as distinct columns in
//! ascending lexicographic order. A family of n+1 supports in n variables is
//! valid when (1) each support affinely spans the ambient space and (2) the
//! union of the points themselves generates the full lattice. Condition (2)
//! follows the stated hypothesis literally (points, not differences), so it
//! is not invariant under translating a single member; `translate` is exposed
//! for callers that need to shift Laurent supports.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::Value;

use crate::error::{Error, Result, SupportValidationError};
use crate::linalg::{int_rank, smith_invariant_factors};
use crate::poly::{ExpVec, MultiPoly};

/// A set of exponent vectors, kept sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SupportSet {
    arity: usize,
    columns: Vec<ExpVec>,
}

impl SupportSet {
    pub fn new(arity: usize, columns: Vec<ExpVec>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::EmptyInput("support needs at least one column".into()));
        }
        for c in &columns {
            if c.len() != arity {
                return Err(Error::ArityMismatch(format!(
                    "column of length {} in arity-{arity} support",
                    c.len()
                )));
            }
        }
        let mut columns = columns;
        columns.sort();
        columns.dedup();
        Ok(SupportSet { arity, columns })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Columns in ascending lexicographic order.
    pub fn columns(&self) -> &[ExpVec] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn position(&self, column: &[i32]) -> Option<usize> {
        self.columns.binary_search_by(|c| c.as_slice().cmp(column)).ok()
    }

    /// Shift every column by `v`.
    pub fn translate(&self, v: &[i32]) -> Result<SupportSet> {
        if v.len() != self.arity {
            return Err(Error::ArityMismatch("translation vector arity".into()));
        }
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().zip(v).map(|(a, b)| a + b).collect())
            .collect();
        SupportSet::new(self.arity, columns)
    }

    /// Translation that moves the columns into the nonnegative orthant,
    /// touching nothing that is already there.
    pub fn to_nonnegative(&self) -> (SupportSet, Vec<i32>) {
        let shift: Vec<i32> = (0..self.arity)
            .map(|i| {
                let min = self.columns.iter().map(|c| c[i]).min().unwrap_or(0);
                if min < 0 {
                    -min
                } else {
                    0
                }
            })
            .collect();
        let translated = self.translate(&shift).expect("arity preserved");
        (translated, shift)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.columns
                .iter()
                .map(|c| Value::Array(c.iter().map(|&e| Value::from(e)).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<SupportSet> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidDocument("support must be an array of columns".into()))?;
        if arr.is_empty() {
            return Err(Error::EmptyInput("empty support".into()));
        }
        let mut columns = Vec::with_capacity(arr.len());
        for col in arr {
            let col = col.as_array().ok_or_else(|| {
                Error::InvalidDocument("support column must be an array of integers".into())
            })?;
            let mut c = Vec::with_capacity(col.len());
            for x in col {
                let x = x
                    .as_i64()
                    .and_then(|v| i32::try_from(v).ok())
                    .ok_or_else(|| Error::InvalidDocument("bad support entry".into()))?;
                c.push(x);
            }
            columns.push(c);
        }
        let arity = columns[0].len();
        SupportSet::new(arity, columns)
    }
}

/// Union of the exponent vectors of all polynomials, restricted to `vars`.
pub fn exponents_matrix_in(polys: &[MultiPoly], vars: &[String]) -> Result<SupportSet> {
    if polys.is_empty() {
        return Err(Error::EmptyInput("exponents of an empty list".into()));
    }
    let ring = polys[0].ring().clone();
    let mut idxs = Vec::with_capacity(vars.len());
    for v in vars {
        idxs.push(
            ring.var_index(v)
                .ok_or_else(|| Error::UnknownVariable { name: v.clone(), offset: 0 })?,
        );
    }
    let mut columns = Vec::new();
    for p in polys {
        if p.ring() != &ring {
            return Err(Error::RingMismatch("mixed rings in exponent extraction".into()));
        }
        for (e, _) in p.terms() {
            columns.push(idxs.iter().map(|&i| e[i]).collect());
        }
    }
    SupportSet::new(vars.len(), columns)
}

/// Union of exponent vectors over all ring variables.
pub fn exponents_matrix(polys: &[MultiPoly]) -> Result<SupportSet> {
    if polys.is_empty() {
        return Err(Error::EmptyInput("exponents of an empty list".into()));
    }
    let vars = polys[0].ring().vars().to_vec();
    exponents_matrix_in(polys, &vars)
}

/// Check the two hypotheses on a family of supports. A single support is
/// interpreted as n+1 copies (the unmixed case).
pub fn validate_supports(supports: &[SupportSet], n: usize) -> Result<()> {
    if supports.is_empty() {
        return Err(Error::EmptyInput("no supports".into()));
    }
    for s in supports {
        if s.arity() != n {
            return Err(Error::ArityMismatch(format!(
                "support of arity {} in an arity-{n} family",
                s.arity()
            )));
        }
    }
    if supports.len() != 1 && supports.len() != n + 1 {
        return Err(Error::ArityMismatch(format!(
            "{} supports for {} polynomials",
            supports.len(),
            n + 1
        )));
    }
    let expanded: Vec<&SupportSet> = if supports.len() == 1 {
        std::iter::repeat(&supports[0]).take(n + 1).collect()
    } else {
        supports.iter().collect()
    };

    let mut affine_failures = Vec::new();
    for (i, s) in expanded.iter().enumerate() {
        // Condition (1): the differences from the first column span QQ^n.
        let base = &s.columns()[0];
        let rows: Vec<Vec<BigInt>> = s.columns()[1..]
            .iter()
            .map(|c| c.iter().zip(base).map(|(a, b)| BigInt::from(a - b)).collect())
            .collect();
        let rank = if rows.is_empty() { 0 } else { int_rank(rows) };
        if rank != n {
            affine_failures.push(i);
        }
    }
    // Deduplicate index reports for the unmixed case.
    if supports.len() == 1 && !affine_failures.is_empty() {
        affine_failures = vec![0];
    }

    // Condition (2): Smith form of all points of all supports has n unit
    // invariant factors.
    let mut cols: Vec<ExpVec> = Vec::new();
    for s in &expanded {
        cols.extend(s.columns().iter().cloned());
    }
    cols.sort();
    cols.dedup();
    let matrix: Vec<Vec<BigInt>> = (0..n)
        .map(|i| cols.iter().map(|c| BigInt::from(c[i])).collect())
        .collect();
    let factors = smith_invariant_factors(matrix);
    let lattice_ok = factors.len() == n && factors.iter().all(|f| f.is_one());

    if affine_failures.is_empty() && lattice_ok {
        Ok(())
    } else {
        Err(Error::SupportsInvalid(SupportValidationError {
            affine_span_failures: affine_failures,
            lattice_span_failure: !lattice_ok,
        }))
    }
}

/// All nonnegative integer vectors with coordinate sum at most `d`.
pub fn dense_support(n: usize, d: u32) -> Result<SupportSet> {
    if d < 1 {
        return Err(Error::ZeroInput("dense support needs degree at least 1".into()));
    }
    if n == 0 {
        return Err(Error::ArityMismatch("dense support needs at least one variable".into()));
    }
    let mut columns = Vec::new();
    let mut current = vec![0i32; n];
    enumerate_bounded(&mut current, 0, d as i32, &mut columns);
    SupportSet::new(n, columns)
}

fn enumerate_bounded(current: &mut Vec<i32>, pos: usize, left: i32, out: &mut Vec<ExpVec>) {
    if pos == current.len() {
        out.push(current.clone());
        return;
    }
    for v in 0..=left {
        current[pos] = v;
        enumerate_bounded(current, pos + 1, left - v, out);
        current[pos] = 0;
    }
}

/// The combined support in twice the arity: A_0×{0} ∪ A_1×{e_1} ∪ ⋯ ∪ A_n×{e_n}.
pub fn cayley_support(supports: &[SupportSet]) -> Result<SupportSet> {
    if supports.is_empty() {
        return Err(Error::EmptyInput("no supports".into()));
    }
    let n = supports[0].arity();
    validate_supports(supports, n)?;
    let expanded: Vec<&SupportSet> = if supports.len() == 1 {
        std::iter::repeat(&supports[0]).take(n + 1).collect()
    } else {
        supports.iter().collect()
    };
    let mut columns = Vec::new();
    for (i, s) in expanded.iter().enumerate() {
        for c in s.columns() {
            let mut col = c.clone();
            let mut tag = vec![0i32; n];
            if i > 0 {
                tag[i - 1] = 1;
            }
            col.extend(tag);
            columns.push(col);
        }
    }
    SupportSet::new(2 * n, columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{CoeffDomain, PolyRing};
    use crate::textio::parse_polynomial;

    #[test]
    fn dixon_pattern_support() {
        let ring = PolyRing::new(["x", "y"], CoeffDomain::Integers).unwrap();
        let polys: Vec<MultiPoly> = (0..3)
            .map(|_| parse_polynomial("x^2*y + x*y + y + x^2 + x + 1", &ring).unwrap())
            .collect();
        let s = exponents_matrix(&polys).unwrap();
        let expected: Vec<ExpVec> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![1, 1],
            vec![2, 0],
            vec![2, 1],
        ];
        assert_eq!(s.columns(), &expected[..]);
    }

    #[test]
    fn constant_and_duplicate_handling() {
        let ring = PolyRing::new(["x"], CoeffDomain::Integers).unwrap();
        let five = parse_polynomial("5", &ring).unwrap();
        let s = exponents_matrix(&[five]).unwrap();
        assert_eq!(s.columns(), &[vec![0]]);
        let two_x = parse_polynomial("x + x", &ring).unwrap();
        let s = exponents_matrix(&[two_x]).unwrap();
        assert_eq!(s.columns(), &[vec![1]]);
    }

    #[test]
    fn unit_simplex_family_is_valid() {
        let simplex = SupportSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        validate_supports(&[simplex.clone(), simplex.clone(), simplex], 2).unwrap();
    }

    #[test]
    fn collinear_support_fails_condition_one() {
        let diag = SupportSet::new(2, vec![vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        let simplex = SupportSet::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        match validate_supports(&[diag, simplex.clone(), simplex], 2) {
            Err(Error::SupportsInvalid(report)) => {
                assert_eq!(report.affine_span_failures, vec![0]);
                assert!(!report.lattice_span_failure);
            }
            other => panic!("expected a condition-1 failure, got {other:?}"),
        }
    }

    #[test]
    fn even_sublattice_fails_condition_two() {
        let even = SupportSet::new(2, vec![vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap();
        match validate_supports(&[even], 2) {
            Err(Error::SupportsInvalid(report)) => {
                assert!(report.affine_span_failures.is_empty());
                assert!(report.lattice_span_failure);
            }
            other => panic!("expected a condition-2 failure, got {other:?}"),
        }
    }

    #[test]
    fn dense_supports() {
        let s = dense_support(1, 2).unwrap();
        assert_eq!(s.columns(), &[vec![0], vec![1], vec![2]]);
        let s = dense_support(2, 1).unwrap();
        assert_eq!(s.columns(), &[vec![0, 0], vec![0, 1], vec![1, 0]]);
        let s = dense_support(2, 2).unwrap();
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn cayley_of_segments() {
        let seg = SupportSet::new(1, vec![vec![0], vec![1]]).unwrap();
        let c = cayley_support(&[seg.clone(), seg]).unwrap();
        assert_eq!(
            c.columns(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        // Disjoint pieces: sizes add up.
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn translation_identity_and_sorting() {
        let s = SupportSet::new(1, vec![vec![-1], vec![0], vec![1]]).unwrap();
        let t = s.translate(&[1]).unwrap();
        assert_eq!(t.columns(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(s.translate(&[0]).unwrap(), s);
        let (nn, shift) = s.to_nonnegative();
        assert_eq!(shift, vec![1]);
        assert_eq!(nn, t);
    }

    #[test]
    fn json_round_trip() {
        let s = SupportSet::new(2, vec![vec![0, 0], vec![1, 2], vec![-1, 3]]).unwrap();
        let j = s.to_json();
        assert_eq!(SupportSet::from_json(&j).unwrap(), s);
    }
}
