//! Multidimensional matrices and the dictionary to multilinear forms.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::par::if_parallel;
#[cfg(feature = "parallel")]
use crate::par::*;
use crate::poly::{Coeff, CoeffDomain, ExpVec, MultiPoly, PolyRing};

/// An r-dimensional matrix over a coefficient domain or polynomial ring;
/// entries are stored flat in row-major order.
#[derive(Clone, PartialEq)]
pub struct MultidimMatrix {
    shape: Vec<usize>,
    ring: PolyRing,
    entries: Vec<MultiPoly>,
}

impl MultidimMatrix {
    pub fn from_entries(
        shape: Vec<usize>,
        ring: &PolyRing,
        entries: Vec<MultiPoly>,
    ) -> Result<Self> {
        if shape.is_empty() || shape.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch(format!("invalid shape {shape:?}")));
        }
        let count: usize = shape.iter().product();
        if entries.len() != count {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for shape {shape:?} (need {count})",
                entries.len()
            )));
        }
        for e in &entries {
            if e.ring() != ring {
                return Err(Error::RingMismatch("matrix entry outside the ring".into()));
            }
        }
        Ok(MultidimMatrix { shape, ring: ring.clone(), entries })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Number of dimensions r.
    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn get(&self, index: &[usize]) -> &MultiPoly {
        &self.entries[self.flat_index(index)]
    }

    fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        let mut flat = 0;
        for (i, &d) in index.iter().zip(&self.shape) {
            debug_assert!(*i < d);
            flat = flat * d + i;
        }
        flat
    }

    /// Entry names follow the index, e.g. `a_0_1_0` at position (0,1,0).
    pub fn generic(shape: &[usize]) -> Result<Self> {
        Self::generic_named(shape, "a")
    }

    pub fn generic_named(shape: &[usize], prefix: &str) -> Result<Self> {
        if shape.is_empty() || shape.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch(format!("invalid shape {shape:?}")));
        }
        let mut names = Vec::new();
        for idx in MultiIndexIter::new(shape) {
            let suffix: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            names.push(format!("{prefix}_{}", suffix.join("_")));
        }
        let ring = PolyRing::new(names.clone(), CoeffDomain::Integers)?;
        let entries = names
            .iter()
            .map(|n| MultiPoly::var(&ring, n))
            .collect::<Result<Vec<_>>>()?;
        MultidimMatrix::from_entries(shape.to_vec(), &ring, entries)
    }

    /// Seeded random matrix; identical seeds give identical matrices on every
    /// platform (splitmix64 generator).
    pub fn random(shape: &[usize], domain: CoeffDomain, seed: u64) -> Result<Self> {
        if shape.is_empty() || shape.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch(format!("invalid shape {shape:?}")));
        }
        let ring = PolyRing::scalar(domain);
        let mut rng = SplitMix64::new(seed);
        let count: usize = shape.iter().product();
        let entries = (0..count)
            .map(|_| {
                let c = match domain {
                    CoeffDomain::PrimeField(p) => Coeff::Fp(rng.next() % u64::from(p)),
                    // Small signed entries keep exact arithmetic light.
                    _ => {
                        let v = (rng.next() % 201) as i64 - 100;
                        domain.from_i64(v)
                    }
                };
                MultiPoly::constant(&ring, c)
            })
            .collect();
        MultidimMatrix::from_entries(shape.to_vec(), &ring, entries)
    }

    /// Apply a permutation of dimensions: the (i_1,...,i_r) entry of the
    /// result is the (i_{perm(1)},...,i_{perm(r)}) entry of `self`, and the
    /// new shape is permuted by the inverse.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let r = self.shape.len();
        if perm.len() != r {
            return Err(Error::ShapeMismatch("permutation length".into()));
        }
        let mut seen = vec![false; r];
        for &p in perm {
            if p >= r || seen[p] {
                return Err(Error::ShapeMismatch(format!("invalid permutation {perm:?}")));
            }
            seen[p] = true;
        }
        // Entry rule: result[(i_1..i_r)] = self[(i_{perm(1)}..i_{perm(r)})],
        // so the result shape is the source shape permuted by the inverse.
        let mut inv = vec![0usize; r];
        for (j, &pj) in perm.iter().enumerate() {
            inv[pj] = j;
        }
        let result_shape: Vec<usize> = inv.iter().map(|&i| self.shape[i]).collect();
        let count: usize = result_shape.iter().product();
        let mut entries = Vec::with_capacity(count);
        for idx in MultiIndexIter::new(&result_shape) {
            let src: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            entries.push(self.get(&src).clone());
        }
        MultidimMatrix::from_entries(result_shape, &self.ring, entries)
    }

    /// Contract the last dimension of `self` with the first dimension of
    /// `other`; generalizes the matrix product.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("convolution of matrices over different rings".into()));
        }
        let k = *self.shape.last().unwrap();
        if other.shape[0] != k {
            return Err(Error::ShapeMismatch(format!(
                "inner dimensions differ: {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        let left: Vec<usize> = self.shape[..self.shape.len() - 1].to_vec();
        let right: Vec<usize> = other.shape[1..].to_vec();
        let mut shape = left.clone();
        shape.extend_from_slice(&right);
        if shape.is_empty() {
            return Err(Error::ShapeMismatch(
                "convolution would produce a zero-dimensional matrix".into(),
            ));
        }
        let rows: usize = left.iter().product();
        let cols: usize = right.iter().product();
        let compute = |flat: usize| -> Result<MultiPoly> {
            let (i, j) = (flat / cols, flat % cols);
            let mut acc = MultiPoly::zero(&self.ring);
            for t in 0..k {
                let a = &self.entries[i * k + t];
                let b = &other.entries[t * cols + j];
                acc = acc.add(&a.mul(b)?)?;
            }
            Ok(acc)
        };
        let total = rows * cols;
        let entries: Result<Vec<MultiPoly>> = if_parallel!(
            if total >= 64 {
                (0..total).into_par_iter().map(compute).collect()
            } else {
                (0..total).map(compute).collect()
            },
            (0..total).map(compute).collect()
        );
        MultidimMatrix::from_entries(shape, &self.ring, entries?)
    }

    /// The 2-dimensional identity.
    pub fn identity(n: usize, ring: &PolyRing) -> Result<Self> {
        let mut entries = vec![MultiPoly::zero(ring); n * n];
        for i in 0..n {
            entries[i * n + i] = MultiPoly::one(ring);
        }
        MultidimMatrix::from_entries(vec![n, n], ring, entries)
    }

    /// The multilinear form Σ a_{i_1..i_r} x^(1)_{i_1} ⋯ x^(r)_{i_r}.
    pub fn to_multilinear_form(&self) -> Result<MultilinearForm> {
        let r = self.shape.len();
        let groups: Vec<Vec<String>> = (0..r)
            .map(|j| (0..self.shape[j]).map(|i| format!("x{}_{}", j + 1, i)).collect())
            .collect();
        for g in groups.iter().flatten() {
            if self.ring.has_var(g) {
                return Err(Error::InvalidRing(format!(
                    "entry ring already uses group variable `{g}`"
                )));
            }
        }
        let mut vars: Vec<String> = self.ring.vars().to_vec();
        vars.extend(groups.iter().flatten().cloned());
        let big_ring = PolyRing::new(vars, self.ring.domain())?;
        let base = self.ring.arity();
        let mut offsets = Vec::with_capacity(r);
        let mut acc = base;
        for j in 0..r {
            offsets.push(acc);
            acc += self.shape[j];
        }
        let mut terms: Vec<(ExpVec, Coeff)> = Vec::new();
        for (flat, idx) in MultiIndexIter::new(&self.shape).enumerate() {
            let entry = &self.entries[flat];
            for (e, c) in entry.terms() {
                let mut exps = vec![0i32; big_ring.arity()];
                exps[..base].copy_from_slice(e);
                for j in 0..r {
                    exps[offsets[j] + idx[j]] = 1;
                }
                terms.push((exps, c.clone()));
            }
        }
        let poly = MultiPoly::from_terms(&big_ring, terms)?;
        Ok(MultilinearForm { groups, poly })
    }

    /// Inverse of [`Self::to_multilinear_form`].
    pub fn from_multilinear_form(form: &MultilinearForm) -> Result<Self> {
        let shape: Vec<usize> = form.groups.iter().map(|g| g.len()).collect();
        if shape.is_empty() || shape.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch("empty variable group".into()));
        }
        let ring = form.poly.ring();
        let group_vars: Vec<String> = form.groups.iter().flatten().cloned().collect();
        for v in &group_vars {
            if !ring.has_var(v) {
                return Err(Error::UnknownVariable { name: v.clone(), offset: 0 });
            }
        }
        let entry_vars: Vec<String> =
            ring.vars().iter().filter(|v| !group_vars.contains(v)).cloned().collect();
        let entry_ring = ring.subring(entry_vars)?.with_domain(ring.domain());
        let parts = form.poly.decompose(&group_vars)?;
        let count: usize = shape.iter().product();
        let mut entries = vec![MultiPoly::zero(&entry_ring); count];
        let mut strides = vec![1usize; shape.len()];
        for j in (0..shape.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * shape[j + 1];
        }
        for (key, coeff) in parts {
            // Exactly one variable per group, with exponent one.
            let mut flat = 0usize;
            let mut pos = 0usize;
            for (j, g) in form.groups.iter().enumerate() {
                let slice = &key[pos..pos + g.len()];
                pos += g.len();
                let ones: Vec<usize> = slice
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, _)| i)
                    .collect();
                if ones.len() != 1 || slice[ones[0]] != 1 {
                    return Err(Error::NotMultilinear(format!(
                        "monomial uses group {} with exponents {slice:?}",
                        j + 1
                    )));
                }
                flat += strides[j] * ones[0];
            }
            entries[flat] = coeff.cast_into(&entry_ring)?;
        }
        MultidimMatrix::from_entries(shape, &entry_ring, entries)
    }

    /// Scale every entry.
    pub fn scale(&self, c: &Coeff) -> Result<Self> {
        let entries: Result<Vec<MultiPoly>> =
            self.entries.iter().map(|e| e.mul_scalar(c)).collect();
        MultidimMatrix::from_entries(self.shape.clone(), &self.ring, entries?)
    }
}

impl std::fmt::Debug for MultidimMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}-dimensional matrix of shape {} over {}",
            self.shape.len(),
            self.shape.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" x "),
            self.ring
        )
    }
}

/// A multilinear form together with its r groups of variables.
#[derive(Clone, Debug)]
pub struct MultilinearForm {
    pub groups: Vec<Vec<String>>,
    pub poly: MultiPoly,
}

/// Row-major iteration over all multi-indices of a shape.
pub(crate) struct MultiIndexIter {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndexIter {
    pub(crate) fn new(shape: &[usize]) -> Self {
        let start = if shape.iter().any(|&d| d == 0) {
            None
        } else {
            Some(vec![0; shape.len()])
        };
        MultiIndexIter { shape: shape.to_vec(), next: start }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        let mut bump = current.clone();
        let mut j = self.shape.len();
        loop {
            if j == 0 {
                self.next = None;
                break;
            }
            j -= 1;
            bump[j] += 1;
            if bump[j] < self.shape[j] {
                self.next = Some(bump);
                break;
            }
            bump[j] = 0;
        }
        Some(current)
    }
}

/// Deterministic 64-bit generator used for all seeded randomness.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub(crate) fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Entries of a random square matrix of determinant one over GF(p), built as
/// a product of unipotent upper and lower triangular factors.
pub fn random_sl_matrix(n: usize, p: u32, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = SplitMix64::new(seed);
    let p64 = u64::from(p);
    let mut upper = vec![vec![0u64; n]; n];
    let mut lower = vec![vec![0u64; n]; n];
    for i in 0..n {
        upper[i][i] = 1;
        lower[i][i] = 1;
        for j in 0..n {
            if j > i {
                upper[i][j] = rng.next() % p64;
            }
            if j < i {
                lower[i][j] = rng.next() % p64;
            }
        }
    }
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u64;
            for t in 0..n {
                s = (s + lower[i][t] * upper[t][j]) % p64;
            }
            out[i][j] = s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_matrix_names_follow_indices() {
        let m = MultidimMatrix::generic(&[2, 2, 2, 2]).unwrap();
        assert_eq!(m.ring().arity(), 16);
        assert_eq!(m.ring().vars()[0], "a_0_0_0_0");
        assert_eq!(m.ring().vars()[1], "a_0_0_0_1");
        assert_eq!(m.ring().vars()[15], "a_1_1_1_1");
        let single = MultidimMatrix::generic(&[1]).unwrap();
        assert_eq!(single.ring().arity(), 1);
    }

    #[test]
    fn random_matrices_are_seed_deterministic() {
        let p = CoeffDomain::prime_field(33331).unwrap();
        let a = MultidimMatrix::random(&[4, 2, 5], p, 42).unwrap();
        let b = MultidimMatrix::random(&[4, 2, 5], p, 42).unwrap();
        let c = MultidimMatrix::random(&[4, 2, 5], p, 43).unwrap();
        assert_eq!(a.entries(), b.entries());
        assert_ne!(a.entries(), c.entries());
        assert_eq!(a.entries().len(), 40);
        let d = MultidimMatrix::random(&[2, 2, 2, 4], p, 1).unwrap();
        assert_eq!(d.entries().len(), 32);
    }

    #[test]
    fn transpose_is_the_two_dimensional_permutation() {
        let m = MultidimMatrix::generic(&[2, 3]).unwrap();
        let t = m.permute(&[1, 0]).unwrap();
        assert_eq!(t.shape(), &[3, 2]);
        assert_eq!(t.get(&[2, 1]), m.get(&[1, 2]));
        let id = m.permute(&[0, 1]).unwrap();
        assert_eq!(id, m);
    }

    #[test]
    fn permutation_round_trip() {
        let p = CoeffDomain::prime_field(101).unwrap();
        let m = MultidimMatrix::random(&[2, 3, 4], p, 7).unwrap();
        let perm = [2usize, 0, 1];
        let mut inv = vec![0usize; 3];
        for (j, &pj) in perm.iter().enumerate() {
            inv[pj] = j;
        }
        let back = m.permute(&perm).unwrap().permute(&inv).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn convolution_shapes_and_identity() {
        let p = CoeffDomain::prime_field(33331).unwrap();
        let a = MultidimMatrix::random(&[2, 2, 2, 4], p, 1).unwrap();
        let b = MultidimMatrix::random(&[4, 2, 5], p, 2).unwrap();
        let ab = a.convolve(&b).unwrap();
        assert_eq!(ab.shape(), &[2, 2, 2, 2, 5]);
        let ring = a.ring().clone();
        let id = MultidimMatrix::identity(4, &ring).unwrap();
        assert_eq!(a.convolve(&id).unwrap(), a);
        assert!(b.convolve(&a).is_err());
    }

    #[test]
    fn ordinary_matrix_product() {
        let ring = PolyRing::scalar(CoeffDomain::Integers);
        let to_entries = |vals: &[i64]| -> Vec<MultiPoly> {
            vals.iter().map(|&v| MultiPoly::from_i64(&ring, v)).collect()
        };
        let a = MultidimMatrix::from_entries(vec![2, 2], &ring, to_entries(&[1, 2, 3, 4])).unwrap();
        let b = MultidimMatrix::from_entries(vec![2, 2], &ring, to_entries(&[5, 6, 7, 8])).unwrap();
        let ab = a.convolve(&b).unwrap();
        assert_eq!(ab.entries(), &to_entries(&[19, 22, 43, 50])[..]);
    }

    #[test]
    fn multilinear_form_round_trip() {
        let m = MultidimMatrix::generic(&[2, 2]).unwrap();
        let form = m.to_multilinear_form().unwrap();
        assert_eq!(form.poly.term_count(), 4);
        let back = MultidimMatrix::from_multilinear_form(&form).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn non_multilinear_input_is_rejected() {
        let ring = PolyRing::new(["x1_0", "x1_1"], CoeffDomain::Integers).unwrap();
        let poly = crate::textio::parse_polynomial("x1_0^2 + x1_1", &ring).unwrap();
        let form = MultilinearForm { groups: vec![vec!["x1_0".into(), "x1_1".into()]], poly };
        assert!(matches!(
            MultidimMatrix::from_multilinear_form(&form),
            Err(Error::NotMultilinear(_))
        ));
    }
}
