//! Sparse multivariate Laurent polynomials with exact coefficients.
//!
//! Terms are kept in canonical form: sorted descending under the ring's
//! graded reverse lexicographic order, no zero coefficients, one term per
//! exponent vector. Values are immutable; every operation is a pure function.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::par::{if_parallel, PAR_MUL_THRESHOLD};
#[cfg(feature = "parallel")]
use crate::par::*;
use crate::poly::domain::{Coeff, CoeffDomain};
use crate::poly::order::TermOrder;
use crate::poly::ring::PolyRing;

/// Exponent vector; negative entries are legal at the data level.
pub type ExpVec = Vec<i32>;

/// A sparse multivariate polynomial over its ring's coefficient domain.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: Vec<(ExpVec, Coeff)>,
}

impl MultiPoly {
    pub fn zero(ring: &PolyRing) -> Self {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &PolyRing) -> Self {
        Self::constant(ring, ring.domain().one())
    }

    pub fn constant(ring: &PolyRing, c: Coeff) -> Self {
        let c = ring.domain().coerce(&c).expect("constant must fit the ring domain");
        if c.is_zero() {
            return Self::zero(ring);
        }
        MultiPoly { ring: ring.clone(), terms: vec![(vec![0; ring.arity()], c)] }
    }

    pub fn from_i64(ring: &PolyRing, v: i64) -> Self {
        Self::constant(ring, ring.domain().from_i64(v))
    }

    pub fn var(ring: &PolyRing, name: &str) -> Result<Self> {
        let idx = ring
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable { name: name.into(), offset: 0 })?;
        let mut e = vec![0; ring.arity()];
        e[idx] = 1;
        Ok(MultiPoly { ring: ring.clone(), terms: vec![(e, ring.domain().one())] })
    }

    pub fn monomial(ring: &PolyRing, exps: ExpVec, c: Coeff) -> Result<Self> {
        Self::from_terms(ring, vec![(exps, c)])
    }

    /// Build from raw terms; validates lengths, coerces coefficients, and
    /// combines duplicates.
    pub fn from_terms(ring: &PolyRing, terms: Vec<(ExpVec, Coeff)>) -> Result<Self> {
        let domain = ring.domain();
        let mut checked = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if e.len() != ring.arity() {
                return Err(Error::ArityMismatch(format!(
                    "exponent vector of length {} in a ring of arity {}",
                    e.len(),
                    ring.arity()
                )));
            }
            checked.push((e, domain.coerce(&c)?));
        }
        Ok(Self::from_raw(ring.clone(), checked))
    }

    /// Canonicalize a term list that is already validated.
    pub(crate) fn from_raw(ring: PolyRing, mut terms: Vec<(ExpVec, Coeff)>) -> Self {
        terms.sort_unstable_by(|a, b| TermOrder::GrevLex.cmp(&b.0, &a.0));
        let domain = ring.domain();
        let mut out: Vec<(ExpVec, Coeff)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some((pe, pc)) if *pe == e => {
                    *pc = domain.add(pc, &c);
                    if pc.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push((e, c)),
            }
        }
        MultiPoly { ring, terms: out }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    /// Terms in descending graded reverse lexicographic order.
    pub fn terms(&self) -> &[(ExpVec, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    /// The scalar value of a constant polynomial.
    pub fn as_scalar(&self) -> Option<Coeff> {
        if self.is_zero() {
            Some(self.ring.domain().zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Leading term under the given order.
    pub fn leading(&self, order: TermOrder) -> Option<(&ExpVec, &Coeff)> {
        match order {
            TermOrder::GrevLex => self.terms.first().map(|(e, c)| (e, c)),
            _ => self
                .terms
                .iter()
                .max_by(|a, b| order.cmp(&a.0, &b.0))
                .map(|(e, c)| (e, c)),
        }
    }

    /// True when some exponent is negative.
    pub fn has_laurent_exponents(&self) -> bool {
        self.terms.iter().any(|(e, _)| e.iter().any(|&x| x < 0))
    }

    fn check_ring(&self, other: &Self, op: &str) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{op}: {} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other, "add")?;
        let domain = self.ring.domain();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match TermOrder::GrevLex.cmp(ea, eb) {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = domain.add(ca, cb);
                    if !c.is_zero() {
                        out.push((ea.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(MultiPoly { ring: self.ring.clone(), terms: out })
    }

    pub fn neg(&self) -> Self {
        let domain = self.ring.domain();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), domain.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul_scalar(&self, c: &Coeff) -> Result<Self> {
        let domain = self.ring.domain();
        let c = domain.coerce(c)?;
        if c.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        Ok(MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), domain.mul(k, &c))).collect(),
        })
    }

    /// Multiply by a single term.
    pub fn mul_monomial(&self, exps: &[i32], c: &Coeff) -> Result<Self> {
        if exps.len() != self.ring.arity() {
            return Err(Error::ArityMismatch("monomial arity".into()));
        }
        let domain = self.ring.domain();
        let c = domain.coerce(c)?;
        if c.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        Ok(MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| {
                    (e.iter().zip(exps).map(|(a, b)| a + b).collect(), domain.mul(k, &c))
                })
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other, "mul")?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        if other.terms.len() == 1 {
            return self.mul_monomial(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        // Put the longer operand on the outside so chunking balances.
        let (a, b) = if self.terms.len() >= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let work = a.len().saturating_mul(b.len());
        let terms = if_parallel!(
            if work >= PAR_MUL_THRESHOLD {
                mul_terms_par(self.ring.domain(), a, b)
            } else {
                mul_terms_seq(self.ring.domain(), a, b)
            },
            mul_terms_seq(self.ring.domain(), a, b)
        );
        Ok(Self::from_map(self.ring.clone(), terms))
    }

    pub(crate) fn from_map(ring: PolyRing, map: HashMap<ExpVec, Coeff>) -> Self {
        let mut terms: Vec<(ExpVec, Coeff)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let cmp = |a: &(ExpVec, Coeff), b: &(ExpVec, Coeff)| TermOrder::GrevLex.cmp(&b.0, &a.0);
        if_parallel!(
            if terms.len() >= 1 << 14 {
                terms.par_sort_unstable_by(cmp);
            } else {
                terms.sort_unstable_by(cmp);
            },
            terms.sort_unstable_by(cmp)
        );
        MultiPoly { ring, terms }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(&self.ring));
        }
        let mut acc: Option<MultiPoly> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.unwrap())
    }

    /// Formal partial derivative; rejects Laurent exponents in `var`.
    pub fn derivative(&self, var: &str) -> Result<Self> {
        let idx = self
            .ring
            .var_index(var)
            .ok_or_else(|| Error::UnknownVariable { name: var.into(), offset: 0 })?;
        let domain = self.ring.domain();
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            if e[idx] < 0 {
                return Err(Error::NegativeExponent(format!(
                    "derivative in `{var}` of a Laurent term"
                )));
            }
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            out.push((e2, domain.mul(c, &domain.from_i64(i64::from(e[idx])))));
        }
        Ok(Self::from_raw(self.ring.clone(), out))
    }

    /// Simultaneous substitution. Every variable of `self` must either be a
    /// key of `map` (with its value in `target`) or be a variable of `target`.
    pub fn substitute(
        &self,
        map: &BTreeMap<String, MultiPoly>,
        target: &PolyRing,
    ) -> Result<Self> {
        let tdomain = target.domain();
        for v in map.values() {
            if v.ring() != target {
                return Err(Error::RingMismatch(
                    "substitution value outside the target ring".into(),
                ));
            }
        }
        // Per-variable plan: Some(poly) to substitute, or target index to keep.
        enum Plan {
            Subst(MultiPoly),
            Keep(usize),
        }
        let mut plans = Vec::with_capacity(self.ring.arity());
        for name in self.ring.vars() {
            if let Some(v) = map.get(name) {
                plans.push(Plan::Subst(v.clone()));
            } else if let Some(idx) = target.var_index(name) {
                plans.push(Plan::Keep(idx));
            } else {
                return Err(Error::UnknownVariable { name: name.clone(), offset: 0 });
            }
        }

        let eval_term = |e: &ExpVec,
                         c: &Coeff,
                         cache: &mut HashMap<(usize, u32), MultiPoly>|
         -> Result<MultiPoly> {
            let mut mono_exps = vec![0i32; target.arity()];
            let mut factors: Vec<MultiPoly> = Vec::new();
            for (i, plan) in plans.iter().enumerate() {
                let exp = e[i];
                if exp == 0 {
                    continue;
                }
                match plan {
                    Plan::Keep(t) => mono_exps[*t] += exp,
                    Plan::Subst(v) => {
                        if exp < 0 {
                            // Inverting a value only works for nonzero scalars.
                            let s = v.as_scalar().ok_or_else(|| {
                                Error::NegativeExponent(format!(
                                    "substitution into negative power of `{}`",
                                    self.ring.vars()[i]
                                ))
                            })?;
                            let inv = tdomain.inv(&s)?;
                            let p = tdomain.pow(&inv, exp.unsigned_abs());
                            factors.push(MultiPoly::constant(target, p));
                        } else {
                            let key = (i, exp as u32);
                            let powed = match cache.get(&key) {
                                Some(p) => p.clone(),
                                None => {
                                    let p = v.pow(exp as u32)?;
                                    cache.insert(key, p.clone());
                                    p
                                }
                            };
                            factors.push(powed);
                        }
                    }
                }
            }
            let mut acc = MultiPoly::monomial(target, mono_exps, tdomain.coerce(c)?)?;
            for f in factors {
                acc = acc.mul(&f)?;
            }
            Ok(acc)
        };

        let fold_chunk = |chunk: &[(ExpVec, Coeff)]| -> Result<MultiPoly> {
            let mut cache = HashMap::new();
            let mut acc: HashMap<ExpVec, Coeff> = HashMap::new();
            for (e, c) in chunk {
                let t = eval_term(e, c, &mut cache)?;
                for (te, tc) in t.terms {
                    merge_term(&tdomain, &mut acc, te, tc);
                }
            }
            Ok(MultiPoly::from_map(target.clone(), acc))
        };

        let chunks: Vec<&[(ExpVec, Coeff)]> = self.terms.chunks(256).collect();
        let partials: Vec<Result<MultiPoly>> = if_parallel!(
            if chunks.len() > 1 {
                chunks.par_iter().map(|c| fold_chunk(c)).collect()
            } else {
                chunks.iter().map(|c| fold_chunk(c)).collect()
            },
            chunks.iter().map(|c| fold_chunk(c)).collect()
        );
        let mut acc = MultiPoly::zero(target);
        for p in partials {
            acc = acc.add(&p?)?;
        }
        Ok(acc)
    }

    /// Full evaluation at scalar values; every variable must be assigned.
    pub fn evaluate_scalar(&self, values: &BTreeMap<String, Coeff>) -> Result<Coeff> {
        for v in self.ring.vars() {
            if !values.contains_key(v) {
                return Err(Error::UnknownVariable { name: v.clone(), offset: 0 });
            }
        }
        let scalar_ring = PolyRing::scalar(self.ring.domain());
        let mut map: BTreeMap<String, MultiPoly> = BTreeMap::new();
        for (k, c) in values {
            let c = self.ring.domain().coerce(c)?;
            map.insert(k.clone(), MultiPoly::constant(&scalar_ring, c));
        }
        let r = self.substitute(&map, &scalar_ring)?;
        Ok(r.as_scalar().expect("scalar ring value is constant"))
    }

    /// Partial evaluation: assigned variables get values (interpreted in this
    /// ring), the rest stay.
    pub fn evaluate(&self, values: &BTreeMap<String, MultiPoly>) -> Result<Self> {
        let mut cast = BTreeMap::new();
        for (k, v) in values {
            cast.insert(k.clone(), v.cast_into(&self.ring)?);
        }
        self.substitute(&cast, &self.ring)
    }

    /// Rename-free move into a ring that contains all variables of `self`.
    pub fn cast_into(&self, target: &PolyRing) -> Result<Self> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let tdomain = target.domain();
        let mut positions = Vec::with_capacity(self.ring.arity());
        for name in self.ring.vars() {
            positions.push(
                target
                    .var_index(name)
                    .ok_or_else(|| Error::UnknownVariable { name: name.clone(), offset: 0 })?,
            );
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut e2 = vec![0i32; target.arity()];
            for (i, &exp) in e.iter().enumerate() {
                e2[positions[i]] = exp;
            }
            terms.push((e2, tdomain.coerce(c)?));
        }
        Ok(Self::from_raw(target.clone(), terms))
    }

    /// Greatest common divisor of the integer coefficients (content), for
    /// integer-domain polynomials.
    pub fn content_int(&self) -> Result<BigInt> {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            match c {
                Coeff::Int(v) => g = g.gcd(v),
                _ => return Err(Error::DomainMismatch("content needs integer coefficients".into())),
            }
            if g.is_one() {
                break;
            }
        }
        Ok(g)
    }

    /// Integer-coefficient polynomial with content 1 and positive leading
    /// coefficient under the ring's order; equals `self` up to a nonzero
    /// rational constant. The result lives over the integers.
    pub fn primitive_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("primitive part of zero".into()));
        }
        let int_ring = self.ring.with_domain(CoeffDomain::Integers);
        let int_terms: Vec<(ExpVec, BigInt)> = match self.ring.domain() {
            CoeffDomain::Integers => self
                .terms
                .iter()
                .map(|(e, c)| match c {
                    Coeff::Int(v) => (e.clone(), v.clone()),
                    _ => unreachable!(),
                })
                .collect(),
            CoeffDomain::Rationals => {
                let mut denom_lcm = BigInt::one();
                for (_, c) in &self.terms {
                    if let Coeff::Rat(r) = c {
                        denom_lcm = denom_lcm.lcm(r.denom());
                    }
                }
                self.terms
                    .iter()
                    .map(|(e, c)| match c {
                        Coeff::Rat(r) => {
                            (e.clone(), r.numer() * (&denom_lcm / r.denom()))
                        }
                        _ => unreachable!(),
                    })
                    .collect()
            }
            CoeffDomain::PrimeField(_) => {
                return Err(Error::DomainMismatch(
                    "primitive part is defined over ZZ and QQ".into(),
                ))
            }
        };
        let mut g = BigInt::zero();
        for (_, v) in &int_terms {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        // Leading coefficient (terms are sorted, first is the GrevLex leader).
        if int_terms[0].1.is_negative() {
            g = -g;
        }
        let terms = int_terms
            .into_iter()
            .map(|(e, v)| (e, Coeff::Int(v / &g)))
            .collect();
        Ok(MultiPoly { ring: int_ring, terms })
    }

    /// Maximum total degree restricted to the given variables; `None` for the
    /// zero polynomial.
    pub fn degree_in_group(&self, vars: &[String]) -> Result<Option<i64>> {
        let mut idxs = Vec::with_capacity(vars.len());
        for v in vars {
            idxs.push(
                self.ring
                    .var_index(v)
                    .ok_or_else(|| Error::UnknownVariable { name: v.clone(), offset: 0 })?,
            );
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, _)| idxs.iter().map(|&i| i64::from(e[i])).sum())
            .max())
    }

    /// Maximum total degree over all variables; `None` for zero.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| i64::from(x)).sum())
            .max()
    }

    /// Degree in a single variable; `None` for zero.
    pub fn degree_in(&self, var: &str) -> Result<Option<i64>> {
        self.degree_in_group(std::slice::from_ref(&var.to_string()))
    }

    /// Group terms by their exponents in `vars`; each value collects the rest
    /// of the term with the `vars` positions zeroed out (a coefficient
    /// polynomial in the same ring).
    pub fn decompose(&self, vars: &[String]) -> Result<BTreeMap<ExpVec, MultiPoly>> {
        let mut idxs = Vec::with_capacity(vars.len());
        for v in vars {
            idxs.push(
                self.ring
                    .var_index(v)
                    .ok_or_else(|| Error::UnknownVariable { name: v.clone(), offset: 0 })?,
            );
        }
        let mut groups: BTreeMap<ExpVec, Vec<(ExpVec, Coeff)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: ExpVec = idxs.iter().map(|&i| e[i]).collect();
            let mut rest = e.clone();
            for &i in &idxs {
                rest[i] = 0;
            }
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        Ok(groups
            .into_iter()
            .map(|(k, ts)| (k, MultiPoly::from_raw(self.ring.clone(), ts)))
            .collect())
    }

    /// Exact division; errors when `self` is not a polynomial multiple of
    /// `divisor`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        self.check_ring(divisor, "div_exact")?;
        if divisor.is_zero() {
            return Err(Error::ZeroInput("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let domain = self.ring.domain();
        let (dlead_e, dlead_c) = (&divisor.terms[0].0, &divisor.terms[0].1);
        let mut rem = self.clone();
        let mut quot: Vec<(ExpVec, Coeff)> = Vec::new();
        while !rem.is_zero() {
            let rlead_e = rem.terms[0].0.clone();
            let rlead_c = rem.terms[0].1.clone();
            if rlead_e.iter().zip(dlead_e).any(|(a, b)| a < b) {
                return Err(Error::Internal(format!(
                    "inexact polynomial division: leading monomial {rlead_e:?} not divisible"
                )));
            }
            let qe: ExpVec = rlead_e.iter().zip(dlead_e).map(|(a, b)| a - b).collect();
            let qc = domain.div_exact(&rlead_c, dlead_c).map_err(|_| {
                Error::Internal("inexact coefficient division in div_exact".into())
            })?;
            quot.push((qe.clone(), qc.clone()));
            let sub = divisor.mul_monomial(&qe, &qc)?;
            rem = rem.sub(&sub)?;
            if let Some((e, _)) = rem.terms.first() {
                // Strictly decreasing leading terms guarantee termination.
                if TermOrder::GrevLex.cmp(e, &rlead_e) != std::cmp::Ordering::Less {
                    return Err(Error::Internal("non-decreasing remainder in div_exact".into()));
                }
            }
        }
        Ok(Self::from_raw(self.ring.clone(), quot))
    }

    /// Total degree in each variable group must be constant across terms.
    pub fn is_homogeneous_in(&self, vars: &[String]) -> Result<bool> {
        let mut idxs = Vec::with_capacity(vars.len());
        for v in vars {
            idxs.push(
                self.ring
                    .var_index(v)
                    .ok_or_else(|| Error::UnknownVariable { name: v.clone(), offset: 0 })?,
            );
        }
        let mut deg: Option<i64> = None;
        for (e, _) in &self.terms {
            let d: i64 = idxs.iter().map(|&i| i64::from(e[i])).sum();
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }
}

pub(crate) fn merge_term(
    domain: &CoeffDomain,
    acc: &mut HashMap<ExpVec, Coeff>,
    e: ExpVec,
    c: Coeff,
) {
    use std::collections::hash_map::Entry;
    match acc.entry(e) {
        Entry::Occupied(mut o) => {
            let s = domain.add(o.get(), &c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

pub(crate) fn mul_terms_seq(
    domain: CoeffDomain,
    a: &[(ExpVec, Coeff)],
    b: &[(ExpVec, Coeff)],
) -> HashMap<ExpVec, Coeff> {
    let mut acc: HashMap<ExpVec, Coeff> = HashMap::with_capacity(a.len() + b.len());
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: ExpVec = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            merge_term(&domain, &mut acc, e, domain.mul(ca, cb));
        }
    }
    acc
}

#[cfg(feature = "parallel")]
pub(crate) fn mul_terms_par(
    domain: CoeffDomain,
    a: &[(ExpVec, Coeff)],
    b: &[(ExpVec, Coeff)],
) -> HashMap<ExpVec, Coeff> {
    let threads = rayon::current_num_threads().max(1);
    let chunk = a.len().div_ceil(threads * 4).max(1);
    a.par_chunks(chunk)
        .map(|ca| mul_terms_seq(domain, ca, b))
        .reduce(HashMap::new, |mut big, small| {
            let (mut big, small) = if big.len() >= small.len() { (big, small) } else { (small, big) };
            for (e, c) in small {
                merge_term(&domain, &mut big, e, c);
            }
            big
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz_xy() -> PolyRing {
        PolyRing::new(["x", "y"], CoeffDomain::Integers).unwrap()
    }

    fn p(ring: &PolyRing, s: &str) -> MultiPoly {
        crate::textio::parse_polynomial(s, ring).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = zz_xy();
        let prod = p(&r, "x + 1").mul(&p(&r, "x - 1")).unwrap();
        assert_eq!(prod, p(&r, "x^2 - 1"));
    }

    #[test]
    fn multiplication_by_zero_absorbs() {
        let r = zz_xy();
        let prod = p(&r, "x^2*y - 5").mul(&MultiPoly::zero(&r)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn gf5_product_reduces() {
        let r = PolyRing::new(["x"], CoeffDomain::prime_field(5).unwrap()).unwrap();
        let prod = p(&r, "2*x").mul(&p(&r, "3*x")).unwrap();
        assert_eq!(prod, p(&r, "x^2"));
    }

    #[test]
    fn derivative_power_rule() {
        let r = zz_xy();
        assert_eq!(p(&r, "x^2*y + 3*x").derivative("x").unwrap(), p(&r, "2*x*y + 3"));
        assert!(p(&r, "x^2").derivative("y").unwrap().is_zero());
        assert!(matches!(
            p(&r, "x^-1").derivative("x"),
            Err(Error::NegativeExponent(_))
        ));
    }

    #[test]
    fn evaluate_at_scalars() {
        let r = zz_xy();
        let f = p(&r, "x^2 + y");
        let mut vals = BTreeMap::new();
        vals.insert("x".to_string(), Coeff::Int(BigInt::from(2)));
        vals.insert("y".to_string(), Coeff::Int(BigInt::from(1)));
        assert_eq!(f.evaluate_scalar(&vals).unwrap(), Coeff::Int(BigInt::from(5)));
    }

    #[test]
    fn identity_substitution_is_identity() {
        let r = zz_xy();
        let f = p(&r, "x^2*y - 5*x + 7");
        let map: BTreeMap<String, MultiPoly> = [
            ("x".to_string(), MultiPoly::var(&r, "x").unwrap()),
            ("y".to_string(), MultiPoly::var(&r, "y").unwrap()),
        ]
        .into();
        assert_eq!(f.substitute(&map, &r).unwrap(), f);
    }

    #[test]
    fn constructed_root_evaluates_to_zero() {
        let r = PolyRing::new(["a", "b", "x"], CoeffDomain::Integers).unwrap();
        let f = p(&r, "a*x + b");
        let mut vals = BTreeMap::new();
        vals.insert("a".to_string(), Coeff::Int(BigInt::from(1)));
        vals.insert("b".to_string(), Coeff::Int(BigInt::from(-1)));
        vals.insert("x".to_string(), Coeff::Int(BigInt::from(1)));
        assert!(f.evaluate_scalar(&vals).unwrap().is_zero());
    }

    #[test]
    fn primitive_part_examples() {
        let r = zz_xy();
        assert_eq!(p(&r, "6*x - 4*y").primitive_part().unwrap(), p(&r, "3*x - 2*y"));
        assert_eq!(p(&r, "0 - x").primitive_part().unwrap(), p(&r, "x"));
        let rq = PolyRing::new(["x", "y"], CoeffDomain::Rationals).unwrap();
        // (3/2)x^2 + 3 -> x^2 + 2 after clearing denominators and content.
        let f = MultiPoly::from_terms(
            &rq,
            vec![
                (vec![2, 0], Coeff::Rat(num_rational::BigRational::new(3.into(), 2.into()))),
                (vec![0, 0], Coeff::Int(BigInt::from(3))),
            ],
        )
        .unwrap();
        assert_eq!(f.primitive_part().unwrap(), p(&zz_xy(), "x^2 + 2"));
        assert!(MultiPoly::zero(&r).primitive_part().is_err());
    }

    #[test]
    fn degree_and_term_count() {
        let r = zz_xy();
        let f = p(&r, "x^2*y + x");
        assert_eq!(f.degree_in_group(&["x".to_string()]).unwrap(), Some(2));
        assert_eq!(p(&r, "x^2 - 1").term_count(), 2);
        assert_eq!(MultiPoly::zero(&r).degree_in_group(&["x".to_string()]).unwrap(), None);
    }

    #[test]
    fn exact_division_roundtrip() {
        let r = zz_xy();
        let a = p(&r, "x^2 - y^2 + 3*x + 1");
        let b = p(&r, "x*y - 2");
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(p(&r, "x^2 + 1").div_exact(&p(&r, "x + 1")).is_err());
    }
}
