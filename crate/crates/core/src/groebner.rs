//! Buchberger engine: reduced bases, variable elimination, and saturation.
//!
//! Rational inputs are cleared to primitive integer polynomials and reduced
//! by fraction-free pseudo-division; prime-field inputs use monic reduction.
//! Pair selection is the normal strategy (smallest lcm in the active order)
//! with the product and chain criteria, so identical inputs always produce
//! byte-identical bases.

use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::{Coeff, CoeffDomain, MultiPoly, PolyRing, TermOrder};

/// A finite generator list in a polynomial ring. Zero generators are dropped
/// at construction; an empty list after dropping represents the zero ideal.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: PolyRing,
    gens: Vec<MultiPoly>,
}

impl Ideal {
    pub fn new(ring: &PolyRing, gens: Vec<MultiPoly>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyInput("ideal needs at least one generator".into()));
        }
        let mut kept = Vec::new();
        for g in gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch("ideal generator outside the ring".into()));
            }
            if g.has_laurent_exponents() {
                return Err(Error::NegativeExponent(
                    "ideal generators must have nonnegative exponents".into(),
                ));
            }
            if !g.is_zero() {
                kept.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: kept })
    }

    /// Zero ideals (empty generator lists) are legal results of elimination.
    pub(crate) fn from_parts(ring: PolyRing, gens: Vec<MultiPoly>) -> Self {
        Ideal { ring, gens }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Engine monomials
// ---------------------------------------------------------------------------

type Exps = SmallVec<[u16; 24]>;

#[derive(Clone, PartialEq, Eq, Debug)]
struct Mono {
    /// Total degree of the leading block (the full degree for Lex/GrevLex).
    deg_block: u32,
    /// Total degree of the trailing block (zero for Lex/GrevLex).
    deg_rest: u32,
    e: Exps,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EngOrder {
    Lex,
    Grev,
    Block(usize),
}

impl EngOrder {
    fn of(order: TermOrder, arity: usize) -> Self {
        match order {
            TermOrder::Lex => EngOrder::Lex,
            TermOrder::GrevLex => EngOrder::Grev,
            TermOrder::BlockElim(k) => EngOrder::Block(k.min(arity)),
        }
    }
}

impl Mono {
    fn new(e: Exps, order: EngOrder) -> Self {
        let (deg_block, deg_rest) = match order {
            EngOrder::Block(k) => (
                e[..k].iter().map(|&x| u32::from(x)).sum(),
                e[k..].iter().map(|&x| u32::from(x)).sum(),
            ),
            _ => (e.iter().map(|&x| u32::from(x)).sum(), 0),
        };
        Mono { deg_block, deg_rest, e }
    }

    fn cmp_under(&self, other: &Self, order: EngOrder) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match order {
            EngOrder::Lex => {
                for (a, b) in self.e.iter().zip(&other.e) {
                    match a.cmp(b) {
                        Equal => continue,
                        o => return o,
                    }
                }
                Equal
            }
            EngOrder::Grev => match self.deg_block.cmp(&other.deg_block) {
                Equal => grev_tie(&self.e, &other.e),
                o => o,
            },
            EngOrder::Block(k) => match self.deg_block.cmp(&other.deg_block) {
                Equal => match grev_tie(&self.e[..k], &other.e[..k]) {
                    Equal => match self.deg_rest.cmp(&other.deg_rest) {
                        Equal => grev_tie(&self.e[k..], &other.e[k..]),
                        o => o,
                    },
                    o => o,
                },
                o => o,
            },
        }
    }

    fn total_deg(&self) -> u32 {
        self.deg_block + self.deg_rest
    }

    fn divides(&self, other: &Self) -> bool {
        self.deg_block <= other.deg_block
            && self.total_deg() <= other.total_deg()
            && self.e.iter().zip(&other.e).all(|(a, b)| a <= b)
    }

    fn coprime_with(&self, other: &Self) -> bool {
        self.e.iter().zip(&other.e).all(|(&a, &b)| a == 0 || b == 0)
    }

    fn lcm(&self, other: &Self, order: EngOrder) -> Mono {
        let e: Exps = self.e.iter().zip(&other.e).map(|(&a, &b)| a.max(b)).collect();
        Mono::new(e, order)
    }

    fn mul(&self, other: &Self) -> Mono {
        let e: Exps = self
            .e
            .iter()
            .zip(&other.e)
            .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
            .collect();
        Mono {
            deg_block: self.deg_block + other.deg_block,
            deg_rest: self.deg_rest + other.deg_rest,
            e,
        }
    }

    fn div(&self, other: &Self) -> Mono {
        let e: Exps = self.e.iter().zip(&other.e).map(|(&a, &b)| a - b).collect();
        Mono {
            deg_block: self.deg_block - other.deg_block,
            deg_rest: self.deg_rest - other.deg_rest,
            e,
        }
    }

    fn is_unit(&self) -> bool {
        self.deg_block == 0 && self.deg_rest == 0
    }

    /// Byte encoding whose lexicographic comparison agrees with the order;
    /// used as a heap key for normal-strategy pair selection.
    fn order_key(&self, order: EngOrder) -> Vec<u8> {
        let mut key = Vec::with_capacity(2 * self.e.len() + 8);
        let push_grev = |key: &mut Vec<u8>, slice: &[u16], deg: u32| {
            key.extend_from_slice(&deg.to_be_bytes());
            for &x in slice.iter().rev() {
                key.extend_from_slice(&(u16::MAX - x).to_be_bytes());
            }
        };
        match order {
            EngOrder::Lex => {
                for &x in self.e.iter() {
                    key.extend_from_slice(&x.to_be_bytes());
                }
            }
            EngOrder::Grev => push_grev(&mut key, &self.e, self.deg_block),
            EngOrder::Block(k) => {
                push_grev(&mut key, &self.e[..k], self.deg_block);
                push_grev(&mut key, &self.e[k..], self.deg_rest);
            }
        }
        key
    }
}

fn grev_tie(a: &[u16], b: &[u16]) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Equal => continue,
            Less => return Greater,
            Greater => return Less,
        }
    }
    Equal
}

// ---------------------------------------------------------------------------
// Coefficient arithmetic for reduction
// ---------------------------------------------------------------------------

trait Arith {
    type C: Clone + PartialEq + Send + Sync;

    fn one(&self) -> Self::C;
    /// Multipliers `(mt, mr)` with `mt·lead_t − mr·lead_r = 0`.
    fn cancel(&self, lead_t: &Self::C, lead_r: &Self::C) -> (Self::C, Self::C);
    fn is_one(&self, c: &Self::C) -> bool;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    /// `a − b`, `None` when the difference is zero.
    fn sub(&self, a: &Self::C, b: &Self::C) -> Option<Self::C>;
    fn neg(&self, a: &Self::C) -> Self::C;
    /// Canonical form: primitive with positive lead / monic.
    fn normalize(&self, terms: &mut Vec<(Mono, Self::C)>);
}

struct ZArith;

impl Arith for ZArith {
    type C = BigInt;

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn cancel(&self, lead_t: &BigInt, lead_r: &BigInt) -> (BigInt, BigInt) {
        let g = lead_t.gcd(lead_r);
        (lead_r / &g, lead_t / &g)
    }

    fn is_one(&self, c: &BigInt) -> bool {
        c.is_one()
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        let d = a - b;
        if d.is_zero() {
            None
        } else {
            Some(d)
        }
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn normalize(&self, terms: &mut Vec<(Mono, BigInt)>) {
        if terms.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for (_, c) in terms.iter() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in terms.iter_mut() {
                *c = &*c / &g;
            }
        }
    }
}

struct FpArith {
    p: u64,
}

impl Arith for FpArith {
    type C = u64;

    fn one(&self) -> u64 {
        1
    }

    fn cancel(&self, lead_t: &u64, lead_r: &u64) -> (u64, u64) {
        (1, lead_t * crate::linalg::fp_inv(*lead_r, self.p) % self.p)
    }

    fn is_one(&self, c: &u64) -> bool {
        *c == 1
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> Option<u64> {
        let d = (a + self.p - b) % self.p;
        if d == 0 {
            None
        } else {
            Some(d)
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn normalize(&self, terms: &mut Vec<(Mono, u64)>) {
        if let Some((_, lead)) = terms.first() {
            if *lead != 1 {
                let inv = crate::linalg::fp_inv(*lead, self.p);
                for (_, c) in terms.iter_mut() {
                    *c = *c * inv % self.p;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The engine
// ---------------------------------------------------------------------------

type EPoly<C> = Vec<(Mono, C)>;

struct Engine<A: Arith> {
    arith: A,
    order: EngOrder,
}

impl<A: Arith> Engine<A> {
    /// `mt·target − mr·x^shift·reducer` as a sorted merge.
    fn combine(
        &self,
        target: &[(Mono, A::C)],
        mt: &A::C,
        reducer: &[(Mono, A::C)],
        mr: &A::C,
        shift: &Mono,
    ) -> EPoly<A::C> {
        let mut out = Vec::with_capacity(target.len() + reducer.len());
        let scale_t = !self.arith.is_one(mt);
        let (mut i, mut j) = (0, 0);
        while i < target.len() && j < reducer.len() {
            let tm = &target[i].0;
            let rm = reducer[j].0.mul(shift);
            match tm.cmp_under(&rm, self.order) {
                std::cmp::Ordering::Greater => {
                    let c = if scale_t {
                        self.arith.mul(&target[i].1, mt)
                    } else {
                        target[i].1.clone()
                    };
                    out.push((target[i].0.clone(), c));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((rm, self.arith.neg(&self.arith.mul(&reducer[j].1, mr))));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let a = if scale_t {
                        self.arith.mul(&target[i].1, mt)
                    } else {
                        target[i].1.clone()
                    };
                    let b = self.arith.mul(&reducer[j].1, mr);
                    if let Some(c) = self.arith.sub(&a, &b) {
                        out.push((target[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        while i < target.len() {
            let c = if scale_t {
                self.arith.mul(&target[i].1, mt)
            } else {
                target[i].1.clone()
            };
            out.push((target[i].0.clone(), c));
            i += 1;
        }
        while j < reducer.len() {
            let rm = reducer[j].0.mul(shift);
            out.push((rm, self.arith.neg(&self.arith.mul(&reducer[j].1, mr))));
            j += 1;
        }
        out
    }

    fn s_poly(&self, f: &EPoly<A::C>, g: &EPoly<A::C>) -> EPoly<A::C> {
        let (fm, fc) = (&f[0].0, &f[0].1);
        let (gm, gc) = (&g[0].0, &g[0].1);
        let l = fm.lcm(gm, self.order);
        let (mf, mg) = self.arith.cancel(fc, gc);
        let shifted_f: EPoly<A::C> = f
            .iter()
            .map(|(m, c)| (m.mul(&l.div(fm)), self.arith.mul(c, &mf)))
            .collect();
        self.combine(&shifted_f, &self.arith.one(), g, &mg, &l.div(gm))
    }

    /// Full normal form against `basis`, skipping index `skip` and any index
    /// marked redundant. Among eligible reducers the one with the smallest
    /// leading monomial wins; ties go to the lowest index.
    fn normal_form(
        &self,
        input: EPoly<A::C>,
        basis: &[EPoly<A::C>],
        redundant: &[bool],
        skip: Option<usize>,
    ) -> EPoly<A::C> {
        let mut w = input;
        let mut cursor = 0usize;
        // Emitted irreducible leading terms, with the epoch (number of
        // whole-poly scalings applied so far) recorded for later fixup.
        let mut out: Vec<(Mono, A::C, usize)> = Vec::new();
        let mut scalings: Vec<A::C> = Vec::new();
        while cursor < w.len() {
            let lm = &w[cursor].0;
            let mut chosen: Option<usize> = None;
            for (i, g) in basis.iter().enumerate() {
                if Some(i) == skip || redundant[i] || g.is_empty() {
                    continue;
                }
                if g[0].0.divides(lm) {
                    chosen = match chosen {
                        None => Some(i),
                        Some(prev) => {
                            let pm = &basis[prev][0].0;
                            match g[0].0.cmp_under(pm, self.order) {
                                std::cmp::Ordering::Less => Some(i),
                                _ => Some(prev),
                            }
                        }
                    };
                }
            }
            match chosen {
                Some(i) => {
                    let g = &basis[i];
                    let (mt, mr) = self.arith.cancel(&w[cursor].1, &g[0].1);
                    if !self.arith.is_one(&mt) {
                        scalings.push(mt.clone());
                    }
                    let shift = lm.div(&g[0].0);
                    w = self.combine(&w[cursor..], &mt, g, &mr, &shift);
                    cursor = 0;
                }
                None => {
                    out.push((w[cursor].0.clone(), w[cursor].1.clone(), scalings.len()));
                    cursor += 1;
                }
            }
        }
        // Suffix products apply later scalings to earlier emissions.
        let mut suffix: Vec<A::C> = vec![self.arith.one(); scalings.len() + 1];
        for i in (0..scalings.len()).rev() {
            suffix[i] = self.arith.mul(&suffix[i + 1], &scalings[i]);
        }
        let mut result: EPoly<A::C> = Vec::with_capacity(out.len());
        for (m, c, epoch) in out {
            let c = if self.arith.is_one(&suffix[epoch]) {
                c
            } else {
                self.arith.mul(&c, &suffix[epoch])
            };
            result.push((m, c));
        }
        result
    }

    /// Buchberger loop; returns the reduced, normalized, sorted basis.
    fn buchberger(&self, inputs: Vec<EPoly<A::C>>) -> Vec<EPoly<A::C>> {
        let mut basis: Vec<EPoly<A::C>> = Vec::new();
        let mut redundant: Vec<bool> = Vec::new();
        let mut pairs: BinaryHeap<std::cmp::Reverse<PairKey>> = BinaryHeap::new();
        let mut cancelled: HashSet<(u32, u32)> = HashSet::new();

        let mut enqueue = |basis: &[EPoly<A::C>],
                           redundant: &mut Vec<bool>,
                           pairs: &mut BinaryHeap<std::cmp::Reverse<PairKey>>,
                           cancelled: &mut HashSet<(u32, u32)>,
                           t: usize| {
            let lt = &basis[t][0].0;
            // Candidate pairs (i, t), pruned by the Gebauer-Moeller criteria.
            let mut cand: Vec<(usize, Mono)> = Vec::new();
            for i in 0..t {
                if redundant[i] {
                    continue;
                }
                cand.push((i, basis[i][0].0.lcm(lt, self.order)));
            }
            // Chain criterion on old pairs: (i,j) dies when lt divides their
            // lcm and both new lcms differ from it.
            for i in 0..t {
                if redundant[i] {
                    continue;
                }
                for j in (i + 1)..t {
                    if redundant[j] {
                        continue;
                    }
                    let lij = basis[i][0].0.lcm(&basis[j][0].0, self.order);
                    if lt.divides(&lij) {
                        let lit = &cand.iter().find(|(c, _)| *c == i).unwrap().1;
                        let ljt = &cand.iter().find(|(c, _)| *c == j).unwrap().1;
                        if *lit != lij && *ljt != lij {
                            cancelled.insert((i as u32, j as u32));
                        }
                    }
                }
            }
            // M criterion: drop candidates whose lcm is properly divisible by
            // another candidate's lcm; F criterion: among equal lcms keep the
            // lowest index.
            let mut keep: Vec<bool> = vec![true; cand.len()];
            for a in 0..cand.len() {
                for b in 0..cand.len() {
                    if a == b || !keep[a] || !keep[b] {
                        continue;
                    }
                    if cand[b].1 == cand[a].1 {
                        if b < a {
                            keep[a] = false;
                        }
                    } else if cand[b].1.divides(&cand[a].1) {
                        keep[a] = false;
                    }
                }
            }
            // Product criterion last: coprime leads reduce to zero.
            for (idx, (i, lcm)) in cand.iter().enumerate() {
                if !keep[idx] {
                    continue;
                }
                if basis[*i][0].0.coprime_with(lt) {
                    continue;
                }
                pairs.push(std::cmp::Reverse(PairKey {
                    deg: lcm.total_deg(),
                    key: lcm.order_key(self.order),
                    i: *i as u32,
                    j: t as u32,
                }));
            }
            // New element supersedes basis members whose lead it divides.
            for i in 0..t {
                if !redundant[i] && lt.divides(&basis[i][0].0) {
                    redundant[i] = true;
                }
            }
        };

        for input in inputs {
            if input.is_empty() {
                continue;
            }
            let mut reduced = self.normal_form(input, &basis, &redundant, None);
            if reduced.is_empty() {
                continue;
            }
            self.arith.normalize(&mut reduced);
            basis.push(reduced);
            redundant.push(false);
            let t = basis.len() - 1;
            enqueue(&basis, &mut redundant, &mut pairs, &mut cancelled, t);
        }

        while let Some(std::cmp::Reverse(pk)) = pairs.pop() {
            if cancelled.contains(&(pk.i, pk.j)) {
                continue;
            }
            let (i, j) = (pk.i as usize, pk.j as usize);
            let s = self.s_poly(&basis[i], &basis[j]);
            if s.is_empty() {
                continue;
            }
            let mut nf = self.normal_form(s, &basis, &redundant, None);
            if nf.is_empty() {
                continue;
            }
            self.arith.normalize(&mut nf);
            basis.push(nf);
            redundant.push(false);
            let t = basis.len() - 1;
            enqueue(&basis, &mut redundant, &mut pairs, &mut cancelled, t);
        }

        // Interreduce the surviving elements.
        let mut survivors: Vec<EPoly<A::C>> = basis
            .iter()
            .zip(&redundant)
            .filter(|(_, r)| !**r)
            .map(|(g, _)| g.clone())
            .collect();
        survivors.sort_by(|a, b| a[0].0.cmp_under(&b[0].0, self.order));
        let flags = vec![false; survivors.len()];
        let mut reduced: Vec<EPoly<A::C>> = Vec::with_capacity(survivors.len());
        for i in 0..survivors.len() {
            let mut nf =
                self.normal_form(survivors[i].clone(), &survivors, &flags, Some(i));
            if nf.is_empty() {
                continue;
            }
            self.arith.normalize(&mut nf);
            reduced.push(nf);
        }
        reduced.sort_by(|a, b| a[0].0.cmp_under(&b[0].0, self.order));
        reduced
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    deg: u32,
    key: Vec<u8>,
    i: u32,
    j: u32,
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

fn to_engine_int(p: &MultiPoly, order: EngOrder) -> Result<EPoly<BigInt>> {
    let mut terms: Vec<(Mono, BigInt)> = Vec::with_capacity(p.term_count());
    // Rational inputs are cleared to integers first (the ideal is unchanged).
    let mut denom_lcm = BigInt::one();
    for (_, c) in p.terms() {
        if let Coeff::Rat(r) = c {
            denom_lcm = denom_lcm.lcm(r.denom());
        }
    }
    for (e, c) in p.terms() {
        let mut exps: Exps = Exps::with_capacity(e.len());
        for &x in e {
            if x < 0 {
                return Err(Error::NegativeExponent("Laurent exponent in ideal".into()));
            }
            exps.push(u16::try_from(x).map_err(|_| Error::Internal("exponent too large".into()))?);
        }
        let v = match c {
            Coeff::Int(v) => v.clone(),
            Coeff::Rat(r) => r.numer() * (&denom_lcm / r.denom()),
            Coeff::Fp(_) => return Err(Error::Internal("field coefficient in ZZ engine".into())),
        };
        terms.push((Mono::new(exps, order), v));
    }
    terms.sort_by(|a, b| b.0.cmp_under(&a.0, order));
    Ok(terms)
}

fn to_engine_fp(p: &MultiPoly, order: EngOrder) -> Result<EPoly<u64>> {
    let mut terms: Vec<(Mono, u64)> = Vec::with_capacity(p.term_count());
    for (e, c) in p.terms() {
        let mut exps: Exps = Exps::with_capacity(e.len());
        for &x in e {
            if x < 0 {
                return Err(Error::NegativeExponent("Laurent exponent in ideal".into()));
            }
            exps.push(u16::try_from(x).map_err(|_| Error::Internal("exponent too large".into()))?);
        }
        match c {
            Coeff::Fp(v) => terms.push((Mono::new(exps, order), *v)),
            _ => return Err(Error::Internal("non-field coefficient in GF(p) engine".into())),
        }
    }
    terms.sort_by(|a, b| b.0.cmp_under(&a.0, order));
    Ok(terms)
}

fn from_engine_int(ring: &PolyRing, p: &EPoly<BigInt>) -> MultiPoly {
    let domain = ring.domain();
    let terms: Vec<(Vec<i32>, Coeff)> = p
        .iter()
        .map(|(m, c)| {
            let e: Vec<i32> = m.e.iter().map(|&x| i32::from(x)).collect();
            (e, domain.from_bigint(c.clone()))
        })
        .collect();
    MultiPoly::from_raw(ring.clone(), terms)
}

fn from_engine_fp(ring: &PolyRing, p: &EPoly<u64>) -> MultiPoly {
    let terms: Vec<(Vec<i32>, Coeff)> = p
        .iter()
        .map(|(m, c)| {
            let e: Vec<i32> = m.e.iter().map(|&x| i32::from(x)).collect();
            (e, Coeff::Fp(*c))
        })
        .collect();
    MultiPoly::from_raw(ring.clone(), terms)
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Reduced Groebner basis; deterministic for fixed input and order. Over the
/// integers and rationals the output elements are primitive with positive
/// leading coefficient; over GF(p) they are monic.
pub fn groebner_basis(ideal: &Ideal, order: TermOrder) -> Result<Vec<MultiPoly>> {
    let ring = ideal.ring();
    let eng_order = EngOrder::of(order, ring.arity());
    if ideal.gens().is_empty() {
        return Ok(Vec::new());
    }
    match ring.domain() {
        CoeffDomain::PrimeField(p) => {
            let engine = Engine { arith: FpArith { p: u64::from(p) }, order: eng_order };
            let inputs = ideal
                .gens()
                .iter()
                .map(|g| to_engine_fp(g, eng_order))
                .collect::<Result<Vec<_>>>()?;
            let basis = engine.buchberger(inputs);
            Ok(basis.iter().map(|b| from_engine_fp(ring, b)).collect())
        }
        _ => {
            let engine = Engine { arith: ZArith, order: eng_order };
            let inputs = ideal
                .gens()
                .iter()
                .map(|g| to_engine_int(g, eng_order))
                .collect::<Result<Vec<_>>>()?;
            let basis = engine.buchberger(inputs);
            Ok(basis.iter().map(|b| from_engine_int(ring, b)).collect())
        }
    }
}

/// Normal form of `p` against an arbitrary polynomial family (typically a
/// Groebner basis). Over ZZ/QQ the result is correct up to a positive
/// constant factor, which is immaterial for membership tests.
pub fn normal_form(p: &MultiPoly, basis: &[MultiPoly], order: TermOrder) -> Result<MultiPoly> {
    let ring = p.ring();
    for b in basis {
        if b.ring() != ring {
            return Err(Error::RingMismatch("normal form against a foreign basis".into()));
        }
    }
    let eng_order = EngOrder::of(order, ring.arity());
    match ring.domain() {
        CoeffDomain::PrimeField(prime) => {
            let engine = Engine { arith: FpArith { p: u64::from(prime) }, order: eng_order };
            let eb = basis
                .iter()
                .filter(|b| !b.is_zero())
                .map(|b| to_engine_fp(b, eng_order))
                .collect::<Result<Vec<_>>>()?;
            let flags = vec![false; eb.len()];
            let nf = engine.normal_form(to_engine_fp(p, eng_order)?, &eb, &flags, None);
            Ok(from_engine_fp(ring, &nf))
        }
        _ => {
            let engine = Engine { arith: ZArith, order: eng_order };
            let eb = basis
                .iter()
                .filter(|b| !b.is_zero())
                .map(|b| to_engine_int(b, eng_order))
                .collect::<Result<Vec<_>>>()?;
            let flags = vec![false; eb.len()];
            let nf = engine.normal_form(to_engine_int(p, eng_order)?, &eb, &flags, None);
            Ok(from_engine_int(ring, &nf))
        }
    }
}

/// Generators of `I ∩ k[x_{k+1..n}]`: a BlockElim(k) basis filtered to the
/// elements free of the first `k` variables, rebuilt in the subring.
pub fn eliminate_vars(ideal: &Ideal, k: usize) -> Result<Ideal> {
    let ring = ideal.ring();
    if k > ring.arity() {
        return Err(Error::ArityMismatch(format!(
            "cannot eliminate {k} of {} variables",
            ring.arity()
        )));
    }
    let basis = groebner_basis(ideal, TermOrder::BlockElim(k))?;
    let sub = ring.subring(ring.vars()[k..].to_vec())?;
    let mut gens = Vec::new();
    for b in basis {
        let uses_block = b.terms().iter().any(|(e, _)| e[..k].iter().any(|&x| x != 0));
        if !uses_block {
            gens.push(b.cast_into(&sub)?);
        }
    }
    Ok(Ideal::from_parts(sub, gens))
}

/// `I : m^∞` via the Rabinowitsch trick: adjoin `t`, add `t·m − 1`, and
/// eliminate `t`.
pub fn saturate_by_monomial(ideal: &Ideal, m: &MultiPoly) -> Result<Ideal> {
    if m.is_zero() {
        return Err(Error::ZeroInput("saturation by zero".into()));
    }
    if m.term_count() != 1 {
        return Err(Error::DomainMismatch("saturation expects a monomial".into()));
    }
    let ring = ideal.ring();
    if m.ring() != ring {
        return Err(Error::RingMismatch("saturation monomial outside the ring".into()));
    }
    // Fresh variable name for the inverse.
    let mut t_name = "t".to_string();
    let mut counter = 0;
    while ring.has_var(&t_name) {
        t_name = format!("t{counter}");
        counter += 1;
    }
    let mut vars = vec![t_name.clone()];
    vars.extend(ring.vars().iter().cloned());
    let big = PolyRing::new(vars, ring.domain())?;
    let mut gens: Vec<MultiPoly> = Vec::with_capacity(ideal.gens().len() + 1);
    for g in ideal.gens() {
        gens.push(g.cast_into(&big)?);
    }
    let t = MultiPoly::var(&big, &t_name)?;
    let tm = t.mul(&m.cast_into(&big)?)?;
    gens.push(tm.sub(&MultiPoly::one(&big))?);
    let big_ideal = Ideal::from_parts(big, gens);
    let eliminated = eliminate_vars(&big_ideal, 1)?;
    // The eliminated subring has the same variables as `ring`.
    let gens = eliminated
        .gens()
        .iter()
        .map(|g| g.cast_into(ring))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::from_parts(ring.clone(), gens))
}

/// The single generator of a principal ideal, primitive and sign-normalized
/// (monic over GF(p)); `NotPrincipal` with the basis size otherwise.
pub fn principal_generator(ideal: &Ideal) -> Result<MultiPoly> {
    let basis = groebner_basis(ideal, TermOrder::GrevLex)?;
    if basis.len() != 1 {
        return Err(Error::NotPrincipal { basis_len: basis.len() });
    }
    let g = basis.into_iter().next().unwrap();
    match ideal.ring().domain() {
        CoeffDomain::PrimeField(_) => Ok(g),
        _ => g.primitive_part(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_polynomial;

    fn ring_xy(domain: CoeffDomain) -> PolyRing {
        PolyRing::new(["x", "y"], domain).unwrap()
    }

    fn ideal(ring: &PolyRing, gens: &[&str]) -> Ideal {
        let gens = gens.iter().map(|s| parse_polynomial(s, ring).unwrap()).collect();
        Ideal::new(ring, gens).unwrap()
    }

    #[test]
    fn containment_collapses() {
        let r = ring_xy(CoeffDomain::Rationals);
        let basis = groebner_basis(&ideal(&r, &["x^2", "x"]), TermOrder::Lex).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], parse_polynomial("x", &r).unwrap());
    }

    #[test]
    fn linear_span_gives_variables() {
        let r = ring_xy(CoeffDomain::Rationals);
        let basis = groebner_basis(&ideal(&r, &["x + y", "x - y"]), TermOrder::GrevLex).unwrap();
        let strs: Vec<String> = basis.iter().map(|b| b.to_string()).collect();
        assert_eq!(strs, vec!["y", "x"]);
    }

    #[test]
    fn lex_elimination_contains_y4_minus_y() {
        let r = ring_xy(CoeffDomain::Rationals);
        let basis =
            groebner_basis(&ideal(&r, &["x^2 - y", "y^2 - x"]), TermOrder::Lex).unwrap();
        let target = parse_polynomial("y^4 - y", &r).unwrap();
        assert!(basis.contains(&target), "basis {basis:?} missing y^4 - y");
    }

    #[test]
    fn groebner_oracle_all_gens_and_spolys_reduce_to_zero() {
        let r = PolyRing::new(["x", "y", "z"], CoeffDomain::Rationals).unwrap();
        let i = ideal(&r, &["x*y - z^2", "x^2 - y*z", "y^2 - x*z"]);
        let basis = groebner_basis(&i, TermOrder::GrevLex).unwrap();
        for g in i.gens() {
            let nf = normal_form(g, &basis, TermOrder::GrevLex).unwrap();
            assert!(nf.is_zero(), "generator {g:?} does not reduce to zero");
        }
        for a in 0..basis.len() {
            for b in (a + 1)..basis.len() {
                // S-polynomial via lcm cross-multiplication.
                let (la, ca) = basis[a].leading(TermOrder::GrevLex).unwrap();
                let (lb, cb) = basis[b].leading(TermOrder::GrevLex).unwrap();
                let lcm: Vec<i32> = la.iter().zip(lb).map(|(&x, &y)| x.max(y)).collect();
                let sa: Vec<i32> = lcm.iter().zip(la).map(|(&l, &x)| l - x).collect();
                let sb: Vec<i32> = lcm.iter().zip(lb).map(|(&l, &x)| l - x).collect();
                let s = basis[a]
                    .mul_monomial(&sa, cb)
                    .unwrap()
                    .sub(&basis[b].mul_monomial(&sb, ca).unwrap())
                    .unwrap();
                let nf = normal_form(&s, &basis, TermOrder::GrevLex).unwrap();
                assert!(nf.is_zero(), "S({a},{b}) does not reduce to zero");
            }
        }
    }

    #[test]
    fn elimination_of_parametrization() {
        let r = PolyRing::new(["t", "x", "y"], CoeffDomain::Rationals).unwrap();
        let i = ideal(&r, &["x - t", "y - t^2"]);
        let out = eliminate_vars(&i, 1).unwrap();
        assert_eq!(out.gens().len(), 1);
        assert_eq!(out.gens()[0].to_string(), "x^2 - y");
        assert_eq!(out.ring().vars(), &["x", "y"]);
    }

    #[test]
    fn eliminating_everything_can_leave_nothing() {
        let r = PolyRing::new(["x", "y"], CoeffDomain::Rationals).unwrap();
        let i = ideal(&r, &["x"]);
        let out = eliminate_vars(&i, 1).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn elimination_of_shared_inverse() {
        let r = PolyRing::new(["x", "a", "b"], CoeffDomain::Rationals).unwrap();
        let i = ideal(&r, &["a*x - 1", "b*x - 1"]);
        let out = eliminate_vars(&i, 1).unwrap();
        assert_eq!(out.gens().len(), 1);
        assert_eq!(out.gens()[0].to_string(), "a - b");
    }

    #[test]
    fn saturation_examples() {
        let r = ring_xy(CoeffDomain::Rationals);
        let x = parse_polynomial("x", &r).unwrap();
        let y = parse_polynomial("y", &r).unwrap();

        let out = saturate_by_monomial(&ideal(&r, &["x*y"]), &x).unwrap();
        assert_eq!(out.gens().len(), 1);
        assert_eq!(out.gens()[0].to_string(), "y");

        let out = saturate_by_monomial(&ideal(&r, &["x^2"]), &y).unwrap();
        assert_eq!(out.gens().len(), 1);
        assert_eq!(out.gens()[0].to_string(), "x^2");

        let out = saturate_by_monomial(&ideal(&r, &["x^3 - x^2"]), &x).unwrap();
        assert_eq!(out.gens().len(), 1);
        assert_eq!(out.gens()[0].to_string(), "x - 1");
    }

    #[test]
    fn principal_generator_normalizes() {
        let r = ring_xy(CoeffDomain::Rationals);
        let g = principal_generator(&ideal(&r, &["2*x^2 - 2"])).unwrap();
        assert_eq!(g.to_string(), "x^2 - 1");
        assert!(matches!(
            principal_generator(&ideal(&r, &["x", "y"])),
            Err(Error::NotPrincipal { basis_len: 2 })
        ));
        let g = principal_generator(&ideal(&r, &["x + y", "2*x + 2*y"])).unwrap();
        assert_eq!(g.to_string(), "x + y");
    }

    #[test]
    fn gf_p_basis_is_monic_and_matches_lifted_arithmetic() {
        let p = CoeffDomain::prime_field(7).unwrap();
        let r = ring_xy(p);
        let basis = groebner_basis(&ideal(&r, &["3*x^2 - y", "2*y^2 - x"]), TermOrder::GrevLex)
            .unwrap();
        for b in &basis {
            let (_, c) = b.leading(TermOrder::GrevLex).unwrap();
            assert!(c.is_one());
        }
    }

    #[test]
    fn determinism_byte_identical() {
        let r = PolyRing::new(["x", "y", "z"], CoeffDomain::Rationals).unwrap();
        let i = ideal(&r, &["x*y*z - 1", "x*y + y*z + z*x", "x + y + z"]);
        let a = groebner_basis(&i, TermOrder::GrevLex).unwrap();
        let b = groebner_basis(&i, TermOrder::GrevLex).unwrap();
        let fa: Vec<String> = a.iter().map(|p| p.to_string()).collect();
        let fb: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        assert_eq!(fa, fb);
    }
}
