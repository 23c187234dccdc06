//! Coefficient domains: integers, rationals, and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient domain of a polynomial ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CoeffDomain {
    Integers,
    Rationals,
    /// GF(p) for a prime `p` that fits in 31 bits.
    PrimeField(u32),
}

impl CoeffDomain {
    /// Prime-field constructor; rejects composite or oversized moduli.
    pub fn prime_field(p: u32) -> Result<Self> {
        if p < 2 || p > (1 << 31) - 1 {
            return Err(Error::InvalidModulus(format!(
                "{p} is out of range (need a prime below 2^31)"
            )));
        }
        if !is_prime_u32(p) {
            return Err(Error::InvalidModulus(format!("{p} is not prime")));
        }
        Ok(CoeffDomain::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffDomain::Integers)
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            CoeffDomain::PrimeField(p) => Some(*p),
            _ => None,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            CoeffDomain::Integers => Coeff::Int(BigInt::zero()),
            CoeffDomain::Rationals => Coeff::Rat(BigRational::zero()),
            CoeffDomain::PrimeField(_) => Coeff::Fp(0),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(&self, v: BigInt) -> Coeff {
        match self {
            CoeffDomain::Integers => Coeff::Int(v),
            CoeffDomain::Rationals => Coeff::Rat(BigRational::from_integer(v)),
            CoeffDomain::PrimeField(p) => {
                let p = BigInt::from(*p);
                let mut r = v.mod_floor(&p);
                if r.is_negative() {
                    r += &p;
                }
                Coeff::Fp(u64::try_from(r).expect("reduced residue fits in u64"))
            }
        }
    }

    /// Coerce a coefficient into this domain. Integers embed everywhere;
    /// rationals embed into GF(p) when the denominator is invertible.
    pub fn coerce(&self, c: &Coeff) -> Result<Coeff> {
        match (self, c) {
            (CoeffDomain::Integers, Coeff::Int(_)) => Ok(c.clone()),
            (CoeffDomain::Integers, Coeff::Rat(r)) if r.is_integer() => {
                Ok(Coeff::Int(r.to_integer()))
            }
            (CoeffDomain::Rationals, Coeff::Rat(_)) => Ok(c.clone()),
            (CoeffDomain::Rationals, Coeff::Int(v)) => {
                Ok(Coeff::Rat(BigRational::from_integer(v.clone())))
            }
            (CoeffDomain::PrimeField(p), Coeff::Fp(v)) => {
                if *v < u64::from(*p) {
                    Ok(c.clone())
                } else {
                    Ok(Coeff::Fp(v % u64::from(*p)))
                }
            }
            (CoeffDomain::PrimeField(_), Coeff::Int(v)) => Ok(self.from_bigint(v.clone())),
            (CoeffDomain::PrimeField(p), Coeff::Rat(r)) => {
                let num = self.from_bigint(r.numer().clone());
                let den = self.from_bigint(r.denom().clone());
                if den.is_zero() {
                    return Err(Error::DomainMismatch(format!(
                        "denominator divisible by {p}"
                    )));
                }
                Ok(self.mul(&num, &self.inv(&den)?))
            }
            _ => Err(Error::DomainMismatch(format!(
                "cannot coerce {c:?} into {self:?}"
            ))),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffDomain::Integers, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (CoeffDomain::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (CoeffDomain::PrimeField(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                let p = u64::from(*p);
                let s = x + y;
                Coeff::Fp(if s >= p { s - p } else { s })
            }
            _ => panic!("coefficient kind does not match domain {self:?}"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffDomain::Integers, Coeff::Int(x)) => Coeff::Int(-x),
            (CoeffDomain::Rationals, Coeff::Rat(x)) => Coeff::Rat(-x),
            (CoeffDomain::PrimeField(p), Coeff::Fp(x)) => {
                Coeff::Fp(if *x == 0 { 0 } else { u64::from(*p) - x })
            }
            _ => panic!("coefficient kind does not match domain {self:?}"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffDomain::Integers, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (CoeffDomain::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (CoeffDomain::PrimeField(p), Coeff::Fp(x), Coeff::Fp(y)) => {
                // p < 2^31, so the product fits in u64.
                Coeff::Fp((x * y) % u64::from(*p))
            }
            _ => panic!("coefficient kind does not match domain {self:?}"),
        }
    }

    /// Multiplicative inverse in a field; error over the integers or at zero.
    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        if a.is_zero() {
            return Err(Error::ZeroInput("inverse of zero".into()));
        }
        match (self, a) {
            (CoeffDomain::Rationals, Coeff::Rat(x)) => Ok(Coeff::Rat(x.recip())),
            (CoeffDomain::PrimeField(p), Coeff::Fp(x)) => Ok(Coeff::Fp(fp_inv(*x, u64::from(*p)))),
            (CoeffDomain::Integers, Coeff::Int(x)) => {
                if x.magnitude().is_one() {
                    Ok(Coeff::Int(x.clone()))
                } else {
                    Err(Error::DomainMismatch(format!("{x} is not a unit in ZZ")))
                }
            }
            _ => panic!("coefficient kind does not match domain {self:?}"),
        }
    }

    /// Exact division; errors when the quotient does not exist in the domain.
    pub fn div_exact(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        if b.is_zero() {
            return Err(Error::ZeroInput("division by zero".into()));
        }
        match (self, a, b) {
            (CoeffDomain::Integers, Coeff::Int(x), Coeff::Int(y)) => {
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Ok(Coeff::Int(q))
                } else {
                    Err(Error::DomainMismatch(format!("{x} not divisible by {y}")))
                }
            }
            _ => Ok(self.mul(a, &self.inv(b)?)),
        }
    }

    pub fn pow(&self, a: &Coeff, e: u32) -> Coeff {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// True when the coefficient prints without a leading minus sign.
    pub fn is_display_negative(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Int(x) => x.is_negative(),
            Coeff::Rat(x) => x.is_negative(),
            Coeff::Fp(_) => false,
        }
    }
}

/// An exact coefficient; the variant must match the ring's domain.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
    Fp(u64),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(x) => x.is_zero(),
            Coeff::Rat(x) => x.is_zero(),
            Coeff::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Int(x) => x.is_one(),
            Coeff::Rat(x) => x.is_one(),
            Coeff::Fp(x) => *x == 1,
        }
    }

    /// Integer value when the coefficient is an integer (or integral rational).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Coeff::Int(x) => Some(x.clone()),
            Coeff::Rat(x) if x.is_integer() => Some(x.to_integer()),
            Coeff::Fp(x) => Some(BigInt::from(*x)),
            _ => None,
        }
    }
}

impl std::fmt::Display for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeff::Int(x) => write!(f, "{x}"),
            Coeff::Rat(x) => {
                if x.is_integer() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Coeff::Fp(x) => write!(f, "{x}"),
        }
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // Extended Euclid on (a, p); p prime and a nonzero mod p.
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of non-unit");
    let m = s0.rem_euclid(p as i128);
    m as u64
}

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u32, 3, 5, 7] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 11u64;
    let n64 = u64::from(n);
    while d * d <= n64 {
        if n64 % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(CoeffDomain::prime_field(33331).is_ok());
        assert!(CoeffDomain::prime_field(33333).is_err());
        assert!(CoeffDomain::prime_field(1).is_err());
    }

    #[test]
    fn fp_arithmetic_matches_integers_mod_p() {
        let p = 33331u32;
        let fp = CoeffDomain::PrimeField(p);
        let a = fp.from_i64(-7);
        assert_eq!(a, Coeff::Fp(u64::from(p) - 7));
        let inv = fp.inv(&a).unwrap();
        assert!(fp.mul(&a, &inv).is_one());
    }

    #[test]
    fn exact_integer_division() {
        let zz = CoeffDomain::Integers;
        let six = zz.from_i64(6);
        let three = zz.from_i64(3);
        assert_eq!(zz.div_exact(&six, &three).unwrap(), zz.from_i64(2));
        assert!(zz.div_exact(&three, &six).is_err());
    }
}
