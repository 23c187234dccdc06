//! Polynomial rings: an ordered variable list over a coefficient domain.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::domain::CoeffDomain;

/// A polynomial ring. Cheap to clone; equality is structural.
#[derive(Clone)]
pub struct PolyRing(Arc<RingRepr>);

struct RingRepr {
    vars: Vec<String>,
    domain: CoeffDomain,
}

impl PolyRing {
    /// Build a ring with the given variables (order is fixed for good).
    pub fn new<I, S>(vars: I, domain: CoeffDomain) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("`{v}` is not a valid name")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        Ok(PolyRing(Arc::new(RingRepr { vars, domain })))
    }

    /// The zero-variable ring; its elements are scalars.
    pub fn scalar(domain: CoeffDomain) -> Self {
        PolyRing(Arc::new(RingRepr { vars: Vec::new(), domain }))
    }

    pub fn arity(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn domain(&self) -> CoeffDomain {
        self.0.domain
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.var_index(name).is_some()
    }

    /// Same variables, different domain.
    pub fn with_domain(&self, domain: CoeffDomain) -> Self {
        PolyRing(Arc::new(RingRepr { vars: self.0.vars.clone(), domain }))
    }

    /// Ring on a subset of this ring's variables, in the given order.
    pub fn subring<I, S>(&self, vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut names = Vec::new();
        for v in vars {
            let v = v.as_ref();
            if !self.has_var(v) {
                return Err(Error::UnknownVariable { name: v.to_string(), offset: 0 });
            }
            names.push(v.to_string());
        }
        PolyRing::new(names, self.0.domain)
    }
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.vars == other.0.vars && self.0.domain == other.0.domain)
    }
}

impl Eq for PolyRing {}

impl std::fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PolyRing({:?}, {:?})", self.0.vars, self.0.domain)
    }
}

impl std::fmt::Display for PolyRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = match self.0.domain {
            CoeffDomain::Integers => "ZZ".to_string(),
            CoeffDomain::Rationals => "QQ".to_string(),
            CoeffDomain::PrimeField(p) => format!("GF({p})"),
        };
        write!(f, "{d}[{}]", self.0.vars.join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(PolyRing::new(["x", "x"], CoeffDomain::Integers).is_err());
        assert!(PolyRing::new(["2x"], CoeffDomain::Integers).is_err());
        assert!(PolyRing::new(["x", "y_1"], CoeffDomain::Integers).is_ok());
    }

    #[test]
    fn structural_equality() {
        let a = PolyRing::new(["x", "y"], CoeffDomain::Integers).unwrap();
        let b = PolyRing::new(["x", "y"], CoeffDomain::Integers).unwrap();
        let c = PolyRing::new(["y", "x"], CoeffDomain::Integers).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
