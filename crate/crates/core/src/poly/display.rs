//! Canonical text form: terms in descending graded reverse lexicographic
//! order, single spaces around binary `+` and `-`, none around `*` and `^`.

use num_traits::Signed;

use crate::poly::domain::Coeff;
use crate::poly::multipoly::MultiPoly;

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let domain = self.ring().domain();
        let vars = self.ring().vars();
        for (i, (exps, coeff)) in self.terms().iter().enumerate() {
            let negative = domain.is_display_negative(coeff);
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = abs_coeff(coeff);
            let mono = monomial_string(vars, exps);
            match (&mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self} in {}", self.ring())
    }
}

fn abs_coeff(c: &Coeff) -> Coeff {
    match c {
        Coeff::Int(v) => Coeff::Int(v.abs()),
        Coeff::Rat(v) => Coeff::Rat(v.abs()),
        Coeff::Fp(v) => Coeff::Fp(*v),
    }
}

fn monomial_string(vars: &[String], exps: &[i32]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use crate::poly::domain::CoeffDomain;
    use crate::poly::ring::PolyRing;
    use crate::textio::parse_polynomial;

    #[test]
    fn canonical_rendering() {
        let r = PolyRing::new(["x", "y"], CoeffDomain::Integers).unwrap();
        let f = parse_polynomial("y - 5 + x^2*y", &r).unwrap();
        assert_eq!(f.to_string(), "x^2*y + y - 5");
        let g = parse_polynomial("0 - x - 5", &r).unwrap();
        assert_eq!(g.to_string(), "-x - 5");
        let h = parse_polynomial("x^-2 + 1", &r).unwrap();
        assert_eq!(h.to_string(), "1 + x^-2");
    }
}
