//! Term orders on exponent vectors.

use std::cmp::Ordering;

/// A monomial order. `BlockElim(k)` compares the leading `k` variables by
/// graded reverse lexicographic order first and is an elimination order for
/// that block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TermOrder {
    Lex,
    GrevLex,
    BlockElim(usize),
}

impl TermOrder {
    /// Compare two exponent vectors of equal length.
    pub fn cmp(&self, a: &[i32], b: &[i32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            TermOrder::Lex => lex_cmp(a, b),
            TermOrder::GrevLex => grevlex_cmp(a, b),
            TermOrder::BlockElim(k) => {
                let k = (*k).min(a.len());
                grevlex_cmp(&a[..k], &b[..k]).then_with(|| grevlex_cmp(&a[k..], &b[k..]))
            }
        }
    }
}

fn lex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn grevlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| i64::from(e)).sum();
    let db: i64 = b.iter().map(|&e| i64::from(e)).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Equal degree: the rightmost differing exponent decides, smaller wins.
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_standard_cases() {
        // x^2 > xy > y^2 > x > y > 1 in two variables (x first).
        let order = TermOrder::GrevLex;
        assert_eq!(order.cmp(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(order.cmp(&[1, 1], &[0, 2]), Ordering::Greater);
        assert_eq!(order.cmp(&[1, 0], &[0, 1]), Ordering::Greater);
        assert_eq!(order.cmp(&[0, 0], &[0, 1]), Ordering::Less);
    }

    #[test]
    fn lex_ignores_degree() {
        let order = TermOrder::Lex;
        assert_eq!(order.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_leading_block() {
        // With block size 1, any power of the first variable dominates the rest.
        let order = TermOrder::BlockElim(1);
        assert_eq!(order.cmp(&[1, 0], &[0, 9]), Ordering::Greater);
        assert_eq!(order.cmp(&[0, 3], &[0, 2]), Ordering::Greater);
    }
}
