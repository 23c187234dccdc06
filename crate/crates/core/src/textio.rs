//! Text front end: the polynomial expression grammar and the JSON encoding
//! for multidimensional matrices.
//!
//! Grammar: integer literals, identifiers `[A-Za-z_][A-Za-z0-9_]*`, operators
//! `+ - * ^`, parentheses, whitespace-insensitive. An exponent is an
//! (optionally negative) integer literal. There is no division; rational
//! entries appear only as string leaves in matrix documents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::multidim::MultidimMatrix;
use crate::poly::{is_identifier, Coeff, CoeffDomain, MultiPoly, PolyRing};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token with its starting byte offset; `None` at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize)>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[start..end]).unwrap();
                self.pos = end;
                return Ok(Some((Tok::Int(text.parse().unwrap()), start)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[start..end]).unwrap().to_string();
                self.pos = end;
                return Ok(Some((Tok::Ident(text), start)));
            }
            other => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((tok, start)))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    ring: &'a PolyRing,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn offset(&self) -> usize {
        self.peek().map(|(_, o)| *o).unwrap_or(self.end)
    }

    // expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<MultiPoly> {
        let mut negate_first = false;
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            negate_first = true;
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some((Tok::Plus, _)) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some((Tok::Minus, _)) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while let Some((Tok::Star, _)) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    // factor := base ['^' exponent]
    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.base()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            self.bump();
            let exp_offset = self.offset();
            let exp = self.exponent()?;
            return apply_power(base, exp, exp_offset);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly> {
        let offset = self.offset();
        match self.bump() {
            Some((Tok::Int(v), _)) => {
                Ok(MultiPoly::constant(self.ring, self.ring.domain().from_bigint(v)))
            }
            Some((Tok::Ident(name), o)) => {
                MultiPoly::var(self.ring, &name).map_err(|_| Error::UnknownVariable {
                    name,
                    offset: o,
                })
            }
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    other => Err(Error::Parse {
                        offset: other.map(|(_, o)| o).unwrap_or(self.end),
                        message: "expected `)`".into(),
                    }),
                }
            }
            Some((tok, o)) => Err(Error::Parse {
                offset: o,
                message: format!("expected a value, found {tok:?}"),
            }),
            None => Err(Error::Parse { offset, message: "unexpected end of input".into() }),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let mut neg = false;
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            neg = true;
        }
        match self.bump() {
            Some((Tok::Int(v), o)) => {
                let v: i64 = v.try_into().map_err(|_| Error::Parse {
                    offset: o,
                    message: "exponent too large".into(),
                })?;
                if v > i64::from(i32::MAX) {
                    return Err(Error::Parse { offset: o, message: "exponent too large".into() });
                }
                Ok(if neg { -v } else { v })
            }
            other => Err(Error::Parse {
                offset: other.map(|(_, o)| o).unwrap_or(self.end),
                message: "expected an integer exponent".into(),
            }),
        }
    }
}

fn apply_power(base: MultiPoly, exp: i64, offset: usize) -> Result<MultiPoly> {
    if exp >= 0 {
        return base.pow(exp as u32);
    }
    // Negative exponents denote Laurent monomials; only a bare variable
    // (or unit-coefficient monomial) can be inverted exactly.
    if base.term_count() == 1 && base.terms()[0].1.is_one() {
        let exps: Vec<i32> = base.terms()[0].0.iter().map(|&e| e * exp as i32).collect();
        return MultiPoly::monomial(base.ring(), exps, base.ring().domain().one());
    }
    Err(Error::Parse {
        offset,
        message: "negative exponent requires a plain variable base".into(),
    })
}

/// Parse a source expression into a polynomial of `ring`.
pub fn parse_polynomial(src: &str, ring: &PolyRing) -> Result<MultiPoly> {
    let mut lexer = Lexer::new(src);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let end = src.len();
    let mut parser = Parser { toks, idx: 0, ring, end };
    let poly = parser.expr()?;
    if let Some((tok, o)) = parser.peek() {
        return Err(Error::Parse {
            offset: *o,
            message: format!("trailing input starting at {tok:?}"),
        });
    }
    Ok(poly)
}

/// Canonical text form of a polynomial (also available via `Display`).
pub fn format_polynomial(p: &MultiPoly) -> String {
    p.to_string()
}

/// All identifiers appearing in a source expression, in order of first
/// appearance. Used to discover parameter names before building a ring.
pub fn scan_identifiers(src: &str) -> Result<Vec<String>> {
    let mut lexer = Lexer::new(src);
    let mut seen = Vec::new();
    while let Some((tok, _)) = lexer.next()? {
        if let Tok::Ident(name) = tok {
            if !seen.contains(&name) {
                seen.push(name);
            }
        }
    }
    Ok(seen)
}

/// A polynomial system file: a `vars:` header naming the main variables,
/// then one polynomial per line. Identifiers outside the header become
/// parameters, ordered by first appearance.
pub struct SystemFile {
    pub ring: PolyRing,
    pub main_vars: Vec<String>,
    pub polys: Vec<MultiPoly>,
}

pub fn parse_system(text: &str, domain: CoeffDomain) -> Result<SystemFile> {
    let mut lines = text.lines();
    let header = loop {
        match lines.next() {
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l,
            None => return Err(Error::EmptyInput("system file".into())),
        }
    };
    let header = header.trim();
    let rest = header.strip_prefix("vars:").ok_or_else(|| Error::Parse {
        offset: 0,
        message: "expected a `vars:` header line".into(),
    })?;
    let main_vars: Vec<String> =
        rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    if main_vars.is_empty() {
        return Err(Error::Parse { offset: 0, message: "empty variable list".into() });
    }
    for v in &main_vars {
        if !is_identifier(v) {
            return Err(Error::InvalidRing(format!("`{v}` is not a valid name")));
        }
    }
    let body: Vec<&str> = lines.filter(|l| !l.trim().is_empty()).collect();
    if body.is_empty() {
        return Err(Error::EmptyInput("no polynomials after the header".into()));
    }
    // Parameters: identifiers not declared in the header, by first appearance.
    let mut params: Vec<String> = Vec::new();
    for line in &body {
        for id in scan_identifiers(line)? {
            if !main_vars.contains(&id) && !params.contains(&id) {
                params.push(id);
            }
        }
    }
    let mut vars = params;
    vars.extend(main_vars.iter().cloned());
    let ring = PolyRing::new(vars, domain)?;
    let mut polys = Vec::new();
    for line in &body {
        polys.push(parse_polynomial(line, &ring)?);
    }
    Ok(SystemFile { ring, main_vars, polys })
}

// ---------------------------------------------------------------------------
// Matrix documents
// ---------------------------------------------------------------------------

/// Decode a matrix document: nested arrays of numeric leaves, optionally
/// wrapped in `{"modulus": p, "data": [...]}`.
pub fn parse_matrix_json(doc: &Value) -> Result<MultidimMatrix> {
    let (modulus, data) = match doc {
        Value::Object(map) => {
            let m = map
                .get("modulus")
                .ok_or_else(|| Error::InvalidDocument("object without `modulus`".into()))?;
            let p = m
                .as_u64()
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| Error::InvalidDocument("modulus must be a small integer".into()))?;
            let data = map
                .get("data")
                .ok_or_else(|| Error::InvalidDocument("object without `data`".into()))?;
            (Some(CoeffDomain::prime_field(p)?), data)
        }
        _ => (None, doc),
    };

    let mut shape = Vec::new();
    let mut probe = data;
    loop {
        match probe {
            Value::Array(items) => {
                if items.is_empty() {
                    return Err(Error::InvalidDocument("empty array level".into()));
                }
                shape.push(items.len());
                probe = &items[0];
            }
            _ => break,
        }
    }
    if shape.is_empty() {
        return Err(Error::InvalidDocument("document must be an array".into()));
    }

    let mut leaves = Vec::new();
    collect_leaves(data, &shape, 0, &mut leaves)?;

    let domain = match modulus {
        Some(d) => d,
        None => {
            if leaves.iter().any(|l| matches!(l, Leaf::Rat(_))) {
                CoeffDomain::Rationals
            } else {
                CoeffDomain::Integers
            }
        }
    };
    let ring = PolyRing::scalar(domain);
    let entries: Vec<MultiPoly> = leaves
        .into_iter()
        .map(|l| {
            let c = match l {
                Leaf::Int(v) => domain.from_bigint(v),
                Leaf::Rat(r) => match domain {
                    CoeffDomain::Rationals => Coeff::Rat(r),
                    _ => domain.coerce(&Coeff::Rat(r))?,
                },
            };
            Ok(MultiPoly::constant(&ring, c))
        })
        .collect::<Result<_>>()?;
    MultidimMatrix::from_entries(shape, &ring, entries)
}

enum Leaf {
    Int(BigInt),
    Rat(BigRational),
}

fn collect_leaves(v: &Value, shape: &[usize], depth: usize, out: &mut Vec<Leaf>) -> Result<()> {
    if depth == shape.len() {
        out.push(parse_leaf(v)?);
        return Ok(());
    }
    match v {
        Value::Array(items) => {
            if items.len() != shape[depth] {
                return Err(Error::InvalidDocument(format!(
                    "ragged array: expected {} entries at depth {depth}, found {}",
                    shape[depth],
                    items.len()
                )));
            }
            for item in items {
                collect_leaves(item, shape, depth + 1, out)?;
            }
            Ok(())
        }
        _ => Err(Error::InvalidDocument(format!(
            "ragged array: expected an array at depth {depth}"
        ))),
    }
}

fn parse_leaf(v: &Value) -> Result<Leaf> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Leaf::Int(BigInt::from(i)))
            } else if let Some(u) = n.as_u64() {
                Ok(Leaf::Int(BigInt::from(u)))
            } else {
                Err(Error::InvalidDocument(format!("non-integer leaf {n}")))
            }
        }
        Value::String(s) => {
            let s = s.trim();
            if let Some((num, den)) = s.split_once('/') {
                let num: BigInt = num.trim().parse().map_err(|_| {
                    Error::InvalidDocument(format!("bad rational leaf `{s}`"))
                })?;
                let den: BigInt = den.trim().parse().map_err(|_| {
                    Error::InvalidDocument(format!("bad rational leaf `{s}`"))
                })?;
                if den.is_zero() {
                    return Err(Error::InvalidDocument(format!("zero denominator in `{s}`")));
                }
                Ok(Leaf::Rat(BigRational::new(num, den)))
            } else {
                let v: BigInt = s
                    .parse()
                    .map_err(|_| Error::InvalidDocument(format!("bad integer leaf `{s}`")))?;
                Ok(Leaf::Int(v))
            }
        }
        other => Err(Error::InvalidDocument(format!("non-numeric leaf {other}"))),
    }
}

/// Encode a numeric matrix as a document; inverse of [`parse_matrix_json`].
pub fn format_matrix_json(m: &MultidimMatrix) -> Result<Value> {
    let domain = m.ring().domain();
    let mut leaves = Vec::with_capacity(m.entries().len());
    for e in m.entries() {
        let c = e.as_scalar().ok_or_else(|| {
            Error::InvalidDocument("only scalar matrices have a JSON form".into())
        })?;
        leaves.push(match c {
            Coeff::Int(v) => {
                if let Ok(small) = i64::try_from(v.clone()) {
                    Value::from(small)
                } else {
                    Value::from(v.to_string())
                }
            }
            // Rationals keep an explicit denominator so the domain round-trips.
            Coeff::Rat(r) => Value::from(format!("{}/{}", r.numer(), r.denom())),
            Coeff::Fp(v) => Value::from(v),
        });
    }
    let data = nest(&leaves, m.shape());
    Ok(match domain {
        CoeffDomain::PrimeField(p) => {
            serde_json::json!({ "modulus": p, "data": data })
        }
        _ => data,
    })
}

fn nest(leaves: &[Value], shape: &[usize]) -> Value {
    if shape.len() == 1 {
        return Value::Array(leaves.to_vec());
    }
    let stride = leaves.len() / shape[0];
    Value::Array(
        (0..shape[0])
            .map(|i| nest(&leaves[i * stride..(i + 1) * stride], &shape[1..]))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(["x", "y"], CoeffDomain::Integers).unwrap()
    }

    #[test]
    fn parses_term_maps() {
        let f = parse_polynomial("x^2*y - 5", &ring()).unwrap();
        assert_eq!(f.term_count(), 2);
        assert_eq!(f.terms()[0].0, vec![2, 1]);
        assert_eq!(f.terms()[1].1, Coeff::Int(BigInt::from(-5)));
    }

    #[test]
    fn laurent_exponents_parse() {
        let f = parse_polynomial("x^-2 + 1", &ring()).unwrap();
        assert!(f.has_laurent_exponents());
        assert_eq!(f.terms().iter().map(|(e, _)| e[0]).min(), Some(-2));
    }

    #[test]
    fn syntax_error_carries_offset() {
        match parse_polynomial("x + @", &ring()) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_rejected() {
        match parse_polynomial("x + z", &ring()) {
            Err(Error::UnknownVariable { name, offset }) => {
                assert_eq!(name, "z");
                assert_eq!(offset, 4);
            }
            other => panic!("expected unknown variable, got {other:?}"),
        }
    }

    #[test]
    fn whitespace_and_order_insensitive() {
        let a = parse_polynomial("x^2*y - 5", &ring()).unwrap();
        let b = parse_polynomial("  -5+y * x ^ 2 ", &ring()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_document_roundtrip() {
        let doc: Value = serde_json::from_str("[[1,2],[3,4]]").unwrap();
        let m = parse_matrix_json(&doc).unwrap();
        assert_eq!(m.shape(), &[2, 2]);
        assert_eq!(format_matrix_json(&m).unwrap(), doc);

        let deep: Value = serde_json::from_str("[[[0]]]").unwrap();
        let m = parse_matrix_json(&deep).unwrap();
        assert_eq!(m.shape(), &[1, 1, 1]);

        let ragged: Value = serde_json::from_str("[[1],[2,3]]").unwrap();
        assert!(matches!(parse_matrix_json(&ragged), Err(Error::InvalidDocument(_))));
    }

    #[test]
    fn modulus_wrapper_roundtrip() {
        let doc: Value = serde_json::from_str(r#"{"modulus": 7, "data": [[1, 13]]}"#).unwrap();
        let m = parse_matrix_json(&doc).unwrap();
        assert_eq!(m.ring().domain(), CoeffDomain::PrimeField(7));
        let back = format_matrix_json(&m).unwrap();
        let expected: Value = serde_json::from_str(r#"{"modulus": 7, "data": [[1, 6]]}"#).unwrap();
        assert_eq!(back, expected);

        let bad: Value = serde_json::from_str(r#"{"modulus": 6, "data": [[1]]}"#).unwrap();
        assert!(parse_matrix_json(&bad).is_err());
    }

    #[test]
    fn system_file_discovers_parameters() {
        let text = "vars: x, y\nc1*x^2*y + c0\nx - y\n";
        let sys = parse_system(text, CoeffDomain::Integers).unwrap();
        assert_eq!(sys.main_vars, vec!["x", "y"]);
        assert_eq!(sys.ring.vars(), &["c1", "c0", "x", "y"]);
        assert_eq!(sys.polys.len(), 2);
    }
}
