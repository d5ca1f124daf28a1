//! Text syntax for rings and their elements.
//!
//! Rings are products of unital atoms separated by `x`:
//!
//! ```text
//! expr := atom ("x" atom)*
//! atom := "Z" int | "GF(" int ["^" int] ")" | "C" int "(0)" | kind int
//! kind := A | B | C | D | G | H | I | J | K      (int is p²)
//! ```
//!
//! Elements are tuples `(c1, ..., cs)` with one coordinate per atom. A
//! coordinate is an integer for `Z_n` and `A`, a polynomial in `t` for
//! `GF` and `K`, and `m·a + n·b` (written `2a+b` or `(2,1)`) for `D` and `G`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{
    check_cap, is_prime, make_cyclic_ring, make_galois_field, make_null_ring, make_presented_p2, make_product,
    prime_power, Elem, PresentedKind, ProductRing, RingTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Z(u64),
    GF(u64, u32),
    C0(u64),
    P2(PresentedKind, u64),
}

impl Atom {
    pub fn order(&self) -> u64 {
        match *self {
            Atom::Z(n) => n,
            Atom::GF(p, k) => p.pow(k),
            Atom::C0(p) => p,
            Atom::P2(_, p) => p * p,
        }
    }

    pub fn is_unital(&self) -> bool {
        match *self {
            Atom::C0(_) => false,
            Atom::P2(kind, _) => kind.is_unital(),
            _ => true,
        }
    }

    pub fn build(&self) -> Result<RingTable> {
        match *self {
            Atom::Z(n) => make_cyclic_ring(n as usize),
            Atom::GF(p, k) => make_galois_field(p, k),
            Atom::C0(p) => make_null_ring(p),
            Atom::P2(kind, p) => make_presented_p2(kind, p),
        }
    }

    fn parse_coordinate(&self, text: &str, ring: &RingTable) -> Result<Elem> {
        let out_of_range = || Error::CoordinateOutOfRange(format!("{text:?} in {self}"));
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(out_of_range());
        }
        match *self {
            Atom::Z(_) | Atom::C0(_) | Atom::P2(PresentedKind::A | PresentedKind::B | PresentedKind::C, _) => {
                let v: usize = t.parse().map_err(|_| out_of_range())?;
                if v >= ring.order() {
                    return Err(out_of_range());
                }
                Ok(v)
            }
            Atom::GF(p, k) => parse_polynomial(&t, p as usize, k as usize).ok_or_else(out_of_range),
            Atom::P2(PresentedKind::K, p) => parse_polynomial(&t, p as usize, 2).ok_or_else(out_of_range),
            Atom::P2(_, p) => parse_pair(&t, p as usize).ok_or_else(out_of_range),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Z(n) => write!(f, "Z{n}"),
            Atom::GF(p, k) => write!(f, "GF({})", p.pow(k)),
            Atom::C0(p) => write!(f, "C{p}(0)"),
            Atom::P2(kind, p) => write!(f, "{kind}{}", p * p),
        }
    }
}

/// A product of atoms, first atom most significant in element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingExpr {
    pub atoms: Vec<Atom>,
}

impl RingExpr {
    pub fn order(&self) -> u64 {
        self.atoms.iter().map(Atom::order).product()
    }

    pub fn build(&self) -> Result<ProductRing> {
        let rings = self.atoms.iter().map(Atom::build).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&RingTable> = rings.iter().collect();
        make_product(&refs)
    }

    /// Builds the ring and keeps the atom tables for element parsing.
    pub fn instantiate(&self) -> Result<BuiltRing> {
        let factors = self.atoms.iter().map(Atom::build).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&RingTable> = factors.iter().collect();
        let product = make_product(&refs)?;
        Ok(BuiltRing { expr: self.clone(), factors, product })
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        f.write_str(&parts.join(" x "))
    }
}

impl std::str::FromStr for RingExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ring(s)
    }
}

/// A ring built from an expression, with its atoms kept for coordinates.
#[derive(Clone, Debug)]
pub struct BuiltRing {
    pub expr: RingExpr,
    pub factors: Vec<RingTable>,
    pub product: ProductRing,
}

impl BuiltRing {
    pub fn ring(&self) -> &RingTable {
        &self.product.ring
    }

    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        parse_element(text, self)
    }

    pub fn format_element(&self, e: Elem) -> String {
        format_element(self, e)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Syntax { pos, msg: msg.into() }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.error(self.pos, format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(self.pos, format!("expected '{want}', found end of input"))),
        }
    }

    /// Digits may be separated by whitespace.
    fn int(&mut self) -> Result<(usize, u64)> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        let mut any = false;
        while let Some(c) = self.peek() {
            let Some(d) = c.to_digit(10) else { break };
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or_else(|| self.error(start, "integer too large"))?;
            self.pos += 1;
            any = true;
        }
        if !any {
            return Err(self.error(start, "expected an integer"));
        }
        Ok((start, v))
    }

    fn atom(&mut self) -> Result<Atom> {
        let Some(c) = self.peek() else {
            return Err(self.error(self.pos, "expected a ring atom, found end of input"));
        };
        let start = self.pos;
        self.pos += c.len_utf8();
        match c {
            'Z' => {
                let (pos, n) = self.int()?;
                if n < 2 {
                    return Err(self.error(pos, "Z_n needs n >= 2"));
                }
                check_order(n)?;
                Ok(Atom::Z(n))
            }
            'G' if self.peek() == Some('F') => {
                self.pos += 1;
                self.expect('(')?;
                let (pos, base) = self.int()?;
                let atom = if self.peek() == Some('^') {
                    self.pos += 1;
                    let (kpos, k) = self.int()?;
                    if !is_prime(base) {
                        return Err(Error::NotPrime(base));
                    }
                    if k == 0 || k > 64 {
                        return Err(self.error(kpos, "exponent must be positive"));
                    }
                    Atom::GF(base, k as u32)
                } else {
                    match prime_power(base) {
                        Some((p, k)) => Atom::GF(p, k),
                        None if base < 2 => return Err(self.error(pos, "field order must be at least 2")),
                        None => return Err(Error::NotPrime(base)),
                    }
                };
                self.expect(')')?;
                check_order_opt(atom_order_checked(&atom))?;
                Ok(atom)
            }
            _ => {
                let Some(kind) = PresentedKind::from_letter(c) else {
                    return Err(self.error(start, format!("unknown ring atom starting with '{c}'")));
                };
                let (pos, q) = self.int()?;
                if kind == PresentedKind::C && self.peek() == Some('(') {
                    self.pos += 1;
                    let (zpos, z) = self.int()?;
                    if z != 0 {
                        return Err(self.error(zpos, "expected '0' in C p(0)"));
                    }
                    self.expect(')')?;
                    if !is_prime(q) {
                        return Err(Error::NotPrime(q));
                    }
                    return Ok(Atom::C0(q));
                }
                if !kind.is_commutative() {
                    return Err(Error::NonCommutative(c));
                }
                let p = match prime_power(q) {
                    Some((p, 2)) => p,
                    _ => return Err(self.error(pos, format!("{c} takes p² for a prime p, got {q}"))),
                };
                check_order(q)?;
                Ok(Atom::P2(kind, p))
            }
        }
    }
}

fn atom_order_checked(atom: &Atom) -> Option<u64> {
    match *atom {
        Atom::GF(p, k) => p.checked_pow(k),
        other => Some(other.order()),
    }
}

fn check_order_opt(order: Option<u64>) -> Result<()> {
    match order {
        Some(n) => check_order(n),
        None => Err(Error::CapExceeded { order: usize::MAX, cap: crate::ring::max_order() }),
    }
}

fn check_order(n: u64) -> Result<()> {
    check_cap(usize::try_from(n).unwrap_or(usize::MAX))
}

/// Parses a ring expression such as `Z4 x GF(9)`.
///
/// Non-unital atoms are rejected, since the ring must have a unity.
pub fn parse_ring(text: &str) -> Result<RingExpr> {
    let mut parser = Parser { src: text, pos: 0 };
    let mut atoms = vec![parser.atom()?];
    loop {
        match parser.peek() {
            None => break,
            Some('x' | '×') => {
                let c = parser.peek().unwrap();
                parser.pos += c.len_utf8();
                atoms.push(parser.atom()?);
            }
            Some(c) => return Err(parser.error(parser.pos, format!("expected 'x' or end of input, found '{c}'"))),
        }
    }
    if let Some(bad) = atoms.iter().find(|a| !a.is_unital()) {
        return Err(Error::NonUnitalFactor(bad.to_string()));
    }
    let order = atoms.iter().try_fold(1u64, |acc, a| acc.checked_mul(a.order())).unwrap_or(u64::MAX);
    check_order(order)?;
    if atoms.len() > 6 {
        return Err(Error::InvalidParameter(format!("at most 6 factors are supported, got {}", atoms.len())));
    }
    Ok(RingExpr { atoms })
}

/// Polynomial in `t` over Z_p of degree < k, e.g. `2t^2+t+1`.
fn parse_polynomial(t: &str, p: usize, k: usize) -> Option<Elem> {
    let mut coeffs = vec![0usize; k];
    for term in t.split('+') {
        let (coef, deg) = match term.find('t') {
            None => (term.parse::<usize>().ok()?, 0),
            Some(i) => {
                let coef = if i == 0 { 1 } else { term[..i].parse::<usize>().ok()? };
                let rest = &term[i + 1..];
                let deg = if rest.is_empty() { 1 } else { rest.strip_prefix('^')?.parse::<usize>().ok()? };
                (coef, deg)
            }
        };
        if coef >= p || deg >= k {
            return None;
        }
        coeffs[deg] = (coeffs[deg] + coef) % p;
    }
    Some(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c))
}

/// `m·a + n·b` as `m,n`, `(m,n)` or a combination like `2a+b`.
fn parse_pair(t: &str, p: usize) -> Option<Elem> {
    let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
    let (m, n) = if let Some((m, n)) = inner.split_once(',') {
        (m.parse::<usize>().ok()?, n.parse::<usize>().ok()?)
    } else if inner == "0" {
        (0, 0)
    } else {
        let (mut m, mut n) = (None, None);
        for term in inner.split('+') {
            let (coef, slot) = match term.strip_suffix('a') {
                Some(c) => (c, &mut m),
                None => (term.strip_suffix('b')?, &mut n),
            };
            let c = if coef.is_empty() { 1 } else { coef.parse::<usize>().ok()? };
            if slot.replace(c).is_some() {
                return None;
            }
        }
        (m.unwrap_or(0), n.unwrap_or(0))
    };
    (m < p && n < p).then(|| m + p * n)
}

/// Splits `a, (b, c), d` at top-level commas.
fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    (depth == 0).then(|| {
        parts.push(&s[start..]);
        parts
    })
}

/// Whether the outer parentheses of `s` enclose all of it.
fn strip_outer_parens(s: &str) -> Option<&str> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    (depth == 0).then_some(inner)
}

/// Parses `(c1, ..., cs)` into an element of the built ring. A ring with a
/// single atom also takes the bare coordinate.
pub fn parse_element(text: &str, built: &BuiltRing) -> Result<Elem> {
    let t = text.trim();
    let atoms = &built.expr.atoms;
    if atoms.len() == 1 {
        let atom = &atoms[0];
        let direct = atom.parse_coordinate(t, &built.factors[0]);
        if direct.is_ok() {
            return direct;
        }
        if let Some(inner) = strip_outer_parens(t) {
            if let Ok(e) = atom.parse_coordinate(inner, &built.factors[0]) {
                return Ok(e);
            }
        }
        return direct;
    }
    let inner = strip_outer_parens(t)
        .ok_or_else(|| Error::CoordinateOutOfRange(format!("{t:?} is not a tuple of {} coordinates", atoms.len())))?;
    let parts = split_top_level(inner).ok_or_else(|| Error::CoordinateOutOfRange(format!("unbalanced {t:?}")))?;
    if parts.len() != atoms.len() {
        return Err(Error::ArityMismatch { expected: atoms.len(), found: parts.len() });
    }
    let coords = parts
        .iter()
        .zip(atoms)
        .zip(&built.factors)
        .map(|((part, atom), ring)| atom.parse_coordinate(part, ring))
        .collect::<Result<Vec<_>>>()?;
    Ok(built.product.embedding.element(&coords))
}

/// Canonical text of an element; parses back to the same index.
pub fn format_element(built: &BuiltRing, e: Elem) -> String {
    built.ring().label(e).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn built(s: &str) -> BuiltRing {
        parse_ring(s).unwrap().instantiate().unwrap()
    }

    #[test]
    fn parses_products() {
        assert_eq!(parse_ring("Z4 x GF(9)").unwrap().atoms, vec![Atom::Z(4), Atom::GF(3, 2)]);
        assert_eq!(parse_ring("Z2xZ2 x Z3").unwrap().atoms.len(), 3);
        assert_eq!(parse_ring(" GF( 2 ^ 3 ) ").unwrap().atoms, vec![Atom::GF(2, 3)]);
        assert_eq!(
            parse_ring("G9 x A4").unwrap().atoms,
            vec![Atom::P2(PresentedKind::G, 3), Atom::P2(PresentedKind::A, 2)]
        );
        assert_eq!(parse_ring("Z 1 2").unwrap().atoms, vec![Atom::Z(12)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_ring("C3(0)"), Err(Error::NonUnitalFactor(_))));
        assert!(matches!(parse_ring("Z2 x B4"), Err(Error::NonUnitalFactor(_))));
        assert!(matches!(parse_ring("J9"), Err(Error::NonUnitalFactor(_))));
        assert!(matches!(parse_ring("GF(6)"), Err(Error::NotPrime(6))));
        assert!(matches!(parse_ring("GF(4^2)"), Err(Error::NotPrime(4))));
        assert!(matches!(parse_ring("C4(0)"), Err(Error::NotPrime(4))));
        assert!(matches!(parse_ring("E4"), Err(Error::NonCommutative('E'))));
        assert!(matches!(parse_ring("Z4 y Z2"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_ring("Q5"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_ring("Z4 x"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_ring("D8"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ring("Z1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ring(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_ring("Z2048"), Err(Error::CapExceeded { .. })));
        assert!(matches!(parse_ring("Z32 x Z64"), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(parse_ring("Z4xGF(3^2)").unwrap().to_string(), "Z4 x GF(9)");
        assert_eq!(parse_ring("D4 x K9").unwrap().to_string(), "D4 x K9");
    }

    #[test]
    fn element_examples() {
        let r = built("Z4 x GF(4)");
        let e = r.parse_element("(2, t+1)").unwrap();
        assert_eq!(r.product.embedding.coords(e), vec![2, 3]);
        assert_eq!(r.format_element(e), "(2, t+1)");

        let z8 = built("Z8");
        assert_eq!(z8.parse_element("5").unwrap(), 5);
        assert_eq!(z8.parse_element("(5)").unwrap(), 5);

        let v = built("Z2 x Z3");
        let e = v.parse_element("(1, 0)").unwrap();
        assert_ne!(e, v.ring().zero());
        assert_eq!(v.product.embedding.coords(e), vec![1, 0]);
    }

    #[test]
    fn element_errors() {
        let r = built("Z4 x GF(4)");
        assert!(matches!(r.parse_element("(1, 2, 3)"), Err(Error::ArityMismatch { expected: 2, found: 3 })));
        assert!(matches!(r.parse_element("(4, 0)"), Err(Error::CoordinateOutOfRange(_))));
        assert!(matches!(r.parse_element("(0, t^2)"), Err(Error::CoordinateOutOfRange(_))));
        assert!(matches!(r.parse_element("(0, 2t)"), Err(Error::CoordinateOutOfRange(_))));
        assert!(r.parse_element("1").is_err());
        assert!(matches!(built("Z8").parse_element("8"), Err(Error::CoordinateOutOfRange(_))));
    }

    #[test]
    fn pair_coordinates() {
        let g = built("G9");
        let e = g.parse_element("2a+b").unwrap();
        assert_eq!(e, 2 + 3);
        assert_eq!(g.parse_element("2,1").unwrap(), e);
        assert_eq!(g.parse_element("(2,1)").unwrap(), e);
        assert_eq!(g.parse_element("b+2a").unwrap(), e);
        assert!(g.parse_element("3a").is_err());
        assert!(g.parse_element("a+a").is_err());
        let r = built("Z2 x D4");
        let e = r.parse_element("(1, (1,1))").unwrap();
        assert_eq!(r.format_element(e), "(1, a+b)");
    }

    #[test]
    fn polynomials_reduce_like_terms() {
        assert_eq!(parse_polynomial("t+t", 3, 2), Some(2 * 3));
        assert_eq!(parse_polynomial("1+t^2", 2, 3), Some(5));
        assert_eq!(parse_polynomial("t^", 2, 3), None);
    }

    #[test]
    fn every_label_round_trips() {
        for s in ["Z12", "GF(8)", "GF(9)", "D4", "G9", "K4", "A9", "Z2 x GF(4) x G4", "Z3 x D9", "Z8 x Z9"] {
            let r = built(s);
            for e in r.ring().elements() {
                let text = r.format_element(e);
                assert_eq!(r.parse_element(&text).unwrap(), e, "{s}: {text}");
            }
        }
    }

    fn atom_strategy() -> impl Strategy<Value = Atom> {
        prop_oneof![
            (2u64..40).prop_map(Atom::Z),
            prop::sample::select(vec![(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 2)])
                .prop_map(|(p, k)| Atom::GF(p, k)),
            (
                prop::sample::select(vec![PresentedKind::A, PresentedKind::D, PresentedKind::G, PresentedKind::K]),
                prop::sample::select(vec![2u64, 3])
            )
                .prop_map(|(k, p)| Atom::P2(k, p)),
        ]
    }

    proptest! {
        #[test]
        fn canonical_rendering_reparses(atoms in prop::collection::vec(atom_strategy(), 1..4)) {
            let expr = RingExpr { atoms };
            prop_assume!(expr.order() <= 1024);
            let reparsed = parse_ring(&expr.to_string()).unwrap();
            prop_assert_eq!(reparsed, expr);
        }

        #[test]
        fn sampled_elements_round_trip(atoms in prop::collection::vec(atom_strategy(), 1..3), seed in any::<u64>()) {
            let expr = RingExpr { atoms };
            prop_assume!(expr.order() <= 256);
            let r = expr.instantiate().unwrap();
            let e = (seed % r.ring().order() as u64) as usize;
            prop_assert_eq!(r.parse_element(&r.format_element(e)).unwrap(), e);
        }
    }
}
