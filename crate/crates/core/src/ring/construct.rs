//! Constructors for the rings used throughout the crate: residue rings,
//! Galois fields, null rings, the commutative rings of order p², and finite
//! direct products.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::factor::CoordinateEmbedding;
use super::{check_cap, is_prime, Elem, RingTable};
use crate::error::{Error, Result};

fn tables(
    n: usize,
    add: impl Fn(usize, usize) -> usize,
    mul: impl Fn(usize, usize) -> usize,
) -> (Vec<Elem>, Vec<Elem>) {
    let mut a = Vec::with_capacity(n * n);
    let mut m = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(add(i, j));
            m.push(mul(i, j));
        }
    }
    (a, m)
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// The residue ring Z_n.
pub fn make_cyclic_ring(n: usize) -> Result<RingTable> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("Z_n needs n >= 2, got {n}")));
    }
    check_cap(n)?;
    let (add, mul) = tables(n, |a, b| (a + b) % n, |a, b| (a * b) % n);
    RingTable::from_parts(add, mul, (0..n).map(|i| i.to_string()).collect())
}

/// Polynomials over Z_p of degree < k, encoded little-endian in base p.
fn decode(mut v: usize, p: usize, k: usize) -> Vec<usize> {
    let mut c = Vec::with_capacity(k);
    for _ in 0..k {
        c.push(v % p);
        v /= p;
    }
    c
}

fn encode(c: &[usize], p: usize) -> usize {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `num` modulo the monic `den` over Z_p (coefficients little-endian).
fn poly_rem(num: &[usize], den: &[usize], p: usize) -> Vec<usize> {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    while r.len() > d {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = r.len() - d;
        for (i, &c) in den[..d].iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
        }
    }
    r
}

fn is_irreducible(f: &[usize], p: usize) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = decode(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `k` over Z_p,
/// comparing coefficients from the highest non-leading degree down.
pub fn smallest_irreducible(p: usize, k: usize) -> Vec<usize> {
    for low in 0..p.pow(k as u32) {
        let mut f = decode(low, p, k);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over a prime field")
}

fn poly_label(c: &[usize]) -> String {
    let mut terms = Vec::new();
    for (deg, &coef) in c.iter().enumerate().rev() {
        if coef == 0 {
            continue;
        }
        let var = match deg {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{deg}"),
        };
        terms.push(match (coef, deg) {
            (_, 0) => coef.to_string(),
            (1, _) => var,
            _ => format!("{coef}{var}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// The field GF(p^k) as Z_p[t] modulo the smallest monic irreducible.
///
/// Element `i` is the polynomial whose base-`p` digits (least significant
/// first) are its coefficients; labels read like `2t^2+t+1`.
pub fn make_galois_field(p: u64, k: u32) -> Result<RingTable> {
    require_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidParameter("GF(p^k) needs k >= 1".into()));
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q <= usize::MAX as u64)
        .ok_or_else(|| Error::InvalidParameter("field order overflows".into()))? as usize;
    check_cap(q)?;
    let (p, k) = (p as usize, k as usize);
    let modulus = smallest_irreducible(p, k);
    let polys: Vec<Vec<usize>> = (0..q).map(|v| decode(v, p, k)).collect();
    let add = |a: usize, b: usize| {
        let s: Vec<usize> = polys[a].iter().zip(&polys[b]).map(|(x, y)| (x + y) % p).collect();
        encode(&s, p)
    };
    let mul = |a: usize, b: usize| {
        let mut prod = vec![0; 2 * k - 1];
        for (i, &x) in polys[a].iter().enumerate() {
            for (j, &y) in polys[b].iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        encode(&poly_rem(&prod, &modulus, p), p)
    };
    let (a, m) = tables(q, add, mul);
    RingTable::from_parts(a, m, polys.iter().map(|c| poly_label(c)).collect())
}

/// C_p(0): cyclic additive group of order p with every product zero.
pub fn make_null_ring(p: u64) -> Result<RingTable> {
    require_prime(p)?;
    let n = p as usize;
    check_cap(n)?;
    let (add, mul) = tables(n, |a, b| (a + b) % n, |_, _| 0);
    RingTable::from_parts(add, mul, (0..n).map(|i| i.to_string()).collect())
}

/// The eleven presentations of rings of order p²; E and F are non-commutative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PresentedKind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
}

impl PresentedKind {
    /// The nine commutative kinds.
    pub const COMMUTATIVE: [PresentedKind; 9] = [
        PresentedKind::A,
        PresentedKind::B,
        PresentedKind::C,
        PresentedKind::D,
        PresentedKind::G,
        PresentedKind::H,
        PresentedKind::I,
        PresentedKind::J,
        PresentedKind::K,
    ];

    pub fn letter(self) -> char {
        match self {
            PresentedKind::A => 'A',
            PresentedKind::B => 'B',
            PresentedKind::C => 'C',
            PresentedKind::D => 'D',
            PresentedKind::E => 'E',
            PresentedKind::F => 'F',
            PresentedKind::G => 'G',
            PresentedKind::H => 'H',
            PresentedKind::I => 'I',
            PresentedKind::J => 'J',
            PresentedKind::K => 'K',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'A' => PresentedKind::A,
            'B' => PresentedKind::B,
            'C' => PresentedKind::C,
            'D' => PresentedKind::D,
            'E' => PresentedKind::E,
            'F' => PresentedKind::F,
            'G' => PresentedKind::G,
            'H' => PresentedKind::H,
            'I' => PresentedKind::I,
            'J' => PresentedKind::J,
            'K' => PresentedKind::K,
            _ => return None,
        })
    }

    pub fn is_commutative(self) -> bool {
        !matches!(self, PresentedKind::E | PresentedKind::F)
    }

    /// Whether the presented ring has a multiplicative identity.
    pub fn is_unital(self) -> bool {
        matches!(self, PresentedKind::A | PresentedKind::D | PresentedKind::G | PresentedKind::K)
    }

    /// Single-generator kinds have elements `m·a`; the others `m·a + n·b`.
    pub fn is_cyclic(self) -> bool {
        matches!(self, PresentedKind::A | PresentedKind::B | PresentedKind::C)
    }
}

impl fmt::Display for PresentedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Label of `m·a + n·b` over Z_p, e.g. `2a+b`.
pub(crate) fn pair_label(m: usize, n: usize) -> String {
    let term = |c: usize, g: &str| match c {
        0 => None,
        1 => Some(g.to_string()),
        _ => Some(format!("{c}{g}")),
    };
    match (term(m, "a"), term(n, "b")) {
        (None, None) => "0".into(),
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) => format!("{x}+{y}"),
    }
}

/// Realizes one of the commutative rings of order p² from its presentation.
///
/// Single-generator kinds (A, B, C) index element `m·a` as `m`; two-generator
/// kinds index `m·a + n·b` as `m + p·n`. K is the Galois field GF(p²).
pub fn make_presented_p2(kind: PresentedKind, p: u64) -> Result<RingTable> {
    if !kind.is_commutative() {
        return Err(Error::NonCommutative(kind.letter()));
    }
    require_prime(p)?;
    let q = (p as usize).checked_mul(p as usize).ok_or_else(|| Error::InvalidParameter("p² overflows".into()))?;
    check_cap(q)?;
    if kind == PresentedKind::K {
        return make_galois_field(p, 2);
    }
    let p = p as usize;
    if kind.is_cyclic() {
        let mul: Box<dyn Fn(usize, usize) -> usize> = match kind {
            // a² = a: Z_{p²}
            PresentedKind::A => Box::new(move |m, n| (m * n) % q),
            // a² = pa
            PresentedKind::B => Box::new(move |m, n| (m * n * p) % q),
            // a² = 0
            _ => Box::new(|_, _| 0),
        };
        let (add, mul) = tables(q, |m, n| (m + n) % q, mul);
        return RingTable::from_parts(add, mul, (0..q).map(|i| i.to_string()).collect());
    }
    let split = |e: usize| (e % p, e / p);
    let join = |m: usize, n: usize| (m % p) + p * (n % p);
    // (m1 a + n1 b)(m2 a + n2 b) expanded with the relations for a², ab, b².
    let product = move |(m1, n1): (usize, usize), (m2, n2): (usize, usize)| -> (usize, usize) {
        match kind {
            // a² = a, b² = b, ab = 0: Z_p ⊕ Z_p
            PresentedKind::D => (m1 * m2, n1 * n2),
            // a² = 0, b² = b, ab = a
            PresentedKind::G => (m1 * n2 + n1 * m2, n1 * n2),
            // a² = 0, b² = b, ab = 0: Z_p ⊕ C_p(0)
            PresentedKind::H => (0, n1 * n2),
            // a² = b, ab = 0 (so b² = 0)
            PresentedKind::I => (0, m1 * m2),
            // a² = b² = ab = 0
            _ => (0, 0),
        }
    };
    let (add, mul) = tables(
        q,
        |x, y| {
            let ((m1, n1), (m2, n2)) = (split(x), split(y));
            join(m1 + m2, n1 + n2)
        },
        |x, y| {
            let (m, n) = product(split(x), split(y));
            join(m, n)
        },
    );
    let labels = (0..q).map(|e| pair_label(e % p, e / p)).collect();
    RingTable::from_parts(add, mul, labels)
}

/// A direct product together with its coordinate map.
#[derive(Clone, Debug)]
pub struct ProductRing {
    pub ring: RingTable,
    pub embedding: CoordinateEmbedding,
}

/// Componentwise product `R_1 × ⋯ × R_s` (1 ≤ s ≤ 6).
///
/// Element indices are mixed-radix codes with the first factor most
/// significant, which is also the row order of a Kronecker product. A single
/// factor is returned unchanged.
pub fn make_product(factors: &[&RingTable]) -> Result<ProductRing> {
    if factors.is_empty() || factors.len() > 6 {
        return Err(Error::InvalidParameter(format!("a product needs between 1 and 6 factors, got {}", factors.len())));
    }
    let radices: Vec<usize> = factors.iter().map(|f| f.order()).collect();
    let order = radices
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
        .ok_or_else(|| Error::InvalidParameter("product order overflows".into()))?;
    check_cap(order)?;
    let embedding = CoordinateEmbedding::identity(radices);
    if factors.len() == 1 {
        return Ok(ProductRing { ring: factors[0].clone(), embedding });
    }
    let coords: Vec<Vec<Elem>> = (0..order).map(|e| embedding.coords(e)).collect();
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    let mut buf = vec![0; factors.len()];
    for a in 0..order {
        for b in 0..order {
            for (i, f) in factors.iter().enumerate() {
                buf[i] = f.add(coords[a][i], coords[b][i]);
            }
            add.push(embedding.element(&buf));
            for (i, f) in factors.iter().enumerate() {
                buf[i] = f.mul(coords[a][i], coords[b][i]);
            }
            mul.push(embedding.element(&buf));
        }
    }
    let labels = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().zip(factors).map(|(&e, f)| f.label(e)).collect();
            format!("({})", parts.join(", "))
        })
        .collect();
    let ring = RingTable::from_parts(add, mul, labels)?;
    Ok(ProductRing { ring, embedding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ring_isomorphic;

    #[test]
    fn cyclic_ring_basics() {
        let z2 = make_cyclic_ring(2).unwrap();
        assert_eq!((z2.zero(), z2.unity()), (0, Some(1)));
        assert_eq!(z2.add(1, 1), 0);
        assert!(make_cyclic_ring(1).is_err());
        assert!(matches!(make_cyclic_ring(100_000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn galois_field_modulus_is_smallest_irreducible() {
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        // t² + 1 is irreducible over Z_3
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn gf4_root_has_order_three() {
        let f = make_galois_field(2, 2).unwrap();
        let t = f.element_by_label("t").unwrap();
        let one = f.unity().unwrap();
        let t2 = f.mul(t, t);
        assert_eq!(f.label(t2), "t+1");
        assert_ne!(t2, one);
        assert_eq!(f.mul(t2, t), one);
        assert!(f.is_field());
    }

    #[test]
    fn prime_field_matches_cyclic_ring() {
        let f = make_galois_field(3, 1).unwrap();
        assert!(f.same_tables(&make_cyclic_ring(3).unwrap()));
        assert!(matches!(make_galois_field(4, 2), Err(Error::NotPrime(4))));
        assert!(make_galois_field(2, 0).is_err());
        assert!(matches!(make_galois_field(2, 11), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn galois_fields_are_fields() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = make_galois_field(p, k).unwrap();
            f.validate().unwrap();
            assert!(f.is_field(), "GF({p}^{k})");
        }
    }

    #[test]
    fn null_ring() {
        let c2 = make_null_ring(2).unwrap();
        assert_eq!(c2.mul(1, 1), 0);
        let c3 = make_null_ring(3).unwrap();
        assert!(c3.elements().all(|a| c3.elements().all(|b| c3.mul(a, b) == 0)));
        assert!(make_null_ring(5).unwrap().unity().is_none());
        assert!(matches!(make_null_ring(6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn presented_b4_squares_to_pa() {
        let b = make_presented_p2(PresentedKind::B, 2).unwrap();
        assert_eq!(b.mul(1, 1), 2);
        assert!(b.unity().is_none());
    }

    #[test]
    fn presented_g9_has_b_as_unity() {
        let g = make_presented_p2(PresentedKind::G, 3).unwrap();
        let b = g.element_by_label("b").unwrap();
        assert!(g.elements().all(|e| g.mul(b, e) == e));
        assert_eq!(g.unity(), Some(b));
    }

    #[test]
    fn presented_c4_is_null_and_cyclic() {
        let c = make_presented_p2(PresentedKind::C, 2).unwrap();
        assert!(c.elements().all(|a| c.elements().all(|b| c.mul(a, b) == 0)));
        assert_eq!(c.additive_order(1), 4);
    }

    #[test]
    fn presented_rings_validate() {
        for p in [2, 3, 5] {
            for kind in PresentedKind::COMMUTATIVE {
                let r = make_presented_p2(kind, p).unwrap();
                r.validate().unwrap();
                assert_eq!(r.is_unital(), kind.is_unital(), "{kind}{}", p * p);
            }
        }
    }

    #[test]
    fn presented_rejects_non_commutative() {
        assert_eq!(make_presented_p2(PresentedKind::E, 2).unwrap_err(), Error::NonCommutative('E'));
        assert_eq!(make_presented_p2(PresentedKind::F, 3).unwrap_err(), Error::NonCommutative('F'));
        assert!(matches!(make_presented_p2(PresentedKind::A, 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn products() {
        let z2 = make_cyclic_ring(2).unwrap();
        let z3 = make_cyclic_ring(3).unwrap();
        let z6 = make_product(&[&z2, &z3]).unwrap();
        z6.ring.validate().unwrap();
        assert!(ring_isomorphic(&z6.ring, &make_cyclic_ring(6).unwrap()).unwrap());
        assert_eq!(z6.ring.label(5), "(1, 2)");

        let z4 = make_cyclic_ring(4).unwrap();
        assert!(make_product(&[&z4]).unwrap().ring.same_tables(&z4));

        let v = make_product(&[&z2, &z2]).unwrap().ring;
        assert_eq!(v.units().unwrap().len(), 1);
        let zero_or_zd = v.elements().filter(|&e| e == v.zero() || v.is_zero_divisor(e)).count();
        assert_eq!(zero_or_zd, 3);

        let c = make_null_ring(2).unwrap();
        assert!(make_product(&[&z2, &c]).unwrap().ring.unity().is_none());
        assert!(make_product(&[]).is_err());
    }
}
