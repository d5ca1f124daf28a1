//! Brute-force ring isomorphism and identification of small rings.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::construct::{make_presented_p2, PresentedKind};
use super::{is_prime, prime_power, Elem, RingTable};
use crate::error::{Error, Result};

/// Largest order accepted by [`ring_isomorphic`].
pub const ISOMORPHISM_LIMIT: usize = 16;

/// Per-element invariants any isomorphism must preserve.
fn fingerprint(r: &RingTable, e: Elem) -> (usize, usize, bool, bool, usize, bool) {
    let sq = r.mul(e, e);
    (
        r.additive_order(e),
        r.additive_order(sq),
        sq == e,
        sq == r.zero(),
        r.elements().filter(|&y| r.mul(e, y) == r.zero()).count(),
        Some(e) == r.unity(),
    )
}

struct Search<'a> {
    r1: &'a RingTable,
    r2: &'a RingTable,
    fp1: Vec<(usize, usize, bool, bool, usize, bool)>,
    fp2: Vec<(usize, usize, bool, bool, usize, bool)>,
}

impl Search<'_> {
    fn assign(&self, map: &mut [Option<Elem>], used: &mut [bool], a: Elem, b: Elem) -> bool {
        if self.fp1[a] != self.fp2[b] {
            return false;
        }
        match map[a] {
            Some(existing) => return existing == b,
            None if used[b] => return false,
            None => {}
        }
        map[a] = Some(b);
        used[b] = true;
        true
    }

    /// Forces images of sums and products of already-mapped elements.
    fn propagate(&self, map: &mut [Option<Elem>], used: &mut [bool]) -> bool {
        loop {
            let mut changed = false;
            let assigned: Vec<(Elem, Elem)> = map.iter().enumerate().filter_map(|(i, m)| m.map(|j| (i, j))).collect();
            for &(a, fa) in &assigned {
                for &(b, fb) in &assigned {
                    for (s, t) in [(self.r1.add(a, b), self.r2.add(fa, fb)), (self.r1.mul(a, b), self.r2.mul(fa, fb))] {
                        let fresh = map[s].is_none();
                        if !self.assign(map, used, s, t) {
                            return false;
                        }
                        changed |= fresh;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn extend(&self, map: &mut Vec<Option<Elem>>, used: &mut Vec<bool>) -> bool {
        let Some(a) = map.iter().position(Option::is_none) else {
            return true;
        };
        for b in 0..self.r2.order() {
            if used[b] || self.fp1[a] != self.fp2[b] {
                continue;
            }
            let (mut m, mut u) = (map.clone(), used.clone());
            if self.assign(&mut m, &mut u, a, b) && self.propagate(&mut m, &mut u) && self.extend(&mut m, &mut u) {
                *map = m;
                *used = u;
                return true;
            }
        }
        false
    }
}

/// Whether some bijection preserves both tables. Orders up to
/// [`ISOMORPHISM_LIMIT`].
pub fn ring_isomorphic(r1: &RingTable, r2: &RingTable) -> Result<bool> {
    for r in [r1, r2] {
        if r.order() > ISOMORPHISM_LIMIT {
            return Err(Error::IsomorphismBound { order: r.order(), limit: ISOMORPHISM_LIMIT });
        }
    }
    if r1.order() != r2.order() || r1.is_unital() != r2.is_unital() {
        return Ok(false);
    }
    let search = Search {
        r1,
        r2,
        fp1: r1.elements().map(|e| fingerprint(r1, e)).collect(),
        fp2: r2.elements().map(|e| fingerprint(r2, e)).collect(),
    };
    let mut s1 = search.fp1.clone();
    let mut s2 = search.fp2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(false);
    }
    let mut map = vec![None; r1.order()];
    let mut used = vec![false; r2.order()];
    if !search.assign(&mut map, &mut used, r1.zero(), r2.zero()) {
        return Ok(false);
    }
    Ok(search.propagate(&mut map, &mut used) && search.extend(&mut map, &mut used))
}

/// Isomorphism class of a small ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingClass {
    /// Z_n
    Cyclic(usize),
    /// GF(q), q not prime
    Field(usize),
    /// C_p(0)
    Null(usize),
    /// Presented ring of order p², stored with p.
    Presented(PresentedKind, usize),
    Unidentified,
}

impl RingClass {
    /// Conventional name: `Z4` for A4, `Z2 x Z2` for D4, `GF(9)` for K9.
    pub fn common_name(&self) -> String {
        match *self {
            RingClass::Presented(PresentedKind::A, p) => format!("Z{}", p * p),
            RingClass::Presented(PresentedKind::D, p) => format!("Z{p} x Z{p}"),
            RingClass::Presented(PresentedKind::K, p) => format!("GF({})", p * p),
            RingClass::Presented(PresentedKind::C, p) => format!("C{}(0)", p * p),
            RingClass::Presented(PresentedKind::H, p) => format!("Z{p} x C{p}(0)"),
            RingClass::Presented(PresentedKind::J, p) => format!("C{p}(0) x C{p}(0)"),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingClass::Cyclic(n) => write!(f, "Z{n}"),
            RingClass::Field(q) => write!(f, "GF({q})"),
            RingClass::Null(p) => write!(f, "C{p}(0)"),
            RingClass::Presented(kind, p) => write!(f, "{kind}{}", p * p),
            RingClass::Unidentified => write!(f, "unidentified"),
        }
    }
}

/// Names a ring of prime order, of order p² with p ≤ 3, or a field / residue
/// ring of any order. Everything else is [`RingClass::Unidentified`].
pub fn identify_small_ring(r: &RingTable) -> RingClass {
    let n = r.order();
    if is_prime(n as u64) {
        return if r.is_unital() { RingClass::Cyclic(n) } else { RingClass::Null(n) };
    }
    if let Some((p, 2)) = prime_power(n as u64) {
        if n <= ISOMORPHISM_LIMIT {
            let p = p as usize;
            for kind in PresentedKind::COMMUTATIVE {
                let candidate = make_presented_p2(kind, p as u64).expect("catalog ring");
                if ring_isomorphic(r, &candidate).unwrap_or(false) {
                    return RingClass::Presented(kind, p);
                }
            }
            return RingClass::Unidentified;
        }
    }
    if r.is_field() {
        return RingClass::Field(n);
    }
    if let Some(one) = r.unity() {
        if r.additive_order(one) == n {
            return RingClass::Cyclic(n);
        }
    }
    RingClass::Unidentified
}
