//! Decomposition of a unital ring into local factors via primitive idempotents.

use std::cmp::Ordering;

use super::{Elem, ElementSubset, RingTable};
use crate::error::{Error, Result};

/// Bijection between ring elements and coordinate tuples.
///
/// Tuples are encoded as mixed-radix codes (first coordinate most
/// significant). `forward[e]` is the code of element `e`, `backward` its
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateEmbedding {
    radices: Vec<usize>,
    forward: Vec<usize>,
    backward: Vec<Elem>,
}

impl CoordinateEmbedding {
    /// The embedding of a product ring whose indices already are codes.
    pub fn identity(radices: Vec<usize>) -> Self {
        let n: usize = radices.iter().product();
        let forward: Vec<usize> = (0..n).collect();
        Self { radices, backward: forward.clone(), forward }
    }

    fn from_forward(radices: Vec<usize>, forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut backward = vec![usize::MAX; n];
        for (e, &code) in forward.iter().enumerate() {
            if code >= n || backward[code] != usize::MAX {
                return Err(Error::AxiomViolation("coordinate map is not a bijection".into()));
            }
            backward[code] = e;
        }
        Ok(Self { radices, forward, backward })
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    pub fn encode(&self, coords: &[Elem]) -> usize {
        coords.iter().zip(&self.radices).fold(0, |acc, (&c, &r)| acc * r + c)
    }

    pub fn decode(&self, mut code: usize) -> Vec<Elem> {
        let mut out = vec![0; self.radices.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = code % r;
            code /= r;
        }
        out
    }

    /// Coordinates of element `e`.
    pub fn coords(&self, e: Elem) -> Vec<Elem> {
        self.decode(self.forward[e])
    }

    /// Element with the given coordinates.
    pub fn element(&self, coords: &[Elem]) -> Elem {
        self.backward[self.encode(coords)]
    }

    /// Mixed-radix code of element `e`.
    pub fn code(&self, e: Elem) -> usize {
        self.forward[e]
    }
}

/// One local factor `eR` of a ring, with `e` a primitive idempotent.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub ring: RingTable,
    pub maximal_ideal: ElementSubset,
    /// The primitive idempotent of the parent that is the unity of this factor.
    pub idempotent: Elem,
    /// `members[i]` is the parent element corresponding to factor element `i`.
    pub members: Vec<Elem>,
}

impl LocalFactor {
    pub fn order(&self) -> usize {
        self.ring.order()
    }

    pub fn maximal_order(&self) -> usize {
        self.maximal_ideal.len()
    }

    /// |R_i| / m_i, the order of the residue field.
    pub fn residue_order(&self) -> usize {
        self.order() / self.maximal_order()
    }
}

#[derive(Clone, Debug)]
pub struct LocalFactorization {
    pub factors: Vec<LocalFactor>,
    pub embedding: CoordinateEmbedding,
}

impl LocalFactorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Coordinates of a parent element in the factor rings.
    pub fn coords(&self, e: Elem) -> Vec<Elem> {
        self.embedding.coords(e)
    }
}

fn factor_order(a: &LocalFactor, b: &LocalFactor) -> Ordering {
    // |R_a|/m_a vs |R_b|/m_b without division
    (a.order() * b.maximal_order())
        .cmp(&(b.order() * a.maximal_order()))
        .then(a.order().cmp(&b.order()))
        .then(a.ring.table_hash().cmp(&b.ring.table_hash()))
}

/// Splits a unital ring into local rings `e_1R × ⋯ × e_sR`.
///
/// The primitive idempotents are the minimal nonzero idempotents under
/// `f ≤ e ⟺ fe = f`. Factors are ordered by `|R_i|/m_i`, then order, then
/// table hash.
pub fn local_factorization(ring: &RingTable) -> Result<LocalFactorization> {
    ring.unity().ok_or(Error::NonUnital)?;
    let zero = ring.zero();
    let idempotents: Vec<Elem> = ring.elements().filter(|&e| e != zero && ring.mul(e, e) == e).collect();
    let primitive: Vec<Elem> =
        idempotents.iter().copied().filter(|&e| !idempotents.iter().any(|&f| f != e && ring.mul(f, e) == f)).collect();

    let mut factors = Vec::with_capacity(primitive.len());
    for &e in &primitive {
        let carrier: ElementSubset = ring.elements().map(|r| ring.mul(e, r)).collect();
        let sub = ring.restrict(&carrier)?;
        let maximal_ideal = sub.ring.is_local()?.ok_or(Error::NotLocal)?;
        factors.push(LocalFactor { ring: sub.ring, maximal_ideal, idempotent: e, members: sub.inclusion });
    }
    factors.sort_by(factor_order);

    let radices: Vec<usize> = factors.iter().map(LocalFactor::order).collect();
    if radices.iter().product::<usize>() != ring.order() {
        return Err(Error::AxiomViolation("factor orders do not multiply to the ring order".into()));
    }
    let skeleton = CoordinateEmbedding::identity(radices.clone());
    let forward = ring
        .elements()
        .map(|r| {
            let coords: Vec<Elem> = factors
                .iter()
                .map(|f| {
                    let image = ring.mul(f.idempotent, r);
                    f.members.binary_search(&image).expect("e·r lies in eR")
                })
                .collect();
            skeleton.encode(&coords)
        })
        .collect();
    let embedding = CoordinateEmbedding::from_forward(radices, forward)?;
    Ok(LocalFactorization { factors, embedding })
}
