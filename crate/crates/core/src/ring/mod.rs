//! Finite commutative rings stored as explicit operation tables.
//!
//! Elements are the indices `0..order`. Every table is total and validated
//! when it enters the library through [`RingTable::from_tables`]; the
//! constructors in [`construct`] produce tables whose axioms follow from the
//! arithmetic used to build them.

pub mod construct;
pub mod factor;
pub mod iso;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use construct::{
    make_cyclic_ring, make_galois_field, make_null_ring, make_presented_p2, make_product, PresentedKind, ProductRing,
};
pub use factor::{local_factorization, CoordinateEmbedding, LocalFactor, LocalFactorization};
pub use iso::{identify_small_ring, ring_isomorphic, RingClass, ISOMORPHISM_LIMIT};

/// Element of a [`RingTable`], identified by its index.
pub type Elem = usize;

/// Default cap on the number of ring elements.
pub const DEFAULT_MAX_ORDER: usize = 1024;

/// Environment variable overriding [`DEFAULT_MAX_ORDER`].
pub const MAX_ORDER_ENV: &str = "CAYRING_MAX_ORDER";

/// Current cap on ring orders (and Cayley graph vertex counts).
pub fn max_order() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 2)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

pub(crate) fn check_cap(order: usize) -> Result<()> {
    let cap = max_order();
    if order > cap {
        return Err(Error::CapExceeded { order, cap });
    }
    Ok(())
}

/// A sorted set of ring elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSubset(Vec<Elem>);

impl ElementSubset {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(e: Elem) -> Self {
        Self(vec![e])
    }

    pub fn full(order: usize) -> Self {
        Self((0..order).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.0
    }

    /// Position of `e` in the sorted member list.
    pub fn position(&self, e: Elem) -> Option<usize> {
        self.0.binary_search(&e).ok()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.iter().filter(|&e| !other.contains(e)).collect()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.iter().filter(|&e| other.contains(e)).collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.iter().chain(other.iter()).collect()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.iter().all(|e| !other.contains(e))
    }
}

impl FromIterator<Elem> for ElementSubset {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut v: Vec<Elem> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl From<Vec<Elem>> for ElementSubset {
    fn from(v: Vec<Elem>) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Display for ElementSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A finite commutative ring given by its addition and multiplication tables.
///
/// Immutable after construction. The unit group is computed lazily and cached.
pub struct RingTable {
    order: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    zero: Elem,
    unity: Option<Elem>,
    labels: Vec<String>,
    units: OnceLock<ElementSubset>,
}

impl RingTable {
    /// Builds a ring from row-major `order × order` tables, checking every
    /// ring axiom exhaustively. The additive identity and the unity (if any)
    /// are located by scanning the tables.
    pub fn from_tables(add: Vec<Elem>, mul: Vec<Elem>, labels: Vec<String>) -> Result<Self> {
        let ring = Self::from_parts(add, mul, labels)?;
        ring.validate()?;
        Ok(ring)
    }

    /// Shape checks and identity detection only. Callers guarantee the axioms.
    pub(crate) fn from_parts(add: Vec<Elem>, mul: Vec<Elem>, labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::MalformedTable("a ring needs at least one element".into()));
        }
        check_cap(n)?;
        if add.len() != n * n || mul.len() != n * n {
            return Err(Error::MalformedTable(format!(
                "expected {} table entries, found {} (add) and {} (mul)",
                n * n,
                add.len(),
                mul.len()
            )));
        }
        if let Some(&bad) = add.iter().chain(mul.iter()).find(|&&v| v >= n) {
            return Err(Error::MalformedTable(format!("entry {bad} out of range")));
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| add[z * n + a] == a && add[a * n + z] == a))
            .ok_or_else(|| Error::AxiomViolation("no additive identity".into()))?;
        let mut neg = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| add[a * n + b] == zero) {
                Some(b) => neg[a] = b,
                None => return Err(Error::AxiomViolation(format!("element {a} has no additive inverse"))),
            }
        }
        let unity = (0..n).find(|&u| (0..n).all(|a| mul[u * n + a] == a && mul[a * n + u] == a));
        Ok(Self { order: n, add, mul, neg, zero, unity, labels, units: OnceLock::new() })
    }

    /// Exhaustive O(n³) check of the commutative ring axioms.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.add(a, self.neg[a]) != self.zero {
                return Err(Error::AxiomViolation(format!("{a} + (-{a}) != 0")));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(Error::AxiomViolation(format!("addition not commutative at ({a},{b})")));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::AxiomViolation(format!("multiplication not commutative at ({a},{b})")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab_sum = self.add(a, b);
                let ab_prod = self.mul(a, b);
                for c in 0..n {
                    if self.add(ab_sum, c) != self.add(a, self.add(b, c)) {
                        return Err(Error::AxiomViolation(format!("addition not associative at ({a},{b},{c})")));
                    }
                    if self.mul(ab_prod, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::AxiomViolation(format!("multiplication not associative at ({a},{b},{c})")));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(ab_prod, self.mul(a, c)) {
                        return Err(Error::AxiomViolation(format!("distributivity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn unity(&self) -> Option<Elem> {
        self.unity
    }

    pub fn is_unital(&self) -> bool {
        self.unity.is_some()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b])
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn add_table(&self) -> &[Elem] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Elem] {
        &self.mul
    }

    pub(crate) fn check_element(&self, e: Elem) -> Result<()> {
        if e >= self.order {
            return Err(Error::ElementOutOfRange { index: e, order: self.order });
        }
        Ok(())
    }

    /// Same tables and identities, ignoring labels.
    pub fn same_tables(&self, other: &Self) -> bool {
        self.order == other.order
            && self.zero == other.zero
            && self.unity == other.unity
            && self.add == other.add
            && self.mul == other.mul
    }

    /// Hash of the operation tables under the current indexing.
    pub fn table_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.order.hash(&mut h);
        self.add.hash(&mut h);
        self.mul.hash(&mut h);
        h.finish()
    }

    /// Additive order of `e`.
    pub fn additive_order(&self, e: Elem) -> usize {
        let mut acc = e;
        let mut k = 1;
        while acc != self.zero {
            acc = self.add(acc, e);
            k += 1;
        }
        k
    }

    /// The unit group `{u : uv = 1 for some v}`.
    pub fn units(&self) -> Result<&ElementSubset> {
        let one = self.unity.ok_or(Error::NonUnital)?;
        Ok(self
            .units
            .get_or_init(|| self.elements().filter(|&u| self.elements().any(|v| self.mul(u, v) == one)).collect()))
    }

    pub fn is_unit(&self, e: Elem) -> Result<bool> {
        Ok(self.units()?.contains(e))
    }

    /// Non-units of a unital ring.
    pub fn non_units(&self) -> Result<ElementSubset> {
        let units = self.units()?;
        Ok(self.elements().filter(|&e| !units.contains(e)).collect())
    }

    pub fn is_zero_divisor(&self, e: Elem) -> bool {
        e != self.zero && self.elements().any(|r| r != self.zero && self.mul(e, r) == self.zero)
    }

    /// `Some(M)` with `M` the unique maximal ideal when the ring is local.
    ///
    /// A finite unital ring is local exactly when its non-units are closed
    /// under addition.
    pub fn is_local(&self) -> Result<Option<ElementSubset>> {
        let m = self.non_units()?;
        for a in m.iter() {
            for b in m.iter() {
                if !m.contains(self.add(a, b)) {
                    return Ok(None);
                }
            }
        }
        Ok(Some(m))
    }

    pub fn is_field(&self) -> bool {
        match self.units() {
            Ok(u) => self.order > 1 && u.len() == self.order - 1,
            Err(_) => false,
        }
    }

    /// `{x·r : r ∈ subset}`.
    pub fn scale(&self, x: Elem, subset: &ElementSubset) -> ElementSubset {
        subset.iter().map(|r| self.mul(x, r)).collect()
    }

    /// `{x·r : r ∈ R}`.
    pub fn principal_ideal(&self, x: Elem) -> ElementSubset {
        self.elements().map(|r| self.mul(x, r)).collect()
    }

    pub fn annihilator(&self, x: Elem) -> ElementSubset {
        self.elements().filter(|&r| self.mul(x, r) == self.zero).collect()
    }

    pub fn is_additive_subgroup(&self, s: &ElementSubset) -> bool {
        s.contains(self.zero) && s.iter().all(|a| s.iter().all(|b| s.contains(self.sub(a, b))))
    }

    /// Additive subgroup that also absorbs multiplication by every element.
    pub fn is_ideal(&self, s: &ElementSubset) -> bool {
        self.is_additive_subgroup(s) && s.iter().all(|a| self.elements().all(|r| s.contains(self.mul(a, r))))
    }

    /// The subring carried by `subset`, as a standalone table.
    pub fn restrict(&self, subset: &ElementSubset) -> Result<Subring> {
        if subset.is_empty() || !subset.contains(self.zero) {
            return Err(Error::NotClosed("subset must contain zero".into()));
        }
        let k = subset.len();
        let pos = |e: Elem| subset.position(e);
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for a in subset.iter() {
            for b in subset.iter() {
                let s = pos(self.add(a, b)).ok_or_else(|| Error::NotClosed(format!("{a} + {b} leaves the subset")))?;
                let p = pos(self.mul(a, b)).ok_or_else(|| Error::NotClosed(format!("{a} * {b} leaves the subset")))?;
                add.push(s);
                mul.push(p);
            }
        }
        if subset.iter().any(|a| !subset.contains(self.neg(a))) {
            return Err(Error::NotClosed("subset is not closed under negation".into()));
        }
        let labels = subset.iter().map(|e| self.labels[e].clone()).collect();
        let ring = Self::from_parts(add, mul, labels)?;
        Ok(Subring { ring, inclusion: subset.as_slice().to_vec() })
    }
}

impl Clone for RingTable {
    fn clone(&self) -> Self {
        Self {
            order: self.order,
            add: self.add.clone(),
            mul: self.mul.clone(),
            neg: self.neg.clone(),
            zero: self.zero,
            unity: self.unity,
            labels: self.labels.clone(),
            units: self.units.clone(),
        }
    }
}

impl PartialEq for RingTable {
    fn eq(&self, other: &Self) -> bool {
        self.same_tables(other) && self.labels == other.labels
    }
}

impl Eq for RingTable {}

impl fmt::Debug for RingTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingTable")
            .field("order", &self.order)
            .field("zero", &self.zero)
            .field("unity", &self.unity)
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

/// A subring re-indexed as a standalone ring, with its inclusion into the parent.
#[derive(Clone, Debug)]
pub struct Subring {
    pub ring: RingTable,
    /// `inclusion[i]` is the parent index of local element `i`.
    pub inclusion: Vec<Elem>,
}

impl Subring {
    /// Translates a subset of parent indices into local indices.
    pub fn pull_back(&self, parent: &ElementSubset) -> Result<ElementSubset> {
        parent
            .iter()
            .map(|e| {
                self.inclusion
                    .binary_search(&e)
                    .map_err(|_| Error::NotClosed(format!("element {e} is outside the subring")))
            })
            .collect()
    }
}

/// Quotient of `carrier` by `ideal`; each coset is labelled by its smallest
/// representative.
pub fn quotient_ring(carrier: &RingTable, ideal: &ElementSubset) -> Result<RingTable> {
    if !carrier.is_additive_subgroup(ideal) {
        return Err(Error::NotAnIdeal("not an additive subgroup".into()));
    }
    if let Some((a, r)) = ideal
        .iter()
        .flat_map(|a| carrier.elements().map(move |r| (a, r)))
        .find(|&(a, r)| !ideal.contains(carrier.mul(a, r)))
    {
        return Err(Error::NotAnIdeal(format!("{a} * {r} leaves the ideal")));
    }
    let n = carrier.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for e in carrier.elements() {
        if coset_of[e] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(e);
        for i in ideal.iter() {
            coset_of[carrier.add(e, i)] = id;
        }
    }
    let k = reps.len();
    let mut add = Vec::with_capacity(k * k);
    let mut mul = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            add.push(coset_of[carrier.add(a, b)]);
            mul.push(coset_of[carrier.mul(a, b)]);
        }
    }
    let labels = reps.iter().map(|&r| carrier.label(r).to_string()).collect();
    RingTable::from_parts(add, mul, labels)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, k))` when `n = p^k` for a prime `p`.
pub(crate) fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}
