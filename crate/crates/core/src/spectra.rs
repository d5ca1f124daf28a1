//! Closed-form spectra and energies of `Cay(R, xR*)` and its complement,
//! plus a numeric oracle to check them against.
//!
//! All closed forms are evaluated in exact rational arithmetic; floating point
//! only appears inside [`oracle_spectrum`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cayley::{components, AdjacencyMatrix};
use crate::eigen::{jacobi_eigenvalues, JacobiConfig};
use crate::error::{Error, Result};
use crate::ideal::{coordinate_profile, CoordinateData, GeneratorContext};
use crate::ring::{local_factorization, Elem, LocalFactorization, RingTable};

type Q = Ratio<i128>;

/// Integer eigenvalues with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpectrumMultiset(BTreeMap<i64, u64>);

impl SpectrumMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `mult` copies of `lambda`; zero multiplicities are ignored.
    pub fn insert(&mut self, lambda: i64, mult: u64) {
        if mult > 0 {
            *self.0.entry(lambda).or_default() += mult;
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut s = Self::new();
        for (l, m) in pairs {
            s.insert(l, m);
        }
        s
    }

    pub fn multiplicity(&self, lambda: i64) -> u64 {
        self.0.get(&lambda).copied().unwrap_or(0)
    }

    pub fn contains(&self, lambda: i64) -> bool {
        self.0.contains_key(&lambda)
    }

    /// `(λ, m)` pairs by descending eigenvalue.
    pub fn entries_desc(&self) -> Vec<(i64, u64)> {
        self.0.iter().rev().map(|(&l, &m)| (l, m)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(&l, &m)| (l, m))
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.keys().copied()
    }

    /// Σ m(λ): the matrix dimension.
    pub fn dimension(&self) -> u64 {
        self.0.values().sum()
    }

    /// Σ λ·m(λ).
    pub fn trace(&self) -> i128 {
        self.iter().map(|(l, m)| l as i128 * m as i128).sum()
    }

    /// Σ λ²·m(λ).
    pub fn trace_of_square(&self) -> i128 {
        self.iter().map(|(l, m)| (l as i128).pow(2) * m as i128).sum()
    }
}

impl fmt::Display for SpectrumMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries_desc().iter().map(|(l, m)| format!("{l}:{m}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Graph energy; integral in every closed-form case handled here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Energy(pub u64);

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Σ m(λ)·|λ|.
pub fn energy_from_spectrum(spec: &SpectrumMultiset) -> Energy {
    Energy(spec.iter().map(|(l, m)| l.unsigned_abs() * m).sum())
}

fn to_int(q: Q, what: &str) -> Result<i128> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::NonIntegral(format!("{what} = {q}")))
    }
}

/// Spectrum of `Cay(R, xR*)` for local `R`:
/// `|xR*|` with multiplicity `|R|/|I_x|`, `−|M_x|` with multiplicity
/// `|R||xR*|/(|I_x||M_x|)`, and `0` with multiplicity `(|R|/|M_x|)(|M_x|−1)`.
pub fn closed_form_spectrum_local(ctx: &GeneratorContext<'_>) -> Result<SpectrumMultiset> {
    let r = ctx.ring;
    r.is_local()?.ok_or(Error::NotLocal)?;
    let n = r.order() as i128;
    let (k, ix, mx) = (ctx.orbit.len() as i128, ctx.ideal.len() as i128, ctx.boundary.len() as i128);
    let mut s = SpectrumMultiset::new();
    s.insert(k as i64, to_int(Q::new(n, ix), "|R|/|I_x|")? as u64);
    s.insert(-(mx as i64), to_int(Q::new(n * k, ix * mx), "|R||xR*|/(|I_x||M_x|)")? as u64);
    s.insert(0, to_int(Q::new(n * (mx - 1), mx), "(|R|/|M_x|)(|M_x|-1)")? as u64);
    Ok(s)
}

/// Spectrum of `Cay(I_x, xR*)` for local `R`: `|xR*|` once, `−|M_x|` with
/// multiplicity `|I_x|/|M_x| − 1`, and `0` with `(|I_x|/|M_x|)(|M_x|−1)`.
pub fn ideal_component_spectrum(ctx: &GeneratorContext<'_>) -> Result<SpectrumMultiset> {
    let (k, ix, mx) = (ctx.orbit.len() as i128, ctx.ideal.len() as i128, ctx.boundary.len() as i128);
    let parts = to_int(Q::new(ix, mx), "|I_x|/|M_x|")?;
    let mut s = SpectrumMultiset::new();
    s.insert(k as i64, 1);
    s.insert(-(mx as i64), (parts - 1) as u64);
    s.insert(0, (parts * (mx - 1)) as u64);
    Ok(s)
}

/// Summary of `x` relative to a factorization, as used by the closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormData {
    pub order: usize,
    pub coords: Vec<CoordinateData>,
}

impl ClosedFormData {
    pub fn new(ring: &RingTable, fact: &LocalFactorization, x: Elem) -> Result<Self> {
        ring.check_element(x)?;
        if x == ring.zero() {
            return Err(Error::ZeroGenerator);
        }
        Ok(Self { order: ring.order(), coords: coordinate_profile(fact, x)? })
    }

    fn support(&self) -> impl Iterator<Item = &CoordinateData> {
        self.coords.iter().filter(|c| !c.is_zero)
    }

    /// `|xR*| = ∏ |x_iR_i*|`.
    pub fn orbit(&self) -> i128 {
        self.support().map(|c| c.orbit as i128).product()
    }

    /// `|I_x| = ∏_{i∈P} |I_{x_i}|`.
    pub fn ideal(&self) -> i128 {
        self.support().map(|c| c.ideal as i128).product()
    }

    /// `|x_iR_i*| / |M_{x_i}|` for each `i ∈ P`.
    fn ratios(&self) -> Vec<Q> {
        self.support().map(|c| Q::new(c.orbit as i128, c.boundary as i128)).collect()
    }

    pub fn support_size(&self) -> usize {
        self.support().count()
    }
}

/// Closed-form spectrum over an arbitrary unital ring.
///
/// With `P` the nonzero coordinates and `r_i = |x_iR_i*|/|M_{x_i}|`, every
/// `C ⊆ P` contributes `(−1)^|C| |xR*| / ∏_{i∈C} r_i` with multiplicity
/// `(|R|/|I_x|) ∏_{i∈C} r_i`; the rest of the dimension is eigenvalue 0.
/// Equal eigenvalues from different `C` are merged.
pub fn closed_form_spectrum_from(data: &ClosedFormData) -> Result<SpectrumMultiset> {
    let n = data.order as i128;
    let k = data.orbit();
    let components = to_int(Q::new(n, data.ideal()), "|R|/|I_x|")?;
    let ratios = data.ratios();
    let mut s = SpectrumMultiset::new();
    let mut nonzero: i128 = 0;
    for mask in 0u32..(1 << ratios.len()) {
        let chosen = ratios.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1);
        let prod: Q = chosen.map(|(_, r)| *r).product();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        let lambda = to_int(Q::from_integer(sign * k) / prod, "eigenvalue")?;
        let mult = to_int(Q::from_integer(components) * prod, "multiplicity")?;
        s.insert(lambda as i64, mult as u64);
        nonzero += mult;
    }
    s.insert(0, (n - nonzero) as u64);
    Ok(s)
}

pub fn closed_form_spectrum(ring: &RingTable, x: Elem) -> Result<SpectrumMultiset> {
    let fact = local_factorization(ring)?;
    closed_form_spectrum_from(&ClosedFormData::new(ring, &fact, x)?)
}

/// `2^{|P|} |R| |xR*| / |I_x|`.
pub fn energy_closed_form_from(data: &ClosedFormData) -> Result<Energy> {
    let v = Q::new((1i128 << data.support_size()) * data.order as i128 * data.orbit(), data.ideal());
    Ok(Energy(to_int(v, "energy")? as u64))
}

pub fn energy_closed_form(ring: &RingTable, x: Elem) -> Result<Energy> {
    let fact = local_factorization(ring)?;
    energy_closed_form_from(&ClosedFormData::new(ring, &fact, x)?)
}

/// Energy of the complement of `Cay(R, xR*)`:
/// `2(|R| − |xR*| − 1) + (|R|/|I_x|)[2^{|P|}|xR*| + ∏(1 − r_i) − ∏(1 + r_i)]`.
pub fn complement_energy_closed_form_from(data: &ClosedFormData) -> Result<Energy> {
    let n = Q::from_integer(data.order as i128);
    let k = Q::from_integer(data.orbit());
    let one = Q::from_integer(1);
    let ratios = data.ratios();
    let minus: Q = ratios.iter().map(|r| one - r).product();
    let plus: Q = ratios.iter().map(|r| one + r).product();
    let pow = Q::from_integer(1i128 << ratios.len());
    let v = Q::from_integer(2) * (n - k - one) + n / Q::from_integer(data.ideal()) * (pow * k + minus - plus);
    let v = to_int(v, "complement energy")?;
    if v < 0 {
        return Err(Error::NonIntegral(format!("negative complement energy {v}")));
    }
    Ok(Energy(v as u64))
}

pub fn complement_energy_closed_form(ring: &RingTable, x: Elem) -> Result<Energy> {
    let fact = local_factorization(ring)?;
    complement_energy_closed_form_from(&ClosedFormData::new(ring, &fact, x)?)
}

/// Spectrum of the complement of a `k`-regular loopless graph on `n`
/// vertices: one copy of `k` becomes `n − k − 1`, every other `λ` becomes
/// `−1 − λ`.
pub fn complement_spectrum(spec: &SpectrumMultiset, n: u64, k: u64) -> Result<SpectrumMultiset> {
    let k = k as i64;
    if !spec.contains(k) {
        return Err(Error::MissingEigenvalue(k));
    }
    let mut out = SpectrumMultiset::new();
    out.insert(n as i64 - k - 1, 1);
    for (l, m) in spec.iter() {
        let m = if l == k { m - 1 } else { m };
        out.insert(-1 - l, m);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub jacobi: JacobiConfig,
    /// Largest tolerated distance from an eigenvalue to the nearest integer.
    pub rounding_guard: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { jacobi: JacobiConfig::default(), rounding_guard: 1e-6 }
    }
}

/// Numeric spectrum of a symmetric 0/1 matrix, rounded to integers.
///
/// The matrix is split into connected components and each distinct block
/// diagonalized with Jacobi rotations. Fails if any eigenvalue is further than the
/// rounding guard from an integer, or if the rounded eigenvalues do not sum to
/// the trace.
pub fn oracle_spectrum(a: &AdjacencyMatrix, cfg: OracleConfig) -> Result<SpectrumMultiset> {
    if !a.is_symmetric() {
        return Err(Error::InvalidParameter("oracle needs a symmetric matrix".into()));
    }
    let mut out = SpectrumMultiset::new();
    let mut rounded_sum: i64 = 0;
    // blocks with identical entries share their eigenvalues
    let mut solved: HashMap<Vec<u64>, Vec<f64>> = HashMap::new();
    for comp in components(a) {
        let block = a.dense_submatrix(&comp);
        let key: Vec<u64> = block.iter().map(|v| v.to_bits()).collect();
        let eig = match solved.get(&key) {
            Some(e) => e.clone(),
            None => {
                let e = jacobi_eigenvalues(block, comp.len(), cfg.jacobi)?;
                solved.insert(key, e.clone());
                e
            }
        };
        for v in eig {
            let r = v.round();
            let residual = (v - r).abs();
            if residual > cfg.rounding_guard {
                return Err(Error::RoundingResidual { value: v, residual });
            }
            out.insert(r as i64, 1);
            rounded_sum += r as i64;
        }
    }
    let trace = a.trace() as i64;
    if rounded_sum != trace {
        return Err(Error::TraceMismatch { rounded: rounded_sum, trace });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{complement, unit_orbit_graph, AdjacencyMatrix};
    use crate::ideal::build_context;
    use crate::ring::{make_cyclic_ring, make_product};

    fn sm(p: &[(i64, u64)]) -> SpectrumMultiset {
        SpectrumMultiset::from_pairs(p.iter().copied())
    }

    fn z(n: usize) -> RingTable {
        make_cyclic_ring(n).unwrap()
    }

    fn cycle(n: usize) -> AdjacencyMatrix {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        AdjacencyMatrix::from_edges(n, &edges)
    }

    #[test]
    fn oracle_basics() {
        let cfg = OracleConfig::default();
        assert_eq!(oracle_spectrum(&AdjacencyMatrix::identity(5), cfg).unwrap(), sm(&[(1, 5)]));
        assert_eq!(oracle_spectrum(&AdjacencyMatrix::complete(4), cfg).unwrap(), sm(&[(3, 1), (-1, 3)]));
        assert_eq!(oracle_spectrum(&cycle(6), cfg).unwrap(), sm(&[(2, 1), (1, 2), (-1, 2), (-2, 1)]));
    }

    #[test]
    fn oracle_rejects_irrational_spectra() {
        // C_5 has eigenvalues 2cos(2πk/5), not integers
        let err = oracle_spectrum(&cycle(5), OracleConfig::default()).unwrap_err();
        assert!(matches!(err, Error::RoundingResidual { .. }));
    }

    #[test]
    fn local_closed_forms() {
        type Case = (usize, Elem, &'static [(i64, u64)]);
        let cases: [Case; 3] =
            [(9, 3, &[(2, 3), (-1, 6)]), (4, 2, &[(1, 2), (-1, 2)]), (8, 2, &[(2, 2), (-2, 2), (0, 4)])];
        for (n, x, want) in cases {
            let r = z(n);
            let ctx = build_context(&r, x).unwrap();
            assert_eq!(closed_form_spectrum_local(&ctx).unwrap(), sm(want), "Z{n}, x={x}");
            assert_eq!(closed_form_spectrum(&r, x).unwrap(), sm(want), "Z{n}, x={x}");
        }
        let z6 = z(6);
        assert_eq!(closed_form_spectrum_local(&build_context(&z6, 1).unwrap()).unwrap_err(), Error::NotLocal);
    }

    #[test]
    fn general_closed_form_examples() {
        assert_eq!(closed_form_spectrum(&z(6), 1).unwrap(), sm(&[(2, 1), (1, 2), (-1, 2), (-2, 1)]));
        let z3 = z(3);
        let cube = make_product(&[&z3, &z3, &z3]).unwrap().ring;
        let x = cube.element_by_label("(1, 1, 1)").unwrap();
        assert_eq!(closed_form_spectrum(&cube, x).unwrap(), sm(&[(8, 1), (-4, 6), (2, 12), (-1, 8)]));
        assert_eq!(closed_form_spectrum(&z(4), 0).unwrap_err(), Error::ZeroGenerator);
    }

    #[test]
    fn closed_form_matches_oracle_on_small_rings() {
        let cfg = OracleConfig::default();
        for n in 2..=24 {
            let r = z(n);
            for x in 1..n {
                let a = unit_orbit_graph(&build_context(&r, x).unwrap()).unwrap();
                assert_eq!(closed_form_spectrum(&r, x).unwrap(), oracle_spectrum(&a, cfg).unwrap(), "Z{n}, x={x}");
            }
        }
    }

    #[test]
    fn complement_spectra() {
        assert_eq!(complement_spectrum(&sm(&[(1, 2), (-1, 2)]), 4, 1).unwrap(), sm(&[(2, 1), (0, 2), (-2, 1)]));
        assert_eq!(complement_spectrum(&sm(&[(4, 1), (-1, 4)]), 5, 4).unwrap(), sm(&[(0, 5)]));
        assert_eq!(
            complement_spectrum(&sm(&[(2, 1), (1, 2), (-1, 2), (-2, 1)]), 6, 2).unwrap(),
            sm(&[(3, 1), (-2, 2), (0, 2), (1, 1)])
        );
        assert_eq!(complement_spectrum(&sm(&[(1, 2)]), 4, 3).unwrap_err(), Error::MissingEigenvalue(3));
        let oracle = oracle_spectrum(&complement(&cycle(6)).unwrap(), OracleConfig::default()).unwrap();
        assert_eq!(oracle, sm(&[(3, 1), (-2, 2), (0, 2), (1, 1)]));
    }

    #[test]
    fn energies() {
        assert_eq!(energy_closed_form(&z(6), 1).unwrap(), Energy(8));
        assert_eq!(energy_closed_form(&z(4), 2).unwrap(), Energy(4));
        assert_eq!(energy_closed_form(&z(9), 3).unwrap(), Energy(12));
        assert_eq!(energy_from_spectrum(&sm(&[(2, 1), (1, 2), (-1, 2), (-2, 1)])), Energy(8));
        assert_eq!(energy_from_spectrum(&sm(&[(0, 7)])), Energy(0));
        assert_eq!(energy_from_spectrum(&sm(&[(3, 1), (-2, 2), (0, 2), (1, 1)])), Energy(8));
    }

    #[test]
    fn complement_energies() {
        assert_eq!(complement_energy_closed_form(&z(4), 2).unwrap(), Energy(4));
        assert_eq!(complement_energy_closed_form(&z(6), 1).unwrap(), Energy(8));
        assert_eq!(complement_energy_closed_form(&z(2), 1).unwrap(), Energy(0));
    }

    #[test]
    fn ideal_component_spectrum_z8() {
        let r = z(8);
        let ctx = build_context(&r, 2).unwrap();
        assert_eq!(ideal_component_spectrum(&ctx).unwrap(), sm(&[(2, 1), (-2, 1), (0, 2)]));
    }

    #[test]
    fn tensor_energy_is_multiplicative() {
        let cfg = OracleConfig::default();
        let g = cycle(6);
        let h = AdjacencyMatrix::complete(3);
        let t = crate::cayley::tensor_product(&g, &h).unwrap();
        let e = |a: &AdjacencyMatrix| energy_from_spectrum(&oracle_spectrum(a, cfg).unwrap()).0;
        assert_eq!(e(&t), e(&g) * e(&h));
    }
}
