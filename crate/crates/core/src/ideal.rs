//! The connection set `xR*`, the principal ideal `I_x`, its boundary
//! `M_x = I_x ∖ xR*` and the annihilator `A_x`, with exhaustive checks of
//! their structure over local rings.

use serde::{Deserialize, Serialize};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::ring::{identify_small_ring, prime_power, Elem, ElementSubset, LocalFactorization, RingClass, RingTable};

#[derive(Clone, Debug)]
pub struct GeneratorContext<'a> {
    pub ring: &'a RingTable,
    pub x: Elem,
    /// `{x·u : u ∈ R*}`
    pub orbit: ElementSubset,
    /// `I_x = xR`
    pub ideal: ElementSubset,
    /// `M_x = I_x ∖ xR*`
    pub boundary: ElementSubset,
    /// `A_x = {r : x·r = 0}`
    pub annihilator: ElementSubset,
}

/// Computes `xR*`, `I_x`, `M_x` and `A_x` by exhaustive multiplication.
pub fn build_context(ring: &RingTable, x: Elem) -> Result<GeneratorContext<'_>> {
    ring.check_element(x)?;
    if x == ring.zero() {
        return Err(Error::ZeroGenerator);
    }
    let orbit = ring.scale(x, ring.units()?);
    let ideal = ring.principal_ideal(x);
    let boundary = ideal.difference(&orbit);
    let annihilator = ring.annihilator(x);
    Ok(GeneratorContext { ring, x, orbit, ideal, boundary, annihilator })
}

impl GeneratorContext<'_> {
    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.x).unwrap_or(false)
    }

    /// `I_x` as a standalone ring.
    pub fn ideal_ring(&self) -> Result<RingTable> {
        Ok(self.ring.restrict(&self.ideal)?.ring)
    }

    /// The quotient `I_x / M_x`.
    pub fn residue_ring(&self) -> Result<RingTable> {
        let sub = self.ring.restrict(&self.ideal)?;
        let boundary = sub.pull_back(&self.boundary)?;
        crate::ring::quotient_ring(&sub.ring, &boundary)
    }
}

/// Local data for one coordinate `x_i` of `x` in a local factor `R_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordinateData {
    pub ring_order: usize,
    pub maximal_order: usize,
    pub is_zero: bool,
    pub is_unit: bool,
    /// `|x_i R_i*|`
    pub orbit: usize,
    /// `|I_{x_i}|`
    pub ideal: usize,
    /// `|M_{x_i}|`
    pub boundary: usize,
}

impl CoordinateData {
    /// `|I_{x_i}| / |M_{x_i}|` (the order of the residue ring `I/M`).
    pub fn ratio(&self) -> usize {
        self.ideal / self.boundary
    }
}

/// Per-factor data for `x = (x_1, …, x_s)`. Zero coordinates have `I = {0}`,
/// `x_iR_i* = {0}` and an empty boundary.
pub fn coordinate_profile(fact: &LocalFactorization, x: Elem) -> Result<Vec<CoordinateData>> {
    let coords = fact.coords(x);
    fact.factors
        .iter()
        .zip(coords)
        .map(|(f, xi)| {
            let r = &f.ring;
            if xi == r.zero() {
                return Ok(CoordinateData {
                    ring_order: r.order(),
                    maximal_order: f.maximal_order(),
                    is_zero: true,
                    is_unit: false,
                    orbit: 1,
                    ideal: 1,
                    boundary: 0,
                });
            }
            let ctx = build_context(r, xi)?;
            Ok(CoordinateData {
                ring_order: r.order(),
                maximal_order: f.maximal_order(),
                is_zero: false,
                is_unit: ctx.is_unit(),
                orbit: ctx.orbit.len(),
                ideal: ctx.ideal.len(),
                boundary: ctx.boundary.len(),
            })
        })
        .collect()
}

/// Additive subgroup generated by `gens`.
fn additive_span(ring: &RingTable, gens: &ElementSubset) -> ElementSubset {
    let mut seen = vec![false; ring.order()];
    let mut stack = vec![ring.zero()];
    seen[ring.zero()] = true;
    while let Some(a) = stack.pop() {
        for g in gens.iter() {
            let s = ring.add(a, g);
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
    }
    ring.elements().filter(|&e| seen[e]).collect()
}

/// Ideal of the (possibly non-unital) ring carried by `within` generated by
/// `gens`: the additive span of `gens ∪ within·gens`.
fn ideal_generated(ring: &RingTable, within: &ElementSubset, gens: &ElementSubset) -> ElementSubset {
    let products = gens.iter().flat_map(|g| within.iter().map(move |w| ring.mul(w, g)));
    let all: ElementSubset = gens.iter().chain(products).collect();
    additive_span(ring, &all)
}

fn is_prime_power_or_one(n: usize, p: u64) -> bool {
    n == 1 || matches!(prime_power(n as u64), Some((q, _)) if q == p)
}

/// Exhaustive structural checks for `x ≠ 0` in a local ring.
pub fn lemma_suite(ctx: &GeneratorContext<'_>) -> Result<CheckReport> {
    let r = ctx.ring;
    let m = r.is_local()?.ok_or(Error::NotLocal)?;
    let x = ctx.x;
    let unit = ctx.is_unit();
    let (ix, mx, orbit) = (&ctx.ideal, &ctx.boundary, &ctx.orbit);
    let mut rep = CheckReport::new();

    let order_ok = match prime_power(r.order() as u64) {
        Some((p, _)) => {
            is_prime_power_or_one(m.len(), p)
                && is_prime_power_or_one(r.order() / m.len(), p)
                && r.order().is_multiple_of(m.len())
        }
        None => false,
    };
    rep.expect("orders_are_powers_of_one_prime", order_ok, || format!("|R|={}, |M|={}", r.order(), m.len()));

    rep.expect(
        "orbit_and_boundary_partition_ideal",
        orbit.is_disjoint(mx) && orbit.union(mx) == *ix && ix.len() == mx.len() + orbit.len(),
        || format!("xR*={orbit}, M_x={mx}, I_x={ix}"),
    );
    rep.expect("orbit_closed_under_negation", orbit.iter().all(|e| orbit.contains(r.neg(e))), || {
        format!("xR*={orbit}")
    });
    rep.expect("principal_ideal_is_ideal", r.is_ideal(ix), || format!("I_x={ix}"));
    rep.expect("annihilator_is_ideal", r.is_ideal(&ctx.annihilator), || format!("A_x={}", ctx.annihilator));

    let xm = r.scale(x, &m);
    rep.expect("boundary_equals_x_times_maximal", *mx == xm, || format!("M_x={mx}, xM={xm}"));

    let bad_r = r.elements().find(|&s| mx.contains(r.mul(x, s)) && !m.contains(s));
    rep.expect("boundary_preimage_in_maximal", bad_r.is_none(), || {
        format!("x·{} lies in M_x but {} is a unit", bad_r.unwrap(), bad_r.unwrap())
    });

    let absorbs = r.is_additive_subgroup(mx) && mx.iter().all(|a| ix.iter().all(|i| mx.contains(r.mul(a, i))));
    rep.expect("boundary_is_ideal_of_principal", absorbs, || format!("M_x={mx} in I_x={ix}"));

    let not_maximal = orbit.iter().find(|&u| {
        let gens = mx.union(&ElementSubset::singleton(u));
        ideal_generated(r, ix, &gens) != *ix
    });
    rep.expect("boundary_is_maximal", not_maximal.is_none(), || {
        format!("M_x ∪ {{{}}} generates a proper ideal", not_maximal.unwrap())
    });

    rep.expect("residue_index_preserved", ix.len() * m.len() == r.order() * mx.len(), || {
        format!("|I_x|/|M_x| = {}/{}, |R|/|M| = {}/{}", ix.len(), mx.len(), r.order(), m.len())
    });

    if unit && mx.len() == 1 {
        let field = ctx.ideal_ring()?.is_field();
        rep.expect("unit_generator_gives_field", field, || "I_x is not a field".into());
    } else {
        rep.skip("unit_generator_gives_field", "needs x a unit and |M_x| = 1");
    }

    if !unit && mx.len() == 1 {
        let class = identify_small_ring(&ctx.ideal_ring()?);
        rep.expect("nilpotent_generator_gives_null_ring", matches!(class, RingClass::Null(_)), || {
            format!("I_x identified as {class}")
        });
    } else {
        rep.skip("nilpotent_generator_gives_null_ring", "needs x a non-unit and |M_x| = 1");
    }

    let square_nonzero = r.mul(x, x) != r.zero();
    if !unit && square_nonzero {
        rep.expect("ideal_bounded_when_square_nonzero", ix.len() <= mx.len() * mx.len(), || {
            format!("|I_x|={} > |M_x|²={}", ix.len(), mx.len() * mx.len())
        });
        // xr + (A_x ∩ M_x) ↦ x²r is well defined and injective
        let kernel = ctx.annihilator.intersection(mx);
        let x2 = r.mul(x, x);
        let broken = r.elements().flat_map(|a| r.elements().map(move |b| (a, b))).find(|&(a, b)| {
            let same_coset = kernel.contains(r.sub(r.mul(x, a), r.mul(x, b)));
            let same_image = r.mul(x2, a) == r.mul(x2, b);
            same_coset != same_image
        });
        rep.expect("square_map_injective", broken.is_none(), || {
            let (a, b) = broken.unwrap();
            format!("r={a}, r'={b} violate xr+K ↦ x²r")
        });
    } else {
        rep.skip("ideal_bounded_when_square_nonzero", "needs x a non-unit with x² ≠ 0");
        rep.skip("square_map_injective", "needs x a non-unit with x² ≠ 0");
    }

    if mx.len() > 1 {
        rep.expect("ideal_bounded_when_boundary_large", ix.len() <= mx.len() * mx.len(), || {
            format!("|I_x|={} > |M_x|²={}", ix.len(), mx.len() * mx.len())
        });
    } else {
        rep.skip("ideal_bounded_when_boundary_large", "needs |M_x| > 1");
    }

    Ok(rep)
}

/// Runs [`lemma_suite`] on every nonzero coordinate of `x`; zero coordinates
/// yield `None`.
pub fn lemma_suite_per_factor(fact: &LocalFactorization, x: Elem) -> Result<Vec<Option<CheckReport>>> {
    fact.factors
        .iter()
        .zip(fact.coords(x))
        .map(|(f, xi)| {
            if xi == f.ring.zero() {
                return Ok(None);
            }
            let ctx = build_context(&f.ring, xi)?;
            lemma_suite(&ctx).map(Some)
        })
        .collect()
}

/// Checks `xR* = x_1R_1* × ⋯ × x_sR_s*` under the embedding, and the
/// cardinality identity `|xR*| = ∏ |x_iR_i*|`.
pub fn product_orbit_check(ring: &RingTable, fact: &LocalFactorization, x: Elem) -> Result<CheckReport> {
    let ctx = build_context(ring, x)?;
    let coords = fact.coords(x);
    let per_factor: Vec<ElementSubset> = fact
        .factors
        .iter()
        .zip(&coords)
        .map(|(f, &xi)| Ok(f.ring.scale(xi, f.ring.units()?)))
        .collect::<Result<_>>()?;
    let mut product: Vec<Elem> = Vec::new();
    let mut idx = vec![0usize; per_factor.len()];
    'outer: loop {
        let tuple: Vec<Elem> = idx.iter().zip(&per_factor).map(|(&i, s)| s.as_slice()[i]).collect();
        product.push(fact.embedding.element(&tuple));
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < per_factor[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    let product: ElementSubset = product.into();
    let card: usize = per_factor.iter().map(ElementSubset::len).product();
    let mut rep = CheckReport::new();
    rep.expect("orbit_is_coordinatewise_product", product == ctx.orbit, || {
        format!("xR*={}, product={product}", ctx.orbit)
    });
    rep.expect("orbit_cardinality_multiplies", card == ctx.orbit.len(), || {
        format!("|xR*|={}, ∏|x_iR_i*|={card}", ctx.orbit.len())
    });
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::Outcome;
    use crate::ring::{local_factorization, make_cyclic_ring, make_galois_field, make_product};

    fn set(v: &[Elem]) -> ElementSubset {
        v.to_vec().into()
    }

    #[test]
    fn z8_generator_two() {
        let z8 = make_cyclic_ring(8).unwrap();
        let ctx = build_context(&z8, 2).unwrap();
        assert_eq!(ctx.orbit, set(&[2, 6]));
        assert_eq!(ctx.ideal, set(&[0, 2, 4, 6]));
        assert_eq!(ctx.boundary, set(&[0, 4]));
        assert_eq!(ctx.annihilator, set(&[0, 4]));
    }

    #[test]
    fn z6_generator_one() {
        let z6 = make_cyclic_ring(6).unwrap();
        let ctx = build_context(&z6, 1).unwrap();
        assert_eq!(ctx.orbit, set(&[1, 5]));
        assert_eq!(ctx.ideal, ElementSubset::full(6));
        assert_eq!(ctx.boundary, set(&[0, 2, 3, 4]));
    }

    #[test]
    fn unity_generator_in_local_ring() {
        let z9 = make_cyclic_ring(9).unwrap();
        let ctx = build_context(&z9, 1).unwrap();
        assert_eq!(ctx.ideal, ElementSubset::full(9));
        assert_eq!(ctx.boundary, z9.non_units().unwrap());
    }

    #[test]
    fn zero_generator_is_rejected() {
        let z4 = make_cyclic_ring(4).unwrap();
        assert_eq!(build_context(&z4, 0).unwrap_err(), Error::ZeroGenerator);
        let c = crate::ring::make_null_ring(3).unwrap();
        assert_eq!(build_context(&c, 1).unwrap_err(), Error::NonUnital);
    }

    #[test]
    fn suite_on_z8_x2() {
        let z8 = make_cyclic_ring(8).unwrap();
        let rep = lemma_suite(&build_context(&z8, 2).unwrap()).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.get("residue_index_preserved"), Some(&Outcome::Pass));
    }

    #[test]
    fn suite_on_z9_x3_finds_null_ring() {
        let z9 = make_cyclic_ring(9).unwrap();
        let ctx = build_context(&z9, 3).unwrap();
        assert_eq!(ctx.boundary, set(&[0]));
        let rep = lemma_suite(&ctx).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.get("nilpotent_generator_gives_null_ring"), Some(&Outcome::Pass));
        assert_eq!(identify_small_ring(&ctx.ideal_ring().unwrap()), RingClass::Null(3));
    }

    #[test]
    fn suite_on_unit_generator() {
        let z4 = make_cyclic_ring(4).unwrap();
        let ctx = build_context(&z4, 1).unwrap();
        assert_eq!(ctx.boundary, set(&[0, 2]));
        let rep = lemma_suite(&ctx).unwrap();
        assert!(rep.passed(), "{rep}");
        let gf = make_galois_field(2, 3).unwrap();
        let rep = lemma_suite(&build_context(&gf, 3).unwrap()).unwrap();
        assert_eq!(rep.get("unit_generator_gives_field"), Some(&Outcome::Pass));
    }

    #[test]
    fn suite_requires_local_ring() {
        let z6 = make_cyclic_ring(6).unwrap();
        assert_eq!(lemma_suite(&build_context(&z6, 1).unwrap()).unwrap_err(), Error::NotLocal);
    }

    #[test]
    fn suite_passes_on_all_local_residue_rings() {
        for n in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32] {
            let r = make_cyclic_ring(n).unwrap();
            for x in 1..n {
                let rep = lemma_suite(&build_context(&r, x).unwrap()).unwrap();
                assert!(rep.passed(), "Z{n}, x={x}\n{rep}");
            }
        }
    }

    #[test]
    fn residue_ring_of_z8_x2_is_null() {
        let z8 = make_cyclic_ring(8).unwrap();
        let q = build_context(&z8, 2).unwrap().residue_ring().unwrap();
        assert_eq!(identify_small_ring(&q), RingClass::Null(2));
    }

    #[test]
    fn per_factor_suite_skips_zero_coordinates() {
        let z2 = make_cyclic_ring(2).unwrap();
        let z3 = make_cyclic_ring(3).unwrap();
        let r = make_product(&[&z2, &z3]).unwrap().ring;
        let fact = local_factorization(&r).unwrap();
        let x = r.element_by_label("(1, 0)").unwrap();
        let reps = lemma_suite_per_factor(&fact, x).unwrap();
        assert_eq!(reps.iter().filter(|r| r.is_none()).count(), 1);
        assert!(reps.iter().flatten().all(CheckReport::passed));
    }

    #[test]
    fn coordinate_profile_of_z12() {
        let z12 = make_cyclic_ring(12).unwrap();
        let fact = local_factorization(&z12).unwrap();
        let prof = coordinate_profile(&fact, 2).unwrap();
        // 2 ↦ (2 in Z4, 2 in Z3)
        assert_eq!((prof[0].ideal, prof[0].boundary, prof[0].orbit), (2, 1, 1));
        assert_eq!((prof[1].ideal, prof[1].boundary, prof[1].orbit), (3, 1, 2));
        assert!(prof[1].is_unit && !prof[0].is_unit);
        let prof = coordinate_profile(&fact, 4).unwrap();
        assert!(prof[0].is_zero);
    }

    #[test]
    fn orbit_factorizes_over_coordinates() {
        for n in [6, 12, 30, 36] {
            let r = make_cyclic_ring(n).unwrap();
            let fact = local_factorization(&r).unwrap();
            for x in 1..n {
                let rep = product_orbit_check(&r, &fact, x).unwrap();
                assert!(rep.passed(), "Z{n}, x={x}\n{rep}");
            }
        }
    }
}
