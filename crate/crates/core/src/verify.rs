//! Cross-checking sweep over a family of small rings.
//!
//! For every ring and generator the closed forms are compared with the
//! numeric oracle, the energy formulas with the spectra they summarize, and
//! the three Ramanujan tests with each other. Every local factor that occurs
//! also runs the structural checks of [`crate::ideal::lemma_suite`].

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{
    complement, components, is_regular, multipartite_check, tensor_factorization_check, unit_orbit_graph,
};
use crate::check::{CheckReport, Outcome};
use crate::dsl::{parse_ring, Atom, BuiltRing, RingExpr};
use crate::error::{Error, Result};
use crate::ideal::{build_context, lemma_suite, product_orbit_check};
use crate::ramanujan::{full_report, local_corollary_test, reduced_profile};
use crate::ring::{local_factorization, Elem, ElementSubset, LocalFactorization, PresentedKind, RingTable};
use crate::spectra::{
    closed_form_spectrum_from, complement_energy_closed_form_from, complement_spectrum, energy_closed_form_from,
    energy_from_spectrum, ideal_component_spectrum, oracle_spectrum, ClosedFormData, OracleConfig, SpectrumMultiset,
};

/// Largest `Z_n` in the family.
pub const CYCLIC_LIMIT: usize = 36;
/// Largest product of atoms in the family.
pub const PRODUCT_LIMIT: usize = 512;
/// Rings up to this order have every nonzero generator checked.
pub const EXHAUSTIVE_LIMIT: usize = 64;
/// Generators sampled from larger rings.
pub const SAMPLE_SIZE: usize = 64;

/// Building blocks of the product part of the family.
pub fn family_atoms() -> Vec<Atom> {
    use PresentedKind::{A, G};
    vec![
        Atom::Z(2),
        Atom::Z(3),
        Atom::Z(4),
        Atom::Z(8),
        Atom::Z(9),
        Atom::GF(2, 2),
        Atom::GF(3, 2),
        Atom::P2(A, 2),
        Atom::P2(G, 2),
        Atom::P2(A, 3),
        Atom::P2(G, 3),
    ]
}

/// `Z_n` for `2 ≤ n ≤ 36` together with every product of at most three
/// atoms of order at most 512, restricted to order `max_order`. Duplicate
/// expressions are dropped; the order is deterministic.
pub fn family(max_order: usize) -> Vec<RingExpr> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |e: RingExpr| {
        if seen.insert(e.clone()) {
            out.push(e);
        }
    };
    for n in 2..=CYCLIC_LIMIT.min(max_order) {
        push(RingExpr { atoms: vec![Atom::Z(n as u64)] });
    }
    let atoms = family_atoms();
    let limit = PRODUCT_LIMIT.min(max_order) as u64;
    for i in 0..atoms.len() {
        push_if(&mut push, vec![atoms[i]], limit);
        for j in i..atoms.len() {
            push_if(&mut push, vec![atoms[i], atoms[j]], limit);
            for k in j..atoms.len() {
                push_if(&mut push, vec![atoms[i], atoms[j], atoms[k]], limit);
            }
        }
    }
    out
}

fn push_if(push: &mut impl FnMut(RingExpr), atoms: Vec<Atom>, limit: u64) {
    let e = RingExpr { atoms };
    if e.order() <= limit {
        push(e);
    }
}

/// FNV-1a, used to derive a per-ring seed that does not depend on the
/// position of the ring in the family.
fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// All nonzero elements when `|R| ≤ 64`, otherwise 64 distinct nonzero
/// elements drawn with a generator seeded from `seed` and the ring name.
pub fn generators(ring: &RingTable, name: &str, seed: u64) -> Vec<Elem> {
    let nonzero: Vec<Elem> = ring.elements().filter(|&e| e != ring.zero()).collect();
    if ring.order() <= EXHAUSTIVE_LIMIT {
        return nonzero;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stable_hash(name));
    let mut picked: Vec<Elem> = rand::seq::index::sample(&mut rng, nonzero.len(), SAMPLE_SIZE.min(nonzero.len()))
        .into_iter()
        .map(|i| nonzero[i])
        .collect();
    picked.sort_unstable();
    picked
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub max_order: usize,
    /// Complement spectra are only checked against the oracle up to this order.
    pub oracle_cap: usize,
    pub seed: u64,
    pub oracle: OracleConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { max_order: PRODUCT_LIMIT, oracle_cap: 256, seed: 0, oracle: OracleConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub lambda: i64,
    pub mult: u64,
}

pub fn spectrum_entries(spec: &SpectrumMultiset) -> Vec<SpectrumEntry> {
    spec.entries_desc().into_iter().map(|(lambda, mult)| SpectrumEntry { lambda, mult }).collect()
}

/// One `(R, x)` instance, as reported for failures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub ring: String,
    pub x: String,
    pub order: usize,
    pub orbit: usize,
    pub ideal: usize,
    /// `|M_{x_i}|` for each local factor (0 where `x_i = 0`).
    pub boundaries: Vec<usize>,
    pub spectrum: Vec<SpectrumEntry>,
    pub energy: Option<u64>,
    pub complement_energy: Option<u64>,
    pub ramanujan: Option<bool>,
    pub condition: Option<String>,
    pub failures: Vec<String>,
}

/// Pass and failure counts per check name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub rings: usize,
    pub instances: usize,
    pub local_pairs: usize,
    pub checks: BTreeMap<String, CheckTally>,
    pub failures: Vec<InstanceRecord>,
}

impl VerifySummary {
    pub fn total_checks(&self) -> usize {
        self.checks.values().map(|t| t.passed + t.failed).sum()
    }

    pub fn failed_checks(&self) -> usize {
        self.checks.values().map(|t| t.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.failed_checks() == 0
    }

    /// Tallies of all checks whose name starts with `prefix`.
    pub fn tally(&self, prefix: &str) -> CheckTally {
        let mut t = CheckTally::default();
        for (name, c) in &self.checks {
            if name.starts_with(prefix) {
                t.passed += c.passed;
                t.failed += c.failed;
                t.skipped += c.skipped;
            }
        }
        t
    }

    fn absorb(&mut self, rep: &CheckReport) {
        for c in &rep.checks {
            let t = self.checks.entry(c.name.clone()).or_default();
            match c.outcome {
                Outcome::Pass => t.passed += 1,
                Outcome::Fail(_) => t.failed += 1,
                Outcome::Skipped(_) => t.skipped += 1,
            }
        }
    }
}

fn fail_text(rep: &CheckReport) -> Vec<String> {
    rep.failures()
        .map(|c| match &c.outcome {
            Outcome::Fail(d) => format!("{}: {d}", c.name),
            _ => c.name.clone(),
        })
        .collect()
}

/// Records `Err` as a failed check instead of aborting the instance.
fn guard<T>(rep: &mut CheckReport, name: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            rep.record(name, Outcome::Fail(e.to_string()));
            None
        }
    }
}

struct RingState<'a> {
    built: &'a BuiltRing,
    name: String,
    fact: LocalFactorization,
    /// Oracle spectra of `Cay(R, S)` and its complement, keyed by `S`.
    oracle: HashMap<ElementSubset, Result<SpectrumMultiset>>,
    complement_oracle: HashMap<ElementSubset, Result<SpectrumMultiset>>,
}

fn check_instance(state: &mut RingState<'_>, x: Elem, cfg: &VerifyConfig) -> (CheckReport, InstanceRecord) {
    let ring = state.built.ring();
    let n = ring.order();
    let mut rep = CheckReport::new();
    let mut rec = InstanceRecord {
        ring: state.name.clone(),
        x: state.built.format_element(x),
        order: n,
        orbit: 0,
        ideal: 0,
        boundaries: Vec::new(),
        spectrum: Vec::new(),
        energy: None,
        complement_energy: None,
        ramanujan: None,
        condition: None,
        failures: Vec::new(),
    };

    let Some(ctx) = guard(&mut rep, "setup.context", build_context(ring, x)) else {
        rec.failures = fail_text(&rep);
        return (rep, rec);
    };
    let Some(data) = guard(&mut rep, "setup.closed_form_data", ClosedFormData::new(ring, &state.fact, x)) else {
        rec.failures = fail_text(&rep);
        return (rep, rec);
    };
    let k = ctx.orbit.len();
    rec.orbit = k;
    rec.ideal = ctx.ideal.len();
    rec.boundaries = data.coords.iter().map(|c| c.boundary).collect();

    rep.expect("structure.orbit_size_multiplies", data.orbit() == k as i128, || {
        format!("|xR*|={k}, product of factor orbits={}", data.orbit())
    });
    rep.expect("structure.ideal_size_multiplies", data.ideal() == ctx.ideal.len() as i128, || {
        format!("|I_x|={}, product of factor ideals={}", ctx.ideal.len(), data.ideal())
    });
    if let Some(r) = guard(&mut rep, "structure.product_orbit", product_orbit_check(ring, &state.fact, x)) {
        let mut r2 = CheckReport::new();
        for c in r.checks {
            r2.record(&format!("structure.{}", c.name), c.outcome);
        }
        rep.extend(r2);
    }

    let Some(graph) = guard(&mut rep, "graph.build", unit_orbit_graph(&ctx)) else {
        rec.failures = fail_text(&rep);
        return (rep, rec);
    };
    rep.expect("graph.regular_of_degree_orbit", is_regular(&graph) == Some(k), || {
        format!("expected {k}-regular, got {:?}", is_regular(&graph))
    });
    if let Some(ok) = guard(&mut rep, "graph.tensor_factorization", tensor_factorization_check(ring, &state.fact, &ctx))
    {
        rep.expect("graph.tensor_factorization", ok, || {
            "Cay(R, xR*) differs from the tensor product of factor graphs".into()
        });
    }

    let closed = guard(&mut rep, "spectrum.closed_form", closed_form_spectrum_from(&data));
    if let Some(spec) = &closed {
        rec.spectrum = spectrum_entries(spec);
        rep.expect("spectrum.dimension", spec.dimension() == n as u64, || {
            format!("dimension {} for |R| = {n}", spec.dimension())
        });
        // a regular graph has one eigenvalue k per component
        let comps = components(&graph).len() as u64;
        rep.expect("graph.components_match_degree_multiplicity", comps == spec.multiplicity(k as i64), || {
            format!("{comps} components, multiplicity of {k} is {}", spec.multiplicity(k as i64))
        });
        rep.expect("spectrum.trace_zero", spec.trace() == 0, || format!("trace {}", spec.trace()));
        rep.expect("spectrum.trace_of_square", spec.trace_of_square() == (n * k) as i128, || {
            format!("Σλ² = {}, |R||xR*| = {}", spec.trace_of_square(), n * k)
        });
        let orc = state.oracle.entry(ctx.orbit.clone()).or_insert_with(|| oracle_spectrum(&graph, cfg.oracle)).clone();
        if let Some(o) = guard(&mut rep, "spectrum.oracle", orc.clone()) {
            rep.expect("spectrum.oracle", &o == spec, || format!("closed form {spec}, oracle {o}"));
        }

        let energy = guard(&mut rep, "energy.closed_form", energy_closed_form_from(&data));
        if let Some(e) = energy {
            rec.energy = Some(e.0);
            let from_closed = energy_from_spectrum(spec);
            rep.expect("energy.matches_closed_spectrum", e == from_closed, || {
                format!("formula {e}, spectrum {from_closed}")
            });
            if let Ok(o) = &orc {
                let from_oracle = energy_from_spectrum(o);
                rep.expect("energy.matches_oracle_spectrum", e == from_oracle, || {
                    format!("formula {e}, oracle {from_oracle}")
                });
            }
        }

        let ce = guard(&mut rep, "complement.closed_form", complement_energy_closed_form_from(&data));
        let cspec = guard(&mut rep, "complement.spectrum", complement_spectrum(spec, n as u64, k as u64));
        if let (Some(ce), Some(cspec)) = (ce, cspec) {
            rec.complement_energy = Some(ce.0);
            let from_spec = energy_from_spectrum(&cspec);
            rep.expect("complement.matches_complement_spectrum", ce == from_spec, || {
                format!("formula {ce}, complement spectrum {from_spec}")
            });
            if n <= cfg.oracle_cap {
                let co = state
                    .complement_oracle
                    .entry(ctx.orbit.clone())
                    .or_insert_with(|| complement(&graph).and_then(|c| oracle_spectrum(&c, cfg.oracle)))
                    .clone();
                if let Some(co) = guard(&mut rep, "complement.oracle", co) {
                    rep.expect("complement.oracle_spectrum", co == cspec, || format!("derived {cspec}, oracle {co}"));
                    let from_oracle = energy_from_spectrum(&co);
                    rep.expect("complement.matches_oracle", ce == from_oracle, || {
                        format!("formula {ce}, oracle {from_oracle}")
                    });
                }
            } else {
                rep.skip("complement.oracle", "ring larger than the oracle cap");
            }
        }
    }

    match full_report(ring, x) {
        Ok(report) => {
            rec.ramanujan = Some(report.spectral_verdict);
            rec.condition = report.condition.map(|c| c.to_string());
            rep.record("ramanujan.three_way_agreement", Outcome::Pass);
            if let Some(o) = closed.as_ref().and_then(|_| state.oracle.get(&ctx.orbit)).and_then(|r| r.as_ref().ok()) {
                rep.expect("ramanujan.spectrum_is_oracle_spectrum", &report.spectrum == o, || {
                    format!("report spectrum {}, oracle {o}", report.spectrum)
                });
            }
            if report.reduced_profile.len() == 1 {
                let e = report.reduced_profile[0];
                let cor = local_corollary_test(e.ideal, e.boundary);
                rep.expect("ramanujan.single_factor_corollary", cor == report.spectral_verdict, || {
                    format!("corollary {cor}, spectral {}", report.spectral_verdict)
                });
            }
        }
        Err(e @ Error::VerdictDisagreement(_)) => {
            rep.record("ramanujan.three_way_agreement", Outcome::Fail(e.to_string()));
        }
        Err(e) => rep.record("ramanujan.report", Outcome::Fail(e.to_string())),
    }
    if let Some(p) = guard(&mut rep, "ramanujan.reduced_profile", reduced_profile(ring, x)) {
        rep.expect("ramanujan.profile_matches_support", p.len() == data.support_size(), || {
            format!("profile {p:?}, support {}", data.support_size())
        });
    }

    rec.failures = fail_text(&rep);
    (rep, rec)
}

/// Structural checks for one local ring and one nonzero element of it.
pub fn check_local_pair(ring: &RingTable, x: Elem, cfg: &OracleConfig) -> CheckReport {
    let mut rep = CheckReport::new();
    let Some(ctx) = guard(&mut rep, "lemma.context", build_context(ring, x)) else {
        return rep;
    };
    if let Some(r) = guard(&mut rep, "lemma.suite", lemma_suite(&ctx)) {
        for c in r.checks {
            rep.record(&format!("lemma.{}", c.name), c.outcome);
        }
    }
    if let Some(r) = guard(&mut rep, "lemma.multipartite", multipartite_check(&ctx)) {
        for c in r.checks {
            rep.record(&format!("lemma.{}", c.name), c.outcome);
        }
    }
    // Cay(I_x, xR*) has the spectrum of one component
    let closed = guard(&mut rep, "lemma.component_spectrum", ideal_component_spectrum(&ctx));
    let sub = guard(&mut rep, "lemma.component_spectrum", ring.restrict(&ctx.ideal));
    if let (Some(closed), Some(sub)) = (closed, sub) {
        let orbit = guard(&mut rep, "lemma.component_spectrum", sub.pull_back(&ctx.orbit));
        let graph =
            orbit.and_then(|o| guard(&mut rep, "lemma.component_spectrum", crate::cayley::cayley_graph(&sub.ring, &o)));
        if let Some(g) = graph {
            if let Some(o) = guard(&mut rep, "lemma.component_spectrum", oracle_spectrum(&g, *cfg)) {
                rep.expect("lemma.component_spectrum", o == closed, || format!("closed form {closed}, oracle {o}"));
            }
        }
    }
    rep
}

fn local_record(name: &str, ring: &RingTable, x: Elem, rep: &CheckReport) -> InstanceRecord {
    InstanceRecord {
        ring: name.to_string(),
        x: ring.label(x).to_string(),
        order: ring.order(),
        orbit: 0,
        ideal: 0,
        boundaries: Vec::new(),
        spectrum: Vec::new(),
        energy: None,
        complement_energy: None,
        ramanujan: None,
        condition: None,
        failures: fail_text(rep),
    }
}

struct RingOutcome {
    instances: Vec<(CheckReport, InstanceRecord)>,
    /// Distinct local factors of this ring, by table hash, with their name.
    locals: Vec<(u64, String, RingTable)>,
}

fn check_ring(expr: &RingExpr, cfg: &VerifyConfig) -> Result<RingOutcome> {
    let built = expr.instantiate()?;
    let fact = local_factorization(built.ring())?;
    let name = expr.to_string();
    let locals = fact
        .factors
        .iter()
        .enumerate()
        .map(|(i, f)| (f.ring.table_hash(), format!("{name} [local factor {}]", i + 1), f.ring.clone()))
        .collect();
    let xs = generators(built.ring(), &name, cfg.seed);
    let mut state = RingState { built: &built, name, fact, oracle: HashMap::new(), complement_oracle: HashMap::new() };
    let instances = xs.into_iter().map(|x| check_instance(&mut state, x, cfg)).collect();
    Ok(RingOutcome { instances, locals })
}

/// Runs the sweep over [`family`]`(cfg.max_order)`.
///
/// Rings are checked in parallel; results are merged in family order, so the
/// summary does not depend on scheduling.
pub fn run(cfg: &VerifyConfig) -> VerifySummary {
    let fam = family(cfg.max_order);
    run_on(&fam, cfg)
}

pub fn run_on(fam: &[RingExpr], cfg: &VerifyConfig) -> VerifySummary {
    let outcomes: Vec<(String, Result<RingOutcome>)> =
        fam.par_iter().map(|e| (e.to_string(), check_ring(e, cfg))).collect();

    let mut summary = VerifySummary { rings: fam.len(), ..Default::default() };
    let mut locals: Vec<(u64, String, RingTable)> = Vec::new();
    let mut seen = HashSet::new();
    for (name, outcome) in outcomes {
        match outcome {
            Ok(o) => {
                for (rep, rec) in o.instances {
                    summary.instances += 1;
                    summary.absorb(&rep);
                    if !rep.passed() {
                        summary.failures.push(rec);
                    }
                }
                for l in o.locals {
                    if seen.insert(l.0) {
                        locals.push(l);
                    }
                }
            }
            Err(e) => {
                let mut rep = CheckReport::new();
                rep.record("setup.build_ring", Outcome::Fail(e.to_string()));
                summary.absorb(&rep);
                summary.failures.push(InstanceRecord {
                    ring: name,
                    x: String::new(),
                    order: 0,
                    orbit: 0,
                    ideal: 0,
                    boundaries: Vec::new(),
                    spectrum: Vec::new(),
                    energy: None,
                    complement_energy: None,
                    ramanujan: None,
                    condition: None,
                    failures: fail_text(&rep),
                });
            }
        }
    }

    let pairs: Vec<(usize, Elem)> = locals
        .iter()
        .enumerate()
        .flat_map(|(i, (_, _, r))| r.elements().filter(move |&e| e != r.zero()).map(move |e| (i, e)))
        .collect();
    let reports: Vec<CheckReport> =
        pairs.par_iter().map(|&(i, x)| check_local_pair(&locals[i].2, x, &cfg.oracle)).collect();
    for ((i, x), rep) in pairs.iter().zip(reports) {
        summary.local_pairs += 1;
        summary.absorb(&rep);
        if !rep.passed() {
            summary.failures.push(local_record(&locals[*i].1, &locals[*i].2, *x, &rep));
        }
    }
    summary
}

/// Convenience for callers holding a ring expression as text.
pub fn run_on_text(specs: &[&str], cfg: &VerifyConfig) -> Result<VerifySummary> {
    let fam = specs.iter().map(|s| parse_ring(s)).collect::<Result<Vec<_>>>()?;
    Ok(run_on(&fam, cfg))
}
