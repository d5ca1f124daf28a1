//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use cayring::cayley::{complement, unit_orbit_graph};
use cayring::dsl::parse_ring;
use cayring::ideal::build_context;
use cayring::ramanujan::{full_report, Condition};
use cayring::ring::{
    identify_small_ring, make_cyclic_ring, make_presented_p2, ring_isomorphic, PresentedKind, RingClass, RingTable,
};
use cayring::spectra::{
    complement_energy_closed_form, energy_closed_form, energy_from_spectrum, oracle_spectrum, OracleConfig,
};
use cayring::verify::{family, run_on, VerifyConfig, VerifySummary, PRODUCT_LIMIT};

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

fn element(spec: &str, x: &str) -> (RingTable, usize) {
    let built = parse_ring(spec).unwrap().instantiate().unwrap();
    let e = built.parse_element(x).unwrap();
    (built.product.ring, e)
}

/// Energy of the oracle spectrum of `Cay(R, xR*)`.
fn oracle_energy(spec: &str, x: &str) -> u64 {
    let (r, e) = element(spec, x);
    let g = unit_orbit_graph(&build_context(&r, e).unwrap()).unwrap();
    energy_from_spectrum(&oracle_spectrum(&g, OracleConfig::default()).unwrap()).0
}

fn oracle_complement_energy(spec: &str, x: &str) -> u64 {
    let (r, e) = element(spec, x);
    let g = unit_orbit_graph(&build_context(&r, e).unwrap()).unwrap();
    energy_from_spectrum(&oracle_spectrum(&complement(&g).unwrap(), OracleConfig::default()).unwrap()).0
}

fn sweep_line(s: &VerifySummary, prefixes: &[&str]) -> Outcome {
    let setup = s.tally("setup.");
    let (mut passed, mut failed) = (0, setup.failed);
    for p in prefixes {
        let t = s.tally(p);
        passed += t.passed;
        failed += t.failed;
    }
    Outcome::new(passed > 0 && failed == 0, format!("{passed} checks passed, {failed} failed"))
}

fn spectrum_oracle(s: &VerifySummary) -> Outcome {
    sweep_line(s, &["spectrum.", "graph.", "structure."])
}

fn energy_identities(s: &VerifySummary) -> Outcome {
    let spots = [("Z6", "1", 8), ("Z4", "2", 4), ("Z9", "3", 12)];
    let mut bad = Vec::new();
    for (spec, x, want) in spots {
        let (r, e) = element(spec, x);
        let closed = energy_closed_form(&r, e).unwrap().0;
        let oracle = oracle_energy(spec, x);
        if closed != want || oracle != want {
            bad.push(format!("{spec}, x={x}: closed {closed}, oracle {oracle}, expected {want}"));
        }
    }
    let sweep = sweep_line(s, &["energy."]);
    Outcome::new(sweep.ok && bad.is_empty(), format!("{}; spot values: {}", sweep.detail, spot_text(&bad)))
}

fn complement_energy(s: &VerifySummary) -> Outcome {
    let (r, e) = element("Z4", "2");
    let closed = complement_energy_closed_form(&r, e).unwrap().0;
    let oracle = oracle_complement_energy("Z4", "2");
    let mut bad = Vec::new();
    if closed != 4 || oracle != 4 {
        bad.push(format!("Z4, x=2: closed {closed}, oracle {oracle}, expected 4"));
    }
    let sweep = sweep_line(s, &["complement."]);
    let t = s.tally("complement.oracle_spectrum");
    Outcome::new(
        sweep.ok && bad.is_empty() && t.passed > 0,
        format!("{} ({} oracle comparisons); spot values: {}", sweep.detail, t.passed, spot_text(&bad)),
    )
}

fn lemma_suite(s: &VerifySummary) -> Outcome {
    let line = sweep_line(s, &["lemma."]);
    Outcome::new(line.ok, format!("{} local pairs, {}", s.local_pairs, line.detail))
}

fn ramanujan_agreement(s: &VerifySummary) -> Outcome {
    let required: [(&str, &str, bool, Option<Condition>); 4] = [
        ("Z6", "1", true, Some(Condition::VIII)),
        ("Z3 x Z3 x Z3", "(1, 1, 1)", true, Some(Condition::II)),
        ("Z3 x Z3 x Z3 x Z3", "(1, 1, 1, 1)", false, None),
        ("Z8", "2", true, Some(Condition::I)),
    ];
    let mut bad = Vec::new();
    for (spec, x, verdict, cond) in required {
        let (r, e) = element(spec, x);
        match full_report(&r, e) {
            Ok(rep) if rep.spectral_verdict == verdict && rep.condition == cond => {}
            Ok(rep) => bad.push(format!("{spec}, x={x}: got {} via {:?}", rep.spectral_verdict, rep.condition)),
            Err(err) => bad.push(format!("{spec}, x={x}: {err}")),
        }
    }
    // second eigenvalue of (Z3)^4 with all-unit x is 8 > 2√15
    let (r, e) = element("Z3 x Z3 x Z3 x Z3", "(1, 1, 1, 1)");
    if let Ok(rep) = full_report(&r, e) {
        let second = rep.spectrum.eigenvalues().map(i64::abs).filter(|&l| l < 16).max();
        if second != Some(8) {
            bad.push(format!("(Z3)^4 second eigenvalue {second:?}"));
        }
    }
    let sweep = sweep_line(s, &["ramanujan."]);
    let cor = s.tally("ramanujan.single_factor_corollary");
    Outcome::new(
        sweep.ok && bad.is_empty() && cor.passed > 0 && cor.failed == 0,
        format!(
            "{}; {} single-factor corollary comparisons; required verdicts: {}",
            sweep.detail,
            cor.passed,
            spot_text(&bad)
        ),
    )
}

fn catalog_integrity() -> Outcome {
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        let rings: Vec<RingTable> =
            PresentedKind::COMMUTATIVE.iter().map(|&k| make_presented_p2(k, p).unwrap()).collect();
        for i in 0..rings.len() {
            for j in i + 1..rings.len() {
                if ring_isomorphic(&rings[i], &rings[j]).unwrap() {
                    bad.push(format!("p={p}: kinds {i} and {j} are isomorphic"));
                }
            }
        }
    }
    let z8 = make_cyclic_ring(8).unwrap();
    let i2 = z8.restrict(&z8.principal_ideal(2)).unwrap();
    if identify_small_ring(&i2.ring) != RingClass::Presented(PresentedKind::B, 2) {
        bad.push("I_2 in Z8 is not identified as B4".into());
    }
    let z16 = make_cyclic_ring(16).unwrap();
    let i4 = z16.restrict(&z16.principal_ideal(4)).unwrap();
    if identify_small_ring(&i4.ring) != RingClass::Presented(PresentedKind::C, 2) {
        bad.push("I_4 in Z16 is not identified as C4".into());
    }
    Outcome::new(bad.is_empty(), format!("18 catalog rings, ideal identification: {}", spot_text(&bad)))
}

fn parser_round_trip() -> Outcome {
    let (mut rings, mut elements) = (0usize, 0usize);
    let mut bad = Vec::new();
    for expr in family(PRODUCT_LIMIT) {
        rings += 1;
        let text = expr.to_string();
        match parse_ring(&text) {
            Ok(e) if e == expr => {}
            other => {
                bad.push(format!("{text} re-parsed as {other:?}"));
                continue;
            }
        }
        let built = expr.instantiate().unwrap();
        for e in built.ring().elements() {
            elements += 1;
            let label = built.format_element(e);
            match built.parse_element(&label) {
                Ok(back) if back == e => {}
                other => bad.push(format!("{text}: {label:?} re-parsed as {other:?}")),
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{rings} ring specs, {elements} element labels; {}", spot_text(&bad)))
}

fn spot_text(bad: &[String]) -> String {
    match bad.len() {
        0 => "all match".into(),
        _ => bad.join("; "),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let summary = run_on(&family(PRODUCT_LIMIT), &VerifyConfig::default());
    let sweep_time = start.elapsed();
    println!(
        "sweep: {} rings, {} instances, {} local pairs, {} checks in {:.1}s",
        summary.rings,
        summary.instances,
        summary.local_pairs,
        summary.total_checks(),
        sweep_time.as_secs_f64()
    );
    for rec in summary.failures.iter().take(20) {
        println!("  failing instance: {}", serde_json::to_string(rec).unwrap());
    }

    let results = [
        ("1 spectrum oracle equivalence", spectrum_oracle(&summary)),
        ("2 energy identities", energy_identities(&summary)),
        ("3 complement energy", complement_energy(&summary)),
        ("4 lemma suite", lemma_suite(&summary)),
        ("5 ramanujan three-way agreement", ramanujan_agreement(&summary)),
        ("6 catalog integrity", catalog_integrity()),
        ("7 parser round-trip", parser_round_trip()),
    ];
    let mut all = true;
    for (name, r) in &results {
        println!("{} criterion {name}: {}", if r.ok { "PASS" } else { "FAIL" }, r.detail);
        all &= r.ok;
    }
    println!("total time {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
