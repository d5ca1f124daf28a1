use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cayring::cayley::{complement, unit_orbit_graph, AdjacencyMatrix};
use cayring::dsl::{parse_ring, BuiltRing};
use cayring::ideal::build_context;
use cayring::ramanujan::{
    condition_classifier, full_report, inequality_test, reduced_profile, spectral_test, ProfileEntry,
};
use cayring::ring::{identify_small_ring, local_factorization, Elem, RingClass};
use cayring::spectra::{
    closed_form_spectrum, complement_energy_closed_form, energy_closed_form, energy_from_spectrum, oracle_spectrum,
    OracleConfig, SpectrumMultiset,
};
use cayring::verify::{self, spectrum_entries, SpectrumEntry, VerifyConfig};
use cayring::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const RING_HELP: &str = "Ring expression: atoms joined by 'x'. Atoms are Zn, GF(q) or GF(p^k), \
and the order-p² presentations A, D, G, K followed by p² (e.g. G9). Example: \"Z4 x GF(9)\"";

const X_HELP: &str = "Generator x, one coordinate per atom: \"(2, t+1)\". Integers for Zn and A, \
polynomials in t for GF and K, and 2a+b or (2,1) for D and G. A single atom may omit the parentheses";

#[derive(Parser)]
#[command(name = "cayring", version, about = "Spectra, energies and Ramanujan tests for Cayley graphs Cay(R, xR*)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, units and local factorization of a ring.
    Info {
        #[arg(help = RING_HELP)]
        ring: String,
        #[arg(long)]
        json: bool,
    },
    /// Spectrum of Cay(R, xR*) from the closed form.
    Spectrum(GraphArgs),
    /// Energy of Cay(R, xR*).
    Energy(GraphArgs),
    /// Energy of the complement of Cay(R, xR*).
    ComplementEnergy(GraphArgs),
    /// Decide whether Cay(R, xR*) is Ramanujan.
    Ramanujan {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Write the edge list of Cay(R, xR*).
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; standard output if omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Cross-check closed forms, oracle and Ramanujan tests over the ring family.
    Verify {
        /// Largest ring order to include.
        #[arg(long, default_value_t = verify::PRODUCT_LIMIT)]
        max_order: usize,
        /// Largest order whose complement graph is checked numerically.
        #[arg(long, default_value_t = 256)]
        oracle_cap: usize,
        /// Seed for sampling generators of rings with more than 64 elements.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Target {
    #[arg(help = RING_HELP)]
    ring: String,
    #[arg(long, help = X_HELP)]
    x: String,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    json: bool,
    /// Also compute the spectrum numerically and compare.
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Spectral,
    Inequality,
    Conditions,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Csv,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn verification(msg: impl Into<String>) -> Self {
        Self { code: 1, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. }
            | Error::NotPrime(_)
            | Error::NonUnitalFactor(_)
            | Error::NonCommutative(_)
            | Error::CapExceeded { .. }
            | Error::InvalidParameter(_)
            | Error::CoordinateOutOfRange(_)
            | Error::ArityMismatch { .. }
            | Error::ZeroGenerator => 2,
            _ => 3,
        };
        let msg = match e {
            Error::ZeroGenerator => "x must be nonzero: the connection set xR* of x = 0 is {0}".to_string(),
            other => other.to_string(),
        };
        Self { code, msg }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self { code: 1, msg: format!("I/O error: {e}") }
    }
}

type CmdResult = Result<(), Failure>;

struct Instance {
    built: BuiltRing,
    x: Elem,
    ring_text: String,
    x_text: String,
}

fn load(target: &Target) -> Result<Instance, Failure> {
    let expr = parse_ring(&target.ring)?;
    let built = expr.instantiate()?;
    let x = built.parse_element(&target.x)?;
    if x == built.ring().zero() {
        return Err(Error::ZeroGenerator.into());
    }
    let x_text = built.format_element(x);
    Ok(Instance { ring_text: expr.to_string(), built, x, x_text })
}

fn graph(inst: &Instance) -> Result<AdjacencyMatrix, Failure> {
    Ok(unit_orbit_graph(&build_context(inst.built.ring(), inst.x)?)?)
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

#[derive(Serialize)]
struct FactorInfo {
    order: usize,
    maximal_ideal: usize,
    residue_field: usize,
    class: Option<String>,
}

#[derive(Serialize)]
struct InfoReport {
    ring: String,
    order: usize,
    unity: String,
    units: usize,
    local: bool,
    factors: Vec<FactorInfo>,
}

fn class_name(c: RingClass) -> Option<String> {
    (c != RingClass::Unidentified).then(|| c.common_name())
}

fn cmd_info(text: &str, json: bool) -> CmdResult {
    let expr = parse_ring(text)?;
    let built = expr.instantiate()?;
    let ring = built.ring();
    let fact = local_factorization(ring)?;
    let factors: Vec<FactorInfo> = fact
        .factors
        .iter()
        .map(|f| FactorInfo {
            order: f.order(),
            maximal_ideal: f.maximal_order(),
            residue_field: f.residue_order(),
            class: if f.order() <= 9 { class_name(identify_small_ring(&f.ring)) } else { None },
        })
        .collect();
    let report = InfoReport {
        ring: expr.to_string(),
        order: ring.order(),
        unity: ring.unity().map(|u| ring.label(u).to_string()).unwrap_or_default(),
        units: ring.units()?.len(),
        local: factors.len() == 1,
        factors,
    };
    if json {
        print_json(&report);
        return Ok(());
    }
    println!("ring: {}", report.ring);
    println!("order: {}", report.order);
    println!("unity: {}", report.unity);
    println!("units: {}", report.units);
    println!("local factors ({}), sorted by |R_i|/|M_i|:", report.factors.len());
    for (i, f) in report.factors.iter().enumerate() {
        let class = f.class.as_deref().map(|c| format!("{c}, ")).unwrap_or_default();
        println!("  R{}: {class}|R_i| = {}, |M_i| = {}", i + 1, f.order, f.maximal_ideal);
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumReport {
    ring: String,
    x: String,
    spectrum: Vec<SpectrumEntry>,
    energy: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

#[derive(Serialize)]
struct EnergyReport {
    ring: String,
    x: String,
    energy: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_energy: Option<u64>,
}

#[derive(Serialize)]
struct ComplementEnergyReport {
    ring: String,
    x: String,
    complement_energy: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_complement_energy: Option<u64>,
}

fn oracle(a: &AdjacencyMatrix) -> Result<SpectrumMultiset, Failure> {
    Ok(oracle_spectrum(a, OracleConfig::default())?)
}

fn cmd_spectrum(args: &GraphArgs) -> CmdResult {
    let inst = load(&args.target)?;
    let spec = closed_form_spectrum(inst.built.ring(), inst.x)?;
    let oracle_spec = if args.check { Some(oracle(&graph(&inst)?)?) } else { None };
    let report = SpectrumReport {
        ring: inst.ring_text.clone(),
        x: inst.x_text.clone(),
        spectrum: spectrum_entries(&spec),
        energy: energy_from_spectrum(&spec).0,
        oracle_agrees: oracle_spec.as_ref().map(|o| *o == spec),
    };
    if args.json {
        print_json(&report);
    } else {
        println!("Cay({}, {}·R*) spectrum: {spec}", report.ring, report.x);
        println!("energy: {}", report.energy);
        if let Some(o) = &oracle_spec {
            println!("oracle: {o} ({})", if *o == spec { "agrees" } else { "DISAGREES" });
        }
    }
    match oracle_spec {
        Some(o) if o != spec => Err(Failure::verification(format!("closed form {spec} differs from oracle {o}"))),
        _ => Ok(()),
    }
}

fn cmd_energy(args: &GraphArgs) -> CmdResult {
    let inst = load(&args.target)?;
    let e = energy_closed_form(inst.built.ring(), inst.x)?.0;
    let oracle_energy = if args.check { Some(energy_from_spectrum(&oracle(&graph(&inst)?)?).0) } else { None };
    let report = EnergyReport { ring: inst.ring_text, x: inst.x_text, energy: e, oracle_energy };
    if args.json {
        print_json(&report);
    } else {
        println!("energy: {e}");
        if let Some(o) = oracle_energy {
            println!("oracle: {o} ({})", if o == e { "agrees" } else { "DISAGREES" });
        }
    }
    match oracle_energy {
        Some(o) if o != e => Err(Failure::verification(format!("closed-form energy {e} differs from oracle {o}"))),
        _ => Ok(()),
    }
}

fn cmd_complement_energy(args: &GraphArgs) -> CmdResult {
    let inst = load(&args.target)?;
    let e = complement_energy_closed_form(inst.built.ring(), inst.x)?.0;
    let oracle_energy = if args.check {
        let c = complement(&graph(&inst)?)?;
        Some(energy_from_spectrum(&oracle(&c)?).0)
    } else {
        None
    };
    let report = ComplementEnergyReport {
        ring: inst.ring_text,
        x: inst.x_text,
        complement_energy: e,
        oracle_complement_energy: oracle_energy,
    };
    if args.json {
        print_json(&report);
    } else {
        println!("complement energy: {e}");
        if let Some(o) = oracle_energy {
            println!("oracle: {o} ({})", if o == e { "agrees" } else { "DISAGREES" });
        }
    }
    match oracle_energy {
        Some(o) if o != e => {
            Err(Failure::verification(format!("closed-form complement energy {e} differs from oracle {o}")))
        }
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct RamanujanOutput {
    ring: String,
    x: String,
    method: &'static str,
    ramanujan: bool,
    condition: Option<String>,
    degree: u64,
    bound_squared: u64,
    reduced_profile: Vec<ProfileEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    ideal_classes: Vec<Option<String>>,
}

fn cmd_ramanujan(target: &Target, method: Method, json: bool) -> CmdResult {
    let inst = load(target)?;
    let ring = inst.built.ring();
    let (name, out) = match method {
        Method::All => {
            let rep = full_report(ring, inst.x)?;
            let classes = rep.ideal_classes.iter().map(|c| c.and_then(class_name)).collect();
            ("all", (rep.spectral_verdict, rep.condition, rep.k, rep.reduced_profile, classes))
        }
        _ => {
            let spec = closed_form_spectrum(ring, inst.x)?;
            let k = build_context(ring, inst.x)?.orbit.len() as u64;
            let profile = reduced_profile(ring, inst.x)?;
            let condition = condition_classifier(&profile);
            let (name, verdict) = match method {
                Method::Spectral => ("spectral", spectral_test(&spec, k)?),
                Method::Inequality => ("inequality", inequality_test(&profile, k)?),
                _ => ("conditions", condition.is_some()),
            };
            (name, (verdict, condition, k, profile, Vec::new()))
        }
    };
    let (verdict, condition, k, profile, classes) = out;
    let report = RamanujanOutput {
        ring: inst.ring_text,
        x: inst.x_text,
        method: name,
        ramanujan: verdict,
        condition: condition.map(|c| c.to_string()),
        degree: k,
        bound_squared: 4 * (k - 1),
        reduced_profile: profile,
        ideal_classes: classes,
    };
    if json {
        print_json(&report);
        return Ok(());
    }
    println!("ramanujan: {}", report.ramanujan);
    println!("condition: {}", report.condition.as_deref().unwrap_or("none"));
    println!("degree k = {}, Ramanujan bound 2√(k−1) = √{}", report.degree, report.bound_squared);
    let mut line = String::from("reduced profile (|I|, |M|):");
    for (i, e) in report.reduced_profile.iter().enumerate() {
        let class = report.ideal_classes.get(i).cloned().flatten().map(|c| format!(" {c}")).unwrap_or_default();
        let _ = write!(line, " ({}, {}{}{class})", e.ideal, e.boundary, if e.unit { ", unit" } else { "" });
    }
    println!("{line}");
    println!("method: {}", report.method);
    Ok(())
}

fn render_csv(a: &AdjacencyMatrix) -> String {
    let mut s = String::from("source,target\n");
    for (u, v) in a.edges() {
        let _ = writeln!(s, "{u},{v}");
    }
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn render_dot(inst: &Instance, a: &AdjacencyMatrix) -> String {
    let ring = inst.built.ring();
    let mut s = String::new();
    let _ = writeln!(s, "graph \"Cay({}, {}R*)\" {{", dot_escape(&inst.ring_text), dot_escape(&inst.x_text));
    for v in ring.elements() {
        let _ = writeln!(s, "  {v} [label=\"{}\"];", dot_escape(ring.label(v)));
    }
    for (u, v) in a.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

fn cmd_export(target: &Target, format: Format, output: Option<&PathBuf>) -> CmdResult {
    let inst = load(target)?;
    let a = graph(&inst)?;
    let text = match format {
        Format::Csv => render_csv(&a),
        Format::Dot => render_dot(&inst, &a),
    };
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_verify(max_order: usize, oracle_cap: usize, seed: u64, json: bool) -> CmdResult {
    let cfg = VerifyConfig { max_order, oracle_cap, seed, ..Default::default() };
    let summary = verify::run(&cfg);
    if json {
        print_json(&summary);
    } else {
        println!(
            "{} rings, {} instances, {} local pairs, {} checks, {} failures",
            summary.rings,
            summary.instances,
            summary.local_pairs,
            summary.total_checks(),
            summary.failed_checks()
        );
        for rec in &summary.failures {
            println!("{}", serde_json::to_string(rec).expect("records serialize"));
        }
    }
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::verification(format!("{} checks failed", summary.failed_checks())))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Info { ring, json } => cmd_info(ring, *json),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Energy(args) => cmd_energy(args),
        Command::ComplementEnergy(args) => cmd_complement_energy(args),
        Command::Ramanujan { target, method, json } => cmd_ramanujan(target, *method, *json),
        Command::Export { target, format, output } => cmd_export(target, *format, output.as_ref()),
        Command::Verify { max_order, oracle_cap, seed, json } => cmd_verify(*max_order, *oracle_cap, *seed, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
