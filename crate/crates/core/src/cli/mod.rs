//! Command-line front end: argument parsing, config loading and report
//! emission. `run` is the whole program minus process exit, so it can be
//! driven from tests.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{
    ab_failures, bracket_l, bracket_tau, check_identities, check_random, heisenberg_failures,
    parse_l, GradingBasis,
};
use crate::coeff::{Backend, Exact};
use crate::error::{Error, Result};
use crate::hwmod::{
    build_hw_module_prime, build_with, growth_check, integrability_probe, stability_scan, Engine,
    TopModule, TruncationParams,
};
use crate::isomap::{basis_elements, l_box, phi_tau, phi_tau_slices, verify_hom, verify_phi_aff};
use crate::l0mod::{build_eval_module, character_module};
use crate::quasifin::{verdict, Functional, SearchParams, Verdict};
use crate::ztwo::{extend_z2, shift_audit, verify_w, z2_dims, SubmoduleSpecW};

pub use config::{BackendChoice, ModuleData, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "qtorus",
    version,
    about = "Rank-3 quantum torus Lie algebra toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Structural checks on a box of basis elements.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Bracket of two elements of L.
    Bracket {
        x: String,
        y: String,
        #[arg(long)]
        basis: Option<String>,
    },
    /// Build the graded highest-weight module.
    BuildHw(ModuleArgs),
    /// Dimensions across a sequence of truncation windows.
    Dims {
        #[command(flatten)]
        m: ModuleArgs,
        /// Comma-separated generator windows; the probe window follows.
        #[arg(long, default_value = "4,6,8")]
        windows: String,
    },
    /// Quasifiniteness verdict for the configured degree-zero data.
    Quasifinite {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Cell dimensions of the Z^2-graded quotient with top W.
    Z2Dims {
        #[command(flatten)]
        m: ModuleArgs,
        #[arg(long = "loop")]
        loop_window: Option<i64>,
    },
    /// Growth and integrability probes on a built module.
    Probe {
        #[command(subcommand)]
        what: ProbeCmd,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Skew-symmetry, Jacobi and grading on all triples of a box.
    Jacobi {
        #[arg(long = "box", default_value_t = 2)]
        bound: i64,
        /// Extra random triples drawn from [-5, 5]^2.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The map to the central extension of gl2 over the quantum torus.
    IsoTau {
        #[arg(long = "box", default_value_t = 3)]
        bound: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The degree-zero subalgebra: affine map (m21 odd) or Heisenberg check (m21 even).
    IsoAff {
        #[arg(long)]
        basis: String,
        #[arg(long = "box", default_value_t = 3)]
        bound: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ProbeCmd {
    Growth(ModuleArgs),
    Integrability {
        #[command(flatten)]
        m: ModuleArgs,
        /// Raw torus index `a,b` with `a` odd.
        #[arg(long, allow_hyphen_values = true)]
        index: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i64,
        #[arg(long, default_value_t = 0)]
        vector: usize,
        #[arg(long, default_value_t = 3)]
        max_power: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct ModuleArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    window: Option<i64>,
    #[arg(long)]
    probe: Option<i64>,
    #[arg(long)]
    backend: Option<BackendChoice>,
    #[arg(long)]
    seed: Option<u64>,
    /// Window for the post-build commutation audit.
    #[arg(long, default_value_t = 2)]
    audit_window: i64,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl std::str::FromStr for BackendChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        config::parse_backend(s)
    }
}

impl ModuleArgs {
    fn load(&self) -> Result<RunConfig> {
        let mut c = RunConfig::from_file(&self.config)?;
        let t = c.trunc;
        let window = self.window.unwrap_or(t.gen_window);
        let probe = self.probe.unwrap_or(if self.window.is_some() {
            window
        } else {
            t.probe_window
        });
        c.trunc = TruncationParams::new(window, probe, self.depth.unwrap_or(t.max_depth))?;
        if let Some(b) = self.backend {
            c.backend = b;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if self.json.is_some() {
            c.output_json = self.json.clone();
        }
        if self.csv.is_some() {
            c.output_csv = self.csv.clone();
        }
        Ok(c)
    }
}

/// `(m11,m12);(m21,m22)`, parentheses optional.
pub fn parse_basis(s: &str) -> Result<GradingBasis> {
    let nums: Vec<i64> = s
        .split([';', ','])
        .map(|x| x.trim().trim_matches(|c| c == '(' || c == ')').trim())
        .map(|x| {
            x.parse()
                .map_err(|_| Error::Usage(format!("bad basis `{s}`")))
        })
        .collect::<Result<_>>()?;
    match nums.as_slice() {
        [a, b, c, d] => GradingBasis::new((*a, *b), (*c, *d)),
        _ => Err(Error::Usage(format!(
            "basis needs four integers, got `{s}`"
        ))),
    }
}

/// The degree-zero module a config describes.
pub fn top_module(c: &RunConfig) -> Result<Arc<dyn TopModule>> {
    Ok(match &c.module {
        ModuleData::Character(psi) => Arc::new(character_module(psi.clone())),
        ModuleData::Eval(spec) => Arc::new(build_eval_module(spec.clone(), &c.basis)?),
    })
}

pub fn functional(c: &RunConfig) -> Functional {
    match &c.module {
        ModuleData::Character(psi) => Functional::Even(psi.clone()),
        ModuleData::Eval(spec) => Functional::Odd(spec.clone()),
    }
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Writes the JSON report to its file (if any) and to `out` otherwise.
fn emit_json(out: &mut dyn Write, path: Option<&Path>, v: &Value) -> Result<()> {
    let text = pretty(v);
    match path {
        Some(p) => write_file(p, &text),
        None => io(out.write_all(text.as_bytes())),
    }
}

fn io(r: std::io::Result<()>) -> Result<()> {
    r.map_err(|e| Error::Usage(format!("write failed: {e}")))
}

fn dims_csv(dims: &[usize]) -> String {
    let mut s = String::from("s,dim\n");
    for (i, d) in dims.iter().enumerate() {
        s.push_str(&format!("{i},{d}\n"));
    }
    s
}

/// Parses arguments and runs one command; returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            io(write!(out, "{e}"))?;
            return Ok(code);
        }
    };
    match cli.cmd {
        Cmd::Verify { what } => verify(what, out),
        Cmd::Bracket { x, y, basis } => {
            // validates the basis argument even though the bracket is basis-free
            if let Some(b) = basis {
                parse_basis(&b)?;
            }
            let z = bracket_l(&parse_l(&x)?, &parse_l(&y)?);
            io(writeln!(out, "{z}"))?;
            Ok(0)
        }
        Cmd::BuildHw(m) => build_hw(&m.load()?, m.audit_window, out),
        Cmd::Dims { m, windows } => dims(&m.load()?, &windows, out),
        Cmd::Quasifinite {
            config,
            max_order,
            window,
            json,
        } => {
            let c = RunConfig::from_file(&config)?;
            let params = SearchParams {
                max_order: max_order.unwrap_or(c.max_order),
                window: window.unwrap_or(c.qf_window),
            };
            let v = verdict(&functional(&c), params)?;
            let report = verdict_json(&v, &c.basis);
            emit_json(out, json.as_deref().or(c.output_json.as_deref()), &report)?;
            Ok(0)
        }
        Cmd::Z2Dims { m, loop_window } => {
            let c = m.load()?;
            z2(&c, loop_window.unwrap_or(c.loop_window), out)
        }
        Cmd::Probe { what } => probe(what, out),
    }
}

fn verify(what: VerifyCmd, out: &mut dyn Write) -> Result<i32> {
    match what {
        VerifyCmd::Jacobi {
            bound,
            random,
            seed,
            basis,
            json: path,
        } => {
            let basis = match basis {
                Some(b) => parse_basis(&b)?,
                None => GradingBasis::standard(),
            };
            let boxed = check_identities(&l_box(bound), &basis);
            let rnd = check_random(random, 5, seed, &basis);
            let ok = boxed.passed() && rnd.passed();
            let report = json!({
                "schemaVersion": SCHEMA_VERSION,
                "command": "verify jacobi",
                "box": bound,
                "boxReport": boxed,
                "randomReport": rnd,
                "seed": seed,
                "passed": ok,
            });
            emit_json(out, path.as_deref(), &report)?;
            Ok(if ok { 0 } else { 1 })
        }
        VerifyCmd::IsoTau { bound, json: path } => {
            let src = basis_elements(&l_box(bound));
            let hom = verify_hom(&src, |x| Ok(phi_tau(x)), bracket_l, bracket_tau);
            let slices = phi_tau_slices(bound, bound);
            let ok = hom.passed() && slices.iter().all(|s| s.ok);
            let report = json!({
                "schemaVersion": SCHEMA_VERSION,
                "command": "verify iso-tau",
                "box": bound,
                "checkedPairs": hom.checked_pairs,
                "failures": hom.failures,
                "sourceDim": hom.source_dim,
                "imageRank": hom.image_rank,
                "injective": hom.injective,
                "slices": slices,
                "passed": ok,
            });
            emit_json(out, path.as_deref(), &report)?;
            Ok(if ok { 0 } else { 1 })
        }
        VerifyCmd::IsoAff {
            basis,
            bound,
            json: path,
        } => {
            let b = parse_basis(&basis)?;
            let report = if b.m21_odd() {
                let hom = verify_phi_aff(&b, bound)?;
                let ab = ab_failures(&b, bound);
                let ok = hom.passed() && ab.is_empty();
                json!({
                    "schemaVersion": SCHEMA_VERSION,
                    "command": "verify iso-aff",
                    "case": "affine",
                    "box": bound,
                    "checkedPairs": hom.checked_pairs,
                    "failures": hom.failures,
                    "injective": hom.injective,
                    "abFailures": ab,
                    "passed": ok,
                })
            } else {
                let bad = heisenberg_failures(&b, bound);
                json!({
                    "schemaVersion": SCHEMA_VERSION,
                    "command": "verify iso-aff",
                    "case": "heisenberg",
                    "box": bound,
                    "failures": bad,
                    "passed": bad.is_empty(),
                })
            };
            emit_json(out, path.as_deref(), &report)?;
            Ok(if report["passed"] == json!(true) {
                0
            } else {
                1
            })
        }
    }
}

/// Everything a build report needs from one engine.
fn engine_summary<B: Backend>(
    e: &Engine<B>,
    audit_window: i64,
) -> Result<(Vec<usize>, Vec<String>)> {
    let audit = e
        .audit(audit_window)?
        .into_iter()
        .map(|f| format!("{}: {}", f.kind, f.detail))
        .collect();
    Ok((e.dims(), audit))
}

fn build_hw(c: &RunConfig, audit_window: i64, out: &mut dyn Write) -> Result<i32> {
    let top = top_module(c)?;
    let (dims, mut audit, backend_dims) = match c.backend {
        BackendChoice::Exact => {
            let e = build_with(top.clone(), &c.basis, c.trunc, c.direction, Exact)?;
            let (d, a) = engine_summary(&e, audit_window)?;
            (d, a, json!({ "exact": e.dims() }))
        }
        BackendChoice::Prime => {
            let e = build_hw_module_prime(top.clone(), &c.basis, c.trunc, c.direction, c.seed)?;
            let (d, a) = engine_summary(&e, audit_window)?;
            (d, a, json!({ "prime": e.dims() }))
        }
        BackendChoice::Both => {
            let e = build_with(top.clone(), &c.basis, c.trunc, c.direction, Exact)?;
            let p = build_hw_module_prime(top.clone(), &c.basis, c.trunc, c.direction, c.seed)?;
            let (d, mut a) = engine_summary(&e, audit_window)?;
            if p.dims() != d {
                a.push(format!(
                    "backend disagreement: exact {:?}, prime {:?}",
                    d,
                    p.dims()
                ));
            }
            (d, a, json!({ "exact": e.dims(), "prime": p.dims() }))
        }
    };
    // stability companion: a wider truncation on the prime backend
    let wide = TruncationParams::new(
        c.trunc.gen_window + 2,
        c.trunc.probe_window + 2,
        c.trunc.max_depth,
    )?;
    let wide_dims = build_hw_module_prime(top, &c.basis, wide, c.direction, c.seed)?.dims();
    let stable = wide_dims == dims;
    audit.sort();
    let report = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": "build-hw",
        "basis": [c.basis.m1, c.basis.m2],
        "truncation": { "genWindow": c.trunc.gen_window, "probeWindow": c.trunc.probe_window, "depth": c.trunc.max_depth },
        "dims": dims,
        "backends": backend_dims,
        "stable": stable,
        "stabilityCheck": { "genWindow": wide.gen_window, "probeWindow": wide.probe_window, "backend": "prime", "dims": wide_dims },
        "auditFailures": audit,
        "seed": c.seed,
    });
    if let Some(p) = &c.output_json {
        write_file(p, &pretty(&report))?;
    }
    let csv = dims_csv(&dims);
    match &c.output_csv {
        Some(p) => write_file(p, &csv)?,
        None => io(out.write_all(csv.as_bytes()))?,
    }
    Ok(if audit.is_empty() { 0 } else { 1 })
}

fn dims(c: &RunConfig, windows: &str, out: &mut dyn Write) -> Result<i32> {
    let ks: Vec<i64> = windows
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad window list `{windows}`")))
        })
        .collect::<Result<_>>()?;
    let truncs: Vec<TruncationParams> = ks
        .iter()
        .map(|&k| {
            TruncationParams::new(
                k,
                k + (c.trunc.probe_window - c.trunc.gen_window),
                c.trunc.max_depth,
            )
        })
        .collect::<Result<_>>()?;
    let top = top_module(c)?;
    let mut scans = Vec::new();
    if matches!(c.backend, BackendChoice::Exact | BackendChoice::Both) {
        scans.push((
            "exact",
            stability_scan(top.clone(), &c.basis, &truncs, c.direction, Exact)?,
        ));
    }
    if matches!(c.backend, BackendChoice::Prime | BackendChoice::Both) {
        let rows: Result<Vec<_>> = truncs
            .iter()
            .map(|t| {
                build_hw_module_prime(top.clone(), &c.basis, *t, c.direction, c.seed)
                    .map(|e| (t, e.dims()))
            })
            .collect();
        let rows: Vec<crate::hwmod::ScanRow> = rows?
            .into_iter()
            .map(|(t, dims)| crate::hwmod::ScanRow {
                gen_window: t.gen_window,
                probe_window: t.probe_window,
                dims,
            })
            .collect();
        let n = rows.len();
        let stable = n >= 2 && rows[n - 2].dims == rows[n - 1].dims;
        scans.push(("prime", crate::hwmod::ScanReport { rows, stable }));
    }
    let agree = scans.windows(2).all(|w| w[0].1.rows == w[1].1.rows);
    let stable = scans.iter().all(|s| s.1.stable);
    let mut csv = String::from("backend,genWindow,probeWindow");
    for s in 0..=c.trunc.max_depth {
        csv.push_str(&format!(",s{s}"));
    }
    csv.push('\n');
    for (name, scan) in &scans {
        for r in &scan.rows {
            csv.push_str(&format!("{name},{},{}", r.gen_window, r.probe_window));
            for d in &r.dims {
                csv.push_str(&format!(",{d}"));
            }
            csv.push('\n');
        }
    }
    let report = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": "dims",
        "scans": scans.iter().map(|(n, s)| json!({ "backend": n, "rows": s.rows, "stable": s.stable })).collect::<Vec<_>>(),
        "stable": stable,
        "backendAgreement": agree,
    });
    if let Some(p) = &c.output_json {
        write_file(p, &pretty(&report))?;
    }
    match &c.output_csv {
        Some(p) => write_file(p, &csv)?,
        None => io(out.write_all(csv.as_bytes()))?,
    }
    Ok(if stable && agree { 0 } else { 1 })
}

pub fn verdict_json(v: &Verdict, basis: &GradingBasis) -> Value {
    match v {
        Verdict::Quasifinite {
            certificate,
            checked_range,
        } => json!({
            "schemaVersion": SCHEMA_VERSION,
            "verdict": "Quasifinite",
            "certificate": {
                "a": strings(&certificate.coeffs),
                "b": strings(&certificate.b_coeffs(basis)),
                "degree": certificate.degree(),
            },
            "checkedRange": [checked_range.0, checked_range.1],
        }),
        Verdict::UnknownWithinWindow { max_order, window } => json!({
            "schemaVersion": SCHEMA_VERSION,
            "verdict": "UnknownWithinWindow",
            "certificate": null,
            "checkedRange": null,
            "maxOrder": max_order,
            "window": window,
        }),
    }
}

fn z2(c: &RunConfig, loop_window: i64, out: &mut dyn Write) -> Result<i32> {
    let top = top_module(c)?;
    let spec =
        c.w.clone()
            .unwrap_or_else(|| SubmoduleSpecW::full(top.dim()));
    let wrep = verify_w(top.as_ref(), &c.basis.clone(), &spec, c.trunc.gen_window)?;
    let base_trunc = TruncationParams::new(c.trunc.gen_window, c.trunc.probe_window, 0)?;
    let (grid, audit) = match c.backend {
        BackendChoice::Prime => {
            let base = build_hw_module_prime(top, &c.basis, base_trunc, c.direction, c.seed)?;
            let backend = base.backend;
            let (g, e) = z2_dims(&extend_z2(base, loop_window), &spec, c.trunc, backend)?;
            (g, shift_audit(&e)?)
        }
        _ => {
            let base = build_with(top, &c.basis, base_trunc, c.direction, Exact)?;
            let (g, e) = z2_dims(&extend_z2(base, loop_window), &spec, c.trunc, Exact)?;
            (g, shift_audit(&e)?)
        }
    };
    let report = json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": "z2-dims",
        "pattern": spec,
        "wReport": wrep,
        "grid": grid,
        "shiftAuditFailures": audit,
    });
    if let Some(p) = &c.output_json {
        write_file(p, &pretty(&report))?;
    }
    let csv = grid.to_csv();
    match &c.output_csv {
        Some(p) => write_file(p, &csv)?,
        None => io(out.write_all(csv.as_bytes()))?,
    }
    Ok(if audit.is_empty() && wrep.irreducible_at_window {
        0
    } else {
        1
    })
}

fn exact_engine(c: &RunConfig) -> Result<Engine<Exact>> {
    build_with(top_module(c)?, &c.basis, c.trunc, c.direction, Exact)
}

fn probe(what: ProbeCmd, out: &mut dyn Write) -> Result<i32> {
    match what {
        ProbeCmd::Growth(m) => {
            let c = m.load()?;
            let g = growth_check(&exact_engine(&c)?)?;
            let witnesses_ok = g.witness_ranks.iter().all(|&(n, r)| r >= n);
            let ok = g.holds && witnesses_ok;
            let report = json!({
                "schemaVersion": SCHEMA_VERSION,
                "command": "probe growth",
                "growth": g,
                "witnessRanksReachN": witnesses_ok,
                "passed": ok,
            });
            emit_json(out, c.output_json.as_deref(), &report)?;
            Ok(if ok { 0 } else { 1 })
        }
        ProbeCmd::Integrability {
            m,
            index,
            sign,
            vector,
            max_power,
        } => {
            let c = m.load()?;
            let idx: Vec<i64> = index
                .split(',')
                .map(|x| x.trim().trim_matches(|ch| ch == '(' || ch == ')').parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Usage(format!("bad index `{index}`")))?;
            let [a, b] = idx.as_slice() else {
                return Err(Error::Usage(format!(
                    "index needs two integers, got `{index}`"
                )));
            };
            let p = integrability_probe(&exact_engine(&c)?, (*a, *b), sign, vector, max_power)?;
            let report = json!({
                "schemaVersion": SCHEMA_VERSION,
                "command": "probe integrability",
                "index": [a, b],
                "sign": sign,
                "vector": vector,
                "maxPower": max_power,
                "nilpotentAt": p,
            });
            emit_json(out, c.output_json.as_deref(), &report)?;
            Ok(0)
        }
    }
}
