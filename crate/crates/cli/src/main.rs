//! `nkconf`: command-line access to the configuration, census and
//! orientability tools.
//!
//! Exit codes: 0 success (or the positive answer), 1 the negative answer,
//! 2 malformed input or flags, 3 search budget exhausted.

mod manifest;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use manifest::{sha256_hex, write_atomic, RunManifest};
use nkconf::{
    are_isomorphic, canonical_code, classify_orientability, dualize, enumerate_configurations, euler_counts,
    feasibility_gate, generalize, is_chirotope, min_gate_passing_n, orientability, poincare_polynomial, CensusEntry,
    ClassificationSummary, Configuration, EnumerateOptions, Outcome, SolverOptions, Symmetry, VarOrder, Verdict,
    WiringDiagram,
};

const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "nkconf", version, about = "n_k configurations, census and orientability")]
struct Cli {
    /// Machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for census and classification (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Size {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Clone, Copy)]
struct Search {
    /// Maximum number of branching decisions per matroid.
    #[arg(long, default_value_t = SolverOptions::default().budget)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = OrderArg::MostConstrained)]
    order: OrderArg,
    #[arg(long, value_enum, default_value_t = SymmetryArg::Reorientation)]
    symmetry: SymmetryArg,
}

#[derive(ValueEnum, Clone, Copy)]
enum OrderArg {
    MostConstrained,
    Lexicographic,
}

#[derive(ValueEnum, Clone, Copy)]
enum SymmetryArg {
    Negation,
    Reorientation,
}

impl Search {
    fn options(self) -> SolverOptions {
        SolverOptions {
            budget: self.budget,
            order: match self.order {
                OrderArg::MostConstrained => VarOrder::MostConstrained,
                OrderArg::Lexicographic => VarOrder::Lexicographic,
            },
            symmetry: match self.symmetry {
                SymmetryArg::Negation => Symmetry::Negation,
                SymmetryArg::Reorientation => Symmetry::Reorientation,
            },
        }
    }

    fn params(self) -> Value {
        let o = self.options();
        json!({ "budget": o.budget, "order": o.order, "symmetry": o.symmetry })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Euler-count feasibility gate for (n, k); with only --k, the first n that passes.
    EulerGate {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        k: i64,
    },
    /// Isomorph-free census of all n_k configurations.
    Enumerate {
        #[command(flatten)]
        size: Size,
        /// Directory for one file per class plus census.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow n*k above the default ceiling.
        #[arg(long)]
        allow_large: bool,
    },
    /// Census plus the orientability verdict of every class.
    Classify {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Decide whether the general-position matroid of a configuration is orientable.
    Orientable {
        config: PathBuf,
        #[command(flatten)]
        search: Search,
        /// Write the chirotope found to this file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Canonical code (hex) of a configuration.
    Canon { config: PathBuf },
    /// Isomorphism test; prints a point map on success.
    Iso { a: PathBuf, b: PathBuf },
    /// Polar configuration.
    Dual {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Poincaré polynomial of the general-position arrangement.
    Poincare { config: PathBuf },
    /// Validate a wiring diagram, optionally against a configuration.
    VerifyWiring {
        wiring: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Draw a wiring diagram as SVG.
    Render {
        wiring: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Event index drawn in the highlight colour.
        #[arg(long)]
        highlight: Option<usize>,
    },
    /// Rerun a complete nonexistence argument.
    Reproduce {
        #[arg(value_parser = ["15_4", "16_4"])]
        target: String,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<nkconf::Error> for Failure {
    fn from(e: nkconf::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type Exit = Result<u8, Failure>;

struct Ctx {
    json: bool,
    workers: Option<usize>,
}

impl Ctx {
    fn enumerate_options(&self, allow_large: bool) -> EnumerateOptions {
        EnumerateOptions { workers: self.workers, allow_large, ..Default::default() }
    }

    /// Prints either the JSON value or the human text.
    fn emit(&self, value: &Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("json"));
        } else {
            print!("{}", text());
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<Configuration, Failure> {
    Configuration::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_wiring(path: &Path) -> Result<WiringDiagram, Failure> {
    WiringDiagram::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn digest(manifest: &mut RunManifest, path: &Path) -> Result<(), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    manifest.input_digests.insert(path.display().to_string(), sha256_hex(&bytes));
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    write_atomic(path, contents.as_bytes()).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn prepare_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let ctx = Ctx { json: cli.json, workers: cli.workers };
    match run(&ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Exit {
    match command {
        Command::EulerGate { n, k } => euler_gate(ctx, n, k),
        Command::Enumerate { size, out, allow_large } => enumerate(ctx, size, out.as_deref(), allow_large),
        Command::Classify { size, search, out, allow_large } => {
            classify(ctx, size, search, out.as_deref(), allow_large)
        }
        Command::Orientable { config, search, witness } => orientable(ctx, &config, search, witness.as_deref()),
        Command::Canon { config } => {
            let c = load_config(&config)?;
            let code = canonical_code(&c).to_hex();
            ctx.emit(&json!({ "code": code }), || format!("{code}\n"));
            Ok(0)
        }
        Command::Iso { a, b } => iso(ctx, &a, &b),
        Command::Dual { config, output } => {
            let d = dualize(&load_config(&config)?);
            match output {
                Some(p) => write_file(&p, &d.to_json())?,
                None => print!("{}", d.to_json()),
            }
            Ok(0)
        }
        Command::Poincare { config } => {
            let p = poincare_polynomial(&load_config(&config)?)?;
            ctx.emit(&json!(p), || format!("{} + {}t + {}t^2\n", p.b0, p.b1, p.b2));
            Ok(0)
        }
        Command::VerifyWiring { wiring, config } => verify_wiring(ctx, &wiring, config.as_deref()),
        Command::Render { wiring, output, highlight } => {
            let w = load_wiring(&wiring)?;
            if let Some(h) = highlight.filter(|&h| h >= w.events.len()) {
                return Err(Failure::input(format!("event {h} out of range ({} events)", w.events.len())));
            }
            let svg = w.render_svg(highlight)?;
            match output {
                Some(p) => write_file(&p, &svg)?,
                None => print!("{svg}"),
            }
            Ok(0)
        }
        Command::Reproduce { target, search, out } => reproduce(ctx, &target, search, out.as_deref()),
    }
}

fn euler_gate(ctx: &Ctx, n: Option<i64>, k: i64) -> Exit {
    let Some(n) = n else {
        let first = min_gate_passing_n(k)?;
        ctx.emit(&json!({ "k": k, "min_passing_n": first }), || {
            format!("k = {k}: the gate excludes every n <= {}; first unresolved n = {first}\n", first - 1)
        });
        return Ok(0);
    };
    let gate = feasibility_gate(n, k)?;
    let counts = euler_counts(n, k)?;
    let value = json!({ "n": n, "k": k, "gate": gate, "counts": counts });
    ctx.emit(&value, || {
        format!(
            "{n}_{k}: {}\n  threshold {} (impossible for n <= threshold)\n  slack {} (2 f1 - 3 f2; negative forces a digon)\n  \
             f0 = {}, f1 = {}, f2 = {}\n",
            gate.verdict, gate.threshold, counts.digon_slack, counts.f0, counts.f1, counts.f2
        )
    });
    Ok(0)
}

fn census_summary(entries: &[CensusEntry]) -> Value {
    let codes: Vec<String> = entries.iter().map(|e| e.code.to_hex()).collect();
    json!({ "classes": entries.len(), "census_digest": sha256_hex(codes.join("\n").as_bytes()), "codes": codes })
}

fn write_census(dir: &Path, entries: &[CensusEntry]) -> Result<(), Failure> {
    prepare_dir(dir)?;
    for e in entries {
        write_file(&dir.join(format!("{}.json", e.code.to_hex())), &e.configuration.to_json())?;
    }
    Ok(())
}

fn enumerate(ctx: &Ctx, size: Size, out: Option<&Path>, allow_large: bool) -> Exit {
    let Size { n, k } = size;
    let start = Instant::now();
    let manifest = RunManifest::new("enumerate", json!({ "n": n, "k": k, "allow_large": allow_large }));
    let entries = enumerate_configurations(n, k, &ctx.enumerate_options(allow_large))?;
    let summary = census_summary(&entries);
    let manifest = manifest.finish(start.elapsed(), summary.clone());
    if let Some(dir) = out {
        write_census(dir, &entries)?;
        // the manifest goes last: its presence marks a complete census
        let doc = json!({ "n": n, "k": k, "count": entries.len(), "codes": summary["codes"], "manifest": manifest });
        write_file(&dir.join("census.json"), &serde_json::to_string_pretty(&doc).expect("json"))?;
    }
    ctx.emit(&json!({ "manifest": manifest }), || {
        let mut s = format!("{n}_{k}: {} classes\n", entries.len());
        for (i, e) in entries.iter().enumerate() {
            let _ = writeln!(s, "{:>5}  {}", i + 1, e.code);
        }
        s
    });
    Ok(0)
}

fn entry_json(e: &CensusEntry) -> Value {
    let r = e.orientability.as_ref().expect("classified");
    json!({
        "code": e.code.to_hex(),
        "outcome": r.outcome.label(),
        "nodes": r.stats.nodes,
        "propagations": r.stats.propagations,
        "seconds": r.stats.elapsed.as_secs_f64(),
    })
}

/// Summary fields that do not depend on timing.
fn stable_summary(s: &ClassificationSummary, entries: &[CensusEntry]) -> Value {
    let outcomes: Vec<Value> = entries
        .iter()
        .map(|e| json!({ "code": e.code.to_hex(), "outcome": e.orientability.as_ref().unwrap().outcome.label() }))
        .collect();
    json!({
        "classes": s.classes,
        "orientable": s.orientable,
        "non_orientable": s.non_orientable,
        "budget_exceeded": s.budget_exceeded,
        "gate": s.gate,
        "entries": outcomes,
    })
}

fn classification_table(n: usize, k: usize, entries: &[CensusEntry], s: &ClassificationSummary) -> String {
    let mut t = format!(
        "{:>5}  {:<width$}  {:<15} {:>10} {:>12}\n",
        "#",
        "code",
        "outcome",
        "nodes",
        "time",
        width = 2 * entries.first().map_or(4, |e| e.code.as_bytes().len())
    );
    for (i, e) in entries.iter().enumerate() {
        let r = e.orientability.as_ref().unwrap();
        let _ = writeln!(
            t,
            "{:>5}  {}  {:<15} {:>10} {:>12.2?}",
            i + 1,
            e.code,
            r.outcome.label(),
            r.stats.nodes,
            r.stats.elapsed
        );
    }
    let gate = s.gate.map_or("n/a".to_string(), |g| g.to_string());
    let _ = writeln!(
        t,
        "{n}_{k}: {} classes, {} non-orientable, {} orientable, {} budget exceeded (gate: {gate}) in {:.2?}",
        s.classes, s.non_orientable, s.orientable, s.budget_exceeded, s.elapsed
    );
    t
}

fn run_classification(
    ctx: &Ctx,
    command: &str,
    size: Size,
    search: Search,
    out: Option<&Path>,
    allow_large: bool,
) -> Result<(Vec<CensusEntry>, ClassificationSummary, RunManifest), Failure> {
    let Size { n, k } = size;
    let start = Instant::now();
    let manifest =
        RunManifest::new(command, json!({ "n": n, "k": k, "search": search.params(), "allow_large": allow_large }));
    let (entries, summary) = classify_orientability(n, k, search.options(), &ctx.enumerate_options(allow_large))?;
    let manifest = manifest.finish(start.elapsed(), stable_summary(&summary, &entries));
    if let Some(dir) = out {
        write_census(dir, &entries)?;
        let doc = json!({
            "n": n,
            "k": k,
            "summary": summary,
            "entries": entries.iter().map(entry_json).collect::<Vec<_>>(),
            "manifest": manifest,
        });
        write_file(&dir.join("classification.json"), &serde_json::to_string_pretty(&doc).expect("json"))?;
    }
    Ok((entries, summary, manifest))
}

fn classify(ctx: &Ctx, size: Size, search: Search, out: Option<&Path>, allow_large: bool) -> Exit {
    let (entries, summary, manifest) = run_classification(ctx, "classify", size, search, out, allow_large)?;
    let value = json!({
        "summary": summary,
        "entries": entries.iter().map(entry_json).collect::<Vec<_>>(),
        "manifest": manifest,
    });
    ctx.emit(&value, || classification_table(size.n, size.k, &entries, &summary));
    Ok(if summary.budget_exceeded > 0 { EXIT_BUDGET } else { 0 })
}

fn orientable(ctx: &Ctx, path: &Path, search: Search, witness: Option<&Path>) -> Exit {
    let start = Instant::now();
    let mut manifest =
        RunManifest::new("orientable", json!({ "config": path.display().to_string(), "search": search.params() }));
    digest(&mut manifest, path)?;
    let c = load_config(path)?;
    let r = orientability(&generalize(&c), search.options());
    if let (Outcome::Orientable(chi), Some(out)) = (&r.outcome, witness) {
        write_file(out, &chi.to_file_string())?;
    }
    let manifest = manifest.finish(start.elapsed(), json!({ "outcome": r.outcome.label() }));
    let value = json!({ "outcome": r.outcome.label(), "stats": r.stats, "manifest": manifest });
    ctx.emit(&value, || {
        format!(
            "{}_{}: {} ({} nodes, {} propagations, {:.2?})\n",
            c.n(),
            c.k(),
            r.outcome.label(),
            r.stats.nodes,
            r.stats.propagations,
            r.stats.elapsed
        )
    });
    Ok(match r.outcome {
        Outcome::Orientable(_) => 0,
        Outcome::NonOrientable => EXIT_NO,
        Outcome::BudgetExceeded => EXIT_BUDGET,
    })
}

fn iso(ctx: &Ctx, a: &Path, b: &Path) -> Exit {
    let (ca, cb) = (load_config(a)?, load_config(b)?);
    let map = are_isomorphic(&ca, &cb);
    ctx.emit(&json!({ "isomorphic": map.is_some(), "point_map": map }), || match &map {
        Some(m) => {
            let pairs: Vec<String> = m.iter().enumerate().map(|(i, j)| format!("{i}->{j}")).collect();
            format!("isomorphic\npoint map: {}\n", pairs.join(" "))
        }
        None => "not isomorphic\n".to_string(),
    });
    Ok(if map.is_some() { 0 } else { EXIT_NO })
}

fn verify_wiring(ctx: &Ctx, path: &Path, config: Option<&Path>) -> Exit {
    let w = load_wiring(path)?;
    let report = w.validate();
    let mut value = json!({ "valid": report.valid, "violations": report.violations });
    let mut text = format!("wiring: {report}\n");
    let mut ok = report.valid;
    if report.valid {
        let counts = w.cell_counts()?;
        value["counts"] = json!(counts);
        let _ = writeln!(
            text,
            "cells: f0 = {}, f1 = {}, f2 = {} (Euler characteristic {})",
            counts.f0,
            counts.f1,
            counts.f2,
            counts.euler_characteristic()
        );
    }
    if let Some(cpath) = config {
        let c = load_config(cpath)?;
        let realized = if report.valid { w.realizes(&c)? } else { None };
        value["realizes"] = json!(realized.is_some());
        let _ = writeln!(text, "realizes {}: {}", cpath.display(), if realized.is_some() { "yes" } else { "no" });
        ok &= realized.is_some();
        if realized.is_some() {
            // wires are the lines of `c`, hence the points of its dual
            let map: Vec<usize> = w.wire_map.clone().unwrap_or_else(|| (0..w.n).collect());
            let chi = w.chirotope()?.relabel(&map);
            let witness = is_chirotope(&chi, &generalize(&dualize(&c)))?.valid;
            value["dual_witness"] = json!(witness);
            let _ = writeln!(
                text,
                "chirotope of the wiring orients the dual matroid: {}",
                if witness { "yes" } else { "no" }
            );
            ok &= witness;
            if let Ok(expected) = euler_counts(c.n() as i64, c.k() as i64) {
                let matches = w.cell_counts()? == expected;
                value["counts_match_euler"] = json!(matches);
                let _ = writeln!(text, "cell counts match the Euler counts for {}_{}: {}", c.n(), c.k(), matches);
            }
        }
    }
    ctx.emit(&value, || text);
    Ok(if ok { 0 } else { EXIT_NO })
}

fn reproduce(ctx: &Ctx, target: &str, search: Search, out: Option<&Path>) -> Exit {
    let (n, k) = match target {
        "15_4" => (15, 4),
        _ => (16, 4),
    };
    let gate = feasibility_gate(n as i64, k as i64)?;
    let (entries, summary, manifest) =
        run_classification(ctx, &format!("reproduce {target}"), Size { n, k }, search, out, false)?;
    let expected_gate = if n == 15 { Verdict::Impossible } else { Verdict::Unresolved };
    let expected_classes = (n == 16).then_some(19);
    let holds = gate.verdict == expected_gate
        && expected_classes.is_none_or(|c| c == summary.classes)
        && summary.classes > 0
        && summary.non_orientable == summary.classes;
    let line = format!(
        "{} classes, {} non-orientable, {} orientable",
        summary.classes, summary.non_orientable, summary.orientable
    );
    let value = json!({ "target": target, "gate": gate, "result": line, "reproduced": holds, "manifest": manifest });
    ctx.emit(&value, || {
        let mut s = format!("gate {n}_{k}: {} (threshold {})\n", gate.verdict, gate.threshold);
        s.push_str(&classification_table(n, k, &entries, &summary));
        let _ = writeln!(s, "{line}");
        let _ = writeln!(s, "{}", if holds { "reproduced" } else { "NOT reproduced" });
        s
    });
    Ok(if summary.budget_exceeded > 0 {
        EXIT_BUDGET
    } else if holds {
        0
    } else {
        EXIT_NO
    })
}
