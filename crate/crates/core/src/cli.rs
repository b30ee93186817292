//! Command-line driver: `build`, `spectrum`, `dist`, `reproduce-figures`.
//!
//! Every command prints a JSON summary on stdout and writes its files plus
//! a manifest with SHA-256 digests into the output directory.
//! Exit codes: 0 success, 1 bad configuration, 2 size limit, 3 failed check.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cayley::{
    build, codegree_stats, loop_count, sample_er, structure_report, Graph, GraphSummary, RandomGraph,
};
use crate::dist::{
    default_truncation, histogram, histogram_csv, kt_coefficients, kt_tail_bound, m4_check, mixed_moment_check,
    moment, sample_kt_limit, spectral_to_empirical, svg_histogram, w1_two_sample, w1_vs_law, EmpiricalMeasure,
    LimitLaw, SVG_VERSION_LINE,
};
use crate::error::{Error, Result};
use crate::ffield::{make_field, FiniteField};
use crate::sidon::{is_partial_symmetric_sidon, is_sidon, is_symmetric_sidon, make_b, make_k, make_kplus, make_kt, GroupPoint, SumSet};
use crate::spectrum::{dense_eigenvalues, normalized_spectrum, spectrum_dense_oracle, spectrum_from_characters, SpectralMeasure};

/// Largest field handled without `--allow-large`.
const DEFAULT_MAX_Q: u32 = 1200;
/// Semicircle draws allowed without `--allow-large` (about a minute).
const DEFAULT_MAX_DRAWS: f64 = 5e9;
const FIGURE_PRIMES: [u64; 4] = [127, 251, 601, 1117];

#[derive(Debug, Parser)]
#[command(name = "sumgraph", version, about = "Cayley sum graphs over finite fields: construction, spectra, limit laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a graph and run combinatorial checks.
    Build(CommonArgs),
    /// Spectrum by characters, as CSV and optionally SVG.
    Spectrum(CommonArgs),
    /// Wasserstein distance to a limit law and moment checks.
    Dist(DistArgs),
    /// Regenerate all figure data.
    ReproduceFigures(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FamilyArg {
    Kloosterman,
    Birch,
    Kt,
    Kplus,
    Er,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CheckArg {
    Sidon,
    Subgraphs,
    Weil,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LawArg {
    Semicircle,
    KestenMckay,
    KtSeries,
    ScPlusSa,
}

#[derive(Debug, Clone, Args, Serialize)]
struct CommonArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Characteristic of the field.
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree; the vertex count for `--family er`.
    #[arg(long)]
    n: Option<u64>,
    /// Range fraction for `kt`.
    #[arg(long)]
    t: Option<f64>,
    /// Target degree for `er`.
    #[arg(long)]
    degree: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 80)]
    bins: usize,
    /// Output directory.
    #[arg(long, env = "SUMGRAPH_OUT", default_value = "sumgraph-out")]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, value_delimiter = ',')]
    check: Vec<CheckArg>,
    /// Compare against the dense eigensolver.
    #[arg(long)]
    oracle: bool,
    /// Also write an SVG histogram.
    #[arg(long)]
    svg: bool,
    /// Keep the trivial eigenvalue and skip normalization.
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
struct DistArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    law: Option<LawArg>,
    /// Compare against this many sampled draws instead of the CDF.
    #[arg(long)]
    samples: Option<usize>,
    /// Series truncation for `kt-series`.
    #[arg(long)]
    h: Option<usize>,
    /// Mixed moments `alpha,beta` for `kplus` (repeatable).
    #[arg(long, value_delimiter = ',', num_args = 2)]
    mixed: Vec<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
struct FigureArgs {
    #[arg(long, env = "SUMGRAPH_OUT", default_value = "figures")]
    out: PathBuf,
    #[arg(long, default_value_t = 80)]
    bins: usize,
}

/// Echo of the configuration, timings, statistics and output digests.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: Value,
    pub stages: Vec<(String, f64)>,
    pub stats: Value,
    pub files: Vec<FileDigest>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// SHA-256 of a file's bytes; SVG version lines are skipped.
pub fn content_digest(bytes: &[u8]) -> String {
    let body = std::str::from_utf8(bytes)
        .ok()
        .and_then(|s| s.strip_prefix(SVG_VERSION_LINE))
        .map(str::as_bytes)
        .unwrap_or(bytes);
    hex::encode(Sha256::digest(body))
}

struct Run {
    command: String,
    config: Value,
    out: PathBuf,
    manifest: String,
    start: Instant,
    last: Instant,
    stages: Vec<(String, f64)>,
    files: Vec<FileDigest>,
}

impl Run {
    fn new(command: &str, config: Value, out: &Path, manifest: String) -> Result<Self> {
        fs::create_dir_all(out)?;
        let now = Instant::now();
        Ok(Run {
            command: command.into(),
            config,
            out: out.to_path_buf(),
            manifest,
            start: now,
            last: now,
            stages: Vec::new(),
            files: Vec::new(),
        })
    }

    fn stage(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push((name.into(), (now - self.last).as_secs_f64()));
        self.last = now;
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.out.join(name);
        fs::write(&path, contents)?;
        self.files.push(FileDigest {
            path: name.into(),
            sha256: content_digest(contents.as_bytes()),
        });
        Ok(())
    }

    fn finish(mut self, stats: Value) -> Result<Value> {
        self.stages.push(("total".into(), self.start.elapsed().as_secs_f64()));
        let manifest = RunManifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").into(),
            config: self.config,
            stages: self.stages,
            stats: stats.clone(),
            files: self.files,
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(self.out.join(&self.manifest), text + "\n")?;
        Ok(stats)
    }
}

/// What a configuration builds.
enum Subject {
    Set(SumSet),
    Er(RandomGraph),
}

impl CommonArgs {
    fn field(&self) -> Result<FiniteField> {
        let p = self.p.ok_or_else(|| Error::BadParameter("--p is required".into()))?;
        let n = self.n.unwrap_or(1);
        let n = u32::try_from(n).map_err(|_| Error::BadParameter(format!("extension degree {n}")))?;
        let field = make_field(p, n)?;
        if field.q() > DEFAULT_MAX_Q && !self.allow_large {
            return Err(Error::SizeExceeded(format!(
                "q = {} exceeds {DEFAULT_MAX_Q}; pass --allow-large",
                field.q()
            )));
        }
        Ok(field)
    }

    fn subject(&self) -> Result<Subject> {
        match self.family {
            FamilyArg::Er => {
                let n = self.n.ok_or_else(|| Error::BadParameter("--n (vertices) is required for er".into()))?;
                let d = self.degree.ok_or_else(|| Error::BadParameter("--degree is required for er".into()))?;
                if n < 2 || d < 0.0 || d > (n - 1) as f64 {
                    return Err(Error::BadParameter(format!("degree {d} impossible on {n} vertices")));
                }
                Ok(Subject::Er(sample_er(n as usize, d / (n - 1) as f64, self.seed)?))
            }
            FamilyArg::Kloosterman => Ok(Subject::Set(make_k(&self.field()?))),
            FamilyArg::Birch => Ok(Subject::Set(make_b(&self.field()?))),
            FamilyArg::Kt => {
                let t = self.t.ok_or_else(|| Error::BadParameter("--t is required for kt".into()))?;
                Ok(Subject::Set(make_kt(&self.field()?, t)?))
            }
            FamilyArg::Kplus => Ok(Subject::Set(make_kplus(&self.field()?)?)),
        }
    }

    fn stem(&self) -> String {
        let name = match self.family {
            FamilyArg::Kloosterman => "kloosterman",
            FamilyArg::Birch => "birch",
            FamilyArg::Kt => "kt",
            FamilyArg::Kplus => "kplus",
            FamilyArg::Er => "er",
        };
        match self.family {
            FamilyArg::Er => format!("er_n{}_seed{}", self.n.unwrap_or(0), self.seed),
            FamilyArg::Kt => format!("kt_p{}_t{}", self.p.unwrap_or(0), self.t.unwrap_or(0.0)),
            _ => match self.n.unwrap_or(1) {
                1 => format!("{name}_p{}", self.p.unwrap_or(0)),
                n => format!("{name}_q{}", self.p.unwrap_or(0).saturating_pow(n as u32)),
            },
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Expected Sidon property and expected forbidden subgraph for a set.
fn expectations(set: &SumSet, t: Option<f64>) -> (Option<&'static str>, Option<&'static str>) {
    let ch = set.field().p();
    match set.family().name().as_str() {
        "kloosterman" => (Some("symmetric"), Some("k23")),
        "birch" if ch >= 5 => (Some("symmetric"), Some("k23")),
        "kplus" => (Some("sidon"), Some("c4")),
        _ if set.family().name().starts_with("kt") => {
            if t.is_some_and(|t| t <= 0.5) {
                (Some("sidon"), Some("c4"))
            } else {
                (Some("partial"), Some("k23"))
            }
        }
        _ => (None, None),
    }
}

fn cmd_build(args: &CommonArgs) -> Result<Value> {
    let subject = args.subject()?;
    let mut run = Run::new("build", to_json(args), &args.out, format!("{}.build.manifest.json", args.stem()))?;
    let mut failures = Vec::new();
    let mut extra = serde_json::Map::new();
    let stem = args.stem();
    let summary = match &subject {
        Subject::Set(set) => {
            let graph = build(set);
            run.stage("build");
            let (want_sidon, forbidden) = expectations(set, args.t);
            if args.check.contains(&CheckArg::Sidon) {
                let sym = is_symmetric_sidon(set, GroupPoint::ZERO)?;
                let partial = is_partial_symmetric_sidon(set, GroupPoint::ZERO)?;
                let plain = is_sidon(set)?;
                extra.insert("symmetric_sidon".into(), json!(sym.holds));
                extra.insert("partial_symmetric_sidon".into(), json!(partial.holds));
                extra.insert("sidon".into(), json!(plain.holds));
                if let Some(w) = plain.witness {
                    extra.insert("sidon_witness".into(), json!(w.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
                }
                let ok = match want_sidon {
                    Some("symmetric") => sym.holds,
                    Some("sidon") => plain.holds,
                    Some("partial") => partial.holds,
                    _ => true,
                };
                if !ok {
                    failures.push(format!("expected {} Sidon property", want_sidon.unwrap_or("")));
                }
                run.stage("sidon");
            }
            let view = graph.simple_view();
            let (c4, k23, maxc) = if args.check.contains(&CheckArg::Subgraphs) {
                let st = codegree_stats(&view)?;
                run.stage("subgraphs");
                (Some(st.c4()), Some(st.k23()), Some(st.max_codegree))
            } else {
                (None, None, None)
            };
            match (forbidden, c4, k23) {
                (Some("c4"), Some(c), _) if c > 0 => failures.push(format!("{c} four-cycles")),
                (Some("k23"), _, Some(k)) if k > 0 => failures.push(format!("{k} copies of K_2,3")),
                _ => {}
            }
            if let Some(m) = maxc {
                extra.insert("max_codegree".into(), json!(m));
            }
            let components = if graph.n() <= 1 << 20 {
                let rep = structure_report(&view)?;
                extra.insert("structure".into(), json!(rep.summary()));
                Some(rep.components)
            } else {
                None
            };
            run.stage("structure");
            if args.check.contains(&CheckArg::Weil) || args.check.contains(&CheckArg::Oracle) {
                let spec = spectrum_from_characters(set)?;
                spectral_checks(args, set, &spec, &mut extra, &mut failures)?;
                run.stage("spectrum");
            }
            if args.format == Some(Format::Csv) {
                run.write(&format!("{stem}.edges.csv"), &graph.edges_csv())?;
            }
            extra.insert("family".into(), json!(set.family().name()));
            extra.insert("field".into(), json!(set.field().label()));
            GraphSummary {
                n: graph.n(),
                degree: graph.degree(),
                loops: loop_count(&graph),
                c4,
                k23,
                components,
            }
        }
        Subject::Er(g) => {
            let st = codegree_stats(&g.graph)?;
            let rep = structure_report(&g.graph)?;
            extra.insert("family".into(), json!("er"));
            extra.insert("p_edge".into(), json!(g.p_edge));
            extra.insert("structure".into(), json!(rep.summary()));
            if args.format == Some(Format::Csv) {
                let mut csv = String::from("u,v\n");
                for (u, v) in g.graph.edges() {
                    csv.push_str(&format!("{u},{v}\n"));
                }
                run.write(&format!("{stem}.edges.csv"), &csv)?;
            }
            GraphSummary {
                n: g.n as u64,
                degree: (2 * g.graph.edge_count()).div_ceil(g.n as u64) as usize,
                loops: 0,
                c4: Some(st.c4()),
                k23: Some(st.k23()),
                components: Some(rep.components),
            }
        }
    };
    let mut value = to_json(&summary);
    if let Value::Object(map) = &mut value {
        map.extend(extra);
        map.insert("failures".into(), json!(failures));
    }
    run.write(&format!("{stem}.summary.json"), &(serde_json::to_string_pretty(&value).unwrap_or_default() + "\n"))?;
    let stats = run.finish(value)?;
    if !failures.is_empty() {
        emit(&stats);
        return Err(Error::CheckFailed(failures.join("; ")));
    }
    Ok(stats)
}

/// Weil bound and dense-oracle checks shared by `build` and `spectrum`.
fn spectral_checks(
    args: &CommonArgs,
    set: &SumSet,
    spec: &SpectralMeasure,
    extra: &mut serde_json::Map<String, Value>,
    failures: &mut Vec<String>,
) -> Result<()> {
    if args.check.contains(&CheckArg::Weil) {
        let bound = 2.0 * f64::from(set.field().q()).sqrt() + 1e-6;
        let max = spec.max_nontrivial_abs();
        extra.insert("max_nontrivial_abs".into(), json!(max));
        extra.insert("weil_bound".into(), json!(bound));
        let applies = match set.family().name().as_str() {
            "kloosterman" | "kplus" => true,
            "birch" => set.field().p() != 3,
            _ => false,
        };
        if applies && max > bound {
            failures.push(format!("non-trivial eigenvalue {max} above {bound}"));
        }
    }
    if args.oracle || args.check.contains(&CheckArg::Oracle) {
        let oracle = spectrum_dense_oracle(&build(set))?;
        let dev = spec
            .expanded()
            .iter()
            .zip(&oracle)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        extra.insert("oracle_max_deviation".into(), json!(dev));
        if dev > 1e-6 {
            failures.push(format!("dense oracle deviates by {dev:e}"));
        }
    }
    Ok(())
}

/// Normalized non-trivial spectrum of an ER graph: eigenvalues divided by
/// `sqrt(n p (1 - p))`, the largest eigenvalue dropped.
fn er_measure(g: &RandomGraph) -> EmpiricalMeasure {
    let ev = dense_eigenvalues(g.n, g.graph.dense_adjacency());
    let s = (g.n as f64 * g.p_edge * (1.0 - g.p_edge)).sqrt();
    EmpiricalMeasure::from_samples(ev[..g.n.saturating_sub(1)].iter().map(|x| x / s).collect())
}

fn default_law(family: FamilyArg) -> LawArg {
    match family {
        FamilyArg::Kplus => LawArg::ScPlusSa,
        FamilyArg::Kt => LawArg::KtSeries,
        _ => LawArg::Semicircle,
    }
}

fn overlay_law(family: FamilyArg) -> Option<LimitLaw> {
    match default_law(family) {
        LawArg::Semicircle => Some(LimitLaw::Semicircle),
        LawArg::ScPlusSa => Some(LimitLaw::ScPlusSa),
        _ => None,
    }
}

fn plot_range(emp: &EmpiricalMeasure) -> (f64, f64) {
    let r = emp.min().unwrap_or(-2.0).abs().max(emp.max().unwrap_or(2.0).abs()).max(1e-9);
    (-1.05 * r, 1.05 * r)
}

fn cmd_spectrum(args: &CommonArgs) -> Result<Value> {
    let subject = args.subject()?;
    let mut run = Run::new("spectrum", to_json(args), &args.out, format!("{}.spectrum.manifest.json", args.stem()))?;
    let stem = args.stem();
    let mut extra = serde_json::Map::new();
    let mut failures = Vec::new();
    let (emp, csv, mut meta) = match &subject {
        Subject::Set(set) => {
            let spec = spectrum_from_characters(set)?;
            spec.check_trace_identities()?;
            run.stage("spectrum");
            spectral_checks(args, set, &spec, &mut extra, &mut failures)?;
            let shown = if args.raw { spec.clone() } else { normalized_spectrum(&spec, true)? };
            (spectral_to_empirical(&shown, false), shown.to_csv(), shown.metadata_json())
        }
        Subject::Er(g) => {
            let emp = er_measure(g);
            let mut csv = String::from("normalized,multiplicity\n");
            for &(x, m) in emp.atoms() {
                csv.push_str(&format!("{x:.12},{m}\n"));
            }
            (emp, csv, json!({"family": "er", "n": g.n, "p_edge": g.p_edge, "seed": g.seed}))
        }
    };
    if args.format == Some(Format::Json) {
        let values: Vec<(f64, u64)> = emp.atoms().to_vec();
        run.write(&format!("{stem}.spectrum.json"), &(json!({"meta": meta, "values": values}).to_string() + "\n"))?;
    } else {
        run.write(&format!("{stem}.spectrum.csv"), &csv)?;
    }
    if args.svg || args.format == Some(Format::Svg) {
        let law = if args.raw { None } else { overlay_law(args.family) };
        let svg = svg_histogram(&emp, args.bins, plot_range(&emp), law.as_ref(), &stem)?;
        run.write(&format!("{stem}.svg"), &svg)?;
    }
    run.stage("write");
    if let Value::Object(map) = &mut meta {
        map.extend(extra);
        map.insert("failures".into(), json!(failures));
    }
    let stats = run.finish(meta)?;
    if !failures.is_empty() {
        emit(&stats);
        return Err(Error::CheckFailed(failures.join("; ")));
    }
    Ok(stats)
}

fn cmd_dist(args: &DistArgs) -> Result<Value> {
    let c = &args.common;
    let subject = c.subject()?;
    let law_arg = args.law.unwrap_or(default_law(c.family));
    if !args.mixed.is_empty() && c.family != FamilyArg::Kplus {
        return Err(Error::WrongFamily("--mixed applies to kplus only".into()));
    }
    let law = match law_arg {
        LawArg::Semicircle => LimitLaw::Semicircle,
        LawArg::ScPlusSa => LimitLaw::ScPlusSa,
        LawArg::KestenMckay => LimitLaw::KestenMcKay(c.degree.unwrap_or(match &subject {
            Subject::Set(s) => s.len() as f64,
            Subject::Er(g) => g.p_edge * (g.n - 1) as f64,
        })),
        LawArg::KtSeries => {
            let t = c.t.ok_or_else(|| Error::BadParameter("kt-series needs --t".into()))?;
            LimitLaw::KtSeries { t, h: args.h.unwrap_or(default_truncation(t)) }
        }
    };
    let samples = match (args.samples, law.cdf(0.0)) {
        (Some(n), _) => Some(n),
        (None, None) => Some(1_000_000),
        (None, Some(_)) => None,
    };
    if let Some(n) = samples {
        let per_draw = match law {
            LimitLaw::KtSeries { t, h } => 1 + kt_coefficients(t, h).len(),
            _ => 1,
        };
        if n as f64 * per_draw as f64 > DEFAULT_MAX_DRAWS && !c.allow_large {
            return Err(Error::SizeExceeded(format!(
                "{n} samples x {per_draw} variables; pass --allow-large or lower --h/--samples"
            )));
        }
    }
    let mut run = Run::new("dist", to_json(args), &c.out, format!("{}.dist.manifest.json", c.stem()))?;
    let mut report = serde_json::Map::new();
    let (emp, q) = match &subject {
        Subject::Set(set) => {
            let spec = spectrum_from_characters(set)?;
            let norm = normalized_spectrum(&spec, true)?;
            report.insert("family".into(), json!(set.family().name()));
            report.insert("set_size".into(), json!(set.len()));
            (spectral_to_empirical(&norm, false), set.field().q() as u64)
        }
        Subject::Er(g) => {
            let st = codegree_stats(&g.graph)?;
            report.insert("family".into(), json!("er"));
            report.insert("k23".into(), json!(st.k23()));
            (er_measure(g), g.n as u64)
        }
    };
    run.stage("spectrum");
    let (w1, method) = match samples {
        None => (w1_vs_law(&emp, &law)?, "cdf"),
        Some(n) => {
            let sample = match law {
                LimitLaw::KtSeries { t, h } => sample_kt_limit(t, h, n, c.seed)?,
                other => other
                    .sample(n, c.seed)
                    .ok_or_else(|| Error::BadParameter(format!("{} has no sampler", other.name())))?,
            };
            (w1_two_sample(&emp, &sample), "two-sample")
        }
    };
    run.stage("w1");
    report.insert("q".into(), json!(q));
    report.insert("law".into(), json!(law.name()));
    report.insert("w1".into(), json!(w1));
    report.insert("method".into(), json!(method));
    report.insert("samples".into(), json!(samples));
    report.insert("seed".into(), json!(c.seed));
    report.insert("second_moment".into(), json!(moment(&emp, 2)));
    report.insert("fourth_moment".into(), json!(moment(&emp, 4)));
    if let LimitLaw::KtSeries { t, h } = law {
        report.insert("H".into(), json!(h));
        report.insert("tail_bound".into(), json!(kt_tail_bound(t, h)));
    }
    if let Subject::Set(set) = &subject {
        if c.family == FamilyArg::Kloosterman {
            report.insert("m4".into(), json!(m4_check(set.field())?));
        }
        let mut mixed = Vec::new();
        for pair in args.mixed.chunks(2) {
            let m = mixed_moment_check(set.field(), pair[0], pair[1])?;
            mixed.push(json!({"alpha": m.alpha, "beta": m.beta, "value": [m.value.re, m.value.im],
                "predicted": [m.predicted.re, m.predicted.im]}));
        }
        if !mixed.is_empty() {
            report.insert("mixed_moments".into(), json!(mixed));
        }
    }
    run.stage("moments");
    append_trend(&c.out, &report)?;
    let stats = run.finish(Value::Object(report))?;
    Ok(stats)
}

/// One line per `dist` run in `trend.csv`, for plots across `p`.
fn append_trend(out: &Path, report: &serde_json::Map<String, Value>) -> Result<()> {
    let path = out.join("trend.csv");
    let fresh = !path.exists();
    let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "family,q,law,method,samples,seed,w1")?;
    }
    let get = |k: &str| match report.get(k) {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    };
    writeln!(
        f,
        "{},{},{},{},{},{},{}",
        get("family"),
        get("q"),
        get("law"),
        get("method"),
        get("samples"),
        get("seed"),
        get("w1")
    )?;
    Ok(())
}

fn cmd_reproduce_figures(args: &FigureArgs) -> Result<Value> {
    let mut run = Run::new("reproduce-figures", to_json(args), &args.out, "manifest.json".into())?;
    let mut panels = Vec::new();
    let mut panel = |run: &mut Run, set: SumSet, name: String, law: Option<LimitLaw>| -> Result<()> {
        let spec = spectrum_from_characters(&set)?;
        spec.check_trace_identities()?;
        let norm = normalized_spectrum(&spec, true)?;
        let emp = spectral_to_empirical(&norm, false);
        run.write(&format!("{name}.csv"), &norm.to_csv())?;
        let svg = svg_histogram(&emp, args.bins, (-2.5, 2.5), law.as_ref(), &format!("{} over {}", set.family().name(), set.field().label()))?;
        run.write(&format!("{name}.svg"), &svg)?;
        let w1 = match law {
            Some(l) => Some(w1_vs_law(&emp, &l)?),
            None => None,
        };
        panels.push(json!({"panel": name, "q": set.field().q(), "distinct": norm.distinct_count(), "w1": w1,
            "max_nontrivial_abs": spec.max_nontrivial_abs()}));
        run.stage(&name);
        Ok(())
    };
    for p in FIGURE_PRIMES {
        let f = make_field(p, 1)?;
        panel(&mut run, make_k(&f), format!("fig1_kloosterman_p{p}"), Some(LimitLaw::Semicircle))?;
        panel(&mut run, make_b(&f), format!("fig1_birch_p{p}"), Some(LimitLaw::Semicircle))?;
    }
    for (p, n) in [(5, 4), (2, 10)] {
        let f = make_field(p, n)?;
        panel(&mut run, make_b(&f), format!("atomic_birch_q{}", f.q()), None)?;
    }
    run.finish(json!({ "panels": panels }))
}

/// Histogram CSV of a measure over its own range (exposed for examples).
pub fn histogram_of(emp: &EmpiricalMeasure, bins: usize) -> Result<String> {
    Ok(histogram_csv(&histogram(emp, bins, plot_range(emp))?))
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap_or_default());
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Dist(a) => cmd_dist(a),
        Command::ReproduceFigures(a) => cmd_reproduce_figures(a),
    };
    match result {
        Ok(v) => {
            emit(&v);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_skips_version_line() {
        let a = format!("{SVG_VERSION_LINE}\n<svg/>");
        assert_eq!(content_digest(a.as_bytes()), content_digest(b"\n<svg/>"));
        assert_ne!(content_digest(b"a"), content_digest(b"b"));
    }

    #[test]
    fn bad_configs_exit_1() {
        assert_eq!(run(["sumgraph", "build", "--family", "kplus", "--p", "13", "--out", "/nonexistent/x"]), 1);
        assert_eq!(run(["sumgraph", "build", "--family", "kt", "--p", "7"]), 1);
        assert_eq!(run(["sumgraph", "bogus"]), 1);
        assert_eq!(run(["sumgraph", "spectrum", "--family", "kloosterman", "--p", "2003"]), 2);
    }
}
