use std::fs::File;
use std::io::BufReader;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde_json::json;

use limitroots::io::{points_json, read_points_csv, weights_json, write_intersections_csv, write_points_csv};
use limitroots::svg::{PlotOptions, Scene};
use limitroots::verify::{self, Budgets, Suite};
use limitroots::{
    codim2_intersections, enumerate_with, format_word, fundamental_weights, light_conic, parse_word, roots_by_depth,
    sample_limit_roots, word_limit_root, CausalCharacter, CoxeterGraph, EnumerateOptions, Error, FormType, Kind,
    PeriodicWord, PointKind, Points, SampleOptions, SpectralOptions, System,
};

use crate::manifest::Manifest;
use crate::{parse_range, GraphArg, OnlyKind};

pub enum Outcome {
    Ok,
    VerificationFailed,
}

/// Reference counts printed next to the captioned budgets.
const REFERENCES: [(&str, usize, &str); 2] = [("fig1a", 30080, "core 3..4, conj 1..9"), ("fig1b", 28019, "core 2..4, conj 1..5")];

pub fn load_graph(arg: &GraphArg) -> Result<CoxeterGraph> {
    let path = Path::new(&arg.graph);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return CoxeterGraph::from_json(&text).with_context(|| format!("in graph file {}", path.display()));
    }
    CoxeterGraph::builtin(&arg.graph).map_err(|e| {
        anyhow!(
            "'{}' is neither a readable file nor a built-in graph ({e}); built-ins: {}, universal<n>:<c>",
            arg.graph,
            CoxeterGraph::BUILTIN_NAMES.join(", ")
        )
    })
}

fn load_system(arg: &GraphArg) -> Result<System> {
    Ok(System::new(load_graph(arg)?)?)
}

/// Parses a word of digits, or of letters `s t u v …` standing for 0, 1, 2, 3, ….
pub fn parse_cli_word(text: &str, rank: usize) -> Result<Vec<usize>> {
    let t = text.trim();
    if t != "e" && t.chars().any(|c| c.is_ascii_alphabetic()) {
        return t
            .chars()
            .filter(|c| !(c.is_whitespace() || *c == '.' || *c == ','))
            .map(|c| {
                let s = (c as u8).checked_sub(b's').map(usize::from).filter(|_| c.is_ascii_lowercase());
                match s {
                    Some(s) if s < rank => Ok(s),
                    _ => Err(anyhow!("bad letter '{c}' in word '{text}' (use s, t, u, … or indices)")),
                }
            })
            .collect();
    }
    Ok(parse_word(t, rank)?)
}

fn type_name(t: FormType) -> String {
    t.to_string()
}

pub fn analyze(arg: &GraphArg, as_json: bool) -> Result<Outcome> {
    let sys = load_system(arg)?;
    let n = sys.rank();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| sys.form()[(i, j)]).collect()).collect();
    let sig = sys.signature();
    if as_json {
        let out = json!({
            "graph": serde_json::from_str::<serde_json::Value>(&sys.graph().to_json())?,
            "rank": n,
            "form": rows,
            "signature": sig,
            "type": type_name(sys.form_type()),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(Outcome::Ok);
    }
    println!("graph: {}", sys.graph());
    println!("B =");
    for r in &rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>10.6}")).collect();
        println!("  {}", cells.join(" "));
    }
    println!("signature: {sig} ({} zero)", sig.zero);
    println!("type: {}", type_name(sys.form_type()));
    Ok(Outcome::Ok)
}

#[derive(Args, Debug)]
pub struct LimitRootsArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Lengths of the infinite-order elements that are eigensolved.
    #[arg(long, value_parser = parse_range, default_value = "2..4")]
    core_lengths: RangeInclusive<usize>,
    /// Lengths of the conjugating elements.
    #[arg(long, value_parser = parse_range, default_value = "0..4")]
    conj_lengths: RangeInclusive<usize>,
    /// Chart distance below which two points merge.
    #[arg(long, default_value_t = 1e-6)]
    dedup_eps: f64,
    /// Only use core elements of one type.
    #[arg(long, value_enum)]
    only: Option<OnlyKind>,
    /// Output CSV; the manifest goes to <out>.manifest.json.
    #[arg(long, short)]
    out: PathBuf,
    /// Also write the JSON mirror here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Abort enumeration beyond this many elements.
    #[arg(long, default_value_t = 20_000_000)]
    max_elements: usize,
    /// Matrix fingerprint grid for element deduplication.
    #[arg(long, default_value_t = 1e-7)]
    dedup_grid: f64,
}

pub fn limit_roots(a: &LimitRootsArgs, argv: &[String]) -> Result<Outcome> {
    let sys = load_system(&a.graph)?;
    sys.require_lorentzian()?;
    let mut manifest = Manifest::start(argv, &sys.graph().to_json());
    manifest.budgets = json!({
        "core_lengths": [a.core_lengths.start(), a.core_lengths.end()],
        "conj_lengths": [a.conj_lengths.start(), a.conj_lengths.end()],
        "max_elements": a.max_elements,
    });
    let eopts = EnumerateOptions {
        dedup_grid: a.dedup_grid,
        max_elements: Some(a.max_elements),
        ..Default::default()
    };
    let sopts = SampleOptions {
        dedup_eps: a.dedup_eps,
        only: a.only.map(|k| match k {
            OnlyKind::Parabolic => Kind::Parabolic,
            OnlyKind::Hyperbolic => Kind::Hyperbolic,
        }),
        spectral: SpectralOptions::default(),
    };
    manifest.tolerances = json!({
        "dedup_eps": a.dedup_eps,
        "dedup_grid": eopts.dedup_grid,
        "merge_tol": eopts.merge_tol,
        "hyperbolic_tol": sopts.spectral.hyperbolic_tol,
        "residual_tol": sopts.spectral.residual_tol,
    });
    let max_len = (*a.core_lengths.end()).max(*a.conj_lengths.end());
    let run = enumerate_with(&sys, max_len, &eopts)
        .and_then(|store| sample_limit_roots(&sys, &store, a.core_lengths.clone(), a.conj_lengths.clone(), &sopts));
    let sample = match run {
        Ok(s) => s,
        Err(e) => {
            let path = manifest.finish(&a.out, &format!("aborted: {e}"))?;
            eprintln!("partial manifest written to {}", path.display());
            return Err(e.into());
        }
    };

    let mut csv = Vec::new();
    write_points_csv(&mut csv, &sample.points, sys.rank())?;
    manifest.write_output(&a.out, &csv)?;
    if let Some(p) = &a.json {
        let meta = json!({
            "graph": manifest.graph.clone(),
            "budgets": manifest.budgets.clone(),
            "tool_version": env!("CARGO_PKG_VERSION"),
        });
        let text = serde_json::to_string_pretty(&points_json(&sample.points, meta))? + "\n";
        manifest.write_output(p, text.as_bytes())?;
    }
    let st = &sample.stats;
    let par = sample.points.count(PointKind::ParabolicEig);
    let hyp = sample.points.count(PointKind::HyperbolicEig);
    manifest.summary = json!({ "points": sample.points.len(), "parabolic_eig": par, "hyperbolic_eig": hyp, "stats": st });
    let mpath = manifest.finish(&a.out, "ok")?;
    println!(
        "{} limit roots (parabolic-eig {par}, hyperbolic-eig {hyp}) from {} core elements ({} parabolic, {} hyperbolic, {} elliptic, {} unresolved) and {} conjugators; {} raw points",
        sample.points.len(),
        st.core_elements,
        st.parabolic,
        st.hyperbolic,
        st.elliptic,
        st.unresolved,
        st.conjugators,
        st.raw_points
    );
    if let Some((_, count, budget)) = REFERENCES.iter().find(|(name, ..)| *name == a.graph.graph) {
        println!("reference count for {}: {count} ({budget})", a.graph.graph);
    }
    println!("wrote {} and {}", a.out.display(), mpath.display());
    Ok(Outcome::Ok)
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Point CSV from `limit-roots`; omit for an empty picture.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Output SVG.
    #[arg(long, short)]
    out: PathBuf,
    /// Draw root hyperplanes up to this depth and mark space-like intersections.
    #[arg(long, default_value_t = 0)]
    depth: usize,
    /// Mark the fundamental weights with diamonds.
    #[arg(long)]
    weights: bool,
    /// Leave out the light conic.
    #[arg(long)]
    no_conic: bool,
    #[arg(long, default_value_t = 800.0)]
    size: f64,
}

pub fn plot(a: &PlotArgs) -> Result<Outcome> {
    let sys = load_system(&a.graph)?;
    let mut scene = Scene::new(sys.rank())?;
    if !a.no_conic {
        match light_conic(&sys, 256) {
            Ok(c) => {
                scene.conic(&c)?;
            }
            Err(e @ (Error::UnboundedConic | Error::NotLorentzian(_))) => log::warn!("no conic drawn: {e}"),
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(p) = &a.points {
        let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
        let set: Points = read_points_csv(BufReader::new(f), &sys, 1e-12).with_context(|| format!("reading {}", p.display()))?;
        scene.points(&set)?;
    }
    if a.depth > 0 {
        let roots = roots_by_depth(&sys, a.depth);
        scene.hyperplanes(&sys, &roots)?;
        let ci = codim2_intersections(&sys, &roots, false);
        let pts: Vec<_> = ci
            .iter()
            .filter(|c| c.kind == CausalCharacter::SpaceLike)
            .filter_map(|c| c.point(&sys))
            .collect();
        scene.dots(&pts)?;
    }
    if a.weights {
        let w = fundamental_weights(&sys)?;
        scene.diamonds(w.iter().map(|w| &w.vector))?;
    }
    let svg = scene.render(&PlotOptions {
        size: a.size,
        ..Default::default()
    });
    let mut manifest = Manifest::start(&std::env::args().collect::<Vec<_>>(), &sys.graph().to_json());
    manifest.budgets = json!({ "depth": a.depth });
    manifest.write_output(&a.out, svg.as_bytes())?;
    manifest.finish(&a.out, "ok")?;
    println!("wrote {}", a.out.display());
    Ok(Outcome::Ok)
}

#[derive(Args, Debug)]
pub struct ArrangementArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Largest root depth.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Intersections CSV.
    #[arg(long, short)]
    out: PathBuf,
    /// Also write the fundamental weights as JSON.
    #[arg(long)]
    weights_out: Option<PathBuf>,
    /// Include time-like intersections too.
    #[arg(long)]
    all: bool,
}

pub fn arrangement(a: &ArrangementArgs, argv: &[String]) -> Result<Outcome> {
    let sys = load_system(&a.graph)?;
    let roots = roots_by_depth(&sys, a.depth);
    let list = codim2_intersections(&sys, &roots, a.all);
    let mut manifest = Manifest::start(argv, &sys.graph().to_json());
    manifest.budgets = json!({ "depth": a.depth });
    let mut csv = Vec::new();
    write_intersections_csv(&mut csv, &sys, &list)?;
    manifest.write_output(&a.out, &csv)?;
    if let Some(p) = &a.weights_out {
        let w = fundamental_weights(&sys)?;
        let text = serde_json::to_string_pretty(&weights_json(&sys, &w))? + "\n";
        manifest.write_output(p, text.as_bytes())?;
    }
    let count = |k: CausalCharacter| list.iter().filter(|c| c.kind == k).count();
    manifest.summary = json!({
        "roots": roots.len(),
        "space_like": count(CausalCharacter::SpaceLike),
        "light_like": count(CausalCharacter::LightLike),
    });
    manifest.finish(&a.out, "ok")?;
    println!(
        "{} roots up to depth {}; {} space-like and {} light-like intersections",
        roots.len(),
        a.depth,
        count(CausalCharacter::SpaceLike),
        count(CausalCharacter::LightLike)
    );
    Ok(Outcome::Ok)
}

#[derive(Args, Debug)]
pub struct WordLimitArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Finite prefix (e for none).
    #[arg(long, default_value = "e")]
    prefix: String,
    /// Repeated period, e.g. "s t u" or "0.1.2".
    #[arg(long)]
    period: String,
    /// Number of periods over which reducedness is certified.
    #[arg(long, default_value_t = limitroots::limits::HORIZON)]
    horizon: usize,
    #[arg(long)]
    json: bool,
}

pub fn word_limit(a: &WordLimitArgs) -> Result<Outcome> {
    let sys = load_system(&a.graph)?;
    let prefix = parse_cli_word(&a.prefix, sys.rank())?;
    let period = parse_cli_word(&a.period, sys.rank())?;
    let pw = PeriodicWord::new(prefix, period)?;
    let wl = word_limit_root(&sys, &pw, a.horizon, &SpectralOptions::default())?;
    let coords: Vec<f64> = wl.point.coords().iter().copied().collect();
    if a.json {
        let out = json!({
            "prefix": format_word(&pw.prefix),
            "period": format_word(&pw.period),
            "kind": wl.kind.name(),
            "lambda": wl.lambda,
            "point": coords,
            "affine": wl.point.is_affine(),
            "bnorm": wl.point.bnorm(),
            "residual": wl.residual,
            "horizon": wl.horizon,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(Outcome::Ok);
    }
    match wl.lambda {
        Some(l) => println!("period {}: {}, lambda = {l:.9}", format_word(&pw.period), wl.kind),
        None => println!("period {}: {}", format_word(&pw.period), wl.kind),
    }
    let cells: Vec<String> = coords.iter().map(|x| format!("{x:.9}")).collect();
    println!("limit root: ({})", cells.join(", "));
    println!("B(x,x): {:e}", wl.point.bnorm());
    println!("prefix-orbit residual at horizon {}: {:e}", wl.horizon, wl.residual);
    Ok(Outcome::Ok)
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// isotropy, density, sandwich, spectra or weights.
    #[arg(long)]
    suite: String,
    /// Core lengths for isotropy.
    #[arg(long, value_parser = parse_range, default_value = "2..4")]
    core_lengths: RangeInclusive<usize>,
    /// Conjugator lengths 0..=N for isotropy.
    #[arg(long, default_value_t = 4)]
    conj: usize,
    /// Root depth for sandwich and weights.
    #[arg(long, default_value_t = 5)]
    depth: usize,
    /// Three increasing budgets for the density comparison.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    density: Vec<usize>,
    /// Length bound for parabolic versus hyperbolic in density.
    #[arg(long, default_value_t = 8)]
    pair_length: usize,
    /// Element for the spectra suite.
    #[arg(long)]
    word: Option<String>,
    /// Recorded for reproducibility; the current suites are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let suite: Suite = a.suite.parse()?;
    let sys = load_system(&a.graph)?;
    let density: [usize; 3] = a
        .density
        .clone()
        .try_into()
        .map_err(|_| anyhow!("--density needs three budgets"))?;
    if !(density[0] < density[1] && density[1] < density[2]) {
        bail!("--density budgets must increase");
    }
    let budgets = Budgets {
        min_core: *a.core_lengths.start(),
        core: *a.core_lengths.end(),
        conj: a.conj,
        depth: a.depth,
        density,
        pair_length: a.pair_length,
        word: a.word.as_deref().map(|w| parse_cli_word(w, sys.rank())).transpose()?,
        expected: None,
    };
    let report = verify::run(&sys, suite, &budgets)?;
    if a.json {
        let mut v = serde_json::to_value(&report)?;
        v["graph"] = json!(a.graph.graph);
        v["seed"] = json!(a.seed);
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("suite {} on {}", suite, a.graph.graph);
        for c in &report.checks {
            println!("  {c}");
        }
        println!("{}", if report.passed { "PASS" } else { "FAIL" });
    }
    Ok(if report.passed {
        Outcome::Ok
    } else {
        Outcome::VerificationFailed
    })
}
