//! `vsharp` — command-line driver for the symplectic functor library.
//!
//! Subcommands:
//! * `analyze`  — load a group and its irrep catalog; print conjugacy
//!   classes, degrees, indicators and catalog completeness.
//! * `build`    — construct the functor for a group, weights attached, and
//!   write it to a bundle file together with a summary.
//! * `verify`   — reload a bundle and run the verification suites.
//! * `predict`  — print the dimension and block breakdown of the space
//!   attached to a subgroup, i.e. the predicted central vanishing order.
//! * `fetch`    — look up a root-number record, local cache first.
//!
//! Exit codes: 0 all checks pass, 1 mathematical verification failure,
//! 2 input or I/O error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use vsharp::bundle::Bundle;
use vsharp::functor::{build_functor, FunctorInstance};
use vsharp::group::{FiniteGroup, Subgroup};
use vsharp::report::reports_to_json;
use vsharp::repr::Catalog;
use vsharp::rootdata::{lmfdb_fetch, RootNumberRecord, WeightTable};
use vsharp::verify::{self, Suite};
use vsharp::{Error, Result, DEFAULT_TOLERANCE};

/// Environment variable overriding the root-number cache directory.
const CACHE_DIR_ENV: &str = "VSHARP_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = "lmfdb-cache";

#[derive(Parser)]
#[command(
    name = "vsharp",
    version,
    about = "Build and verify symplectic functors on finite subgroup lattices"
)]
struct Cli {
    /// Residual tolerance for verification checks (default 1e-9; verify
    /// defaults to the tolerance stored in the bundle).
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Report format.
    #[arg(long, global = true, value_enum)]
    output: Option<OutputMode>,

    /// JSON config file supplying defaults for any flag or path.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum OutputMode {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print conjugacy classes, irrep degrees, indicators and catalog
    /// completeness for a group.
    Analyze {
        /// Group file (JSON Cayley table).
        #[arg(long)]
        group: Option<PathBuf>,
        /// Irrep catalog directory (containing manifest.json).
        #[arg(long)]
        irreps: Option<PathBuf>,
    },
    /// Construct the functor and write it to a bundle file.
    Build {
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        irreps: Option<PathBuf>,
        /// Weight table file (one sign per quaternionic irrep).
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Output bundle path.
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
    /// Reload a bundle and run verification suites against it.
    Verify {
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Suite: functor, scaling, multiplicity, automorphisms or all.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Print the space dimension and block breakdown for a subgroup
    /// (the predicted vanishing order at the central point).
    Predict {
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Subgroup: a lattice id like S3, or comma-separated element
        /// indices like 0,4.  Omit to list every subgroup.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Look up a root-number record by label, local cache first.
    Fetch {
        /// Record label, e.g. an Artin representation label.
        label: String,
        /// Cache directory (default: $VSHARP_CACHE_DIR or ./lmfdb-cache).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

/// Optional config file mirroring the command-line flags.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    tolerance: Option<f64>,
    group: Option<PathBuf>,
    irreps: Option<PathBuf>,
    weights: Option<PathBuf>,
    bundle: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
    suite: Option<String>,
    output: Option<String>,
    subgroup: Option<String>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(if err.is_input_error() { 2 } else { 1 });
        }
    }
}

fn require(flag: Option<PathBuf>, cfg: Option<PathBuf>, name: &str) -> Result<PathBuf> {
    flag.or(cfg)
        .ok_or_else(|| Error::Config(format!("missing required path --{name}")))
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    // Explicit tolerance (flag or config) overrides a bundle's stored one;
    // otherwise the crate default applies.
    let explicit_tol = cli.tolerance.or(cfg.tolerance);
    if let Some(t) = explicit_tol {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Config(format!("tolerance must be positive, got {t}")));
        }
    }
    let tolerance = explicit_tol.unwrap_or(DEFAULT_TOLERANCE);
    let output = match (cli.output, cfg.output.as_deref()) {
        (Some(mode), _) => mode,
        (None, Some("text")) => OutputMode::Text,
        (None, Some("json")) => OutputMode::Json,
        (None, Some(other)) => {
            return Err(Error::Config(format!(
                "output must be \"text\" or \"json\", got {other:?}"
            )))
        }
        (None, None) => OutputMode::Text,
    };

    match cli.command {
        Command::Analyze { group, irreps } => {
            let group_path = require(group, cfg.group, "group")?;
            let irreps_dir = require(irreps, cfg.irreps, "irreps")?;
            cmd_analyze(&group_path, &irreps_dir, output)
        }
        Command::Build {
            group,
            irreps,
            weights,
            bundle,
        } => {
            let group_path = require(group, cfg.group, "group")?;
            let irreps_dir = require(irreps, cfg.irreps, "irreps")?;
            let weights_path = require(weights, cfg.weights, "weights")?;
            let bundle_path = require(bundle, cfg.bundle, "bundle")?;
            cmd_build(&group_path, &irreps_dir, &weights_path, &bundle_path, tolerance, output)
        }
        Command::Verify { bundle, suite } => {
            let bundle_path = require(bundle, cfg.bundle, "bundle")?;
            let suite_name = suite.or(cfg.suite).unwrap_or_else(|| "all".to_string());
            cmd_verify(&bundle_path, &suite_name, explicit_tol, output)
        }
        Command::Predict { bundle, subgroup } => {
            let bundle_path = require(bundle, cfg.bundle, "bundle")?;
            let spec = subgroup.or(cfg.subgroup);
            cmd_predict(&bundle_path, spec.as_deref(), explicit_tol, output)
        }
        Command::Fetch { label, cache_dir } => {
            let dir = cache_dir
                .or(cfg.cache_dir)
                .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
            cmd_fetch(&label, &dir, output)
        }
    }
}

fn indicator_sign(v: i8) -> String {
    match v {
        1 => "+1".to_string(),
        0 => " 0".to_string(),
        -1 => "-1".to_string(),
        other => format!("{other}"),
    }
}

fn cmd_analyze(group_path: &Path, irreps_dir: &Path, output: OutputMode) -> Result<i32> {
    let group = FiniteGroup::load(group_path)?;
    let catalog = Catalog::load_dir(irreps_dir, &group)?;

    let classes: Vec<serde_json::Value> = group
        .conjugacy_classes()
        .iter()
        .map(|class| {
            let members: Vec<&str> = class.iter().map(|&g| group.element_name(g)).collect();
            serde_json::json!({ "size": class.len(), "members": members })
        })
        .collect();
    let mut irrep_rows = Vec::new();
    let mut symplectic = Vec::new();
    for irrep in catalog.iter() {
        let fs = irrep.frobenius_schur(&group)?;
        if fs == -1 {
            symplectic.push(irrep.label().to_string());
        }
        irrep_rows.push(serde_json::json!({
            "label": irrep.label(),
            "degree": irrep.degree(),
            "indicator": fs,
        }));
    }
    let squared: usize = catalog.iter().map(|ir| ir.degree() * ir.degree()).sum();
    let fs_degree_sum = catalog.indicator_degree_sum(&group)?;
    let square_roots = group.square_root_count_of_identity();

    let doc = serde_json::json!({
        "group": group.name(),
        "order": group.order(),
        "conjugacy_classes": classes,
        "irreps": irrep_rows,
        "squared_degree_sum": squared,
        "catalog_complete": squared == group.order(),
        "indicator_degree_sum": fs_degree_sum,
        "square_roots_of_identity": square_roots,
        "symplectic_labels": symplectic,
    });

    match output {
        OutputMode::Json => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
        OutputMode::Text => {
            println!(
                "group {}: order {}, {} conjugacy classes",
                group.name(),
                group.order(),
                group.conjugacy_classes().len()
            );
            for class in group.conjugacy_classes() {
                let members: Vec<&str> = class.iter().map(|&g| group.element_name(g)).collect();
                println!("  class ({}): {{{}}}", class.len(), members.join(", "));
            }
            println!("irreps (label, degree, indicator):");
            for irrep in catalog.iter() {
                println!(
                    "  {:<12} {:>2}   {}",
                    irrep.label(),
                    irrep.degree(),
                    indicator_sign(irrep.frobenius_schur(&group)?)
                );
            }
            println!(
                "catalog complete: sum of squared degrees = {} = |G| is {}",
                squared,
                squared == group.order()
            );
            println!(
                "indicator-degree sum {} vs #{{g : g^2 = e}} = {}",
                fs_degree_sum, square_roots
            );
            if symplectic.is_empty() {
                println!("symplectic irreps: none");
            } else {
                println!("symplectic irreps: {}", symplectic.join(", "));
            }
        }
    }
    Ok(0)
}

fn lattice_rows(f: &FunctorInstance) -> Vec<serde_json::Value> {
    f.objects()
        .map(|obj| {
            let members: Vec<&str> = obj
                .subgroup
                .members()
                .iter()
                .map(|&g| f.group().element_name(g))
                .collect();
            let blocks: Vec<serde_json::Value> = obj
                .space
                .dimension_breakdown()
                .into_iter()
                .map(|(label, dim)| serde_json::json!({ "label": label, "dim": dim }))
                .collect();
            serde_json::json!({
                "id": format!("S{}", obj.index),
                "order": obj.subgroup.order(),
                "field_degree": f.field_degree(obj.index),
                "members": members,
                "dim": obj.space.dim(),
                "blocks": blocks,
            })
        })
        .collect()
}

fn print_lattice_text(f: &FunctorInstance) {
    println!("subgroups (id, |H|, [K:Q], dim V_K, blocks):");
    for obj in f.objects() {
        let breakdown = obj.space.dimension_breakdown();
        let blocks = if breakdown.is_empty() {
            "-".to_string()
        } else {
            breakdown
                .iter()
                .map(|(label, dim)| format!("{label}:{dim}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let members: Vec<&str> = obj
            .subgroup
            .members()
            .iter()
            .map(|&g| f.group().element_name(g))
            .collect();
        println!(
            "  S{:<3} |H|={:<3} [K:Q]={:<3} dim={:<3} {}  H={{{}}}",
            obj.index,
            obj.subgroup.order(),
            f.field_degree(obj.index),
            obj.space.dim(),
            blocks,
            members.join(", ")
        );
    }
}

fn cmd_build(
    group_path: &Path,
    irreps_dir: &Path,
    weights_path: &Path,
    bundle_path: &Path,
    tolerance: f64,
    output: OutputMode,
) -> Result<i32> {
    let group = FiniteGroup::load(group_path)?;
    let catalog = Catalog::load_dir(irreps_dir, &group)?;
    let weights = WeightTable::load(weights_path, &group, &catalog)?;
    let f = build_functor(group, catalog, weights, tolerance)?;
    let bundle = Bundle::from_instance(&f);
    bundle.save(bundle_path)?;

    let summaries: Vec<serde_json::Value> = f
        .summaries()
        .into_iter()
        .map(|s| {
            serde_json::json!({
                "label": s.label,
                "degree": s.degree,
                "weight": s.weight,
                "selected": s.selected,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "group": f.group().name(),
        "bundle": bundle_path,
        "tolerance": f.tolerance(),
        "quaternionic_irreps": summaries,
        "selected": f.selected_labels(),
        "ambient_dim": f.ambient().dim(),
        "zero_functor": f.selected_labels().is_empty(),
        "subgroups": lattice_rows(&f),
    });
    match output {
        OutputMode::Json => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
        OutputMode::Text => {
            println!(
                "built functor for {}: {} selected irreps, ambient dim {}",
                f.group().name(),
                f.selected_labels().len(),
                f.ambient().dim()
            );
            for s in f.summaries() {
                let w = match s.weight {
                    Some(w) => format!("{w:+}"),
                    None => "?".to_string(),
                };
                let mark = if s.selected { "selected" } else { "skipped" };
                println!("  {} (degree {}, weight {w}): {mark}", s.label, s.degree);
            }
            print_lattice_text(&f);
            println!("bundle written to {}", bundle_path.display());
        }
    }
    if f.selected_labels().is_empty() {
        eprintln!(
            "warning: no quaternionic irrep has weight -1; the functor is identically zero"
        );
    }
    Ok(0)
}

fn cmd_verify(
    bundle_path: &Path,
    suite_name: &str,
    tolerance_override: Option<f64>,
    output: OutputMode,
) -> Result<i32> {
    let suite: Suite = suite_name.parse()?;
    let bundle = Bundle::load(bundle_path)?;
    let f = bundle.reconstruct(tolerance_override)?;
    let reports = verify::run(&f, suite, f.tolerance())?;
    match output {
        OutputMode::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&reports_to_json(&reports)).unwrap()
            );
        }
        OutputMode::Text => {
            for report in &reports {
                print!("{}", report.render_text());
            }
            let total: usize = reports.iter().map(|r| r.checks.len()).sum();
            let max: f64 = reports
                .iter()
                .map(|r| r.max_residual())
                .fold(0.0, f64::max);
            let verdict = if verify::all_pass(&reports) { "ok" } else { "FAILED" };
            println!("verify: {total} checks, max residual {max:.3e} ... {verdict}");
        }
    }
    if verify::all_pass(&reports) {
        Ok(0)
    } else {
        for check in verify::failures(&reports) {
            eprintln!(
                "FAILED {}: {} (residual {:.3e}, threshold {:.1e})",
                check.id, check.statement, check.residual, check.threshold
            );
        }
        Ok(1)
    }
}

/// Resolve a subgroup spec: `S<k>` names the k-th lattice entry; otherwise a
/// comma-separated element list is validated as a subgroup.
fn resolve_subgroup(f: &FunctorInstance, spec: &str) -> Result<usize> {
    let trimmed = spec.trim();
    if let Some(rest) = trimmed.strip_prefix('S').or_else(|| trimmed.strip_prefix('s')) {
        if let Ok(idx) = rest.parse::<usize>() {
            if idx < f.lattice().len() {
                return Ok(idx);
            }
            return Err(Error::Config(format!(
                "lattice id {trimmed} out of range; the lattice has {} subgroups",
                f.lattice().len()
            )));
        }
    }
    let members = trimmed
        .split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                Error::Config(format!(
                    "subgroup spec {spec:?}: expected S<k> or comma-separated element indices"
                ))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    let sub = Subgroup::new(f.group(), &members)?;
    f.subgroup_index(&sub).ok_or_else(|| {
        Error::InvalidSubgroup("subgroup is valid but missing from the stored lattice".into())
    })
}

fn cmd_predict(
    bundle_path: &Path,
    spec: Option<&str>,
    tolerance_override: Option<f64>,
    output: OutputMode,
) -> Result<i32> {
    let bundle = Bundle::load(bundle_path)?;
    let f = bundle.reconstruct(tolerance_override)?;
    match spec {
        None => {
            let doc = serde_json::json!({
                "group": f.group().name(),
                "subgroups": lattice_rows(&f),
            });
            match output {
                OutputMode::Json => {
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap())
                }
                OutputMode::Text => print_lattice_text(&f),
            }
        }
        Some(spec) => {
            let idx = resolve_subgroup(&f, spec)?;
            let obj = f.object(idx);
            let members: Vec<&str> = obj
                .subgroup
                .members()
                .iter()
                .map(|&g| f.group().element_name(g))
                .collect();
            let blocks: Vec<serde_json::Value> = obj
                .space
                .dimension_breakdown()
                .into_iter()
                .map(|(label, dim)| serde_json::json!({ "label": label, "dim": dim }))
                .collect();
            let doc = serde_json::json!({
                "group": f.group().name(),
                "id": format!("S{idx}"),
                "subgroup": members,
                "field_degree": f.field_degree(idx),
                "dim": obj.space.dim(),
                "predicted_central_vanishing_order": obj.space.dim(),
                "blocks": blocks,
            });
            match output {
                OutputMode::Json => {
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap())
                }
                OutputMode::Text => {
                    println!(
                        "subgroup S{idx} = {{{}}} of {} (field degree {})",
                        members.join(", "),
                        f.group().name(),
                        f.field_degree(idx)
                    );
                    println!(
                        "dim V = {} -> predicted vanishing order at the central point: {}",
                        obj.space.dim(),
                        obj.space.dim()
                    );
                    for (label, dim) in obj.space.dimension_breakdown() {
                        println!("  block {label}: dim {dim}");
                    }
                }
            }
        }
    }
    Ok(0)
}

fn cmd_fetch(label: &str, cache_dir: &Path, output: OutputMode) -> Result<i32> {
    let record: RootNumberRecord = lmfdb_fetch(label, cache_dir)?;
    match output {
        OutputMode::Json => {
            println!("{}", serde_json::to_string_pretty(&record).unwrap());
        }
        OutputMode::Text => {
            println!("label:      {}", record.label);
            println!(
                "group:      {}",
                record.group_id.as_deref().unwrap_or("(unspecified)")
            );
            println!(
                "irrep:      {}",
                record.irrep_label.as_deref().unwrap_or("(unspecified)")
            );
            println!("w:          {:+}", record.w);
            println!("provenance: {}", record.provenance);
            if let Some(hint) = &record.field_hint {
                println!("field:      {hint}");
            }
        }
    }
    Ok(0)
}
