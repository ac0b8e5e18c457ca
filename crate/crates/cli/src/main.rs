//! `dill` — command line tools for primitive substitution subshifts and the
//! dill maps (possibly-erasing sliding block codes) between them.
//!
//! Exit codes: 0 success, 2 bad input (parse errors, invalid parameters,
//! unsupported subshifts), 3 exhausted search budget, 1 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dill_core::conjugation::{shift_map, trajectory, TrajectoryConfig, TrajectoryEnd};
use dill_core::dill::{almost_inverse, BlockRule, DillTable};
use dill_core::enumeration::{
    enumerate_block_maps, example_family, period_class, EnumerationConfig, FamilyVariant,
};
use dill_core::recognizer::build_recognizer;
use dill_core::spectra::{char_poly, dominant_eigenvalue, format_poly, is_pisot, PisotMode};
use dill_core::substitution::{FactorLanguage, Substitution};
use dill_core::Error;

/// Tolerance used whenever an eigenvalue bracket must be refined.
const EIGENVALUE_TOL: f64 = 1e-12;
/// Fixed point prefix length behind the `--phases` computation.
const PHASE_HORIZON: usize = 1 << 12;

#[derive(Parser)]
#[command(name = "dill", version, about = "Substitution subshifts and dill morphisms")]
struct Cli {
    /// Output format: human-readable text or one JSON object per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Report matrix, spectrum and combinatorial data of a substitution.
    Analyze {
        /// Substitution file (`letter -> image` lines).
        file: PathBuf,
        /// Length of the fixed point sample at the end of the report.
        #[arg(long, default_value_t = 64)]
        sample: usize,
    },
    /// Factor complexity of the subshift, with optional extras.
    Language {
        file: PathBuf,
        /// Largest factor length reported.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// List the admissible words of each length.
        #[arg(long)]
        words: bool,
        /// Report the recurrence gap of each length.
        #[arg(long)]
        gaps: bool,
        /// Report the least exponent with no admissible power among short words.
        #[arg(long)]
        powers: bool,
    },
    /// Build the minimal cutting-window recognizer and print its table.
    Recognize {
        file: PathBuf,
        #[command(flatten)]
        rec: RecognizerOpts,
    },
    /// Build a dill map inverting the substitution up to shift.
    Invert {
        file: PathBuf,
        #[command(flatten)]
        rec: RecognizerOpts,
    },
    /// Rewrite a morphism step by step and report the trajectory.
    Conjugate {
        /// Substitution of the domain subshift.
        tau: PathBuf,
        /// Substitution of the codomain subshift.
        rho: PathBuf,
        /// Start from the shift power `x -> x[N..]`.
        #[arg(long, conflicts_with = "map")]
        shift: Option<usize>,
        /// Start from a dill table or block rule file.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Step budget, counting the starting map.
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        /// Sample prefix length for the per-step measurements.
        #[arg(long, default_value_t = 1 << 14)]
        horizon: usize,
        /// Print every intermediate table, not just its statistics.
        #[arg(long)]
        tables: bool,
    },
    /// Enumerate all block maps of a given radius from the subshift to itself.
    Endos {
        file: PathBuf,
        #[command(flatten)]
        opts: EnumOpts,
    },
    /// Enumerate all block maps of a given radius between two subshifts.
    Morphisms {
        tau: PathBuf,
        rho: PathBuf,
        #[command(flatten)]
        opts: EnumOpts,
    },
    /// Print the two-parameter family of substitution pairs with equal
    /// expansion rates but no radius-zero conjugacy.
    ExampleFamily {
        /// Number of letter pairs cycled by the substitution (at least 2).
        #[arg(long)]
        m: usize,
        /// Image length parameter (at least 3).
        #[arg(long)]
        n: usize,
        /// Give the `b`-letter images one extra letter.
        #[arg(long)]
        nonuniform: bool,
        /// Write `tau.sub` and `rho.sub` into this directory instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RecognizerOpts {
    /// Largest window radius tried before giving up.
    #[arg(long, default_value_t = 16)]
    max_radius: usize,
    /// Multiplier on the recurrence gap fixing the verification prefix.
    #[arg(long, default_value_t = 4)]
    coverage_factor: usize,
}

#[derive(Args)]
struct EnumOpts {
    /// Forward window radius of the enumerated block maps.
    #[arg(long)]
    radius: usize,
    /// Search tree node budget.
    #[arg(long, default_value_t = 1 << 20)]
    node_budget: usize,
    /// Cap on the verification prefix length.
    #[arg(long, default_value_t = 1 << 18)]
    prefix_cap: usize,
    /// Largest shift power tried when grouping maps.
    #[arg(long, default_value_t = 32)]
    shift_bound: usize,
    /// Also report the cutting-grid phase of each class (uniform codomain).
    #[arg(long)]
    phases: bool,
}

fn main() -> ExitCode {
    // die silently on a closed pipe like other unix filters, instead of
    // panicking inside println!
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(match e.downcast_ref::<Error>() {
                Some(Error::Parse(_) | Error::Invalid(_) | Error::Unsupported(_)) => 2,
                Some(Error::Budget(_)) => 3,
                Some(Error::Internal(_)) => 1,
                // IO and other environmental failures count as bad input
                None => 2,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze { file, sample } => cmd_analyze(fmt, file, *sample),
        Command::Language { file, max_len, words, gaps, powers } => {
            cmd_language(fmt, file, *max_len, *words, *gaps, *powers)
        }
        Command::Recognize { file, rec } => cmd_recognize(fmt, file, rec),
        Command::Invert { file, rec } => cmd_invert(fmt, file, rec),
        Command::Conjugate { tau, rho, shift, map, max_steps, horizon, tables } => {
            cmd_conjugate(fmt, tau, rho, *shift, map.as_deref(), *max_steps, *horizon, *tables)
        }
        Command::Endos { file, opts } => cmd_morphisms(fmt, file, file, opts),
        Command::Morphisms { tau, rho, opts } => cmd_morphisms(fmt, tau, rho, opts),
        Command::ExampleFamily { m, n, nonuniform, out_dir } => {
            cmd_family(fmt, *m, *n, *nonuniform, out_dir.as_deref())
        }
    }
}

fn read_substitution(path: &Path) -> Result<Substitution> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let s = Substitution::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(s)
}

fn indented(block: &str) -> String {
    block
        .lines()
        .map(|l| format!("  {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

// ---------------------------------------------------------------------------
// analyze

fn cmd_analyze(fmt: Format, file: &Path, sample: usize) -> Result<u8> {
    let s = read_substitution(file)?;
    let alphabet = s.alphabet().clone();
    let m = s.matrix();
    let poly = char_poly(&m);
    let primitive = s.is_primitive();
    let power = m.primitivity_power();
    let eigen = dominant_eigenvalue(&m, EIGENVALUE_TOL);
    let literal = is_pisot(&m, PisotMode::Literal);
    let strict = is_pisot(&m, PisotMode::Strict);
    let seed = s.prolongable_seed();
    let mut lang = FactorLanguage::new(&s);
    let aperiodic = lang.as_mut().map_err(|e| e.clone()).and_then(|l| l.is_aperiodic(64));
    let fixed = seed
        .as_ref()
        .map_err(Error::clone)
        .and_then(|&(a, _)| s.fixed_point_prefix(a, sample));

    let matrix_rows: Vec<Vec<u64>> = (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.entry(i, j)).collect())
        .collect();

    if fmt == Format::Text {
        let names: Vec<&str> = alphabet.names().collect();
        println!("alphabet: {}", names.join(" "));
        for a in alphabet.letters() {
            println!("rule: {} -> {}", alphabet.name(a), alphabet.format_word(s.image(a)));
        }
        let rows: Vec<String> = matrix_rows
            .iter()
            .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        println!("matrix: [{}]", rows.join("; "));
        let sums: Vec<String> = m.row_sums().iter().map(u64::to_string).collect();
        println!("row_sums: {}", sums.join(" "));
        match s.uniform_length() {
            Some(u) => println!("uniform_length: {u}"),
            None => println!("uniform_length: -"),
        }
        match (primitive, power) {
            (true, Some(p)) => println!("primitive: yes (power {p})"),
            _ => println!("primitive: no"),
        }
        println!("char_poly: {}", format_poly(&poly, "x"));
        match &eigen {
            Ok(ev) if ev.exact => println!("dominant_eigenvalue: {} (exact)", ev.lower),
            Ok(ev) => println!(
                "dominant_eigenvalue: {:.12} (width {:.1e})",
                ev.approx(),
                ev.width()
            ),
            Err(e) => println!("dominant_eigenvalue: unavailable ({e})"),
        }
        print_flag("pisot_literal", &literal);
        print_flag("pisot_strict", &strict);
        match &seed {
            Ok((a, p)) => println!("seed: {} (power {p})", alphabet.name(*a)),
            Err(e) => println!("seed: unavailable ({e})"),
        }
        print_flag("aperiodic", &aperiodic);
        match &fixed {
            Ok(w) => println!("sample: {}", alphabet.format_word(w)),
            Err(e) => println!("sample: unavailable ({e})"),
        }
    } else {
        let rules: Value = alphabet
            .letters()
            .map(|a| (alphabet.name(a).to_string(), json!(alphabet.format_word(s.image(a)))))
            .collect::<serde_json::Map<_, _>>()
            .into();
        let eigen_json = match &eigen {
            Ok(ev) => json!({ "approx": ev.approx(), "width": ev.width(), "exact": ev.exact }),
            Err(_) => Value::Null,
        };
        println!(
            "{}",
            json!({
                "kind": "analysis",
                "alphabet": alphabet.names().collect::<Vec<_>>(),
                "rules": rules,
                "matrix": matrix_rows,
                "row_sums": m.row_sums(),
                "uniform_length": s.uniform_length(),
                "primitive": primitive,
                "primitivity_power": power,
                "char_poly": format_poly(&poly, "x"),
                "dominant_eigenvalue": eigen_json,
                "pisot_literal": literal.ok(),
                "pisot_strict": strict.ok(),
                "seed": seed.as_ref().ok().map(|&(a, _)| alphabet.name(a)),
                "seed_power": seed.as_ref().ok().map(|&(_, p)| p),
                "aperiodic": aperiodic.ok(),
                "sample": fixed.ok().map(|w| alphabet.format_word(&w)),
            })
        );
    }
    Ok(0)
}

fn print_flag(key: &str, value: &std::result::Result<bool, Error>) {
    match value {
        Ok(true) => println!("{key}: yes"),
        Ok(false) => println!("{key}: no"),
        Err(e) => println!("{key}: unavailable ({e})"),
    }
}

// ---------------------------------------------------------------------------
// language

fn cmd_language(
    fmt: Format,
    file: &Path,
    max_len: usize,
    words: bool,
    gaps: bool,
    powers: bool,
) -> Result<u8> {
    if max_len == 0 {
        bail!(Error::Invalid("max length must be at least 1".into()));
    }
    let s = read_substitution(file)?;
    let alphabet = s.alphabet().clone();
    let mut lang = FactorLanguage::new(&s)?;
    let mut rows = Vec::new();
    for n in 1..=max_len {
        let count = lang.complexity(n)?;
        let gap = if gaps { Some(lang.recurrence_gap(n)?) } else { None };
        let listed: Option<Vec<String>> = if words {
            Some(lang.block_words(n)?.iter().map(|w| alphabet.format_word(w)).collect())
        } else {
            None
        };
        rows.push((n, count, gap, listed));
    }
    let exponent = if powers { Some(lang.bounded_power_exponent(max_len)?) } else { None };

    if fmt == Format::Text {
        for (n, count, _, _) in &rows {
            println!("p({n}) = {count}");
        }
        for (n, _, gap, _) in &rows {
            if let Some(g) = gap {
                println!("gap({n}) = {g}");
            }
        }
        if let Some(e) = exponent {
            println!("power_bound = {e}");
        }
        for (n, _, _, listed) in &rows {
            if let Some(ws) = listed {
                println!("words({n}): {}", ws.join(", "));
            }
        }
    } else {
        for (n, count, gap, listed) in &rows {
            println!(
                "{}",
                json!({ "kind": "complexity", "n": n, "count": count, "gap": gap, "words": listed })
            );
        }
        if let Some(e) = exponent {
            println!("{}", json!({ "kind": "power_bound", "exponent": e }));
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// recognize / invert

fn windows_json(entries: impl Iterator<Item = (String, Value)>) -> Value {
    entries.collect::<serde_json::Map<_, _>>().into()
}

fn cmd_recognize(fmt: Format, file: &Path, opts: &RecognizerOpts) -> Result<u8> {
    let s = read_substitution(file)?;
    let rec = build_recognizer(&s, opts.max_radius, opts.coverage_factor)?;
    if fmt == Format::Text {
        print!("{}", rec.dump());
    } else {
        let alphabet = s.alphabet();
        let windows = windows_json(rec.entries().map(|(w, v)| {
            (alphabet.format_word(w), v.as_ref().map_or(Value::Null, |l| json!(alphabet.name(*l))))
        }));
        println!(
            "{}",
            json!({ "kind": "recognizer", "radius": rec.radius(), "windows": windows })
        );
    }
    Ok(0)
}

fn cmd_invert(fmt: Format, file: &Path, opts: &RecognizerOpts) -> Result<u8> {
    let s = read_substitution(file)?;
    let rec = build_recognizer(&s, opts.max_radius, opts.coverage_factor)?;
    let inv = almost_inverse(&s, &rec, opts.coverage_factor)?;
    if fmt == Format::Text {
        print!("{}", inv.dump());
    } else {
        println!("{}", dill_json(&inv));
    }
    Ok(0)
}

fn dill_json(t: &DillTable) -> Value {
    let windows = windows_json(
        t.entries()
            .map(|(w, out)| (t.domain().format_word(w), json!(t.codomain().format_word(out)))),
    );
    json!({ "kind": "dill_table", "in_radius": t.in_radius(), "windows": windows })
}

// ---------------------------------------------------------------------------
// conjugate

#[allow(clippy::too_many_arguments)]
fn cmd_conjugate(
    fmt: Format,
    tau_file: &Path,
    rho_file: &Path,
    shift: Option<usize>,
    map: Option<&Path>,
    max_steps: usize,
    horizon: usize,
    tables: bool,
) -> Result<u8> {
    let tau = read_substitution(tau_file)?;
    let rho = read_substitution(rho_file)?;
    let phi = match (shift, map) {
        (Some(n), None) => {
            let mut lang = FactorLanguage::new(&tau)?;
            shift_map(&mut lang, n)?
        }
        (None, Some(path)) => read_map(path, &tau, &rho)?,
        (None, None) => bail!(Error::Invalid("pass --shift N or --map FILE".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let cfg = TrajectoryConfig { max_steps, horizon, tol: 1e-9 };
    let traj = trajectory(&phi, &tau, &rho, &cfg)?;

    for step in &traj.steps {
        if fmt == Format::Text {
            println!(
                "step {}: in_radius={} max_output={} z={:.6} d={:.3} hash={:016x}",
                step.index, step.table.in_radius(), step.max_output, step.z_estimate,
                step.d_observed, step.hash
            );
            if tables {
                println!("{}", indented(&step.table.dump()));
            }
        } else {
            let mut rec = json!({
                "kind": "step",
                "index": step.index,
                "in_radius": step.table.in_radius(),
                "max_output": step.max_output,
                "z": step.z_estimate,
                "d": step.d_observed,
                "hash": format!("{:016x}", step.hash),
            });
            if tables {
                rec["table"] = dill_json(&step.table);
            }
            println!("{rec}");
        }
    }
    match traj.end {
        TrajectoryEnd::Cycle { entry, period } => {
            if fmt == Format::Text {
                println!("cycle: entry={entry} period={period}");
            } else {
                println!("{}", json!({ "kind": "cycle", "entry": entry, "period": period }));
            }
            Ok(0)
        }
        TrajectoryEnd::Budget => {
            if fmt == Format::Text {
                println!("budget: steps={}", traj.steps.len());
            } else {
                println!("{}", json!({ "kind": "budget", "steps": traj.steps.len() }));
            }
            Ok(3)
        }
    }
}

/// Reads a starting morphism: a dill table dump (`in_radius:` header) or a
/// block rule dump (`radius:` header).
fn read_map(path: &Path, tau: &Substitution, rho: &Substitution) -> Result<DillTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let header = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    let table = if header.starts_with("in_radius:") {
        DillTable::parse(&text, tau.alphabet(), rho.alphabet())
    } else if header.starts_with("radius:") {
        BlockRule::parse(&text, tau.alphabet(), rho.alphabet())
            .map(|b| DillTable::from_block_rule(&b))
    } else {
        Err(Error::Parse("expected an `in_radius:` or `radius:` header".into()))
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok(table)
}

// ---------------------------------------------------------------------------
// endos / morphisms

fn cmd_morphisms(fmt: Format, tau_file: &Path, rho_file: &Path, opts: &EnumOpts) -> Result<u8> {
    let tau = read_substitution(tau_file)?;
    let rho = if rho_file == tau_file { tau.clone() } else { read_substitution(rho_file)? };
    let cfg = EnumerationConfig {
        node_budget: opts.node_budget,
        prefix_cap: opts.prefix_cap,
        shift_bound: opts.shift_bound,
        ..EnumerationConfig::default()
    };
    let e = enumerate_block_maps(&tau, &rho, opts.radius, &cfg)?;

    // the cutting-grid phase needs a codomain recognizer; build it lazily
    let rec = if opts.phases && rho.uniform_length().map_or(false, |u| u > 1) {
        Some(build_recognizer(&rho, cfg.max_recognizer_radius, cfg.coverage_factor)?)
    } else {
        None
    };
    let phase_of = |f: &BlockRule| -> Option<usize> {
        let rec = rec.as_ref()?;
        period_class(f, &tau, &rho, rec, PHASE_HORIZON).ok().flatten()
    };

    if fmt == Format::Text {
        println!("maps: {}", e.maps.len());
        for (i, class) in e.classes.iter().enumerate() {
            let f = &e.maps[class.representative];
            match phase_of(f) {
                Some(p) => println!("class {i}: members={} phase={p}", class.members.len()),
                None => println!("class {i}: members={}", class.members.len()),
            }
            println!("{}", indented(&f.dump()));
        }
        println!("{}", e.summary());
    } else {
        for (i, class) in e.classes.iter().enumerate() {
            let f = &e.maps[class.representative];
            let windows = windows_json(f.entries().map(|(w, l)| {
                (f.domain().format_word(w), json!(f.codomain().name(*l)))
            }));
            println!(
                "{}",
                json!({
                    "kind": "class",
                    "index": i,
                    "members": class.members,
                    "phase": phase_of(f),
                    "representative": { "radius": f.radius(), "windows": windows },
                })
            );
        }
        println!(
            "{}",
            json!({
                "kind": "summary",
                "maps": e.maps.len(),
                "classes": e.classes.len(),
                "radius": e.radius,
                "verified_to": e.verified_to,
                "nodes_visited": e.nodes_visited,
            })
        );
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// example family

fn cmd_family(
    fmt: Format,
    m: usize,
    n: usize,
    nonuniform: bool,
    out_dir: Option<&Path>,
) -> Result<u8> {
    let variant = if nonuniform { FamilyVariant::NonUniform } else { FamilyVariant::Uniform };
    let (tau, rho) = example_family(m, n, variant)?;
    let label = if nonuniform { "nonuniform" } else { "uniform" };
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let tau_path = dir.join("tau.sub");
        let rho_path = dir.join("rho.sub");
        fs::write(&tau_path, tau.format()).with_context(|| format!("writing {}", tau_path.display()))?;
        fs::write(&rho_path, rho.format()).with_context(|| format!("writing {}", rho_path.display()))?;
        if fmt == Format::Text {
            println!("wrote {}", tau_path.display());
            println!("wrote {}", rho_path.display());
        } else {
            println!(
                "{}",
                json!({
                    "kind": "family",
                    "m": m, "n": n, "variant": label,
                    "tau_path": tau_path.display().to_string(),
                    "rho_path": rho_path.display().to_string(),
                })
            );
        }
    } else if fmt == Format::Text {
        println!("# tau m={m} n={n} {label}");
        print!("{}", tau.format());
        println!();
        println!("# rho");
        print!("{}", rho.format());
    } else {
        println!(
            "{}",
            json!({
                "kind": "family",
                "m": m, "n": n, "variant": label,
                "tau": tau.format(),
                "rho": rho.format(),
            })
        );
    }
    Ok(0)
}
