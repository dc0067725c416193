//! fanoforge: exact intersection-theory reports for rank-2 projective
//! bundles over surfaces and the positive-characteristic Fano threefold
//! construction built on them.

mod presets;
mod report;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fanoforge_core::chow::ConventionMode;
use fanoforge_core::construction::ConstructionInput;
use fanoforge_core::curves;
use fanoforge_core::rat::{parse_rat, rat_str};
use fanoforge_core::{EngineError, Result};

#[derive(Parser)]
#[command(
    name = "fanoforge",
    version,
    about = "Exact intersection theory on P^1-bundles over surfaces, with a \
             construction pipeline for positive-characteristic Fano threefolds"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Geom,
    Both,
}

impl ModeArg {
    fn single(self) -> Option<ConventionMode> {
        match self {
            ModeArg::Paper => Some(ConventionMode::PaperFormal),
            ModeArg::Geom => Some(ConventionMode::Geometric),
            ModeArg::Both => None,
        }
    }

    fn list(self) -> Vec<ConventionMode> {
        match self {
            ModeArg::Paper => vec![ConventionMode::PaperFormal],
            ModeArg::Geom => vec![ConventionMode::Geometric],
            ModeArg::Both => vec![ConventionMode::PaperFormal, ConventionMode::Geometric],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in identity and oracle suite (exit 1 on failure).
    Verify {
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Seed for the randomized identity checks.
        #[arg(long, default_value_t = 0x00fa_90f0)]
        seed: u64,
        /// Number of random models per formula-reproduction check.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Build a threefold report from the splitting recipe, including the
    /// p-cover and a cyclic cover.
    Construct {
        /// Surface model: a JSON file path or a preset name
        /// (p2 | ample-k | raynaud).
        #[arg(long)]
        surface: String,
        /// K_S^2 for the normalized rank-1 presets.
        #[arg(long)]
        ks2: Option<i64>,
        /// Characteristic (prime >= 3).
        #[arg(long)]
        p: u64,
        /// c1 = -n*K_S.
        #[arg(long)]
        n: u64,
        /// Target l(Z); indexes the family B_d.
        #[arg(long)]
        d: u64,
        /// Cyclic cover order (default: smallest m >= 3 coprime to p).
        #[arg(long)]
        m: Option<u64>,
        /// Cover divisor D as a class expression (default: the first
        /// declared ample generator).
        #[arg(long = "cover-d", allow_hyphen_values = true)]
        cover_d: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Tabulate feasibility and degrees over an (n, d) grid.
    Table {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        ks2: Option<i64>,
        #[arg(long, default_value_t = 3)]
        n_min: u64,
        #[arg(long, default_value_t = 6)]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        d_min: u64,
        #[arg(long, default_value_t = 40)]
        d_max: u64,
    },
    /// Minimal n >= 3 whose anticanonical degree reaches the target.
    Search {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        ks2: Option<i64>,
        /// Target degree N (exact rational).
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
    },
    /// Curve-side computations.
    Curve {
        #[command(subcommand)]
        which: CurveCmd,
    },
    /// Parse a class expression, reduce it, and report its degree.
    Eval {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        ks2: Option<i64>,
        /// The expression, e.g. "2*H + 3*A" or "(H + K)^3".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// c1 of the bundle as a divisor expression.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c1: String,
        /// c2 of the bundle as an exact rational.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c2: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Is the (p,1)-hypersurface in P^n x P^n Fano?
    FanoBidegree {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Genus of the hyperelliptic curve y^2 = x^p - a.
    Tate {
        #[arg(long)]
        p: u64,
    },
    /// Canonical data and kernel bound for the curve P(y^p) - y = z^(pe-1).
    Raynaud {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
    },
    /// Riemann-Roch for a one-point divisor.
    Rr {
        #[arg(long, allow_negative_numbers = true)]
        genus: i64,
        #[arg(long, allow_negative_numbers = true)]
        deg: i64,
    },
}

fn main() {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command, format) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            if format == Format::Json {
                let payload = json!({ "error": e.to_string(), "exit_code": e.exit_code() });
                eprintln!("{payload}");
            } else {
                eprintln!("error: {e}");
            }
            std::process::exit(e.exit_code());
        }
    }
}

fn run(command: Command, format: Format) -> Result<i32> {
    match command {
        Command::Verify { mode, seed, cases } => run_verify(mode, seed, cases, format),
        Command::Construct {
            surface,
            ks2,
            p,
            n,
            d,
            m,
            cover_d,
            mode,
        } => run_construct(&surface, ks2, p, n, d, m, cover_d.as_deref(), mode, format),
        Command::Table {
            surface,
            ks2,
            n_min,
            n_max,
            d_min,
            d_max,
        } => run_table(&surface, ks2, (n_min, n_max), (d_min, d_max), format),
        Command::Search {
            surface,
            ks2,
            target,
            mode,
        } => run_search(&surface, ks2, &target, mode, format),
        Command::Curve { which } => run_curve(which, format),
        Command::Eval {
            surface,
            ks2,
            expr,
            c1,
            c2,
            mode,
        } => run_eval(&surface, ks2, &expr, &c1, &c2, mode, format),
        Command::FanoBidegree { p, n } => {
            let fano = fanoforge_core::construction::fano_bidegree_check(p, n)?;
            match format {
                Format::Json => println!("{}", json!({ "p": p, "n": n, "fano": fano })),
                Format::Text => println!(
                    "(p, 1)-hypersurface in P^{n} x P^{n} with p = {p}: {}",
                    if fano { "Fano" } else { "not Fano" }
                ),
            }
            Ok(0)
        }
    }
}

fn run_verify(mode: ModeArg, seed: u64, cases: usize, format: Format) -> Result<i32> {
    let filter = match mode {
        ModeArg::Paper => verify::CheckMode::Paper,
        ModeArg::Geom => verify::CheckMode::Geom,
        ModeArg::Both => verify::CheckMode::Any,
    };
    let results = verify::run_suite(filter, seed, cases);
    let failed = results.iter().filter(|r| !r.pass).count();
    match format {
        Format::Json => {
            let checks: Vec<_> = results
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "mode": r.mode.label(),
                        "pass": r.pass,
                        "detail": r.detail,
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "checks": checks,
                    "passed": results.len() - failed,
                    "failed": failed,
                })
            );
        }
        Format::Text => {
            for r in &results {
                if r.pass {
                    println!("PASS  {}", r.name);
                } else {
                    println!("FAIL  {} — {}", r.name, r.detail);
                }
            }
            println!("{} passed, {failed} failed", results.len() - failed);
        }
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn run_construct(
    surface: &str,
    ks2: Option<i64>,
    p: u64,
    n: u64,
    d: u64,
    m: Option<u64>,
    cover_d: Option<&str>,
    mode: ModeArg,
    format: Format,
) -> Result<i32> {
    let model = presets::resolve_surface(surface, ks2, Some(p))?;
    let cover_divisor = match cover_d {
        Some(src) => Some(fanoforge_core::expr::eval_divisor(src, &model)?),
        None => None,
    };
    let input = ConstructionInput {
        model,
        p,
        n,
        d,
        cover_divisor,
        mode: mode.single().unwrap_or(ConventionMode::PaperFormal),
    };
    let outcome = report::run_construction(&input, m)?;
    match format {
        Format::Json => println!("{}", report::construct_json(&input, &outcome, surface)),
        Format::Text => print!("{}", report::construct_text(&input, &outcome, surface)),
    }
    Ok(0)
}

fn run_table(
    surface: &str,
    ks2: Option<i64>,
    n_range: (u64, u64),
    d_range: (u64, u64),
    format: Format,
) -> Result<i32> {
    if n_range.0 < 1 || n_range.0 > n_range.1 || d_range.0 < 1 || d_range.0 > d_range.1 {
        return Err(EngineError::invalid(
            "table ranges must satisfy 1 <= min <= max",
        ));
    }
    let model = presets::resolve_surface(surface, ks2, None)?;
    if !model.is_positive_on_ample(model.canonical()) {
        return Err(EngineError::invalid(
            "the table requires a model with ample K_S",
        ));
    }
    let rows = report::table_rows(&model, n_range, d_range)?;
    match format {
        Format::Json => println!("{}", report::table_json(&rows)),
        Format::Text => print!("{}", report::table_text(&rows)),
    }
    Ok(0)
}

fn run_search(
    surface: &str,
    ks2: Option<i64>,
    target: &str,
    mode: ModeArg,
    format: Format,
) -> Result<i32> {
    let model = presets::resolve_surface(surface, ks2, None)?;
    let target = parse_rat(target).ok_or_else(|| {
        EngineError::invalid(format!("--target expects an exact rational, got `{target}`"))
    })?;
    let mut results = Vec::new();
    for m in mode.list() {
        let (n, degree) = fanoforge_core::construction::unbounded_search(&model, &target, m)?;
        results.push((m, n, degree));
    }
    match format {
        Format::Json => {
            let entries: Vec<_> = results
                .iter()
                .map(|(m, n, deg)| json!({ "mode": m.label(), "n": n, "degree": rat_str(deg) }))
                .collect();
            println!(
                "{}",
                json!({
                    "surface": model.name(),
                    "ks2": rat_str(&model.ks2()),
                    "target": rat_str(&target),
                    "results": entries,
                })
            );
        }
        Format::Text => {
            for (m, n, deg) in &results {
                println!(
                    "minimal n with degree >= {} in {} mode: n = {n}, degree = {}",
                    rat_str(&target),
                    m.label(),
                    rat_str(deg)
                );
            }
        }
    }
    Ok(0)
}

fn run_curve(which: CurveCmd, format: Format) -> Result<i32> {
    let payload = match which {
        CurveCmd::Tate { p } => {
            let genus = curves::tate_genus(p)?;
            json!({
                "curve": "tate",
                "p": p,
                "genus": genus,
                "canonical_degree": 2 * genus as i64 - 2,
            })
        }
        CurveCmd::Raynaud { p, e } => {
            let (dz, genus) = curves::raynaud_canonical(p, e)?;
            let bound = curves::kernel_dim_lower_bound(p, e)?;
            json!({
                "curve": "raynaud",
                "p": p,
                "e": e,
                "dz": dz.mult,
                "genus": genus,
                "h1": bound.h1,
                "d_mult": bound.divisor.mult,
                "d_ample": bound.d_ample,
                "meets_bound": bound.meets_paper_bound,
                "place": "infinity",
            })
        }
        CurveCmd::Rr { genus, deg } => {
            let (h0, h1) = curves::riemann_roch(genus, deg)?;
            json!({
                "curve": "rr",
                "genus": genus,
                "deg": deg,
                "h0": h0,
                "h1": h1,
            })
        }
    };
    match format {
        Format::Json => println!("{payload}"),
        Format::Text => {
            let obj = payload.as_object().expect("curve payloads are objects");
            let mut parts: Vec<String> = Vec::new();
            for (k, v) in obj {
                if k == "curve" {
                    continue;
                }
                parts.push(format!("{k} = {}", v.to_string().trim_matches('"')));
            }
            println!(
                "{}: {}",
                obj["curve"].as_str().unwrap_or("curve"),
                parts.join(", ")
            );
        }
    }
    Ok(0)
}

fn run_eval(
    surface: &str,
    ks2: Option<i64>,
    expr_src: &str,
    c1: &str,
    c2: &str,
    mode: ModeArg,
    format: Format,
) -> Result<i32> {
    let model = presets::resolve_surface(surface, ks2, None)?;
    let bundle = report::bundle_from_flags(&model, c1, c2)?;
    let expr = fanoforge_core::expr::parse_class(expr_src, &model)?;
    let mut results = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    for m in mode.list() {
        let out = fanoforge_core::expr::eval_class(&expr, &model, &bundle, m)?;
        for w in &out.warnings {
            if !warnings.contains(w) {
                warnings.push(w.clone());
            }
        }
        results.push((m, out));
    }
    match format {
        Format::Json => {
            let entries: Vec<_> = results
                .iter()
                .map(|(m, out)| {
                    json!({
                        "mode": m.label(),
                        "normal_form": out.normal.display_with(&model),
                        "degree": rat_str(&out.degree),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "expr": expr_src,
                    "surface": model.name(),
                    "results": entries,
                    "warnings": warnings,
                })
            );
        }
        Format::Text => {
            println!("expression: {expr_src}");
            for (m, out) in &results {
                println!(
                    "  {:<13} normal form = {} ; degree = {}",
                    format!("{}:", m.label()),
                    out.normal.display_with(&model),
                    rat_str(&out.degree)
                );
            }
            for w in &warnings {
                println!("  warning: {w}");
            }
        }
    }
    Ok(0)
}
