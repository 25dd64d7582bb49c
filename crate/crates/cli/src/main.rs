//! `mahler`: Mahler measures of two-variable polynomials from the command
//! line.

mod config;
mod suite;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mahler::curve::{is_admissible, parametrize_deg2, toric_points, RationalFunction};
use mahler::error::Error;
use mahler::evaluate::{predict_basis, theorem2_with, Theorem2Options};
use mahler::measure::{mahler_jensen1d, mahler_quad2d, MeasureEstimate};
use mahler::paths::{extract_S, pullback, trace_sections, winding};
use mahler::polyio::{is_tempered, newton_polygon, parse_poly, BiPoly};
use mahler::relations::{verify_identity, BasisElement, IdentityConfig};
use mahler::scalar::ExtComplex;
use mahler::zeta::{borel_term, zeta_f2, FieldDescriptor};
use serde_json::{json, Value};

use config::{Format, RunConfig, CONFIG_ENV};

#[derive(Parser, Debug)]
#[command(name = "mahler", version, about = "Mahler measures of two-variable polynomials")]
struct Cli {
    /// JSON config file; keys missing from it take their defaults.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Jensen1d,
    Quad2d,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// m(P) with an error bound.
    Measure {
        poly: String,
        #[arg(long, value_enum, default_value = "jensen1d")]
        method: Method,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Bloch-Wigner dilogarithm D(re + i·im).
    Dilog {
        #[arg(allow_negative_numbers = true)]
        re: f64,
        #[arg(allow_negative_numbers = true)]
        im: f64,
    },
    /// ζ_F(2) and the Borel term for F = Q(√-d).
    ZetaQuad { d: u64 },
    /// Newton polygon, edge polynomials and temperedness.
    Newton { poly: String },
    /// Points of the curve with |x| = |y| = 1.
    Toric { poly: String },
    /// Rational parametrization of a conic, in the exchange format.
    Parametrize { poly: String },
    /// Temperedness, commensurability and singular-point checks.
    Admissible { poly: String },
    /// Arcs of S, their lifts and the winding table.
    Paths {
        poly: String,
        /// JSON file {"f": …, "g": …}; conics are parametrized automatically.
        #[arg(long)]
        param: Option<PathBuf>,
        /// Writes `sheet,phi,re,im` rows for every tracked root.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// m(P) term by term from a parametrization.
    Evaluate {
        poly: String,
        #[arg(long)]
        param: Option<PathBuf>,
        /// Skip the comparison against quadrature.
        #[arg(long)]
        no_check: bool,
    },
    /// Searches for π·m(P) as a rational combination of basis constants.
    Identity {
        poly: String,
        /// `auto`, or a comma-separated list such as `D(omega),D(i),borel(2)`.
        #[arg(long, default_value = "auto")]
        basis: String,
        #[arg(long)]
        max_coeff: Option<i64>,
    },
    /// Pass/fail table over the worked examples.
    PaperSuite {
        /// Restricts the table to the named rows.
        #[arg(long)]
        only: Vec<String>,
    },
}

enum Failure {
    Usage(String),
    Numeric(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::Format(_)
            | Error::NonInteger(_)
            | Error::ZeroPolynomial
            | Error::Invalid(_)
            | Error::NotFundamental(_)
            | Error::UnsupportedField(_)
            | Error::Reducible(_) => Failure::Usage(e.to_string()),
            Error::Inconsistent { .. } | Error::GaloisMismatch(_) => Failure::Inconsistent(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn ext(z: ExtComplex<f64>) -> Value {
    match z {
        ExtComplex::Finite(z) => json!([z.re, z.im]),
        ExtComplex::Infinity => json!("inf"),
    }
}

fn ext_text(z: ExtComplex<f64>) -> String {
    match z {
        ExtComplex::Finite(z) => format!("{:.10} {:+.10}i", z.re, z.im),
        ExtComplex::Infinity => "inf".into(),
    }
}

fn poly(text: &str) -> Result<BiPoly, Failure> {
    Ok(parse_poly(text)?)
}

fn load_param(path: &Option<PathBuf>, p: &BiPoly) -> Result<(RationalFunction, RationalFunction), Failure> {
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let part = |k: &str| v.get(k).ok_or_else(|| Failure::Usage(format!("{}: missing `{k}`", path.display())));
            Ok((RationalFunction::from_json(part("f")?)?, RationalFunction::from_json(part("g")?)?))
        }
        None if p.total_degree() == 2 => {
            let (f, g, _) = parametrize_deg2(p)?;
            Ok((f, g))
        }
        None => Err(Failure::Usage("--param is required unless P is a conic".into())),
    }
}

fn estimate_text(m: &MeasureEstimate) -> String {
    format!("{:.10} ± {:.3e}", m.value, m.error_bound)
}

fn measure(cfg: &RunConfig, text: &str, method: Method, tol: Option<f64>) -> Outcome {
    let p = poly(text)?;
    let m = match method {
        Method::Jensen1d => {
            let mut q = cfg.quad();
            if let Some(t) = tol {
                if !(t > 0.0) {
                    return Err(Failure::Usage(format!("--tol must be positive, got {t}")));
                }
                q.tol = t;
            }
            mahler_jensen1d(&p, &q)?
        }
        Method::Quad2d => mahler_quad2d(&p, cfg.quad2d_grid),
    };
    Ok((json!(m), estimate_text(&m)))
}

fn dilog(re: f64, im: f64) -> Outcome {
    let v = mahler::dilog::bw_dilog(ExtComplex::finite(re, im));
    Ok((json!({"z": [re, im], "D": v}), format!("{v:.12}")))
}

fn zeta_quad(d: u64) -> Outcome {
    let field = FieldDescriptor::imaginary_quadratic(d)?;
    let (z, b) = (zeta_f2(&field)?, borel_term(&field)?);
    Ok((
        json!({"field": field.label(), "discriminant": field.discriminant, "zeta_f2": z, "borel_term": b}),
        format!("zeta_F(2) = {z:.12}\nborel_term = {b:.12}"),
    ))
}

fn newton(text: &str) -> Outcome {
    let p = poly(text)?;
    let np = newton_polygon(&p);
    let t = is_tempered(&p);
    let mut plain = format!("vertices {:?}\n", np.vertices);
    for v in &t.edges {
        plain += &format!(
            "edge {:?} -> {:?}: {} ({})\n",
            v.edge.start,
            v.edge.end,
            v.edge.edge_poly,
            if v.cyclotomic { "cyclotomic" } else { "not cyclotomic" }
        );
    }
    plain += &format!("tempered: {}", t.tempered);
    Ok((json!({"polygon": np, "tempered": t}), plain))
}

fn toric(text: &str) -> Outcome {
    let p = poly(text)?;
    let pts = toric_points(&p)?;
    let plain = pts
        .iter()
        .map(|t| {
            format!(
                "({:.10} {:+.10}i, {:.10} {:+.10}i){}{}",
                t.mu.re,
                t.mu.im,
                t.nu.re,
                t.nu.im,
                if t.singular { " singular" } else { "" },
                t.field.as_ref().map(|f| format!(" field {}", f.label())).unwrap_or_default()
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok((json!(pts), plain))
}

fn parametrize(text: &str) -> Outcome {
    let p = poly(text)?;
    let (f, g, data) = parametrize_deg2(&p)?;
    let plain = format!("f = {}\ng = {}", f.to_json(), g.to_json());
    Ok((json!({"f": f.to_json(), "g": g.to_json(), "conic": data}), plain))
}

fn admissible(text: &str) -> Outcome {
    let r = is_admissible(&poly(text)?)?;
    let plain = format!(
        "tempered: {}\nadmissible: {}\n{} toric points, {} singular",
        r.tempered,
        r.admissible,
        r.points.len(),
        r.points.iter().filter(|p| p.singular).count()
    );
    Ok((json!(r), plain))
}

fn paths(cfg: &RunConfig, text: &str, param: &Option<PathBuf>, plot: &Option<PathBuf>) -> Outcome {
    let p = poly(text)?.strip_monomial();
    let toric = toric_points(&p)?;
    let sheets = trace_sections(&p, cfg.path_grid)?;
    if let Some(path) = plot {
        let io = |e: std::io::Error| Failure::Usage(format!("{}: {e}", path.display()));
        let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        writeln!(out, "sheet,phi,re,im").map_err(io)?;
        for (k, s) in sheets.iter().enumerate() {
            for (phi, y) in s.phi.iter().zip(&s.y) {
                if let Some(y) = y.as_finite() {
                    writeln!(out, "{k},{phi:.12},{:.12},{:.12}", y.re, y.im).map_err(io)?;
                }
            }
        }
        out.flush().map_err(io)?;
    }
    let arcs = extract_S(&sheets, &p, &toric)?;
    let arc_json: Vec<Value> = arcs
        .iter()
        .map(|a| {
            json!({
                "sheet": a.sheet,
                "closed": a.closed,
                "phi": [a.phi[0], a.phi[a.phi.len() - 1]],
                "start": a.start,
                "end": a.end,
                "nodes": a.phi.len(),
            })
        })
        .collect();
    let mut plain = format!("{} toric points, {} sheets, {} arcs", toric.len(), sheets.len(), arcs.len());
    let mut out = json!({"toric": toric, "arcs": arc_json});

    let (f, g) = match load_param(param, &p) {
        Ok(fg) => fg,
        Err(Failure::Usage(_)) if param.is_none() => return Ok((out, plain)),
        Err(e) => return Err(e),
    };
    let mut segs = Vec::new();
    let mut table = Vec::new();
    for (j, a) in arcs.iter().enumerate() {
        let seg = pullback(a, &f, &g, &toric)?;
        for (kind, h) in [("alpha", &f), ("beta", &g)] {
            for (idx, z) in h.factors.iter().enumerate() {
                let w = winding(&seg, z.root)?;
                table.push(json!({"j": j + 1, "kind": kind, "index": idx + 1, "point": [z.root.re, z.root.im], "winding": w}));
                plain += &format!("\nwind(gamma_{}, {} {:.10} {:+.10}i) = {:.10}", j + 1, kind, z.root.re, z.root.im, w);
            }
        }
        plain = format!("{plain}\ngamma_{}: u = {}, v = {}{}", j + 1, ext_text(seg.u), ext_text(seg.v), if seg.closed { " (closed)" } else { "" });
        segs.push(json!({
            "j": j + 1,
            "u": ext(seg.u),
            "v": ext(seg.v),
            "closed": seg.closed,
            "toric_start": seg.toric_start,
            "toric_end": seg.toric_end,
            "samples": seg.samples.len(),
        }));
    }
    out["segments"] = json!(segs);
    out["windings"] = json!(table);
    Ok((out, plain))
}

fn evaluate(cfg: &RunConfig, text: &str, param: &Option<PathBuf>, no_check: bool) -> Outcome {
    let p = poly(text)?;
    let (f, g) = load_param(param, &p)?;
    let opts = Theorem2Options { check: !no_check, grid: cfg.path_grid };
    let b = theorem2_with(&p, &f, &g, &opts)?;
    let plain = match b.quadrature {
        Some(q) => format!("{:.10} ± {:.3e} (quadrature {:.10})", b.total, (b.total - q).abs(), q),
        None => format!("{:.10} (unchecked)", b.total),
    };
    Ok((json!(b), plain))
}

fn identity(cfg: &RunConfig, text: &str, basis: &str, max_coeff: Option<i64>) -> Outcome {
    let p = poly(text)?;
    let basis: Vec<BasisElement> = if basis.trim() == "auto" {
        predict_basis(&p)?
    } else {
        basis.split(',').map(BasisElement::parse).collect::<Result<_, _>>()?
    };
    let icfg = IdentityConfig {
        max_coeff: max_coeff.unwrap_or(cfg.max_coeff),
        digits: cfg.digits,
        measure_tol: cfg.measure_tol,
    };
    if icfg.max_coeff < 1 {
        return Err(Failure::Usage("--max-coeff must be positive".into()));
    }
    let v = verify_identity(&p, &basis, &icfg)?;
    let plain = match v.residual {
        Some(r) => format!("{} (residual {r:.3e}; m = {:.10} ± {:.3e})", v.text, v.measure, v.measure_error),
        None => format!("{} (m = {:.10} ± {:.3e})", v.text, v.measure, v.measure_error),
    };
    Ok((json!(v), plain))
}

fn paper_suite(cfg: &RunConfig, only: &[String]) -> Outcome {
    if let Some(bad) = only.iter().find(|o| !suite::ROWS.iter().any(|(n, _)| n == o)) {
        let names: Vec<&str> = suite::ROWS.iter().map(|(n, _)| *n).collect();
        return Err(Failure::Usage(format!("unknown row `{bad}`; rows are {}", names.join(", "))));
    }
    let rows = suite::run(cfg, only);
    let plain = rows
        .iter()
        .map(|r| format!("{} {:<22} {:.3e}  {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.error, r.detail))
        .collect::<Vec<_>>()
        .join("\n");
    let failed = rows.iter().filter(|r| !r.pass).count();
    let out = json!({"rows": rows, "failed": failed});
    if failed > 0 {
        // the table is still printed before exiting with a numeric failure
        emit(cfg.format, &(out, plain));
        return Err(Failure::Numeric(format!("{failed} of {} rows failed", rows.len())));
    }
    Ok((out, plain))
}

fn emit(format: Format, (v, plain): &(Value, String)) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize")),
        Format::Plain => println!("{plain}"),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let out = match &cli.command {
        Command::Measure { poly, method, tol } => measure(&cfg, poly, *method, *tol),
        Command::Dilog { re, im } => dilog(*re, *im),
        Command::ZetaQuad { d } => zeta_quad(*d),
        Command::Newton { poly } => newton(poly),
        Command::Toric { poly } => toric(poly),
        Command::Parametrize { poly } => parametrize(poly),
        Command::Admissible { poly } => admissible(poly),
        Command::Paths { poly, param, plot_data } => paths(&cfg, poly, param, plot_data),
        Command::Evaluate { poly, param, no_check } => evaluate(&cfg, poly, param, *no_check),
        Command::Identity { poly, basis, max_coeff } => identity(&cfg, poly, basis, *max_coeff),
        Command::PaperSuite { only } => paper_suite(&cfg, only),
    }?;
    emit(cfg.format, &out);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric failure: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Inconsistent(m)) => {
            eprintln!("inconsistent: {m}");
            ExitCode::from(4)
        }
    }
}
