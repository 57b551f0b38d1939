//! Command-line front end: star catalogs, certification, homology tables,
//! Cerf-diagram SVGs, and the verification report.
//!
//! Exit codes are a stable contract: 0 success, 1 verification failure,
//! 2 usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::config::{Tolerances, DEFAULT_SEED};
use crate::criticality::{
    certify_critical, enumerate_critical, CriticalReport, StarKind, StarSpec,
};
use crate::error::Error;
use crate::geometry::{CerfPoint, Functional};
use crate::report::{range_notes, run_report, RangeNote};
use crate::stratification::{cerf_diagram, classify, RegionLabel};
use crate::svg::{render_cerf_svg, SvgOptions};
use crate::topology::{ab_descriptors, homology_closed_form, mv_solve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
}

/// Resolved invocation: target n, tolerances after config-file and flag
/// overrides, seed, and output routing.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

#[derive(Parser)]
#[command(
    name = "polydual",
    version,
    about = "Critical polygons, Cerf diagrams, and homology of planar n-gon spaces"
)]
struct Cli {
    /// Optional key=value file overriding tolerance defaults
    /// (keys: edge_tol, crit_tol, eig_tol, curve_tol)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the critical classes of an n-gon at unit perimeter
    Stars {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify one critical class on both sides of the duality
    Certify {
        #[arg(long)]
        n: usize,
        /// Winding number of the star (mutually exclusive with --fold)
        #[arg(long, allow_hyphen_values = true)]
        w: Option<i32>,
        /// Select the complete fold (even n only)
        #[arg(long)]
        fold: bool,
        /// Criticality tolerance (relative residual threshold)
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homology of one fiber: closed form against the Mayer-Vietoris solver
    Homology {
        #[arg(long)]
        n: usize,
        /// Region label: W<odd>, D<even>, or "fold"
        #[arg(long)]
        region: Option<String>,
        /// Perimeter of a query point (with --area)
        #[arg(long)]
        pi: Option<f64>,
        /// Area of a query point (with --pi)
        #[arg(long, allow_hyphen_values = true)]
        area: Option<f64>,
        /// Curve-membership tolerance for classification
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the discriminant curves and chambers as an SVG
    Cerf {
        #[arg(long)]
        n: usize,
        /// Output SVG path; without it the JSON diagram model is printed
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        pi_min: f64,
        #[arg(long, default_value_t = 2.0)]
        pi_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verification bundle for one n
    Report {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Criticality tolerance (relative residual threshold)
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point used by both `main` and the integration tests. Writes
/// command output to `out`, errors to stderr, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };

    let mut tolerances = Tolerances::default();
    if let Some(path) = &cli.config {
        let body = match fs::read_to_string(path) {
            Ok(b) => b,
            Err(e) => return usage_error(&format!("cannot read config {}: {e}", path.display())),
        };
        if let Err(e) = tolerances.apply_key_values(&body) {
            return usage_error(&format!("config {}: {e}", path.display()));
        }
    }

    match dispatch(cli.command, tolerances, out) {
        Ok(code) => code,
        Err(e) => match e {
            Error::InvalidSpec(_) | Error::InvalidLabel { .. } | Error::Parse(_) | Error::OddN(_) => {
                usage_error(&e.to_string())
            }
            other => {
                eprintln!("error: {other}");
                EXIT_VERIFICATION
            }
        },
    }
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn require_n(n: usize) -> crate::Result<()> {
    if n < 3 {
        return Err(Error::InvalidSpec(format!("need n >= 3, got {n}")));
    }
    Ok(())
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, body),
        None => out.write_all(body.as_bytes()),
    }
}

fn dispatch(
    command: Command,
    mut tolerances: Tolerances,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    match command {
        Command::Stars { n, format, out: path } => {
            require_n(n)?;
            let cfg = RunConfig {
                n,
                tolerances,
                seed: DEFAULT_SEED,
                output_format: format,
                output_path: path,
            };
            let body = stars_body(&cfg)?;
            emit(out, &cfg.output_path, &body).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Certify {
            n,
            w,
            fold,
            tol,
            format,
            out: path,
        } => {
            require_n(n)?;
            if let Some(t) = tol {
                tolerances.set("crit_tol", &t.to_string())?;
            }
            let kind = match (w, fold) {
                (Some(w), false) => StarKind::Winding(w),
                (None, true) => StarKind::CompleteFold,
                _ => {
                    return Err(Error::InvalidSpec(
                        "pass exactly one of --w <winding> or --fold".into(),
                    ))
                }
            };
            let cfg = RunConfig {
                n,
                tolerances,
                seed: DEFAULT_SEED,
                output_format: format,
                output_path: path,
            };
            let (body, ok) = certify_body(&cfg, kind)?;
            emit(out, &cfg.output_path, &body).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFICATION })
        }
        Command::Homology {
            n,
            region,
            pi,
            area,
            tol,
            format,
            out: path,
        } => {
            require_n(n)?;
            if let Some(t) = tol {
                tolerances.set("curve_tol", &t.to_string())?;
            }
            let label = match (region, pi, area) {
                (Some(r), None, None) => RegionLabel::parse(&r, n)?,
                (None, Some(pi), Some(area)) => {
                    classify(n, &CerfPoint::new(pi, area)?, tolerances.curve_tol)?
                }
                _ => {
                    return Err(Error::InvalidSpec(
                        "pass either --region LABEL or both --pi and --area".into(),
                    ))
                }
            };
            if label == RegionLabel::Outside {
                eprintln!("error: {}", Error::OutsideRegion);
                return Ok(EXIT_VERIFICATION);
            }
            let cfg = RunConfig {
                n,
                tolerances,
                seed: DEFAULT_SEED,
                output_format: format,
                output_path: path,
            };
            let (body, agree) = homology_body(&cfg, &label)?;
            emit(out, &cfg.output_path, &body).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(if agree { EXIT_OK } else { EXIT_VERIFICATION })
        }
        Command::Cerf {
            n,
            svg,
            pi_min,
            pi_max,
            out: path,
        } => {
            require_n(n)?;
            let diagram = cerf_diagram(n, (pi_min, pi_max))?;
            match svg {
                Some(svg_path) => {
                    let body = render_cerf_svg(&diagram, &SvgOptions::default());
                    fs::write(&svg_path, &body).map_err(|e| {
                        Error::Parse(format!("cannot write {}: {e}", svg_path.display()))
                    })?;
                    writeln!(out, "wrote {}", svg_path.display())
                        .map_err(|e| Error::Parse(e.to_string()))?;
                }
                None => {
                    let body = serde_json::to_string_pretty(&diagram)
                        .map_err(|e| Error::Parse(e.to_string()))?;
                    emit(out, &path, &format!("{body}\n"))
                        .map_err(|e| Error::Parse(e.to_string()))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Report {
            n,
            seed,
            tol,
            out: path,
        } => {
            require_n(n)?;
            if let Some(t) = tol {
                tolerances.set("crit_tol", &t.to_string())?;
            }
            let cfg = RunConfig {
                n,
                tolerances,
                seed: seed.unwrap_or(DEFAULT_SEED),
                output_format: Format::Json,
                output_path: path,
            };
            let bundle = run_report(cfg.n, &cfg.tolerances, cfg.seed)?;
            let body = serde_json::to_string_pretty(&bundle)
                .map_err(|e| Error::Parse(e.to_string()))?;
            emit(out, &cfg.output_path, &format!("{body}\n"))
                .map_err(|e| Error::Parse(e.to_string()))?;
            Ok(if bundle.pass {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            })
        }
    }
}

#[derive(Serialize)]
struct StarRow {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<i32>,
    index: usize,
    c: f64,
    perimeter: f64,
    area: f64,
}

fn stars_body(cfg: &RunConfig) -> crate::Result<String> {
    let n = cfg.n;
    let rows: Vec<StarRow> = enumerate_critical(n, 1.0)?
        .into_iter()
        .map(|e| StarRow {
            kind: e.spec.kind.label(),
            w: match e.spec.kind {
                StarKind::Winding(w) => Some(w),
                StarKind::CompleteFold => None,
            },
            index: e.predicted_index,
            c: e.phi.ratio(),
            perimeter: e.phi.perimeter,
            area: e.phi.area,
        })
        .collect();
    Ok(match cfg.output_format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Csv => {
            let mut body = String::from("kind,w,index,c,perimeter,area\n");
            for r in &rows {
                body.push_str(&format!(
                    "{},{},{},{:.12e},{},{:.12e}\n",
                    r.kind,
                    r.w.map_or(String::new(), |w| w.to_string()),
                    r.index,
                    r.c,
                    r.perimeter,
                    r.area
                ));
            }
            body
        }
        Format::Table => {
            let mut body = format!("critical classes for n = {n} at unit perimeter\n");
            body.push_str(&format!(
                "{:<6} {:>3} {:>6} {:>14} {:>10} {:>14}\n",
                "kind", "w", "index", "c", "perimeter", "area"
            ));
            for r in &rows {
                body.push_str(&format!(
                    "{:<6} {:>3} {:>6} {:>14.6e} {:>10} {:>14.6e}\n",
                    r.kind,
                    r.w.map_or("-".to_string(), |w| w.to_string()),
                    r.index,
                    r.c,
                    r.perimeter,
                    r.area
                ));
            }
            body
        }
    })
}

fn render_report_text(tag: &str, report: &CriticalReport) -> String {
    format!(
        "{tag}\n  residual        {:.3e}\n  multiplier      {:.6}\n  morse index     {}\n  \
         nullity         {}\n  coindex         {}\n  working dim     {}\n  certified       {}\n",
        report.residual,
        report.multiplier,
        report.morse_index,
        report.nullity,
        report.coindex,
        report.working_dimension,
        if report.certified_morse() { "yes (Morse)" } else { "NO" }
    )
}

fn certify_body(cfg: &RunConfig, kind: StarKind) -> crate::Result<(String, bool)> {
    let n = cfg.n;
    let spec = StarSpec::new(n, kind, 1.0)?;
    let star = crate::criticality::make_star(&spec);
    let on_perimeter =
        certify_critical(&star, Functional::Area, Functional::Perimeter, &cfg.tolerances)?;

    // the fold has zero area: the dual problem has no level set through it
    let on_area = match kind {
        StarKind::Winding(_) => Some(certify_critical(
            &star,
            Functional::Perimeter,
            Functional::Area,
            &cfg.tolerances,
        )?),
        StarKind::CompleteFold => None,
    };

    let identity = on_area.as_ref().map(|dual| {
        let (m, m_cap) = (dual.morse_index, on_perimeter.morse_index);
        let holds = match kind {
            StarKind::Winding(w) if w > 0 => m + m_cap == 2 * n - 4,
            StarKind::Winding(_) => m == m_cap,
            StarKind::CompleteFold => unreachable!(),
        };
        (m, m_cap, holds)
    });

    let ok = on_perimeter.certified_morse()
        && on_area.as_ref().is_none_or(|r| r.certified_morse())
        && identity.is_none_or(|(_, _, holds)| holds);

    let body = match cfg.output_format {
        Format::Json => {
            let payload = json!({
                "n": n,
                "class": kind.label(),
                "fixed_perimeter": on_perimeter,
                "fixed_area": on_area,
                "identity": identity.map(|(m, m_cap, holds)| json!({
                    "m": m,
                    "M": m_cap,
                    "relation": if matches!(kind, StarKind::Winding(w) if w > 0) {
                        "m + M = 2n - 4"
                    } else {
                        "m = M"
                    },
                    "holds": holds,
                })),
                "pass": ok,
            });
            format!("{}\n", serde_json::to_string_pretty(&payload).unwrap())
        }
        Format::Csv => {
            let mut body = String::from("side,residual,multiplier,index,nullity,coindex,dim\n");
            for (side, r) in [("fixed_perimeter", Some(&on_perimeter)), ("fixed_area", on_area.as_ref())]
            {
                if let Some(r) = r {
                    body.push_str(&format!(
                        "{side},{:e},{:e},{},{},{},{}\n",
                        r.residual, r.multiplier, r.morse_index, r.nullity, r.coindex,
                        r.working_dimension
                    ));
                }
            }
            body
        }
        Format::Table => {
            let mut body = format!("certification of {} for n = {n}\n\n", kind.label());
            body.push_str(&render_report_text("area on fixed perimeter:", &on_perimeter));
            if let Some(dual) = &on_area {
                body.push('\n');
                body.push_str(&render_report_text("perimeter on fixed area:", dual));
            }
            match identity {
                Some((m, m_cap, holds)) => {
                    let relation = if matches!(kind, StarKind::Winding(w) if w > 0) {
                        format!("m + M = {} + {} = {} (2n - 4 = {})", m, m_cap, m + m_cap, 2 * n - 4)
                    } else {
                        format!("m = {m}, M = {m_cap}")
                    };
                    body.push_str(&format!(
                        "\nduality identity: {relation} -> {}\n",
                        if holds { "holds" } else { "VIOLATED" }
                    ));
                }
                None => body.push_str("\nduality identity: not applicable (zero area)\n"),
            }
            body
        }
    };
    Ok((body, ok))
}

/// Notes that apply to one homology query, drawn from the permanent pair.
fn notes_for_label(n: usize, label: &RegionLabel) -> crate::Result<Vec<RangeNote>> {
    let all = range_notes()?;
    let reduced = match *label {
        RegionLabel::Curve(i) if i > n - 2 => RegionLabel::Curve(2 * n - 4 - i),
        RegionLabel::Chamber(i) if i > n - 2 => RegionLabel::Chamber(2 * n - 4 - i),
        other => other,
    };
    let mut notes = Vec::new();
    if let RegionLabel::Curve(i) = reduced {
        if i > 0 && i < n - 2 {
            notes.push(all[0].clone());
        }
    }
    if n % 2 == 1 && reduced == RegionLabel::Chamber(n - 2) {
        notes.push(all[1].clone());
    }
    Ok(notes)
}

fn homology_body(cfg: &RunConfig, label: &RegionLabel) -> crate::Result<(String, bool)> {
    let n = cfg.n;
    let closed = homology_closed_form(n, label)?;
    let (a, b, u) = ab_descriptors(n, label)?;
    let mv = mv_solve(&a, &b, &u)?;
    let agree = closed == mv;
    let notes = notes_for_label(n, label)?;

    let body = match cfg.output_format {
        Format::Json => {
            let payload = json!({
                "n": n,
                "label": label.label(),
                "closed_form": closed,
                "mayer_vietoris": mv,
                "agree": agree,
                "notes": notes,
            });
            format!("{}\n", serde_json::to_string_pretty(&payload).unwrap())
        }
        Format::Csv => {
            let top = closed.top_degree.max(mv.top_degree);
            let mut body = String::from("j,closed_form,mayer_vietoris\n");
            for j in 0..=top {
                body.push_str(&format!("{j},{},{}\n", closed.rank(j), mv.rank(j)));
            }
            body.push_str(&format!("agree,{agree},\n"));
            body
        }
        Format::Table => {
            let mut body = format!(
                "homology of the fiber over {} for n = {n} (fiber dimension {})\n\n",
                label.label(),
                2 * n - 5
            );
            body.push_str("closed form:\n");
            body.push_str(&indent(&closed.to_text()));
            body.push_str("\nmayer-vietoris:\n");
            body.push_str(&indent(&mv.to_text()));
            body.push_str(&format!(
                "\nverdict: {}\n",
                if agree { "AGREE" } else { "DISAGREE" }
            ));
            for note in &notes {
                body.push_str(&format!(
                    "note [{}]: using {}; the alternative ({}) fails the {} oracle.\n      {}\n",
                    note.id, note.used, note.alternative, note.oracle, note.oracle_example
                ));
            }
            body
        }
    };
    Ok((body, agree))
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|l| format!("  {l}\n"))
        .collect::<String>()
}

/// Helper for tests: run and capture stdout as a string.
pub fn run_capture<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut buffer = Vec::new();
    let code = run(args, &mut buffer);
    (code, String::from_utf8(buffer).expect("output is utf-8"))
}
