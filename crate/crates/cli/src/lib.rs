//! Argument parsing and dispatch for the `singcalc`, `tpcalc` and `germlab`
//! binaries.
//!
//! Exit codes: 0 when every asserted identity holds, 1 when one fails, 2 on
//! usage errors (bad flags, out-of-range parameters, unsupported cases).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use singcalc::bundle_calc::{apply_regime, total_sw, BundleExpr, Regime};
use singcalc::conventions::{Conventions, Fault};
use singcalc::germ_lab::scalar::{parse_q_list, Q};
use singcalc::germ_lab::{
    corank, fd_deviation, jacobian_ad, jacobian_fd, jacobian_tilde_f, scan_sigma2, show_vec, sigma_closed,
    sigma_oracle, stratify_grid, transversality_check, Germ, GermMap, GermPoint, QMatrix,
};
use singcalc::gysin_calc::verify_lemma_nu1;
use singcalc::report::{Report, Status};
use singcalc::suite::run_suite;
use singcalc::thom_poly::{
    gtp, morin_tp, morin_tp_integral, verify_cusp_coincidence, verify_morin_derivation, verify_prim_coincidence,
    verify_twisted_coincidence, KERNEL_LINE,
};
use singcalc::Error;

pub const MAX_DEG_ENV: &str = "SINGCALC_MAX_DEG";

#[derive(Parser, Debug)]
#[command(name = "singcalc", version, about = "Thom polynomial calculus and cusp germ laboratory")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Thom polynomials and characteristic-class identities.
    #[command(subcommand)]
    Tpcalc(TpCommand),
    /// Exact computations on the cusp normal form and its perturbation.
    #[command(subcommand)]
    Germlab(GermCommand),
    /// Run the full acceptance matrix.
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct MaxDeg {
    /// Truncation degree (default 4(k+1), or the env var SINGCALC_MAX_DEG).
    #[arg(long = "max-deg")]
    pub max_deg: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum TpCommand {
    /// Giambelli-Thom-Porteous polynomial of Sigma^r(l).
    Gtp {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        deg: MaxDeg,
    },
    /// Thom polynomial of the Morin locus Sigma^(1_r)(k).
    Morin {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        /// Integral (oriented) version; needs k odd and r even.
        #[arg(long)]
        integral: bool,
        #[command(flatten)]
        deg: MaxDeg,
    },
    /// Total Stiefel-Whitney class of a bundle expression such as
    /// "nu_f + line(ell)" or "F - TM".
    Sw {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
        #[command(flatten)]
        deg: MaxDeg,
    },
    /// Verify one of the coincidence theorems or lemmas.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum RegimeArg {
    Prim,
    Twisted,
    MorinNu1,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Tp(Sigma^2(k-1)) = Tp(Sigma^(1_2)(k)).
    #[command(alias = "cusp-coincidence")]
    Cusp {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        deg: MaxDeg,
    },
    /// Both Thom polynomials equal w_(k+1)^r for prim maps.
    #[command(alias = "prim-coincidence")]
    Prim {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        deg: MaxDeg,
    },
    /// Doubled integral coincidence for twisted prim maps.
    #[command(alias = "twisted-coincidence")]
    Twisted {
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        deg: MaxDeg,
    },
    /// Recompute the Morin Thom polynomial by pushing forward along the
    /// singular set.
    MorinDerivation {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        deg: MaxDeg,
    },
    /// q_!(a^r w_(n+k)(gamma (x) F)) = w_(k+r+1)(F - TM).
    LemmaPushforward {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        deg: MaxDeg,
    },
}

#[derive(Subcommand, Debug)]
pub enum GermCommand {
    /// Coranks of df (and df~ when --t-grid is given) over a product grid.
    Stratify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated fractions, e.g. "-1,0,1".
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long = "t-grid", allow_hyphen_values = true)]
        t_grid: Option<String>,
    },
    /// The section sigma at a point, checked against the Gram-Schmidt
    /// construction when the point is singular.
    Sigma {
        /// Source coordinates x1,...,x2k,y,z,s1,... as fractions.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// The Jacobian of f~ at (point, t), checked against forward-mode
    /// differentiation.
    Jacobian {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Also compare with central finite differences (relative 1e-6).
        #[arg(long = "check-fd")]
        check_fd: bool,
    },
    /// Transversality of df~ to the corank-2 stratum at a corank-2 point.
    Transversality {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Locate the corank-2 points of df~ on a grid.
    ScanSigma2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Values of t (defaults to --grid).
        #[arg(long = "t-grid", allow_hyphen_values = true)]
        t_grid: Option<String>,
        /// Write the full scan as JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Run under a broken convention: flip-gtp, drop-w0 or omit-t-column.
    #[arg(long = "inject-fault")]
    pub inject_fault: Option<String>,
}

/// What a run prints and how it exits.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.into()),
        }
    }
}

fn usage_err(flag: &str, e: impl std::fmt::Display) -> Outcome {
    Outcome::usage(format!("{flag}: {e}"))
}

/// Parses `args` (program name first) and runs the command.
/// Top-level parser for the standalone `tpcalc` binary.
#[derive(Parser, Debug)]
#[command(name = "tpcalc", version, about = "Thom polynomials and characteristic-class identities")]
pub struct TpCli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: TpCommand,
}

/// Top-level parser for the standalone `germlab` binary.
#[derive(Parser, Debug)]
#[command(name = "germlab", version, about = "Exact computations on the cusp normal form and its perturbation")]
pub struct GermCli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: GermCommand,
}

fn parse_then<P, I, T>(args: I, go: impl FnOnce(P) -> Outcome) -> Outcome
where
    P: Parser,
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match P::try_parse_from(args) {
        Ok(cli) => go(cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_then(args, |cli: Cli| dispatch(&cli))
}

pub fn run_tpcalc<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_then(args, |cli: TpCli| finish(tpcalc(&cli.command), cli.json))
}

pub fn run_germlab<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_then(args, |cli: GermCli| finish(germlab(&cli.command), cli.json))
}

fn finish(result: Result<Report, Outcome>, json: bool) -> Outcome {
    match result {
        Ok(report) => emit(&report, json),
        Err(outcome) => outcome,
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Tpcalc(cmd) => tpcalc(cmd),
        Command::Germlab(cmd) => germlab(cmd),
        Command::Suite(args) => return suite(args, cli.json),
    };
    finish(result, cli.json)
}

fn emit(report: &Report, json: bool) -> Outcome {
    let code = match report.status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Unsupported => 2,
    };
    Outcome {
        code,
        stdout: if json {
            report.to_json() + "\n"
        } else {
            report.render_text()
        },
        stderr: String::new(),
    }
}

fn core_err(e: Error) -> Outcome {
    Outcome::usage(e.to_string())
}

/// `--max-deg`, else `SINGCALC_MAX_DEG`, else `max(4(k+1), natural)` where
/// `natural` is the degree of the class being computed.
fn resolve_max_deg(deg: MaxDeg, k: u32, natural: u32) -> Result<u32, Outcome> {
    if let Some(d) = deg.max_deg {
        return Ok(d);
    }
    match std::env::var(MAX_DEG_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage_err(MAX_DEG_ENV, format!("not a non-negative integer: {v:?}"))),
        Err(_) => Ok((4 * (k + 1)).max(natural)),
    }
}

fn need_r(r: u32) -> Result<(), Outcome> {
    if r == 0 {
        Err(usage_err("--r", "must be at least 1"))
    } else {
        Ok(())
    }
}

fn need_k(k: u32) -> Result<(), Outcome> {
    if k == 0 {
        Err(usage_err("--k", "must be at least 1"))
    } else {
        Ok(())
    }
}

fn tpcalc(cmd: &TpCommand) -> Result<Report, Outcome> {
    let conv = Conventions::default();
    match cmd {
        TpCommand::Gtp { r, l, deg } => {
            need_r(*r)?;
            let codim = r * (l + r);
            let d = resolve_max_deg(*deg, l + 1, codim)?;
            let p = gtp(*r, *l, d).map_err(core_err)?;
            let mut rep = Report::new("tpcalc gtp").param("r", r).param("l", l).param("max_deg", d);
            rep.artifact("codim", codim);
            rep.artifact("polynomial", &p);
            rep.artifact("text", p.to_string());
            Ok(rep)
        }
        TpCommand::Morin { r, k, integral, deg } => {
            need_r(*r)?;
            let codim = r * (k + 1);
            let d = resolve_max_deg(*deg, *k, codim)?;
            let mut rep = Report::new("tpcalc morin")
                .param("r", r)
                .param("k", k)
                .param("max_deg", d)
                .param("integral", integral);
            rep.artifact("codim", codim);
            if *integral {
                let c = morin_tp_integral(*r, *k).map_err(core_err)?;
                rep.artifact("class", &c);
                rep.artifact("text", c.to_string());
                rep.artifact("mod2", c.reduce_mod2().truncate(d));
            } else {
                let p = morin_tp(*r, *k).map_err(core_err)?.truncate(d);
                rep.artifact("polynomial", &p);
                rep.artifact("text", p.to_string());
            }
            Ok(rep)
        }
        TpCommand::Sw {
            expr,
            n,
            k,
            regime,
            deg,
        } => {
            let d = resolve_max_deg(*deg, *k, 0)?;
            let e = BundleExpr::parse(expr, *n as i64, *k as i64).map_err(|e| usage_err("--expr", e))?;
            let (rank, total) = total_sw(&e, d).map_err(core_err)?;
            let regime = match regime {
                None => Regime::None,
                Some(RegimeArg::Prim) => Regime::Prim { k: *k },
                Some(RegimeArg::Twisted) => Regime::TwistedPrim {
                    k: *k,
                    line: KERNEL_LINE.into(),
                },
                Some(RegimeArg::MorinNu1) => Regime::MorinNu1 {
                    k: *k,
                    line: KERNEL_LINE.into(),
                },
            };
            let total = apply_regime(&total, &regime);
            let mut rep = Report::new("tpcalc sw")
                .param("expr", e.to_string())
                .param("n", n)
                .param("k", k)
                .param("max_deg", d);
            rep.artifact("rank", rank);
            rep.artifact("regime_rules", regime.rules());
            rep.artifact("total", &total);
            rep.artifact("text", total.to_string());
            Ok(rep)
        }
        TpCommand::Verify(v) => verify(v, &conv),
    }
}

fn verify(cmd: &VerifyCommand, conv: &Conventions) -> Result<Report, Outcome> {
    match cmd {
        VerifyCommand::Cusp { k, deg } => {
            need_k(*k)?;
            let d = resolve_max_deg(*deg, *k, 2 * (k + 1))?;
            verify_cusp_coincidence(*k, d, conv).map_err(core_err)
        }
        VerifyCommand::Prim { r, k, deg } => {
            need_r(*r)?;
            let d = resolve_max_deg(*deg, *k, r * (k + 1))?;
            verify_prim_coincidence(*r, *k, d, conv).map_err(core_err)
        }
        VerifyCommand::Twisted { r, k, deg } => {
            need_r(*r)?;
            let d = resolve_max_deg(*deg, *k, r * (k + 1))?;
            verify_twisted_coincidence(*r, *k, d).map_err(core_err)
        }
        VerifyCommand::MorinDerivation { r, k, deg } => {
            need_r(*r)?;
            need_k(*k)?;
            let d = resolve_max_deg(*deg, *k, r * (k + 1))?;
            verify_morin_derivation(*r, *k, d, conv).map_err(core_err)
        }
        VerifyCommand::LemmaPushforward { n, k, r, deg } => {
            let d = resolve_max_deg(*deg, *k, k + r + 1)?;
            verify_lemma_nu1(*n, *k, *r, d, conv).map_err(core_err)
        }
    }
}

fn germ(n: usize, k: usize) -> Result<Germ, Outcome> {
    Germ::new(n, k).map_err(|e| usage_err("--n/--k", e))
}

fn grid(flag: &str, s: &str) -> Result<Vec<Q>, Outcome> {
    parse_q_list(s).map_err(|e| usage_err(flag, e))
}

/// Parses `--point` (and `--t`), taking `n` from the number of coordinates.
fn point(point: &str, t: Option<&str>, k: usize) -> Result<(Germ, GermPoint), Outcome> {
    let coords = parse_q_list(point).map_err(|e| usage_err("--point", e))?;
    let g = Germ::new(coords.len(), k).map_err(|e| usage_err("--point/--k", e))?;
    let mut p = GermPoint::from_coords(&g, &coords).map_err(|e| usage_err("--point", e))?;
    if let Some(t) = t {
        let t = parse_q_list(t).map_err(|e| usage_err("--t", e))?;
        match t.as_slice() {
            [t] => p.t = Some(t.clone()),
            _ => return Err(usage_err("--t", "expected a single fraction")),
        }
    }
    Ok((g, p))
}

fn matrix_rows(m: &QMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| show_vec(r)).collect()
}

fn germ_params(rep: Report, g: &Germ, p: &GermPoint) -> Report {
    let rep = rep.param("n", g.n).param("k", g.k).param("point", show_vec(&p.coords()));
    match &p.t {
        Some(t) => rep.param("t", t.to_string()),
        None => rep,
    }
}

fn germlab(cmd: &GermCommand) -> Result<Report, Outcome> {
    let conv = Conventions::default();
    match cmd {
        GermCommand::Stratify { n, k, grid: gs, t_grid } => {
            let g = germ(*n, *k)?;
            let values = grid("--grid", gs)?;
            let ts = t_grid.as_deref().map(|s| grid("--t-grid", s)).transpose()?;
            let strat = stratify_grid(&g, &values, ts.as_deref(), &conv);
            let mut rep = Report::new("germlab stratify")
                .param("n", n)
                .param("k", k)
                .param("grid", show_vec(&values));
            rep.check(
                "corank(df) >= 1 exactly on the closed-form singular set",
                strat.mismatches.is_empty(),
                (!strat.mismatches.is_empty()).then(|| format!("mismatches at {:?}", strat.mismatches)),
            );
            rep.check(
                "sigma = 0 exactly on the cusp locus within the singular set",
                strat.sigma_zero_mismatches.is_empty(),
                None,
            );
            rep.artifact("points_scanned", strat.points_scanned);
            rep.artifact("singular_points", &strat.singular_points);
            rep.artifact("corank_profile", &strat.corank_profile);
            if let Some(tilde) = &strat.tilde {
                rep.artifact("tilde_corank_profile", &tilde.corank_profile);
                rep.artifact("tilde_corank_by_t", &tilde.by_t);
                rep.artifact("tilde_corank2_points", &tilde.corank2_points);
            }
            rep.note(format!("{} singular points", strat.singular_points.len()));
            Ok(rep)
        }
        GermCommand::Sigma { point: ps, k } => {
            let (g, p) = point(ps, None, *k)?;
            let closed = sigma_closed(&g, &p).map_err(core_err)?;
            let mut rep = germ_params(Report::new("germlab sigma"), &g, &p);
            if g.on_sigma(&p) {
                let oracle = sigma_oracle(&g, &p).map_err(core_err)?;
                rep.check(
                    "closed form equals the Gram-Schmidt construction",
                    closed == oracle,
                    (closed != oracle).then(|| format!("oracle gives {:?}", show_vec(&oracle))),
                );
            } else {
                rep.note("point is off the singular set; closed form only");
            }
            rep.artifact("coordinates", g.target_names());
            rep.artifact("sigma", show_vec(&closed));
            Ok(rep)
        }
        GermCommand::Jacobian {
            point: ps,
            t,
            k,
            check_fd,
        } => {
            let (g, p) = point(ps, Some(t), *k)?;
            let closed = jacobian_tilde_f(&g, &p, &conv);
            let ad = jacobian_ad(&g, GermMap::TildeF, &p);
            let mut rep = germ_params(Report::new("germlab jacobian"), &g, &p);
            rep.check(
                "closed form equals forward-mode differentiation",
                closed == ad,
                (closed != ad).then(|| format!("jets give {:?}", matrix_rows(&ad))),
            );
            if *check_fd {
                let dev = fd_deviation(&closed, &jacobian_fd(&g, &p)).map_err(core_err)?;
                rep.check(
                    "finite differences agree to 1e-6 relative",
                    dev <= 1e-6,
                    Some(format!("largest relative deviation {dev:.2e}")),
                );
            }
            let jr = corank(&closed);
            rep.artifact("rows", g.target_names());
            rep.artifact("columns", g.source_names(true));
            rep.artifact("jacobian", matrix_rows(&closed));
            rep.artifact("rank", jr.rank);
            rep.artifact("corank", jr.corank);
            Ok(rep)
        }
        GermCommand::Transversality { point: ps, t, k } => {
            let (g, p) = point(ps, Some(t), *k)?;
            let jr = transversality_check(&g, &p, &conv).map_err(core_err)?;
            let tr = jr.transversality.clone().expect("filled in by transversality_check");
            let mut rep = germ_params(Report::new("germlab transversality"), &g, &p);
            rep.check(
                "projected derivative onto Hom(ker, coker) is surjective",
                tr.surjective,
                Some(format!("rank {} of required {}", tr.map_rank, tr.required_rank)),
            );
            if !tr.claimed_span {
                rep.note(format!(
                    "the coordinates yY_i, yZ, tY_i, tZ span only {} of {} dimensions here; kernel is supported on {:?}",
                    tr.claimed_rank,
                    jr.kernel_basis.len() * jr.cokernel_basis.len(),
                    tr.kernel_support
                ));
            }
            rep.artifact("jet_report", &jr);
            Ok(rep)
        }
        GermCommand::ScanSigma2 {
            n,
            k,
            grid: gs,
            t_grid,
            report,
        } => {
            let g = germ(*n, *k)?;
            let values = grid("--grid", gs)?;
            let ts = match t_grid {
                Some(s) => grid("--t-grid", s)?,
                None => values.clone(),
            };
            let scan = scan_sigma2(&g, &values, &ts, &conv);
            let mut rep = Report::new("germlab scan-sigma2")
                .param("n", n)
                .param("k", k)
                .param("grid", show_vec(&values))
                .param("t_grid", show_vec(&ts));
            rep.artifact("points_scanned", scan.points_scanned);
            rep.artifact("corank_profile", &scan.corank_profile);
            rep.artifact("corank2_points", &scan.corank2_points);
            rep.note(format!(
                "{} corank-2 points; {} of the {} scanned points with x = y = z = 0 have corank 2",
                scan.corank2_points.len(),
                scan.corank2_on_claimed_locus,
                scan.claimed_locus_points
            ));
            if let Some(path) = report {
                let body = serde_json::to_string_pretty(&json!({ "report": &rep, "scan": &scan }))
                    .expect("scan serializes");
                std::fs::write(path, body + "\n").map_err(|e| usage_err("--report", e))?;
                rep.note(format!("full scan written to {}", path.display()));
            }
            Ok(rep)
        }
    }
}

fn suite(args: &SuiteArgs, json: bool) -> Outcome {
    let fault = match args.inject_fault.as_deref().map(str::parse::<Fault>).transpose() {
        Ok(f) => f,
        Err(e) => return usage_err("--inject-fault", e),
    };
    let report = run_suite(fault);
    Outcome {
        code: if report.passed() { 0 } else { 1 },
        stdout: if json {
            serde_json::to_string_pretty(&report).expect("suite report serializes") + "\n"
        } else {
            report.render_text()
        },
        stderr: String::new(),
    }
}
