//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests.

use crate::constants::{constants, published};
use crate::dispersion::PhysicalParams;
use crate::gamma::{fit_ab, gamma, resonance, FitResult, GammaResult, SolveMethod};
use crate::selftest;
use crate::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const CSV_HEADER: [&str; 10] = [
    "eps",
    "we",
    "l_opt",
    "zeta",
    "eta",
    "log10_gamma_z",
    "log10_gamma_lambda",
    "log10_gamma_asym",
    "ratio",
    "method",
];

#[derive(Debug, Parser)]
#[command(name = "bubble-res", version, about = "Shape-mode resonances and decay rate of a gas bubble")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Asymptotic constants B = eta_m0, A_0 = exp(-eta_m2) and the rest
    Constants {
        #[arg(long)]
        json: bool,
    },
    /// Resonance of a single mode l
    Root {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        we: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
    /// Decay rate Gamma(eps), minimized over l
    Gamma {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        we: f64,
        #[arg(long)]
        json: bool,
    },
    /// Gamma over an evenly spaced range of eps
    Sweep {
        #[arg(long)]
        eps_min: f64,
        #[arg(long)]
        eps_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        we: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Prepend comment lines describing the run
        #[arg(long)]
        meta: bool,
    },
    /// Fit ln Gamma = ln A - B/eps^2 - 2 ln eps to a sweep file
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in invariant checks
    Selftest {
        /// One of specfun, constants, dispersion, scaled, gamma (default: all)
        module: Option<String>,
    },
}

/// One row of a sweep file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub we: f64,
    pub l_opt: u32,
    pub zeta: f64,
    pub eta: f64,
    pub log10_gamma_z: f64,
    pub log10_gamma_lambda: f64,
    pub log10_gamma_asym: f64,
    /// Linear `Gamma/Gamma_asym`; absent when either rate is below `e^-300`.
    pub ratio: Option<f64>,
    pub method: SolveMethod,
}

impl SweepRow {
    pub fn from_gamma(g: &GammaResult) -> Self {
        let ln10 = std::f64::consts::LN_10;
        let ratio = (g.log_gamma_z > -300.0 && g.log_gamma_asym_z > -300.0).then(|| g.ratio());
        Self {
            eps: g.eps,
            we: g.we,
            l_opt: g.l_opt,
            zeta: g.zeta_opt,
            eta: g.eta_opt,
            log10_gamma_z: g.log_gamma_z / ln10,
            log10_gamma_lambda: g.log_gamma_lambda / ln10,
            log10_gamma_asym: g.log_gamma_asym_z / ln10,
            ratio,
            method: g.method,
        }
    }

    fn record(&self) -> Vec<String> {
        let f = |v: f64| format!("{v:.16e}");
        vec![
            f(self.eps),
            f(self.we),
            self.l_opt.to_string(),
            f(self.zeta),
            f(self.eta),
            f(self.log10_gamma_z),
            f(self.log10_gamma_lambda),
            f(self.log10_gamma_asym),
            self.ratio.map(f).unwrap_or_default(),
            self.method.to_string(),
        ]
    }
}

/// Evenly spaced `eps` values, ascending.
pub fn sweep_grid(eps_min: f64, eps_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(eps_min > 0.0 && eps_max >= eps_min) || steps == 0 {
        return Err(Error::InvalidParams(format!(
            "need 0 < eps-min <= eps-max and steps >= 1, got {eps_min}, {eps_max}, {steps}"
        )));
    }
    if steps == 1 {
        return Ok(vec![eps_min]);
    }
    let h = (eps_max - eps_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { eps_max } else { eps_min + h * k as f64 })
        .collect())
}

/// `gamma` at every grid point, computed in parallel and returned in order.
pub fn sweep(grid: &[f64], we: f64) -> Result<Vec<SweepRow>> {
    grid.par_iter()
        .map(|&e| {
            gamma(e, we)
                .map(|g| SweepRow::from_gamma(&g))
                .map_err(|err| annotate(err, &format!("eps = {e}")))
        })
        .collect()
}

fn annotate(err: Error, at: &str) -> Error {
    match err {
        Error::Precision(m) => Error::Precision(format!("{at}: {m}")),
        Error::Window(m) => Error::Window(format!("{at}: {m}")),
        Error::Refused(m) => Error::Refused(format!("{at}: {m}")),
        other => other,
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], meta: &[String], mut w: W) -> Result<()> {
    for m in meta {
        writeln!(w, "# {m}")?;
    }
    let mut cw = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    cw.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        cw.write_record(r.record()).map_err(io)?;
    }
    cw.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let headers = rd.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected header: {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    rd.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SweepJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    meta: Option<Vec<String>>,
    rows: Vec<SweepRow>,
}

/// Sweep rows from a CSV or JSON file (JSON if the first non-blank byte is `{`).
pub fn read_sweep(path: &std::path::Path) -> Result<Vec<SweepRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let s: SweepJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(s.rows)
    } else {
        read_csv(text.as_bytes())
    }
}

/// `(eps', ln Gamma_z)` points for [`fit_ab`].
pub fn fit_points(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    rows.iter()
        .map(|r| (r.eps / r.we.sqrt(), r.log10_gamma_z * std::f64::consts::LN_10))
        .collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Parse(_) | Error::InvalidParams(_) => EXIT_USAGE,
        _ => EXIT_SOLVER,
    }
}

fn hint(e: &Error) -> &'static str {
    match e {
        Error::Precision(_) => "hint: the imaginary part is below double resolution; try --method scaled",
        Error::Window(_) => "hint: outside the scaled window; try --method direct",
        Error::Regime(_) => "hint: no asymptotic seed covers this mode; try --method scaled",
        Error::NoConvergence { .. } => "hint: try the other --method",
        _ => "",
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

/// Parse `args` (program name first), run, return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let h = hint(&e);
            if !h.is_empty() {
                let _ = writeln!(err, "{h}");
            }
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Constants { json: as_json } => {
            let c = constants();
            if as_json {
                #[derive(Serialize)]
                struct Published {
                    zeta_m0: f64,
                    zeta_m2: f64,
                    l_m0: f64,
                    l_m2: f64,
                    eta_m0: f64,
                    eta_m2: f64,
                }
                #[derive(Serialize)]
                struct Out<'a> {
                    #[serde(flatten)]
                    computed: &'a crate::constants::AsymptoticConstants,
                    published: Published,
                }
                let o = Out {
                    computed: c,
                    published: Published {
                        zeta_m0: published::ZETA_M0,
                        zeta_m2: published::ZETA_M2,
                        l_m0: published::L_M0,
                        l_m2: published::L_M2,
                        eta_m0: published::ETA_M0,
                        eta_m2: published::ETA_M2,
                    },
                };
                writeln!(out, "{}", json(&o))?;
            } else {
                let rows = [
                    ("zeta_m0", c.zeta_m0, published::ZETA_M0),
                    ("zeta_m2", c.zeta_m2, published::ZETA_M2),
                    ("l_m0", c.l_m0, published::L_M0),
                    ("l_m2", c.l_m2, published::L_M2),
                    ("eta_m0 (B)", c.eta_m0, published::ETA_M0),
                    ("eta_m2", c.eta_m2, published::ETA_M2),
                ];
                writeln!(out, "{:<12} {:>20} {:>10}", "name", "computed", "published")?;
                for (n, v, p) in rows {
                    writeln!(out, "{n:<12} {v:>20.15} {p:>10}")?;
                }
                writeln!(out, "{:<12} {:>20.15}", "a0", c.a0)?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Root {
            l,
            eps,
            we,
            method,
            json: as_json,
        } => {
            let p = PhysicalParams::new(l, eps, we)?;
            let m = match method {
                MethodArg::Auto => None,
                MethodArg::Direct => Some(SolveMethod::Direct),
                MethodArg::Scaled => Some(SolveMethod::Scaled),
            };
            let r = resonance(&p, m)?;
            if as_json {
                writeln!(out, "{}", json(&r))?;
            } else {
                writeln!(out, "l            {}", r.l)?;
                writeln!(out, "eps          {}", r.eps)?;
                writeln!(out, "we           {}", r.we)?;
                writeln!(out, "regime       {}", r.regime)?;
                writeln!(out, "method       {}", r.method)?;
                writeln!(out, "re_z         {:.16e}", r.x)?;
                writeln!(out, "im_z         {:.16e}", -r.log_neg_im.exp())?;
                writeln!(out, "ln_neg_im_z  {:.16e}", r.log_neg_im)?;
                writeln!(out, "zeta         {:.16e}", r.zeta)?;
                writeln!(out, "eta          {:.16e}", r.eta)?;
                writeln!(out, "residual     {:.3e}", r.residual)?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Gamma { eps, we, json: as_json } => {
            let g = gamma(eps, we)?;
            if as_json {
                writeln!(out, "{}", json(&g))?;
            } else {
                let ln10 = std::f64::consts::LN_10;
                writeln!(out, "eps                 {}", g.eps)?;
                writeln!(out, "we                  {}", g.we)?;
                writeln!(out, "l_opt               {}", g.l_opt)?;
                writeln!(out, "method              {}", g.method)?;
                writeln!(out, "re_z                {:.16e}", g.root.x)?;
                writeln!(out, "log10_gamma_z       {:.16e}", g.log_gamma_z / ln10)?;
                writeln!(out, "log10_gamma_lambda  {:.16e}", g.log_gamma_lambda / ln10)?;
                writeln!(out, "log10_gamma_asym    {:.16e}", g.log_gamma_asym_z / ln10)?;
                writeln!(out, "ratio               {:.6}", g.ratio())?;
                writeln!(out, "eta                 {:.16e}", g.eta_opt)?;
                writeln!(out, "l_eta_max           {}", g.l_eta_max)?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Sweep {
            eps_min,
            eps_max,
            steps,
            we,
            out: path,
            format,
            meta,
        } => {
            let grid = sweep_grid(eps_min, eps_max, steps)?;
            let rows = sweep(&grid, we)?;
            let meta_lines = meta.then(|| {
                vec![
                    format!("bubble-res {}", env!("CARGO_PKG_VERSION")),
                    format!("sweep eps-min={eps_min} eps-max={eps_max} steps={steps} we={we}"),
                    "rates in z-units; lambda-units divide by eps".to_string(),
                ]
            });
            let file = std::fs::File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let w = std::io::BufWriter::new(file);
            match format {
                Format::Csv => write_csv(&rows, meta_lines.as_deref().unwrap_or(&[]), w)?,
                Format::Json => {
                    let mut w = w;
                    let s = SweepJson { meta: meta_lines, rows };
                    writeln!(w, "{}", json(&s))?;
                    w.flush()?;
                }
            }
            writeln!(out, "wrote {} rows to {}", grid.len(), path.display())?;
            Ok(EXIT_OK)
        }
        Cmd::Fit { input, json: as_json } => {
            let rows = read_sweep(&input)?;
            let f: FitResult = fit_ab(&fit_points(&rows))?;
            if as_json {
                writeln!(out, "{}", json(&f))?;
            } else {
                writeln!(out, "b_fit          {:.12}", f.b_fit)?;
                writeln!(out, "log_a_fit      {:.12}", f.log_a_fit)?;
                writeln!(out, "a_fit          {:.12}", f.log_a_fit.exp())?;
                writeln!(out, "residual_rms   {:.3e}", f.residual_rms)?;
                writeln!(out, "eps_range      [{}, {}]", f.eps_range.0, f.eps_range.1)?;
                writeln!(out, "points         {}", f.n)?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Selftest { module } => {
            let checks = selftest::run(module.as_deref()).map_err(Error::InvalidParams)?;
            let mut ok = true;
            for c in &checks {
                writeln!(out, "{c}")?;
                ok &= c.passed;
            }
            Ok(if ok { EXIT_OK } else { EXIT_SOLVER })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut argv = vec!["bubble-res"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn constants_json() {
        let (code, out, _) = call(&["constants", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["eta_m0"].as_f64().unwrap() - 0.26924).abs() < 5e-5);
        assert!((v["a0"].as_f64().unwrap() - (-2.1465f64).exp()).abs() < 1e-4);
        assert_eq!(v["published"]["eta_m2"].as_f64().unwrap(), 2.1465);
    }

    #[test]
    fn refusal_and_usage_codes() {
        let (code, _, err) = call(&["gamma", "--eps", "0.4"]);
        assert_eq!(code, EXIT_SOLVER);
        assert!(err.contains("0.35"));
        let (code, _, err) = call(&["gamma", "--eps", "0.1x"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("0.1x"));
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn root_small_l() {
        let (code, out, _) = call(&["root", "--l", "2", "--eps", "0.1", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["x"].as_f64().unwrap() - 0.344_041_2).abs() < 1e-6);
        assert_eq!(v["regime"], "small-l");
        assert!(v["log_neg_im"].as_f64().unwrap() < -10.0);
    }

    #[test]
    fn grid_is_inclusive() {
        let g = sweep_grid(0.05, 0.25, 12).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!((g[0], g[11]), (0.05, 0.25));
        assert!(sweep_grid(0.2, 0.1, 3).is_err());
    }
}
