use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value as Json};

use hdx_core::cheeger::{self, CheegerCoefficient, CheegerReport, H0Mode, Witness};
use hdx_core::cochain::{load_cochain, Coefficient, SearchMode};
use hdx_core::complex::{self as cx, Complex, ComplexFile, Presentation};
use hdx_core::correction::{self, ExperimentConfig, Method};
use hdx_core::covering::{covering_from_cochain, level_crossing_norm, save_covering};
use hdx_core::report::{Tolerances, Value, VERSION};
use hdx_core::{spectral, Error, Rational};

use crate::args::*;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub enum Outcome {
    Holds,
    Violated(String),
}

/// One asserted inequality and whether it held.
#[derive(Serialize)]
struct Check {
    name: String,
    holds: bool,
}

impl Check {
    fn new(name: impl Into<String>, holds: bool) -> Self {
        Check { name: name.into(), holds }
    }
}

fn outcome(checks: &[Check]) -> Outcome {
    match checks.iter().find(|c| !c.holds) {
        Some(c) => Outcome::Violated(c.name.clone()),
        None => Outcome::Holds,
    }
}

fn tolerances(g: &Global) -> Tolerances {
    let mut t = Tolerances::default();
    t.eigenvalue = g.tol_eigenvalue.unwrap_or(t.eigenvalue);
    t.inequality = g.tol_inequality.unwrap_or(t.inequality);
    t.jacobi = g.tol_jacobi.unwrap_or(t.jacobi);
    t
}

fn load(path: &Path) -> Result<Arc<Complex>> {
    cx::load_complex(path).map(Arc::new).map_err(|e| match e {
        Error::Io(io) => CliError::Usage(format!("{}: {io}", path.display())),
        other => CliError::Usage(format!("{}: {other}", path.display())),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    emit(out, &(serde_json::to_string_pretty(value)? + "\n"))
}

/// Wraps a result with the tool version, resolved configuration and tolerances.
fn envelope(cli: &Cli, result: impl Serialize, checks: &[Check]) -> Result<Json> {
    Ok(json!({
        "tool": "hdx",
        "version": VERSION,
        "config": { "global": cli.global, "command": cli.command },
        "tolerances": tolerances(&cli.global),
        "result": result,
        "checks": checks,
    }))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Cheeger(a) => cheeger_cmd(cli, a),
        Command::Cosystole(a) => cosystole(cli, a),
        Command::Spectral(a) => spectral_cmd(cli, a),
        Command::Cover(a) => cover(cli, a),
        Command::Correct(a) => correct(cli, a),
        Command::Experiment(a) => experiment(cli, a),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: Family) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("{family:?} needs --{flag}").to_lowercase()))
}

fn gen(a: &GenArgs) -> Result<Outcome> {
    let parse = |i: usize| -> Result<Presentation> {
        let s = a.presentations.get(i).ok_or_else(|| CliError::Usage("missing --pres".into()))?;
        Ok(s.parse()?)
    };
    let x = match a.family {
        Family::Complete => cx::complete_complex(need(a.d, "d", a.family)?)?,
        Family::Building => cx::spherical_building(need(a.q, "q", a.family)?)?,
        Family::CyclicCover => cx::cyclic_cover_complex(need(a.m, "m", a.family)?)?,
        Family::Presentation => cx::presentation_complex(&parse(0)?)?,
        Family::Contracted => {
            cx::presentation_complex(&cx::contracted_complete_presentation(need(a.d, "d", a.family)?)?)?
        }
        Family::FreeProduct => cx::presentation_complex(&cx::free_product_presentation(&parse(0)?, &parse(1)?)?)?,
    };
    emit_json(a.out.as_deref(), &ComplexFile::from_complex(&x))?;
    Ok(Outcome::Holds)
}

fn compute_cheeger(x: &Arc<Complex>, a: &CheegerArgs, seed: u64) -> Result<CheegerReport> {
    let rep = match (a.kind, a.coeff) {
        (Kind::H0, _) => cheeger::h0_f2(x, if a.mode == Mode::Sweep { H0Mode::Sweep } else { H0Mode::Exact })?,
        (Kind::HB0, _) => cheeger::hb0_f2(x)?,
        (Kind::H1, Coeff::F2) => cheeger::h1_f2_exact(x)?,
        (Kind::H1, Coeff::Sym) => cheeger::h1_sym_truncated(x, a.nmax, seed)?,
        (Kind::HB1, Coeff::F2) => cheeger::hb_variants(x, CheegerCoefficient::F2, seed)?,
        (Kind::HB1, Coeff::Sym) => cheeger::hb_variants(x, CheegerCoefficient::Sym { n_max: a.nmax }, seed)?,
    };
    Ok(rep)
}

/// Checks tied to one Cheeger report: the witness reproduces the reported
/// ratio, the sweep interval is ordered, and complete complexes meet
/// `h1 >= (d+1)/(d-1)`.
fn cheeger_checks(x: &Arc<Complex>, a: &CheegerArgs, rep: &CheegerReport, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if let (Some(w), Some(r)) = (&rep.witness_cochain, &rep.witness_ratio) {
        let again = match (w, a.kind) {
            (Witness::Vertices(b), Kind::H0) => cheeger::h0_ratio(x, b).map(|v| hdx_core::to_f64(&v)),
            (Witness::Edges(c), Kind::H1) => {
                let d = c.dist_to_cocycles(SearchMode::Exact)?.distance;
                Some(hdx_core::to_f64(&(c.delta().norm_exact() / d)))
            }
            (Witness::Edges(c), Kind::HB1) => {
                let d = c.dist_to_coboundaries(SearchMode::Exact)?.distance;
                Some(hdx_core::to_f64(&(c.delta().norm_exact() / d)))
            }
            _ => None,
        };
        if let Some(v) = again {
            checks.push(Check::new("witness reproduces the reported ratio", (v - r.value).abs() <= tol.witness));
        }
    }
    if let Value::Interval { lower: Some(l), upper: Some(u) } = rep.value {
        checks.push(Check::new("h0 >= 1 - lambda2 on the sweep interval", l <= u + tol.inequality));
    }
    let d = x.n_vertices().saturating_sub(1);
    if a.kind == Kind::H1 && d >= 2 && **x == cx::complete_complex(d)? {
        if let Some(h) = rep.exact_value {
            let dd = d as i128;
            checks.push(Check::new("h1 of a complete complex >= (d+1)/(d-1)", h >= Rational::new(dd + 1, dd - 1)));
        }
    }
    Ok(checks)
}

fn cheeger_cmd(cli: &Cli, a: &CheegerArgs) -> Result<Outcome> {
    let tol = tolerances(&cli.global);
    if a.complex.len() > 1 && a.csv.is_none() {
        return Err(CliError::Usage("several complexes need --csv".into()));
    }
    if let Some(csv_path) = &a.csv {
        let mut text = String::from("complex,kind,coefficient,value_kind,value,fraction,lower,upper\n");
        let mut all = Vec::new();
        for path in &a.complex {
            let x = load(path)?;
            let rep = compute_cheeger(&x, a, cli.global.seed)?;
            all.extend(cheeger_checks(&x, a, &rep, &tol)?);
            let kind = serde_json::to_value(rep.kind)?;
            let (vk, v, frac, lo, hi) = match &rep.value {
                Value::Exact { value, fraction } => ("exact", value.to_string(), fraction.clone(), String::new(), String::new()),
                Value::Interval { lower, upper } => (
                    "interval",
                    String::new(),
                    String::new(),
                    lower.map(|l| l.to_string()).unwrap_or_default(),
                    upper.map(|u| u.to_string()).unwrap_or_default(),
                ),
                Value::Infinite => ("infinite", String::new(), String::new(), String::new(), String::new()),
            };
            text += &format!(
                "{},{},{},{vk},{v},{frac},{lo},{hi}\n",
                path.display(),
                kind.as_str().unwrap_or_default(),
                rep.coefficient
            );
        }
        emit(Some(csv_path), &text)?;
        if let Some(out) = &a.out {
            emit_json(Some(out), &envelope(cli, json!({ "csv": csv_path }), &all)?)?;
        }
        return Ok(outcome(&all));
    }
    let x = load(&a.complex[0])?;
    let rep = compute_cheeger(&x, a, cli.global.seed)?;
    let checks = cheeger_checks(&x, a, &rep, &tol)?;
    emit_json(a.out.as_deref(), &envelope(cli, &rep, &checks)?)?;
    Ok(outcome(&checks))
}

fn cosystole(cli: &Cli, a: &CosystoleArgs) -> Result<Outcome> {
    let x = load(&a.complex)?;
    let rep = cheeger::cosystole_sym(&x, a.nmax)?;
    let mut checks = Vec::new();
    if let Some(w) = &rep.witness_cochain {
        checks.push(Check::new(
            "witness is a connected non-coboundary cocycle",
            w.is_cocycle() && w.is_connected_cochain() && !w.is_coboundary_exact(),
        ));
    }
    let mut covers = Vec::new();
    if a.check_covers {
        for n in 2..=a.nmax {
            match cheeger::verify_cover_expansion_all(&x, n) {
                Ok(list) => {
                    for (z, c) in list {
                        checks.push(Check::new(format!("norm >= h0(cover)/2 at degree {n}"), c.holds));
                        covers.push(json!({
                            "degree": n,
                            "cochain": hdx_core::cochain::CochainFile::from_cochain1(&z, Coefficient::Sym(n)),
                            "check": c,
                        }));
                    }
                }
                Err(Error::SizeGuard { what, .. }) => covers.push(json!({ "degree": n, "skipped": what })),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let result = json!({ "cosystole": rep, "covers": covers });
    emit_json(a.out.as_deref(), &envelope(cli, result, &checks)?)?;
    Ok(outcome(&checks))
}

fn spectral_cmd(cli: &Cli, a: &SpectralArgs) -> Result<Outcome> {
    let tol = tolerances(&cli.global);
    let x = load(&a.complex)?;
    let (result, checks) = match a.check {
        SpectralCheck::Trickle => {
            let t = spectral::trickling_check(&x, tol)?;
            let checks = t.holds.map(|h| Check::new("lambda2 <= lambda / (1 - lambda)", h)).into_iter().collect();
            (serde_json::to_value(t)?, checks)
        }
        SpectralCheck::CheegerLower => {
            let c = spectral::weighted_cheeger_lower(&x, tol)?;
            let checks = c.holds.map(|h| Check::new("h0 >= 1 - lambda2", h)).into_iter().collect();
            (serde_json::to_value(c)?, checks)
        }
        SpectralCheck::CoverBound => {
            let c = spectral::cover_bound_experiment(&x, a.nmax, tol)?;
            let checks = vec![Check::new("cosystole and cover links respect the local bound", c.holds)];
            (serde_json::to_value(c)?, checks)
        }
        SpectralCheck::Links => (serde_json::to_value(spectral::local_lambda(&x)?)?, Vec::new()),
    };
    emit_json(a.out.as_deref(), &envelope(cli, result, &checks)?)?;
    Ok(outcome(&checks))
}

fn cover(cli: &Cli, a: &CoverArgs) -> Result<Outcome> {
    let x = load(&a.complex)?;
    let c = load_cochain(x, &a.cochain)?;
    let cov = covering_from_cochain(&c);
    let mut checks = vec![Check::new("cover connected iff cochain connected", cov.is_connected() == c.is_connected_cochain())];
    let norm = c.norm_exact();
    let level = if c.is_cocycle() {
        let l = level_crossing_norm(&c)?;
        checks.push(Check::new("norm equals the level-crossing probability", l == norm));
        Some(hdx_core::report::Exact::from(l))
    } else {
        None
    };
    if let Some(out) = &a.out {
        save_covering(&cov, &a.complex.display().to_string(), out)?;
    }
    let result = json!({
        "degree": c.degree(),
        "cover_vertices": cov.n_vertices(),
        "cover_edges": cov.n_edges(),
        "components": cov.n_components(),
        "connected": cov.is_connected(),
        "cocycle": c.is_cocycle(),
        "polygons_close": cov.polygons_close(),
        "norm": hdx_core::report::Exact::from(norm),
        "level_crossing": level,
    });
    emit_json(a.report.as_deref(), &envelope(cli, result, &checks)?)?;
    Ok(outcome(&checks))
}

fn cochain_coefficient(path: &Path) -> Result<Coefficient> {
    let file: hdx_core::cochain::CochainFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    Ok(file.coefficient)
}

fn certificate_checks(c: &correction::CorrectionCertificate) -> Vec<Check> {
    let mut checks = vec![Check::new("certificate reproduces", c.recheck().is_ok())];
    if let Some(h) = c.holds() {
        checks.push(Check::new("distance <= claimed factor * defect", h));
    }
    checks
}

fn correct(cli: &Cli, a: &CorrectArgs) -> Result<Outcome> {
    let x = load(&a.complex)?;
    let coefficient = cochain_coefficient(&a.cochain)?;
    let c = load_cochain(x, &a.cochain)?;
    let cert = match a.method {
        MethodArg::Complete => correction::correct_complete(&c)?,
        MethodArg::Cone => {
            correction::correct_cone(&c, cx::VertexId(a.root), a.radius_budget, a.fill_budget)?
        }
        MethodArg::Exact => correction::correct_exact(&c)?,
    };
    let checks = certificate_checks(&cert);
    emit_json(a.out.as_deref(), &envelope(cli, cert.report(coefficient), &checks)?)?;
    Ok(outcome(&checks))
}

fn experiment(cli: &Cli, a: &ExperimentArgs) -> Result<Outcome> {
    let x = load(&a.complex)?;
    let config = ExperimentConfig {
        n: a.n,
        p_corrupt: a.p_corrupt,
        trials: a.trials,
        method: Method::from(a.method),
        seed: cli.global.seed,
        root: a.root,
        radius_budget: a.radius_budget,
        fill_budget: a.fill_budget,
    };
    let res = correction::stability_experiment(x, &config)?;
    let mut buf = Vec::new();
    correction::write_csv(&res.rows, &mut buf)?;
    emit(a.out.as_deref(), &String::from_utf8_lossy(&buf))?;
    let checks: Vec<Check> = res
        .certificates
        .iter()
        .enumerate()
        .flat_map(|(i, c)| certificate_checks(c).into_iter().map(move |k| Check::new(format!("trial {i}: {}", k.name), k.holds)))
        .filter(|c| !c.holds)
        .collect();
    if let Some(report) = &a.report {
        let result = json!({
            "trials": res.rows.len(),
            "max_ratio": res.max_ratio(),
            "all_hold": res.all_hold(),
            "enumerated_cocycles": res.enumerated,
            "largest_filling": res.largest_filling,
        });
        emit_json(Some(report), &envelope(cli, result, &checks)?)?;
    }
    Ok(outcome(&checks))
}
