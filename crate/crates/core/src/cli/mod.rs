//! Command-line front end: each subcommand dispatches to the library and renders a report.

mod output;
mod verify;

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::actions::{
    action_i1, action_j1_numeric, birkhoff_by_inversion, fit_invariant_s, period_t, published_coefficients,
    rotation_w_numeric, w_star, InvariantModel,
};
use crate::dynamics::{periodic_orbit_search, periodic_orbits_at_energy, PeriodicOrbit};
use crate::elliptic::{ellint_e, ellint_k, ellint_pi, heuman_lambda0, EnergyMomentum};
use crate::error::{Error, Result};
use crate::normalform::lie_normalize;
use crate::pendulum::{complex_nome_series, nome_from_invariant, pendulum_invariant_published, pendulum_quadruple};
use crate::series::Series2Json;

pub use output::{Format, Report};
pub use verify::{run_suite, SUITES};

use output::{num, opt, text_table};

#[derive(Parser, Debug)]
#[command(name = "pendinv", version, about = "Normal forms, actions and symplectic invariants of the spherical pendulum")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// output format
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    pub format: Format,
    /// write output to a file instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// worker threads for grid sweeps (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// numeric tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Birkhoff normal form H(J₁, J₂) by the Lie method and by inverting J₁(h, j₂)
    Nf {
        /// total degree in (J₁, J₂)
        #[arg(long, default_value_t = 10)]
        order: u32,
    },
    /// Fit the semi-global invariant S(j₁, j₂) from high-precision actions
    Invariants {
        /// highest reported degree (the fit itself uses at least degree 10)
        #[arg(long, default_value_t = 10)]
        order: u32,
        /// working precision in bits
        #[arg(long, env = "PENDINV_PRECISION", default_value_t = 256)]
        precision: u32,
        /// number of samples (0 = automatic)
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Actions I₁, J₁, rotation number and period at (h, j₂)
    Action {
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long, allow_negative_numbers = true)]
        j2: f64,
    },
    /// Rotation number by the elliptic formula, by differentiating I₁, and from the model
    Rotation {
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long, allow_negative_numbers = true)]
        j2: f64,
        /// report |W| (even convention) instead of the odd W
        #[arg(long)]
        abs: bool,
    },
    /// Twistless curve and W on it for circles of radius r in (j₁, j₂)
    Twist {
        #[arg(long, num_args = 1.., default_values_t = [0.05, 0.1, 0.25, 0.5, 0.75])]
        r: Vec<f64>,
    },
    /// Pendulum quadruple (I, J, T, U), or the nome series
    Pendulum {
        #[arg(long, allow_negative_numbers = true, num_args = 1..)]
        h: Vec<f64>,
        /// print the nome series q(l), l(q) and the reciprocal
        #[arg(long)]
        nome: bool,
        /// print the complex nome q̂ of the spherical pendulum
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = 8)]
        order: u32,
        /// true pendulum normalization below the separatrix (doubles I and T)
        #[arg(long)]
        true_pendulum: bool,
    },
    /// Periodic orbit with rotation number p/q on a circle of radius r, or on an energy level
    Orbit {
        /// rotation number p/q
        #[arg(long = "W", alias = "w")]
        w: String,
        #[arg(long, default_value_t = 0.75)]
        r: f64,
        /// search on the energy level h instead of the circle
        #[arg(long, allow_negative_numbers = true)]
        h: Option<f64>,
        /// write the orbit trace (t,x,y,z,px,py,pz,u,v) as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run named verification suites (exit code 1 on any failure)
    Verify {
        #[arg(long, num_args = 1.., default_values_t = ["all".to_string()])]
        suite: Vec<String>,
    },
    /// Complete elliptic integrals K, E, Π and Heuman's Λ₀
    Special {
        /// parameter m = k²
        #[arg(long)]
        m: f64,
        /// characteristic of the third-kind integral
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        n: f64,
        /// amplitude for Λ₀
        #[arg(long, default_value_t = PI / 2.0)]
        phi: f64,
    },
}

/// Parses, runs and prints; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let write = match &cli.run.output {
                Some(p) => File::create(p)
                    .map_err(|e| Error::Domain(format!("cannot create {}: {e}", p.display())))
                    .and_then(|f| report.render(cli.run.format, BufWriter::new(f))),
                None => report.render(cli.run.format, std::io::stdout().lock()),
            };
            match write {
                Ok(()) if report.ok => 0,
                Ok(()) => 1,
                Err(e) => fail(&e),
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if e.is_verification() {
        1
    } else {
        2
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    if cli.run.jobs > 0 {
        // a second initialization (e.g. in tests) keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.run.jobs).build_global();
    }
    match &cli.command {
        Command::Nf { order } => cmd_nf(*order),
        Command::Invariants { order, precision, samples } => cmd_invariants(*order, *precision, *samples),
        Command::Action { h, j2 } => cmd_action(*h, *j2),
        Command::Rotation { h, j2, abs } => cmd_rotation(*h, *j2, *abs),
        Command::Twist { r } => cmd_twist(r),
        Command::Pendulum { h, nome, complex, order, true_pendulum } => {
            cmd_pendulum(h, *nome, *complex, *order, *true_pendulum)
        }
        Command::Orbit { w, r, h, trace } => cmd_orbit(w, *r, *h, trace.as_deref(), cli.run.tol),
        Command::Verify { suite } => cmd_verify(suite, cli.run.seed),
        Command::Special { m, n, phi } => cmd_special(*m, *n, *phi),
    }
}

pub fn cmd_nf(order: u32) -> Result<Report> {
    if order == 0 {
        return Err(Error::Order("normal form order must be ≥ 1".into()));
    }
    let lie = lie_normalize(2 * order)?.relabel(["J1", "J2"]);
    let inv = birkhoff_by_inversion(2 * order)?.relabel(["J1", "J2"]);
    let equal = lie == inv;
    let verdict = if equal { "equal" } else { "DIFFERENT" };
    let pretty = format!("H (Lie)       = {}\nH (inversion) = {}\nverdict: {verdict}\n", lie.pretty_grouped(false), inv.pretty_grouped(false));
    let json = json!({
        "order": order,
        "lie": Series2Json::from(&lie),
        "inversion": Series2Json::from(&inv),
        "equal": equal,
    });
    let rows = lie.terms().map(|((a, b), c)| vec![a.to_string(), b.to_string(), c.to_string(), inv.coeff(*a, *b).to_string()]).collect();
    Ok(Report::new(json, pretty).with_table(&["a", "b", "lie", "inversion"], rows).failed_if(!equal))
}

/// Lower fit degrees leave a truncation error above the fit-quality threshold.
const MIN_FIT_DEGREE: u32 = 10;

pub fn cmd_invariants(order: u32, precision: u32, samples: usize) -> Result<Report> {
    let fit = fit_invariant_s(order.max(MIN_FIT_DEGREE), precision, samples)?;
    let published = published_coefficients();
    let header = ["a", "b", "value", "uncertainty", "exact", "source", "known", "known_diff"];
    let rows: Vec<Vec<String>> = fit
        .coefficients
        .iter()
        .filter(|c| c.exponents.0 + c.exponents.1 <= order)
        .map(|c| {
            let (a, b) = c.exponents;
            let known = published.get(&(a, b));
            vec![
                a.to_string(),
                b.to_string(),
                num(c.value),
                format!("{:.1e}", c.uncertainty),
                c.exact.to_string(),
                format!("{:?}", c.source).to_lowercase(),
                known.map_or(String::new(), |p| p.to_string()),
                known.map_or(String::new(), |p| format!("{:.1e}", (c.value - p.to_f64()).abs())),
            ]
        })
        .collect();
    let d = &fit.diagnostics;
    let pretty = format!(
        "S(j1, j2) = j1 ln 32 + Σ s_ab j1^a j2^b   (terms through degree {order}; fit degree {}, {} bits, {} samples)\nln 32 coefficient error {:.1e}; residual max {:.1e}, rms {:.1e}\n\n{}",
        d.order,
        d.precision,
        d.samples,
        d.ln32_error,
        d.residual_max,
        d.residual_rms,
        text_table(&header, &rows)
    );
    let mut json = serde_json::to_value(&fit).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(Value::Array(cs)) = json.get_mut("coefficients") {
        cs.retain(|c| c["exponents"][0].as_u64().unwrap_or(0) + c["exponents"][1].as_u64().unwrap_or(0) <= order as u64);
    }
    Ok(Report::new(json, pretty).with_table(&header, rows))
}

struct ActionRow {
    i1: f64,
    j1: Option<f64>,
    w: Option<f64>,
    t: Option<f64>,
    method: String,
}

fn action_row(em: EnergyMomentum) -> Result<ActionRow> {
    let i = action_i1(em)?;
    let critical = em.h == 0.0 && em.j2 == 0.0;
    let j1 = if critical { Some(0.0) } else { Some(action_j1_numeric(em)?.0.value) };
    let method = format!("{:?}", i.method);
    Ok(ActionRow { i1: i.value, j1, w: rotation_w_numeric(em).ok(), t: period_t(em).ok(), method })
}

pub fn cmd_action(h: f64, j2: f64) -> Result<Report> {
    let em = EnergyMomentum::new(h, j2);
    let r = action_row(em)?;
    let json = json!({
        "h": h, "j2": j2, "I1": r.i1, "two_pi_I1": 2.0 * PI * r.i1,
        "J1": opt(r.j1), "W": opt(r.w), "T": opt(r.t), "method": r.method,
    });
    let show = |x: Option<f64>| x.map_or("undefined (critical value)".to_string(), |v| format!("{v:.15}"));
    let pretty = format!(
        "(h, j2) = ({h}, {j2})\n2πI1 = {:.15}\nI1   = {:.15}\nJ1   = {}\nW    = {}\nT    = {}\nmethod: {}\n",
        2.0 * PI * r.i1,
        r.i1,
        show(r.j1),
        show(r.w),
        show(r.t),
        r.method
    );
    let row = vec![num(h), num(j2), num(r.i1), num(r.j1.unwrap_or(f64::NAN)), num(r.w.unwrap_or(f64::NAN)), num(r.t.unwrap_or(f64::NAN)), r.method];
    Ok(Report::new(json, pretty).with_table(&["h", "j2", "I1", "J1", "W", "T", "method"], vec![row]))
}

/// −∂I₁/∂j₂ by a central difference at fixed h.
pub fn rotation_by_difference(em: EnergyMomentum) -> Result<f64> {
    let d = 1e-5 * em.j2.abs().max(1e-3);
    let ip = action_i1(EnergyMomentum::new(em.h, em.j2 + d))?.value;
    let im = action_i1(EnergyMomentum::new(em.h, em.j2 - d))?.value;
    Ok(-(ip - im) / (2.0 * d))
}

pub fn cmd_rotation(h: f64, j2: f64, abs: bool) -> Result<Report> {
    let em = EnergyMomentum::new(h, j2);
    let f = |w: f64| if abs { w.abs() } else { w };
    let w = f(rotation_w_numeric(em)?);
    let fd = f(rotation_by_difference(em)?);
    let j1 = action_j1_numeric(em)?.0.value;
    let model = InvariantModel::published()?.rotation_w(j1, j2).ok().map(f);
    let json = json!({ "h": h, "j2": j2, "j1": j1, "W": w, "W_difference": fd, "W_model": opt(model), "even_convention": abs });
    let pretty = format!(
        "(h, j2) = ({h}, {j2}), j1 = {j1:.12}\nW (elliptic)     = {w:.15}\nW (−∂I1/∂j2)     = {fd:.15}\nW (model, deg 4) = {}\n",
        model.map_or("outside the model disk".into(), |m| format!("{m:.15}"))
    );
    let row = vec![num(h), num(j2), num(j1), num(w), num(fd), num(model.unwrap_or(f64::NAN))];
    Ok(Report::new(json, pretty).with_table(&["h", "j2", "j1", "W", "W_difference", "W_model"], vec![row]))
}

pub fn cmd_twist(radii: &[f64]) -> Result<Report> {
    let model = InvariantModel::published()?;
    let pts = radii.iter().map(|&r| w_star(&model, r)).collect::<Result<Vec<_>>>()?;
    let header = ["r", "s", "W", "W_star", "rel_diff"];
    let rows: Vec<Vec<String>> =
        pts.iter().map(|p| vec![num(p.r), num(p.s), num(p.w), num(p.w_star), num((p.w - p.w_star).abs() / p.w)]).collect();
    let json = serde_json::to_value(&pts).map_err(|e| Error::Parse(e.to_string()))?;
    let pretty = format!("twistless curve j1 = r sin s, j2 = r cos s\n{}", text_table(&header, &rows));
    Ok(Report::new(json, pretty).with_table(&header, rows))
}

pub fn cmd_pendulum(hs: &[f64], nome: bool, complex: bool, order: u32, true_pendulum: bool) -> Result<Report> {
    if nome || complex {
        let n = nome_from_invariant(&pendulum_invariant_published(), order)?;
        let mut json = serde_json::from_str::<Value>(&n.to_json()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut pretty = format!("q(l)  = {}\nl(q)  = {}\n1/q   = {}/l + {}\n", n.q_of_l, n.l_of_q, n.reciprocal.pole, n.reciprocal.regular);
        let mut rows: Vec<Vec<String>> =
            (1..=order).map(|k| vec![k.to_string(), n.q_of_l.coeff(k).to_string(), n.l_of_q.coeff(k).to_string()]).collect();
        if complex {
            let s = InvariantModel::published()?.s;
            let q = complex_nome_series(&s, order.min(4))?;
            let mut terms = Vec::new();
            pretty.push_str("q̂(l, l̄) coefficients (a, b): re + i im\n");
            for d in 1..=q.re.order() {
                for b in 0..=d {
                    let (re, im) = q.coeff(d - b, b);
                    if re != 0 || im != 0 {
                        pretty.push_str(&format!("  ({}, {}): {re} + i {im}\n", d - b, b));
                        terms.push(json!({ "a": d - b, "b": b, "re": re.to_string(), "im": im.to_string() }));
                    }
                }
            }
            json["complex_nome"] = Value::Array(terms);
            rows = Vec::new();
        }
        let report = Report::new(json, pretty);
        return Ok(if rows.is_empty() { report } else { report.with_table(&["k", "q_of_l", "l_of_q"], rows) });
    }
    if hs.is_empty() {
        return Err(Error::Domain("give --h values, --nome or --complex".into()));
    }
    let qs = hs
        .iter()
        .map(|&h| pendulum_quadruple(h).map(|q| if true_pendulum { q.true_pendulum() } else { q }))
        .collect::<Result<Vec<_>>>()?;
    let header = ["h", "I", "J", "T", "U", "IU-JT", "branch"];
    let rows: Vec<Vec<String>> = qs
        .iter()
        .map(|q| vec![num(q.h), num(q.i), num(q.j), num(q.t), num(q.u), num(q.legendre()), format!("{:?}", q.branch).to_lowercase()])
        .collect();
    let json = serde_json::to_value(&qs).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Report::new(json, text_table(&header, &rows)).with_table(&header, rows))
}

fn parse_ratio(w: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("rotation number {w:?} is not of the form p/q"));
    let (p, q) = w.split_once('/').ok_or_else(bad)?;
    let (p, q): (u32, u32) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
    if q == 0 {
        return Err(bad());
    }
    Ok((p, q))
}

fn orbit_json(o: &PeriodicOrbit) -> Value {
    json!({
        "target": format!("{}/{}", o.target.0, o.target.1),
        "s": opt(o.s),
        "r": opt(o.r),
        "h": o.h,
        "j2": o.j2,
        "h_refinement": o.h_refinement,
        "closure_error": o.closure_error,
        "reduced_period": opt(o.orbit.reduced_period),
        "W_integrated": opt(o.orbit.rotation_number),
    })
}

pub fn cmd_orbit(w: &str, r: f64, h: Option<f64>, trace: Option<&std::path::Path>, tol: f64) -> Result<Report> {
    let target = parse_ratio(w)?;
    let tol = tol.clamp(1e-13, 1e-6);
    let orbits = match h {
        Some(h) => periodic_orbits_at_energy(target, h, tol)?,
        None => vec![periodic_orbit_search(&InvariantModel::published()?, target, r, tol)?],
    };
    if let Some(path) = trace {
        for (i, o) in orbits.iter().enumerate() {
            let p = if orbits.len() == 1 { path.to_path_buf() } else { path.with_extension(format!("{}.csv", i + 1)) };
            let f = File::create(&p).map_err(|e| Error::Domain(format!("cannot create {}: {e}", p.display())))?;
            o.orbit.write_csv(BufWriter::new(f))?;
        }
    }
    let header = ["target", "s", "h", "j2", "closure_error"];
    let rows: Vec<Vec<String>> = orbits
        .iter()
        .map(|o| vec![format!("{}/{}", target.0, target.1), num(o.s.unwrap_or(f64::NAN)), num(o.h), num(o.j2), num(o.closure_error)])
        .collect();
    let json = if orbits.len() == 1 { orbit_json(&orbits[0]) } else { Value::Array(orbits.iter().map(orbit_json).collect()) };
    Ok(Report::new(json, text_table(&header, &rows)).with_table(&header, rows))
}

pub fn cmd_verify(suites: &[String], seed: u64) -> Result<Report> {
    let names: Vec<&str> = if suites.iter().any(|s| s == "all") { SUITES.to_vec() } else { suites.iter().map(String::as_str).collect() };
    let mut results = Vec::new();
    for name in names {
        results.push(run_suite(name, seed)?);
    }
    let all = results.iter().all(|r| r.pass);
    let header = ["suite", "result", "detail"];
    let rows: Vec<Vec<String>> =
        results.iter().map(|r| vec![r.name.clone(), if r.pass { "PASS" } else { "FAIL" }.into(), r.detail.clone()]).collect();
    let json = json!({ "pass": all, "suites": results });
    Ok(Report::new(json, text_table(&header, &rows)).with_table(&header, rows).failed_if(!all))
}

pub fn cmd_special(m: f64, n: f64, phi: f64) -> Result<Report> {
    let k = ellint_k(m)?;
    let e = ellint_e(m)?;
    let p = ellint_pi(n, m)?;
    let l = heuman_lambda0(phi, m)?;
    let json = json!({ "m": m, "n": n, "phi": phi, "K": k, "E": e, "Pi": p, "Lambda0": l });
    let pretty = format!("K(m)   = {k:.16}\nE(m)   = {e:.16}\nΠ(n|m) = {p:.16}\nΛ0(φ|m) = {l:.16}\n");
    let row = [m, n, phi, k, e, p, l].map(num).to_vec();
    Ok(Report::new(json, pretty).with_table(&["m", "n", "phi", "K", "E", "Pi", "Lambda0"], vec![row]))
}
