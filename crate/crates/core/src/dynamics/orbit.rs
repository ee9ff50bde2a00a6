use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use super::integrator::{dopri_step, pack, unpack, Dopri, Y};
use super::state::PhaseState;
use crate::actions::{period_t, rotation_w_numeric, InvariantModel};
use crate::elliptic::{cubic_roots, EnergyMomentum};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrbitSample {
    pub t: f64,
    pub state: PhaseState,
    /// accumulated azimuth
    pub phi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    pub samples: Vec<OrbitSample>,
    /// (t, φ) at the θ-minima, i.e. the maxima of z
    pub turning: Vec<(f64, f64)>,
    pub reduced_period: Option<f64>,
    pub winding: Option<f64>,
    pub rotation_number: Option<f64>,
    pub stereographic: Vec<[f64; 2]>,
    pub energy_drift: f64,
    pub momentum_drift: f64,
    pub constraint_residual: f64,
}

impl OrbitRecord {
    pub fn last(&self) -> &OrbitSample {
        self.samples.last().expect("orbit has at least the initial sample")
    }

    /// CSV with header t,x,y,z,px,py,pz,u,v.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Integration(format!("csv output: {e}"));
        w.write_record(["t", "x", "y", "z", "px", "py", "pz", "u", "v"]).map_err(io)?;
        for (s, uv) in self.samples.iter().zip(&self.stereographic) {
            let (r, p) = (s.state.r, s.state.p);
            let row = [s.t, r[0], r[1], r[2], p[0], p[1], p[2], uv[0], uv[1]];
            w.write_record(row.iter().map(|x| format!("{x:.17e}"))).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Integration(format!("csv output: {e}")))?;
        Ok(())
    }
}

/// Locates p_z = 0 inside a step of size h from y by the secant method on single steps.
fn refine_turning(y: &Y, h: f64) -> (f64, Y) {
    let (mut a, mut b) = (0.0, h);
    let (mut fa, mut fb) = (y[5], dopri_step(y, h).0[5]);
    let mut best = (b, dopri_step(y, b).0);
    for _ in 0..60 {
        let t = if fb != fa { b - fb * (b - a) / (fb - fa) } else { 0.5 * (a + b) };
        let t = if t <= a.min(b) || t >= a.max(b) { 0.5 * (a + b) } else { t };
        let yt = dopri_step(y, t).0;
        best = (t, yt);
        if yt[5].abs() < 1e-15 || (b - a).abs() < 1e-15 {
            break;
        }
        if yt[5].signum() == fa.signum() {
            a = t;
            fa = yt[5];
        } else {
            b = t;
            fb = yt[5];
        }
    }
    let (s, phi) = unpack(&best.1);
    (best.0, pack(&s.project(), phi))
}

/// Integrates from s₀ over [0, t_end] and measures the reduced period and the winding of the
/// azimuth between the first two θ-minima. A start with p_z = 0 and z decreasing counts as one.
pub fn integrate(s0: PhaseState, t_end: f64, tol: f64) -> Result<OrbitRecord> {
    let mut dp = Dopri::new(tol)?;
    let s0 = s0.project();
    let (h0, j0) = (s0.energy(), s0.j2());
    let mut y = pack(&s0, 0.0);
    let mut t = 0.0;
    let mut samples = vec![OrbitSample { t, state: s0, phi: 0.0 }];
    let mut turning = Vec::new();
    if s0.p[2].abs() < 1e-14 {
        turning.push((0.0, 0.0));
    }
    let (mut de, mut dj, mut dc): (f64, f64, f64) = (0.0, 0.0, 0.0);
    while t < t_end {
        let (y1, h) = dp.step(&y, t_end - t)?;
        if y[5] > 0.0 && y1[5] <= 0.0 {
            let (tau, yt) = refine_turning(&y, h);
            turning.push((t + tau, yt[6]));
        }
        y = y1;
        t = if t_end - t - h < 1e-14 * t_end { t_end } else { t + h };
        let (s, phi) = unpack(&y);
        de = de.max((s.energy() - h0).abs());
        dj = dj.max((s.j2() - j0).abs());
        let (c1, c2) = s.constraint_residuals();
        dc = dc.max(c1.max(c2));
        samples.push(OrbitSample { t, state: s, phi });
    }
    let (reduced_period, winding) = match turning.as_slice() {
        [a, b, ..] => (Some(b.0 - a.0), Some(b.1 - a.1)),
        _ => (None, None),
    };
    let stereographic = samples.iter().map(|s| s.state.stereographic()).collect();
    Ok(OrbitRecord {
        samples,
        turning,
        reduced_period,
        winding,
        rotation_number: winding.map(|w| w / (2.0 * PI)),
        stereographic,
        energy_drift: de,
        momentum_drift: dj,
        constraint_residual: dc,
    })
}

/// Rotation number from direct integration over one reduced period.
pub fn rotation_number_by_integration(em: EnergyMomentum, tol: f64) -> Result<f64> {
    let s0 = PhaseState::at_upper_turning_point(em)?;
    let t = period_t(em)?;
    let rec = integrate(s0, 1.05 * t, tol)?;
    rec.rotation_number.ok_or_else(|| Error::Integration("no complete reduced period within the integration window".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicOrbit {
    pub target: (u32, u32),
    /// polar angle on the circle, j₁ = r sin s, j₂ = r cos s (model solution)
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub h: f64,
    pub j2: f64,
    /// energy correction at fixed j₂ so that the elliptic rotation number hits the target exactly
    pub h_refinement: f64,
    pub closure_error: f64,
    #[serde(skip)]
    pub orbit: OrbitRecord,
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    if fa.signum() == f(b)?.signum() {
        return Err(Error::Root(format!("no sign change on [{a}, {b}]")));
    }
    while (b - a).abs() > 1e-14 * (1.0 + a.abs()) {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Integrates q reduced periods from the upper turning point and measures the return distance.
fn close_orbit(target: (u32, u32), em: EnergyMomentum, tol: f64) -> Result<(OrbitRecord, f64)> {
    let s0 = PhaseState::at_upper_turning_point(em)?;
    let t = period_t(em)?;
    let rec = integrate(s0, target.1 as f64 * t, tol)?;
    let end = rec.last().state;
    let closure = (0..3).map(|i| (end.r[i] - s0.r[i]).abs().max((end.p[i] - s0.p[i]).abs())).fold(0.0, f64::max);
    if closure >= 1e-6 {
        return Err(Error::Refinement(format!("orbit W = {}/{} does not close: |Δ| = {closure:e}", target.0, target.1)));
    }
    Ok((rec, closure))
}

/// Solves W_model(r sin s, r cos s) = p/q on the circle of radius r, then adjusts h at fixed
/// j₂ so that the elliptic rotation number equals p/q to machine precision, and integrates q
/// reduced periods to verify closure.
pub fn periodic_orbit_search(model: &InvariantModel, target: (u32, u32), r: f64, tol: f64) -> Result<PeriodicOrbit> {
    let (p, q) = target;
    let w = p as f64 / q as f64;
    if q == 0 || !(w > 0.5 && w < 1.0) {
        return Err(Error::Range(format!("rotation number {p}/{q} outside the attainable range (1/2, 1) on the circle")));
    }
    let edge = 0.5 * PI - 1e-9;
    let s = bisect(|s| Ok(model.rotation_w(r * s.sin(), r * s.cos())? - w), -edge, edge)?;
    let (j1, j2) = (r * s.sin(), r * s.cos());
    let h_model = model.energy(j1, j2);
    // W is monotone in h at fixed j₂, unlike in j₂ at fixed h near the twistless curve
    let g = |h: f64| Ok(rotation_w_numeric(EnergyMomentum::new(h, j2))? - w);
    let h = refine(g, h_model)?;
    let em = EnergyMomentum::new(h, j2);
    let (orbit, closure_error) = close_orbit(target, em, tol)?;
    Ok(PeriodicOrbit { target, s: Some(s), r: Some(r), h, j2, h_refinement: h - h_model, closure_error, orbit })
}

/// Brackets the root of g near x₀ by widening a window (points outside the domain of g are
/// skipped), then bisects.
fn refine(g: impl Fn(f64) -> Result<f64>, x0: f64) -> Result<f64> {
    let g0 = g(x0)?;
    if g0 == 0.0 {
        return Ok(x0);
    }
    let mut d = 1e-4 * x0.abs().max(1e-2);
    for _ in 0..30 {
        for x in [x0 - d, x0 + d] {
            if matches!(g(x), Ok(v) if v.signum() != g0.signum()) {
                return bisect(&g, x0.min(x), x0.max(x));
            }
        }
        d *= 2.0;
    }
    Err(Error::Refinement(format!("no rotation-number bracket near {x0}")))
}

/// Largest |j₂| with real motion at energy h: max over ζ ∈ [−1, 1] of √(2(1−ζ²)(h+1−ζ)).
pub fn j2_max(h: f64) -> f64 {
    // stationary point of (1−ζ²)(h+1−ζ): 3ζ² − 2(h+1)ζ − 1 = 0, lower root
    let a = h + 1.0;
    let z = (a - (a * a + 3.0).sqrt()) / 3.0;
    (2.0 * (1.0 - z * z) * (a - z)).sqrt()
}

/// All orbits with rotation number p/q on the energy level h (j₂ > 0), by scanning j₂.
pub fn periodic_orbits_at_energy(target: (u32, u32), h: f64, tol: f64) -> Result<Vec<PeriodicOrbit>> {
    let w = target.0 as f64 / target.1 as f64;
    let top = j2_max(h) * (1.0 - 1e-9);
    let n = 400;
    let f = |j2: f64| Ok(rotation_w_numeric(EnergyMomentum::new(h, j2))? - w);
    let grid: Vec<f64> = (1..=n).map(|i| top * i as f64 / n as f64).collect();
    let vals = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..n - 1 {
        if vals[i].signum() != vals[i + 1].signum() {
            let j2 = bisect(f, grid[i], grid[i + 1])?;
            let em = EnergyMomentum::new(h, j2);
            let (orbit, closure_error) = close_orbit(target, em, tol)?;
            out.push(PeriodicOrbit { target, s: None, r: None, h, j2, h_refinement: 0.0, closure_error, orbit });
        }
    }
    if out.is_empty() {
        return Err(Error::Range(format!("no orbit with W = {}/{} at h = {h}", target.0, target.1)));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GeometryReport {
    pub theta_min: f64,
    pub theta_max: f64,
    /// leading order of θ_min: √(r(1 − sin s))
    pub theta_min_leading: f64,
    /// stereographic radius of the excluded disk around the upward equilibrium, tan(θ_min/2)
    pub excluded_radius: f64,
    pub excluded_radius_leading: f64,
    /// stereographic radius of the outer boundary, tan(θ_max/2)
    pub outer_size: f64,
    pub outer_size_leading: f64,
    pub north_pole_accessible: bool,
}

/// Extent of the orbit on the sphere from the roots ζ₀, ζ₁ and the leading polar formulas.
pub fn geometry_report(em: EnergyMomentum, r: f64, s: f64) -> Result<GeometryReport> {
    let d = cubic_roots(em)?;
    let theta_min = d.zeta1.clamp(-1.0, 1.0).acos();
    let theta_max = d.zeta0.clamp(-1.0, 1.0).acos();
    let lead = (r * (1.0 - s.sin())).max(0.0).sqrt();
    Ok(GeometryReport {
        theta_min,
        theta_max,
        theta_min_leading: lead,
        excluded_radius: (0.5 * theta_min).tan(),
        excluded_radius_leading: 0.5 * lead,
        outer_size: (0.5 * theta_max).tan(),
        outer_size_leading: 4.0 / (r * s.cos().abs()),
        north_pole_accessible: d.zeta1 >= 1.0,
    })
}
