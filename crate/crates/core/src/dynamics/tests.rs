use std::f64::consts::PI;

use super::*;
use crate::actions::{period_t, rotation_w_numeric, InvariantModel};
use crate::elliptic::EnergyMomentum;
use crate::Error;

fn unit(v: Vec3) -> Vec3 {
    let n = dot(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// deterministic pseudo-random states on T*S²
fn states(n: usize) -> Vec<PhaseState> {
    let mut x = 0.5f64;
    let mut next = || {
        x = (x * 9301.0 + 0.2113).fract();
        2.0 * x - 1.0
    };
    (0..n)
        .map(|_| {
            let r = unit([next(), next(), next()]);
            let v = [next(), next(), next()];
            let c = dot(r, v);
            PhaseState::new(r, [v[0] - c * r[0], v[1] - c * r[1], v[2] - c * r[2]])
        })
        .collect()
}

#[test]
fn equilibria_have_zero_field() {
    for z in [1.0, -1.0] {
        let (dr, dp) = vector_field(&PhaseState::new([0.0, 0.0, z], [0.0; 3]));
        assert!(dr.iter().chain(&dp).all(|c| c.abs() < 1e-15));
    }
}

#[test]
fn field_conserves_energy_and_momentum() {
    for s in states(50) {
        let (dr, dp) = vector_field(&s);
        let l = s.angular_momentum();
        // ∇_r H = −p×L… evaluated by central differences
        let e = 1e-6;
        let mut dh = 0.0;
        let mut dj = 0.0;
        for i in 0..3 {
            let (mut a, mut b) = (s, s);
            a.r[i] += e;
            b.r[i] -= e;
            dh += dr[i] * (a.energy() - b.energy()) / (2.0 * e);
            dj += dr[i] * (a.j2() - b.j2()) / (2.0 * e);
            let (mut a, mut b) = (s, s);
            a.p[i] += e;
            b.p[i] -= e;
            dh += dp[i] * (a.energy() - b.energy()) / (2.0 * e);
            dj += dp[i] * (a.j2() - b.j2()) / (2.0 * e);
        }
        assert!(dh.abs() < 1e-8 * (1.0 + dot(l, l)), "dH/dt = {dh}");
        assert!(dj.abs() < 1e-8 * (1.0 + dot(l, l)), "dj2/dt = {dj}");
        // the field is tangent to the constraint set
        assert!(dot(s.r, dr).abs() < 1e-14);
        assert!((dot(dr, s.p) + dot(s.r, dp)).abs() < 1e-13);
    }
}

#[test]
fn tolerance_range_is_enforced() {
    assert!(matches!(Dopri::new(1e-14), Err(Error::Integration(_))));
    assert!(matches!(Dopri::new(1e-5), Err(Error::Integration(_))));
}

#[test]
fn drift_is_bounded_over_many_periods() {
    let em = EnergyMomentum::new(0.1, 0.1);
    let t = period_t(em).unwrap();
    let tol = 1e-10;
    let t_end = 100.0 * t;
    let rec = integrate(PhaseState::at_upper_turning_point(em).unwrap(), t_end, tol).unwrap();
    assert!(rec.energy_drift <= 10.0 * tol * t_end, "{}", rec.energy_drift);
    assert!(rec.momentum_drift <= 10.0 * tol * t_end, "{}", rec.momentum_drift);
    assert!(rec.constraint_residual < 1e-13);
    assert!(rec.turning.len() >= 100);
    assert!((rec.last().t - t_end).abs() < 1e-12 * t_end);
}

#[test]
fn small_oscillation_has_period_two_pi() {
    for a in [0.02f64, 0.05] {
        let s0 = PhaseState::new([a.sin(), 0.0, -a.cos()], [0.0; 3]);
        let rec = integrate(s0, 8.0, 1e-12).unwrap();
        // a planar swing reaches its highest z twice per period
        let half = rec.reduced_period.unwrap();
        let exact = 2.0 * PI * (1.0 + a * a / 16.0);
        assert!((2.0 * half - exact).abs() < 1e-3 * a * a, "a = {a}: {}", 2.0 * half);
    }
}

#[test]
fn reduced_period_matches_elliptic_formula() {
    let em = EnergyMomentum::new(0.1, 0.1);
    let rec = integrate(PhaseState::at_upper_turning_point(em).unwrap(), 12.0, 1e-12).unwrap();
    assert!((rec.reduced_period.unwrap() - period_t(em).unwrap()).abs() < 1e-6);
}

#[test]
fn integrated_rotation_number_matches_elliptic_on_quarter_disk() {
    for i in 0..5 {
        for k in 0..5 {
            let rad = 0.5 * (i as f64 + 1.0) / 5.0;
            let t = (k as f64 + 0.5) * PI / 10.0 - PI / 2.0;
            let (h, j2) = (rad * t.sin(), rad * t.cos());
            let em = EnergyMomentum::new(h, j2);
            let w = rotation_number_by_integration(em, 1e-12).unwrap();
            assert!((w - rotation_w_numeric(em).unwrap()).abs() < 1e-4, "({h}, {j2})");
        }
    }
}

#[test]
fn time_reversal() {
    let tol = 1e-11;
    let em = EnergyMomentum::new(-0.2, 0.3);
    let s0 = PhaseState::at_upper_turning_point(em).unwrap();
    let fwd = integrate(s0, 7.3, tol).unwrap().last().state;
    let back = integrate(PhaseState::new(fwd.r, fwd.p.map(|c| -c)), 7.3, tol).unwrap().last().state;
    for i in 0..3 {
        assert!((back.r[i] - s0.r[i]).abs() < 10.0 * tol);
        assert!((back.p[i] + s0.p[i]).abs() < 10.0 * tol);
    }
}

#[test]
fn orbits_on_the_circle() {
    let model = InvariantModel::published().unwrap();
    let targets = [(4, 7), (3, 5), (5, 8), (2, 3), (5, 7), (3, 4), (4, 5), (7, 8)];
    let mut last_s = -PI;
    for t in targets {
        let o = periodic_orbit_search(&model, t, 0.75, 1e-12).unwrap();
        assert!(o.closure_error < 1e-6);
        let s = o.s.unwrap();
        assert!(s > last_s, "s increases with W");
        last_s = s;
        let w = rotation_w_numeric(EnergyMomentum::new(o.h, o.j2)).unwrap();
        assert!((w - t.0 as f64 / t.1 as f64).abs() < 1e-12);
        assert!(o.h_refinement.abs() < 1e-2);
        assert_eq!(o.orbit.stereographic.len(), o.orbit.samples.len());
    }
    for t in [(1, 2), (1, 1), (1, 3), (3, 2)] {
        assert!(matches!(periodic_orbit_search(&model, t, 0.75, 1e-12), Err(Error::Range(_))));
    }
    // W near 1/2 sits near the s = −π/2 end of the circle
    let o = periodic_orbit_search(&model, (51, 100), 0.75, 1e-12).unwrap();
    assert!(o.s.unwrap() < -1.4);
}

#[test]
fn two_orbits_with_the_same_rotation_number() {
    let v = periodic_orbits_at_energy((5, 6), 0.05, 1e-12).unwrap();
    assert_eq!(v.len(), 2);
    assert!((v[0].j2 - v[1].j2).abs() > 0.1);
    for o in &v {
        assert!(o.closure_error < 1e-6);
        let w = o.orbit.rotation_number.unwrap();
        assert!((w - 5.0 / 6.0).abs() < 1e-4);
    }
}

#[test]
fn geometry() {
    let model = InvariantModel::published().unwrap();
    let r = 0.75;
    let g = geometry_report(EnergyMomentum::new(model.energy(0.0, r), r), r, 0.0).unwrap();
    assert!((g.excluded_radius - r.sqrt() / 2.0).abs() < 0.2 * r.sqrt() / 2.0);
    assert!(g.theta_min < g.theta_max && !g.north_pole_accessible);
    // j₂ = 0 above the separatrix: the orbit passes through the north pole
    let g = geometry_report(EnergyMomentum::new(model.energy(r, 0.0), 0.0), r, PI / 2.0).unwrap();
    assert!(g.theta_min.abs() < 1e-7 && g.theta_min_leading.abs() < 1e-7);
    assert!(g.north_pole_accessible);
    // j₂ = 0 below: the north pole is out of reach
    let g = geometry_report(EnergyMomentum::new(model.energy(-r, 0.0), 0.0), r, -PI / 2.0).unwrap();
    assert!(!g.north_pole_accessible && g.theta_min > 0.5);
}
