//! Double-exponential (tanh-sinh) quadrature in f64 and MPFR precision, and
//! Gauss–Legendre rules.

use std::f64::consts::FRAC_PI_2;

use rug::float::Constant;
use rug::Float;

#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub levels: u32,
}

/// ∫ₐᵇ f. The integrand receives (x, x − a, b − x) with both distances accurate
/// near the endpoints, so inverse-square-root singularities can be evaluated stably.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Quad {
    let half = 0.5 * (b - a);
    let tmax = 4.0;
    let mut eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        let comp = half / (u.abs().exp() * cu);
        if w * half < 1e-300 || comp <= 0.0 {
            return 0.0;
        }
        let (x, da, db) = if t >= 0.0 { (b - comp, 2.0 * half - comp, comp) } else { (a + comp, comp, 2.0 * half - comp) };
        let v = f(x, da, db);
        if v.is_finite() {
            w * v
        } else {
            0.0
        }
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let n0 = (tmax / h) as i64;
    for k in 1..=n0 {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
    }
    let mut prev = sum * h;
    let mut error = f64::INFINITY;
    for level in 1..=12 {
        h *= 0.5;
        let n = (tmax / h) as i64;
        let mut k = 1;
        while k <= n {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let cur = sum * h;
        error = (cur - prev).abs();
        if level >= 3 && error <= tol * cur.abs().max(1e-300) {
            return Quad { value: half * cur, error: half.abs() * error, levels: level };
        }
        prev = cur;
    }
    Quad { value: half * prev, error: half.abs() * error, levels: 12 }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Tanh-sinh nodes at `prec` bits, computed once and reused across integrals.
/// Each level stores (complement 1 − |x|, weight) for the new abscissae t = ±kh, k odd.
pub struct TanhSinhRule {
    prec: u32,
    levels: Vec<Vec<(Float, Float)>>,
    h0: f64,
}

impl TanhSinhRule {
    pub fn new(prec: u32, max_level: u32) -> Self {
        let wp = prec + 32;
        let pi_2 = Float::with_val(wp, Constant::Pi) / 2u32;
        // truncate where the complement falls below 2^-(prec+64)
        let umax = (prec as f64 + 64.0) * std::f64::consts::LN_2 / 2.0;
        let tmax = (umax / FRAC_PI_2).asinh() + 0.1;
        let h0 = 0.5;
        let node = |t: f64| -> (Float, Float) {
            let tf = Float::with_val(wp, t);
            let u = Float::with_val(wp, tf.sinh_ref()) * &pi_2;
            let cu = Float::with_val(wp, u.cosh_ref());
            let w = Float::with_val(wp, tf.cosh_ref()) * &pi_2 / Float::with_val(wp, cu.square_ref());
            let eu = Float::with_val(wp, u.abs_ref()).exp();
            (Float::with_val(wp, 1) / (eu * cu), w)
        };
        let mut levels = Vec::new();
        let n0 = (tmax / h0) as i64;
        levels.push((0..=n0).map(|k| node(k as f64 * h0)).collect());
        let mut h = h0;
        for _ in 1..=max_level {
            h *= 0.5;
            let n = (tmax / h) as i64;
            levels.push((1..=n).step_by(2).map(|k| node(k as f64 * h)).collect());
        }
        TanhSinhRule { prec, levels, h0 }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// ∫ₐᵇ f with the integrand receiving (x, x − a, b − x); returns (value, error estimate).
    pub fn integrate<F>(&self, f: F, a: &Float, b: &Float) -> (Float, Float)
    where
        F: Fn(&Float, &Float, &Float) -> Float,
    {
        let wp = self.prec + 32;
        let half = Float::with_val(wp, b - a) / 2u32;
        let full = Float::with_val(wp, b - a);
        let eval = |comp: &Float, w: &Float, positive: bool| -> Float {
            let db = Float::with_val(wp, &half * comp);
            if db.is_zero() {
                return Float::new(wp);
            }
            let da = Float::with_val(wp, &full - &db);
            let v = if positive {
                let x = Float::with_val(wp, b - &db);
                f(&x, &da, &db)
            } else {
                let x = Float::with_val(wp, a + &db);
                f(&x, &db, &da)
            };
            if v.is_finite() {
                v * w
            } else {
                Float::new(wp)
            }
        };
        let mut sum = Float::new(wp);
        for (k, (c, w)) in self.levels[0].iter().enumerate() {
            sum += eval(c, w, true);
            if k > 0 {
                sum += eval(c, w, false);
            }
        }
        let mut h = self.h0;
        let mut prev = Float::with_val(wp, &sum * h);
        let target = Float::with_val(wp, 1) >> (self.prec as i32);
        let mut err = Float::with_val(wp, rug::float::Special::Infinity);
        for (level, nodes) in self.levels.iter().enumerate().skip(1) {
            h *= 0.5;
            for (c, w) in nodes {
                sum += eval(c, w, true);
                sum += eval(c, w, false);
            }
            let cur = Float::with_val(wp, &sum * h);
            err = Float::with_val(wp, &cur - &prev).abs();
            let scale = Float::with_val(wp, cur.abs_ref()).max(&Float::with_val(wp, 1e-30));
            let rel = Float::with_val(wp, &err / &scale);
            prev = cur;
            // the error after a level is roughly the square of the change it produced
            if level >= 3 && Float::with_val(wp, rel.square_ref()) * 1e4 < target {
                err = Float::with_val(wp, rel.square_ref()) * scale;
                break;
            }
        }
        let value = Float::with_val(self.prec, &prev * &half);
        let error = Float::with_val(self.prec, err * half.abs());
        (value, error)
    }
}

/// Tanh-sinh at `prec` bits on [a, b]; the integrand receives (x, x − a, b − x).
pub fn tanh_sinh_float<F>(f: F, a: &Float, b: &Float, prec: u32) -> (Float, Float)
where
    F: Fn(&Float, &Float, &Float) -> Float,
{
    TanhSinhRule::new(prec, 12).integrate(f, a, b)
}
