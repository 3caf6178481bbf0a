//! Ball solutions of `-Δh = h^q` through one initial-value problem.
//!
//! `w'' + (n-1)w'/r + w^q = 0`, `w(0) = 1`, `w'(0) = 0` is integrated to its
//! first zero `ρ₀`. Since `t ↦ t^q` is homogeneous, `h(r) = λ^{-2/(1-q)} w(λr)`
//! with `λ = ρ₀/R` solves the Dirichlet problem on `B_R`. Every radial
//! function here is stored as `a·w(λr)` over shared samples of `w`.

mod ode;

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Float;

use crate::domain::{schwarz_radius, unit_ball_volume};
use crate::error::{Error, Result};
use crate::rearrange::DecreasingProfile;

use ode::LaneEmden;

/// Intervals of the uniform sample grid on `[0, ρ₀]`.
pub const SAMPLE_INTERVALS: usize = 8192;
/// Relative allowance when comparing a grid `S_q(Ω)` with `S_q(Ω*)`.
pub const FABER_KRAHN_SLACK: f64 = 0.03;

const SERIES_RADIUS: f64 = 1e-3;
const ZERO_TOL: f64 = 1e-12;
const RADIUS_CAP: f64 = 1e3;

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("dimension must be at least 2"));
    }
    Ok(())
}

fn check_open_exponent(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfBand(q))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("radius must be positive"))
    }
}

/// `σ₁ = (2(1+q)k + (1-q²)n) / (n + 2 - (n-2)q)`.
pub fn sigma1(q: f64, k: f64, n: usize) -> Result<f64> {
    check_open_exponent(q)?;
    check_dimension(n)?;
    if !(k >= q + 1.0) {
        return Err(Error::InvalidArgument("k must be at least q + 1"));
    }
    let n = n as f64;
    Ok((2.0 * (1.0 + q) * k + (1.0 - q * q) * n) / (n + 2.0 - (n - 2.0) * q))
}

/// `σ₂ = 2(1+q) / (n + 2 - (n-2)q)`.
pub fn sigma2(q: f64, n: usize) -> Result<f64> {
    check_open_exponent(q)?;
    check_dimension(n)?;
    let n = n as f64;
    Ok(2.0 * (1.0 + q) / (n + 2.0 - (n - 2.0) * q))
}

/// `σ₃ = (q+1) / (n + 2 - (n-2)q)`.
pub fn sigma3(q: f64, n: usize) -> Result<f64> {
    check_open_exponent(q)?;
    check_dimension(n)?;
    let n = n as f64;
    Ok((q + 1.0) / (n + 2.0 - (n - 2.0) * q))
}

/// `max` of the torsion function of `B_R`: `R²/(2n)`.
pub fn ball_torsion_max(n: usize, radius: f64) -> Result<f64> {
    check_dimension(n)?;
    check_radius(radius)?;
    Ok(radius * radius / (2.0 * n as f64))
}

/// `[|Ω| / (ω_n (2n)^{n/2})]^{2/((1-q)n)}`, an upper bound for `max u`.
pub fn volume_max_bound(volume: f64, n: usize, q: f64) -> Result<f64> {
    crate::check_exponent(q)?;
    check_dimension(n)?;
    if !(volume.is_finite() && volume > 0.0) {
        return Err(Error::InvalidArgument("volume must be positive"));
    }
    let nf = n as f64;
    let omega = unit_ball_volume(n)?;
    Ok((volume / (omega * (2.0 * nf).powf(nf / 2.0))).powf(2.0 / ((1.0 - q) * nf)))
}

/// `r_* = (S_q(Ω*)/S_q(Ω))^{σ₃} R*`, the ball radius with `S_q(B_{r_*}) = S_q(Ω)`.
///
/// A ratio above 1 within [`FABER_KRAHN_SLACK`] is treated as 1.
pub fn chiti_radius(sq_star: f64, sq_omega: f64, q: f64, n: usize, r_star: f64) -> Result<f64> {
    check_radius(r_star)?;
    if !(sq_star > 0.0 && sq_omega > 0.0) {
        return Err(Error::InvalidArgument("S_q values must be positive"));
    }
    if sq_omega < sq_star * (1.0 - FABER_KRAHN_SLACK) {
        return Err(Error::FaberKrahnViolation { sq_star, sq_omega });
    }
    let ratio = (sq_star / sq_omega).min(1.0);
    Ok(ratio.powf(sigma3(q, n)?) * r_star)
}

/// Samples of `w` and `w'` on `[0, ρ₀]`, shared by all rescalings.
#[derive(Debug)]
struct Base {
    n: usize,
    q: f64,
    rho0: f64,
    w: Vec<f64>,
    dw: Vec<f64>,
    /// `∫₀^{ρ₀} w'² nω_n t^{n-1} dt`.
    gradient_mass: f64,
}

fn simpson(values: &[f64], dx: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n % 2 == 0);
    let mut s = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * dx / 3.0
}

impl Base {
    fn solve(n: usize, q: f64) -> Result<Base> {
        let sys = LaneEmden { n: n as f64, q };
        let start = sys.series(SERIES_RADIUS);
        let rho0 = sys.first_zero(SERIES_RADIUS, start, RADIUS_CAP, ZERO_TOL)?;
        let m = SAMPLE_INTERVALS;
        let dt = rho0 / m as f64;
        let mut w = Vec::with_capacity(m + 1);
        let mut dw = Vec::with_capacity(m + 1);
        let mut r = SERIES_RADIUS;
        let mut y = start;
        let mut h = SERIES_RADIUS;
        for i in 0..=m {
            let t = i as f64 * dt;
            if t <= SERIES_RADIUS {
                let s = sys.series(t);
                w.push(s[0]);
                dw.push(s[1]);
                continue;
            }
            y = sys.integrate(r, y, t, &mut h)?;
            r = t;
            w.push(if i == m { 0.0 } else { y[0] });
            dw.push(y[1]);
        }
        if w[..m].iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Ode("profile vanished before its first zero"));
        }
        let mut base = Base { n, q, rho0, w, dw, gradient_mass: 0.0 };
        let grads: Vec<f64> = base.dw.iter().map(|d| d * d).collect();
        base.gradient_mass = base.radial_integral(&grads);
        Ok(base)
    }

    fn dt(&self) -> f64 {
        self.rho0 / SAMPLE_INTERVALS as f64
    }

    /// `∫₀^{ρ₀} f(t) nω_n t^{n-1} dt` for samples `f`.
    fn radial_integral(&self, f: &[f64]) -> f64 {
        let omega = unit_ball_volume(self.n).unwrap_or(f64::NAN);
        let dt = self.dt();
        let weighted: Vec<f64> = f
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.n as f64 * omega * (i as f64 * dt).powi(self.n as i32 - 1))
            .collect();
        simpson(&weighted, dt)
    }

    fn power_mass(&self, p: f64) -> f64 {
        let f: Vec<f64> = self.w.iter().map(|v| v.max(0.0).powf(p)).collect();
        self.radial_integral(&f)
    }

    /// Cubic Hermite interpolation of `(w, w')` at `t`.
    fn eval(&self, t: f64) -> (f64, f64) {
        if t >= self.rho0 {
            return (0.0, 0.0);
        }
        let t = t.max(0.0);
        let dt = self.dt();
        let i = ((t / dt) as usize).min(SAMPLE_INTERVALS - 1);
        let s = t / dt - i as f64;
        let (y0, y1) = (self.w[i], self.w[i + 1]);
        let (m0, m1) = (self.dw[i] * dt, self.dw[i + 1] * dt);
        let (s2, s3) = (s * s, s * s * s);
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        let d = ((6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * m0 + (-6.0 * s2 + 6.0 * s) * y1 + (3.0 * s2 - 2.0 * s) * m1) / dt;
        (v, d)
    }
}

/// A radial function `a·w(λr)` on `B_R`, `R = ρ₀/λ`.
///
/// Built by [`solve_ball_sublinear`] it is the solution `h` of `-Δh = h^q`;
/// after [`normalized`](Self::normalized) or [`rescale_minimizer`] it is a
/// minimizer with unit `L^{q+1}` norm, solving `-Δz = S_q z^q`.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    base: Arc<Base>,
    amplitude: f64,
    lambda: f64,
}

/// Solves `-Δh = h^q` on `B_R ⊂ ℝⁿ`, `q` in the guard band.
pub fn solve_ball_sublinear(n: usize, radius: f64, q: f64) -> Result<RadialSolution> {
    crate::check_exponent(q)?;
    solve_ball_unguarded(n, radius, q)
}

/// As [`solve_ball_sublinear`] for any `q ∈ [0, 1)`. At `q = 0` this is the
/// torsion function `(R² - r²)/(2n)`.
pub fn solve_ball_unguarded(n: usize, radius: f64, q: f64) -> Result<RadialSolution> {
    check_dimension(n)?;
    check_radius(radius)?;
    if !(q.is_finite() && (0.0..1.0).contains(&q)) {
        return Err(Error::ExponentOutOfBand(q));
    }
    let base = Base::solve(n, q)?;
    let lambda = base.rho0 / radius;
    let amplitude = lambda.powf(-2.0 / (1.0 - q));
    Ok(RadialSolution { base: Arc::new(base), amplitude, lambda })
}

impl RadialSolution {
    pub fn dimension(&self) -> usize {
        self.base.n
    }

    pub fn q(&self) -> f64 {
        self.base.q
    }

    pub fn radius(&self) -> f64 {
        self.base.rho0 / self.lambda
    }

    /// Measure of the supporting ball.
    pub fn ball_volume(&self) -> f64 {
        unit_ball_volume(self.base.n).unwrap_or(f64::NAN) * self.radius().powi(self.base.n as i32)
    }

    /// Value at the origin.
    pub fn max_value(&self) -> f64 {
        self.amplitude
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.amplitude * self.base.eval(self.lambda * r.abs()).0
    }

    /// Radial derivative.
    pub fn deriv(&self, r: f64) -> f64 {
        self.amplitude * self.lambda * self.base.eval(self.lambda * r.abs()).1
    }

    /// `∫_{B_R} f^p`.
    pub fn integral_power(&self, p: f64) -> f64 {
        let n = self.base.n as i32;
        self.amplitude.powf(p) * self.lambda.powi(-n) * self.base.power_mass(p)
    }

    /// `‖f‖_{L^p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.integral_power(p).powf(1.0 / p)
    }

    pub fn dirichlet_energy(&self) -> f64 {
        let n = self.base.n as i32;
        self.amplitude * self.amplitude * self.lambda.powi(2 - n) * self.base.gradient_mass
    }

    /// `‖h‖_{q+1}^{q-1}`. Meaningful for the solution itself.
    pub fn sq(&self) -> f64 {
        self.lp_norm(self.base.q + 1.0).powf(self.base.q - 1.0)
    }

    /// `∫|∇f|² / ‖f‖²_{q+1}`, the same constant by the variational route.
    /// Invariant under amplitude scaling.
    pub fn rayleigh_sq(&self) -> f64 {
        self.dirichlet_energy() / self.lp_norm(self.base.q + 1.0).powi(2)
    }

    /// Rescaled to `‖f‖_{q+1} = 1`.
    pub fn normalized(&self) -> RadialSolution {
        let norm = self.lp_norm(self.base.q + 1.0);
        RadialSolution { base: self.base.clone(), amplitude: self.amplitude / norm, lambda: self.lambda }
    }

    /// `(r, f(r))` at the shared sample radii.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let dt = self.base.dt();
        self.base.w.iter().enumerate().map(move |(i, w)| (i as f64 * dt / self.lambda, self.amplitude * w))
    }

    /// Equal-width steps in the measure variable `s = ω_n r^n`, valued at
    /// step midpoints.
    pub fn measure_profile(&self, steps: usize) -> Result<DecreasingProfile> {
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be positive"));
        }
        let n = self.base.n;
        let omega = unit_ball_volume(n)?;
        let m = self.ball_volume();
        let w = m / steps as f64;
        let mut values = Vec::with_capacity(steps);
        let mut prev = f64::INFINITY;
        for j in 0..steps {
            let s = (j as f64 + 0.5) * w;
            let r = (s / omega).powf(1.0 / n as f64);
            // interpolation may wiggle by rounding near the flat top
            let v = self.eval(r).max(0.0).min(prev);
            values.push(v);
            prev = v;
        }
        DecreasingProfile::uniform(w, values)
    }
}

/// Minimizer on `B_{r_*}` from one on `B_{R*}`:
/// `z(y) = (R*/r_*)^{n/(q+1)} v((R*/r_*) y)` with `v` the normalized `sol`.
pub fn rescale_minimizer(sol: &RadialSolution, big_radius: f64, small_radius: f64) -> Result<RadialSolution> {
    check_radius(big_radius)?;
    check_radius(small_radius)?;
    if (sol.radius() - big_radius).abs() > 1e-9 * big_radius {
        return Err(Error::InvalidArgument("solution radius does not match R*"));
    }
    let v = sol.normalized();
    let t = big_radius / small_radius;
    let n = sol.base.n as f64;
    Ok(RadialSolution {
        base: v.base.clone(),
        amplitude: v.amplitude * t.powf(n / (sol.base.q + 1.0)),
        lambda: v.lambda * t,
    })
}

/// Radius of the `n`-ball of measure `volume`; re-exported for convenience.
pub fn ball_radius(volume: f64, n: usize) -> Result<f64> {
    schwarz_radius(volume, n)
}
