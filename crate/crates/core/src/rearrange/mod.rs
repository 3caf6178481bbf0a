//! Distribution functions, rearrangements and Schwarz symmetrization of grid
//! fields, kept exact: a profile holds one step per cell, so every integral of
//! `F(f)` is the same finite sum as on the grid.

mod sampled;

use alloc::vec::Vec;

use num_traits::Float;

use crate::domain::{schwarz_radius, unit_ball_volume};
use crate::elliptic::ScalarField;
use crate::error::{Error, Result};
use crate::verify::CheckReport;

pub use sampled::{supersampled_rearrangement, DEFAULT_SUBDIVISIONS};

/// Non-increasing step function on `[0, M]`, zero beyond `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingProfile {
    widths: Vec<f64>,
    values: Vec<f64>,
    edges: Vec<f64>,
}

fn cumulative(widths: &[f64]) -> Vec<f64> {
    let mut edges = Vec::with_capacity(widths.len() + 1);
    let mut acc = 0.0;
    edges.push(0.0);
    for w in widths {
        acc += w;
        edges.push(acc);
    }
    edges
}

fn validate_steps(widths: &[f64], values: &[f64]) -> Result<()> {
    if widths.len() != values.len() {
        return Err(Error::InvalidArgument("widths and values differ in length"));
    }
    if widths.is_empty() {
        return Err(Error::InvalidArgument("profile needs at least one step"));
    }
    if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidArgument("step widths must be positive"));
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::NegativeValue { index, value });
    }
    Ok(())
}

/// Index of the step containing `s` given cumulative `edges`, or `None` past the end.
fn step_at(edges: &[f64], s: f64) -> Option<usize> {
    let total = *edges.last()?;
    if s >= total {
        return None;
    }
    if s <= 0.0 {
        return Some(0);
    }
    // first edge strictly greater than s, minus one
    Some(edges.partition_point(|e| *e <= s) - 1)
}

impl DecreasingProfile {
    /// Steps must have positive widths and non-increasing, nonnegative values.
    pub fn new(widths: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_steps(&widths, &values)?;
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidArgument("profile values must be non-increasing"));
        }
        Ok(Self::from_sorted(widths, values))
    }

    /// Equal-width steps.
    pub fn uniform(width: f64, values: Vec<f64>) -> Result<Self> {
        let widths = alloc::vec![width; values.len()];
        Self::new(widths, values)
    }

    pub(crate) fn from_sorted(widths: Vec<f64>, values: Vec<f64>) -> Self {
        let edges = cumulative(&widths);
        DecreasingProfile { widths, values, edges }
    }

    /// `M`, the sum of the widths.
    pub fn total_measure(&self) -> f64 {
        self.edges[self.edges.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Cumulative measure at each step boundary, starting at 0.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn max_value(&self) -> f64 {
        self.values[0]
    }

    /// `f*(s)`, right-continuous.
    pub fn eval(&self, s: f64) -> f64 {
        step_at(&self.edges, s).map_or(0.0, |i| self.values[i])
    }

    /// `∫₀^s f*(t)^p dt`.
    pub fn integral_up_to(&self, s: f64, p: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            let (a, b) = (self.edges[i], self.edges[i + 1]);
            if s <= a {
                break;
            }
            acc += (b.min(s) - a) * self.values[i].powf(p);
        }
        acc
    }

    /// `∫₀^{e_i} (f*)^p` at every step boundary `e_i`.
    pub fn cumulative_powers(&self, p: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for (w, v) in self.widths.iter().zip(&self.values) {
            acc += w * v.powf(p);
            out.push(acc);
        }
        out
    }

    /// `∫₀^s (f*)^p` at each point of an ascending list.
    pub fn cumulative_at(&self, points: &[f64], p: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(points.len());
        let mut i = 0;
        let mut acc = 0.0;
        for &s in points {
            while i < self.len() && self.edges[i + 1] <= s {
                acc += self.widths[i] * self.values[i].powf(p);
                i += 1;
            }
            let partial = if i < self.len() && s > self.edges[i] {
                (s - self.edges[i]) * self.values[i].powf(p)
            } else {
                0.0
            };
            out.push(acc + partial);
        }
        out
    }

    /// Stepwise `(f*)^p`; the rearrangement of `f^p`.
    pub fn powered(&self, p: f64) -> DecreasingProfile {
        let values = self.values.iter().map(|v| v.powf(p)).collect();
        Self::from_sorted(self.widths.clone(), values)
    }

    pub fn scaled(&self, t: f64) -> Result<DecreasingProfile> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidArgument("scale must be nonnegative"));
        }
        Ok(Self::from_sorted(self.widths.clone(), self.values.iter().map(|v| v * t).collect()))
    }

    /// Adjacent steps with equal values joined. For display only.
    pub fn merged(&self) -> DecreasingProfile {
        let mut widths: Vec<f64> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for (&w, &v) in self.widths.iter().zip(&self.values) {
            match values.last() {
                Some(&last) if last == v => *widths.last_mut().unwrap() += w,
                _ => {
                    widths.push(w);
                    values.push(v);
                }
            }
        }
        Self::from_sorted(widths, values)
    }

    /// Averages over `bins` equal-measure bins.
    pub fn bin_averages(&self, bins: usize) -> Vec<f64> {
        let bins = bins.max(1);
        let m = self.total_measure();
        let points: Vec<f64> = (0..=bins).map(|j| m * j as f64 / bins as f64).collect();
        let c = self.cumulative_at(&points, 1.0);
        let w = m / bins as f64;
        c.windows(2).map(|p| (p[1] - p[0]) / w).collect()
    }

    /// `(left edge, value)` per step, for CSV export.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges.iter().copied().zip(self.values.iter().copied())
    }

    /// The increasing rearrangement `f_*(s) = f*(M - s)`.
    pub fn reflect(&self) -> IncreasingProfile {
        let mut widths = self.widths.clone();
        let mut values = self.values.clone();
        widths.reverse();
        values.reverse();
        IncreasingProfile { inner: DecreasingProfile { edges: cumulative(&widths), widths, values } }
    }
}

/// Non-decreasing step function on `[0, M]`: the reflection of a
/// [`DecreasingProfile`].
#[derive(Debug, Clone, PartialEq)]
pub struct IncreasingProfile {
    // same storage, steps in increasing order
    inner: DecreasingProfile,
}

impl IncreasingProfile {
    pub fn total_measure(&self) -> f64 {
        self.inner.total_measure()
    }

    pub fn widths(&self) -> &[f64] {
        &self.inner.widths
    }

    pub fn values(&self) -> &[f64] {
        &self.inner.values
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    /// `f_*(s)`, right-continuous, zero beyond `M`.
    pub fn eval(&self, s: f64) -> f64 {
        step_at(&self.inner.edges, s).map_or(0.0, |i| self.inner.values[i])
    }

    pub fn reflect(&self) -> DecreasingProfile {
        let mut widths = self.inner.widths.clone();
        let mut values = self.inner.values.clone();
        widths.reverse();
        values.reverse();
        DecreasingProfile::from_sorted(widths, values)
    }
}

/// `x ↦ f*(ω_n |x|^n)` on the ball of the profile's measure.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    n: usize,
    radius: f64,
    omega: f64,
    profile: DecreasingProfile,
}

impl RadialField {
    pub fn new(profile: DecreasingProfile, n: usize) -> Result<Self> {
        let radius = schwarz_radius(profile.total_measure(), n)?;
        let omega = unit_ball_volume(n)?;
        Ok(RadialField { n, radius, omega, profile })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn profile(&self) -> &DecreasingProfile {
        &self.profile
    }

    pub fn into_profile(self) -> DecreasingProfile {
        self.profile
    }

    pub fn eval_radius(&self, r: f64) -> f64 {
        self.profile.eval(self.omega * r.abs().powi(self.n as i32))
    }

    pub fn max_value(&self) -> f64 {
        self.profile.max_value()
    }
}

/// `μ_f(t)`: measure of `{f > t}`.
pub fn distribution_function(field: &ScalarField<'_>, t: f64) -> f64 {
    field.values().iter().filter(|&&v| v > t).count() as f64 * field.grid().cell_measure()
}

/// One step of width `h²` per cell, values sorted descending (ties by index).
pub fn decreasing_rearrangement(field: &ScalarField<'_>) -> Result<DecreasingProfile> {
    if let Some((index, &value)) = field.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeValue { index, value });
    }
    let mut values = field.values().to_vec();
    // stable sort keeps index order among ties
    values.sort_by(|a, b| b.total_cmp(a));
    let widths = alloc::vec![field.grid().cell_measure(); values.len()];
    Ok(DecreasingProfile::from_sorted(widths, values))
}

pub fn increasing_rearrangement(profile: &DecreasingProfile) -> IncreasingProfile {
    profile.reflect()
}

/// `f^⋆` on the planar ball with the field's measure.
pub fn schwarz_symmetrization(field: &ScalarField<'_>) -> Result<RadialField> {
    RadialField::new(decreasing_rearrangement(field)?, 2)
}

/// `Σ width · value^p`. `0^0` counts as 1.
pub fn profile_integral(profile: &DecreasingProfile, p: f64) -> f64 {
    profile.widths.iter().zip(&profile.values).map(|(w, v)| w * v.powf(p)).sum()
}

/// Dirichlet energy of the symmetrized function,
/// `n² ω_n^{2/n} ∫ |p'(s)|² s^{2(n-1)/n} ds`, with `ceil(√len)` bins.
pub fn profile_energy(profile: &DecreasingProfile, n: usize) -> Result<f64> {
    let bins = ((profile.len() as f64).sqrt().ceil() as usize).clamp(1, profile.len());
    profile_energy_binned(profile, n, bins)
}

/// As [`profile_energy`] with a chosen bin count.
///
/// The profile is averaged over equal-measure bins and replaced by the
/// piecewise-linear interpolant through the bin midpoints: flat before the
/// first midpoint, falling to zero at `M`. Each linear piece is integrated
/// exactly.
pub fn profile_energy_binned(profile: &DecreasingProfile, n: usize, bins: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("dimension must be at least 2"));
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("bin count must be positive"));
    }
    let omega = unit_ball_volume(n)?;
    let m = profile.total_measure();
    let avg = profile.bin_averages(bins);
    let w = m / bins as f64;
    let mut xs: Vec<f64> = (0..bins).map(|j| (j as f64 + 0.5) * w).collect();
    let mut ys = avg;
    xs.push(m);
    ys.push(0.0);
    let gamma = 2.0 * (n as f64 - 1.0) / n as f64;
    let mut acc = 0.0;
    for i in 0..xs.len() - 1 {
        let (a, b) = (xs[i], xs[i + 1]);
        let slope = (ys[i + 1] - ys[i]) / (b - a);
        acc += slope * slope * (b.powf(gamma + 1.0) - a.powf(gamma + 1.0)) / (gamma + 1.0);
    }
    Ok((n * n) as f64 * omega.powf(2.0 / n as f64) * acc)
}

/// `(Σ f*·g_*, Σ f·g, Σ f*·g*)`, each times `h²`.
///
/// Signed values are allowed; the chain `lower ≤ middle ≤ upper` is the
/// discrete rearrangement inequality.
pub fn hardy_littlewood_bounds(f: &ScalarField<'_>, g: &ScalarField<'_>) -> Result<(f64, f64, f64)> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let h2 = f.grid().cell_measure();
    let mut fs = f.values().to_vec();
    let mut gs = g.values().to_vec();
    fs.sort_by(|a, b| b.total_cmp(a));
    gs.sort_by(|a, b| b.total_cmp(a));
    let upper: f64 = fs.iter().zip(&gs).map(|(a, b)| a * b).sum();
    let lower: f64 = fs.iter().zip(gs.iter().rev()).map(|(a, b)| a * b).sum();
    let middle: f64 = f.values().iter().zip(g.values()).map(|(a, b)| a * b).sum();
    Ok((lower * h2, middle * h2, upper * h2))
}

/// Result of [`power_dominance_lift`].
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    /// `min_s [∫₀^s g^α - ∫₀^s f^α] / ∫₀^M g^α` over all step boundaries.
    pub hypothesis: CheckReport,
    /// `[∫₀^M g^β - ∫₀^M f^β] / ∫₀^M g^β`.
    pub conclusion: CheckReport,
    /// Measure where the hypothesis margin is smallest.
    pub worst_at: f64,
}

impl DominanceReport {
    pub fn hypothesis_failed(&self) -> bool {
        !self.hypothesis.verdict.holds()
    }
}

/// Partial-integral dominance of `f` by `g` at power `alpha`, lifted to the
/// full integral at power `beta >= alpha`.
///
/// Both margins are relative to `g`'s full integral; `tol` applies to both.
/// Profiles may have different measures; each is zero past its own end and
/// the window is the larger measure.
pub fn power_dominance_lift(
    f: &DecreasingProfile,
    g: &DecreasingProfile,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<DominanceReport> {
    if !(alpha > 0.0 && beta >= alpha && beta.is_finite()) {
        return Err(Error::InvalidArgument("need 0 < alpha <= beta"));
    }
    let mut points: Vec<f64> = f.edges[1..].iter().chain(&g.edges[1..]).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let fa = f.cumulative_at(&points, alpha);
    let ga = g.cumulative_at(&points, alpha);
    let scale_a = *ga.last().unwrap();
    let (mut worst, mut worst_i) = (f64::INFINITY, 0);
    for (i, (a, b)) in fa.iter().zip(&ga).enumerate() {
        let d = b - a;
        if d < worst {
            worst = d;
            worst_i = i;
        }
    }
    let hypothesis = CheckReport::with_margin("dominance_hypothesis", fa[worst_i], ga[worst_i], worst / scale_a, tol);
    let fb = profile_integral(f, beta);
    let gb = profile_integral(g, beta);
    let conclusion = CheckReport::with_margin("dominance_conclusion", fb, gb, (gb - fb) / gb, tol);
    Ok(DominanceReport { hypothesis, conclusion, worst_at: points[worst_i] })
}
