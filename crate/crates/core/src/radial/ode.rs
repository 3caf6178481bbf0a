//! Dormand–Prince 5(4) for the radial Lane–Emden system
//! `w' = p`, `p' = -(n-1)p/r - max(w,0)^q`.



use num_traits::Float;
use crate::error::{Error, Result};

const ATOL: f64 = 1e-10;
const RTOL: f64 = 1e-10;
const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct LaneEmden {
    pub n: f64,
    pub q: f64,
}

impl LaneEmden {
    fn rhs(&self, r: f64, y: [f64; 2]) -> [f64; 2] {
        let source = if y[0] > 0.0 { y[0].powf(self.q) } else { 0.0 };
        [y[1], -(self.n - 1.0) * y[1] / r - source]
    }

    /// Taylor start `w = 1 - r²/(2n) + q r⁴/(8n(n+2))`.
    pub fn series(&self, r: f64) -> [f64; 2] {
        let n = self.n;
        let c4 = self.q / (8.0 * n * (n + 2.0));
        [1.0 - r * r / (2.0 * n) + c4 * r.powi(4), -r / n + 4.0 * c4 * r.powi(3)]
    }

    /// One DOPRI5 step; returns the 5th-order solution and the error estimate.
    fn step(&self, r: f64, y: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
        let add = |y: [f64; 2], terms: &[(f64, [f64; 2])]| {
            let mut out = y;
            for (c, k) in terms {
                out[0] += h * c * k[0];
                out[1] += h * c * k[1];
            }
            out
        };
        let k1 = self.rhs(r, y);
        let k2 = self.rhs(r + h / 5.0, add(y, &[(1.0 / 5.0, k1)]));
        let k3 = self.rhs(r + 3.0 * h / 10.0, add(y, &[(3.0 / 40.0, k1), (9.0 / 40.0, k2)]));
        let k4 = self.rhs(r + 4.0 * h / 5.0, add(y, &[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)]));
        let k5 = self.rhs(
            r + 8.0 * h / 9.0,
            add(y, &[(19372.0 / 6561.0, k1), (-25360.0 / 2187.0, k2), (64448.0 / 6561.0, k3), (-212.0 / 729.0, k4)]),
        );
        let k6 = self.rhs(
            r + h,
            add(
                y,
                &[
                    (9017.0 / 3168.0, k1),
                    (-355.0 / 33.0, k2),
                    (46732.0 / 5247.0, k3),
                    (49.0 / 176.0, k4),
                    (-5103.0 / 18656.0, k5),
                ],
            ),
        );
        let y5 = add(
            y,
            &[
                (35.0 / 384.0, k1),
                (500.0 / 1113.0, k3),
                (125.0 / 192.0, k4),
                (-2187.0 / 6784.0, k5),
                (11.0 / 84.0, k6),
            ],
        );
        let k7 = self.rhs(r + h, y5);
        let e = [
            (71.0 / 57600.0, k1),
            (-71.0 / 16695.0, k3),
            (71.0 / 1920.0, k4),
            (-17253.0 / 339200.0, k5),
            (22.0 / 525.0, k6),
            (-1.0 / 40.0, k7),
        ];
        let mut err = [0.0; 2];
        for (c, k) in e {
            err[0] += h * c * k[0];
            err[1] += h * c * k[1];
        }
        (y5, err)
    }

    fn error_norm(y0: [f64; 2], y1: [f64; 2], err: [f64; 2]) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            let sc = ATOL + RTOL * y0[i].abs().max(y1[i].abs());
            s += (err[i] / sc) * (err[i] / sc);
        }
        (s / 2.0).sqrt()
    }

    /// One accepted adaptive step from `r` not past `limit`. Returns
    /// `(r_new, y_new, suggested next h)`.
    fn adaptive_step(&self, r: f64, y: [f64; 2], mut h: f64, limit: f64) -> Result<(f64, [f64; 2], f64)> {
        loop {
            let last = r + h >= limit;
            let step = if last { limit - r } else { h };
            if !(step > 0.0) || step < 1e-15 * r.max(1.0) {
                return Err(Error::Ode("step size underflow"));
            }
            let (y1, err) = self.step(r, y, step);
            let en = Self::error_norm(y, y1, err);
            if !en.is_finite() {
                h = 0.2 * step;
                continue;
            }
            let factor = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            if en <= 1.0 {
                let r1 = if last { limit } else { r + step };
                return Ok((r1, y1, step * factor));
            }
            h = step * factor;
        }
    }

    /// Integrates from `(r0, y0)` to `r1`; `h` carries the step size.
    pub fn integrate(&self, r0: f64, y0: [f64; 2], r1: f64, h: &mut f64) -> Result<[f64; 2]> {
        let (mut r, mut y) = (r0, y0);
        let mut steps = 0;
        while r < r1 {
            let (rn, yn, hn) = self.adaptive_step(r, y, *h, r1)?;
            r = rn;
            y = yn;
            *h = hn;
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Ode("too many steps"));
            }
        }
        Ok(y)
    }

    /// First zero of `w` after `r0`, bisected to `tol`.
    pub fn first_zero(&self, r0: f64, y0: [f64; 2], cap: f64, tol: f64) -> Result<f64> {
        let (mut r, mut y) = (r0, y0);
        let mut h = r0.max(1e-3);
        let mut steps = 0;
        while r < cap {
            let (rn, yn, hn) = self.adaptive_step(r, y, h, cap)?;
            if yn[0] <= 0.0 {
                let (mut lo, mut hi) = (r, rn);
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    let mut hh = mid - r;
                    let w = self.integrate(r, y, mid, &mut hh)?[0];
                    if w > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
            r = rn;
            y = yn;
            h = hn;
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Ode("too many steps"));
            }
        }
        Err(Error::Ode("no zero before the radius cap"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_satisfies_the_equation_near_zero() {
        let sys = LaneEmden { n: 2.0, q: 0.5 };
        let r = 1e-3;
        let d = 1e-6;
        let [w, p] = sys.series(r);
        let pp = (sys.series(r + d)[1] - sys.series(r - d)[1]) / (2.0 * d);
        let res = pp + (sys.n - 1.0) * p / r + w.powf(sys.q);
        assert!(res.abs() < 1e-8, "residual {res}");
    }

    #[test]
    fn torsion_case_is_exact() {
        // q = 0: w = 1 - r²/(2n), zero at √(2n)
        for n in [2.0, 3.0, 4.0] {
            let sys = LaneEmden { n, q: 0.0 };
            let r0 = 1e-3;
            let z = sys.first_zero(r0, sys.series(r0), 100.0, 1e-13).unwrap();
            assert!((z - (2.0 * n).sqrt()).abs() < 1e-10, "n = {n}: {z}");
        }
    }

    #[test]
    fn linear_case_matches_bessel_zero() {
        // q → 1 limit is w'' + w'/r + w = 0: J₀, first zero 2.404825557695773
        let sys = LaneEmden { n: 2.0, q: 1.0 };
        let r0 = 1e-3;
        let z = sys.first_zero(r0, sys.series(r0), 100.0, 1e-13).unwrap();
        assert!((z - 2.404825557695773).abs() < 1e-8, "{z}");
    }
}
