//! Periodic cubic spline interpolation on uniform knots.
//!
//! Used for tabulated modulation waveforms and for resampling parameter
//! loops; segment integrals are exact so waveform means and phase integrals
//! carry no extra quadrature error.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Cubic spline through `values[j]` at `t_j = j * period / N`, periodic with
/// the given period.
#[derive(Debug, Clone)]
pub struct PeriodicSpline<T: Real> {
    period: T,
    h: T,
    values: Vec<T>,
    /// Second derivatives at the knots.
    second: Vec<T>,
    /// Prefix integrals over whole segments: prefix[j] = integral over [0, t_j].
    prefix: Vec<T>,
}

impl<T: Real> PeriodicSpline<T> {
    pub fn new(values: Vec<T>, period: T) -> Result<Self> {
        let n = values.len();
        if n < 4 {
            return Err(Error::InvalidParameter(format!(
                "periodic spline needs at least 4 samples, got {n}"
            )));
        }
        if !(period > T::zero()) {
            return Err(Error::InvalidParameter("spline period must be positive".into()));
        }
        let h = period / T::rl(n as f64);
        let six = T::rl(6.0);
        let rhs: Vec<T> = (0..n)
            .map(|j| {
                let ym = values[(j + n - 1) % n];
                let y0 = values[j];
                let yp = values[(j + 1) % n];
                six * (yp - y0 - y0 + ym) / (h * h)
            })
            .collect();
        let second = solve_cyclic_tridiagonal(T::one(), T::rl(4.0), T::one(), &rhs);

        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = T::zero();
        prefix.push(acc);
        let twentyfour = T::rl(24.0);
        for j in 0..n {
            let yp = values[(j + 1) % n];
            let mp = second[(j + 1) % n];
            let seg = h * (values[j] + yp) / T::rl(2.0) - h * h * h * (second[j] + mp) / twentyfour;
            acc = acc + seg;
            prefix.push(acc);
        }
        Ok(Self { period, h, values, second, prefix })
    }

    pub fn period(&self) -> T {
        self.period
    }

    fn locate(&self, t: T) -> (usize, T) {
        let n = self.values.len();
        let mut u = (t / self.period).fract();
        if u < T::zero() {
            u = u + T::one();
        }
        let x = u * T::rl(n as f64);
        let mut j = Float::floor(x).to_usize().unwrap_or(0);
        if j >= n {
            j = n - 1;
        }
        (j, (x - T::rl(j as f64)) * self.h)
    }

    /// Value at t (periodic).
    pub fn eval(&self, t: T) -> T {
        let n = self.values.len();
        let (j, dt) = self.locate(t);
        let (y0, y1) = (self.values[j], self.values[(j + 1) % n]);
        let (m0, m1) = (self.second[j], self.second[(j + 1) % n]);
        let h = self.h;
        let a = h - dt;
        let six = T::rl(6.0);
        m0 * a * a * a / (six * h)
            + m1 * dt * dt * dt / (six * h)
            + (y0 / h - m0 * h / six) * a
            + (y1 / h - m1 * h / six) * dt
    }

    /// First derivative at t.
    pub fn deriv(&self, t: T) -> T {
        let n = self.values.len();
        let (j, dt) = self.locate(t);
        let (y0, y1) = (self.values[j], self.values[(j + 1) % n]);
        let (m0, m1) = (self.second[j], self.second[(j + 1) % n]);
        let h = self.h;
        let a = h - dt;
        let six = T::rl(6.0);
        -m0 * a * a / (T::rl(2.0) * h) + m1 * dt * dt / (T::rl(2.0) * h) + (y1 - y0) / h
            - (m1 - m0) * h / six
    }

    /// Integral over [0, t] for t >= 0 (extends periodically).
    pub fn integral(&self, t: T) -> T {
        let n = self.values.len();
        let whole = Float::floor(t / self.period);
        let frac = t - whole * self.period;
        let (j, dt) = self.locate(frac);
        let (y0, y1) = (self.values[j], self.values[(j + 1) % n]);
        let (m0, m1) = (self.second[j], self.second[(j + 1) % n]);
        let h = self.h;
        let a = h - dt;
        let six = T::rl(6.0);
        let tf = T::rl(24.0);
        // Integral of the local cubic over [t_j, t_j + dt].
        let seg = m0 * (h * h * h * h - a * a * a * a) / (tf * h)
            + m1 * dt * dt * dt * dt / (tf * h)
            + (y0 / h - m0 * h / six) * (h * h - a * a) / T::rl(2.0)
            + (y1 / h - m1 * h / six) * dt * dt / T::rl(2.0);
        whole * self.prefix[n] + self.prefix[j] + seg
    }

    /// Mean over one period.
    pub fn mean(&self) -> T {
        self.prefix[self.values.len()] / self.period
    }
}

/// Solve the cyclic tridiagonal system with constant bands (a, b, a) via the
/// Sherman-Morrison correction of the open tridiagonal solve.
fn solve_cyclic_tridiagonal<T: Real>(a: T, b: T, c: T, rhs: &[T]) -> Vec<T> {
    let n = rhs.len();
    debug_assert!(n >= 3);
    let gamma = -b;
    // Modified diagonal for the open system.
    let mut diag = vec![b; n];
    diag[0] = b - gamma;
    diag[n - 1] = b - a * c / gamma;
    let solve_open = |d: &[T], r: &[T]| -> Vec<T> {
        let mut cp = vec![T::zero(); n];
        let mut dp = vec![T::zero(); n];
        cp[0] = c / d[0];
        dp[0] = r[0] / d[0];
        for i in 1..n {
            let m = d[i] - a * cp[i - 1];
            cp[i] = c / m;
            dp[i] = (r[i] - a * dp[i - 1]) / m;
        }
        let mut x = vec![T::zero(); n];
        x[n - 1] = dp[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = dp[i] - cp[i] * x[i + 1];
        }
        x
    };
    let x = solve_open(&diag, rhs);
    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = c;
    let z = solve_open(&diag, &u);
    let factor = (x[0] + a * x[n - 1] / gamma) / (T::one() + z[0] + a * z[n - 1] / gamma);
    (0..n).map(|i| x[i] - factor * z[i]).collect()
}
