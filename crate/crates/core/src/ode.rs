//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)) for dense
//! complex matrix ODEs.

use ndarray::Array2;
use ndarray_linalg::Scalar;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Local error control for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T: Real> {
    pub rtol: T,
    pub atol: T,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self { rtol: T::rl(1e-10), atol: T::rl(1e-12) }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn new(rtol: T, atol: T) -> Self {
        Self { rtol, atol }
    }
}

struct Dopri5<T: Real> {
    a: [[T; 6]; 6],
    b5: [T; 7],
    b4: [T; 7],
    c: [T; 6],
}

fn tableau<T: Real>() -> Dopri5<T> {
    let r = T::rl;
    Dopri5 {
        a: [
            [r(1.0 / 5.0), r(0.0), r(0.0), r(0.0), r(0.0), r(0.0)],
            [r(3.0 / 40.0), r(9.0 / 40.0), r(0.0), r(0.0), r(0.0), r(0.0)],
            [r(44.0 / 45.0), r(-56.0 / 15.0), r(32.0 / 9.0), r(0.0), r(0.0), r(0.0)],
            [
                r(19372.0 / 6561.0),
                r(-25360.0 / 2187.0),
                r(64448.0 / 6561.0),
                r(-212.0 / 729.0),
                r(0.0),
                r(0.0),
            ],
            [
                r(9017.0 / 3168.0),
                r(-355.0 / 33.0),
                r(46732.0 / 5247.0),
                r(49.0 / 176.0),
                r(-5103.0 / 18656.0),
                r(0.0),
            ],
            [
                r(35.0 / 384.0),
                r(0.0),
                r(500.0 / 1113.0),
                r(125.0 / 192.0),
                r(-2187.0 / 6784.0),
                r(11.0 / 84.0),
            ],
        ],
        b5: [
            r(35.0 / 384.0),
            r(0.0),
            r(500.0 / 1113.0),
            r(125.0 / 192.0),
            r(-2187.0 / 6784.0),
            r(11.0 / 84.0),
            r(0.0),
        ],
        b4: [
            r(5179.0 / 57600.0),
            r(0.0),
            r(7571.0 / 16695.0),
            r(393.0 / 640.0),
            r(-92097.0 / 339200.0),
            r(187.0 / 2100.0),
            r(1.0 / 40.0),
        ],
        c: [r(0.2), r(0.3), r(0.8), r(8.0 / 9.0), r(1.0), r(1.0)],
    }
}

fn weighted_sum<T: Real>(
    y: &Array2<T::Cplx>,
    h: T,
    stages: &[&Array2<T::Cplx>],
    weights: &[T],
) -> Array2<T::Cplx> {
    let mut out = y.clone();
    for (k, w) in stages.iter().zip(weights.iter()) {
        if *w != T::zero() {
            out.zip_mut_with(k, |o, kv| *o = *o + kv.mul_real(h * *w));
        }
    }
    out
}

fn error_norm<T: Real>(
    y: &Array2<T::Cplx>,
    ynew: &Array2<T::Cplx>,
    err: &Array2<T::Cplx>,
    tol: &Tolerance<T>,
) -> T {
    let mut acc = T::zero();
    let n = err.len();
    for ((e, a), b) in err.iter().zip(y.iter()).zip(ynew.iter()) {
        let scale = tol.atol + tol.rtol * Float::max(a.abs(), b.abs());
        let q = e.abs() / scale;
        acc = acc + q * q;
    }
    Float::sqrt(acc / T::rl(n as f64))
}

/// Integrate dy/dt = f(t, y) from t0 to t1 and return y(t1).
pub fn integrate<T, F>(
    f: F,
    t0: T,
    t1: T,
    y0: Array2<T::Cplx>,
    tol: &Tolerance<T>,
) -> Result<Array2<T::Cplx>>
where
    T: Real,
    F: FnMut(T, &Array2<T::Cplx>) -> Array2<T::Cplx>,
{
    drive(f, t0, y0, &[t1], |_, _| {}, tol)
}

/// Core driver: integrate dy/dt = f(t, y) from (t0, y0) hitting every time in
/// `times` (increasing, each >= t0) exactly and calling `on_sample` there.
/// Returns the state at the last sample time.
pub fn drive<T, F>(
    mut f: F,
    t0: T,
    y0: Array2<T::Cplx>,
    times: &[T],
    mut on_sample: impl FnMut(usize, &Array2<T::Cplx>),
    tol: &Tolerance<T>,
) -> Result<Array2<T::Cplx>>
where
    T: Real,
    F: FnMut(T, &Array2<T::Cplx>) -> Array2<T::Cplx>,
{
    let tab = tableau::<T>();
    let mut t = t0;
    let mut y = y0;
    let mut next = 0usize;

    while next < times.len() && times[next] <= t {
        on_sample(next, &y);
        next += 1;
    }
    if next >= times.len() {
        return Ok(y);
    }

    let t_end = *times.last().unwrap();
    let mut h = (t_end - t0) * T::rl(1e-3);
    let h_floor = Float::max(Float::abs(t_end - t0), T::one()) * T::epsilon() * T::rl(64.0);
    if h < h_floor {
        h = h_floor;
    }
    let mut k1 = f(t, &y);
    let mut just_rejected = false;

    loop {
        if t + h > times[next] {
            h = times[next] - t;
        }
        if h < h_floor {
            // Degenerate interval; treat as having arrived.
            while next < times.len() && times[next] - t <= h_floor {
                on_sample(next, &y);
                next += 1;
            }
            if next >= times.len() {
                return Ok(y);
            }
            continue;
        }

        let y2 = weighted_sum(&y, h, &[&k1], &tab.a[0][..1]);
        let k2 = f(t + tab.c[0] * h, &y2);
        let y3 = weighted_sum(&y, h, &[&k1, &k2], &tab.a[1][..2]);
        let k3 = f(t + tab.c[1] * h, &y3);
        let y4 = weighted_sum(&y, h, &[&k1, &k2, &k3], &tab.a[2][..3]);
        let k4 = f(t + tab.c[2] * h, &y4);
        let y5 = weighted_sum(&y, h, &[&k1, &k2, &k3, &k4], &tab.a[3][..4]);
        let k5 = f(t + tab.c[3] * h, &y5);
        let y6 = weighted_sum(&y, h, &[&k1, &k2, &k3, &k4, &k5], &tab.a[4][..5]);
        let k6 = f(t + tab.c[4] * h, &y6);
        let ynew = weighted_sum(&y, h, &[&k1, &k2, &k3, &k4, &k5, &k6], &tab.a[5][..6]);
        let k7 = f(t + h, &ynew);

        let mut err = Array2::zeros(y.raw_dim());
        let stages = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
        for (i, k) in stages.iter().enumerate() {
            let w = tab.b5[i] - tab.b4[i];
            if w != T::zero() {
                err.zip_mut_with(*k, |e, kv| *e = *e + kv.mul_real(h * w));
            }
        }
        let en = error_norm(&y, &ynew, &err, tol);

        if en <= T::one() {
            t = t + h;
            y = ynew;
            k1 = k7; // FSAL
            while next < times.len() && times[next] - t <= h_floor {
                on_sample(next, &y);
                next += 1;
            }
            if next >= times.len() {
                return Ok(y);
            }
            let fac = if en == T::zero() {
                T::rl(5.0)
            } else {
                Float::min(
                    if just_rejected { T::one() } else { T::rl(5.0) },
                    Float::max(T::rl(0.2), T::rl(0.9) * Float::powf(en, T::rl(-0.2))),
                )
            };
            h = h * fac;
            just_rejected = false;
        } else {
            h = h * Float::max(T::rl(0.2), T::rl(0.9) * Float::powf(en, T::rl(-0.2)));
            just_rejected = true;
            if h < h_floor {
                return Err(Error::Stiffness { t: t.to_f64().unwrap_or(f64::NAN) });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;
    use ndarray::array;

    #[test]
    fn scalar_exponential_decay() {
        // y' = (-i e - k/2) y with constant coefficients has an exact solution.
        let lam = cx::<f64>(0.7, -0.35);
        let y0 = array![[cx::<f64>(1.0, 0.0)]];
        let tol = Tolerance::default();
        let t1: f64 = 3.2;
        let y = drive(
            |_t, y: &Array2<num_complex::Complex64>| y.mapv(|v| -num_complex::Complex64::i() * lam * v),
            0.0,
            y0,
            &[t1],
            |_, _| {},
            &tol,
        )
        .unwrap();
        let exact = (-num_complex::Complex64::i() * lam * t1).exp();
        assert!((y[[0, 0]] - exact).norm() < 1e-10);
    }

    #[test]
    fn matrix_rotation_preserves_unitarity() {
        let i = num_complex::Complex64::i();
        let h = array![[i * 0.0, i * 0.0 + 1.0], [i * 0.0 + 1.0, i * 0.0]];
        let y0 = Array2::<num_complex::Complex64>::eye(2);
        let tol = Tolerance::default();
        let t1: f64 = 5.0;
        let hc = h.clone();
        let u = drive(
            move |_t, y: &Array2<num_complex::Complex64>| {
                let mut dy = hc.dot(y);
                dy.mapv_inplace(|v| -i * v);
                dy
            },
            0.0,
            y0,
            &[t1],
            |_, _| {},
            &tol,
        )
        .unwrap();
        // exp(-i sigma_x t): cos(t) I - i sin(t) sigma_x
        assert!((u[[0, 0]].re - t1.cos()).abs() < 1e-9);
        assert!((u[[0, 1]].im + t1.sin()).abs() < 1e-9);
    }

    #[test]
    fn sample_grid_is_hit_exactly() {
        let tol = Tolerance::default();
        let times: Vec<f64> = (1..=7).map(|j| 0.4 * j as f64).collect();
        let mut seen = Vec::new();
        let y0 = array![[cx::<f64>(1.0, 0.0)]];
        drive(
            |t, y: &Array2<num_complex::Complex64>| y.mapv(|v| v * num_complex::Complex64::new(-t, 0.0)),
            0.0,
            y0,
            &times,
            |i, y| seen.push((i, y[[0, 0]].re)),
            &tol,
        )
        .unwrap();
        assert_eq!(seen.len(), 7);
        for (i, v) in &seen {
            let t = times[*i];
            assert!((v - (-t * t / 2.0).exp()).abs() < 1e-9);
        }
    }
}
