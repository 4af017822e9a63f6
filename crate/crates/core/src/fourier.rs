//! Fourier-series blocks of periodic matrix functions sampled on a uniform
//! grid over one period.

use ndarray::Array2;
use ndarray_linalg::Scalar;
use num_complex::Complex;
use rustfft::FftPlanner;

use crate::scalar::Real;

/// Sign convention of the stored series.
///
/// `EMinus`: f(t) = sum_m c_m exp(-i m W t)  (coefficients from e^{+imWt} projection)
/// `EPlus`:  f(t) = sum_m c_m exp(+i m W t)  (coefficients from e^{-imWt} projection)
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesSign {
    EMinus,
    EPlus,
}

/// Fourier coefficients of a periodic matrix function, stored for |m| <= cutoff.
#[derive(Debug, Clone)]
pub struct FourierBlocks<T: Real> {
    pub sign: SeriesSign,
    pub cutoff: usize,
    rows: usize,
    cols: usize,
    blocks: Vec<Array2<T::Cplx>>,
}

impl<T: Real> FourierBlocks<T> {
    pub fn from_blocks(blocks: Vec<Array2<T::Cplx>>, sign: SeriesSign) -> Self {
        assert!(blocks.len() % 2 == 1, "blocks must cover a symmetric index range");
        let cutoff = blocks.len() / 2;
        let (rows, cols) = (blocks[0].nrows(), blocks[0].ncols());
        Self { sign, cutoff, rows, cols, blocks }
    }

    /// Extract coefficients from equispaced samples over one period.
    pub fn from_samples(samples: &[Array2<T::Cplx>], sign: SeriesSign, cutoff: usize) -> Self {
        let n = samples.len();
        assert!(n > 0 && 2 * cutoff < n, "cutoff must satisfy 2*cutoff < samples");
        let (rows, cols) = (samples[0].nrows(), samples[0].ncols());
        let mut planner = FftPlanner::<T>::new();
        let fft = planner.plan_fft_forward(n);
        let inv_n = T::one() / T::rl(n as f64);
        let mut blocks: Vec<Array2<T::Cplx>> =
            (0..2 * cutoff + 1).map(|_| Array2::zeros((rows, cols))).collect();
        let mut buf: Vec<Complex<T>> = vec![Complex::new(T::zero(), T::zero()); n];
        for r in 0..rows {
            for c in 0..cols {
                for (j, s) in samples.iter().enumerate() {
                    buf[j] = s[[r, c]].into();
                }
                fft.process(&mut buf);
                for (idx, block) in blocks.iter_mut().enumerate() {
                    let m = idx as isize - cutoff as isize;
                    // Forward FFT computes F[k] = sum_j x_j e^{-2 pi i jk/n}.
                    // EMinus wants c_m = (1/n) sum_j x_j e^{+2 pi i jm/n} = F[(n-m) % n]/n,
                    // EPlus wants  c_m = F[m % n]/n.
                    let k = fft_index(sign, m, n);
                    block[[r, c]] = T::Cplx::from(buf[k]).mul_real(inv_n);
                }
            }
        }
        Self { sign, cutoff, rows, cols, blocks }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coefficient for harmonic m; zero matrix outside the stored range.
    pub fn get(&self, m: isize) -> Array2<T::Cplx> {
        match self.try_get(m) {
            Some(b) => b.clone(),
            None => Array2::zeros((self.rows, self.cols)),
        }
    }

    pub fn try_get(&self, m: isize) -> Option<&Array2<T::Cplx>> {
        let idx = m + self.cutoff as isize;
        if idx < 0 || idx as usize >= self.blocks.len() {
            None
        } else {
            Some(&self.blocks[idx as usize])
        }
    }

    /// Synthesize the series at time t for angular frequency omega.
    pub fn eval(&self, omega: T, t: T) -> Array2<T::Cplx> {
        let mut out = Array2::zeros((self.rows, self.cols));
        for (idx, b) in self.blocks.iter().enumerate() {
            let m = idx as isize - self.cutoff as isize;
            let phase = self.phase(omega, t, m);
            out.zip_mut_with(b, |o, v| *o = *o + *v * phase);
        }
        out
    }

    /// Synthesize the time derivative of the series at time t.
    pub fn eval_deriv(&self, omega: T, t: T) -> Array2<T::Cplx> {
        let mut out = Array2::zeros((self.rows, self.cols));
        for (idx, b) in self.blocks.iter().enumerate() {
            let m = idx as isize - self.cutoff as isize;
            let phase = self.phase(omega, t, m);
            let factor = match self.sign {
                SeriesSign::EMinus => T::c(T::zero(), -omega * T::rl(m as f64)),
                SeriesSign::EPlus => T::c(T::zero(), omega * T::rl(m as f64)),
            };
            out.zip_mut_with(b, |o, v| *o = *o + *v * phase * factor);
        }
        out
    }

    fn phase(&self, omega: T, t: T, m: isize) -> T::Cplx {
        let arg = omega * t * T::rl(m as f64);
        match self.sign {
            SeriesSign::EMinus => T::c(T::zero(), -arg).exp(),
            SeriesSign::EPlus => T::c(T::zero(), arg).exp(),
        }
    }

    /// Frobenius norm of the coefficient at harmonic m.
    pub fn block_norm(&self, m: isize) -> T {
        match self.try_get(m) {
            None => T::zero(),
            Some(b) => {
                let mut acc = T::zero();
                for v in b.iter() {
                    acc = acc + v.square();
                }
                num_traits::Float::sqrt(acc)
            }
        }
    }

    /// Ratio of the edge-coefficient norm to the largest coefficient norm,
    /// used to detect harmonic-cutoff truncation.
    pub fn tail_ratio(&self) -> T {
        let mut max = T::zero();
        for idx in 0..self.blocks.len() {
            let m = idx as isize - self.cutoff as isize;
            let n = self.block_norm(m);
            if n > max {
                max = n;
            }
        }
        if max == T::zero() {
            return T::zero();
        }
        let edge = num_traits::Float::max(
            self.block_norm(self.cutoff as isize),
            self.block_norm(-(self.cutoff as isize)),
        );
        edge / max
    }
}

fn fft_index(sign: SeriesSign, m: isize, n: usize) -> usize {
    let n = n as isize;
    let k = match sign {
        SeriesSign::EMinus => (n - m) % n,
        SeriesSign::EPlus => m % n,
    };
    ((k + n) % n) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn recovers_known_coefficients() {
        // f(t) = 2 + 3 e^{-i W t} + (1 - i) e^{+2 i W t}, period 2 pi / W.
        let omega = 1.7_f64;
        let period = 2.0 * std::f64::consts::PI / omega;
        let n = 64;
        let samples: Vec<Array2<num_complex::Complex64>> = (0..n)
            .map(|j| {
                let t = period * j as f64 / n as f64;
                let i = num_complex::Complex64::i();
                let v = 2.0 + 3.0 * (-i * omega * t).exp()
                    + (1.0 - i) * (2.0 * i * omega * t).exp();
                ndarray::array![[v]]
            })
            .collect();
        let fb = FourierBlocks::<f64>::from_samples(&samples, SeriesSign::EMinus, 4);
        assert!((fb.get(0)[[0, 0]] - 2.0).norm() < 1e-12);
        assert!((fb.get(1)[[0, 0]] - 3.0).norm() < 1e-12);
        assert!((fb.get(-2)[[0, 0]] - cx::<f64>(1.0, -1.0)).norm() < 1e-12);
        assert!(fb.get(2)[[0, 0]].norm() < 1e-12);
        // Synthesis reproduces the samples.
        for j in [0, 5, 17] {
            let t = period * j as f64 / n as f64;
            let v = fb.eval(omega, t)[[0, 0]];
            assert!((v - samples[j][[0, 0]]).norm() < 1e-12);
        }
    }

    #[test]
    fn eplus_convention_is_conjugate_indexed() {
        let omega = 0.9_f64;
        let period = 2.0 * std::f64::consts::PI / omega;
        let n = 32;
        let samples: Vec<Array2<num_complex::Complex64>> = (0..n)
            .map(|j| {
                let t = period * j as f64 / n as f64;
                let i = num_complex::Complex64::i();
                ndarray::array![[4.0 * (i * omega * t).exp()]]
            })
            .collect();
        let fb = FourierBlocks::<f64>::from_samples(&samples, SeriesSign::EPlus, 3);
        assert!((fb.get(1)[[0, 0]] - 4.0).norm() < 1e-12);
        assert!(fb.get(-1)[[0, 0]].norm() < 1e-12);
    }
}
