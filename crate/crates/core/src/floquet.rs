//! Floquet decomposition of the non-Hermitian effective Hamiltonian per
//! excitation subspace, via monodromy-matrix diagonalization.

use ndarray::Array2;
use ndarray_linalg::{Eig, Inverse, Scalar};
use num_traits::Float;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fourier::{FourierBlocks, SeriesSign};
use crate::models::LadderSystem;
use crate::ode::{self, Tolerance};
use crate::scalar::Real;

pub const FORMAT_VERSION: &str = "floquet-decomposition/1";

/// Biorthogonal Floquet data for one excitation subspace: complex
/// quasi-energies (real parts folded into [-Omega/2, Omega/2)) and the
/// Fourier blocks of the periodic right/left eigenvectors.
///
/// Conventions: |phi_k(t)> = sum_m right[m] e^{-i m Omega t} (column k),
/// <chi_k(t)| = sum_m left[m] e^{+i m Omega t} (row k), and
/// U_eff^n(t, s) = Phi(t) diag(e^{-i lambda (t-s)}) X(s).
#[derive(Debug, Clone)]
pub struct FloquetDecomposition<T: Real> {
    n: usize,
    dim: usize,
    omega: T,
    period: T,
    lambdas: Vec<T::Cplx>,
    right: FourierBlocks<T>,
    left: FourierBlocks<T>,
    harmonic_cutoff: usize,
    sample_grid: usize,
    truncation_warning: Option<String>,
    sys_fingerprint: String,
    rtol: f64,
    atol: f64,
}

impl<T: Real> FloquetDecomposition<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n: usize,
        omega: T,
        period: T,
        lambdas: Vec<T::Cplx>,
        right: FourierBlocks<T>,
        left: FourierBlocks<T>,
        harmonic_cutoff: usize,
        sample_grid: usize,
        sys_fingerprint: String,
    ) -> Result<Self> {
        let dim = right.rows();
        if right.cols() != lambdas.len() || left.rows() != lambdas.len() || left.cols() != dim {
            return Err(Error::InvalidParameter(
                "inconsistent Floquet block shapes".into(),
            ));
        }
        let mut dec = Self {
            n,
            dim,
            omega,
            period,
            lambdas,
            right,
            left,
            harmonic_cutoff,
            sample_grid,
            truncation_warning: None,
            sys_fingerprint,
            rtol: 0.0,
            atol: 0.0,
        };
        dec.attach_tail_warning();
        Ok(dec)
    }

    fn attach_tail_warning(&mut self) {
        let ratio = Float::max(self.right.tail_ratio(), self.left.tail_ratio());
        if ratio > T::rl(1e-8) {
            self.truncation_warning = Some(format!(
                "harmonic tail ratio {:.3e} exceeds 1e-8 at cutoff {}",
                ratio.to_f64().unwrap_or(f64::NAN),
                self.harmonic_cutoff
            ));
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_modes(&self) -> usize {
        self.lambdas.len()
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn lambdas(&self) -> &[T::Cplx] {
        &self.lambdas
    }

    pub fn harmonic_cutoff(&self) -> usize {
        self.harmonic_cutoff
    }

    pub fn sample_grid(&self) -> usize {
        self.sample_grid
    }

    pub fn truncation_warning(&self) -> Option<&str> {
        self.truncation_warning.as_deref()
    }

    pub fn sys_fingerprint(&self) -> &str {
        &self.sys_fingerprint
    }

    /// m-th Fourier block of the right eigenvectors (dim x modes), zero
    /// outside the stored range.
    pub fn right_block(&self, m: isize) -> Array2<T::Cplx> {
        self.right.get(m)
    }

    /// m-th Fourier block of the left eigenvectors (modes x dim).
    pub fn left_block(&self, m: isize) -> Array2<T::Cplx> {
        self.left.get(m)
    }

    pub fn right_blocks(&self) -> &FourierBlocks<T> {
        &self.right
    }

    pub fn left_blocks(&self) -> &FourierBlocks<T> {
        &self.left
    }

    /// Stacked right eigenvectors Phi(t), columns indexed by mode.
    pub fn right_states(&self, t: T) -> Array2<T::Cplx> {
        self.right.eval(self.omega, t)
    }

    /// Stacked left eigenvectors X(t), rows indexed by mode.
    pub fn left_states(&self, t: T) -> Array2<T::Cplx> {
        self.left.eval(self.omega, t)
    }

    /// Shift the Brillouin gauge of every mode by `shift` zones: quasi-energies
    /// move by shift * Omega while the eigenvector harmonics re-index so that
    /// every reconstructed quantity is unchanged.
    pub fn gauge_shift(&self, shift: isize) -> Self {
        let cutoff = self.harmonic_cutoff;
        let shift_blocks = |blocks: &FourierBlocks<T>, sign: SeriesSign| {
            let collected: Vec<Array2<T::Cplx>> = (-(cutoff as isize)..=cutoff as isize)
                .map(|m| blocks.get(m + shift))
                .collect();
            FourierBlocks::from_blocks(collected, sign)
        };
        let mut out = self.clone();
        out.lambdas = self
            .lambdas
            .iter()
            .map(|l| *l + T::c(self.omega * T::rl(shift as f64), T::zero()))
            .collect();
        out.right = shift_blocks(&self.right, SeriesSign::EMinus);
        out.left = shift_blocks(&self.left, SeriesSign::EPlus);
        out
    }

    /// Serialize to a versioned JSON tree with complex numbers as [re, im].
    pub fn to_json(&self) -> Value {
        let c = |z: &T::Cplx| {
            json!([z.re().to_f64().unwrap_or(f64::NAN), z.im().to_f64().unwrap_or(f64::NAN)])
        };
        let blocks = |fb: &FourierBlocks<T>| -> Value {
            let mut out = Vec::new();
            for m in -(self.harmonic_cutoff as isize)..=self.harmonic_cutoff as isize {
                let b = fb.get(m);
                let rows: Vec<Value> = (0..b.nrows())
                    .map(|r| Value::Array((0..b.ncols()).map(|cidx| c(&b[[r, cidx]])).collect()))
                    .collect();
                out.push(json!({ "m": m, "rows": rows }));
            }
            Value::Array(out)
        };
        json!({
            "format": FORMAT_VERSION,
            "n": self.n,
            "dim": self.dim,
            "omega": self.omega.to_f64(),
            "period": self.period.to_f64(),
            "harmonic_cutoff": self.harmonic_cutoff,
            "sample_grid": self.sample_grid,
            "lambdas": self.lambdas.iter().map(c).collect::<Vec<_>>(),
            "right": blocks(&self.right),
            "left": blocks(&self.left),
            "truncation_warning": self.truncation_warning,
            "provenance": {
                "sys": self.sys_fingerprint,
                "ode_rtol": self.rtol,
                "ode_atol": self.atol,
            },
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Serialization(msg.to_string());
        if v.get("format").and_then(Value::as_str) != Some(FORMAT_VERSION) {
            return Err(bad("unknown format version"));
        }
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let dim = v["dim"].as_u64().ok_or_else(|| bad("missing dim"))? as usize;
        let omega = T::rl(v["omega"].as_f64().ok_or_else(|| bad("missing omega"))?);
        let period = T::rl(v["period"].as_f64().ok_or_else(|| bad("missing period"))?);
        let cutoff =
            v["harmonic_cutoff"].as_u64().ok_or_else(|| bad("missing harmonic_cutoff"))? as usize;
        let sample_grid =
            v["sample_grid"].as_u64().ok_or_else(|| bad("missing sample_grid"))? as usize;
        let cplx = |e: &Value| -> Result<T::Cplx> {
            let a = e.as_array().ok_or_else(|| bad("complex entries must be [re, im]"))?;
            if a.len() != 2 {
                return Err(bad("complex entries must be [re, im]"));
            }
            Ok(T::c(
                T::rl(a[0].as_f64().ok_or_else(|| bad("non-numeric complex part"))?),
                T::rl(a[1].as_f64().ok_or_else(|| bad("non-numeric complex part"))?),
            ))
        };
        let lambdas: Vec<T::Cplx> = v["lambdas"]
            .as_array()
            .ok_or_else(|| bad("missing lambdas"))?
            .iter()
            .map(cplx)
            .collect::<Result<_>>()?;
        let parse_blocks = |key: &str, rows: usize, cols: usize, sign: SeriesSign| -> Result<FourierBlocks<T>> {
            let arr = v[key].as_array().ok_or_else(|| bad("missing blocks"))?;
            if arr.len() != 2 * cutoff + 1 {
                return Err(bad("block list length mismatch"));
            }
            let mut blocks = Vec::with_capacity(arr.len());
            for e in arr {
                let mat = e["rows"].as_array().ok_or_else(|| bad("missing block rows"))?;
                if mat.len() != rows {
                    return Err(bad("block row count mismatch"));
                }
                let mut b = Array2::zeros((rows, cols));
                for (r, rowv) in mat.iter().enumerate() {
                    let rowv = rowv.as_array().ok_or_else(|| bad("block row must be array"))?;
                    if rowv.len() != cols {
                        return Err(bad("block column count mismatch"));
                    }
                    for (cidx, ev) in rowv.iter().enumerate() {
                        b[[r, cidx]] = cplx(ev)?;
                    }
                }
                blocks.push(b);
            }
            Ok(FourierBlocks::from_blocks(blocks, sign))
        };
        let modes = lambdas.len();
        let right = parse_blocks("right", dim, modes, SeriesSign::EMinus)?;
        let left = parse_blocks("left", modes, dim, SeriesSign::EPlus)?;
        let fingerprint = v["provenance"]["sys"].as_str().unwrap_or("").to_string();
        let mut dec = Self::from_parts(
            n,
            omega,
            period,
            lambdas,
            right,
            left,
            cutoff,
            sample_grid,
            fingerprint,
        )?;
        dec.rtol = v["provenance"]["ode_rtol"].as_f64().unwrap_or(0.0);
        dec.atol = v["provenance"]["ode_atol"].as_f64().unwrap_or(0.0);
        Ok(dec)
    }
}

/// Numerical propagator U_eff^n(t1, t0) of the effective Hamiltonian block,
/// dU/dt = -i H_eff^n(t) U with U(t0) = 1.
pub fn propagate_effective<T: Real>(
    sys: &LadderSystem<T>,
    n: usize,
    t0: T,
    t1: T,
    tol: &Tolerance<T>,
) -> Result<Array2<T::Cplx>> {
    if t1 < t0 {
        return Err(Error::InvalidParameter("t1 must be >= t0".into()));
    }
    let dim = sys.dim(n);
    let y0 = Array2::eye(dim);
    if t1 == t0 {
        return Ok(y0);
    }
    let mi = T::c(T::zero(), -T::one());
    ode::integrate(
        |t, u: &Array2<T::Cplx>| {
            let mut du = sys.h_eff_block(n, t).dot(u);
            du.mapv_inplace(|v| v * mi);
            du
        },
        t0,
        t1,
        y0,
        tol,
    )
}

/// Fold a quasi-energy real part into [-Omega/2, Omega/2).
pub fn fold_quasi_energy<T: Real>(eps: T, omega: T) -> T {
    eps - omega * Float::floor(eps / omega + T::rl(0.5))
}

/// Solve the Floquet eigenproblem of H_eff^n(t) by diagonalizing the
/// monodromy matrix and extracting Fourier blocks of the periodic
/// biorthogonal eigenvectors on an equispaced sample grid.
///
/// Left eigenvectors come from inverting the stacked right eigenvectors at
/// each sample, which enforces discrete biorthonormality exactly; the adjoint
/// Floquet equation is used as an independent check in `floquet_residual`.
pub fn floquet_decompose<T: Real>(
    sys: &LadderSystem<T>,
    n: usize,
    harmonic_cutoff: usize,
    samples: usize,
    tol: &Tolerance<T>,
) -> Result<FloquetDecomposition<T>> {
    if !samples.is_power_of_two() || samples < 4 * harmonic_cutoff.max(1) {
        return Err(Error::InvalidParameter(format!(
            "samples ({samples}) must be a power of two >= 4 * harmonic_cutoff ({harmonic_cutoff})"
        )));
    }
    let dim = sys.dim(n);
    let period = sys.period();
    let omega = sys.omega();

    let times: Vec<T> =
        (1..=samples).map(|j| period * T::rl(j as f64) / T::rl(samples as f64)).collect();
    let mut u_samples: Vec<Array2<T::Cplx>> = Vec::with_capacity(samples + 1);
    u_samples.push(Array2::eye(dim));
    let mi = T::c(T::zero(), -T::one());
    ode::drive(
        |t, u: &Array2<T::Cplx>| {
            let mut du = sys.h_eff_block(n, t).dot(u);
            du.mapv_inplace(|v| v * mi);
            du
        },
        T::zero(),
        Array2::eye(dim),
        &times,
        |_, u| u_samples.push(u.clone()),
        tol,
    )?;
    let monodromy = u_samples.pop().unwrap(); // U(T, 0); t = 0 entry retained.

    let (mu, v) = monodromy.eig()?;
    let v_inv = match v.inv() {
        Ok(inv) => inv,
        Err(_) => {
            return Err(Error::DegenerateFloquet { cond: f64::INFINITY });
        }
    };
    let cond = frob_norm::<T>(&v) * frob_norm::<T>(&v_inv);
    if cond > T::rl(1e10) {
        return Err(Error::DegenerateFloquet { cond: cond.to_f64().unwrap_or(f64::NAN) });
    }
    let pass_tol = Float::max(T::rl(1e-8), T::epsilon() * T::rl(1e4));
    for m in mu.iter() {
        if m.abs() > T::one() + pass_tol {
            return Err(Error::PassivityViolation {
                max_abs: m.abs().to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    // lambda = i ln(mu) / T on the principal branch, then fold.
    let lambdas: Vec<T::Cplx> = mu
        .iter()
        .map(|m| {
            let l = T::i() * m.ln() / T::cr(period);
            let eps = fold_quasi_energy(l.re(), omega);
            T::c(eps, l.im())
        })
        .collect();

    // Periodic right states Phi(t_j) = e^{i lambda t_j} U(t_j, 0) V and left
    // states X(t_j) = Phi(t_j)^{-1}.
    let mut right_samples = Vec::with_capacity(samples);
    let mut left_samples = Vec::with_capacity(samples);
    for (j, u) in u_samples.iter().enumerate() {
        let t = period * T::rl(j as f64) / T::rl(samples as f64);
        let mut phi = u.dot(&v);
        for (k, lam) in lambdas.iter().enumerate() {
            let phase = (T::i() * *lam * T::cr(t)).exp();
            for r in 0..dim {
                phi[[r, k]] = phi[[r, k]] * phase;
            }
        }
        let x = phi
            .inv()
            .map_err(|_| Error::DegenerateFloquet { cond: f64::INFINITY })?;
        right_samples.push(phi);
        left_samples.push(x);
    }

    let right = FourierBlocks::from_samples(&right_samples, SeriesSign::EMinus, harmonic_cutoff);
    let left = FourierBlocks::from_samples(&left_samples, SeriesSign::EPlus, harmonic_cutoff);

    let mut dec = FloquetDecomposition::from_parts(
        n,
        omega,
        period,
        lambdas,
        right,
        left,
        harmonic_cutoff,
        samples,
        sys.fingerprint().to_string(),
    )?;
    dec.rtol = tol.rtol.to_f64().unwrap_or(f64::NAN);
    dec.atol = tol.atol.to_f64().unwrap_or(f64::NAN);
    Ok(dec)
}

/// Synthesize U_eff^n(t, s) from the Floquet data:
/// sum_k |phi_k(t)> <chi_k(s)| e^{-i lambda_k (t - s)}.
pub fn reconstruct_propagator<T: Real>(
    dec: &FloquetDecomposition<T>,
    t: T,
    s: T,
) -> Array2<T::Cplx> {
    let phi = dec.right_states(t);
    let x = dec.left_states(s);
    let mut weighted = x;
    for (k, lam) in dec.lambdas().iter().enumerate() {
        let phase = (T::c(T::zero(), -T::one()) * *lam * T::cr(t - s)).exp();
        for c in 0..weighted.ncols() {
            weighted[[k, c]] = weighted[[k, c]] * phase;
        }
    }
    phi.dot(&weighted)
}

/// Maximum Floquet-equation residual over modes and sampled times, for both
/// the right states (H_eff |phi> + i d/dt |phi> = lambda |phi>) and the left
/// states through the adjoint equation; derivatives are evaluated spectrally.
pub fn floquet_residual<T: Real>(
    sys: &LadderSystem<T>,
    dec: &FloquetDecomposition<T>,
    t_samples: usize,
) -> T {
    let mut max_res = T::zero();
    let period = dec.period();
    let omega = dec.omega();
    for j in 0..t_samples.max(1) {
        let t = period * (T::rl(j as f64) + T::rl(0.391)) / T::rl(t_samples.max(1) as f64);
        let h = sys.h_eff_block(dec.n(), t);
        let phi = dec.right_blocks().eval(omega, t);
        let dphi = dec.right_blocks().eval_deriv(omega, t);
        let x = dec.left_blocks().eval(omega, t);
        let dx = dec.left_blocks().eval_deriv(omega, t);
        let h_phi = h.dot(&phi);
        let x_h = x.dot(&h);
        for (k, lam) in dec.lambdas().iter().enumerate() {
            let mut acc = T::zero();
            for r in 0..dec.dim() {
                // Right states satisfy (H_eff - i d/dt) |phi> = lambda |phi>,
                // the form consistent with the propagator decomposition.
                let res = h_phi[[r, k]] - T::i() * dphi[[r, k]] - *lam * phi[[r, k]];
                acc = acc + res.square();
            }
            max_res = Float::max(max_res, Float::sqrt(acc));
            let mut acc_l = T::zero();
            for c in 0..dec.dim() {
                let res = x_h[[k, c]] + T::i() * dx[[k, c]] - *lam * x[[k, c]];
                acc_l = acc_l + res.square();
            }
            max_res = Float::max(max_res, Float::sqrt(acc_l));
        }
    }
    max_res
}

fn frob_norm<T: Real>(a: &Array2<T::Cplx>) -> T {
    let mut acc = T::zero();
    for v in a.iter() {
        acc = acc + v.square();
    }
    Float::sqrt(acc)
}

/// Stacked-state matrix norm of the difference of two matrices relative to
/// the norm of the second.
pub fn relative_diff<T: Real>(a: &Array2<T::Cplx>, b: &Array2<T::Cplx>) -> T {
    let mut diff = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        diff = diff + (*x - *y).square();
    }
    let nb = frob_norm::<T>(b);
    if nb == T::zero() {
        Float::sqrt(diff)
    } else {
        Float::sqrt(diff) / nb
    }
}
