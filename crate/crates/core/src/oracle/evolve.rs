use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use super::DenseState;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// How `e^{−iHt}ψ` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionMethod {
    /// Adaptive Dormand–Prince 5(4) on the Schrödinger equation.
    RungeKutta,
    /// Dense matrix exponential (Padé scaling and squaring).
    Expm,
    /// Both, failing unless they agree to `agreement`. Falls back to the
    /// integrator alone above `expm_max_dim`.
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveOptions {
    pub method: EvolutionMethod,
    /// Local error tolerance per integrator step.
    pub tol: f64,
    /// Largest allowed `max_i |ψ_rk − ψ_expm|`.
    pub agreement: f64,
    pub expm_max_dim: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            method: EvolutionMethod::Both,
            tol: 1e-13,
            agreement: 1e-8,
            expm_max_dim: 2000,
        }
    }
}

/// `e^{−iHt}ψ₀` with the default options and the given step tolerance.
pub fn evolve(h: &CsrMatrix, psi0: &DenseState, t: f64, tol: f64) -> Result<DenseState> {
    let options = EvolveOptions {
        tol,
        ..EvolveOptions::default()
    };
    let mut out = evolve_series(h, psi0, &[t], &options)?;
    Ok(out.pop().expect("one time requested"))
}

/// States at each of `times`, which must be sorted (ascending or
/// descending) with the first one reached from `t = 0`.
pub fn evolve_series(
    h: &CsrMatrix,
    psi0: &DenseState,
    times: &[f64],
    options: &EvolveOptions,
) -> Result<Vec<DenseState>> {
    if h.dim() != psi0.amplitudes.len() {
        return Err(Error::invalid(format!(
            "Hamiltonian dimension {} does not match state dimension {}",
            h.dim(),
            psi0.amplitudes.len()
        )));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("evolution times must be finite"));
    }
    if !(options.tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {}",
            options.tol
        )));
    }
    let ascending = times.windows(2).all(|w| w[1] >= w[0]);
    let descending = times.windows(2).all(|w| w[1] <= w[0]);
    if !(ascending || descending) || times.first().is_some_and(|&t| t * times.last().unwrap_or(&t) < 0.0) {
        return Err(Error::invalid("evolution times must be monotone and of one sign"));
    }

    let method = match options.method {
        EvolutionMethod::Both if h.dim() > options.expm_max_dim => EvolutionMethod::RungeKutta,
        m => m,
    };
    let wrap = |amplitudes: Vec<Vec<Complex64>>| -> Vec<DenseState> {
        amplitudes
            .into_iter()
            .map(|a| DenseState {
                amplitudes: a,
                basis: psi0.basis.clone(),
            })
            .collect()
    };
    match method {
        EvolutionMethod::RungeKutta => Ok(wrap(runge_kutta_series(h, &psi0.amplitudes, times, options.tol)?)),
        EvolutionMethod::Expm => Ok(wrap(expm_series(h, &psi0.amplitudes, times)?)),
        EvolutionMethod::Both => {
            let rk = runge_kutta_series(h, &psi0.amplitudes, times, options.tol)?;
            let ex = expm_series(h, &psi0.amplitudes, times)?;
            for (i, (a, b)) in rk.iter().zip(&ex).enumerate() {
                let gap = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                if gap > options.agreement {
                    return Err(Error::Accuracy {
                        message: format!(
                            "integrator and matrix exponential differ by {gap:e} at t = {}",
                            times[i]
                        ),
                        best_estimate: gap,
                        error_estimate: gap,
                    });
                }
            }
            Ok(wrap(ex))
        }
    }
}

fn expm_series(h: &CsrMatrix, psi0: &[Complex64], times: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    let dense = h.to_dense();
    let mut cache: HashMap<u64, CMatrix> = HashMap::new();
    let mut psi = nalgebra::DVector::from_column_slice(psi0);
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let dt = t - now;
        if dt != 0.0 {
            let u = cache
                .entry(dt.to_bits())
                .or_insert_with(|| (&dense * Complex64::new(0.0, -dt)).exp());
            psi = &*u * psi;
        }
        if psi.iter().any(|z| !z.is_finite()) {
            return Err(Error::Accuracy {
                message: format!("matrix exponential produced non-finite values at t = {t}"),
                best_estimate: f64::NAN,
                error_estimate: f64::INFINITY,
            });
        }
        now = t;
        out.push(psi.as_slice().to_vec());
    }
    Ok(out)
}

const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn rhs(h: &CsrMatrix, y: &[Complex64], out: &mut [Complex64]) {
    h.mul_vec(y, out);
    for z in out.iter_mut() {
        *z = Complex64::new(z.im, -z.re);
    }
}

fn runge_kutta_series(h: &CsrMatrix, psi0: &[Complex64], times: &[f64], tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let n = psi0.len();
    let mut y = psi0.to_vec();
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; 7];
    let mut stage = vec![Complex64::new(0.0, 0.0); n];
    let mut trial = vec![Complex64::new(0.0, 0.0); n];
    rhs(h, &y, &mut k[0]);
    let rate = h.norm_bound().max(1e-300);
    let mut step = 0.1 / rate;
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());

    for &target in times {
        let direction = if target >= now { 1.0 } else { -1.0 };
        while (target - now) * direction > 0.0 {
            let remaining = (target - now).abs();
            let last = step >= remaining;
            let dt = direction * step.min(remaining);
            for s in 0..6 {
                for i in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, a) in A[s].iter().enumerate() {
                        acc += k[j][i] * *a;
                    }
                    stage[i] = y[i] + acc * dt;
                }
                rhs(h, &stage, &mut k[s + 1]);
                if s == 5 {
                    trial.copy_from_slice(&stage);
                }
            }
            let mut err: f64 = 0.0;
            for i in 0..n {
                let mut e = Complex64::new(0.0, 0.0);
                for (j, c) in E.iter().enumerate() {
                    e += k[j][i] * *c;
                }
                err = err.max((e * dt).norm());
            }
            let ratio = err / tol;
            if ratio <= 1.0 {
                now = if last { target } else { now + dt };
                std::mem::swap(&mut y, &mut trial);
                k.swap(0, 6);
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !(last && ratio <= 1.0) {
                step *= factor;
            }
            if step < 1e-14 * now.abs().max(1.0) / rate.max(1.0) || !step.is_finite() {
                return Err(Error::Accuracy {
                    message: format!("integrator step size underflow at t = {now}"),
                    best_estimate: now,
                    error_estimate: err,
                });
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
