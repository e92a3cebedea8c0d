//! Two-mode tunneling of a condensate in a symmetric double well while the
//! pumped atoms drive the vacuum field.
//!
//! Sectors are labelled `(n, m)`: `n` atoms in total, `m` of them in the odd
//! mode. The atom Hamiltonian is `ΩN + δT` with `T = b₀†b₀ − b₁†b₁`, and each
//! field mode is driven by `F_k = μ_k n + ζ_k (n − 2m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dephasing::{coherent_product_overlap, forced_mode, ModeDisplacement};
use crate::error::{Error, Result};
use crate::model::ModeGrid;
use crate::specfun::pairwise_sum;

/// `f_m^n(t) = (−1)^m 2^{−n/2} √C(n,m) e^{2imδt}`, the amplitude of
/// `|n−m, m⟩` for `n` atoms started in the left well, relative to the
/// common phase `e^{−in(Ω+δ)t}`.
pub fn amplitude_f(n: u32, m: u32, delta: f64, t: f64) -> Result<Complex64> {
    if m > n {
        return Err(Error::invalid(format!("amplitude_f needs m ≤ n, got m = {m}, n = {n}")));
    }
    let magnitude = (0.5 * ln_binomial(n, m) - 0.5 * n as f64 * std::f64::consts::LN_2).exp();
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(Complex64::from_polar(sign * magnitude, 2.0 * m as f64 * delta * t))
}

fn ln_binomial(n: u32, m: u32) -> f64 {
    let m = m.min(n - m);
    let terms: Vec<f64> = (1..=m).map(|i| ((n - m + i) as f64 / i as f64).ln()).collect();
    pairwise_sum(&terms)
}

fn sector_forcing(n: u32, m: u32, coupling: Complex64, tunneling: Complex64) -> Complex64 {
    coupling * n as f64 + tunneling * (n as f64 - 2.0 * m as f64)
}

/// Field state `|v_m^n(t)⟩` as per-mode coherent displacements; the kick
/// phases are in `gamma`.
pub fn field_state_v(n: u32, m: u32, grid: &ModeGrid, t: f64) -> Result<Vec<ModeDisplacement>> {
    if m > n {
        return Err(Error::invalid(format!(
            "field_state_v needs m ≤ n, got m = {m}, n = {n}"
        )));
    }
    Ok(grid
        .modes()
        .iter()
        .map(|mode| {
            let force = sector_forcing(n, m, mode.effective_coupling(), mode.effective_tunneling());
            forced_mode(force, mode.omega, t)
        })
        .collect())
}

fn kick_phase(v: &[ModeDisplacement]) -> f64 {
    let g: Vec<f64> = v.iter().map(|d| d.gamma).collect();
    pairwise_sum(&g)
}

/// `⟨a|b⟩` of two field states including their kick phases.
fn field_overlap(a: &[ModeDisplacement], b: &[ModeDisplacement]) -> Complex64 {
    coherent_product_overlap(a, b) * Complex64::from_polar(1.0, kick_phase(b) - kick_phase(a))
}

/// `O_m = ⟨v_{m+1}^n|v_m^n⟩` for `m = 0 … n−1`.
pub fn tunneling_overlaps(n: u32, grid: &ModeGrid, t: f64) -> Result<Vec<Complex64>> {
    let states = (0..=n)
        .map(|m| field_state_v(n, m, grid, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(states.windows(2).map(|w| field_overlap(&w[1], &w[0])).collect())
}

/// `|c_n|²` of the left-well coherent state `|α⟩_l`, up to the first `N`
/// with a Poisson tail `Σ_{n>N}|c_n|²` below `tail_tol`.
pub fn poisson_weights(alpha: f64, tail_tol: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::invalid(format!(
            "tail tolerance must lie in (0, 1), got {tail_tol}"
        )));
    }
    let mean = alpha * alpha;
    let mut log_p = -mean;
    let mut weights = vec![log_p.exp()];
    loop {
        let n = weights.len() as f64;
        log_p += mean.ln() - n.ln();
        // tail after the current term is bounded by a geometric series
        let next = (log_p + mean.ln() - (n + 1.0).ln()).exp();
        weights.push(log_p.exp());
        if n + 2.0 > mean && next / (1.0 - mean / (n + 2.0)) < tail_tol {
            return Ok(weights);
        }
        if weights.len() > 100_000 {
            return Err(Error::Resource(format!(
                "Poisson tail for α² = {mean} needs more than 10⁵ terms"
            )));
        }
    }
}

/// Poisson weights for `n ≤ max_atoms`, renormalized to unit sum.
pub fn truncated_poisson_weights(alpha: f64, max_atoms: u32) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    let mean = alpha * alpha;
    let mut log_p = -mean;
    let mut weights = vec![log_p];
    for n in 1..=max_atoms {
        log_p += mean.ln() - (n as f64).ln();
        weights.push(log_p);
    }
    let top = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = weights.iter().map(|l| (l - top).exp()).collect();
    let total = pairwise_sum(&weights);
    Ok(weights.iter().map(|w| w / total).collect())
}

/// Which atom numbers enter the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AtomTruncation {
    /// Keep `n` until the Poisson tail is below `tail_tol`.
    Tail { tail_tol: f64 },
    /// Keep `n ≤ max_atoms` and renormalize.
    MaxAtoms { max_atoms: u32 },
}

impl Default for AtomTruncation {
    fn default() -> Self {
        AtomTruncation::Tail { tail_tol: 1e-15 }
    }
}

impl AtomTruncation {
    pub fn weights(&self, alpha: f64) -> Result<Vec<f64>> {
        match *self {
            AtomTruncation::Tail { tail_tol } => poisson_weights(alpha, tail_tol),
            AtomTruncation::MaxAtoms { max_atoms } => truncated_poisson_weights(alpha, max_atoms),
        }
    }
}

/// One `(n, m)` component of the exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeTerm {
    pub n: u32,
    pub m: u32,
    /// `c_n e^{−in(Ω+δ)t} f_m^n(t)` times the kick phase of `|v_m^n⟩`.
    pub amplitude: Complex64,
    pub displacements: Vec<ModeDisplacement>,
}

/// `|Ψ(t)⟩ = Σ_{n,m} amplitude |n−m, m⟩ ⊗ |v_m^n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub t: f64,
    pub terms: Vec<TwoModeTerm>,
}

impl TwoModeState {
    pub fn norm_sqr(&self) -> f64 {
        let w: Vec<f64> = self.terms.iter().map(|x| x.amplitude.norm_sqr()).collect();
        pairwise_sum(&w)
    }

    /// `p = ⟨b_r†b_r − b_l†b_l⟩ = 2 Re⟨b₁†b₀⟩`.
    pub fn population_difference(&self) -> f64 {
        let mut terms = Vec::new();
        for pair in self.terms.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            if lo.n != hi.n {
                continue;
            }
            let ladder = ((lo.m + 1) as f64 * (lo.n - lo.m) as f64).sqrt();
            let z = hi.amplitude.conj()
                * lo.amplitude
                * ladder
                * coherent_product_overlap(&hi.displacements, &lo.displacements);
            terms.push(z.re);
        }
        2.0 * pairwise_sum(&terms)
    }
}

/// Evolve the left-well coherent state `|α⟩_l ⊗ |0⟩` for the two-mode model.
pub fn evolve_two_mode_state(
    alpha: f64,
    grid: &ModeGrid,
    omega: f64,
    delta: f64,
    t: f64,
    truncation: AtomTruncation,
) -> Result<TwoModeState> {
    check_time(t)?;
    let weights = truncation.weights(alpha)?;
    let mut terms = Vec::new();
    for (n, w) in weights.iter().enumerate() {
        let n = n as u32;
        let common = Complex64::from_polar(w.sqrt(), -(n as f64) * (omega + delta) * t);
        for m in 0..=n {
            let displacements = field_state_v(n, m, grid, t)?;
            let kick = Complex64::from_polar(1.0, kick_phase(&displacements));
            terms.push(TwoModeTerm {
                n,
                m,
                amplitude: common * amplitude_f(n, m, delta, t)? * kick,
                displacements,
            });
        }
    }
    Ok(TwoModeState { t, terms })
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("time must be non-negative, got {t}")))
    }
}

/// `p(t) = 2 Re Σ_n Σ_m |c_n|² f_m^n f_{m+1}^{n*} √((m+1)(n−m)) O_m` with the
/// exact `O_m` of every `(n, m)` pair.
pub fn population_difference_exact(
    alpha: f64,
    grid: &ModeGrid,
    delta: f64,
    t: f64,
    truncation: AtomTruncation,
) -> Result<f64> {
    check_time(t)?;
    let weights = truncation.weights(alpha)?;
    let mut per_n = Vec::with_capacity(weights.len());
    for (n, w) in weights.iter().enumerate() {
        let n = n as u32;
        let overlaps = tunneling_overlaps(n, grid, t)?;
        let mut terms = Vec::with_capacity(overlaps.len());
        for (m, o) in overlaps.iter().enumerate() {
            let m = m as u32;
            let f = amplitude_f(n, m, delta, t)? * amplitude_f(n, m + 1, delta, t)?.conj();
            let ladder = ((m + 1) as f64 * (n - m) as f64).sqrt();
            terms.push((f * o).re * ladder);
        }
        per_n.push(w * pairwise_sum(&terms));
    }
    Ok(2.0 * pairwise_sum(&per_n))
}

/// Fit of `O_m ≈ J e^{i(φ₀ + mS)}` for `m = 0 … n_ref−1` in the `n_ref` sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsFit {
    /// Geometric mean of `|O_m|`.
    pub j: f64,
    /// Mean unwrapped phase increment; `None` when every `O_m` vanishes.
    pub s: Option<f64>,
    /// `arg O_0`.
    pub offset: f64,
    /// `max_m |O_m − J e^{i(φ₀ + mS)}|`.
    pub residual: f64,
}

/// Default reference sector `⌈α²⌉ + 3`.
pub fn default_n_ref(alpha: f64) -> u32 {
    (alpha * alpha).ceil() as u32 + 3
}

#[allow(non_snake_case)]
pub fn extract_JS(grid: &ModeGrid, n_ref: u32, t: f64) -> Result<JsFit> {
    if n_ref < 2 {
        return Err(Error::invalid(format!("n_ref must be at least 2, got {n_ref}")));
    }
    check_time(t)?;
    let overlaps = tunneling_overlaps(n_ref, grid, t)?;
    if overlaps.iter().any(|o| o.norm() < 1e-300) {
        return Ok(JsFit {
            j: 0.0,
            s: None,
            offset: 0.0,
            residual: 0.0,
        });
    }
    let logs: Vec<f64> = overlaps.iter().map(|o| o.norm().ln()).collect();
    let j = (pairwise_sum(&logs) / overlaps.len() as f64).exp();
    let steps: Vec<f64> = overlaps.windows(2).map(|w| (w[1] / w[0]).arg()).collect();
    let s = pairwise_sum(&steps) / steps.len() as f64;
    let offset = overlaps[0].arg();
    let residual = overlaps
        .iter()
        .enumerate()
        .map(|(m, o)| (o - Complex64::from_polar(j, offset + m as f64 * s)).norm())
        .fold(0.0, f64::max);
    Ok(JsFit {
        j,
        s: Some(s),
        offset,
        residual,
    })
}

/// Form of the compact population difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactVariant {
    /// `Re(−Jα² e^{(e^{iS}−1)α²/2} e^{−2iδt})`, obtained by summing the exact
    /// series with `O_m = J e^{imS}`.
    #[default]
    Derived,
    /// `Re(−Jα² e^{(1−e^{iS})α²/2} e^{2iδt})`, as usually quoted.
    Verbatim,
}

/// Population difference with `O_m` replaced by `J e^{imS}`.
pub fn population_difference_compact(alpha: f64, j: f64, s: f64, delta: f64, t: f64, variant: CompactVariant) -> f64 {
    let a2 = alpha * alpha;
    let e = Complex64::from_polar(1.0, s);
    let z = match variant {
        CompactVariant::Derived => (0.5 * a2 * (e - 1.0)).exp() * Complex64::from_polar(1.0, -2.0 * delta * t),
        CompactVariant::Verbatim => (0.5 * a2 * (1.0 - e)).exp() * Complex64::from_polar(1.0, 2.0 * delta * t),
    };
    -j * a2 * z.re
}

/// `θ` with `tan θ = Re e^w / Re(i e^w)`, `w = (1 − e^{iS})α²/2`, taken from
/// the two-argument arctangent. `None` when both parts vanish.
pub fn phase_shift(s: f64, alpha: f64) -> Option<f64> {
    let w = 0.5 * alpha * alpha * (1.0 - Complex64::from_polar(1.0, s));
    let ew = w.exp();
    let num = ew.re;
    let den = (Complex64::i() * ew).re;
    if num.abs() < 1e-300 && den.abs() < 1e-300 {
        return None;
    }
    let theta = num.atan2(den);
    Some(if theta == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        theta
    })
}

/// Inputs of a tunneling trace.
#[derive(Debug, Clone)]
pub struct TunnelingConfig {
    pub alpha: f64,
    pub delta: f64,
    pub grid: ModeGrid,
    pub times: Vec<f64>,
    pub truncation: AtomTruncation,
    pub n_ref: Option<u32>,
    pub variant: CompactVariant,
}

/// Exact and compact population difference with the fitted `J`, `S`, `θ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TunnelingTrace {
    pub times: Vec<f64>,
    pub p_exact: Vec<f64>,
    pub p_compact: Vec<f64>,
    pub j: Vec<f64>,
    pub s: Vec<Option<f64>>,
    pub theta: Vec<Option<f64>>,
}

pub fn tunneling_trace(config: &TunnelingConfig) -> Result<TunnelingTrace> {
    let n_ref = config.n_ref.unwrap_or_else(|| default_n_ref(config.alpha));
    let mut trace = TunnelingTrace::default();
    for &t in &config.times {
        let exact = population_difference_exact(config.alpha, &config.grid, config.delta, t, config.truncation)?;
        let fit = extract_JS(&config.grid, n_ref, t)?;
        let compact = population_difference_compact(
            config.alpha,
            fit.j,
            fit.s.unwrap_or(0.0),
            config.delta,
            t,
            config.variant,
        );
        trace.times.push(t);
        trace.p_exact.push(exact);
        trace.p_compact.push(compact);
        trace.j.push(fit.j);
        trace.s.push(fit.s);
        trace.theta.push(fit.s.and_then(|s| phase_shift(s, config.alpha)));
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_mode(omega: f64, mu: f64, zeta: f64) -> ModeGrid {
        ModeGrid::explicit(1.0, &[(omega, c(mu, 0.0), c(zeta, 0.0))]).unwrap()
    }

    fn uncoupled() -> ModeGrid {
        one_mode(1.0, 0.0, 0.0)
    }

    #[test]
    fn amplitude_values() {
        assert_eq!(amplitude_f(0, 0, 0.3, 1.0).unwrap(), c(1.0, 0.0));
        let f = amplitude_f(1, 1, 0.3, 1.0).unwrap();
        assert!((f - Complex64::from_polar(-std::f64::consts::FRAC_1_SQRT_2, 0.6)).norm() < 1e-15);
        assert!(amplitude_f(2, 3, 0.0, 0.0).is_err());
    }

    #[test]
    fn binomial_completeness() {
        for n in 0..=20 {
            let total: f64 = (0..=n).map(|m| amplitude_f(n, m, 0.7, 2.0).unwrap().norm_sqr()).sum();
            assert!((total - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn vacuum_sector_has_no_field() {
        let v = field_state_v(0, 0, &one_mode(1.0, 0.2, 0.3), 2.0).unwrap();
        assert!(v.iter().all(|d| d.alpha.norm() == 0.0 && d.gamma == 0.0));
    }

    #[test]
    fn number_coupling_does_not_tell_modes_apart() {
        let grid = one_mode(1.3, 0.4, 0.0);
        let a = field_state_v(3, 0, &grid, 2.0).unwrap();
        let b = field_state_v(3, 2, &grid, 2.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tunneling_coupling_splits_field_states() {
        let (zeta, w, t) = (0.1, 1.0, 2.5);
        let grid = one_mode(w, 0.0, zeta);
        let a = field_state_v(1, 0, &grid, t).unwrap()[0].alpha;
        let b = field_state_v(1, 1, &grid, t).unwrap()[0].alpha;
        let expected = 2.0 * zeta * (Complex64::from_polar(1.0, -w * t) - 1.0) / w;
        assert!((a - b - expected).norm() < 1e-15);
    }

    #[test]
    fn poisson_tail_is_small() {
        for alpha in [0.5, 1.0, 2.0] {
            let w = poisson_weights(alpha, 1e-12).unwrap();
            let total: f64 = w.iter().sum();
            assert!((1.0 - total).abs() < 1e-12);
            assert!(w.len() <= 27);
        }
        let t = truncated_poisson_weights(1.0, 6).unwrap();
        assert_eq!(t.len(), 7);
        assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn free_tunneling_is_harmonic() {
        let (alpha, delta) = (1.3, 0.25);
        for t in [0.0, 0.4, 1.7, 6.0] {
            let p = population_difference_exact(alpha, &uncoupled(), delta, t, AtomTruncation::default()).unwrap();
            let expected = -alpha * alpha * (2.0 * delta * t).cos();
            assert!((p - expected).abs() < 1e-10, "t = {t}: {p} vs {expected}");
        }
    }

    #[test]
    fn state_is_normalized_and_reproduces_p() {
        let grid = ModeGrid::explicit(
            1.0,
            &[(1.0, c(0.05, 0.0), c(0.1, 0.0)), (0.6, c(0.0, 0.02), c(0.07, 0.03))],
        )
        .unwrap();
        for t in [0.0, 1.0, 3.3] {
            let trunc = AtomTruncation::default();
            let state = evolve_two_mode_state(1.0, &grid, 2.0, 0.2, t, trunc).unwrap();
            assert!((state.norm_sqr() - 1.0).abs() < 1e-9);
            let p = population_difference_exact(1.0, &grid, 0.2, t, trunc).unwrap();
            assert!((state.population_difference() - p).abs() < 1e-13);
        }
    }

    #[test]
    fn js_fit_limits() {
        let fit = extract_JS(&uncoupled(), 4, 3.0).unwrap();
        assert!((fit.j - 1.0).abs() < 1e-15);
        assert!(fit.s.unwrap().abs() < 1e-15);
        let grid = one_mode(1.0, 0.0, 0.2);
        let fit = extract_JS(&grid, 4, 2.0 * PI).unwrap();
        assert!((fit.j - 1.0).abs() < 1e-12);
        assert!(extract_JS(&grid, 1, 1.0).is_err());
    }

    #[test]
    fn js_fit_for_tunneling_coupling() {
        let (zeta, w, t) = (0.01, 1.0, 1.3);
        let grid = one_mode(w, 0.0, zeta);
        let overlaps = tunneling_overlaps(4, &grid, t).unwrap();
        let fit = extract_JS(&grid, 4, t).unwrap();
        assert!((fit.j - overlaps[0].norm()).abs() < 1e-3);
        assert!(fit.residual < 1e-3);
        let theta = 4.0 * zeta * zeta * (w * t - (w * t).sin()) / (w * w);
        assert!((fit.s.unwrap() + 2.0 * theta).abs() < 1e-12);
    }

    #[test]
    fn compact_limits() {
        let (alpha, delta) = (1.2, 0.3);
        for t in [0.0, 0.8, 2.0] {
            for variant in [CompactVariant::Derived, CompactVariant::Verbatim] {
                let p = population_difference_compact(alpha, 1.0, 0.0, delta, t, variant);
                assert!((p + alpha * alpha * (2.0 * delta * t).cos()).abs() < 1e-14);
                assert_eq!(population_difference_compact(alpha, 0.0, 0.4, delta, t, variant), 0.0);
            }
        }
    }

    #[test]
    fn compact_by_explicit_arithmetic() {
        let (alpha, j, s, delta, t) = (1.0f64, 0.5, 0.3f64, 1.0f64, 0.7f64);
        // Re(−Jα² e^{a} e^{ib}) with a = α²(1 − cos S)/2 − iα² sin S/2
        let a_re = 0.5 * alpha * alpha * (1.0 - s.cos());
        let a_im = -0.5 * alpha * alpha * s.sin();
        let expected = -j * alpha * alpha * a_re.exp() * (a_im + 2.0 * delta * t).cos();
        let p = population_difference_compact(alpha, j, s, delta, t, CompactVariant::Verbatim);
        assert!((p - expected).abs() < 1e-12);
        let d_re = -a_re;
        let d_im = 0.5 * alpha * alpha * s.sin();
        let expected = -j * alpha * alpha * d_re.exp() * (d_im - 2.0 * delta * t).cos();
        let p = population_difference_compact(alpha, j, s, delta, t, CompactVariant::Derived);
        assert!((p - expected).abs() < 1e-12);
    }

    #[test]
    fn phase_shift_symmetries() {
        assert!((phase_shift(0.0, 1.3).unwrap() - FRAC_PI_2).abs() < 1e-15);
        for s in [0.1, 0.5, 1.7, 3.0] {
            let a = phase_shift(s, 1.1).unwrap();
            let b = phase_shift(-s, 1.1).unwrap();
            assert!((a + b - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_shift_matches_fitted_lag() {
        let (s, alpha, j, delta) = (0.5, 1.0, 0.8, 0.4);
        let period = PI / delta;
        let samples = 400;
        let (mut cc, mut ss, mut cs, mut pc, mut ps) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..samples {
            let t = period * i as f64 / samples as f64;
            let (co, si) = ((2.0 * delta * t).cos(), (2.0 * delta * t).sin());
            let p = population_difference_compact(alpha, j, s, delta, t, CompactVariant::Verbatim);
            cc += co * co;
            ss += si * si;
            cs += co * si;
            pc += p * co;
            ps += p * si;
        }
        let det = cc * ss - cs * cs;
        let a = (pc * ss - ps * cs) / det;
        let b = (ps * cc - pc * cs) / det;
        let fitted = (-a).atan2(-b);
        assert!((fitted - phase_shift(s, alpha).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn zero_coupling_trace_agrees() {
        let config = TunnelingConfig {
            alpha: 1.0,
            delta: 0.2,
            grid: uncoupled(),
            times: (0..50).map(|i| i as f64 * 0.3).collect(),
            truncation: AtomTruncation::default(),
            n_ref: None,
            variant: CompactVariant::Derived,
        };
        let trace = tunneling_trace(&config).unwrap();
        for (a, b) in trace.p_exact.iter().zip(&trace.p_compact) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
