use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Kronrod abscissae of the 21-point rule on [-1, 1], descending, non-negative
/// half. Odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_5,
    0.973_906_528_517_171_720_078_0,
    0.930_157_491_355_708_226_001_2,
    0.865_063_366_688_984_510_732_1,
    0.780_817_726_586_416_897_063_7,
    0.679_409_568_299_024_406_234_3,
    0.562_757_134_668_604_683_339_0,
    0.433_395_394_129_247_190_799_3,
    0.294_392_862_701_460_198_131_1,
    0.148_874_338_981_631_210_884_8,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_06,
    0.032_558_162_307_964_727_478_82,
    0.054_755_896_574_351_996_031_38,
    0.075_039_674_810_919_952_767_04,
    0.093_125_454_583_697_605_535_07,
    0.109_387_158_802_297_641_899_2,
    0.123_491_976_262_065_851_078_0,
    0.134_709_217_311_473_325_928_1,
    0.142_775_938_577_060_080_797_1,
    0.147_739_104_901_338_491_374_8,
    0.149_445_554_002_916_905_664_9,
];

/// Gauss weights paired with `XGK[1], XGK[3], …, XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_57,
    0.149_451_349_150_580_593_145_8,
    0.219_086_362_515_982_043_995_5,
    0.269_266_719_309_996_355_091_2,
    0.295_524_224_714_752_870_173_9,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    /// Set by [`integrate_to_cutoff`] when the partial integrals keep growing;
    /// `value` is then only a lower bound.
    pub diverged: bool,
}

/// Panel width that resolves a kernel oscillating like `sin(frequency·x)` into
/// quarter periods before adaptivity starts.
pub fn oscillation_panel_width(frequency: f64) -> f64 {
    FRAC_PI_2 / frequency.abs()
}

/// Globally adaptive bisection driven by the 10/21-point Gauss–Kronrod pair.
#[derive(Debug, Clone)]
pub struct Integrator {
    /// Number of bisections allowed beyond the initial panels.
    pub max_subdivisions: usize,
    /// Upper bound on the width of the initial panels, if any.
    pub max_panel_width: Option<f64>,
    /// Refuse to start with more panels than this.
    pub max_initial_panels: usize,
    /// Divergence is declared when the last cutoff increment exceeds this
    /// fraction of the previous one.
    pub divergence_ratio: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            max_subdivisions: 200_000,
            max_panel_width: None,
            max_initial_panels: 5_000_000,
            divergence_ratio: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first, ties broken by position so the order is total
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

impl Integrator {
    pub fn with_panel_width(mut self, width: f64) -> Self {
        self.max_panel_width = Some(width);
        self
    }

    /// Integrate `kernel` over `[a, b]` until the error estimate is below
    /// `max(tol, tol·|value|)`.
    pub fn integrate<F>(&self, kernel: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
    where
        F: Fn(f64) -> f64,
    {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!(
                "integration bounds must satisfy a < b, got [{a}, {b}]"
            )));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
        }

        let initial = match self.max_panel_width {
            Some(w) if w > 0.0 && w.is_finite() => ((b - a) / w).ceil().max(1.0),
            Some(w) => return Err(Error::invalid(format!("panel width must be positive, got {w}"))),
            None => 1.0,
        };
        if initial > self.max_initial_panels as f64 {
            return Err(Error::Resource(format!(
                "{initial} initial panels requested, limit is {}",
                self.max_initial_panels
            )));
        }
        let initial = initial as usize;

        let mut evaluations = 0usize;
        let mut heap = BinaryHeap::with_capacity(initial + 64);
        let width = (b - a) / initial as f64;
        for i in 0..initial {
            let lo = a + width * i as f64;
            let hi = if i + 1 == initial {
                b
            } else {
                a + width * (i + 1) as f64
            };
            heap.push(gauss_kronrod(&kernel, lo, hi, &mut evaluations)?);
        }

        let mut total_value: f64 = heap.iter().map(|p| p.value).sum();
        let mut total_error: f64 = heap.iter().map(|p| p.error).sum();
        let mut splits = 0usize;

        while total_error > tol.max(tol * total_value.abs()) {
            if splits >= self.max_subdivisions {
                let (value, error) = totals(&heap);
                return Err(Error::Accuracy {
                    message: format!("no convergence after {splits} subdivisions on [{a}, {b}]"),
                    best_estimate: value,
                    error_estimate: error,
                });
            }
            let worst = heap.pop().expect("heap holds at least one panel");
            let mid = 0.5 * (worst.a + worst.b);
            if !(worst.a < mid && mid < worst.b) {
                heap.push(worst);
                let (value, error) = totals(&heap);
                return Err(Error::Accuracy {
                    message: format!("panel at {mid} cannot be bisected further"),
                    best_estimate: value,
                    error_estimate: error,
                });
            }
            let left = gauss_kronrod(&kernel, worst.a, mid, &mut evaluations)?;
            let right = gauss_kronrod(&kernel, mid, worst.b, &mut evaluations)?;
            total_value += left.value + right.value - worst.value;
            total_error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            splits += 1;

            // the running sums drift; resynchronise now and then
            if splits.is_multiple_of(4096) {
                (total_value, total_error) = totals(&heap);
            }
        }

        let (value, abs_error_estimate) = totals(&heap);
        Ok(QuadratureResult {
            value,
            abs_error_estimate,
            evaluations,
            diverged: false,
        })
    }

    /// Integrate over `[a, cutoff_i]` for each cutoff in turn and flag
    /// divergence when the increments fail to shrink.
    pub fn integrate_to_cutoff<F>(&self, kernel: F, a: f64, cutoffs: &[f64], tol: f64) -> Result<QuadratureResult>
    where
        F: Fn(f64) -> f64,
    {
        let pieces = self.cutoff_increments(kernel, a, cutoffs, tol)?;
        Ok(self.combine_increments(&pieces))
    }

    /// The integrals over `[a, c_0]`, `[c_0, c_1]`, … separately.
    pub fn cutoff_increments<F>(&self, kernel: F, a: f64, cutoffs: &[f64], tol: f64) -> Result<Vec<QuadratureResult>>
    where
        F: Fn(f64) -> f64,
    {
        if cutoffs.is_empty() {
            return Err(Error::invalid("at least one cutoff is required"));
        }
        if cutoffs[0] <= a || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "cutoffs must be strictly ascending and above the lower limit",
            ));
        }
        let mut lower = a;
        let mut pieces = Vec::with_capacity(cutoffs.len());
        for &cutoff in cutoffs {
            pieces.push(self.integrate(&kernel, lower, cutoff, tol)?);
            lower = cutoff;
        }
        Ok(pieces)
    }

    /// Sum of cutoff increments, with the divergence flag set when there are
    /// at least three and the last one is not much smaller than the one
    /// before.
    pub fn combine_increments(&self, pieces: &[QuadratureResult]) -> QuadratureResult {
        let diverged = match pieces {
            [.., prev, last] if pieces.len() >= 3 => last.value.abs() > self.divergence_ratio * prev.value.abs(),
            _ => false,
        };
        QuadratureResult {
            value: pieces.iter().map(|p| p.value).sum(),
            abs_error_estimate: pieces.iter().map(|p| p.abs_error_estimate).sum(),
            evaluations: pieces.iter().map(|p| p.evaluations).sum(),
            diverged,
        }
    }
}

/// Panel sums in left-to-right order, pairwise, so the result does not depend
/// on the heap layout.
fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<Panel> = heap.iter().copied().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    let errors: Vec<f64> = panels.iter().map(|p| p.error).collect();
    (pairwise_sum(&values), pairwise_sum(&errors))
}

pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

fn eval<F: Fn(f64) -> f64>(kernel: &F, x: f64, count: &mut usize) -> Result<f64> {
    *count += 1;
    let y = kernel(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::invalid(format!("kernel is not finite at x = {x}")))
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(kernel: &F, a: f64, b: f64, count: &mut usize) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = eval(kernel, center, count)?;
    let mut kronrod = WGK[10] * f_center;
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(kernel, center - dx, count)?;
        let f2 = eval(kernel, center + dx, count)?;
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Panel { a, b, value, error })
}

/// [`Integrator::integrate`] with default settings.
pub fn integrate_adaptive<F>(kernel: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    Integrator::default().integrate(kernel, a, b, tol)
}

/// [`Integrator::integrate_to_cutoff`] with default settings.
pub fn integrate_to_cutoff<F>(kernel: F, a: f64, cutoffs: &[f64], tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    Integrator::default().integrate_to_cutoff(kernel, a, cutoffs, tol)
}
