use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this magnitude the power series is used; above it the continued
/// fraction for E1(ix). Both are accurate to a few ulp at the switchover.
const SERIES_LIMIT: f64 = 4.0;
const MAX_ITER: usize = 500;

/// Sine integral `Si(z) = ∫_0^z sin(x)/x dx`.
///
/// Relative error is at the level of a few ulp over the whole real line. The
/// large-argument branch evaluates the auxiliary functions `f`, `g` in
/// `Si(z) = π/2 − f(z) cos z − g(z) sin z` through the Lentz continued fraction
/// of the exponential integral `E1(iz)`, which converges for every `z > 0`
/// where the plain asymptotic series would stall near `z = 4`.
pub fn sine_integral(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::invalid(format!("sine_integral of non-finite argument {z}")));
    }
    let x = z.abs();
    let value = if x <= SERIES_LIMIT {
        series(x)
    } else {
        continued_fraction(x)
    };
    Ok(value.copysign(z))
}

fn series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    // term = (-1)^k x^(2k+1) / (2k+1)!
    let mut term = x;
    let mut sum = x;
    let mut k = 0usize;
    loop {
        k += 1;
        let n = (2 * k) as f64;
        term *= -x2 / (n * (n + 1.0));
        let contribution = term / (n + 1.0);
        sum += contribution;
        if contribution.abs() < f64::EPSILON * 0.25 * sum.abs() || k > MAX_ITER {
            break;
        }
    }
    sum
}

fn continued_fraction(x: f64) -> f64 {
    // E1(ix) = e^{-ix} · 1/(1+ix − 1²/(3+ix − 2²/(5+ix − …)))
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm_sqr() < f64::EPSILON * f64::EPSILON {
            break;
        }
    }
    let e1 = Complex64::new(x.cos(), -x.sin()) * h;
    // E1(ix) = −Ci(x) + i(Si(x) − π/2)
    FRAC_PI_2 + e1.im
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_oddness() {
        assert_eq!(sine_integral(0.0).unwrap(), 0.0);
        let z = 2.5;
        assert_eq!(sine_integral(-z).unwrap(), -sine_integral(z).unwrap());
    }

    #[test]
    fn reference_values() {
        // Si(1) by adaptive quadrature of sin x/x to 1e-14; the remaining
        // values were checked against 50-digit arithmetic.
        let cases = [
            (1.0, 0.946_083_070_367_183_0),
            (0.5, 0.493_107_418_043_066_7),
            (4.0, 1.758_203_138_949_053_1),
            (4.000_000_001, 1.758_203_138_759_852_4),
            (10.0, 1.658_347_594_218_874_0),
            (100.0, 1.562_225_466_889_056_3),
        ];
        for (z, expected) in cases {
            let got = sine_integral(z).unwrap();
            assert!(
                ((got - expected) / expected).abs() < 1e-13,
                "Si({z}) = {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn large_argument_tends_to_half_pi() {
        assert!((sine_integral(1000.0).unwrap() - FRAC_PI_2).abs() < 1e-3);
        assert!((sine_integral(1e4).unwrap() - FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn non_finite_is_rejected() {
        assert!(matches!(sine_integral(f64::NAN), Err(Error::InvalidArgument(_))));
        assert!(sine_integral(f64::INFINITY).is_err());
    }
}
