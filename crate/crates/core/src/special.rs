//! Log-space factorials and binomials, plus the `x ln x` family used by the
//! entropy formulas.

use num_traits::Float;

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    // exact summation keeps small arguments free of lgamma rounding
    if n < 32 {
        let mut acc = 0.0;
        for k in 2..=n {
            acc += (k as f64).ln();
        }
        acc
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `x ln x` with the continuous extension `0` at `x = 0`.
pub fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn factorials_agree_across_the_switch() {
        let mut acc = 0.0;
        for n in 1..80usize {
            acc += (n as f64).ln();
            assert_relative_eq!(ln_factorial(n), acc, max_relative = 1e-13);
        }
    }

    #[test]
    fn binomials() {
        assert_relative_eq!(ln_binomial(10, 3).exp(), 120.0, max_relative = 1e-13);
        assert_eq!(ln_binomial(3, 4), f64::NEG_INFINITY);
        assert_eq!(ln_binomial(0, 0), 0.0);
    }

    #[test]
    fn xlnx_extension() {
        assert_eq!(xlnx(0.0), 0.0);
        assert_eq!(xlnx(1.0), 0.0);
        assert_relative_eq!(xlnx(2.0), 2.0 * 2f64.ln());
    }
}
