use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{TrigError, TrigPoly};

/// A partial Fourier sum with the energy left in the top quarter of the resolved spectrum.
#[derive(Debug, Clone)]
pub struct FourierFit {
    pub poly: TrigPoly,
    pub top_quarter_energy: f64,
}

impl FourierFit {
    pub fn aliased(&self) -> bool {
        self.top_quarter_energy > 1e-10
    }

    pub fn check(self) -> Result<Self, TrigError> {
        if self.aliased() {
            Err(TrigError::Aliasing {
                energy: self.top_quarter_energy,
            })
        } else {
            Ok(self)
        }
    }
}

/// Degree-`n` partial sum from `2M` samples at `t_j = -pi + 2 pi j / (2M)`.
/// Coefficients follow `(1/pi) int f cos kt`, with half the zeroth folded into `a_0`.
pub fn fourier_partial_sum(samples: &[f64], n: usize) -> Result<FourierFit, TrigError> {
    let len = samples.len();
    if !len.is_multiple_of(2) || len / 2 <= n {
        return Err(TrigError::TooFewSamples {
            samples: len,
            degree: n,
        });
    }
    let m = len / 2;
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let scale = 2.0 / len as f64;
    // shift from t = 2 pi j / len to t = -pi + 2 pi j / len multiplies mode k by (-1)^k
    let coeff = |k: usize| -> (f64, f64) {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        (sign * scale * buf[k].re, -sign * scale * buf[k].im)
    };
    let mut cos = vec![0.0; n + 1];
    let mut sin = vec![0.0; n + 1];
    for k in 0..=n {
        let (a, b) = coeff(k);
        cos[k] = if k == 0 { a / 2.0 } else { a };
        sin[k] = if k == 0 { 0.0 } else { b };
    }
    let energy = |range: std::ops::Range<usize>| -> f64 {
        range
            .map(|k| {
                let (a, b) = coeff(k);
                a * a + b * b
            })
            .sum()
    };
    let total = energy(0..m);
    let top = energy((3 * m) / 4..m);
    let top_quarter_energy = if total > 0.0 { top / total } else { 0.0 };
    Ok(FourierFit {
        poly: TrigPoly::new(cos, sin),
        top_quarter_energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(m: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..2 * m)
            .map(|j| f(-PI + PI * j as f64 / m as f64))
            .collect()
    }

    #[test]
    fn reproduces_cosine() {
        let s = grid(64, |t| (5.0 * t).cos());
        let fit = fourier_partial_sum(&s, 8).unwrap();
        for (k, &a) in fit.poly.cos_coeffs().iter().enumerate() {
            let expect = if k == 5 { 1.0 } else { 0.0 };
            assert!((a - expect).abs() < 1e-14);
        }
        assert!(fit.poly.sin_coeffs().iter().all(|b| b.abs() < 1e-14));
        let low = fourier_partial_sum(&s, 4).unwrap();
        assert!(low.poly.abs_coefficient_sum() < 1e-14);
    }

    #[test]
    fn sine_and_constant() {
        let s = grid(32, |t| 2.0 + 3.0 * (2.0 * t).sin());
        let fit = fourier_partial_sum(&s, 3).unwrap();
        assert!((fit.poly.cos_coeffs()[0] - 2.0).abs() < 1e-14);
        assert!((fit.poly.sin_coeffs()[2] - 3.0).abs() < 1e-14);
        assert!(!fit.aliased());
    }

    #[test]
    fn flags_unresolved_spectrum() {
        let s = grid(16, |t| (t * 7.3).sin().abs());
        let fit = fourier_partial_sum(&s, 4).unwrap();
        assert!(fit.aliased());
        assert!(fit.check().is_err());
        assert!(fourier_partial_sum(&s, 16).is_err());
    }
}
