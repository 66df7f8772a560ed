use serde::{Deserialize, Serialize};

use super::fourier::fourier_partial_sum;
use super::TrigError;

/// `a_0 + sum_{k=1}^n (a_k cos kt + b_k sin kt)`. `sin[0]` is always zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPoly {
    pub fn new(mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let len = cos.len().max(sin.len()).max(1);
        cos.resize(len, 0.0);
        sin.resize(len, 0.0);
        sin[0] = 0.0;
        TrigPoly { cos, sin }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![0.0; degree + 1], vec![0.0; degree + 1])
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c], vec![0.0])
    }

    pub fn cos_k(k: usize) -> Self {
        let mut p = Self::zero(k);
        p.cos[k] = 1.0;
        p
    }

    pub fn sin_k(k: usize) -> Self {
        let mut p = Self::zero(k);
        p.sin[k] = 1.0;
        p
    }

    /// Layout `[a_0, a_1, ..., a_n, b_1, ..., b_n]`.
    pub fn from_vector(degree: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), 2 * degree + 1, "coefficient vector length");
        let cos = v[..=degree].to_vec();
        let mut sin = vec![0.0];
        sin.extend_from_slice(&v[degree + 1..]);
        Self::new(cos, sin)
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = self.cos.clone();
        v.extend_from_slice(&self.sin[1..]);
        v
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (s1, c1) = t.sin_cos();
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut acc = self.cos[0];
        for k in 1..self.cos.len() {
            let next_c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = next_c;
            acc += self.cos[k] * ck + self.sin[k] * sk;
        }
        acc
    }

    /// `(a_k, b_k) -> (k b_k, -k a_k)`.
    pub fn derivative(&self) -> Self {
        let cos = (0..self.cos.len())
            .map(|k| k as f64 * self.sin[k])
            .collect();
        let sin = (0..self.cos.len())
            .map(|k| -(k as f64) * self.cos[k])
            .collect();
        Self::new(cos, sin)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(
            self.cos.iter().map(|a| a * c).collect(),
            self.sin.iter().map(|b| b * c).collect(),
        )
    }

    /// Sum of absolute coefficients, a global bound for `|T|`.
    pub fn abs_coefficient_sum(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|c| c.abs()).sum()
    }

    /// Reconstruct a degree-`n` polynomial from its values at `2n + 2` points `-pi + 2 pi j / (2n + 2)`.
    pub fn interpolate(samples: &[f64]) -> Result<Self, TrigError> {
        if samples.len() < 2 || !samples.len().is_multiple_of(2) {
            return Err(TrigError::TooFewSamples {
                samples: samples.len(),
                degree: 0,
            });
        }
        let degree = samples.len() / 2 - 1;
        Ok(fourier_partial_sum(samples, degree)?.poly)
    }
}
