use crate::sum::CompensatedSum;

/// First- and second-order harmonic numbers `H_k = sum 1/i` and
/// `H_k^(2) = sum 1/i^2` for `k = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTable {
    h: Vec<f64>,
    h2: Vec<f64>,
}

impl HarmonicTable {
    pub fn new(n_max: usize) -> Self {
        let mut h = Vec::with_capacity(n_max + 1);
        let mut h2 = Vec::with_capacity(n_max + 1);
        let mut first = CompensatedSum::new();
        let mut second = CompensatedSum::new();
        h.push(0.0);
        h2.push(0.0);
        for k in 1..=n_max {
            let inv = 1.0 / k as f64;
            first.add(inv);
            second.add(inv * inv);
            h.push(first.value());
            h2.push(second.value());
        }
        Self { h, h2 }
    }

    /// Largest index covered.
    pub fn n_max(&self) -> usize {
        self.h.len() - 1
    }

    /// `H_k`. Panics if `k > n_max`.
    #[inline]
    pub fn h(&self, k: usize) -> f64 {
        self.h[k]
    }

    /// `H_k^(2)`. Panics if `k > n_max`.
    #[inline]
    pub fn h2(&self, k: usize) -> f64 {
        self.h2[k]
    }

    pub fn first_order(&self) -> &[f64] {
        &self.h
    }

    pub fn second_order(&self) -> &[f64] {
        &self.h2
    }
}

pub fn harmonic_table(n_max: usize) -> HarmonicTable {
    HarmonicTable::new(n_max)
}
