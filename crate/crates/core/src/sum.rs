//! Compensated (Neumaier) accumulation.
//!
//! Long, finely subdivided boundaries produce thousands of near-zero kink
//! angles and segment contributions; plain summation loses the small terms
//! against the running total.

use crate::vec3::Vec3;

/// Kahan-Babuska-Neumaier running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Component-wise compensated sum of vectors.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedVecSum {
    x: CompensatedSum,
    y: CompensatedSum,
    z: CompensatedSum,
}

impl CompensatedVecSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Vec3) {
        self.x.add(v.x);
        self.y.add(v.y);
        self.z.add(v.z);
    }

    #[inline]
    pub fn total(&self) -> Vec3 {
        Vec3::new(self.x.total(), self.y.total(), self.z.total())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.total() - 1e-12).abs() < 1e-20);
    }

    #[test]
    fn neumaier_case_larger_addend() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.total(), 2.0);
    }
}
