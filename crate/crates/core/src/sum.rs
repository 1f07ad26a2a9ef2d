//! Compensated (Neumaier) summation.
//!
//! Every reduction in this crate that feeds a reported number goes through
//! these accumulators in a fixed index order, so results are reproducible to
//! the last bit across runs and the accumulated rounding error stays
//! O(ε · Σ|xᵢ|) independent of the number of terms.

use num_complex::Complex64;

/// Running Neumaier-compensated sum of `f64` terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of real and imaginary parts separately.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSumComplex {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl NeumaierSumComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of an iterator of reals.
pub fn sum_f64<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

/// Compensated sum of an iterator of complex values.
pub fn sum_complex<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    let mut acc = NeumaierSumComplex::new();
    for z in iter {
        acc.add(z);
    }
    acc.value()
}
