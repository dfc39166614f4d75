//! Error-free-transformation accumulation at arbitrary binary precision.
//!
//! MPFR rounds every operation correctly to nearest, so Knuth's TwoSum
//! recovers the exact rounding error of each addition at any precision.

use rug::{Complex, Float};

#[derive(Debug, Clone)]
pub struct CompensatedSum {
    sum: Float,
    comp: Float,
}

impl CompensatedSum {
    pub fn new(bits: u32) -> Self {
        CompensatedSum {
            sum: Float::new(bits),
            comp: Float::new(bits),
        }
    }

    pub fn add(&mut self, v: &Float) {
        let bits = self.sum.prec();
        let s = Float::with_val(bits, &self.sum + v);
        // TwoSum: err = (a - (s - bb)) + (v - bb), bb = s - a
        let bb = Float::with_val(bits, &s - &self.sum);
        let a_part = Float::with_val(bits, &s - &bb);
        let a_err = Float::with_val(bits, &self.sum - &a_part);
        let b_err = Float::with_val(bits, v - &bb);
        self.comp += a_err;
        self.comp += b_err;
        self.sum = s;
    }

    pub fn value(&self) -> Float {
        Float::with_val(self.sum.prec(), &self.sum + &self.comp)
    }
}

#[derive(Debug, Clone)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new(bits: u32) -> Self {
        CompensatedComplexSum {
            re: CompensatedSum::new(bits),
            im: CompensatedSum::new(bits),
        }
    }

    pub fn add(&mut self, z: &Complex) {
        self.re.add(z.real());
        self.im.add(z.imag());
    }

    pub fn value(&self) -> Complex {
        let re = self.re.value();
        let bits = re.prec();
        Complex::with_val(bits, (re, self.im.value()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_lost_low_order_bits() {
        // 53-bit floats: 1 + 1e-20 repeated is lost by naive summation.
        let mut acc = CompensatedSum::new(53);
        let big = Float::with_val(53, 1.0);
        let tiny = Float::with_val(53, 1e-20);
        acc.add(&big);
        for _ in 0..1000 {
            acc.add(&tiny);
        }
        let exact = Float::with_val(200, 1) + Float::with_val(200, &tiny) * 1000u32;
        let got = Float::with_val(200, acc.sum.clone()) + Float::with_val(200, &acc.comp);
        let diff = Float::with_val(200, &got - &exact).abs().to_f64();
        assert!(diff < 1e-30, "diff {diff}");
    }
}
