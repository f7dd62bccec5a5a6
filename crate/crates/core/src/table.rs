//! Dense value tables over `{0,1}^n` in exact scaled integers.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{common_denominator, from_scaled, scaled_i128, Rational};

/// `values[mask] * (1/scale)` is the polynomial value at the assignment
/// whose bit `i` is variable `i`.
pub(crate) struct ValueTable {
    pub scale: BigInt,
    pub values: Vec<i128>,
}

impl ValueTable {
    /// Tabulates `p` over all `2^n` points with a subset-sum (zeta)
    /// transform. The caller enforces its own cap on `n`.
    pub fn build(p: &Polynomial) -> Result<ValueTable> {
        let n = p.n_vars();
        assert!(n < 40, "value table over {n} variables");
        let scale = common_denominator(p.terms().map(|(_, c)| c).chain([p.constant()]));
        let mut bound = BigInt::zero();
        let scale_q = Rational::from_integer(scale.clone());
        for c in p.terms().map(|(_, c)| c).chain([p.constant()]) {
            bound += (c * &scale_q).to_integer().abs();
        }
        if bound.to_i128().is_none() {
            return Err(Error::Overflow);
        }
        let mut values = vec![0i128; 1usize << n];
        values[0] = scaled_i128(p.constant(), &scale).ok_or(Error::Overflow)?;
        for (vars, coef) in p.terms() {
            let mask = vars.iter().fold(0usize, |m, &v| m | 1 << v);
            values[mask] += scaled_i128(coef, &scale).ok_or(Error::Overflow)?;
        }
        for bit in 0..n {
            let step = 1usize << bit;
            for mask in 0..values.len() {
                if mask & step != 0 {
                    values[mask] += values[mask ^ step];
                }
            }
        }
        Ok(ValueTable { scale, values })
    }

    pub fn value(&self, mask: usize) -> Rational {
        from_scaled(self.values[mask], &self.scale)
    }
}
