//! Integer polynomials in one variable with arbitrary-precision
//! coefficients, stored ascending by degree, plus the small combinatorial
//! helpers (binomials) used across the crate.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Polynomial over the integers; coefficients ascending, highest one nonzero
/// (the zero polynomial has an empty coefficient list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// c·t^k
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly::from_coeffs(coeffs)
    }

    /// Build from ascending coefficients; trailing zeros are trimmed.
    pub fn from_coeffs<I: Into<BigInt>>(coeffs: Vec<I>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact division; None when the division leaves a remainder or a
    /// non-integer coefficient.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dlead = divisor.coeffs.last().unwrap();
        let qlen = rem.len() - divisor.coeffs.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + divisor.coeffs.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = num_integer::div_rem(top, dlead.clone());
            if !r.is_zero() {
                return None;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                let sub = d * &q;
                rem[k + i] -= sub;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(quot))
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&IntPoly::constant(c.clone()));
        }
        acc
    }
}

/// Ascending-degree display with explicit signs, e.g. `-3 + 6 t - 4 t^2 + t^3`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && k > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 if unit_coeff => write!(f, "t")?,
                1 => write!(f, " t")?,
                _ if unit_coeff => write!(f, "t^{k}")?,
                _ => write!(f, " t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Binomial coefficient with the convention C(n, k) = 0 for n < k.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if n < k {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// C(a, 2) on machine integers with C(a, 2) = 0 for a < 2.
pub fn choose2(a: i64) -> i64 {
    if a < 2 {
        0
    } else {
        a * (a - 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(cs.to_vec())
    }

    #[test]
    fn arithmetic_and_evaluation() {
        // (t - 1)(t^2 - 3t + 3) = t^3 - 4t^2 + 6t - 3
        let chi = poly(&[-1, 1]).mul(&poly(&[3, -3, 1]));
        assert_eq!(chi, poly(&[-3, 6, -4, 1]));
        assert_eq!(chi.eval(&BigInt::from(5)), BigInt::from(52));
        assert_eq!(chi.eval(&BigInt::from(1)), BigInt::zero());
    }

    #[test]
    fn exact_division_succeeds_and_fails_correctly() {
        let chi = poly(&[-3, 6, -4, 1]);
        assert_eq!(chi.div_exact(&poly(&[-1, 1])), Some(poly(&[3, -3, 1])));
        assert_eq!(poly(&[1, 1]).div_exact(&poly(&[0, 1])), None);
        assert_eq!(poly(&[1, 2, 1]).div_exact(&poly(&[1, 1])), Some(poly(&[1, 1])));
        // 2t + 1 is not divisible by 2 over the integers.
        assert_eq!(poly(&[1, 2]).div_exact(&poly(&[2])), None);
    }

    #[test]
    fn composition_expands_the_substitution() {
        // (t^2 + 1) at t = 2k + 3 gives 4k^2 + 12k + 10.
        let outer = poly(&[1, 0, 1]);
        let inner = poly(&[3, 2]);
        assert_eq!(outer.compose(&inner), poly(&[10, 12, 4]));
    }

    #[test]
    fn display_is_ascending_with_explicit_signs() {
        assert_eq!(poly(&[-3, 6, -4, 1]).to_string(), "-3 + 6 t - 4 t^2 + t^3");
        assert_eq!(poly(&[0, -1, 0, 2]).to_string(), "-t + 2 t^3");
        assert_eq!(poly(&[]).to_string(), "0");
        assert_eq!(poly(&[7]).to_string(), "7");
        assert_eq!(poly(&[0, 1]).to_string(), "t");
    }

    #[test]
    fn binomials_and_the_truncated_convention() {
        assert_eq!(binomial(9, 4), BigInt::from(126));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(5, 0), BigInt::one());
        assert_eq!(choose2(2), 1);
        assert_eq!(choose2(1), 0);
        assert_eq!(choose2(0), 0);
        assert_eq!(choose2(7), 21);
    }
}
