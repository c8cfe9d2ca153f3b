//! Polynomials written in the variable `u = t + 1/t - q - 1/q` with coefficients in `q`.

use super::LaurentPoly;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UForm {
    /// `u_coeffs[k]` multiplies `u^k`; each entry is free of `t`.
    pub u_coeffs: Vec<LaurentPoly>,
}

impl UForm {
    pub fn new(u_coeffs: Vec<LaurentPoly>) -> Self {
        UForm { u_coeffs }
    }

    pub fn u() -> LaurentPoly {
        "t + t^-1 + -1*q + -1*q^-1".parse().unwrap()
    }

    pub fn expand(&self) -> LaurentPoly {
        let u = Self::u();
        // Horner evaluation keeps the intermediate sizes small.
        let mut acc = LaurentPoly::zero();
        for c in self.u_coeffs.iter().rev() {
            acc = &(&acc * &u) + c;
        }
        acc
    }

    /// Rewrites a `t`-symmetric polynomial in powers of `u`; `None` if that is impossible.
    pub fn extract(p: &LaurentPoly) -> Option<UForm> {
        if p.is_zero() {
            return Some(UForm::new(vec![]));
        }
        let (lo, hi) = p.t_range()?;
        if hi < 0 || lo != -hi {
            return None;
        }
        let u = Self::u();
        let mut powers = vec![LaurentPoly::one()];
        for k in 1..=hi as usize {
            powers.push(&powers[k - 1] * &u);
        }
        let mut rem = p.clone();
        let mut coeffs = vec![LaurentPoly::zero(); hi as usize + 1];
        for d in (0..=hi).rev() {
            let c = LaurentPoly::from_terms(
                rem.terms()
                    .iter()
                    .filter(|x| x.0 == d)
                    .map(|x| (0, x.1, x.2.clone())),
            );
            if c.is_zero() {
                continue;
            }
            rem = &rem - &(&c * &powers[d as usize]);
            coeffs[d as usize] = c;
        }
        if !rem.is_zero() {
            return None;
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Some(UForm::new(coeffs))
    }
}

impl fmt::Display for UForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.u_coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*u")?,
                _ => write!(f, "({c})*u^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
