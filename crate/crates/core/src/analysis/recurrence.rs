//! Linear recurrences with Laurent polynomial coefficients and the 2-string torus families.

use crate::poly::{LaurentPoly, PolyError, UForm};
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

/// `sum_i coeffs[i] * f(b + i) = 0` for all `b`.
#[derive(Clone, Debug)]
pub struct RecurrenceSpec {
    pub coeffs: Vec<LaurentPoly>,
    pub initials: BTreeMap<i64, LaurentPoly>,
}

impl RecurrenceSpec {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Recurrence whose characteristic polynomial is the product of `factors`,
    /// each given as `[a0, a1]` for `a0 + a1 x`.
    pub fn from_linear_factors(factors: &[[LaurentPoly; 2]], initials: BTreeMap<i64, LaurentPoly>) -> Self {
        let mut coeffs = vec![LaurentPoly::one()];
        for [a0, a1] in factors {
            let mut next = vec![LaurentPoly::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i].add_assign_ref(&(c * a0));
                next[i + 1].add_assign_ref(&(c * a1));
            }
            coeffs = next;
        }
        RecurrenceSpec { coeffs, initials }
    }
}

/// Extends the initial values over `range`, dividing exactly by the leading
/// coefficient going up and by the trailing coefficient going down.
pub fn lin_extend(spec: &RecurrenceSpec, range: RangeInclusive<i64>) -> Result<BTreeMap<i64, LaurentPoly>, PolyError> {
    let k = spec.order() as i64;
    let mut vals = spec.initials.clone();
    let (&lo0, &hi0) = (vals.keys().next().unwrap(), vals.keys().next_back().unwrap());
    assert!(hi0 - lo0 + 1 == k && vals.len() as i64 == k, "initials must cover `order` consecutive indices");
    let c = &spec.coeffs;
    let mut hi = hi0;
    while hi < *range.end() {
        let b = hi + 1 - k;
        let mut s = LaurentPoly::zero();
        for i in 0..k {
            s.add_assign_ref(&(&c[i as usize] * &vals[&(b + i)]));
        }
        let v = (-s).div_exact(&c[k as usize])?;
        hi += 1;
        vals.insert(hi, v);
    }
    let mut lo = lo0;
    while lo > *range.start() {
        let b = lo - 1;
        let mut s = LaurentPoly::zero();
        for i in 1..=k {
            s.add_assign_ref(&(&c[i as usize] * &vals[&(b + i)]));
        }
        let v = (-s).div_exact(&c[0])?;
        lo -= 1;
        vals.insert(lo, v);
    }
    Ok(vals.into_iter().filter(|(i, _)| range.contains(i)).collect())
}

fn lin(a0: &str, a1: &str) -> [LaurentPoly; 2] {
    [a0.parse().unwrap(), a1.parse().unwrap()]
}

fn uform(cs: &[&str]) -> LaurentPoly {
    UForm::new(cs.iter().map(|s| s.parse().unwrap()).collect()).expand()
}

/// Recurrence for `V_n` of `T(2, 2b + 1)`, `n` in {1, 2}, indexed by `b`.
pub fn torus_spec(n: u32) -> RecurrenceSpec {
    match n {
        1 => {
            let f1 = uform(&["1", "q^-1+q^-3", "q^-2"]);
            let initials = BTreeMap::from([(-1, LaurentPoly::one()), (0, LaurentPoly::one()), (1, f1)]);
            RecurrenceSpec::from_linear_factors(&[lin("-1", "1"), lin("-t^2", "q^2"), lin("-1", "q^2*t^2")], initials)
        }
        2 => {
            let g2m = uform(&["1", "q + 2*q^3 - q^4 + q^5 - q^6", "q^2 + q^4 - q^5"]);
            let g3m = uform(&[
                "1",
                "2*q + 3*q^3 - q^4 + 3*q^5 - q^6 + 2*q^7 - q^8 + q^9 - 2*q^10 + q^11 - q^12",
                "4*q^2 + 7*q^4 - 3*q^5 + 10*q^6 - 6*q^7 + 6*q^8 - 7*q^9 + 3*q^10 - 3*q^11",
                "3*q^3 + 6*q^5 - 3*q^6 + 6*q^7 - 6*q^8 + 3*q^9 - 3*q^10",
                "q^4 + q^6 - q^7 + q^8 - q^9",
            ]);
            let initials = BTreeMap::from([
                (-3, g3m.clone()),
                (-2, g2m.clone()),
                (-1, LaurentPoly::one()),
                (0, LaurentPoly::one()),
                (1, g2m.invert_q()),
                (2, g3m.invert_q()),
            ]);
            RecurrenceSpec::from_linear_factors(
                &[
                    lin("-1", "1"),
                    lin("-t^2", "q^2"),
                    lin("-1", "q^3"),
                    lin("-t^2", "q^4"),
                    lin("-1", "q^2*t^2"),
                    lin("-1", "q^4*t^2"),
                ],
                initials,
            )
        }
        _ => panic!("torus recurrences are available for n = 1, 2"),
    }
}

pub fn torus_family(n: u32, range: RangeInclusive<i64>) -> Result<BTreeMap<i64, LaurentPoly>, PolyError> {
    lin_extend(&torus_spec(n), range)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_recurrence() {
        let spec = RecurrenceSpec::from_linear_factors(&[lin("-1", "1")], BTreeMap::from([(0, LaurentPoly::one())]));
        let v = lin_extend(&spec, -5..=5).unwrap();
        assert_eq!(v.len(), 11);
        assert!(v.values().all(|p| p.is_one()));
    }

    #[test]
    fn v1_coefficients_as_printed() {
        let spec = torus_spec(1);
        let want = ["-t^2", "q^2 + t^2 + q^2*t^4", "-q^2 - q^4*t^2 - q^2*t^4", "q^4*t^2"];
        for (c, w) in spec.coeffs.iter().zip(want) {
            assert_eq!(c, &w.parse::<LaurentPoly>().unwrap());
        }
    }

    #[test]
    fn v1_span_and_mirror() {
        let v = torus_family(1, -4..=3).unwrap();
        assert_eq!(v[&2].t_span().unwrap(), 8);
        assert_eq!(v[&-2], v[&1].invert_q());
        for b in 0..=3 {
            assert_eq!(v[&(-b - 1)], v[&b].invert_q());
        }
    }
}
