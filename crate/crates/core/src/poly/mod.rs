//! Exact sparse Laurent polynomials in `t` and `q` with integer coefficients.

mod int;
mod uform;

pub use int::Int;
pub use uform::UForm;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot parse polynomial term `{0}`")]
    Parse(String),
    #[error("t-span of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("substitution image must be a signed monomial, got `{0}`")]
    NonMonomial(String),
    #[error("polynomial division leaves a remainder")]
    NotDivisible,
    #[error("exponent {0} is not divisible by {1}")]
    OddExponent(i32, i32),
}

/// A variable of the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    Q,
}

/// Terms `(t_exp, q_exp, coeff)` kept sorted by `(t_exp, q_exp)` with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, i32, Int)>,
}

// Dense accumulation is used when the product's exponent box is at most this large.
const DENSE_LIMIT: usize = 1 << 15;

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn q() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: i64, t_exp: i32, q_exp: i32) -> Self {
        Self::monomial_int(Int::from(c), t_exp, q_exp)
    }

    pub fn monomial_int(c: Int, t_exp: i32, q_exp: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(t_exp, q_exp, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i32, i32, Int)>>(it: I) -> Self {
        let mut v: Vec<(i32, i32, Int)> = it.into_iter().collect();
        v.sort_by_key(|a| (a.0, a.1));
        let mut out: Vec<(i32, i32, Int)> = Vec::with_capacity(v.len());
        for (a, b, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += &c,
                _ => out.push((a, b, c)),
            }
        }
        out.retain(|x| !x.2.is_zero());
        LaurentPoly { terms: out }
    }

    /// A polynomial in `q` alone from `(q_exp, coeff)` pairs.
    pub fn from_q_terms(pairs: &[(i32, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(e, c)| (0, e, Int::from(c))))
    }

    pub fn terms(&self) -> &[(i32, i32, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1 == 0 && self.terms[0].2.is_one()
    }

    pub fn coeff(&self, t_exp: i32, q_exp: i32) -> Int {
        match self.terms.binary_search_by(|x| (x.0, x.1).cmp(&(t_exp, q_exp))) {
            Ok(i) => self.terms[i].2.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Returns `(coeff_sign, t_exp, q_exp)` when the polynomial is `±t^a q^b`.
    pub fn as_unit_monomial(&self) -> Option<(i64, i32, i32)> {
        match self.terms.as_slice() {
            [(a, b, c)] => match c.as_i64() {
                Some(1) => Some((1, *a, *b)),
                Some(-1) => Some((-1, *a, *b)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn t_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.first()?.0;
        let hi = self.terms.last()?.0;
        Some((lo, hi))
    }

    pub fn q_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.iter().map(|x| x.1).min()?;
        let hi = self.terms.iter().map(|x| x.1).max()?;
        Some((lo, hi))
    }

    pub fn t_span(&self) -> Result<u32, PolyError> {
        let (lo, hi) = self.t_range().ok_or(PolyError::ZeroPolynomial)?;
        Ok((hi - lo) as u32)
    }

    pub fn coeffs_nonneg(&self) -> bool {
        self.terms.iter().all(|x| !x.2.is_negative())
    }

    /// Multiplies by `c * t^a q^b`.
    pub fn mul_monomial(&self, c: &Int, a: i32, b: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(x, y, z)| (x + a, y + b, z * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> Self {
        self.mul_monomial(c, 0, 0)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power of a unit monomial `±t^a q^b`; other inputs need `e >= 0`.
    pub fn pow_signed(&self, e: i32) -> Option<Self> {
        if e >= 0 {
            return Some(self.pow(e as u32));
        }
        let (s, a, b) = self.as_unit_monomial()?;
        let sign = if e % 2 == 0 { 1 } else { s };
        Some(Self::monomial(sign, a * e, b * e))
    }

    /// Applies a monomial substitution for each variable.
    pub fn substitute_monomial(&self, t_img: &LaurentPoly, q_img: &LaurentPoly) -> Result<Self, PolyError> {
        let (st, ta, tb) = t_img
            .as_unit_monomial()
            .ok_or_else(|| PolyError::NonMonomial(t_img.to_string()))?;
        let (sq, qa, qb) = q_img
            .as_unit_monomial()
            .ok_or_else(|| PolyError::NonMonomial(q_img.to_string()))?;
        Ok(Self::from_terms(self.terms.iter().map(|(i, j, c)| {
            let neg = (st < 0 && i.rem_euclid(2) == 1) ^ (sq < 0 && j.rem_euclid(2) == 1);
            let c = if neg { -c } else { c.clone() };
            (ta * i + qa * j, tb * i + qb * j, c)
        })))
    }

    /// Substitution given as a map; variables not listed are left unchanged.
    pub fn substitute(&self, assignment: &HashMap<Var, LaurentPoly>) -> Result<Self, PolyError> {
        let t = assignment.get(&Var::T).cloned().unwrap_or_else(Self::t);
        let q = assignment.get(&Var::Q).cloned().unwrap_or_else(Self::q);
        self.substitute_monomial(&t, &q)
    }

    pub fn invert_t(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(i, j, c)| (-i, *j, c.clone())))
    }

    pub fn invert_q(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(i, j, c)| (*i, -j, c.clone())))
    }

    pub fn negate_q(&self) -> Self {
        self.substitute_monomial(&Self::t(), &Self::monomial(-1, 0, 1)).expect("monomial image")
    }

    /// `p(t, q) -> p(q, q)`.
    pub fn t_to_q(&self) -> Self {
        self.substitute_monomial(&Self::q(), &Self::q()).expect("monomial image")
    }

    /// `p(t, q) -> p(t, 1)`.
    pub fn q_to_one(&self) -> Self {
        self.substitute_monomial(&Self::t(), &Self::one()).expect("monomial image")
    }

    /// Divides every exponent by `d`, failing if any exponent is not a multiple.
    pub fn divide_exponents(&self, d: i32) -> Result<Self, PolyError> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (i, j, c) in &self.terms {
            if i % d != 0 {
                return Err(PolyError::OddExponent(*i, d));
            }
            if j % d != 0 {
                return Err(PolyError::OddExponent(*j, d));
            }
            out.push((i / d, j / d, c.clone()));
        }
        Ok(LaurentPoly { terms: out })
    }

    /// `self += other`, merging sorted term lists.
    pub fn add_assign_ref(&mut self, other: &LaurentPoly) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        let a = std::mem::take(&mut self.terms);
        self.terms = merge(&a, &other.terms, false);
    }

    /// Exact quotient `self / d`; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Result<Self, PolyError> {
        if d.is_zero() {
            return Err(PolyError::NotDivisible);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Long division from the lexicographically largest term. Degrees in each variable
        // are additive under products, so a true quotient lies in a known exponent box.
        let (dt, dq, dc) = d.terms.last().unwrap().clone();
        let (st0, st1) = self.t_range().unwrap();
        let (sq0, sq1) = self.q_range().unwrap();
        let (dt0, dt1) = d.t_range().unwrap();
        let (dq0, dq1) = d.q_range().unwrap();
        let t_box = (st0 - dt0, st1 - dt1);
        let q_box = (sq0 - dq0, sq1 - dq1);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rt, rq, rc)) = rem.terms.last().cloned() {
            let m = (rt - dt, rq - dq);
            if m.0 < t_box.0 || m.0 > t_box.1 || m.1 < q_box.0 || m.1 > q_box.1 {
                return Err(PolyError::NotDivisible);
            }
            let c = rc.div_exact(&dc).ok_or(PolyError::NotDivisible)?;
            rem = &rem - &d.mul_monomial(&c, m.0, m.1);
            quot.push((m.0, m.1, c));
        }
        Ok(Self::from_terms(quot))
    }

    /// Upper bound on `|coeff|` when all coefficients are small.
    fn max_abs_small(&self) -> Option<u128> {
        let mut m = 0u128;
        for (_, _, c) in &self.terms {
            m = m.max(c.as_i64()?.unsigned_abs() as u128);
        }
        Some(m)
    }
}

fn merge(a: &[(i32, i32, Int)], b: &[(i32, i32, Int)], negate_b: bool) -> Vec<(i32, i32, Int)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let ka = (a[i].0, a[i].1);
        let kb = (b[j].0, b[j].1);
        match ka.cmp(&kb) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].2 } else { b[j].2.clone() };
                out.push((kb.0, kb.1, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].2 - &b[j].2 } else { &a[i].2 + &b[j].2 };
                if !c.is_zero() {
                    out.push((ka.0, ka.1, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for x in &b[j..] {
        let c = if negate_b { -&x.2 } else { x.2.clone() };
        out.push((x.0, x.1, c));
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: merge(&self.terms, &rhs.terms, false) }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: merge(&self.terms, &rhs.terms, true) }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(a, b, c)| (*a, *b, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if self.terms.len() == 1 {
            let (a, b, c) = &self.terms[0];
            return rhs.mul_monomial(c, *a, *b);
        }
        if rhs.terms.len() == 1 {
            let (a, b, c) = &rhs.terms[0];
            return self.mul_monomial(c, *a, *b);
        }
        if let Some(p) = mul_dense(self, rhs) {
            return p;
        }
        let mut acc: HashMap<(i32, i32), Int> = HashMap::with_capacity(self.len() * rhs.len());
        for (a, b, c) in &self.terms {
            for (x, y, z) in &rhs.terms {
                *acc.entry((a + x, b + y)).or_insert(Int::ZERO) += &(c * z);
            }
        }
        LaurentPoly::from_terms(acc.into_iter().map(|((a, b), c)| (a, b, c)))
    }
}

fn mul_dense(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let ma = a.max_abs_small()?;
    let mb = b.max_abs_small()?;
    let n = a.len().min(b.len()) as u128;
    // Every accumulator is a sum of at most n products, each below ma*mb.
    if ma.checked_mul(mb)?.checked_mul(n)? >= (1u128 << 126) {
        return None;
    }
    let (at0, at1) = a.t_range()?;
    let (bt0, bt1) = b.t_range()?;
    let (aq0, aq1) = a.q_range()?;
    let (bq0, bq1) = b.q_range()?;
    let t0 = at0 + bt0;
    let q0 = aq0 + bq0;
    let wt = (at1 + bt1 - t0 + 1) as usize;
    let wq = (aq1 + bq1 - q0 + 1) as usize;
    if wt.checked_mul(wq)? > DENSE_LIMIT {
        return None;
    }
    let mut grid = vec![0i128; wt * wq];
    for (x, y, c) in &a.terms {
        let c = c.as_i64().unwrap() as i128;
        for (u, v, d) in &b.terms {
            let idx = (x + u - t0) as usize * wq + (y + v - q0) as usize;
            grid[idx] += c * d.as_i64().unwrap() as i128;
        }
    }
    let mut terms = Vec::new();
    for (idx, v) in grid.into_iter().enumerate() {
        if v != 0 {
            terms.push(((idx / wq) as i32 + t0, (idx % wq) as i32 + q0, Int::from_i128(v)));
        }
    }
    Some(LaurentPoly { terms })
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders polynomials by their canonical text, the order used for mirror folding.
impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}*t^{a}*q^{b}")?;
        }
        Ok(())
    }
}

fn parse_term(tok: &str) -> Result<(i32, i32, Int), PolyError> {
    let err = || PolyError::Parse(tok.to_string());
    let mut coeff = Int::ONE;
    let (mut te, mut qe) = (0i32, 0i32);
    let mut negate = false;
    let mut body = tok;
    if let Some(rest) = body.strip_prefix('-') {
        if !rest.starts_with(|c: char| c.is_ascii_digit()) {
            negate = true;
            body = rest;
        }
    }
    if body.is_empty() {
        return Err(err());
    }
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(err());
        }
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, Some(e.parse::<i32>().map_err(|_| err())?)),
            None => (factor, None),
        };
        match base {
            "t" => te += exp.unwrap_or(1),
            "q" => qe += exp.unwrap_or(1),
            _ => {
                if exp.is_some() {
                    return Err(err());
                }
                let c: Int = base.parse().map_err(|_| err())?;
                coeff = &coeff * &c;
            }
        }
    }
    if negate {
        coeff = -&coeff;
    }
    Ok((te, qe, coeff))
}

impl FromStr for LaurentPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(PolyError::Parse(s.to_string()));
        }
        // Terms are separated by `+`, or by a binary `-` that then stays with its term.
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        for i in 0..=bytes.len() {
            let cut = i == bytes.len()
                || bytes[i] == b'+'
                || (bytes[i] == b'-' && i > start && !matches!(bytes[i - 1], b'^' | b'*'));
            if cut {
                terms.push(parse_term(&cleaned[start..i])?);
                start = if i < bytes.len() && bytes[i] == b'+' { i + 1 } else { i };
            }
        }
        Ok(Self::from_terms(terms))
    }
}
