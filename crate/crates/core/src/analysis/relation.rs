//! `V_2` from `V_1` of a knot and of its (2,1)-cable.
//!
//! `V_2(t^2, q^2) = c0 V_1(K(2,1))(t, q) + c1 V_1(K)(t^2 q, q) + cm V_1(K)(t^2/q, q)` with
//!
//! ```text
//! c0 = (q + t)(1 + q t) / ((1 + q^2) t)
//! c1 = (q^2 - t^2) / (q t (1 + q^2)(t^2 - 1))
//! cm = -t (q^2 t^2 - 1) / (q (1 + q^2)(t^2 - 1))
//! ```
//!
//! computed over the common denominator `D = q t (1 + q^2)(t^2 - 1)`.

use crate::poly::{LaurentPoly, PolyError};

fn p(s: &str) -> LaurentPoly {
    s.parse().expect("literal polynomial")
}

/// Numerators `(D c0, D c1, D cm)` and the denominator `D`.
pub fn relation_numerators() -> [LaurentPoly; 4] {
    let d = p("q*t^3 + q^3*t^3 - q*t - q^3*t");
    let n0 = &(&p("q*t^2 - q") * &p("q + t")) * &p("1 + q*t");
    let n1 = p("q^2 - t^2");
    let nm = -&p("q^2*t^4 - t^2");
    [n0, n1, nm, d]
}

pub fn v2_from_v1(v1_k: &LaurentPoly, v1_cable: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
    let [n0, n1, nm, d] = relation_numerators();
    let up = v1_k.substitute_monomial(&p("t^2*q"), &LaurentPoly::q())?;
    let down = v1_k.substitute_monomial(&p("t^2*q^-1"), &LaurentPoly::q())?;
    let num = &(&(&n0 * v1_cable) + &(&n1 * &up)) + &(&nm * &down);
    num.div_exact(&d)?.divide_exponents(2)
}
