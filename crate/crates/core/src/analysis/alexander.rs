//! Alexander polynomial from the Wirtinger presentation by Fox calculus.

use crate::diagram::PDCode;
use crate::poly::LaurentPoly;

/// Determinant by fraction-free Gaussian elimination; entries must lie in a
/// domain where `div_exact` succeeds on the Bareiss quotients.
pub fn bareiss_det(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut sign = 1i64;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return LaurentPoly::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    &m[n - 1][n - 1] * &LaurentPoly::constant(sign)
}

/// Normalizes `p` in `t` so that `p(1/t) = p(t)` and `p(1) = 1`.
pub fn normalize_alexander(p: &LaurentPoly) -> LaurentPoly {
    let Some((lo, hi)) = p.t_range() else { return LaurentPoly::zero() };
    let shifted = p.mul_monomial(&1i64.into(), -(lo + hi) / 2, 0);
    let at_one: i64 = shifted.terms().iter().map(|(_, _, c)| c.as_i64().expect("small value at 1")).sum();
    if at_one < 0 {
        -shifted
    } else {
        shifted
    }
}

/// Normalized Alexander polynomial of a knot diagram.
pub fn alexander_oracle(pd: &PDCode) -> LaurentPoly {
    let n = pd.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    // Over-arcs of the Wirtinger presentation: PD edges joined through over-passes.
    let labels: Vec<u32> = {
        let mut v: Vec<u32> = pd.crossings.iter().flat_map(|c| c.arcs).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let idx = |l: u32| labels.binary_search(&l).unwrap();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in &pd.crossings {
        let a = find(&mut parent, idx(c.arcs[1]));
        let b = find(&mut parent, idx(c.arcs[3]));
        parent[a] = b;
    }
    let mut gen = vec![usize::MAX; labels.len()];
    let mut n_gen = 0;
    for e in 0..labels.len() {
        let r = find(&mut parent, e);
        if gen[r] == usize::MAX {
            gen[r] = n_gen;
            n_gen += 1;
        }
        gen[e] = gen[r];
    }
    let t = LaurentPoly::t();
    let one = LaurentPoly::one();
    let mut m = vec![vec![LaurentPoly::zero(); n_gen]; n];
    for (row, c) in pd.crossings.iter().enumerate() {
        let i = gen[idx(c.arcs[0])];
        let j = gen[idx(c.arcs[2])];
        let k = gen[idx(c.arcs[1])];
        let (ci, cj, ck) = if c.sign > 0 {
            (t.clone(), -&one, &one - &t)
        } else {
            (one.clone(), -&t, &t - &one)
        };
        m[row][i].add_assign_ref(&ci);
        m[row][j].add_assign_ref(&cj);
        m[row][k].add_assign_ref(&ck);
    }
    let minor: Vec<Vec<LaurentPoly>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    normalize_alexander(&bareiss_det(minor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn small_knots() {
        let tre = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        assert_eq!(alexander_oracle(&tre).to_string(), "1*t^-1*q^0+-1*t^0*q^0+1*t^1*q^0");
        assert_eq!(alexander_oracle(&tre.mirror()), alexander_oracle(&tre));
        let fig8 = parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]").unwrap();
        assert_eq!(alexander_oracle(&fig8).to_string(), "-1*t^-1*q^0+3*t^0*q^0+-1*t^1*q^0");
        assert!(alexander_oracle(&PDCode::unknot()).is_one());
        assert!(alexander_oracle(&parse_pd("PD[X[1,1,2,2]]").unwrap()).is_one());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let p = |s: &str| s.parse::<LaurentPoly>().unwrap();
        let m = vec![
            vec![p("t"), p("1"), p("0")],
            vec![p("2"), p("q"), p("t^-1")],
            vec![p("0"), p("1"), p("1+t")],
        ];
        // t*(q*(1+t) - t^-1) - 1*(2*(1+t))
        let want = &(&p("t") * &(&(&p("q") * &p("1+t")) - &p("t^-1"))) - &p("2+2*t");
        assert_eq!(bareiss_det(m), want);
    }
}
