mod common;

use common::*;
use std::collections::BTreeMap;
use vn_core::analysis::*;
use vn_core::diagram::{cable_2_1, torus_2, PDCode};
use vn_core::engine::evaluate;
use vn_core::LaurentPoly;

fn annotations() -> BTreeMap<String, Annotation> {
    read_annotations(std::fs::File::open(data("census/annotations.csv")).unwrap()).unwrap()
}

#[test]
fn alexander_oracle_values() {
    let pds = reference_knots();
    assert_eq!(alexander_oracle(&pds["3_1"]), "t - 1 + t^-1".parse().unwrap());
    assert_eq!(alexander_oracle(&pds["6_2"]), "-t^2 + 3*t - 3 + 3*t^-1 - t^-2".parse().unwrap());
    for (name, pd) in census_named("11", &["11n34", "11n42"]) {
        assert!(alexander_oracle(&pd).is_one(), "{name}");
    }
}

#[test]
fn axioms_up_to_10_crossings() {
    for n in [1, 2] {
        let b = bundle(n);
        for (name, pd) in census_upto(10) {
            let v = evaluate(&pd, &b).unwrap().value;
            assert!(check_symmetry(&v), "{name} n={n}");
            let s = check_specialization(&v, &pd);
            assert!(s.at_t_eq_q && s.at_q_eq_1, "{name} n={n}: {s:?}");
        }
    }
}

#[test]
fn relation_for_fourteen_knots() {
    let (b1, b2) = (bundle(1), bundle(2));
    let mut knots: Vec<(String, PDCode)> = vec![("0_1".into(), PDCode::unknot())];
    knots.extend(census_named("03_10", &["3_1", "4_1", "6_1", "6_2", "6_3", "7_7", "8_3", "8_4"]));
    let mut count = 0;
    for (name, pd) in knots {
        for d in [pd.clone(), pd.mirror()] {
            let v1 = evaluate(&d, &b1).unwrap().value;
            let vc = evaluate(&cable_2_1(&d).unwrap(), &b1).unwrap().value;
            let v2 = evaluate(&d, &b2).unwrap().value;
            assert_eq!(v2_from_v1(&v1, &vc).unwrap(), v2, "{name}");
            count += 1;
        }
    }
    assert_eq!(count, 18);
}

#[test]
fn genus_equality_up_to_10_crossings() {
    let ann = annotations();
    for n in [1u32, 2] {
        let b = bundle(n);
        let mut recs = Vec::new();
        for (name, pd) in census_upto(10) {
            let mut r = InvariantRecord::new(&name, n, evaluate(&pd, &b).unwrap().value);
            r.annotate(ann.get(&name), None);
            recs.push(r);
        }
        let rep = genus_report(&recs);
        assert_eq!(rep.rows.len(), 249);
        assert_eq!(rep.violation, 0);
        if n == 2 {
            assert_eq!(rep.equality, 249, "{:?}", rep.rows.iter().filter(|r| r.3 != GenusStatus::Equality).collect::<Vec<_>>());
        }
    }
}

#[test]
fn loose_knots_with_11_crossings() {
    let ann = annotations();
    let rows: Vec<Vec<String>> = std::fs::read_to_string(data("reference/loose11.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').map(String::from).collect())
        .collect();
    let (b1, b2) = (bundle(1), bundle(2));
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    for ((name, pd), row) in census_named("11", &names).into_iter().zip(&rows) {
        assert_eq!(ann[&name].genus, Some(row[1].parse().unwrap()));
        assert_eq!(evaluate(&pd, &b1).unwrap().value.t_span().unwrap(), row[2].parse::<u32>().unwrap(), "{name}");
        assert_eq!(evaluate(&pd, &b2).unwrap().value.t_span().unwrap(), row[3].parse::<u32>().unwrap(), "{name}");
        assert_eq!(alexander_oracle(&pd).is_one(), row[4] == "true", "{name}");
    }
    // These are all the loose knots with 11 crossings.
    let loose: Vec<String> = table("census/knots_11.tsv")
        .into_iter()
        .filter(|(name, pd)| {
            let g = ann[name].genus.unwrap();
            alexander_oracle(pd).t_span().unwrap() < 2 * g
        })
        .map(|(n, _)| n)
        .collect();
    assert_eq!(loose, names);
}

#[test]
fn torus_recurrences_match_direct_evaluation() {
    for n in [1u32, 2] {
        let b = bundle(n);
        let fam = torus_family(n, -3..=3).unwrap();
        for k in -3..=3i64 {
            let pd = torus_2(2 * k as i32 + 1).unwrap();
            assert_eq!(evaluate(&pd, &b).unwrap().value, fam[&k], "n={n} b={k}");
        }
    }
    // The reference trefoil is T(2,-3) in the fixed chirality.
    let g = golden();
    assert_eq!(torus_family(2, -2..=-2).unwrap()[&-2], g[&("3_1".into(), "v2".into())]);
    assert_eq!(torus_family(1, -2..=-2).unwrap()[&-2], g[&("3_1".into(), "v1".into())]);
}

#[test]
fn torus_spans_up_to_20() {
    for n in [1u32, 2] {
        let fam = torus_family(n, -21..=20).unwrap();
        for (&b, p) in &fam {
            let genus = if b >= 0 { b } else { -b - 1 };
            assert_eq!(p.t_span().unwrap() as i64, 4 * genus, "n={n} b={b}");
            assert_eq!(&fam[&(-b - 1)], &p.invert_q());
        }
    }
}

#[test]
fn positivity_of_alternating_knots() {
    let ann = annotations();
    let b = bundle(1);
    let mut recs = Vec::new();
    for (name, pd) in census_upto(8) {
        let mut r = InvariantRecord::new(&name, 1, evaluate(&pd, &b).unwrap().value);
        r.annotate(ann.get(&name), None);
        recs.push(r);
    }
    let eight_alt = recs.iter().filter(|r| r.name.starts_with("8_") && r.flags.contains(&Flag::Alternating)).count();
    assert_eq!(eight_alt, 18);
    let rep = positivity_audit(&recs);
    assert_eq!(rep.checked, recs.iter().filter(|r| r.flags.contains(&Flag::Alternating)).count());
    assert!(rep.failures.is_empty(), "{:?}", rep.failures);
}

fn reference_pairs(crossings: &str) -> Vec<(String, String, u32)> {
    std::fs::read_to_string(data("reference/pairs.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .filter(|f| f[0] == crossings)
        .map(|f| (f[1].to_string(), f[2].to_string(), f[4].parse().unwrap()))
        .collect()
}

fn sieve_file(rel: &str) -> Option<(Vec<InvariantRecord>, Vec<Vec<ClassMember>>)> {
    let f = std::fs::File::open(data(rel)).ok()?;
    let recs = read_records(f).unwrap();
    let classes = sieve_classes(&recs, true);
    Some((recs, classes))
}

fn load_pairs(crossings: &str, count: usize, expect_rows: usize) -> (Vec<InvariantRecord>, Vec<(String, String)>, Vec<(String, String, u32)>) {
    let Some((recs, classes)) = sieve_file(&format!("results/v2_{crossings}.tsv")) else {
        panic!("results/v2_{crossings}.tsv missing; produce it with `vn batch`");
    };
    assert_eq!(recs.len(), expect_rows);
    assert!(classes.iter().all(|c| c.len() == 2));
    let got: Vec<(String, String)> = classes.iter().map(|c| (c[0].name.clone(), c[1].name.clone())).collect();
    let want = reference_pairs(crossings);
    assert_eq!(want.len(), count);
    (recs, got, want)
}

fn flavor(r: &InvariantRecord) -> u32 {
    match (r.flags.contains(&Flag::Tight), r.flags.contains(&Flag::Thin)) {
        (true, true) => 1,
        (true, false) => 2,
        (false, false) => 3,
        (false, true) => 0,
    }
}

fn check_flavors(recs: &[InvariantRecord], want: &[(String, String, u32)]) {
    let by_name: BTreeMap<&str, &InvariantRecord> = recs.iter().map(|r| (r.name.as_str(), r)).collect();
    for (a, b, f) in want {
        for k in [a, b] {
            assert_eq!(flavor(by_name[k.as_str()]), *f, "{k}");
        }
    }
}

#[test]
fn sieve_12_crossings() {
    let (recs, got, want) = load_pairs("12", 3, 2176);
    let mut want_pairs: Vec<(String, String)> = want.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
    want_pairs.sort_by_key(|p| name_key(&p.0));
    assert_eq!(got, want_pairs);
    check_flavors(&recs, &want);
}

#[test]
fn sieve_13_crossings_contains_reference_pairs() {
    // The exact class count is an acceptance criterion; here every reference pair
    // must be found and every class must join knots with equal genus and flags.
    let (recs, got, want) = load_pairs("13", 25, 9988);
    for (a, b, _) in &want {
        assert!(got.contains(&(a.clone(), b.clone())), "{a} {b}");
    }
    check_flavors(&recs, &want);
    let by_name: BTreeMap<&str, &InvariantRecord> = recs.iter().map(|r| (r.name.as_str(), r)).collect();
    for (a, b) in &got {
        let (x, y) = (by_name[a.as_str()], by_name[b.as_str()]);
        assert_eq!((x.genus, &x.flags), (y.genus, &y.flags), "{a} {b}");
    }
}

#[test]
fn relation_denominator_identity() {
    let [n0, n1, nm, d] = relation_numerators();
    assert_eq!(&(&n0 + &n1) + &nm, d);
    assert!(v2_from_v1(&LaurentPoly::one(), &LaurentPoly::one()).unwrap().is_one());
}
