#![allow(dead_code)]

use std::collections::BTreeMap;
use vn_core::diagram::{parse_pd, PDCode};
use vn_core::rmatrix::{load_bundle, RMatrixBundle};
use vn_core::{LaurentPoly, UForm};

pub fn data(rel: &str) -> String {
    format!("{}/../../data/{rel}", env!("CARGO_MANIFEST_DIR"))
}

pub fn bundle(n: u32) -> RMatrixBundle {
    load_bundle(data(&format!("bundles/v{n}.rmx"))).expect("shipped bundle")
}

pub fn uform(cs: &str) -> LaurentPoly {
    UForm::new(cs.split(';').map(|s| s.parse().unwrap()).collect()).expand()
}

/// `knot -> pd` from a two-column table with a header or comment line.
pub fn table(rel: &str) -> Vec<(String, PDCode)> {
    std::fs::read_to_string(data(rel))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("name\t"))
        .map(|l| {
            let (a, b) = l.split_once('\t').unwrap();
            (a.to_string(), parse_pd(b).unwrap())
        })
        .collect()
}

pub fn reference_knots() -> BTreeMap<String, PDCode> {
    table("reference/knots.tsv").into_iter().collect()
}

/// (knot, invariant) -> value.
pub fn golden() -> BTreeMap<(String, String), LaurentPoly> {
    std::fs::read_to_string(data("reference/golden.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            ((f[0].to_string(), f[1].to_string()), uform(f[2]))
        })
        .collect()
}

/// Knots up to `max` crossings from the census table, in census order.
pub fn census_upto(max: usize) -> Vec<(String, PDCode)> {
    table("census/knots_03_10.tsv").into_iter().filter(|(_, pd)| pd.len() <= max).collect()
}

pub fn census_named(file: &str, names: &[&str]) -> Vec<(String, PDCode)> {
    let rows = table(&format!("census/knots_{file}.tsv"));
    names
        .iter()
        .map(|n| rows.iter().find(|(m, _)| m == n).cloned().unwrap_or_else(|| panic!("{n} missing")))
        .collect()
}
