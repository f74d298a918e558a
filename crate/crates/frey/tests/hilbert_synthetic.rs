//! Orchestration over a synthetic Hilbert space at level q2^2 q7^2.

use std::collections::BTreeMap;
use std::path::Path;

use frey::cache::{CounterPool, SharedCache};
use frey::certificate::{verify, Certificate};
use frey::prove::{prove, ProveOptions, Theorem};
use frey::schema::{fixture_path, Space};
use frey_core::frey::Level;
use frey_core::heckedata::{chi7_twist, synthesize_from_j, BaseField, NewformRecord};
use frey_core::numfield::{split_prime, NFElement, NumberFieldSpec};
use frey_core::{BigInt, BigRational};

/// J(0, 1) has CM: its traces vanish at 13 and 41, which are -1 mod 7.
const AUX: [u64; 3] = [5, 13, 41];

/// Eigenvalues a_pr + shift(a_pr) of J(x, y).
fn j_record(x: i64, y: i64, label: &str, shift: impl Fn(&NFElement) -> i64) -> NewformRecord {
    let pool = CounterPool::new(3, frey_core::ffield::DEFAULT_CAP);
    let cache = SharedCache::new();
    let mut rec = synthesize_from_j(&BigInt::from(x), &BigInt::from(y), &AUX, &pool.as_fn(), &cache).unwrap();
    rec.label = label.to_string();
    rec.complete_below_norm = 30;
    for a in rec.eigenvalues.values_mut() {
        *a = a.add_rational(&BigRational::from_integer(BigInt::from(shift(a))));
    }
    rec
}

/// A form with rational Hecke field: K is not contained in it.
fn rational_record(label: &str, level: Level) -> NewformRecord {
    let field = NumberFieldSpec::rationals();
    let mut eig = BTreeMap::new();
    for q in AUX {
        for pr in split_prime(q) {
            eig.insert(pr.key(), NFElement::from_int(&field, 0));
        }
    }
    NewformRecord {
        label: label.to_string(),
        base: BaseField::K,
        level,
        hecke_field: field,
        eigenvalues: eig,
        complete_below_norm: 30,
        provenance: frey_core::heckedata::Provenance::Synthetic,
    }
}

fn write_space(root: &Path, level: Level, mut records: Vec<NewformRecord>) {
    for r in &mut records {
        r.level = level;
    }
    let path = fixture_path(root, &level);
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    Space { base: BaseField::K, level, records }.write(&path).unwrap();
}

fn statuses(cert: &Certificate) -> BTreeMap<String, String> {
    cert.cases.iter().flat_map(|c| c.forms.iter()).map(|f| (f.label.clone(), f.status.clone())).collect()
}

fn opts(root: &Path) -> ProveOptions {
    ProveOptions { fixtures: root.to_path_buf(), aux_primes: Some(AUX.to_vec()), ..ProveOptions::default() }
}

/// Moves a rational eigenvalue by 5 towards zero, keeping it inside the Weil interval.
fn toward_zero(a: &NFElement) -> i64 {
    if a.coords[0] > BigRational::from_integer(BigInt::from(0)) {
        -5
    } else {
        5
    }
}

/// Writes the space at q2^2 q7^2 and returns the form congruent to J(0, 1) modulo 5.
fn base_space(root: &Path) -> NewformRecord {
    let congruent = j_record(0, 1, "syn.congruent", toward_zero);
    write_space(
        root,
        Level::k(2, 0, 2),
        vec![
            j_record(0, 1, "syn.cm", |_| 0),
            j_record(1, 2, "syn.shifted", |_| 2),
            congruent.clone(),
            rational_record("syn.rational", Level::k(2, 0, 2)),
        ],
    );
    congruent
}

#[test]
fn frey_form_is_a_self_survivor() {
    let dir = tempfile::tempdir().unwrap();
    base_space(dir.path());
    let cert = prove(Theorem::OtherPart2, None, &opts(dir.path())).unwrap();
    let st = statuses(&cert);
    assert_eq!(st["syn.cm"], "self-survivor");
    assert_eq!(st["syn.shifted"], "eliminated");
    assert_eq!(st["syn.congruent"], "survives");
    assert_eq!(st["syn.rational"], "excluded");
    let congruent = cert.cases[0].forms.iter().find(|f| f.label == "syn.congruent").unwrap();
    assert_eq!(congruent.survivors, vec![5]);
    assert_eq!(cert.cases[0].aux_primes, AUX.to_vec());
    assert_eq!(cert.conclusion, "incomplete");
    verify(&cert, dir.path(), 5).unwrap();
}

#[test]
fn twist_partner_settles_a_survivor() {
    let dir = tempfile::tempdir().unwrap();
    let congruent = base_space(dir.path());
    let partner = chi7_twist(&congruent, "syn.partner");
    write_space(dir.path(), Level::k(2, 0, 0), vec![partner]);
    let cert = prove(Theorem::OtherPart2, None, &opts(dir.path())).unwrap();
    let st = statuses(&cert);
    assert_eq!(st["syn.congruent"], "eliminated-by-twist-rule");
    assert_eq!(st["syn.cm"], "self-survivor");
    assert_eq!(cert.conclusion, "complete");
    assert_eq!(cert.fixtures.len(), 2);
    assert!(cert.cases[0].imported_facts.iter().any(|f| f.contains("chi_7 twist")));
}

#[test]
fn records_below_the_aux_primes_are_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    base_space(dir.path());
    let o = ProveOptions { aux_primes: Some(vec![5, 13, 41, 43]), ..opts(dir.path()) };
    match prove(Theorem::OtherPart2, None, &o) {
        Err(frey::error::Error::Incomplete { need, .. }) => assert_eq!(need, 44),
        other => panic!("expected an incomplete-data error, got {:?}", other.map(|c| c.conclusion)),
    }
}
