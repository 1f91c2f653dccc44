use std::time::Instant;

use polylogic::algebra::{coheyting_of_lowersets, heyting_of_upsets, FiniteLattice, SearchLimits};
use polylogic::corpus;
use polylogic::pipeline::{
    gamma_pointwise, verify_dim_bd, verify_esakia, verify_hneg, verify_ji, verify_nerve,
};
use polylogic::poset::DEFAULT_UPSET_CAP;

#[test]
fn dimension_equals_face_poset_depth() {
    for c in corpus::complexes() {
        assert_eq!(c.complex.dim(), c.complex.face_poset().depth(), "{}", c.name);
    }
}

#[test]
fn four_simplex_algebra_sizes() {
    let k = corpus::simplex(4).unwrap();
    let p = k.face_poset();
    assert_eq!(p.len(), 31);
    assert_eq!(heyting_of_upsets(p, DEFAULT_UPSET_CAP).unwrap().len(), 7580);
    assert_eq!(coheyting_of_lowersets(p, DEFAULT_UPSET_CAP).unwrap().len(), 7580);
}

#[test]
fn dim_bd_pattern_on_simplices() {
    let start = Instant::now();
    for d in 0..=4 {
        let r = verify_dim_bd(&corpus::simplex(d).unwrap(), SearchLimits::default()).unwrap();
        assert!(r.passed(), "simplex{d}: {}", r.to_json());
        assert_eq!(r.dim, d as i64);
    }
    eprintln!("dim/bd on simplices: {:?}", start.elapsed());
}

#[test]
fn ji_counts_on_corpus() {
    for c in corpus::complexes() {
        let r = verify_ji(&c.complex, DEFAULT_UPSET_CAP).unwrap();
        assert!(r.passed(), "{}: {r:?}", c.name);
        assert_eq!(r.closed_jis, c.complex.len());
    }
}

#[test]
fn hneg_on_corpus() {
    let all = corpus::complexes();
    let mut trials = 0;
    for c in &all {
        let r = verify_hneg(&c.complex, 80, 2024, DEFAULT_UPSET_CAP).unwrap();
        assert!(r.passed(), "{}: {r:?}", c.name);
        trials += r.trials;
    }
    assert!(trials >= 500);
}

#[test]
fn gamma_on_corpus() {
    let mut points = 0;
    for c in corpus::complexes() {
        let r = gamma_pointwise(&c.complex, 13, 30, 2024, DEFAULT_UPSET_CAP).unwrap();
        assert!(r.passed(), "{}: {r:?}", c.name);
        points += r.points;
    }
    assert!(points >= 1000, "{points}");
}

#[test]
fn esakia_and_nerve_up_to_five() {
    for a in corpus::posets(5) {
        assert!(verify_esakia(&a, DEFAULT_UPSET_CAP).unwrap().passed());
        assert!(verify_nerve(&a, DEFAULT_UPSET_CAP, false).unwrap().passed());
    }
}
