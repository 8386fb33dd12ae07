mod common;

use common::*;
use tribody::oracle::OracleScope;
use tribody::{CutoffMode, TraversalKind};

#[test]
fn pair_cutoff_matches_unlimited_oracle() {
    for (s, &(n, rho)) in FEASIBLE_STATES.iter().enumerate() {
        let phase = random_phase(n, rho, 100 + s as u64);
        let reference = oracle(&phase, &params(TraversalKind::C08, CutoffMode::Pair), OracleScope::Unlimited);
        for kind in TraversalKind::ALL {
            let (ps, ev, _) = evaluate(&phase, params(kind, CutoffMode::Pair), false);
            let dev = worst_deviation(&ps, &ev, &reference);
            assert!(dev <= 1e-10, "{kind} N={n} rho={rho}: deviation {dev:e}");
        }
    }
}

#[test]
fn pair_cutoff_limited_oracle_is_identical() {
    let phase = random_phase(150, 0.1, 7);
    let p = params(TraversalKind::C08, CutoffMode::Pair);
    let a = tribody::oracle::brute_force(&phase, &p, false).unwrap();
    let b = tribody::oracle::brute_force(&phase, &p, true).unwrap();
    assert_eq!(a.accepted_set, b.accepted_set);
    assert_eq!(a.e3, b.e3);
}

#[test]
fn product_cutoff_matches_traversal_oracle() {
    for (s, &(n, rho)) in FEASIBLE_STATES.iter().enumerate() {
        let phase = random_phase(n, rho, 200 + s as u64);
        let mut sets = Vec::new();
        for kind in TraversalKind::ALL {
            let p = params(kind, CutoffMode::Product);
            let (ps, ev, dims) = evaluate(&phase, p, true);
            let reference = oracle(&phase, &p, OracleScope::Traversal { kind, dims });
            let dev = worst_deviation(&ps, &ev, &reference);
            assert!(dev <= 1e-10, "{kind} N={n} rho={rho}: deviation {dev:e}");
            let got = distinct_sorted(ev.accepted_triplets.clone());
            assert_eq!(got, reference.accepted_set, "{kind} N={n} rho={rho}: accepted set");
            sets.push(got);
        }
        let contains =
            |big: &Vec<[usize; 3]>, small: &Vec<[usize; 3]>| small.iter().all(|t| big.binary_search(t).is_ok());
        assert!(contains(&sets[1], &sets[2]), "3c08 not within 3c18");
        assert!(contains(&sets[0], &sets[1]), "3c18 not within 3c01");
    }
}

#[test]
fn pair_cutoff_traversal_oracles_agree_with_unlimited() {
    let phase = random_phase(400, 0.65, 3);
    let p = params(TraversalKind::C08, CutoffMode::Pair);
    let unlimited = oracle(&phase, &p, OracleScope::Unlimited);
    for kind in TraversalKind::ALL {
        let r = oracle(&phase, &p, OracleScope::Traversal { kind, dims: [3, 3, 3] });
        assert_eq!(r.accepted_set, unlimited.accepted_set, "{kind}");
        assert!(rel(r.e3, unlimited.e3) < 1e-12);
    }
}
