use crate::params::CutoffMode;

use super::TripletGeometry;

/// Whether a triplet survives truncation. Boundaries are inclusive.
pub fn cutoff_accept(g: &TripletGeometry, r_c: f64, mode: CutoffMode) -> bool {
    match mode {
        CutoffMode::Pair => g.r_ij.max(g.r_ik).max(g.r_jk) <= r_c,
        CutoffMode::Product => g.r_ij * g.r_ik * g.r_jk <= r_c * r_c * r_c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tri(a: f64, b: f64, c: f64) -> TripletGeometry {
        TripletGeometry::from_lengths(a, b, c)
    }

    #[test]
    fn examples() {
        assert!(cutoff_accept(&tri(1.0, 1.0, 1.0), 1.0, CutoffMode::Pair));
        assert!(cutoff_accept(&tri(1.0, 1.0, 1.0), 1.0, CutoffMode::Product));
        assert!(!cutoff_accept(&tri(1.5, 1.0, 0.5), 1.0, CutoffMode::Pair));
        assert!(cutoff_accept(&tri(1.5, 1.0, 0.5), 1.0, CutoffMode::Product));
        assert!(!cutoff_accept(&tri(1.1, 1.1, 1.1), 1.0, CutoffMode::Pair));
        assert!(!cutoff_accept(&tri(1.1, 1.1, 1.1), 1.0, CutoffMode::Product));
    }

    proptest! {
        #[test]
        fn pair_implies_product(a in 0.01f64..4.0, b in 0.01f64..4.0, c in 0.01f64..4.0, rc in 0.5f64..3.0) {
            let g = tri(a, b, c);
            if cutoff_accept(&g, rc, CutoffMode::Pair) {
                prop_assert!(cutoff_accept(&g, rc, CutoffMode::Product));
            }
        }

        #[test]
        fn squared_form_agrees(a in 0.01f64..4.0, b in 0.01f64..4.0, c in 0.01f64..4.0, rc in 0.5f64..3.0) {
            let g = tri(a, b, c);
            let rc2 = rc * rc;
            for mode in CutoffMode::ALL {
                let sq = mode.accepts_sq(a * a, b * b, c * c, rc2, rc2 * rc2 * rc2);
                let margin = match mode {
                    CutoffMode::Pair => (a.max(b).max(c) - rc).abs(),
                    CutoffMode::Product => (a * b * c - rc * rc * rc).abs(),
                };
                if margin > 1e-9 {
                    prop_assert_eq!(sq, cutoff_accept(&g, rc, mode));
                }
            }
        }
    }
}
