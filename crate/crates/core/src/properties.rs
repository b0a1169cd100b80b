//! Property tests across modules: the combinatorial boundary set against
//! the oracle, the bijections, and serialization.

use proptest::prelude::*;

use crate::abs::{minimal_abs, Abs};
use crate::boundary::{boundary_set, boundary_set_oracle, verify_direct_sum, verify_duality};
use crate::modification::{full_modification, SmallModPair};
use crate::newton::{NewtonPolygon, Segment};
use crate::weyl::DEFAULT_BUDGET;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Polygons of up to `z` segments with total height at most `h`.
fn polygon(z: usize, h: u32) -> impl Strategy<Value = NewtonPolygon> {
    proptest::collection::vec((0u32..6, 0u32..6), 1..=z).prop_filter_map("valid polygon", move |raw| {
        let mut segs: Vec<Segment> = raw
            .into_iter()
            .filter(|&(m, n)| m + n > 0 && gcd(m, n) == 1)
            .map(|(m, n)| Segment::new(m, n))
            .collect();
        segs.sort_by(|a, b| b.cmp_slope(*a));
        let xi = NewtonPolygon::new(segs).ok()?;
        (xi.height() <= h).then_some(xi)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_matches_oracle(xi in polygon(3, 10)) {
        let comb = boundary_set(&xi).unwrap();
        let orc = boundary_set_oracle(&xi, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(comb.types(), orc.types());
        let len = minimal_abs(&xi).unwrap().length();
        for nu in comb.types() {
            prop_assert_eq!(nu.length() + 1, len);
        }
    }

    #[test]
    fn direct_sum_bijection_beyond_three_segments(xi in polygon(4, 12)) {
        let rep = verify_direct_sum(&xi).unwrap();
        prop_assert!(rep.is_ok(), "{}", rep.render_table());
    }

    #[test]
    fn duality_bijection_for_two_segments(xi in polygon(2, 14)) {
        let rep = verify_duality(&xi).unwrap();
        prop_assert!(rep.is_ok(), "{}", rep.render_table());
    }

    #[test]
    fn abs_json_round_trips(xi in polygon(3, 14)) {
        let s = minimal_abs(&xi).unwrap();
        let back: Abs = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(&back, &s);
        let p: NewtonPolygon = serde_json::from_str(&serde_json::to_string(&xi).unwrap()).unwrap();
        prop_assert_eq!(p, xi);
    }

    #[test]
    fn full_modification_keeps_symbols(xi in polygon(3, 10), pick in any::<prop::sample::Index>()) {
        let s = minimal_abs(&xi).unwrap();
        let pairs = SmallModPair::all_in(&s);
        prop_assume!(!pairs.is_empty());
        let tr = full_modification(&s, *pick.get(&pairs)).unwrap();
        prop_assert!(tr.verdict.is_some());
        if let Some(r) = &tr.result {
            let mut a = r.sequence();
            let mut b = s.sequence();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert!(r.length() < s.length());
        }
    }
}
