use proptest::prelude::*;

use hstar::ehrhart::{ehrhart_counts, h_star, interior_points, lattice_points, lattice_points_with, Strategy as Walk};
use hstar::graded::{koszul_betti, toric_generator_counts};
use hstar::io::{parse, PolytopeFile};
use hstar::monoid::{generator_profile, is_idp, is_level};
use hstar::oracle::{
    h_star_by_box_scan, idp_by_compositions, level_by_definition, toric_counts_by_components, Caratheodory,
};
use hstar::polytope::Polytope;
use hstar::Error;

/// Full-dimensional hull of a few small points in dimension 2 or 3.
fn polytope() -> impl Strategy<Value = Polytope> {
    (2usize..=3)
        .prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-2i64..=2, d), d + 1..=d + 4))
        .prop_filter_map("not full-dimensional", |pts| {
            Polytope::from_i64(&pts).ok().filter(Polytope::is_full_dimensional)
        })
}

fn small_polytope() -> impl Strategy<Value = Polytope> {
    polytope().prop_filter("too many lattice points", |p| {
        lattice_points(p, 1).is_ok_and(|v| v.len() <= 9)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn enumeration_strategies_agree(p in polytope(), k in 0u64..=3) {
        let fiber = lattice_points_with(&p, k, Walk::Fiber).unwrap();
        let scan = lattice_points_with(&p, k, Walk::BoxScan).unwrap();
        prop_assert_eq!(&fiber, &scan);
        let mut cara = Caratheodory::new(&p).unwrap().scan(k).unwrap();
        cara.sort();
        prop_assert_eq!(fiber, cara);
    }

    #[test]
    fn hstar_matches_series_oracle(p in polytope()) {
        let h = h_star(&p).unwrap();
        prop_assert_eq!(&h, &h_star_by_box_scan(&p).unwrap());
        let d = p.dim();
        let counts = ehrhart_counts(&p).unwrap();
        prop_assert_eq!(h.get(0), 1);
        prop_assert_eq!(h.get(1), counts[1] - d as u64 - 1);
        prop_assert_eq!(h.get(d), interior_points(&p, 1).unwrap().len() as u64);
        for (k, &l) in counts.iter().enumerate() {
            prop_assert_eq!(h.ehrhart_polynomial_value(k as i64), l as i128);
        }
    }

    #[test]
    fn reciprocity(p in polytope(), k in 1u64..=3) {
        let h = h_star(&p).unwrap();
        let sign = if p.dim() % 2 == 0 { 1 } else { -1 };
        let interior = interior_points(&p, k).unwrap().len() as i128;
        prop_assert_eq!(sign * h.ehrhart_polynomial_value(-(k as i64)), interior);
        let codegree = (1..=p.dim() + 1)
            .find(|&k| !interior_points(&p, k as u64).unwrap().is_empty())
            .unwrap();
        prop_assert_eq!(h.codegree(), codegree);
    }

    #[test]
    fn idp_matches_compositions(p in polytope()) {
        prop_assert_eq!(is_idp(&p).unwrap().value, idp_by_compositions(&p).unwrap());
    }

    #[test]
    fn level_matches_definition(p in polytope()) {
        let report = is_level(&p).unwrap();
        let mut expected = level_by_definition(&p).unwrap();
        expected.sort_unstable();
        let mut got = report.generator_degrees.clone();
        got.sort_unstable();
        prop_assert_eq!(&got, &expected);
        prop_assert_eq!(report.is_level, expected.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn module_generators_are_koszul_zero(p in small_polytope()) {
        let profile = generator_profile(&p).unwrap();
        for k in 2..p.dim() {
            prop_assert_eq!(profile.count(k) as u64, koszul_betti(&p, 0, k).unwrap());
        }
    }

    #[test]
    fn toric_counts_match_components(p in small_polytope()) {
        match toric_generator_counts(&p, 3) {
            Ok(counts) => prop_assert_eq!(counts, toric_counts_by_components(&p, 3).unwrap()),
            Err(Error::NotIdp(_)) => prop_assert!(!is_idp(&p).unwrap().value),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn quadrics_are_first_koszul_syzygies(p in small_polytope()) {
        if let Ok(counts) = toric_generator_counts(&p, 2) {
            prop_assert_eq!(counts.get(&2).copied().unwrap_or(0) as u64, koszul_betti(&p, 1, 2).unwrap());
        }
    }

    #[test]
    fn file_formats_round_trip(p in polytope(), named in any::<bool>()) {
        let name = named.then(|| "sample".to_string());
        let file = PolytopeFile::from_polytope(name, &p);
        prop_assert_eq!(&parse(&file.to_text()).unwrap(), &file);
        prop_assert_eq!(&parse(&file.to_json().to_string()).unwrap(), &file);
        let back = file.polytope().unwrap();
        prop_assert_eq!(back.vertices(), p.vertices());
    }
}
