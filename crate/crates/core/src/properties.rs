//! Property checks that cut across modules.

use proptest::prelude::*;

use crate::grid::GridDiagram;
use crate::montesinos::{classify_equal, mutate_spec};
use crate::{build_diagram, jones, kauffman_f, Diagram, Fraction, MontesinosSpec, SkeinConfig};

fn braid() -> impl Strategy<Value = Diagram> {
    prop::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 1..8)
        .prop_map(|w| Diagram::braid_closure(4, &w).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn grid() -> impl Strategy<Value = GridDiagram> {
    (2usize..8)
        .prop_flat_map(|n| (permutation(n), permutation(n)))
        .prop_filter_map("X and O share a cell", |(xs, os)| GridDiagram::new(xs, os).ok())
}

fn spec() -> impl Strategy<Value = MontesinosSpec> {
    let frac = (1i64..6, 2i64..6, any::<bool>()).prop_filter_map("coprime", |(b, a, neg)| {
        (b < a && num_integer::gcd(b, a) == 1).then(|| Fraction::new(if neg { -b } else { b }, a).unwrap())
    });
    prop::collection::vec(frac, 3..5).prop_map(|t| MontesinosSpec::new(0, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pd_round_trip(d in braid()) {
        let back = Diagram::parse_pd(&d.to_pd()).unwrap();
        prop_assert_eq!(back.canonical_code(), d.canonical_code());
        prop_assert_eq!(jones(&back).unwrap(), jones(&d).unwrap());
    }

    #[test]
    fn mirror_inverts_a(d in braid()) {
        let cfg = SkeinConfig::default();
        prop_assert_eq!(kauffman_f(&d.mirror(), &cfg).unwrap(), kauffman_f(&d, &cfg).unwrap().invert_a());
        prop_assert_eq!(jones(&d.mirror()).unwrap(), jones(&d).unwrap().invert());
    }

    #[test]
    fn kinks_do_not_change_f(d in braid(), edge in any::<prop::sample::Index>(), positive: bool, left: bool) {
        let cfg = SkeinConfig::default();
        let k = d.add_kink(edge.index(4 * d.crossing_count()), if positive { 1 } else { -1 }, left).unwrap();
        prop_assert_eq!(kauffman_f(&k, &cfg).unwrap(), kauffman_f(&d, &cfg).unwrap());
    }

    #[test]
    fn grid_text_round_trip(g in grid()) {
        let text = g.to_string();
        prop_assert_eq!(text.parse::<GridDiagram>().unwrap(), g.clone());
        prop_assert_eq!(g.transpose().transpose(), g.clone());
        prop_assert_eq!(g.mirror().mirror(), g);
    }

    #[test]
    fn grid_symmetries_act_on_f(g in grid()) {
        let cfg = SkeinConfig::default();
        let f = kauffman_f(&g.to_diagram().unwrap(), &cfg).unwrap();
        prop_assert_eq!(kauffman_f(&g.transpose().to_diagram().unwrap(), &cfg).unwrap(), f.clone());
        prop_assert_eq!(kauffman_f(&g.mirror().to_diagram().unwrap(), &cfg).unwrap(), f.invert_a());
    }

    #[test]
    fn full_twist_adds_two_crossings(g in grid(), pick in any::<prop::sample::Index>()) {
        let crossings = g.crossings();
        prop_assume!(!crossings.is_empty());
        let (r, c) = crossings[pick.index(crossings.len())];
        let t = g.insert_full_twist(r, c).unwrap();
        prop_assert_eq!(t.size(), g.size() + 2);
        let (d, dt) = (g.to_diagram().unwrap(), t.to_diagram().unwrap());
        prop_assert_eq!(dt.crossing_count(), d.crossing_count() + 2);
        prop_assert_eq!(dt.component_count(), d.component_count());
    }

    #[test]
    fn spec_text_round_trip(s in spec()) {
        prop_assert_eq!(s.to_string().parse::<MontesinosSpec>().unwrap(), s);
    }

    #[test]
    fn swapping_twice_is_the_identity(s in spec(), i in 0usize..2) {
        let m = mutate_spec(&s, i, i + 1).unwrap();
        prop_assert_eq!(mutate_spec(&m, i, i + 1).unwrap(), s);
    }

    #[test]
    fn mutants_share_f_and_classification_is_symmetric(s in spec(), i in 0usize..2) {
        let m = mutate_spec(&s, i, i + 1).unwrap();
        // Classification only covers Σ1/α ≤ r − 2.
        if let Ok(eq) = classify_equal(&s, &m) {
            prop_assert!(classify_equal(&s, &s).unwrap());
            prop_assert_eq!(eq, classify_equal(&m, &s).unwrap());
        }
        let cfg = SkeinConfig::default();
        let (ds, dm) = (build_diagram(&s).unwrap(), build_diagram(&m).unwrap());
        let (fs, fm) = (kauffman_f(&ds, &cfg).unwrap(), kauffman_f(&dm, &cfg).unwrap());
        if ds.component_count() == 1 {
            prop_assert_eq!(fm, fs);
        } else {
            // Mutation may reverse a component relative to the others, which
            // moves F by the change in linking number.
            let shift = fm.min_a().unwrap() - fs.min_a().unwrap();
            prop_assert_eq!(fm, fs.shift(shift, 0));
        }
    }
}
