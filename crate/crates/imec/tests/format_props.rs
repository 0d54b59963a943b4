//! Round trips of the text formats on random graphs.

use imec::format::{parse_admg, parse_mixed, parse_targets, write_admg, write_mixed, write_targets};
use imec_core::{latent_project, Admg, InterventionSet, NodeSet};
use proptest::prelude::*;

fn arb_admg() -> impl Strategy<Value = Admg> {
    (1usize..=6)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), pairs),
                proptest::collection::vec(any::<bool>(), pairs),
            )
        })
        .prop_map(|(n, order, dir, bi)| {
            let mut pa = vec![NodeSet::EMPTY; n];
            let mut sp = vec![NodeSet::EMPTY; n];
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if dir[k] {
                        pa[order[b]].insert(order[a]);
                    }
                    if bi[k] {
                        sp[a].insert(b);
                        sp[b].insert(a);
                    }
                    k += 1;
                }
            }
            Admg::from_masks((0..n).map(|i| format!("N{i}")).collect(), pa, sp).unwrap()
        })
}

proptest! {
    #[test]
    fn admg_text_round_trip(g in arb_admg()) {
        prop_assert_eq!(parse_admg(&write_admg(&g)).unwrap(), g);
    }

    #[test]
    fn mixed_text_round_trip(g in arb_admg()) {
        let m = latent_project(&g).unwrap();
        prop_assert_eq!(parse_mixed(&write_mixed(&m)).unwrap(), m);
    }

    #[test]
    fn targets_round_trip(g in arb_admg(), bits in proptest::collection::btree_set(0u64..64, 1..4)) {
        let mask = (1u64 << g.n()) - 1;
        let sets: std::collections::BTreeSet<u64> = bits.into_iter().map(|b| b & mask).collect();
        let iset = InterventionSet::new(sets.into_iter().map(NodeSet::from_bits).collect()).unwrap();
        prop_assert_eq!(parse_targets(&write_targets(&iset, &g), &g).unwrap(), iset);
    }
}
