//! Property tests for address genealogy and plane-tree construction.

use proptest::prelude::*;
use ulam_core::{meet, plane_tree_attach, PlaneTree, Ray, UlamAddress};

fn arb_address() -> impl Strategy<Value = UlamAddress> {
    prop::collection::vec(1u32..6, 0..8)
        .prop_map(|letters| UlamAddress::from_letters(letters).unwrap())
}

proptest! {
    #[test]
    fn meet_is_commutative_and_associative(
        u in arb_address(),
        v in arb_address(),
        w in arb_address(),
    ) {
        prop_assert_eq!(meet(&u, &v), meet(&v, &u));
        prop_assert_eq!(meet(&u, &meet(&v, &w)), meet(&meet(&u, &v), &w));
    }

    #[test]
    fn meet_height_is_bounded_by_both(u in arb_address(), v in arb_address()) {
        let m = meet(&u, &v);
        prop_assert!(m.height() <= u.height().min(v.height()));
        prop_assert!(m.is_prefix_of(&u));
        prop_assert!(m.is_prefix_of(&v));
        prop_assert_eq!(meet(&u, &u), u);
    }

    #[test]
    fn display_parse_round_trip(u in arb_address()) {
        let text = u.to_string();
        let back: UlamAddress = text.parse().unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn random_attachment_sequences_stay_valid(choices in prop::collection::vec(0usize..100, 1..60)) {
        // Grow a tree by attaching to pseudo-randomly chosen existing
        // vertices; the full validator must accept every intermediate tree.
        let mut tree = PlaneTree::root_only();
        let mut vertices = vec![UlamAddress::root()];
        for c in choices {
            let parent = vertices[c % vertices.len()].clone();
            let child = tree.attach(&parent).unwrap();
            vertices.push(child);
            tree.validate().unwrap();
        }
        let rebuilt = PlaneTree::from_vertices(vertices.clone()).unwrap();
        prop_assert_eq!(rebuilt.len(), vertices.len());
    }

    #[test]
    fn functional_attach_leaves_original_untouched(u in arb_address()) {
        let mut tree = PlaneTree::root_only();
        let mut cursor = UlamAddress::root();
        // Materialize the path to u so there is a nontrivial tree.
        for &letter in u.letters() {
            for _ in tree.out_degree(&cursor).unwrap()..letter {
                tree.attach(&cursor).unwrap();
            }
            cursor = cursor.child(letter);
        }
        let before = tree.clone();
        let (grown, child) = plane_tree_attach(&tree, &cursor).unwrap();
        prop_assert_eq!(&tree, &before);
        prop_assert!(grown.contains(&child));
        prop_assert!(!tree.contains(&child));
        grown.validate().unwrap();
    }

    #[test]
    fn ray_truncations_are_nested(letters in prop::collection::vec(1u32..5, 1..10), k in 0usize..10) {
        let mut ray = Ray::periodic(letters);
        let shorter = ray.truncate(k);
        let longer = ray.truncate(k + 3);
        prop_assert!(shorter.is_prefix_of(&longer));
        prop_assert_eq!(shorter.height(), k);
    }
}
