use oscillation::dyck::{embeds, harmonic, rank};
use oscillation::trees::{
    dimension, flattening, footprint, oscillation, perfect_binary, yield_word, QuasiTree,
};
use proptest::prelude::*;

fn tree() -> impl Strategy<Value = QuasiTree> {
    let leaf = prop_oneof![
        Just(QuasiTree::terminal("x")),
        Just(QuasiTree::terminal("y"))
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop::collection::vec(inner, 1..=3).prop_map(|cs| QuasiTree::node("N", cs))
    })
}

/// Height of the tallest perfect binary tree that is a topological minor,
/// by direct search: a node hosts height h + 1 when two distinct children
/// host height h, and passes a child's value up otherwise.
fn binary_minor_height(t: &QuasiTree) -> usize {
    if t.is_leaf() {
        return 0;
    }
    let mut hs: Vec<usize> = t.children.iter().map(binary_minor_height).collect();
    hs.sort_unstable_by(|a, b| b.cmp(a));
    match hs.as_slice() {
        [a, b, ..] if a == b => a + 1,
        [a, ..] => *a,
        [] => 0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn oscillation_and_dimension_bounds(t in tree()) {
        let (o, d) = (oscillation(&t), dimension(&t));
        prop_assert!(o <= d + 1, "osc {} dim {}", o, d);
        prop_assert!(d <= 2 * o, "osc {} dim {}", o, d);
    }

    #[test]
    fn dimension_is_the_binary_minor_height(t in tree()) {
        prop_assert_eq!(dimension(&t), binary_minor_height(&t));
    }

    #[test]
    fn footprint_has_two_letters_per_node(t in tree()) {
        prop_assert_eq!(footprint(&t).len(), 2 * t.node_count());
        prop_assert_eq!(flattening(&t).len(), 2 * (t.node_count() - 1));
    }

    #[test]
    fn oscillation_is_the_largest_embedded_harmonic(t in tree()) {
        let o = oscillation(&t);
        let f = footprint(&t);
        prop_assert_eq!(o, rank(&f));
        prop_assert!(embeds(&harmonic(o).unwrap(), &f));
        prop_assert!(!embeds(&harmonic(o + 1).unwrap(), &f));
    }

    #[test]
    fn text_round_trip(t in tree()) {
        let back: QuasiTree = t.to_string().parse().unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(yield_word(&back).len(), t.subtrees().iter().filter(|s| s.is_leaf()).count());
    }
}

#[test]
fn perfect_trees_have_dimension_equal_to_height() {
    for h in 0..=8 {
        assert_eq!(dimension(&perfect_binary(h)), h);
        assert_eq!(binary_minor_height(&perfect_binary(h)), h);
    }
}
