use socialai_core::param_tree::{shipped, SHIPPED};
use socialai_core::EnvParams;

#[test]
fn shipped_trees_resolve_to_valid_params() {
    for (name, _) in SHIPPED {
        let tree = shipped(name).unwrap();
        let sets = tree.enumerate();
        assert!(!sets.is_empty(), "{name}");
        let total: f64 = sets.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-9, "{name}: {total}");
        for (set, _) in sets {
            EnvParams::from_param_set(&set).unwrap_or_else(|e| panic!("{name} {set:?}: {e}"));
        }
    }
}

#[test]
fn tree_round_trips_through_json() {
    for (name, _) in SHIPPED {
        let tree = shipped(name).unwrap();
        let again = socialai_core::ParamTree::from_json(&tree.to_json()).unwrap();
        assert_eq!(tree, again);
    }
}

#[test]
fn unknown_tree_name_errors() {
    assert!(shipped("nope").is_err());
}
