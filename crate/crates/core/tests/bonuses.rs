use proptest::prelude::*;

use socialai_core::bonuses::{BonusParams, EpisodicCounts};
use socialai_core::grid::{CellEncoding, View, VIEW_SIZE};

fn params() -> impl Strategy<Value = BonusParams> {
    (0.01f64..5.0, 0.01f64..5.0, 0.1f64..4.0).prop_map(|(t, c, m)| BonusParams::new(t, c, m).unwrap())
}

fn view_from(cells: &[u8]) -> View {
    let mut v = [[CellEncoding::EMPTY; VIEW_SIZE]; VIEW_SIZE];
    for (i, &k) in cells.iter().enumerate().take(VIEW_SIZE * VIEW_SIZE) {
        v[i / VIEW_SIZE][i % VIEW_SIZE] = CellEncoding([k % 4, k / 4 % 3, 0, 0, 0, 0, 0, 0]);
    }
    v
}

proptest! {
    #[test]
    fn linguistic_bonus_bounded_and_decreasing(p in params(), words in prop::collection::vec(0usize..5, 1..60)) {
        let vocab = ["Hot", "Warm", "Medium", "Cold", "blue"];
        let mut counts = EpisodicCounts::new();
        let mut last = std::collections::HashMap::new();
        for w in words {
            let b = counts.cbl(vocab[w], &p);
            prop_assert!(b >= 0.0 && b < p.t);
            if let Some(prev) = last.insert(w, b) {
                prop_assert!(b <= prev);
            }
        }
    }

    #[test]
    fn visual_bonus_bounded_and_decreasing(p in params(), cells in prop::collection::vec(0u8..12, 49), repeats in 1usize..20) {
        let view = view_from(&cells);
        let mut counts = EpisodicCounts::new();
        let mut prev = f64::INFINITY;
        for _ in 0..repeats {
            let b = counts.cb(&view, &p);
            // tanh rounds to exactly 1 in f64 once its argument passes ~19.
            prop_assert!(b >= 0.0 && b <= p.t);
            prop_assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn fresh_counts_repeat_the_sequence(p in params(), cells in prop::collection::vec(0u8..12, 49)) {
        let view = view_from(&cells);
        let mut a = EpisodicCounts::new();
        let first: Vec<f64> = (0..5).map(|_| a.cb(&view, &p)).collect();
        a.clear();
        let second: Vec<f64> = (0..5).map(|_| a.cb(&view, &p)).collect();
        prop_assert_eq!(first, second);
    }
}

#[test]
fn empty_view_bonus_vanishes() {
    let p = BonusParams::new(1.0, 1.0, 1.0).unwrap();
    let view = [[CellEncoding::EMPTY; VIEW_SIZE]; VIEW_SIZE];
    let mut counts = EpisodicCounts::new();
    let mut b = 1.0;
    for _ in 0..1000 {
        b = counts.cb(&view, &p);
    }
    assert!(b < 1.1e-3);
    assert_eq!(counts.encoding_count(&CellEncoding::EMPTY), 1000);
}
