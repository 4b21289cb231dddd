//! Episodic count-based exploration bonuses over utterances and cell encodings.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{CellEncoding, View};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BonusParams {
    pub t: f64,
    pub c: f64,
    pub m: f64,
}

impl Default for BonusParams {
    fn default() -> Self {
        Self { t: 1.0, c: 1.0, m: 2.0 }
    }
}

impl BonusParams {
    /// `t` may be zero (disables the bonus); `c` and `m` must be positive.
    pub fn new(t: f64, c: f64, m: f64) -> Result<Self> {
        if !(t >= 0.0 && c > 0.0 && m > 0.0) || !(t.is_finite() && c.is_finite() && m.is_finite()) {
            return Err(Error::InvalidAction(format!("bad bonus parameters T={t} C={c} M={m}")));
        }
        Ok(Self { t, c, m })
    }

    fn term(&self, n: u64) -> f64 {
        self.c / ((n + 1) as f64).powf(self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BonusKind {
    None,
    /// Visual: unique cell encodings in view.
    Cb,
    /// Linguistic: heard utterances.
    Cbl,
}

/// Per-episode occurrence counts. Create a fresh one for every episode.
#[derive(Clone, Debug, Default)]
pub struct EpisodicCounts {
    utterances: HashMap<String, u64>,
    encodings: HashMap<CellEncoding, u64>,
}

impl EpisodicCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.utterances.clear();
        self.encodings.clear();
    }

    pub fn utterance_count(&self, utterance: &str) -> u64 {
        self.utterances.get(utterance).copied().unwrap_or(0)
    }

    pub fn encoding_count(&self, enc: &CellEncoding) -> u64 {
        self.encodings.get(enc).copied().unwrap_or(0)
    }

    /// `T·tanh(C / (N+1)^M)` with the count taken before this observation.
    pub fn cbl(&mut self, utterance: &str, p: &BonusParams) -> f64 {
        let n = self.utterances.entry(utterance.to_string()).or_insert(0);
        let bonus = p.t * p.term(*n).tanh();
        *n += 1;
        bonus
    }

    /// `T·tanh(Σ_{e∈U} C / (N(e)+1)^M)` over the unique encodings `U` in view.
    pub fn cb(&mut self, view: &View, p: &BonusParams) -> f64 {
        let unique: BTreeSet<CellEncoding> = view.iter().flatten().copied().collect();
        let sum: f64 = unique.iter().map(|e| p.term(self.encoding_count(e))).sum();
        for e in unique {
            *self.encodings.entry(e).or_insert(0) += 1;
        }
        p.t * sum.tanh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::VIEW_SIZE;

    const ONES: BonusParams = BonusParams { t: 1.0, c: 1.0, m: 1.0 };

    #[test]
    fn linguistic_sequence() {
        let mut c = EpisodicCounts::new();
        assert!((c.cbl("blue", &ONES) - 1f64.tanh()).abs() < 1e-12);
        assert!((c.cbl("blue", &ONES) - 0.5f64.tanh()).abs() < 1e-12);
        assert!((c.cbl("red", &ONES) - 1f64.tanh()).abs() < 1e-12);
        let zero = BonusParams::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(c.cbl("x", &zero), 0.0);
    }

    #[test]
    fn visual_unique_encodings() {
        let mut view = [[CellEncoding::EMPTY; VIEW_SIZE]; VIEW_SIZE];
        let mut c = EpisodicCounts::new();
        assert!((c.cb(&view, &ONES) - 1f64.tanh()).abs() < 1e-12);
        view[0][0] = CellEncoding([1, 0, 0, 0, 0, 0, 0, 0]);
        let mut fresh = EpisodicCounts::new();
        assert!((fresh.cb(&view, &ONES) - 2f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(BonusParams::new(1.0, 0.0, 1.0).is_err());
        assert!(BonusParams::new(-1.0, 1.0, 1.0).is_err());
        assert!(BonusParams::new(1.0, 1.0, f64::NAN).is_err());
    }
}
