//! Verifiers for structural properties of bipartite MSTs.
//!
//! Every check returns a [`LemmaReport`]. Failing reports carry a witness;
//! `slack` measures how far the checked inequality is from tight (negative
//! on failure).

mod corrupt;
mod hilbert;
mod lemmas;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use corrupt::{drop_nearest, long_edge_swap, star_tree, swap_edge, Corruption};
pub use hilbert::{hilbert_chain_bound, hilbert_index, hilbert_order, HilbertChain, HILBERT_BITS};
pub use lemmas::{
    check_bottleneck, check_bounded_difference, check_bounded_difference_at, check_cut_property,
    check_empty_cone, check_mono_to_bi_bound, check_mono_to_bi_bound_for_tree, check_p_invariance,
    check_torus_cube_transfer, check_torus_cube_transfer_for_tree, mono_to_bi_constant,
    run_all, validate_tree,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    CutProperty,
    EmptyCone,
    PInvariance,
    Bottleneck,
    MonoToBi,
    TorusCubeTransfer,
    HilbertChain,
    BoundedDifference,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::CutProperty,
        LemmaId::EmptyCone,
        LemmaId::PInvariance,
        LemmaId::Bottleneck,
        LemmaId::MonoToBi,
        LemmaId::TorusCubeTransfer,
        LemmaId::HilbertChain,
        LemmaId::BoundedDifference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::CutProperty => "cut_property",
            LemmaId::EmptyCone => "empty_cone",
            LemmaId::PInvariance => "p_invariance",
            LemmaId::Bottleneck => "bottleneck",
            LemmaId::MonoToBi => "mono_to_bi",
            LemmaId::TorusCubeTransfer => "torus_cube_transfer",
            LemmaId::HilbertChain => "hilbert_chain",
            LemmaId::BoundedDifference => "bounded_difference",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LemmaId {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        LemmaId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| crate::error::Error::InvalidParameter(format!("unknown check '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The hypothesis of the property never applies to the input.
    Vacuous,
}

/// Offending configuration of a failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub description: String,
    /// Global vertex indices involved.
    pub vertices: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub instance: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub slack: f64,
}

impl LemmaReport {
    pub(crate) fn pass(lemma: LemmaId, instance: String, slack: f64) -> Self {
        LemmaReport {
            lemma,
            instance,
            status: Status::Pass,
            witness: None,
            slack,
        }
    }

    pub(crate) fn vacuous(lemma: LemmaId, instance: String) -> Self {
        LemmaReport {
            lemma,
            instance,
            status: Status::Vacuous,
            witness: None,
            slack: f64::INFINITY,
        }
    }

    pub(crate) fn fail(lemma: LemmaId, instance: String, slack: f64, witness: Witness) -> Self {
        LemmaReport {
            lemma,
            instance,
            status: Status::Fail,
            witness: Some(witness),
            slack,
        }
    }

    /// Pass or vacuous.
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// One JSON object on a single line. Infinite slack is written as null.
    pub fn to_json_line(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !self.slack.is_finite() {
            v["slack"] = serde_json::Value::Null;
        }
        serde_json::to_string(&v).expect("value serializes")
    }
}
