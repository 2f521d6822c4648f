use serde::{Deserialize, Serialize};

use crate::numerics::Certainty;

/// Which effects a system admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EffectMode {
    /// Every functional between zero and the unit on the state cone.
    NoRestriction,
    /// Only conic combinations of the listed effect generators, bounded by the unit.
    Generated,
}

/// Outcome of a decision procedure with the evidence behind it.
#[derive(Clone, Debug)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: W,
    pub certainty: Certainty,
    pub mode: Option<EffectMode>,
}

impl<W> Verdict<W> {
    pub fn new(holds: bool, witness: W, certainty: Certainty) -> Self {
        Verdict { holds, witness, certainty, mode: None }
    }

    pub fn in_mode(mut self, mode: EffectMode) -> Self {
        self.mode = Some(mode);
        self
    }
}
