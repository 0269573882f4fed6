use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Color;
use crate::spin_boson::Tau;

pub const BRAID_SCHEMA: &str = "tcc.braid/1";

/// Boson occupations on effective sites plus the effective-spin
/// background (sites not listed are ⇑).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonConfig {
    pub occupations: BTreeMap<usize, Color>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub background: BTreeMap<usize, Tau>,
}

impl AnyonConfig {
    pub fn new<I: IntoIterator<Item = (usize, Color)>>(occupations: I) -> Self {
        AnyonConfig {
            occupations: occupations.into_iter().collect(),
            background: BTreeMap::new(),
        }
    }

    pub fn color_at(&self, site: usize) -> Option<Color> {
        self.occupations.get(&site).copied()
    }

    pub fn tau_at(&self, site: usize) -> Tau {
        self.background.get(&site).copied().unwrap_or(Tau::Up)
    }
}

/// One elementary move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    /// Boson hops to an adjacent empty site.
    Transport { from: usize, to: usize },
    /// Counter-clockwise half-exchange of the bosons on two adjacent sites.
    Exchange { a: usize, b: usize },
    /// The boson at `site` walks the closed site path `path`, which starts
    /// at `site` and either returns to it or ends next to it.
    Loop { site: usize, path: Vec<usize> },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidSchedule {
    pub moves: Vec<Move>,
}

impl BraidSchedule {
    pub fn new(moves: Vec<Move>) -> Self {
        BraidSchedule { moves }
    }
}

/// A schedule file: the initial configuration and the moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDocument {
    #[serde(default = "schema_default")]
    pub schema: String,
    pub occupations: BTreeMap<usize, Color>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub background: BTreeMap<usize, Tau>,
    pub moves: Vec<Move>,
}

fn schema_default() -> String {
    BRAID_SCHEMA.to_string()
}

impl ScheduleDocument {
    pub fn new(config: AnyonConfig, schedule: BraidSchedule) -> Self {
        ScheduleDocument {
            schema: BRAID_SCHEMA.to_string(),
            occupations: config.occupations,
            background: config.background,
            moves: schedule.moves,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ScheduleDocument = serde_json::from_str(s)?;
        if doc.schema != BRAID_SCHEMA {
            return Err(Error::Construction(format!(
                "unsupported schema {:?}",
                doc.schema
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn config(&self) -> AnyonConfig {
        AnyonConfig {
            occupations: self.occupations.clone(),
            background: self.background.clone(),
        }
    }

    pub fn schedule(&self) -> BraidSchedule {
        BraidSchedule::new(self.moves.clone())
    }
}
