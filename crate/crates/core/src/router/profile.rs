use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use chrono::NaiveDate;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An additive penalty, or `"hard"` to exclude the edge outright.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    Cost(f64),
    Hard,
}

impl Penalty {
    pub fn is_hard(&self) -> bool {
        matches!(self, Penalty::Hard)
    }

    fn scaled(self, k: f64) -> Penalty {
        match self {
            Penalty::Cost(c) => Penalty::Cost(c * k),
            Penalty::Hard => Penalty::Hard,
        }
    }
}

impl Serialize for Penalty {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Penalty::Cost(c) => s.serialize_f64(*c),
            Penalty::Hard => s.serialize_str("hard"),
        }
    }
}

impl<'de> Deserialize<'de> for Penalty {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        struct PenaltyVisitor;

        impl Visitor<'_> for PenaltyVisitor {
            type Value = Penalty;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative number or \"hard\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> core::result::Result<Penalty, E> {
                Ok(Penalty::Cost(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> core::result::Result<Penalty, E> {
                Ok(Penalty::Cost(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> core::result::Result<Penalty, E> {
                Ok(Penalty::Cost(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> core::result::Result<Penalty, E> {
                if v == "hard" {
                    Ok(Penalty::Hard)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        d.deserialize_any(PenaltyVisitor)
    }
}

/// Weights defining the traversal cost of an edge.
///
/// `w_distance` and the two penalties are in cost units per meter and cost
/// units respectively; `w_grade` multiplies the distance term and so is
/// dimensionless. Every field except `query_date` must be present when
/// parsing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostProfile {
    pub name: String,
    pub w_distance: f64,
    pub grade_ideal: f64,
    pub grade_max: f64,
    pub w_grade: f64,
    pub require_curb_ramps: bool,
    pub ramp_penalty: Penalty,
    pub avoid_construction: bool,
    pub construction_penalty: Penalty,
    /// Trip date for construction filtering; construction is ignored without it.
    #[serde(default)]
    pub query_date: Option<NaiveDate>,
}

impl Default for CostProfile {
    fn default() -> Self {
        CostProfile {
            name: String::from("default"),
            w_distance: 1.0,
            grade_ideal: 0.02,
            grade_max: 0.0833,
            w_grade: 0.0,
            require_curb_ramps: false,
            ramp_penalty: Penalty::Cost(0.0),
            avoid_construction: true,
            construction_penalty: Penalty::Cost(200.0),
            query_date: None,
        }
    }
}

impl CostProfile {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProfile(msg));
        if self.name.is_empty() {
            return bad("name must not be empty".into());
        }
        for (field, v) in [
            ("w_distance", self.w_distance),
            ("grade_ideal", self.grade_ideal),
            ("grade_max", self.grade_max),
            ("w_grade", self.w_grade),
        ] {
            if !v.is_finite() || v < 0.0 {
                return bad(alloc::format!("{field} must be finite and >= 0, got {v}"));
            }
        }
        for (field, p) in [("ramp_penalty", self.ramp_penalty), ("construction_penalty", self.construction_penalty)] {
            if let Penalty::Cost(c) = p {
                if !c.is_finite() || c < 0.0 {
                    return bad(alloc::format!("{field} must be finite and >= 0 or \"hard\", got {c}"));
                }
            }
        }
        if self.grade_ideal >= self.grade_max {
            return bad(alloc::format!("grade_ideal ({}) must be below grade_max ({})", self.grade_ideal, self.grade_max));
        }
        Ok(())
    }

    /// The profile with the distance weight and both penalties multiplied by
    /// `k`, which multiplies every finite edge cost by `k`.
    pub fn scaled(&self, k: f64) -> CostProfile {
        CostProfile {
            w_distance: self.w_distance * k,
            ramp_penalty: self.ramp_penalty.scaled(k),
            construction_penalty: self.construction_penalty.scaled(k),
            ..self.clone()
        }
    }

    pub fn with_date(mut self, date: NaiveDate) -> CostProfile {
        self.query_date = Some(date);
        self
    }
}

/// Names of the built-in presets.
pub const PRESET_NAMES: [&str; 3] = ["default", "powered_wheelchair", "manual_assist"];

/// Built-in profiles. The weights are starting points rather than values
/// fitted to user preferences.
pub fn presets() -> Vec<CostProfile> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("preset names are valid")).collect()
}

pub fn preset(name: &str) -> Option<CostProfile> {
    let base = CostProfile::default();
    Some(match name {
        "default" => base,
        "powered_wheelchair" => CostProfile {
            name: name.into(),
            grade_ideal: 0.02,
            grade_max: 0.05,
            w_grade: 2.0,
            require_curb_ramps: true,
            ramp_penalty: Penalty::Hard,
            construction_penalty: Penalty::Hard,
            ..base
        },
        "manual_assist" => CostProfile {
            name: name.into(),
            w_grade: 1.0,
            require_curb_ramps: true,
            ramp_penalty: Penalty::Cost(500.0),
            construction_penalty: Penalty::Cost(500.0),
            ..base
        },
        _ => return None,
    })
}
