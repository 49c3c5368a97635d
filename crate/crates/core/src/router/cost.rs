use serde::{Deserialize, Serialize};

use super::profile::{CostProfile, Penalty};
use crate::features::SegmentKind;
use crate::network::GraphEdge;

/// Kind of hard constraint that can remove an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintClass {
    Grade,
    CurbRamps,
    Construction,
}

impl ConstraintClass {
    pub const ALL: [ConstraintClass; 3] = [ConstraintClass::Grade, ConstraintClass::CurbRamps, ConstraintClass::Construction];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConstraintClass::Grade => "grade",
            ConstraintClass::CurbRamps => "curb_ramps",
            ConstraintClass::Construction => "construction",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

/// Set of constraint classes, as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassSet(u8);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);

    pub fn with(self, c: ConstraintClass) -> ClassSet {
        ClassSet(self.0 | c.bit())
    }

    pub fn contains(&self, c: ConstraintClass) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: ClassSet) -> bool {
        self.0 & !other.0 == 0
    }
}

/// Result of costing one directed traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeCost {
    Cost(f64),
    /// Removed by the listed hard constraints.
    Excluded(ClassSet),
}

impl EdgeCost {
    pub fn finite(&self) -> Option<f64> {
        match self {
            EdgeCost::Cost(c) => Some(*c),
            EdgeCost::Excluded(_) => None,
        }
    }
}

/// Normalised excess of an uphill grade over the ideal, zero below it.
pub fn grade_ramp(g: f64, profile: &CostProfile) -> f64 {
    (g - profile.grade_ideal).max(0.0) / (profile.grade_max - profile.grade_ideal)
}

/// Cost of traversing `edge` away from node `from`.
///
/// `w_distance * length * (1 + w_grade * ramp(g))` where `g` is the uphill
/// grade in the direction of travel, plus the curb-ramp penalty for
/// crossings missing a ramp at either end (when ramps are required) and the
/// construction penalty when an interval covers the trip date (when
/// construction is avoided). Hard penalties, and grades steeper than
/// `grade_max` in either direction when `w_grade > 0`, exclude the edge.
pub fn edge_cost(edge: &GraphEdge, from: usize, profile: &CostProfile) -> EdgeCost {
    let mut excluded = ClassSet::EMPTY;
    if profile.w_grade > 0.0 && edge.elev_delta.abs() / edge.length > profile.grade_max {
        excluded = excluded.with(ConstraintClass::Grade);
    }
    let uphill = edge.elev_delta_from(from).max(0.0) / edge.length;
    let mut cost = profile.w_distance * edge.length * (1.0 + profile.w_grade * grade_ramp(uphill, profile));

    if edge.kind == SegmentKind::Crossing && profile.require_curb_ramps {
        let (entry, exit) = edge.ramps_from(from);
        if !(entry && exit) {
            match profile.ramp_penalty {
                Penalty::Cost(p) => cost += p,
                Penalty::Hard => excluded = excluded.with(ConstraintClass::CurbRamps),
            }
        }
    }
    if profile.avoid_construction {
        if let Some(date) = profile.query_date {
            if edge.construction.iter().any(|i| i.contains(date)) {
                match profile.construction_penalty {
                    Penalty::Cost(p) => cost += p,
                    Penalty::Hard => excluded = excluded.with(ConstraintClass::Construction),
                }
            }
        }
    }
    if excluded.is_empty() {
        EdgeCost::Cost(cost)
    } else {
        EdgeCost::Excluded(excluded)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::DateInterval;
    use crate::geometry::{LocalPoint, Polyline};
    use crate::router::preset;
    use chrono::NaiveDate;
    use proptest::prelude::*;

    fn edge(length: f64, elev_delta: f64, kind: SegmentKind) -> GraphEdge {
        GraphEdge {
            id: 0,
            a: 0,
            b: 1,
            geometry: Polyline::segment(LocalPoint::new(0.0, 0.0), LocalPoint::new(length, 0.0)).unwrap(),
            kind,
            length,
            elev_delta,
            grade: elev_delta.abs() / length,
            curb_ramp_a: false,
            curb_ramp_b: false,
            crossed_street: None,
            construction: alloc::vec![],
        }
    }

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    #[test]
    fn flat_sidewalk_costs_its_length() {
        assert_eq!(edge_cost(&edge(100.0, 0.0, SegmentKind::Sidewalk), 0, &CostProfile::default()), EdgeCost::Cost(100.0));
    }

    #[test]
    fn missing_ramp_adds_the_penalty() {
        let p = CostProfile {
            require_curb_ramps: true,
            ramp_penalty: Penalty::Cost(500.0),
            ..CostProfile::default()
        };
        let mut e = edge(12.0, 0.0, SegmentKind::Crossing);
        e.curb_ramp_a = true;
        assert_eq!(edge_cost(&e, 0, &p), EdgeCost::Cost(512.0));
        e.curb_ramp_b = true;
        assert_eq!(edge_cost(&e, 0, &p), EdgeCost::Cost(12.0));
    }

    #[test]
    fn hard_ramp_penalty_excludes() {
        let p = preset("powered_wheelchair").unwrap();
        let e = edge(12.0, 0.0, SegmentKind::Crossing);
        assert_eq!(edge_cost(&e, 0, &p), EdgeCost::Excluded(ClassSet::EMPTY.with(ConstraintClass::CurbRamps)));
    }

    #[test]
    fn steep_edges_are_excluded_both_ways() {
        let p = CostProfile {
            w_grade: 1.0,
            ..CostProfile::default()
        };
        let e = edge(100.0, 10.0, SegmentKind::Sidewalk);
        let grade_only = EdgeCost::Excluded(ClassSet::EMPTY.with(ConstraintClass::Grade));
        assert_eq!(edge_cost(&e, 0, &p), grade_only);
        assert_eq!(edge_cost(&e, 1, &p), grade_only);
        // Without a grade weight steepness is not a constraint.
        assert!(edge_cost(&e, 0, &CostProfile::default()).finite().is_some());
    }

    #[test]
    fn only_uphill_is_penalised() {
        let p = CostProfile {
            w_grade: 2.0,
            ..CostProfile::default()
        };
        let e = edge(100.0, 5.0, SegmentKind::Sidewalk);
        let up = edge_cost(&e, 0, &p).finite().unwrap();
        let down = edge_cost(&e, 1, &p).finite().unwrap();
        assert_eq!(down, 100.0);
        let expected = 100.0 * (1.0 + 2.0 * (0.05 - 0.02) / (0.0833 - 0.02));
        assert!((up - expected).abs() < 1e-9);
    }

    #[test]
    fn construction_applies_on_the_trip_date_only() {
        let mut e = edge(50.0, 0.0, SegmentKind::Sidewalk);
        e.construction.push(DateInterval {
            start: date(2015, 6, 1),
            end: date(2015, 9, 1),
        });
        let p = CostProfile::default().with_date(date(2015, 7, 1));
        assert_eq!(edge_cost(&e, 0, &p), EdgeCost::Cost(250.0));
        let p = CostProfile::default().with_date(date(2015, 10, 1));
        assert_eq!(edge_cost(&e, 0, &p), EdgeCost::Cost(50.0));
        let hard = CostProfile {
            construction_penalty: Penalty::Hard,
            ..CostProfile::default().with_date(date(2015, 7, 1))
        };
        assert!(matches!(edge_cost(&e, 0, &hard), EdgeCost::Excluded(s) if s.contains(ConstraintClass::Construction)));
    }

    fn arb_edge() -> impl Strategy<Value = (GraphEdge, usize)> {
        (1.0f64..200.0, -20.0f64..20.0, any::<bool>(), any::<bool>(), any::<bool>(), 0usize..2).prop_map(|(len, dz, crossing, ra, rb, from)| {
            let mut e = edge(len, dz, if crossing { SegmentKind::Crossing } else { SegmentKind::Sidewalk });
            e.curb_ramp_a = ra;
            e.curb_ramp_b = rb;
            e.construction.push(DateInterval {
                start: date(2020, 1, 1),
                end: date(2020, 12, 31),
            });
            (e, from)
        })
    }

    fn arb_profile() -> impl Strategy<Value = CostProfile> {
        (0.0f64..5.0, 0.0f64..5.0, any::<bool>(), 0.0f64..1000.0, any::<bool>(), 0.0f64..1000.0).prop_map(|(wd, wg, rr, rp, ac, cp)| CostProfile {
            name: "p".into(),
            w_distance: wd,
            w_grade: wg,
            require_curb_ramps: rr,
            ramp_penalty: Penalty::Cost(rp),
            avoid_construction: ac,
            construction_penalty: Penalty::Cost(cp),
            query_date: Some(date(2020, 6, 1)),
            ..CostProfile::default()
        })
    }

    proptest! {
        #[test]
        fn costs_are_nonnegative((e, from) in arb_edge(), p in arb_profile()) {
            if let EdgeCost::Cost(c) = edge_cost(&e, from, &p) {
                prop_assert!(c >= 0.0);
            }
        }

        #[test]
        fn cost_is_monotone_in_each_weight((e, from) in arb_edge(), p in arb_profile(), bump in 0.0f64..10.0) {
            let Some(base) = edge_cost(&e, from, &p).finite() else { return Ok(()) };
            let variants = [
                CostProfile { w_distance: p.w_distance + bump, ..p.clone() },
                CostProfile { w_grade: p.w_grade + bump, ..p.clone() },
                CostProfile { ramp_penalty: Penalty::Cost(match p.ramp_penalty { Penalty::Cost(c) => c + bump, Penalty::Hard => 0.0 }), ..p.clone() },
                CostProfile { construction_penalty: Penalty::Cost(match p.construction_penalty { Penalty::Cost(c) => c + bump, Penalty::Hard => 0.0 }), ..p.clone() },
            ];
            for v in variants {
                if let Some(c) = edge_cost(&e, from, &v).finite() {
                    prop_assert!(c >= base);
                }
            }
        }

        #[test]
        fn ramp_fields_are_irrelevant_when_not_required((e, from) in arb_edge(), p in arb_profile(), rp in 0.0f64..1000.0) {
            let p = CostProfile { require_curb_ramps: false, ..p };
            let mut flipped = e.clone();
            flipped.curb_ramp_a = !e.curb_ramp_a;
            flipped.curb_ramp_b = !e.curb_ramp_b;
            let q = CostProfile { ramp_penalty: Penalty::Cost(rp), ..p.clone() };
            prop_assert_eq!(edge_cost(&e, from, &p), edge_cost(&flipped, from, &q));
        }
    }
}
