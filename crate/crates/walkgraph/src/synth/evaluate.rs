//! Scores a build against a city's ground truth.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use walkgraph_core::denoise::EndpointRef;
use walkgraph_core::features::SegmentKind;
use walkgraph_core::network::CoverageReport;
use walkgraph_core::pipeline::{build_network, BuildConfig, BuildInputs, BuildOutput};

use super::GroundTruth;
use crate::error::Result;

/// Largest distance between a crossing's midpoint and the street node it
/// serves, as a multiple of the sidewalk offset.
const SLOT_MATCH_FACTOR: f64 = 2.0;

/// Evaluation results. Ratios with an empty denominator are 1.0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scorecard {
    /// Share of predicted joins that are true adjacencies.
    pub precision: f64,
    /// Share of true adjacencies that were joined.
    pub recall: f64,
    pub f1: f64,
    pub true_pairs: usize,
    pub predicted_pairs: usize,
    pub matched_pairs: usize,
    /// Share of true corners whose endpoints were grouped exactly.
    pub corner_accuracy: f64,
    pub block_connectivity_rate: f64,
    /// Share of crossing slots spanned by a crossing of the right street.
    pub crossing_coverage: f64,
    pub crossing_slots: usize,
    pub crossing_slots_realized: usize,
    pub component_count: usize,
    pub coverage: CoverageReport,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

fn ordered(a: EndpointRef, b: EndpointRef) -> (EndpointRef, EndpointRef) {
    (a.min(b), a.max(b))
}

/// Endpoint pairs the build treats as joined: repair connectors between
/// input sidewalks, and input endpoints that already coincide.
fn predicted_pairs(inputs: &BuildInputs<'_>, out: &BuildOutput, merge_tol: f64) -> BTreeSet<(EndpointRef, EndpointRef)> {
    let n = inputs.sidewalks.len();
    let mut pairs: BTreeSet<_> = out
        .repairs
        .iter()
        .map(|r| r.joined)
        .filter(|(a, b)| a.feature < n && b.feature < n)
        .map(|(a, b)| ordered(a, b))
        .collect();
    let ends: Vec<(EndpointRef, _)> = (0..n)
        .flat_map(|f| (0..2u8).map(move |e| EndpointRef::new(f, e)))
        .map(|r| (r, r.locate(inputs.sidewalks)))
        .collect();
    for (i, (a, pa)) in ends.iter().enumerate() {
        for (b, pb) in &ends[i + 1..] {
            if a.feature != b.feature && pa.distance(pb) <= merge_tol {
                pairs.insert(ordered(*a, *b));
            }
        }
    }
    pairs
}

/// Runs the full build on `inputs` and scores it against `truth`.
/// `sidewalk_offset` is the distance of the generated sidewalks from their
/// streets, used to match crossings to slots.
pub fn evaluate_pipeline(inputs: &BuildInputs<'_>, truth: &GroundTruth, config: &BuildConfig, sidewalk_offset: f64) -> Result<Scorecard> {
    let out = build_network(inputs, config)?;
    let n = inputs.sidewalks.len();

    let truth_pairs: BTreeSet<_> = truth.adjacency.iter().map(|&(a, b)| ordered(a, b)).collect();
    let predicted = predicted_pairs(inputs, &out, config.network.merge_tol);
    let matched = predicted.intersection(&truth_pairs).count();
    let precision = ratio(matched, predicted.len());
    let recall = ratio(matched, truth_pairs.len());
    let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };

    let exact_corners = truth
        .corners
        .iter()
        .filter(|c| {
            let want: BTreeSet<EndpointRef> = c.members.iter().copied().collect();
            out.sectors.iter().any(|s| {
                let got: BTreeSet<EndpointRef> = s.members.iter().copied().filter(|m| m.feature < n).collect();
                got == want
            })
        })
        .count();

    let reach = SLOT_MATCH_FACTOR * sidewalk_offset;
    let realized = truth
        .crossings
        .iter()
        .filter(|slot| {
            out.graph.edges().iter().any(|e| {
                e.kind == SegmentKind::Crossing
                    && e.crossed_street.as_deref() == Some(slot.street.as_str())
                    && e.geometry.point_along(0, e.geometry.length() / 2.0).distance(&slot.node) <= reach
            })
        })
        .count();

    Ok(Scorecard {
        precision,
        recall,
        f1,
        true_pairs: truth_pairs.len(),
        predicted_pairs: predicted.len(),
        matched_pairs: matched,
        corner_accuracy: ratio(exact_corners, truth.corners.len()),
        block_connectivity_rate: out.coverage.block_connectivity_rate,
        crossing_coverage: ratio(realized, truth.crossings.len()),
        crossing_slots: truth.crossings.len(),
        crossing_slots_realized: realized,
        component_count: out.graph.component_count(),
        coverage: out.coverage,
    })
}
