// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "pedsim/annotate.hpp"
#include "pedsim/bbox.hpp"
#include "pedsim/track.hpp"

// Multi-object tracking evaluation: CLEAR MOT (MOTA, MOTP, FP, FN, identity
// switches) and trajectory-level identity scores (IDF1, IDP, IDR).
namespace pedsim::eval {

struct EvalConfig {
  // Minimum IoU for a ground-truth box and a hypothesis box to match.
  double iou_threshold = 0.5;
  // Ground-truth boxes with visibility below this are dropped before scoring.
  double visibility_floor = 0.0;
};

// One ground-truth box. Frames are 0-based; ids identify trajectories.
struct GtEntry {
  int frame = 0;
  int id = 0;
  BBox2D bbox;
  double visibility = 1.0;
};
using GtSet = std::vector<GtEntry>;

GtSet gt_from_annotations(const annotate::AnnotationSequence& sequence);

// Re-labels ground truth as hypothesis tracks, one track per gt id. Feeding
// the result back into the scorer models a perfect tracker.
track::TrackSet tracks_from_gt(const GtSet& gt);

struct ClearMotResult {
  double mota = 0.0;
  double motp = 0.0;  // mean IoU over matched pairs, 0 when nothing matched
  long long fp = 0;
  long long fn = 0;
  long long idsw = 0;
  long long matches = 0;
  long long gt = 0;      // ground-truth boxes after the visibility filter
  long long frames = 0;  // distinct frames holding gt or hypothesis boxes
};

// Frame-by-frame scoring. Matches from the previous frames persist while
// still above the IoU threshold, even when a fresh pairing would score
// higher; remaining boxes are paired by minimum-cost assignment on 1 - IoU.
// An identity switch is counted when a ground-truth trajectory matches a
// different hypothesis id than its last match. Throws std::invalid_argument
// on an out-of-range config or when no ground-truth box survives the filter.
ClearMotResult clear_mot(const GtSet& gt, const track::TrackSet& hyp,
                         const EvalConfig& config = {});

struct IdentityResult {
  double idf1 = 0.0;
  double idp = 0.0;
  double idr = 0.0;
  long long idtp = 0;
  long long idfp = 0;
  long long idfn = 0;
  // Minimum cost of the padded trajectory assignment; equals idfp + idfn.
  double assignment_cost = 0.0;
};

// Trajectory-level identity scoring. Ground-truth and hypothesis
// trajectories are paired once over the whole sequence by a padded square
// assignment whose cost counts the frames left uncovered by each pairing;
// IDF1 = 2 IDTP / (2 IDTP + IDFP + IDFN). Error conditions as clear_mot.
IdentityResult identity_metrics(const GtSet& gt, const track::TrackSet& hyp,
                                const EvalConfig& config = {});

struct Report {
  double mota = 0.0;
  double motp = 0.0;
  double idf1 = 0.0;
  double idp = 0.0;
  double idr = 0.0;
  long long fp = 0;
  long long fn = 0;
  long long idsw = 0;
  long long gt = 0;
  long long frames = 0;
};

Report eval_report(const GtSet& gt, const track::TrackSet& hyp,
                   const EvalConfig& config = {});

// Compact single-line JSON with keys mota, motp, idf1, idp, idr, fp, fn,
// idsw, gt, frames in that order.
std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);

// Two-line fixed-width table for console output.
std::string report_table(const Report& report);

}  // namespace pedsim::eval
