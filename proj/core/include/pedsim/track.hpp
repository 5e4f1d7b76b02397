// SPDX-License-Identifier: Apache-2.0
//
// Two detection-to-track baselines: greedy frame-to-frame IoU linking, and a
// SORT-style constant-velocity Kalman filter with optimal assignment.
//
// Shared lifecycle: a new track must be matched in min_hits consecutive
// frames from its birth before any box is emitted (the confirming frame is
// the first one emitted); a confirmed track survives up to max_age frames
// without a match, then retires. Emitted boxes are always the matched
// detection boxes, so trackers relabel detections but never invent geometry;
// the Kalman tracker can optionally emit its predictions on miss frames.
#pragma once

#include <vector>

#include "pedsim/bbox.hpp"
#include "pedsim/detect.hpp"

namespace pedsim::track {

struct TrackEntry {
  int frame = 0;
  BBox2D bbox;
  friend bool operator==(const TrackEntry&, const TrackEntry&) = default;
};

struct Track {
  int id = 0;  // 1-based, assigned in order of first emitted entry
  std::vector<TrackEntry> entries;  // strictly increasing frames, gaps allowed
  friend bool operator==(const Track&, const Track&) = default;
};

using TrackSet = std::vector<Track>;

struct IouTrackerParams {
  double iou_min = 0.3;
  int max_age = 10;
  int min_hits = 2;
};

struct KalmanTrackerParams {
  double iou_min = 0.3;
  int max_age = 30;
  int min_hits = 3;
  double process_noise = 1.0;      // scale on the process covariance
  double measurement_noise = 1.0;  // scale on the measurement covariance
  bool emit_predictions = false;   // emit predicted boxes on miss frames
};

// Greedy association: all (track, detection) pairs ranked by IoU, highest
// first, accepted while IoU >= iou_min. Expects detections sorted by frame;
// throws std::invalid_argument otherwise or on bad parameters.
TrackSet track_iou(const detect::DetectionSet& detections,
                   const IouTrackerParams& params = {});

// Per-track constant-velocity filter over (center_x, center_y, area, aspect)
// with velocities on the first three; predictions associate to detections by
// minimum-cost assignment on 1 - IoU, gated at iou_min.
TrackSet track_kalman(const detect::DetectionSet& detections,
                      const KalmanTrackerParams& params = {});

}  // namespace pedsim::track
