// SPDX-License-Identifier: Apache-2.0
//
// Synthetic detector: turns ground-truth annotations into degraded detection
// sets (misses, box jitter, false positives) without any pixels involved.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pedsim/annotate.hpp"
#include "pedsim/bbox.hpp"
#include "pedsim/scenario.hpp"

namespace pedsim::detect {

struct Detection {
  int frame = 0;  // 0-based, matching annotation frames
  BBox2D bbox;
  double score = 1.0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

// Sorted by frame; order within a frame is generation order (annotated
// pedestrians by id, then false positives).
using DetectionSet = std::vector<Detection>;

struct DetectorModel {
  scenario::DegradationSpec degradation;
  std::uint64_t seed = 0;
};

// p = base * night * visibility^exponent * exp(-fog * distance), clamped to
// [0, 1].
double detection_probability(const scenario::DegradationSpec& spec,
                             double visibility, double distance_m);

// Deterministic for a given (annotations, model): frame k draws from its own
// stream, so frames can be synthesized in any order or in parallel. True
// detections carry p as their score; false positives draw a uniform score,
// a log-uniform height in [16, 256] px at aspect 0.4, and a uniform
// placement fully inside the image.
DetectionSet synthesize_detections(const annotate::AnnotationSequence& gt,
                                   const DetectorModel& model);

// Named degradation profiles shipped with the CLI: clear, fog, fog_dense,
// night.
const std::vector<std::pair<std::string, scenario::DegradationSpec>>&
degradation_profiles();
std::optional<scenario::DegradationSpec> find_profile(std::string_view name);

}  // namespace pedsim::detect
