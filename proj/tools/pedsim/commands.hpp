// SPDX-License-Identifier: Apache-2.0
//
// Subcommand implementations behind the pedsim front-end, kept free of CLI11
// so they stay testable. Each returns a process exit code: 0 success, 1 bad
// input or configuration, 2 filesystem/environment failure.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace pedsim::cli {

struct SimulateArgs {
  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the scenario's seed
  bool write_masks = false;
  bool write_trace = false;
};
int cmd_simulate(const SimulateArgs& args);

struct DetectArgs {
  std::string gt_path;
  std::string profile = "clear";  // shipped name or degradation .cfg path
  std::optional<std::uint64_t> seed;  // default: the annotation's seed
  std::string out_path;               // default: <gt stem>_det.txt
};
int cmd_detect(const DetectArgs& args);

struct TrackArgs {
  std::string detections_path;
  std::string tracker = "kalman";  // iou | kalman
  std::optional<double> iou_min;
  std::optional<int> max_age;
  std::optional<int> min_hits;
  std::optional<double> process_noise;       // kalman only
  std::optional<double> measurement_noise;   // kalman only
  bool emit_predictions = false;             // kalman only
  std::string out_path;  // default: <detections stem>_tracks.txt
};
int cmd_track(const TrackArgs& args);

struct EvalArgs {
  std::string gt_path;
  std::string tracks_path;
  double iou_threshold = 0.5;
  double visibility_floor = 0.0;
  std::string report_path;  // empty: table only
};
int cmd_eval(const EvalArgs& args);

struct PipelineArgs {
  std::string scenario_path;
  std::string out_dir;
  std::string profile = "clear";
  std::string tracker = "kalman";
  std::optional<std::uint64_t> seed;
  double iou_threshold = 0.5;
  bool write_masks = false;
  bool write_trace = false;
};
int cmd_pipeline(const PipelineArgs& args);

}  // namespace pedsim::cli
