// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "artifact_io.hpp"
#include "pedsim/annotate.hpp"
#include "pedsim/detect.hpp"
#include "pedsim/metrics.hpp"
#include "pedsim/mot_io.hpp"
#include "pedsim/scenario_io.hpp"
#include "pedsim/sim.hpp"
#include "pedsim/track.hpp"
#include "pedsim/version.hpp"

namespace pedsim::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

template <typename Fn>
int run_guarded(Fn&& body) {
  try {
    return body();
  } catch (const IoError& err) {
    std::cerr << "pedsim: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "pedsim: " << err.what() << '\n';
    return 1;
  }
}

std::string join_violations(const std::vector<scenario::Violation>& problems) {
  std::string text;
  for (const auto& problem : problems) {
    text += "\n  ";
    text += problem.str();
  }
  return text;
}

scenario::Scenario load_scenario(const std::string& path,
                                 const std::optional<std::uint64_t>& seed) {
  const std::string text = read_file(path);
  scenario::ParseResult parsed = scenario::parse_scenario(text);
  if (!parsed.ok())
    throw std::runtime_error(path + ": " +
                             std::to_string(parsed.errors.size()) +
                             " problem(s)" + join_violations(parsed.errors));
  scenario::Scenario result = std::move(*parsed.scenario);
  if (seed) result.seed = *seed;
  return result;
}

struct ProfileChoice {
  std::string name;
  scenario::DegradationSpec spec;
  std::optional<std::string> file;  // set when loaded from a .cfg path
};

ProfileChoice resolve_profile(const std::string& profile) {
  if (const auto spec = detect::find_profile(profile))
    return {profile, *spec, std::nullopt};
  if (fs::exists(profile)) {
    const std::string text = read_file(profile);
    const auto parsed = scenario::parse_degradation_profile(text);
    if (!parsed.ok())
      throw std::runtime_error(profile + ": " +
                               std::to_string(parsed.errors.size()) +
                               " problem(s)" +
                               join_violations(parsed.errors));
    return {profile, *parsed.spec, profile};
  }
  std::string names;
  for (const auto& [name, spec] : detect::degradation_profiles()) {
    if (!names.empty()) names += ", ";
    names += name;
  }
  throw std::runtime_error("unknown profile '" + profile + "'; available: " +
                           names + ", or a degradation .cfg path");
}

track::TrackSet run_tracker(const std::string& tracker,
                            const detect::DetectionSet& detections,
                            const TrackArgs& overrides) {
  if (tracker == "iou") {
    if (overrides.process_noise || overrides.measurement_noise ||
        overrides.emit_predictions)
      throw std::runtime_error(
          "--process-noise, --measurement-noise and --emit-predictions apply "
          "to the kalman tracker only");
    track::IouTrackerParams params;
    if (overrides.iou_min) params.iou_min = *overrides.iou_min;
    if (overrides.max_age) params.max_age = *overrides.max_age;
    if (overrides.min_hits) params.min_hits = *overrides.min_hits;
    return track::track_iou(detections, params);
  }
  if (tracker == "kalman") {
    track::KalmanTrackerParams params;
    if (overrides.iou_min) params.iou_min = *overrides.iou_min;
    if (overrides.max_age) params.max_age = *overrides.max_age;
    if (overrides.min_hits) params.min_hits = *overrides.min_hits;
    if (overrides.process_noise) params.process_noise = *overrides.process_noise;
    if (overrides.measurement_noise)
      params.measurement_noise = *overrides.measurement_noise;
    params.emit_predictions = overrides.emit_predictions;
    return track::track_kalman(detections, params);
  }
  throw std::runtime_error("unknown tracker '" + tracker +
                           "' (available: iou, kalman)");
}

fs::path sibling_with_suffix(const std::string& input,
                             std::string_view strip,
                             std::string_view suffix) {
  const fs::path given(input);
  std::string stem = given.stem().string();
  if (stem.size() > strip.size() &&
      stem.compare(stem.size() - strip.size(), strip.size(), strip) == 0)
    stem.erase(stem.size() - strip.size());
  return given.parent_path() / (stem + std::string(suffix));
}

fs::path artifact_path(const fs::path& out_dir, const std::string& scenario,
                       const std::string& stem_suffix) {
  return out_dir / (scenario + stem_suffix);
}

void report_written(const fs::path& path, const std::string& detail) {
  std::cout << "wrote " << path.string();
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << '\n';
}

int write_camera_masks(const scenario::Scenario& scenario,
                       const sim::SimTrace& trace,
                       const scenario::CameraSpec& camera,
                       const fs::path& out_dir) {
  const int mask_w = std::max(1, camera.intrinsics.width_px / 4);
  const int mask_h = std::max(1, camera.intrinsics.height_px / 4);
  int written = 0;
  for (const auto& tick : trace.ticks) {
    const annotate::InstanceMask mask = annotate::render_instance_mask(
        scenario, tick, camera.id, mask_w, mask_h);
    char name[64];
    std::snprintf(name, sizeof(name), "_%s_%06d.pgm", camera.id.c_str(),
                  tick.frame);
    write_file_atomic(artifact_path(out_dir, scenario.name, name),
                      annotate::mask_to_pgm(mask));
    ++written;
  }
  return written;
}

json degradation_json(const scenario::DegradationSpec& spec) {
  json node;
  node["fog_extinction"] = spec.fog_extinction;
  node["base_detect_prob"] = spec.base_detect_prob;
  node["night_factor"] = spec.night_factor;
  node["bbox_noise_sigma"] = spec.bbox_noise_sigma;
  node["false_positive_rate"] = spec.false_positive_rate;
  node["visibility_exponent"] = spec.visibility_exponent;
  return node;
}

}  // namespace

int cmd_simulate(const SimulateArgs& args) {
  return run_guarded([&] {
    const scenario::Scenario scenario =
        load_scenario(args.scenario_path, args.seed);
    const sim::SimTrace trace = sim::run_simulation(scenario);
    const fs::path out_dir(args.out_dir);

    for (const auto& camera : scenario.cameras) {
      const annotate::AnnotationSequence sequence =
          annotate::annotate_trace(trace, scenario, camera.id);
      const fs::path path =
          artifact_path(out_dir, scenario.name, "_" + camera.id + ".json");
      write_file_atomic(path, annotate::annotation_to_json(sequence));
      report_written(path,
                     std::to_string(sequence.frames.size()) + " frames");
      if (args.write_masks) {
        const int count =
            write_camera_masks(scenario, trace, camera, out_dir);
        std::cout << "wrote " << count << " masks for " << camera.id << '\n';
      }
    }
    if (args.write_trace) {
      const fs::path path =
          artifact_path(out_dir, scenario.name, "_trace.json");
      write_file_atomic(path, sim::trace_to_json(trace));
      report_written(path, "");
    }
    return 0;
  });
}

int cmd_detect(const DetectArgs& args) {
  return run_guarded([&] {
    const std::string text = read_file(args.gt_path);
    const annotate::AnnotationSequence sequence =
        annotate::annotation_from_json(text);
    const ProfileChoice profile = resolve_profile(args.profile);
    const detect::DetectorModel model{profile.spec,
                                      args.seed.value_or(sequence.seed)};
    const detect::DetectionSet detections =
        detect::synthesize_detections(sequence, model);

    const fs::path out = args.out_path.empty()
                             ? sibling_with_suffix(args.gt_path, "", "_det.txt")
                             : fs::path(args.out_path);
    write_file_atomic(out, mot::detections_to_mot(detections));
    report_written(out, std::to_string(detections.size()) + " detections, " +
                            profile.name + " profile");
    return 0;
  });
}

int cmd_track(const TrackArgs& args) {
  return run_guarded([&] {
    const std::string text = read_file(args.detections_path);
    const detect::DetectionSet detections = mot::detections_from_mot(text);
    const track::TrackSet tracks = run_tracker(args.tracker, detections, args);

    const fs::path out =
        args.out_path.empty()
            ? sibling_with_suffix(args.detections_path, "_det", "_tracks.txt")
            : fs::path(args.out_path);
    write_file_atomic(out, mot::tracks_to_mot(tracks));
    report_written(out, std::to_string(tracks.size()) + " tracks, " +
                            args.tracker + " tracker");
    return 0;
  });
}

namespace {

struct FrameSpan {
  int first;
  int last;
};

std::optional<FrameSpan> track_span(const track::TrackSet& tracks) {
  std::optional<FrameSpan> span;
  for (const auto& track : tracks) {
    if (track.entries.empty()) continue;
    const int first = track.entries.front().frame;
    const int last = track.entries.back().frame;
    if (!span) {
      span = FrameSpan{first, last};
    } else {
      span->first = std::min(span->first, first);
      span->last = std::max(span->last, last);
    }
  }
  return span;
}

}  // namespace

int cmd_eval(const EvalArgs& args) {
  return run_guarded([&] {
    const annotate::AnnotationSequence sequence =
        annotate::annotation_from_json(read_file(args.gt_path));
    eval::GtSet gt = eval::gt_from_annotations(sequence);
    track::TrackSet tracks = mot::tracks_from_mot(read_file(args.tracks_path));

    if (!sequence.frames.empty()) {
      const FrameSpan gt_span{sequence.frames.front().frame,
                              sequence.frames.back().frame};
      const auto hyp_span = track_span(tracks);
      if (hyp_span && (hyp_span->first != gt_span.first ||
                       hyp_span->last != gt_span.last)) {
        const int lo = std::max(gt_span.first, hyp_span->first);
        const int hi = std::min(gt_span.last, hyp_span->last);
        std::cerr << "pedsim: warning: frame ranges differ (ground truth "
                  << gt_span.first << ".." << gt_span.last << ", tracks "
                  << hyp_span->first << ".." << hyp_span->last
                  << "); evaluating frames " << lo << ".." << hi << '\n';
        std::erase_if(gt, [&](const eval::GtEntry& entry) {
          return entry.frame < lo || entry.frame > hi;
        });
        for (auto& track : tracks)
          std::erase_if(track.entries, [&](const track::TrackEntry& entry) {
            return entry.frame < lo || entry.frame > hi;
          });
        std::erase_if(tracks, [](const track::Track& track) {
          return track.entries.empty();
        });
      }
    }

    eval::EvalConfig config;
    config.iou_threshold = args.iou_threshold;
    config.visibility_floor = args.visibility_floor;
    const eval::Report report = eval::eval_report(gt, tracks, config);
    std::cout << eval::report_table(report);
    if (!args.report_path.empty()) {
      write_file_atomic(args.report_path, eval::report_to_json(report));
      report_written(args.report_path, "");
    }
    return 0;
  });
}

int cmd_pipeline(const PipelineArgs& args) {
  return run_guarded([&] {
    const scenario::Scenario scenario =
        load_scenario(args.scenario_path, args.seed);
    const ProfileChoice profile = resolve_profile(args.profile);
    if (args.tracker != "iou" && args.tracker != "kalman")
      throw std::runtime_error("unknown tracker '" + args.tracker +
                               "' (available: iou, kalman)");
    const fs::path out_dir(args.out_dir);

    const sim::SimTrace trace = sim::run_simulation(scenario);
    std::vector<std::string> outputs;
    int mask_files = 0;

    for (const auto& camera : scenario.cameras) {
      const annotate::AnnotationSequence sequence =
          annotate::annotate_trace(trace, scenario, camera.id);
      const fs::path gt_path =
          artifact_path(out_dir, scenario.name, "_" + camera.id + ".json");
      write_file_atomic(gt_path, annotate::annotation_to_json(sequence));
      outputs.push_back(gt_path.filename().string());
      if (args.write_masks)
        mask_files += write_camera_masks(scenario, trace, camera, out_dir);

      const detect::DetectorModel model{profile.spec, scenario.seed};
      const detect::DetectionSet detections =
          detect::synthesize_detections(sequence, model);
      const fs::path det_path = artifact_path(
          out_dir, scenario.name, "_" + camera.id + "_det.txt");
      write_file_atomic(det_path, mot::detections_to_mot(detections));
      outputs.push_back(det_path.filename().string());

      const track::TrackSet tracks =
          run_tracker(args.tracker, detections, TrackArgs{});
      const fs::path tracks_path = artifact_path(
          out_dir, scenario.name, "_" + camera.id + "_tracks.txt");
      write_file_atomic(tracks_path, mot::tracks_to_mot(tracks));
      outputs.push_back(tracks_path.filename().string());

      eval::EvalConfig config;
      config.iou_threshold = args.iou_threshold;
      const eval::Report report =
          eval::eval_report(eval::gt_from_annotations(sequence), tracks,
                            config);
      const fs::path report_path = artifact_path(
          out_dir, scenario.name, "_" + camera.id + "_report.json");
      write_file_atomic(report_path, eval::report_to_json(report));
      outputs.push_back(report_path.filename().string());

      std::cout << "[" << camera.id << "]\n" << eval::report_table(report);
    }

    if (args.write_trace) {
      const fs::path path =
          artifact_path(out_dir, scenario.name, "_trace.json");
      write_file_atomic(path, sim::trace_to_json(trace));
      outputs.push_back(path.filename().string());
    }

    json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["tool_version"] = kVersion;
    manifest["command"] = "pipeline";
    json scenario_node;
    scenario_node["path"] = args.scenario_path;
    scenario_node["fingerprint"] = file_fingerprint(args.scenario_path);
    scenario_node["name"] = scenario.name;
    scenario_node["seed"] = scenario.seed;
    scenario_node["frames"] = scenario.duration_frames;
    scenario_node["fps"] = scenario.fps;
    manifest["scenario"] = scenario_node;
    json profile_node;
    profile_node["name"] = profile.name;
    if (profile.file) profile_node["fingerprint"] = file_fingerprint(*profile.file);
    profile_node["degradation"] = degradation_json(profile.spec);
    manifest["profile"] = profile_node;
    json tracker_node;
    tracker_node["name"] = args.tracker;
    if (args.tracker == "iou") {
      const track::IouTrackerParams params;
      tracker_node["iou_min"] = params.iou_min;
      tracker_node["max_age"] = params.max_age;
      tracker_node["min_hits"] = params.min_hits;
    } else {
      const track::KalmanTrackerParams params;
      tracker_node["iou_min"] = params.iou_min;
      tracker_node["max_age"] = params.max_age;
      tracker_node["min_hits"] = params.min_hits;
      tracker_node["process_noise"] = params.process_noise;
      tracker_node["measurement_noise"] = params.measurement_noise;
      tracker_node["emit_predictions"] = params.emit_predictions;
    }
    manifest["tracker"] = tracker_node;
    json eval_node;
    eval_node["iou_threshold"] = args.iou_threshold;
    eval_node["visibility_floor"] = 0.0;
    manifest["eval"] = eval_node;
    if (args.write_masks) manifest["mask_files"] = mask_files;
    manifest["outputs"] = outputs;

    const fs::path manifest_path = out_dir / "manifest.json";
    write_file_atomic(manifest_path, manifest.dump(2));
    report_written(manifest_path, "");
    return 0;
  });
}

}  // namespace pedsim::cli
