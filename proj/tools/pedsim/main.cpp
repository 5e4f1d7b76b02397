// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include "commands.hpp"
#include "pedsim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"headless pedestrian scenario simulator, auto-annotator and "
               "tracking evaluation toolkit"};
  app.set_version_flag("--version", pedsim::kVersion);
  app.require_subcommand(1);

  int exit_code = 0;

  pedsim::cli::SimulateArgs simulate;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Run a scenario and write per-camera annotation JSON");
  sim->add_option("scenario", simulate.scenario_path, "Scenario .cfg file")
      ->required();
  sim->add_option("out_dir", simulate.out_dir, "Output directory")->required();
  sim->add_option("--seed", simulate.seed, "Override the scenario seed")
      ->envname("PEDSIM_SEED");
  sim->add_flag("--masks", simulate.write_masks,
                "Also write per-frame instance masks (PGM)");
  sim->add_flag("--trace", simulate.write_trace,
                "Also dump the raw simulation trace JSON");
  sim->callback([&] { exit_code = pedsim::cli::cmd_simulate(simulate); });

  pedsim::cli::DetectArgs detect;
  CLI::App* det = app.add_subcommand(
      "detect", "Synthesize degraded detections from annotation JSON");
  det->add_option("gt", detect.gt_path, "Annotation JSON file")->required();
  det->add_option("--profile", detect.profile,
                  "clear|fog|fog_dense|night or a degradation .cfg path");
  det->add_option("--seed", detect.seed,
                  "Detector seed (default: the annotation's seed)")
      ->envname("PEDSIM_SEED");
  det->add_option("-o,--out", detect.out_path,
                  "Output path (default: <gt stem>_det.txt)");
  det->callback([&] { exit_code = pedsim::cli::cmd_detect(detect); });

  pedsim::cli::TrackArgs track;
  CLI::App* trk =
      app.add_subcommand("track", "Link detections into tracks");
  trk->add_option("detections", track.detections_path, "Detections .txt file")
      ->required();
  trk->add_option("--tracker", track.tracker, "Tracker: iou or kalman")
      ->check(CLI::IsMember({"iou", "kalman"}));
  trk->add_option("--iou-min", track.iou_min, "Association IoU gate");
  trk->add_option("--max-age", track.max_age,
                  "Frames a confirmed track survives unmatched");
  trk->add_option("--min-hits", track.min_hits,
                  "Consecutive matches needed to confirm a track");
  trk->add_option("--process-noise", track.process_noise,
                  "Kalman process noise scale");
  trk->add_option("--measurement-noise", track.measurement_noise,
                  "Kalman measurement noise scale");
  trk->add_flag("--emit-predictions", track.emit_predictions,
                "Emit predicted boxes on missed frames (kalman)");
  trk->add_option("-o,--out", track.out_path,
                  "Output path (default: <stem>_tracks.txt)");
  trk->callback([&] { exit_code = pedsim::cli::cmd_track(track); });

  pedsim::cli::EvalArgs eval;
  CLI::App* ev = app.add_subcommand(
      "eval", "Score tracks against annotation ground truth");
  ev->add_option("gt", eval.gt_path, "Annotation JSON file")->required();
  ev->add_option("tracks", eval.tracks_path, "Tracks .txt file")->required();
  ev->add_option("--iou", eval.iou_threshold, "Match IoU threshold");
  ev->add_option("--vis-floor", eval.visibility_floor,
                 "Ignore ground truth below this visibility");
  ev->add_option("--report", eval.report_path, "Also write the report JSON");
  ev->callback([&] { exit_code = pedsim::cli::cmd_eval(eval); });

  pedsim::cli::PipelineArgs pipeline;
  CLI::App* pipe = app.add_subcommand(
      "pipeline",
      "simulate, detect, track and eval in one run with a manifest");
  pipe->add_option("scenario", pipeline.scenario_path, "Scenario .cfg file")
      ->required();
  pipe->add_option("out_dir", pipeline.out_dir, "Output directory")
      ->required();
  pipe->add_option("--profile", pipeline.profile,
                   "clear|fog|fog_dense|night or a degradation .cfg path");
  pipe->add_option("--tracker", pipeline.tracker, "Tracker: iou or kalman")
      ->check(CLI::IsMember({"iou", "kalman"}));
  pipe->add_option("--seed", pipeline.seed, "Override the scenario seed")
      ->envname("PEDSIM_SEED");
  pipe->add_option("--iou", pipeline.iou_threshold,
                   "Evaluation IoU threshold");
  pipe->add_flag("--masks", pipeline.write_masks,
                 "Also write per-frame instance masks");
  pipe->add_flag("--trace", pipeline.write_trace,
                 "Also dump the simulation trace");
  pipe->callback([&] { exit_code = pedsim::cli::cmd_pipeline(pipeline); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }
  return exit_code;
}
