// SPDX-License-Identifier: Apache-2.0
// End-to-end coverage of the pedsim command line tool. Each case shells
// out to the real binary (path in PEDSIM_BIN) inside a scratch directory,
// checking exit codes, stream contents and the files left behind.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <pedsim/annotate.hpp>
#include <pedsim/version.hpp>

namespace fs = std::filesystem;

namespace {

std::string required_env(const char* name) {
  const char* value = std::getenv(name);
  REQUIRE_MESSAGE(value != nullptr, name << " must be set by ctest");
  return value;
}

std::string pedsim_bin() { return required_env("PEDSIM_BIN"); }

fs::path fresh_dir(const std::string& label) {
  const fs::path dir = fs::temp_directory_path() / ("pedsim_cli_" + label);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs `pedsim <args>` through the shell, capturing both streams.
RunResult run_cli(const std::string& args, const fs::path& dir,
                  const std::string& env_prefix = "") {
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string cmd = env_prefix + pedsim_bin() + " " + args + " >" +
                          out_file.string() + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult result;
  REQUIRE(status != -1);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

// A minimal backyard scene: one walker pacing between two markers past a
// shed, watched by a low resolution wall camera. Small enough that every
// CLI case finishes in milliseconds.
std::string yard_cfg(int frames = 40) {
  std::ostringstream cfg;
  cfg << "format = 1\n"
         "name = yard\n"
         "duration_frames = " << frames << "\n"
         "fps = 30\n"
         "seed = 7\n"
         "\n"
         "[obstacle shed]\n"
         "min = (4, 2, -2.2)\n"
         "max = (6, 3.5, 0)\n"
         "\n"
         "[pedestrian pat]\n"
         "spawn = (2, -2, 0)\n"
         "height = 1.7\n"
         "radius = 0.3\n"
         "speed = 1.2\n"
         "controller = customized\n"
         "end = loop\n"
         "\n"
         "[target far_post]\n"
         "position = (9, -2, 0)\n"
         "owner = pat\n"
         "index = 1\n"
         "\n"
         "[target near_post]\n"
         "position = (2, -2, 0)\n"
         "owner = pat\n"
         "index = 2\n"
         "\n"
         "[camera cam0]\n"
         "width = 320\n"
         "height = 240\n"
         "hfov_deg = 90\n"
         "mount = static\n"
         "position = (-6, -2, -3)\n"
         "yaw_deg = 0\n"
         "pitch_deg = -12\n"
         "roll_deg = 0\n";
  return cfg.str();
}

// Writes the yard scenario, simulates it and returns the annotation path.
fs::path make_yard_gt(const fs::path& dir) {
  spit(dir / "yard.cfg", yard_cfg());
  const RunResult run =
      run_cli("simulate " + (dir / "yard.cfg").string() + " " + dir.string(),
              dir);
  REQUIRE(run.code == 0);
  return dir / "yard_cam0.json";
}

TEST_SUITE("cli") {

TEST_CASE("simulate writes a parseable annotation sequence") {
  const fs::path dir = fresh_dir("simulate");
  spit(dir / "yard.cfg", yard_cfg());
  const RunResult run =
      run_cli("simulate " + (dir / "yard.cfg").string() + " " + dir.string(),
              dir);
  CHECK(run.code == 0);
  CHECK(run.out.find("wrote") != std::string::npos);
  CHECK(run.out.find("yard_cam0.json") != std::string::npos);

  const auto sequence =
      pedsim::annotate::annotation_from_json(slurp(dir / "yard_cam0.json"));
  CHECK(sequence.scenario == "yard");
  CHECK(sequence.camera_id == "cam0");
  CHECK(sequence.frames.size() == 40);
}

TEST_CASE("simulate lists config violations and exits 1") {
  const fs::path dir = fresh_dir("violations");
  std::string bad = yard_cfg();
  bad.replace(bad.find("speed = 1.2"), 11, "speed = 0.0");
  spit(dir / "bad.cfg", bad);
  const RunResult run = run_cli(
      "simulate " + (dir / "bad.cfg").string() + " " + dir.string(), dir);
  CHECK(run.code == 1);
  CHECK(run.err.find("problem") != std::string::npos);
  CHECK(run.err.find("speed") != std::string::npos);
}

TEST_CASE("missing inputs exit with the environment code") {
  const fs::path dir = fresh_dir("missing");
  const RunResult run = run_cli(
      "simulate " + (dir / "nope.cfg").string() + " " + dir.string(), dir);
  CHECK(run.code == 2);
  CHECK(run.err.find("pedsim:") != std::string::npos);
}

TEST_CASE("seed falls back to PEDSIM_SEED and the flag wins") {
  const fs::path dir = fresh_dir("seed");
  spit(dir / "yard.cfg", yard_cfg());
  const std::string cfg = (dir / "yard.cfg").string();

  auto simulate = [&](const std::string& sub, const std::string& extra,
                      const std::string& env) {
    const fs::path out = dir / sub;
    fs::create_directories(out);
    const RunResult run =
        run_cli("simulate " + cfg + " " + out.string() + extra, dir, env);
    REQUIRE(run.code == 0);
    return slurp(out / "yard_cam0.json");
  };

  const std::string flagged = simulate("a", " --seed 99", "");
  const std::string from_env = simulate("b", "", "PEDSIM_SEED=99 ");
  const std::string overridden = simulate("c", " --seed 99", "PEDSIM_SEED=4 ");
  const std::string other = simulate("d", "", "PEDSIM_SEED=4 ");
  CHECK(flagged == from_env);
  CHECK(flagged == overridden);
  CHECK(flagged != other);
}

TEST_CASE("detect checks the profile and accepts profile files") {
  const fs::path dir = fresh_dir("detect");
  const fs::path gt = make_yard_gt(dir);

  const RunResult bad =
      run_cli("detect " + gt.string() + " --profile drizzle", dir);
  CHECK(bad.code == 1);
  CHECK(bad.err.find("unknown profile 'drizzle'") != std::string::npos);
  CHECK(bad.err.find("fog_dense") != std::string::npos);

  const RunResult named = run_cli(
      "detect " + gt.string() + " --profile fog -o " +
          (dir / "fog_det.txt").string(),
      dir);
  CHECK(named.code == 0);
  CHECK(fs::exists(dir / "fog_det.txt"));

  spit(dir / "custom.cfg",
       "format = 1\n[degradation]\nfog_extinction = 0.01\n"
       "base_detect_prob = 0.8\nnight_factor = 1\nbbox_noise_sigma = 0\n"
       "false_positive_rate = 0\nvisibility_exponent = 1\n");
  const RunResult custom = run_cli(
      "detect " + gt.string() + " --profile " + (dir / "custom.cfg").string() +
          " -o " + (dir / "custom_det.txt").string(),
      dir);
  CHECK(custom.code == 0);
  CHECK(fs::exists(dir / "custom_det.txt"));
}

TEST_CASE("track points at the malformed line and passes empty files") {
  const fs::path dir = fresh_dir("track");
  spit(dir / "bad.txt", "1,-1,0,0,10,10,1,-1,-1,-1\nbogus line\n");
  const RunResult bad = run_cli("track " + (dir / "bad.txt").string(), dir);
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 2") != std::string::npos);

  spit(dir / "empty.txt", "");
  const RunResult empty = run_cli(
      "track " + (dir / "empty.txt").string() + " -o " +
          (dir / "empty_tracks.txt").string(),
      dir);
  CHECK(empty.code == 0);
  CHECK(slurp(dir / "empty_tracks.txt").empty());
}

TEST_CASE("track rejects kalman-only flags for the greedy tracker") {
  const fs::path dir = fresh_dir("trackflags");
  spit(dir / "det.txt", "1,-1,0,0,10,10,1,-1,-1,-1\n");
  const RunResult run = run_cli(
      "track " + (dir / "det.txt").string() + " --tracker iou" +
          " --process-noise 2",
      dir);
  CHECK(run.code == 1);
  CHECK(run.err.find("kalman tracker only") != std::string::npos);
}

TEST_CASE("eval rejects out-of-range thresholds") {
  const fs::path dir = fresh_dir("evalbad");
  const fs::path gt = make_yard_gt(dir);
  spit(dir / "tracks.txt", "1,1,100,100,20,40,1,-1,-1,-1\n");
  const RunResult run = run_cli(
      "eval " + gt.string() + " " + (dir / "tracks.txt").string() +
          " --iou 1.01",
      dir);
  CHECK(run.code == 1);
  CHECK_FALSE(run.err.empty());
}

TEST_CASE("eval warns when frame ranges differ and evaluates the overlap") {
  const fs::path dir = fresh_dir("evalwarn");
  const fs::path gt = make_yard_gt(dir);

  // Perfect tracks for the first 10 frames only.
  const RunResult det = run_cli(
      "detect " + gt.string() + " -o " + (dir / "det_full.txt").string(), dir);
  REQUIRE(det.code == 0);
  std::istringstream rows(slurp(dir / "det_full.txt"));
  std::ostringstream head;
  std::string row;
  while (std::getline(rows, row)) {
    const int frame = std::stoi(row.substr(0, row.find(',')));
    if (frame > 10) break;
    const auto rest = row.substr(row.find(','));
    head << frame << ",1" << rest.substr(rest.find(',', 1)) << "\n";
  }
  spit(dir / "tracks.txt", head.str());

  const RunResult run = run_cli(
      "eval " + gt.string() + " " + (dir / "tracks.txt").string(), dir);
  CHECK(run.code == 0);
  CHECK(run.err.find("frame ranges differ") != std::string::npos);
  CHECK(run.out.find("MOTA") != std::string::npos);
}

TEST_CASE("pipeline reruns into fresh directories are byte-identical") {
  const fs::path dir = fresh_dir("pipeline");
  spit(dir / "yard.cfg", yard_cfg());
  const std::string cfg = (dir / "yard.cfg").string();

  // Nested output directories are created on demand.
  const fs::path a = dir / "runs" / "a";
  const fs::path b = dir / "runs" / "b";
  const RunResult first = run_cli(
      "pipeline " + cfg + " " + a.string() + " --profile fog", dir);
  REQUIRE_MESSAGE(first.code == 0, first.err);
  const RunResult second = run_cli(
      "pipeline " + cfg + " " + b.string() + " --profile fog", dir);
  REQUIRE(second.code == 0);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path name = entry.path().filename();
    CAPTURE(name.string());
    CHECK(slurp(entry.path()) == slurp(b / name));
    ++compared;
  }
  CHECK(compared == 5);
  CHECK(slurp(a / "manifest.json").find("\"command\": \"pipeline\"") !=
        std::string::npos);
}

TEST_CASE("version flag prints the library version") {
  const fs::path dir = fresh_dir("version");
  const RunResult run = run_cli("--version", dir);
  CHECK(run.code == 0);
  CHECK(run.out.find(pedsim::kVersion) != std::string::npos);

  const RunResult none = run_cli("", dir);
  CHECK(none.code == 1);
}

}  // TEST_SUITE

}  // namespace
