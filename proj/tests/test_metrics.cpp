// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pedsim/metrics.hpp"
#include "pedsim/random.hpp"

using namespace pedsim;
using namespace pedsim::eval;
using track::Track;
using track::TrackSet;

namespace {

BBox2D slot(int k) {  // disjoint box palette
  return {100.0 * k, 0.0, 100.0 * k + 50.0, 100.0};
}

// IoU 0.6 against slot(k): same height, shifted by a quarter width.
BBox2D slot_shifted(int k) {
  return {100.0 * k + 12.5, 0.0, 100.0 * k + 62.5, 100.0};
}

GtSet moving_gt(int ids, int frames) {
  GtSet gt;
  for (int f = 0; f < frames; ++f)
    for (int id = 1; id <= ids; ++id) {
      const double x = 40.0 * id + 2.0 * f;
      gt.push_back({f, id, {x, 30.0 * id, x + 55.0, 30.0 * id + 110.0}, 1.0});
    }
  return gt;
}

TrackSet single_track(int id, int first_frame, int frames, const BBox2D& box) {
  Track track{id, {}};
  for (int f = first_frame; f < first_frame + frames; ++f)
    track.entries.push_back({f, box});
  return {track};
}

// Minimum trajectory-pairing cost by exhaustive enumeration.
double enumerate_identity_cost(const std::vector<double>& gt_len,
                               const std::vector<double>& hyp_len,
                               const std::vector<std::vector<double>>& overlap) {
  const std::size_t n = gt_len.size();
  const std::size_t m = hyp_len.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> used(m, false);
  const auto recurse = [&](const auto& self, std::size_t i,
                           double acc) -> void {
    if (i == n) {
      for (std::size_t j = 0; j < m; ++j)
        if (!used[j]) acc += hyp_len[j];
      best = std::min(best, acc);
      return;
    }
    self(self, i + 1, acc + gt_len[i]);  // leave gt trajectory unmatched
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, i + 1, acc + gt_len[i] + hyp_len[j] - 2.0 * overlap[i][j]);
      used[j] = false;
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("a perfect tracker scores 1.0 everywhere") {
  const GtSet gt = moving_gt(3, 50);
  const TrackSet hyp = tracks_from_gt(gt);
  REQUIRE(hyp.size() == 3);

  const ClearMotResult clear = clear_mot(gt, hyp);
  CHECK(clear.mota == 1.0);
  CHECK(clear.motp == 1.0);
  CHECK(clear.fp == 0);
  CHECK(clear.fn == 0);
  CHECK(clear.idsw == 0);
  CHECK(clear.matches == 150);
  CHECK(clear.gt == 150);
  CHECK(clear.frames == 50);

  const IdentityResult identity = identity_metrics(gt, hyp);
  CHECK(identity.idf1 == 1.0);
  CHECK(identity.idp == 1.0);
  CHECK(identity.idr == 1.0);
  CHECK(identity.idtp == 150);
  CHECK(identity.idfp == 0);
  CHECK(identity.idfn == 0);
}

TEST_CASE("one miss and one spurious box over ten gt boxes score 0.8") {
  // 5 frames x 2 ids = 10 gt boxes; the hypothesis drops id 2 at frame 4 and
  // invents a box at frame 0.
  GtSet gt;
  for (int f = 0; f < 5; ++f) {
    gt.push_back({f, 1, slot(0), 1.0});
    gt.push_back({f, 2, slot(3), 1.0});
  }
  TrackSet hyp;
  Track h1{1, {}};
  for (int f = 0; f < 5; ++f) h1.entries.push_back({f, slot(0)});
  Track h2{2, {}};
  for (int f = 0; f < 4; ++f) h2.entries.push_back({f, slot(3)});
  Track spurious{3, {{0, slot(7)}}};
  hyp = {h1, h2, spurious};

  const ClearMotResult clear = clear_mot(gt, hyp);
  CHECK(clear.gt == 10);
  CHECK(clear.fn == 1);
  CHECK(clear.fp == 1);
  CHECK(clear.idsw == 0);
  CHECK(clear.mota == 0.8);
  CHECK(clear.motp == 1.0);
}

TEST_CASE("a mid-sequence identity swap counts one switch per trajectory") {
  GtSet gt;
  for (int f = 0; f < 10; ++f) {
    gt.push_back({f, 1, slot(0), 1.0});
    gt.push_back({f, 2, slot(4), 1.0});
  }
  // Hypothesis ids follow their gt tracks for 5 frames, then trade places.
  Track h1{1, {}};
  Track h2{2, {}};
  for (int f = 0; f < 5; ++f) {
    h1.entries.push_back({f, slot(0)});
    h2.entries.push_back({f, slot(4)});
  }
  for (int f = 5; f < 10; ++f) {
    h1.entries.push_back({f, slot(4)});
    h2.entries.push_back({f, slot(0)});
  }
  const TrackSet hyp{h1, h2};

  const ClearMotResult clear = clear_mot(gt, hyp);
  CHECK(clear.idsw == 2);
  CHECK(clear.fp == 0);
  CHECK(clear.fn == 0);
  CHECK(clear.mota == doctest::Approx(0.9).epsilon(1e-12));

  const IdentityResult identity = identity_metrics(gt, hyp);
  CHECK(identity.idtp == 10);
  CHECK(identity.idfp == 10);
  CHECK(identity.idfn == 10);
  CHECK(identity.idf1 == 0.5);
}

TEST_CASE("an existing match persists even when a better box appears") {
  GtSet gt;
  for (int f = 0; f < 10; ++f) gt.push_back({f, 1, slot(0), 1.0});
  Track steady{1, {}};
  for (int f = 0; f < 10; ++f) steady.entries.push_back({f, slot_shifted(0)});
  Track latecomer{2, {}};
  for (int f = 5; f < 10; ++f) latecomer.entries.push_back({f, slot(0)});
  const TrackSet hyp{steady, latecomer};

  const ClearMotResult clear = clear_mot(gt, hyp);
  CHECK(clear.idsw == 0);  // would be 1 if the perfect latecomer stole the gt
  CHECK(clear.fn == 0);
  CHECK(clear.fp == 5);
  CHECK(clear.matches == 10);
  CHECK(clear.motp == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("re-acquiring under a new id after an absence is one switch") {
  GtSet gt;
  for (int f = 0; f < 5; ++f) gt.push_back({f, 1, slot(0), 1.0});
  for (int f = 7; f < 10; ++f) gt.push_back({f, 1, slot(0), 1.0});
  const TrackSet hyp{Track{1, {{0, slot(0)}, {1, slot(0)}, {2, slot(0)},
                                {3, slot(0)}, {4, slot(0)}}},
                     Track{2, {{7, slot(0)}, {8, slot(0)}, {9, slot(0)}}}};
  const ClearMotResult clear = clear_mot(gt, hyp);
  CHECK(clear.idsw == 1);
  CHECK(clear.fn == 0);
  CHECK(clear.fp == 0);
}

TEST_CASE("ground truth below the visibility floor is ignored") {
  GtSet gt;
  for (int f = 0; f < 5; ++f) {
    gt.push_back({f, 1, slot(0), 1.0});
    gt.push_back({f, 2, slot(3), f < 2 ? 0.2 : 0.9});
  }
  EvalConfig config;
  config.visibility_floor = 0.25;
  const ClearMotResult clear = clear_mot(gt, {}, config);
  CHECK(clear.gt == 8);
  CHECK(clear.fn == 8);
  CHECK(clear.mota == 0.0);

  const ClearMotResult all = clear_mot(gt, {});
  CHECK(all.gt == 10);
}

TEST_CASE("a half-covered trajectory scores idf1 two thirds") {
  GtSet gt;
  for (int f = 0; f < 10; ++f) gt.push_back({f, 1, slot(0), 1.0});
  const TrackSet hyp = single_track(1, 0, 5, slot(0));
  const IdentityResult identity = identity_metrics(gt, hyp);
  CHECK(identity.idtp == 5);
  CHECK(identity.idp == 1.0);
  CHECK(identity.idr == 0.5);
  CHECK(identity.idf1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(identity.assignment_cost == 5.0);
}

TEST_CASE("identity assignment matches exhaustive enumeration") {
  RngStream rng = derive_stream(4242, "identity-fuzz");
  for (int trial = 0; trial < 300; ++trial) {
    const int n_gt = 1 + static_cast<int>(rng.next_below(4));
    const int n_hyp = static_cast<int>(rng.next_below(5));
    const int frames = 1 + static_cast<int>(rng.next_below(6));

    GtSet gt;
    for (int id = 1; id <= n_gt; ++id)
      for (int f = 0; f < frames; ++f)
        if (rng.bernoulli(0.8))
          gt.push_back({f, id, slot(static_cast<int>(rng.next_below(3))), 1.0});
    TrackSet hyp;
    for (int id = 1; id <= n_hyp; ++id) {
      Track track{id, {}};
      for (int f = 0; f < frames; ++f)
        if (rng.bernoulli(0.7))
          track.entries.push_back({f, slot(static_cast<int>(rng.next_below(3)))});
      if (!track.entries.empty()) hyp.push_back(track);
    }
    if (gt.empty()) continue;

    // Independent overlap counts for the enumerator.
    std::vector<int> gt_ids;
    for (const auto& entry : gt)
      if (std::find(gt_ids.begin(), gt_ids.end(), entry.id) == gt_ids.end())
        gt_ids.push_back(entry.id);
    std::sort(gt_ids.begin(), gt_ids.end());
    std::vector<double> gt_len(gt_ids.size(), 0.0);
    std::vector<double> hyp_len(hyp.size(), 0.0);
    std::vector<std::vector<double>> overlap(
        gt_ids.size(), std::vector<double>(hyp.size(), 0.0));
    for (std::size_t i = 0; i < gt_ids.size(); ++i)
      for (const auto& entry : gt)
        if (entry.id == gt_ids[i]) gt_len[i] += 1.0;
    for (std::size_t j = 0; j < hyp.size(); ++j)
      hyp_len[j] = static_cast<double>(hyp[j].entries.size());
    for (std::size_t i = 0; i < gt_ids.size(); ++i)
      for (std::size_t j = 0; j < hyp.size(); ++j)
        for (const auto& entry : hyp[j].entries)
          for (const auto& g : gt)
            if (g.id == gt_ids[i] && g.frame == entry.frame &&
                iou(g.bbox, entry.bbox) >= 0.5)
              overlap[i][j] += 1.0;

    const double expected =
        enumerate_identity_cost(gt_len, hyp_len, overlap);
    const IdentityResult got = identity_metrics(gt, hyp);
    REQUIRE(got.assignment_cost == expected);
    REQUIRE(static_cast<double>(got.idfp + got.idfn) == expected);
  }
}

TEST_CASE("scores are invariant to a constant frame shift") {
  const GtSet gt = moving_gt(2, 20);
  TrackSet hyp = tracks_from_gt(gt);
  hyp[1].entries.erase(hyp[1].entries.begin(), hyp[1].entries.begin() + 4);
  hyp.push_back(Track{9, {{3, slot(8)}, {4, slot(8)}}});

  GtSet shifted_gt = gt;
  for (auto& entry : shifted_gt) entry.frame += 1000;
  TrackSet shifted_hyp = hyp;
  for (auto& track : shifted_hyp)
    for (auto& entry : track.entries) entry.frame += 1000;

  CHECK(report_to_json(eval_report(gt, hyp)) ==
        report_to_json(eval_report(shifted_gt, shifted_hyp)));
}

TEST_CASE("metrics respect their bounds on noisy input") {
  RngStream rng = derive_stream(31337, "bounds-fuzz");
  for (int trial = 0; trial < 50; ++trial) {
    GtSet gt;
    TrackSet hyp;
    const int frames = 4 + static_cast<int>(rng.next_below(8));
    for (int id = 1; id <= 3; ++id) {
      Track track{id, {}};
      for (int f = 0; f < frames; ++f) {
        if (rng.bernoulli(0.75))
          gt.push_back({f, id, slot(static_cast<int>(rng.next_below(4))), 1.0});
        if (rng.bernoulli(0.6))
          track.entries.push_back(
              {f, slot(static_cast<int>(rng.next_below(4)))});
      }
      if (!track.entries.empty()) hyp.push_back(track);
    }
    if (gt.empty()) continue;

    const Report report = eval_report(gt, hyp);
    CHECK(report.mota <= 1.0);
    CHECK(report.motp >= 0.0);
    CHECK(report.motp <= 1.0);
    CHECK(report.idf1 >= 0.0);
    CHECK(report.idf1 <= 1.0);
    CHECK(report.idp >= 0.0);
    CHECK(report.idp <= 1.0);
    CHECK(report.idr >= 0.0);
    CHECK(report.idr <= 1.0);
    CHECK(report.fp >= 0);
    CHECK(report.fn >= 0);
    CHECK(report.idsw >= 0);
  }
}

TEST_CASE("evaluating ground truth against itself leaves no identity errors") {
  const GtSet gt = moving_gt(4, 15);
  const IdentityResult identity = identity_metrics(gt, tracks_from_gt(gt));
  CHECK(identity.idfp == 0);
  CHECK(identity.idfn == 0);
  CHECK(identity.assignment_cost == 0.0);
}

TEST_CASE("disjoint boxes match nothing and motp stays zero") {
  GtSet gt;
  for (int f = 0; f < 4; ++f) gt.push_back({f, 1, slot(0), 1.0});
  const TrackSet hyp = single_track(1, 0, 4, slot(5));
  const ClearMotResult clear = clear_mot(gt, hyp);
  CHECK(clear.matches == 0);
  CHECK(clear.motp == 0.0);
  CHECK(clear.fp == 4);
  CHECK(clear.fn == 4);
  CHECK(clear.mota == -1.0);
}

TEST_CASE("empty ground truth and bad configs are errors") {
  const TrackSet hyp = single_track(1, 0, 3, slot(0));
  CHECK_THROWS_AS(clear_mot({}, hyp), std::invalid_argument);
  CHECK_THROWS_AS(identity_metrics({}, hyp), std::invalid_argument);
  CHECK_THROWS_AS(eval_report({}, hyp), std::invalid_argument);

  GtSet faint;
  faint.push_back({0, 1, slot(0), 0.1});
  EvalConfig floor;
  floor.visibility_floor = 0.5;
  CHECK_THROWS_AS(clear_mot(faint, hyp, floor), std::invalid_argument);

  GtSet gt;
  gt.push_back({0, 1, slot(0), 1.0});
  EvalConfig config;
  config.iou_threshold = 1.01;
  CHECK_THROWS_AS(clear_mot(gt, hyp, config), std::invalid_argument);
  config.iou_threshold = 0.0;
  CHECK_THROWS_AS(clear_mot(gt, hyp, config), std::invalid_argument);
  config = {};
  config.visibility_floor = 1.0;
  CHECK_THROWS_AS(clear_mot(gt, hyp, config), std::invalid_argument);
  config.visibility_floor = -0.1;
  CHECK_THROWS_AS(identity_metrics(gt, hyp, config), std::invalid_argument);
}

TEST_CASE("reports serialize with fixed key order and read back") {
  GtSet gt;
  for (int f = 0; f < 5; ++f) {
    gt.push_back({f, 1, slot(0), 1.0});
    gt.push_back({f, 2, slot(3), 1.0});
  }
  TrackSet hyp = tracks_from_gt(gt);
  hyp[1].entries.pop_back();
  const Report report = eval_report(gt, hyp);

  const std::string text = report_to_json(report);
  CHECK(text.find("{\"mota\":") == 0);
  CHECK(text.find("\"motp\":") < text.find("\"idf1\":"));
  CHECK(text.find("\"idf1\":") < text.find("\"fp\":"));
  CHECK(text.find("\"gt\":10") != std::string::npos);
  CHECK(text.find("\"frames\":5") != std::string::npos);

  const Report back = report_from_json(text);
  CHECK(back.mota == report.mota);
  CHECK(back.motp == report.motp);
  CHECK(back.idf1 == report.idf1);
  CHECK(back.fp == report.fp);
  CHECK(back.fn == report.fn);
  CHECK(back.idsw == report.idsw);
  CHECK(report_to_json(back) == text);

  CHECK_THROWS_AS(report_from_json("not json"), std::runtime_error);
  CHECK_THROWS_AS(report_from_json("{\"mota\":1}"), std::runtime_error);

  const std::string table = report_table(report);
  CHECK(table.find("MOTA") != std::string::npos);
  CHECK(table.find("IDF1") != std::string::npos);
  CHECK(table.find('\n') != std::string::npos);
}

TEST_SUITE_END();
