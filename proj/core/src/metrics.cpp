// SPDX-License-Identifier: Apache-2.0
#include "pedsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "pedsim/hungarian.hpp"

namespace pedsim::eval {

namespace {

using json = nlohmann::ordered_json;

void check_config(const EvalConfig& config) {
  if (!(config.iou_threshold > 0.0) || config.iou_threshold > 1.0)
    throw std::invalid_argument("eval: iou_threshold must be in (0, 1]");
  if (!(config.visibility_floor >= 0.0) || config.visibility_floor >= 1.0)
    throw std::invalid_argument("eval: visibility_floor must be in [0, 1)");
}

struct HypBox {
  int id;
  const BBox2D* box;
};

struct FrameData {
  std::vector<const GtEntry*> gt;
  std::vector<HypBox> hyp;
};

// Frame axis: every frame holding a surviving gt box or a hypothesis box.
std::map<int, FrameData> build_frames(const GtSet& gt,
                                      const track::TrackSet& hyp,
                                      double visibility_floor,
                                      long long& gt_total) {
  std::map<int, FrameData> frames;
  gt_total = 0;
  for (const auto& entry : gt) {
    if (entry.visibility < visibility_floor) continue;
    frames[entry.frame].gt.push_back(&entry);
    ++gt_total;
  }
  for (const auto& track : hyp)
    for (const auto& entry : track.entries)
      frames[entry.frame].hyp.push_back({track.id, &entry.bbox});
  return frames;
}

}  // namespace

GtSet gt_from_annotations(const annotate::AnnotationSequence& sequence) {
  GtSet gt;
  for (const auto& frame : sequence.frames)
    for (const auto& entry : frame.pedestrians)
      gt.push_back({frame.frame, entry.id, entry.bbox, entry.visibility});
  return gt;
}

track::TrackSet tracks_from_gt(const GtSet& gt) {
  std::map<int, std::vector<track::TrackEntry>> by_id;
  for (const auto& entry : gt)
    by_id[entry.id].push_back({entry.frame, entry.bbox});
  track::TrackSet tracks;
  tracks.reserve(by_id.size());
  for (auto& [id, entries] : by_id) {
    std::sort(entries.begin(), entries.end(),
              [](const track::TrackEntry& a, const track::TrackEntry& b) {
                return a.frame < b.frame;
              });
    tracks.push_back({id, std::move(entries)});
  }
  return tracks;
}

ClearMotResult clear_mot(const GtSet& gt, const track::TrackSet& hyp,
                         const EvalConfig& config) {
  check_config(config);
  long long gt_total = 0;
  const auto frames =
      build_frames(gt, hyp, config.visibility_floor, gt_total);
  if (gt_total == 0)
    throw std::invalid_argument("eval: no ground-truth boxes to score");

  ClearMotResult result;
  result.gt = gt_total;
  result.frames = static_cast<long long>(frames.size());
  double iou_sum = 0.0;
  std::unordered_map<int, int> last_hyp_for_gt;

  for (const auto& [frame, data] : frames) {
    std::vector<bool> gt_done(data.gt.size(), false);
    std::vector<bool> hyp_done(data.hyp.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    // Carry over matches that still hold, before any fresh assignment.
    for (std::size_t i = 0; i < data.gt.size(); ++i) {
      const auto prev = last_hyp_for_gt.find(data.gt[i]->id);
      if (prev == last_hyp_for_gt.end()) continue;
      for (std::size_t j = 0; j < data.hyp.size(); ++j) {
        if (hyp_done[j] || data.hyp[j].id != prev->second) continue;
        if (iou(data.gt[i]->bbox, *data.hyp[j].box) >=
            config.iou_threshold) {
          gt_done[i] = true;
          hyp_done[j] = true;
          pairs.emplace_back(i, j);
        }
        break;
      }
    }

    std::vector<std::size_t> free_gt;
    std::vector<std::size_t> free_hyp;
    for (std::size_t i = 0; i < data.gt.size(); ++i)
      if (!gt_done[i]) free_gt.push_back(i);
    for (std::size_t j = 0; j < data.hyp.size(); ++j)
      if (!hyp_done[j]) free_hyp.push_back(j);

    if (!free_gt.empty() && !free_hyp.empty()) {
      std::vector<std::vector<double>> cost(
          free_gt.size(), std::vector<double>(free_hyp.size(),
                                              kForbiddenCost));
      for (std::size_t a = 0; a < free_gt.size(); ++a)
        for (std::size_t b = 0; b < free_hyp.size(); ++b) {
          const double overlap =
              iou(data.gt[free_gt[a]]->bbox, *data.hyp[free_hyp[b]].box);
          if (overlap >= config.iou_threshold) cost[a][b] = 1.0 - overlap;
        }
      const Assignment assignment = hungarian(cost);
      for (std::size_t a = 0; a < free_gt.size(); ++a) {
        const int b = assignment.row_to_col[a];
        if (b < 0 || cost[a][b] >= kForbiddenCost) continue;
        pairs.emplace_back(free_gt[a], free_hyp[b]);
      }
    }

    for (const auto& [i, j] : pairs) {
      const int gt_id = data.gt[i]->id;
      const int hyp_id = data.hyp[j].id;
      const auto prev = last_hyp_for_gt.find(gt_id);
      if (prev != last_hyp_for_gt.end() && prev->second != hyp_id)
        ++result.idsw;
      last_hyp_for_gt[gt_id] = hyp_id;
      iou_sum += iou(data.gt[i]->bbox, *data.hyp[j].box);
    }
    result.matches += static_cast<long long>(pairs.size());
    result.fn += static_cast<long long>(data.gt.size() - pairs.size());
    result.fp += static_cast<long long>(data.hyp.size() - pairs.size());
  }

  result.motp = result.matches > 0
                    ? iou_sum / static_cast<double>(result.matches)
                    : 0.0;
  result.mota = 1.0 - static_cast<double>(result.fn + result.fp +
                                          result.idsw) /
                          static_cast<double>(result.gt);
  return result;
}

IdentityResult identity_metrics(const GtSet& gt, const track::TrackSet& hyp,
                                const EvalConfig& config) {
  check_config(config);

  std::map<int, std::unordered_map<int, const BBox2D*>> gt_traj;
  long long gt_total = 0;
  for (const auto& entry : gt) {
    if (entry.visibility < config.visibility_floor) continue;
    gt_traj[entry.id][entry.frame] = &entry.bbox;
    ++gt_total;
  }
  if (gt_total == 0)
    throw std::invalid_argument("eval: no ground-truth boxes to score");

  const std::size_t n = gt_traj.size();
  const std::size_t m = hyp.size();
  std::vector<long long> gt_len;
  gt_len.reserve(n);
  std::vector<const std::unordered_map<int, const BBox2D*>*> gt_rows;
  gt_rows.reserve(n);
  for (const auto& [id, boxes] : gt_traj) {
    gt_len.push_back(static_cast<long long>(boxes.size()));
    gt_rows.push_back(&boxes);
  }
  long long hyp_total = 0;
  for (const auto& track : hyp)
    hyp_total += static_cast<long long>(track.entries.size());

  // Padded square assignment: pairing a gt row with a hyp column costs the
  // boxes left uncovered; the diagonal dummies cost a full trajectory each.
  const double forbid = std::numeric_limits<double>::infinity();
  const std::size_t dim = n + m;
  std::vector<std::vector<double>> cost(dim,
                                        std::vector<double>(dim, forbid));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      long long overlap = 0;
      for (const auto& entry : hyp[j].entries) {
        const auto found = gt_rows[i]->find(entry.frame);
        if (found != gt_rows[i]->end() &&
            iou(*found->second, entry.bbox) >= config.iou_threshold)
          ++overlap;
      }
      cost[i][j] = static_cast<double>(
          gt_len[i] + static_cast<long long>(hyp[j].entries.size()) -
          2 * overlap);
    }
    cost[i][m + i] = static_cast<double>(gt_len[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    cost[n + j][j] = static_cast<double>(hyp[j].entries.size());
    for (std::size_t i = 0; i < n; ++i) cost[n + j][m + i] = 0.0;
  }

  const Assignment assignment = hungarian(cost);

  IdentityResult result;
  result.assignment_cost = assignment.cost;
  const long long uncovered = std::llround(assignment.cost);
  result.idtp = (gt_total + hyp_total - uncovered) / 2;
  result.idfn = gt_total - result.idtp;
  result.idfp = hyp_total - result.idtp;
  result.idr = static_cast<double>(result.idtp) /
               static_cast<double>(gt_total);
  result.idp = hyp_total > 0 ? static_cast<double>(result.idtp) /
                                   static_cast<double>(hyp_total)
                             : 0.0;
  result.idf1 = static_cast<double>(2 * result.idtp) /
                static_cast<double>(2 * result.idtp + result.idfp +
                                    result.idfn);
  return result;
}

Report eval_report(const GtSet& gt, const track::TrackSet& hyp,
                   const EvalConfig& config) {
  const ClearMotResult clear = clear_mot(gt, hyp, config);
  const IdentityResult identity = identity_metrics(gt, hyp, config);
  Report report;
  report.mota = clear.mota;
  report.motp = clear.motp;
  report.idf1 = identity.idf1;
  report.idp = identity.idp;
  report.idr = identity.idr;
  report.fp = clear.fp;
  report.fn = clear.fn;
  report.idsw = clear.idsw;
  report.gt = clear.gt;
  report.frames = clear.frames;
  return report;
}

std::string report_to_json(const Report& report) {
  json root;
  root["mota"] = report.mota;
  root["motp"] = report.motp;
  root["idf1"] = report.idf1;
  root["idp"] = report.idp;
  root["idr"] = report.idr;
  root["fp"] = report.fp;
  root["fn"] = report.fn;
  root["idsw"] = report.idsw;
  root["gt"] = report.gt;
  root["frames"] = report.frames;
  return root.dump();
}

Report report_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("report: invalid JSON: ") +
                             err.what());
  }
  try {
    Report report;
    report.mota = root.at("mota").get<double>();
    report.motp = root.at("motp").get<double>();
    report.idf1 = root.at("idf1").get<double>();
    report.idp = root.at("idp").get<double>();
    report.idr = root.at("idr").get<double>();
    report.fp = root.at("fp").get<long long>();
    report.fn = root.at("fn").get<long long>();
    report.idsw = root.at("idsw").get<long long>();
    report.gt = root.at("gt").get<long long>();
    report.frames = root.at("frames").get<long long>();
    return report;
  } catch (const json::exception& err) {
    throw std::runtime_error(std::string("report: bad field: ") + err.what());
  }
}

std::string report_table(const Report& report) {
  char buf[256];
  std::string out = "    MOTA    MOTP    IDF1     IDP     IDR      FP      FN"
                    "    IDSW      GT  FRAMES\n";
  std::snprintf(buf, sizeof(buf),
                "%8.3f%8.3f%8.3f%8.3f%8.3f%8lld%8lld%8lld%8lld%8lld\n",
                report.mota, report.motp, report.idf1, report.idp, report.idr,
                report.fp, report.fn, report.idsw, report.gt, report.frames);
  out += buf;
  return out;
}

}  // namespace pedsim::eval
