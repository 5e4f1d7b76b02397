// SPDX-License-Identifier: Apache-2.0
#include "pedsim/track.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <Eigen/Dense>

#include "pedsim/hungarian.hpp"

namespace pedsim::track {

namespace {

using detect::Detection;
using detect::DetectionSet;

void check_sorted(const DetectionSet& detections) {
  for (std::size_t i = 1; i < detections.size(); ++i)
    if (detections[i].frame < detections[i - 1].frame)
      throw std::invalid_argument("tracker: detections not sorted by frame");
}

void check_params(double iou_min, int max_age, int min_hits) {
  if (!(iou_min > 0.0) || iou_min > 1.0)
    throw std::invalid_argument("tracker: iou_min must be in (0, 1]");
  if (max_age < 0) throw std::invalid_argument("tracker: max_age < 0");
  if (min_hits < 1) throw std::invalid_argument("tracker: min_hits < 1");
}

// Detections of one frame: [begin, end) into the sorted set.
struct FrameSlice {
  int frame;
  std::size_t begin;
  std::size_t end;
};

std::vector<FrameSlice> slice_frames(const DetectionSet& detections) {
  std::vector<FrameSlice> slices;
  std::size_t i = 0;
  while (i < detections.size()) {
    std::size_t j = i;
    while (j < detections.size() &&
           detections[j].frame == detections[i].frame)
      ++j;
    slices.push_back({detections[i].frame, i, j});
    i = j;
  }
  return slices;
}

// Emitted tracks ordered by first emission; ids assigned 1-based.
TrackSet number_tracks(std::vector<std::pair<int, std::vector<TrackEntry>>>
                           ordered_entries) {
  std::sort(ordered_entries.begin(), ordered_entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  TrackSet tracks;
  tracks.reserve(ordered_entries.size());
  for (auto& [order, entries] : ordered_entries)
    tracks.push_back({static_cast<int>(tracks.size()) + 1,
                      std::move(entries)});
  return tracks;
}

}  // namespace

TrackSet track_iou(const DetectionSet& detections,
                   const IouTrackerParams& params) {
  check_params(params.iou_min, params.max_age, params.min_hits);
  check_sorted(detections);

  struct Live {
    BBox2D last;
    int last_frame;
    int hits;
    bool confirmed;
    int order;
    std::vector<TrackEntry> entries;
  };
  std::vector<Live> live;
  std::vector<std::pair<int, std::vector<TrackEntry>>> finished;
  int next_order = 0;

  auto retire = [&](Live& track) {
    if (track.confirmed && !track.entries.empty())
      finished.emplace_back(track.order, std::move(track.entries));
  };

  for (const auto& slice : slice_frames(detections)) {
    const int f = slice.frame;

    // Age out: a candidate missing any frame dies unseen; a confirmed track
    // beyond max_age retires.
    for (std::size_t i = live.size(); i-- > 0;) {
      const bool stale_candidate =
          !live[i].confirmed && live[i].last_frame < f - 1;
      const bool expired =
          live[i].confirmed && f - live[i].last_frame > params.max_age;
      if (stale_candidate || expired) {
        retire(live[i]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }

    // Greedy by IoU, ties toward older tracks then earlier detections.
    struct Pair {
      double iou;
      std::size_t track;
      std::size_t det;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = slice.begin; j < slice.end; ++j) {
        const double overlap = iou(live[i].last, detections[j].bbox);
        if (overlap >= params.iou_min)
          pairs.push_back({overlap, i, j - slice.begin});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      return std::tie(b.iou, a.track, a.det) < std::tie(a.iou, b.track, b.det);
    });

    std::vector<bool> track_taken(live.size(), false);
    std::vector<bool> det_taken(slice.end - slice.begin, false);
    for (const auto& pair : pairs) {
      if (track_taken[pair.track] || det_taken[pair.det]) continue;
      track_taken[pair.track] = true;
      det_taken[pair.det] = true;
      Live& track = live[pair.track];
      const Detection& det = detections[slice.begin + pair.det];
      track.last = det.bbox;
      track.last_frame = f;
      ++track.hits;
      if (!track.confirmed && track.hits >= params.min_hits) {
        track.confirmed = true;
        track.order = next_order++;
      }
      if (track.confirmed) track.entries.push_back({f, det.bbox});
    }

    for (std::size_t j = 0; j < det_taken.size(); ++j) {
      if (det_taken[j]) continue;
      const Detection& det = detections[slice.begin + j];
      Live track{det.bbox, f, 1, params.min_hits <= 1, -1, {}};
      if (track.confirmed) {
        track.order = next_order++;
        track.entries.push_back({f, det.bbox});
      }
      live.push_back(std::move(track));
    }
  }

  for (auto& track : live) retire(track);
  return number_tracks(std::move(finished));
}

namespace {

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat47 = Eigen::Matrix<double, 4, 7>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

// Measurement: box center, area, aspect ratio. Sizes are floored so a
// degenerate clamped detection cannot poison the aspect state.
Vec4 box_to_measurement(const BBox2D& box) {
  const double w = std::max(box.width(), 1e-3);
  const double h = std::max(box.height(), 1e-3);
  return {box.x_min + 0.5 * box.width(), box.y_min + 0.5 * box.height(),
          w * h, w / h};
}

BBox2D state_to_box(const Vec7& x) {
  const double s = std::max(x[2], 1e-6);
  const double r = std::max(x[3], 1e-6);
  const double w = std::sqrt(s * r);
  const double h = s / w;
  return {x[0] - 0.5 * w, x[1] - 0.5 * h, x[0] + 0.5 * w, x[1] + 0.5 * h};
}

struct Filter {
  Vec7 x;
  Mat7 P;

  static Filter start(const Vec4& z) {
    Filter f;
    f.x << z[0], z[1], z[2], z[3], 0.0, 0.0, 0.0;
    f.P = Mat7::Identity() * 10.0;
    f.P.block<3, 3>(4, 4) = Eigen::Matrix3d::Identity() * 1e4;
    return f;
  }

  void predict(const Mat7& F, const Mat7& Q) {
    if (x[2] + x[6] <= 0.0) x[6] = 0.0;  // keep predicted area positive
    x = F * x;
    P = F * P * F.transpose() + Q;
  }

  void update(const Vec4& z, const Mat47& H, const Mat4& R) {
    const Vec4 y = z - H * x;
    const Mat4 S = H * P * H.transpose() + R;
    const Eigen::Matrix<double, 7, 4> K =
        P * H.transpose() * S.llt().solve(Mat4::Identity());
    x += K * y;
    P = (Mat7::Identity() - K * H) * P;
  }
};

}  // namespace

TrackSet track_kalman(const DetectionSet& detections,
                      const KalmanTrackerParams& params) {
  check_params(params.iou_min, params.max_age, params.min_hits);
  if (!(params.process_noise > 0.0) || !(params.measurement_noise > 0.0))
    throw std::invalid_argument("tracker: noise scales must be positive");
  check_sorted(detections);
  if (detections.empty()) return {};

  Mat7 F = Mat7::Identity();
  F(0, 4) = F(1, 5) = F(2, 6) = 1.0;
  Mat7 Q = Mat7::Identity();
  Q(4, 4) = Q(5, 5) = 1e-2;
  Q(6, 6) = 1e-4;
  Q *= params.process_noise;
  Mat47 H = Mat47::Zero();
  H(0, 0) = H(1, 1) = H(2, 2) = H(3, 3) = 1.0;
  Mat4 R = Mat4::Identity();
  R(2, 2) = R(3, 3) = 10.0;
  R *= params.measurement_noise;

  struct Live {
    Filter filter;
    int last_match_frame;
    int hits;
    bool confirmed;
    int order;
    std::vector<TrackEntry> entries;
  };
  std::vector<Live> live;
  std::vector<std::pair<int, std::vector<TrackEntry>>> finished;
  int next_order = 0;

  auto retire = [&](Live& track) {
    if (track.confirmed && !track.entries.empty())
      finished.emplace_back(track.order, std::move(track.entries));
  };

  const auto slices = slice_frames(detections);
  std::size_t slice_index = 0;
  const int first_frame = detections.front().frame;
  const int last_frame = detections.back().frame;

  // Every frame in range steps the filters, whether or not detections exist,
  // so coasting covers gaps in real time.
  for (int f = first_frame; f <= last_frame; ++f) {
    for (std::size_t i = live.size(); i-- > 0;) {
      const bool stale_candidate =
          !live[i].confirmed && live[i].last_match_frame < f - 1;
      const bool expired =
          live[i].confirmed && f - live[i].last_match_frame > params.max_age;
      if (stale_candidate || expired) {
        retire(live[i]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    // The birth frame seeds the filter; prediction starts the frame after.
    for (auto& track : live)
      if (track.last_match_frame < f) track.filter.predict(F, Q);

    const bool have_slice =
        slice_index < slices.size() && slices[slice_index].frame == f;
    const std::size_t det_begin = have_slice ? slices[slice_index].begin : 0;
    const std::size_t det_count =
        have_slice ? slices[slice_index].end - slices[slice_index].begin : 0;
    if (have_slice) ++slice_index;

    std::vector<bool> det_taken(det_count, false);
    if (!live.empty() && det_count > 0) {
      std::vector<std::vector<double>> cost(
          live.size(), std::vector<double>(det_count, kForbiddenCost));
      for (std::size_t i = 0; i < live.size(); ++i) {
        const BBox2D predicted = state_to_box(live[i].filter.x);
        for (std::size_t j = 0; j < det_count; ++j) {
          const double overlap =
              iou(predicted, detections[det_begin + j].bbox);
          if (overlap >= params.iou_min) cost[i][j] = 1.0 - overlap;
        }
      }
      const Assignment assignment = hungarian(cost);
      for (std::size_t i = 0; i < live.size(); ++i) {
        const int j = assignment.row_to_col[i];
        if (j < 0 || cost[i][j] >= kForbiddenCost) continue;
        det_taken[j] = true;
        Live& track = live[i];
        const Detection& det = detections[det_begin + j];
        track.filter.update(box_to_measurement(det.bbox), H, R);
        track.last_match_frame = f;
        ++track.hits;
        if (!track.confirmed && track.hits >= params.min_hits) {
          track.confirmed = true;
          track.order = next_order++;
        }
        if (track.confirmed) track.entries.push_back({f, det.bbox});
      }
    }

    if (params.emit_predictions) {
      for (auto& track : live)
        if (track.confirmed && track.last_match_frame < f)
          track.entries.push_back({f, state_to_box(track.filter.x)});
    }

    for (std::size_t j = 0; j < det_count; ++j) {
      if (det_taken[j]) continue;
      const Detection& det = detections[det_begin + j];
      Live track{Filter::start(box_to_measurement(det.bbox)), f, 1,
                 params.min_hits <= 1, -1, {}};
      if (track.confirmed) {
        track.order = next_order++;
        track.entries.push_back({f, det.bbox});
      }
      live.push_back(std::move(track));
    }
  }

  for (auto& track : live) retire(track);
  return number_tracks(std::move(finished));
}

}  // namespace pedsim::track
