// SPDX-License-Identifier: Apache-2.0
#include "pedsim/mot_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace pedsim::mot {

namespace {

constexpr std::size_t kFieldCount = 10;

std::string format_double(double value) {
  std::array<char, 32> buf;
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

void append_row(std::string& out, int frame, int id, const BBox2D& box,
                double score) {
  out += std::to_string(frame + 1);
  out += ',';
  out += std::to_string(id);
  out += ',';
  out += format_double(box.x_min);
  out += ',';
  out += format_double(box.y_min);
  out += ',';
  out += format_double(box.width());
  out += ',';
  out += format_double(box.height());
  out += ',';
  out += format_double(score);
  out += ",-1,-1,-1\n";
}

[[noreturn]] void fail(std::size_t line, const std::string& reason) {
  throw std::runtime_error("mot: line " + std::to_string(line) + ": " +
                           reason);
}

struct Row {
  int frame;  // 0-based
  int id;
  BBox2D box;
  double score;
};

long long parse_int(std::string_view field, std::size_t line) {
  long long value = 0;
  const auto result =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc{} || result.ptr != field.data() + field.size())
    fail(line, "expected an integer, got '" + std::string(field) + "'");
  return value;
}

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto result =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc{} || result.ptr != field.data() + field.size())
    fail(line, "expected a number, got '" + std::string(field) + "'");
  if (!std::isfinite(value)) fail(line, "non-finite value");
  return value;
}

Row parse_row(std::string_view line_text, std::size_t line) {
  std::array<std::string_view, kFieldCount> fields;
  std::size_t count = 0;
  while (true) {
    const std::size_t comma = line_text.find(',');
    if (count == kFieldCount) fail(line, "expected 10 comma-separated fields");
    fields[count++] = line_text.substr(0, comma);
    if (comma == std::string_view::npos) break;
    line_text.remove_prefix(comma + 1);
  }
  if (count != kFieldCount) fail(line, "expected 10 comma-separated fields");

  const long long frame = parse_int(fields[0], line);
  if (frame < 1) fail(line, "frame numbers start at 1");
  const long long id = parse_int(fields[1], line);
  const double x = parse_double(fields[2], line);
  const double y = parse_double(fields[3], line);
  const double w = parse_double(fields[4], line);
  const double h = parse_double(fields[5], line);
  if (w < 0.0 || h < 0.0) fail(line, "negative box size");
  const double score = parse_double(fields[6], line);
  for (std::size_t i = 7; i < kFieldCount; ++i) parse_double(fields[i], line);
  return {static_cast<int>(frame) - 1, static_cast<int>(id),
          {x, y, x + w, y + h}, score};
}

template <typename Fn>
void for_each_row(std::string_view text, Fn&& fn) {
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const std::size_t newline = text.find('\n');
    std::string_view line_text = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos
                           ? text.size()
                           : newline + 1);
    if (!line_text.empty() && line_text.back() == '\r')
      line_text.remove_suffix(1);
    if (line_text.empty()) continue;
    fn(parse_row(line_text, line), line);
  }
}

}  // namespace

std::string detections_to_mot(const detect::DetectionSet& detections) {
  std::vector<std::size_t> order(detections.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return detections[a].frame < detections[b].frame;
                   });
  std::string out;
  for (const std::size_t i : order)
    append_row(out, detections[i].frame, -1, detections[i].bbox,
               detections[i].score);
  return out;
}

detect::DetectionSet detections_from_mot(std::string_view text) {
  detect::DetectionSet detections;
  for_each_row(text, [&](const Row& row, std::size_t) {
    detections.push_back({row.frame, row.box, row.score});
  });
  std::stable_sort(detections.begin(), detections.end(),
                   [](const detect::Detection& a, const detect::Detection& b) {
                     return a.frame < b.frame;
                   });
  return detections;
}

std::string tracks_to_mot(const track::TrackSet& tracks) {
  struct Cell {
    int frame;
    int id;
    const BBox2D* box;
  };
  std::vector<Cell> cells;
  for (const auto& track : tracks)
    for (const auto& entry : track.entries)
      cells.push_back({entry.frame, track.id, &entry.bbox});
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::string out;
  for (const auto& cell : cells) append_row(out, cell.frame, cell.id, *cell.box, 1.0);
  return out;
}

track::TrackSet tracks_from_mot(std::string_view text) {
  std::map<int, std::vector<track::TrackEntry>> by_id;
  std::map<int, std::unordered_set<int>> seen_frames;
  for_each_row(text, [&](const Row& row, std::size_t line) {
    if (row.id < 1) fail(line, "track ids start at 1");
    if (!seen_frames[row.id].insert(row.frame).second)
      fail(line, "duplicate frame for id " + std::to_string(row.id));
    by_id[row.id].push_back({row.frame, row.box});
  });
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

}  // namespace pedsim::mot
