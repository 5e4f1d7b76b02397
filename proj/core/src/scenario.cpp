// SPDX-License-Identifier: Apache-2.0
#include "pedsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pedsim::scenario {

const char* to_string(EndBehavior b) {
  switch (b) {
    case EndBehavior::kLoop: return "loop";
    case EndBehavior::kReverse: return "reverse";
    case EndBehavior::kStop: return "stop";
  }
  return "?";
}

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kSyntax: return "syntax";
    case ViolationCode::kBadValue: return "bad-value";
    case ViolationCode::kMissingKey: return "missing-key";
    case ViolationCode::kUnknownKey: return "unknown-key";
    case ViolationCode::kDuplicateName: return "duplicate-name";
    case ViolationCode::kDanglingReference: return "dangling-reference";
    case ViolationCode::kNoGoals: return "no-goals";
    case ViolationCode::kInsufficientAreaGoals: return "insufficient-area-goals";
    case ViolationCode::kBadRange: return "bad-range";
    case ViolationCode::kDegenerateGeometry: return "degenerate-geometry";
  }
  return "?";
}

std::string Violation::str() const {
  std::ostringstream out;
  out << to_string(code);
  if (line > 0) {
    out << " at line " << line;
    if (column > 0) out << ":" << column;
  }
  if (!subject.empty()) out << " [" << subject << "]";
  out << ": " << message;
  return out.str();
}

const ContinuousPath* Scenario::find_path(const std::string& id) const {
  for (const auto& p : paths)
    if (p.id == id) return &p;
  return nullptr;
}

const PedestrianSpec* Scenario::find_pedestrian(const std::string& name) const {
  for (const auto& p : pedestrians)
    if (p.name == name) return &p;
  return nullptr;
}

const CameraSpec* Scenario::find_camera(const std::string& id) const {
  for (const auto& c : cameras)
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<int> Scenario::area_goal_indices(const std::string& area) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(target_points.size()); ++i)
    if (target_points[i].owner_tag.empty() && target_points[i].area == area)
      out.push_back(i);
  return out;
}

std::vector<int> Scenario::owned_goal_indices(
    const std::string& pedestrian) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(target_points.size()); ++i)
    if (target_points[i].owner_tag == pedestrian) out.push_back(i);
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
    return target_points[a].creation_index < target_points[b].creation_index;
  });
  return out;
}

namespace {

constexpr double kMinVertexSeparation = 0.01;  // meters

// Identifiers end up in config files, so characters the config syntax
// reserves would make a scenario unserializable.
bool clean_identifier(const std::string& id) {
  if (id.empty()) return false;
  return id.find_first_of("#[]=\n\r") == std::string::npos &&
         id.front() != ' ' && id.back() != ' ';
}

void check_identifier(const std::string& id, const char* kind,
                      std::vector<Violation>& out) {
  if (!clean_identifier(id))
    out.push_back({ViolationCode::kBadValue, id,
                   std::string(kind) +
                       " id must be nonempty and free of '#[]=' and"
                       " line breaks"});
}

void check_duplicates(const std::vector<std::string>& names,
                      const char* kind, std::vector<Violation>& out) {
  std::set<std::string> seen;
  std::set<std::string> reported;
  for (const auto& n : names) {
    if (!seen.insert(n).second && reported.insert(n).second)
      out.push_back({ViolationCode::kDuplicateName, n,
                     std::string(kind) + " name used more than once"});
  }
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&](ViolationCode code, std::string subject, std::string message) {
    out.push_back({code, std::move(subject), std::move(message)});
  };

  check_identifier(s.name, "scenario", out);
  for (const auto& o : s.obstacles) check_identifier(o.id, "obstacle", out);
  for (const auto& p : s.paths) check_identifier(p.id, "path", out);
  for (const auto& t : s.target_points) {
    check_identifier(t.id, "target point", out);
    if (!t.area.empty() && !clean_identifier(t.area))
      add(ViolationCode::kBadValue, t.id, "area tag holds reserved characters");
  }
  for (const auto& p : s.pedestrians) check_identifier(p.name, "pedestrian", out);
  for (const auto& c : s.cameras) check_identifier(c.id, "camera", out);
  if (s.duration_frames <= 0)
    add(ViolationCode::kBadRange, "duration_frames",
        "duration_frames must be positive");
  if (!(s.fps > 0.0))
    add(ViolationCode::kBadRange, "fps", "fps must be positive");

  {
    std::vector<std::string> ids;
    for (const auto& o : s.obstacles) ids.push_back(o.id);
    check_duplicates(ids, "obstacle", out);
  }
  for (const auto& o : s.obstacles) {
    if (!(o.min_corner.x < o.max_corner.x && o.min_corner.y < o.max_corner.y &&
          o.min_corner.z < o.max_corner.z))
      add(ViolationCode::kDegenerateGeometry, o.id,
          "obstacle min corner must be strictly below max corner"
          " componentwise");
  }

  {
    std::vector<std::string> ids;
    for (const auto& p : s.paths) ids.push_back(p.id);
    check_duplicates(ids, "path", out);
  }
  for (const auto& p : s.paths) {
    if (p.vertices.size() < 2) {
      add(ViolationCode::kDegenerateGeometry, p.id,
          "path needs at least 2 vertices");
      continue;
    }
    for (std::size_t i = 1; i < p.vertices.size(); ++i) {
      if ((p.vertices[i] - p.vertices[i - 1]).norm() <= kMinVertexSeparation) {
        add(ViolationCode::kDegenerateGeometry, p.id,
            "consecutive path vertices closer than 1 cm (vertex " +
                std::to_string(i) + ")");
        break;
      }
    }
  }

  {
    std::vector<std::string> ids;
    for (const auto& t : s.target_points) ids.push_back(t.id);
    check_duplicates(ids, "target point", out);
  }
  // creation_index unique per owner, owner must exist
  {
    std::set<std::pair<std::string, int>> seen;
    for (const auto& t : s.target_points) {
      if (t.owner_tag.empty()) continue;
      if (!seen.insert({t.owner_tag, t.creation_index}).second)
        add(ViolationCode::kDuplicateName, t.id,
            "creation index " + std::to_string(t.creation_index) +
                " already used for owner '" + t.owner_tag + "'");
      if (s.find_pedestrian(t.owner_tag) == nullptr)
        add(ViolationCode::kDanglingReference, t.id,
            "owner '" + t.owner_tag + "' is not a pedestrian");
    }
  }

  {
    std::vector<std::string> names;
    for (const auto& p : s.pedestrians) names.push_back(p.name);
    check_duplicates(names, "pedestrian", out);
  }
  for (const auto& ped : s.pedestrians) {
    if (!ped.spawn.finite())
      add(ViolationCode::kBadValue, ped.name, "spawn must be finite");
    if (!(ped.height >= 1.4 && ped.height <= 2.1))
      add(ViolationCode::kBadRange, ped.name,
          "height must lie in [1.4, 2.1] m");
    if (!(ped.radius > 0.0))
      add(ViolationCode::kBadRange, ped.name, "radius must be positive");
    if (!(ped.speed > 0.0))
      add(ViolationCode::kBadRange, ped.name, "speed must be positive");

    if (const auto* random = std::get_if<RandomTargets>(&ped.controller)) {
      const auto goals = s.area_goal_indices(random->area);
      if (goals.size() < 2)
        add(ViolationCode::kInsufficientAreaGoals, ped.name,
            "random-mode area '" + random->area + "' holds " +
                std::to_string(goals.size()) +
                " target points, needs at least 2");
    } else if (std::holds_alternative<CustomizedTargets>(ped.controller)) {
      if (s.owned_goal_indices(ped.name).empty())
        add(ViolationCode::kNoGoals, ped.name,
            "customized-mode pedestrian owns no tagged target points");
    } else if (const auto* follow = std::get_if<FollowPath>(&ped.controller)) {
      if (s.find_path(follow->path_id) == nullptr)
        add(ViolationCode::kDanglingReference, ped.name,
            "controller references unknown path '" + follow->path_id + "'");
    }
  }

  {
    std::vector<std::string> ids;
    for (const auto& c : s.cameras) ids.push_back(c.id);
    check_duplicates(ids, "camera", out);
  }
  for (const auto& cam : s.cameras) {
    if (cam.intrinsics.width_px <= 0 || cam.intrinsics.height_px <= 0)
      add(ViolationCode::kBadRange, cam.id, "resolution must be positive");
    if (!(cam.intrinsics.hfov_rad > 0.0 && cam.intrinsics.hfov_rad < 3.15))
      add(ViolationCode::kBadRange, cam.id, "hfov must be in (0, pi)");
    if (const auto* drone = std::get_if<DroneMount>(&cam.mount)) {
      if (drone->waypoints.size() < 2)
        add(ViolationCode::kDegenerateGeometry, cam.id,
            "drone mount needs at least 2 waypoints");
      for (std::size_t i = 1; i < drone->waypoints.size(); ++i) {
        if ((drone->waypoints[i] - drone->waypoints[i - 1]).norm() <=
            kMinVertexSeparation) {
          add(ViolationCode::kDegenerateGeometry, cam.id,
              "consecutive drone waypoints closer than 1 cm (waypoint " +
                  std::to_string(i) + ")");
          break;
        }
      }
      if (!(drone->speed > 0.0))
        add(ViolationCode::kBadRange, cam.id, "drone speed must be positive");
    } else if (const auto* ego = std::get_if<EgocentricMount>(&cam.mount)) {
      if (s.find_pedestrian(ego->pedestrian) == nullptr)
        add(ViolationCode::kDanglingReference, cam.id,
            "egocentric mount references unknown pedestrian '" +
                ego->pedestrian + "'");
    }
  }

  for (auto& v : validate_degradation(s.degradation)) out.push_back(std::move(v));

  return out;
}

std::vector<Violation> validate_degradation(const DegradationSpec& d) {
  std::vector<Violation> out;
  auto add = [&](std::string subject, std::string message) {
    out.push_back({ViolationCode::kBadRange, std::move(subject),
                   std::move(message)});
  };
  if (!(d.fog_extinction >= 0.0)) add("fog_extinction", "must be >= 0");
  if (!(d.base_detect_prob >= 0.0 && d.base_detect_prob <= 1.0))
    add("base_detect_prob", "must lie in [0, 1]");
  if (!(d.night_factor >= 0.0 && d.night_factor <= 1.0))
    add("night_factor", "must lie in [0, 1]");
  if (!(d.bbox_noise_sigma >= 0.0)) add("bbox_noise_sigma", "must be >= 0");
  if (!(d.false_positive_rate >= 0.0))
    add("false_positive_rate", "must be >= 0");
  if (!(d.visibility_exponent >= 0.0))
    add("visibility_exponent", "must be >= 0");
  return out;
}

}  // namespace pedsim::scenario
