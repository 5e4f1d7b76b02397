// SPDX-License-Identifier: Apache-2.0
#include "pedsim/annotate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace pedsim::annotate {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRayEps = 1e-6;  // fractional slack at both ray segment ends

double component(const Vec3& v, int axis) {
  switch (axis) {
    case 0: return v.x;
    case 1: return v.y;
    default: return v.z;
  }
}

}  // namespace

std::vector<Vec3> cylinder_samples(const Cylinder& cylinder,
                                   const Vec3& camera_position) {
  // Rim phase sits half a step off the axis->camera bearing, so samples
  // straddle both silhouette tangents and the nearest generator
  // symmetrically. atan2(0, 0) == 0 keeps the degenerate overhead view
  // deterministic.
  const double bearing = std::atan2(camera_position.y - cylinder.base.y,
                                    camera_position.x - cylinder.base.x);
  const double step = 2.0 * kPi / kRimSamples;
  const Vec3 up{0.0, 0.0, -cylinder.height};

  std::vector<Vec3> points;
  points.reserve(kSampleCount);
  for (int ring = 0; ring < 2; ++ring) {
    for (int k = 0; k < kRimSamples; ++k) {
      const double angle = bearing + (k + 0.5) * step;
      Vec3 p{cylinder.base.x + cylinder.radius * std::cos(angle),
             cylinder.base.y + cylinder.radius * std::sin(angle),
             cylinder.base.z};
      if (ring == 1) p = p + up;
      points.push_back(p);
    }
  }
  points.push_back(cylinder.base);
  points.push_back(cylinder.base + up);
  return points;
}

ProjectionResult project_pedestrian(const Cylinder& cylinder,
                                    const Pose& camera_pose,
                                    const CameraIntrinsics& intrinsics) {
  ProjectionResult result;
  result.samples = cylinder_samples(cylinder, camera_pose.position);
  result.projections.reserve(result.samples.size());

  const double w = intrinsics.width_px;
  const double h = intrinsics.height_px;
  bool any = false;
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  for (const Vec3& p : result.samples) {
    const Vec3 p_cam = geom::world_to_camera(p, camera_pose);
    const auto pixel = geom::project(p_cam, intrinsics);
    if (pixel) {
      any = true;
      x0 = std::min(x0, pixel->u);
      y0 = std::min(y0, pixel->v);
      x1 = std::max(x1, pixel->u);
      y1 = std::max(y1, pixel->v);
      if (pixel->u >= 0.0 && pixel->u <= w && pixel->v >= 0.0 && pixel->v <= h)
        ++result.in_frustum;
    }
    result.projections.push_back(pixel);
  }

  if (any) result.unclamped = {x0, y0, x1, y1};
  if (result.in_frustum > 0) {
    const BBox2D clamped = result.unclamped.clamped(w, h);
    result.truncated = !(clamped == result.unclamped);
    result.bbox = clamped;
  }
  return result;
}

std::optional<double> ray_aabb_hit(const Vec3& origin, const Vec3& dir,
                                   const Vec3& box_min, const Vec3& box_max,
                                   double t_min, double t_max) {
  double t0 = t_min;
  double t1 = t_max;
  for (int axis = 0; axis < 3; ++axis) {
    const double o = component(origin, axis);
    const double d = component(dir, axis);
    const double lo = component(box_min, axis);
    const double hi = component(box_max, axis);
    if (d == 0.0) {
      if (o < lo || o > hi) return std::nullopt;
      continue;
    }
    double ta = (lo - o) / d;
    double tb = (hi - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return t0;
}

std::optional<double> ray_cylinder_hit(const Vec3& origin, const Vec3& dir,
                                       const Cylinder& cylinder, double t_min,
                                       double t_max) {
  const double z_top = cylinder.base.z - cylinder.height;
  const double z_bottom = cylinder.base.z;
  const double r2 = cylinder.radius * cylinder.radius;
  const double ox = origin.x - cylinder.base.x;
  const double oy = origin.y - cylinder.base.y;

  std::optional<double> best;
  auto consider = [&](double t) {
    if (t < t_min || t > t_max) return;
    if (!best || t < *best) best = t;
  };

  // Matches the box convention: starting inside the solid reports t_min.
  const double sz = origin.z + t_min * dir.z;
  const double sx = ox + t_min * dir.x;
  const double sy = oy + t_min * dir.y;
  if (sx * sx + sy * sy <= r2 && sz >= z_top && sz <= z_bottom) return t_min;

  // Lateral surface: quadratic in the horizontal plane, z range checked.
  const double a = dir.x * dir.x + dir.y * dir.y;
  if (a > 0.0) {
    const double b = 2.0 * (ox * dir.x + oy * dir.y);
    const double c = ox * ox + oy * oy - r2;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      for (const double t : {(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)}) {
        const double z = origin.z + t * dir.z;
        if (z >= z_top && z <= z_bottom) consider(t);
      }
    }
  }

  // End caps.
  if (dir.z != 0.0) {
    for (const double zc : {z_top, z_bottom}) {
      const double t = (zc - origin.z) / dir.z;
      const double px = ox + t * dir.x;
      const double py = oy + t * dir.y;
      if (px * px + py * py <= r2) consider(t);
    }
  }
  return best;
}

double compute_visibility(const ProjectionResult& projection,
                          const CameraIntrinsics& intrinsics,
                          const Pose& camera_pose,
                          const std::vector<scenario::Obstacle>& obstacles,
                          const std::vector<Cylinder>& other_pedestrians) {
  const double w = intrinsics.width_px;
  const double h = intrinsics.height_px;
  int visible = 0;
  for (std::size_t i = 0; i < projection.samples.size(); ++i) {
    const auto& pixel = projection.projections[i];
    if (!pixel) continue;
    if (pixel->u < 0.0 || pixel->u > w || pixel->v < 0.0 || pixel->v > h)
      continue;
    const Vec3 dir = projection.samples[i] - camera_pose.position;
    bool blocked = false;
    for (const auto& box : obstacles) {
      if (ray_aabb_hit(camera_pose.position, dir, box.min_corner,
                       box.max_corner, kRayEps, 1.0 - kRayEps)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) {
      for (const auto& cylinder : other_pedestrians) {
        if (ray_cylinder_hit(camera_pose.position, dir, cylinder, kRayEps,
                             1.0 - kRayEps)) {
          blocked = true;
          break;
        }
      }
    }
    if (!blocked) ++visible;
  }
  return static_cast<double>(visible) / kSampleCount;
}

std::vector<std::pair<std::string, int>> stable_ids(
    const scenario::Scenario& scenario) {
  std::vector<std::string> names;
  names.reserve(scenario.pedestrians.size());
  for (const auto& ped : scenario.pedestrians) names.push_back(ped.name);
  std::sort(names.begin(), names.end());
  std::vector<std::pair<std::string, int>> ids;
  ids.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i)
    ids.emplace_back(std::move(names[i]), static_cast<int>(i) + 1);
  return ids;
}

namespace {

int id_of(const std::vector<std::pair<std::string, int>>& ids,
          const std::string& name) {
  for (const auto& [n, id] : ids)
    if (n == name) return id;
  throw std::invalid_argument("no stable id for pedestrian '" + name + "'");
}

const sim::PedestrianState& state_of(const sim::Tick& tick,
                                     const std::string& name) {
  for (const auto& state : tick.pedestrians)
    if (state.name == name) return state;
  throw std::invalid_argument("trace frame " + std::to_string(tick.frame) +
                              " lacks pedestrian '" + name + "'");
}

const sim::CameraPoseSample& camera_sample(const sim::Tick& tick,
                                           const std::string& camera_id) {
  for (const auto& cam : tick.cameras)
    if (cam.id == camera_id) return cam;
  throw std::invalid_argument("trace frame " + std::to_string(tick.frame) +
                              " lacks camera '" + camera_id + "'");
}

// Carrier pedestrian of an egocentric mount; empty for other mounts. The
// carrier is invisible to its own camera and never occludes it.
std::string carrier_of(const scenario::CameraSpec& camera) {
  if (const auto* ego = std::get_if<scenario::EgocentricMount>(&camera.mount))
    return ego->pedestrian;
  return {};
}

}  // namespace

InstanceMask render_instance_mask(const scenario::Scenario& scenario,
                                  const sim::Tick& tick,
                                  const std::string& camera_id,
                                  int mask_width, int mask_height) {
  if (mask_width <= 0 || mask_height <= 0)
    throw std::invalid_argument("mask raster must be positive");
  const scenario::CameraSpec* camera = scenario.find_camera(camera_id);
  if (camera == nullptr)
    throw std::invalid_argument("unknown camera '" + camera_id + "'");
  const Pose pose = camera_sample(tick, camera_id).pose;
  const std::string carrier = carrier_of(*camera);
  const auto ids = stable_ids(scenario);

  struct Body {
    Cylinder cylinder;
    std::uint8_t label;
  };
  std::vector<Body> bodies;
  bodies.reserve(scenario.pedestrians.size());
  for (const auto& spec : scenario.pedestrians) {
    if (spec.name == carrier) continue;
    const int id = id_of(ids, spec.name);
    if (id > 255)
      throw std::length_error("instance mask labels are 8-bit; pedestrian id " +
                              std::to_string(id) + " does not fit");
    const auto& state = state_of(tick, spec.name);
    bodies.push_back(Body{{state.position, spec.height, spec.radius},
                          static_cast<std::uint8_t>(id)});
  }

  const auto& k = camera->intrinsics;
  const double scale_u = static_cast<double>(k.width_px) / mask_width;
  const double scale_v = static_cast<double>(k.height_px) / mask_height;
  const geom::Quat world_from_optical =
      pose.orientation * geom::kBodyFromOptical;
  const Vec3 col_x = world_from_optical.rotate({1.0, 0.0, 0.0});
  const Vec3 col_y = world_from_optical.rotate({0.0, 1.0, 0.0});
  const Vec3 col_z = world_from_optical.rotate({0.0, 0.0, 1.0});
  constexpr double kFar = std::numeric_limits<double>::infinity();

  InstanceMask mask;
  mask.width = mask_width;
  mask.height = mask_height;
  mask.labels.assign(static_cast<std::size_t>(mask_width) * mask_height, 0);

  for (int py = 0; py < mask_height; ++py) {
    for (int px = 0; px < mask_width; ++px) {
      const double u = (px + 0.5) * scale_u;
      const double v = (py + 0.5) * scale_v;
      // Optical-frame direction with unit forward component, so the ray
      // parameter equals optical depth and shares the projection near plane.
      const double dx = (u - k.cx) / k.fx;
      const double dy = (v - k.cy) / k.fy;
      const Vec3 dir = dx * col_x + dy * col_y + col_z;

      double nearest = kFar;
      std::uint8_t label = 0;
      for (const auto& box : scenario.obstacles) {
        const auto t = ray_aabb_hit(pose.position, dir, box.min_corner,
                                    box.max_corner, geom::kZNear, kFar);
        if (t && *t < nearest) {
          nearest = *t;
          label = 0;
        }
      }
      for (const auto& body : bodies) {
        const auto t = ray_cylinder_hit(pose.position, dir, body.cylinder,
                                        geom::kZNear, kFar);
        if (t && *t < nearest) {
          nearest = *t;
          label = body.label;
        }
      }
      mask.labels[static_cast<std::size_t>(py) * mask_width + px] = label;
    }
  }
  return mask;
}

std::string mask_to_pgm(const InstanceMask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " +
                    std::to_string(mask.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(mask.labels.data()),
             mask.labels.size());
  return out;
}

AnnotationSequence annotate_trace(const sim::SimTrace& trace,
                                  const scenario::Scenario& scenario,
                                  const std::string& camera_id) {
  const scenario::CameraSpec* camera = scenario.find_camera(camera_id);
  if (camera == nullptr)
    throw std::invalid_argument("unknown camera '" + camera_id + "'");
  if (trace.scenario != scenario.name)
    throw std::invalid_argument("trace belongs to scenario '" + trace.scenario +
                                "', not '" + scenario.name + "'");
  if (trace.ticks.empty())
    throw std::invalid_argument("trace has no ticks");

  const std::string carrier = carrier_of(*camera);
  const auto ids = stable_ids(scenario);
  const auto& intrinsics = camera->intrinsics;
  const Pose initial_pose = camera_sample(trace.ticks.front(), camera_id).pose;

  AnnotationSequence sequence;
  sequence.scenario = trace.scenario;
  sequence.camera_id = camera_id;
  sequence.fps = trace.fps;
  sequence.seed = trace.seed;
  sequence.intrinsics = intrinsics;
  sequence.frames.reserve(trace.ticks.size());

  for (const auto& tick : trace.ticks) {
    const Pose pose = camera_sample(tick, camera_id).pose;

    FrameAnnotation frame;
    frame.frame = tick.frame;
    frame.timestamp_s = tick.timestamp_s;
    frame.camera_pose_world = pose;
    frame.camera_pose_relative_initial =
        geom::relative_to_initial(pose, initial_pose);

    for (const auto& spec : scenario.pedestrians) {
      if (spec.name == carrier) continue;
      const auto& state = state_of(tick, spec.name);
      const Cylinder cylinder{state.position, spec.height, spec.radius};
      const auto projection =
          project_pedestrian(cylinder, pose, intrinsics);
      if (!projection.bbox) continue;

      std::vector<Cylinder> others;
      others.reserve(scenario.pedestrians.size());
      for (const auto& other : scenario.pedestrians) {
        if (other.name == spec.name || other.name == carrier) continue;
        const auto& other_state = state_of(tick, other.name);
        others.push_back(
            Cylinder{other_state.position, other.height, other.radius});
      }
      const double visibility = compute_visibility(
          projection, intrinsics, pose, scenario.obstacles, others);
      if (visibility <= 0.0) continue;

      PedestrianAnnotation entry;
      entry.id = id_of(ids, spec.name);
      entry.name = spec.name;
      entry.position_3d = state.position;
      const Vec3 mid = state.position + Vec3{0.0, 0.0, -0.5 * spec.height};
      entry.distance_m = (pose.position - mid).norm();
      entry.bbox = *projection.bbox;
      entry.visibility = visibility;
      entry.truncated = projection.truncated;
      frame.pedestrians.push_back(std::move(entry));
    }
    std::sort(frame.pedestrians.begin(), frame.pedestrians.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    sequence.frames.push_back(std::move(frame));
  }
  return sequence;
}

namespace {

using json = nlohmann::ordered_json;

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error("annotation: expected [n, e, d] triple");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json pose_json(const Pose& pose) {
  json j;
  j["position"] = vec_json(pose.position);
  j["quaternion"] =
      json::array({pose.orientation.w, pose.orientation.x, pose.orientation.y,
                   pose.orientation.z});
  return j;
}

Pose pose_from(const json& j) {
  Pose pose;
  pose.position = vec_from(j.at("position"));
  const auto& q = j.at("quaternion");
  if (!q.is_array() || q.size() != 4)
    throw std::runtime_error("annotation: quaternion needs 4 entries");
  pose.orientation = {q[0].get<double>(), q[1].get<double>(),
                      q[2].get<double>(), q[3].get<double>()};
  return pose;
}

}  // namespace

std::string annotation_to_json(const AnnotationSequence& sequence) {
  json root;
  root["format_version"] = 1;
  root["scenario"] = sequence.scenario;
  root["camera_id"] = sequence.camera_id;
  root["fps"] = sequence.fps;
  root["seed"] = sequence.seed;
  json k;
  k["width"] = sequence.intrinsics.width_px;
  k["height"] = sequence.intrinsics.height_px;
  k["hfov_rad"] = sequence.intrinsics.hfov_rad;
  k["fx"] = sequence.intrinsics.fx;
  k["fy"] = sequence.intrinsics.fy;
  k["cx"] = sequence.intrinsics.cx;
  k["cy"] = sequence.intrinsics.cy;
  root["intrinsics"] = std::move(k);

  json frames = json::array();
  for (const auto& frame : sequence.frames) {
    json f;
    f["frame"] = frame.frame;
    f["timestamp_s"] = frame.timestamp_s;
    f["camera_pose_world"] = pose_json(frame.camera_pose_world);
    f["camera_pose_relative_initial"] =
        pose_json(frame.camera_pose_relative_initial);
    json peds = json::array();
    for (const auto& ped : frame.pedestrians) {
      json p;
      p["id"] = ped.id;
      p["name"] = ped.name;
      p["position_3d"] = vec_json(ped.position_3d);
      p["distance_m"] = ped.distance_m;
      p["bbox"] = json::array(
          {ped.bbox.x_min, ped.bbox.y_min, ped.bbox.x_max, ped.bbox.y_max});
      p["visibility"] = ped.visibility;
      p["truncated"] = ped.truncated;
      peds.push_back(std::move(p));
    }
    f["pedestrians"] = std::move(peds);
    frames.push_back(std::move(f));
  }
  root["frames"] = std::move(frames);
  return root.dump();
}

AnnotationSequence annotation_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("annotation: not valid JSON: ") +
                             err.what());
  }
  try {
    if (root.at("format_version").get<int>() != 1)
      throw std::runtime_error("annotation: unsupported format_version");
    AnnotationSequence sequence;
    sequence.scenario = root.at("scenario").get<std::string>();
    sequence.camera_id = root.at("camera_id").get<std::string>();
    sequence.fps = root.at("fps").get<double>();
    sequence.seed = root.at("seed").get<std::uint64_t>();
    const auto& k = root.at("intrinsics");
    sequence.intrinsics.width_px = k.at("width").get<int>();
    sequence.intrinsics.height_px = k.at("height").get<int>();
    sequence.intrinsics.hfov_rad = k.at("hfov_rad").get<double>();
    sequence.intrinsics.fx = k.at("fx").get<double>();
    sequence.intrinsics.fy = k.at("fy").get<double>();
    sequence.intrinsics.cx = k.at("cx").get<double>();
    sequence.intrinsics.cy = k.at("cy").get<double>();
    for (const auto& f : root.at("frames")) {
      FrameAnnotation frame;
      frame.frame = f.at("frame").get<int>();
      frame.timestamp_s = f.at("timestamp_s").get<double>();
      frame.camera_pose_world = pose_from(f.at("camera_pose_world"));
      frame.camera_pose_relative_initial =
          pose_from(f.at("camera_pose_relative_initial"));
      for (const auto& p : f.at("pedestrians")) {
        PedestrianAnnotation ped;
        ped.id = p.at("id").get<int>();
        ped.name = p.at("name").get<std::string>();
        ped.position_3d = vec_from(p.at("position_3d"));
        ped.distance_m = p.at("distance_m").get<double>();
        const auto& box = p.at("bbox");
        if (!box.is_array() || box.size() != 4)
          throw std::runtime_error("annotation: bbox needs 4 entries");
        ped.bbox = {box[0].get<double>(), box[1].get<double>(),
                    box[2].get<double>(), box[3].get<double>()};
        ped.visibility = p.at("visibility").get<double>();
        ped.truncated = p.at("truncated").get<bool>();
        frame.pedestrians.push_back(std::move(ped));
      }
      sequence.frames.push_back(std::move(frame));
    }
    return sequence;
  } catch (const json::exception& err) {
    throw std::runtime_error(std::string("annotation: malformed document: ") +
                             err.what());
  }
}

namespace {

// Appends a problem string; all validator helpers funnel through here so the
// report keeps source order.
struct SchemaCheck {
  std::vector<std::string> problems;

  void add(const std::string& where, const std::string& what) {
    problems.push_back(where + ": " + what);
  }

  bool require_number(const json& obj, const std::string& where,
                      const char* key) {
    if (!obj.contains(key)) {
      add(where, std::string("missing key '") + key + "'");
      return false;
    }
    if (!obj.at(key).is_number()) {
      add(where + "." + key, "expected a number");
      return false;
    }
    return true;
  }

  bool require_int(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) {
      add(where, std::string("missing key '") + key + "'");
      return false;
    }
    if (!obj.at(key).is_number_integer()) {
      add(where + "." + key, "expected an integer");
      return false;
    }
    return true;
  }

  bool require_string(const json& obj, const std::string& where,
                      const char* key) {
    if (!obj.contains(key)) {
      add(where, std::string("missing key '") + key + "'");
      return false;
    }
    if (!obj.at(key).is_string()) {
      add(where + "." + key, "expected a string");
      return false;
    }
    return true;
  }

  bool require_bool(const json& obj, const std::string& where,
                    const char* key) {
    if (!obj.contains(key)) {
      add(where, std::string("missing key '") + key + "'");
      return false;
    }
    if (!obj.at(key).is_boolean()) {
      add(where + "." + key, "expected a boolean");
      return false;
    }
    return true;
  }

  void check_number_array(const json& obj, const std::string& where,
                          const char* key, std::size_t count) {
    if (!obj.contains(key)) {
      add(where, std::string("missing key '") + key + "'");
      return;
    }
    const auto& arr = obj.at(key);
    if (!arr.is_array() || arr.size() != count) {
      add(where + "." + key,
          "expected an array of " + std::to_string(count) + " numbers");
      return;
    }
    for (const auto& e : arr) {
      if (!e.is_number()) {
        add(where + "." + key, "expected an array of numbers");
        return;
      }
    }
  }

  void check_pose(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) {
      add(where, std::string("missing key '") + key + "'");
      return;
    }
    const auto& pose = obj.at(key);
    if (!pose.is_object()) {
      add(where + "." + key, "expected an object");
      return;
    }
    const std::string sub = where + "." + key;
    check_number_array(pose, sub, "position", 3);
    check_number_array(pose, sub, "quaternion", 4);
    check_unknown(pose, sub, {"position", "quaternion"});
  }

  void check_unknown(const json& obj, const std::string& where,
                     std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
      bool found = false;
      for (const char* k : known)
        if (key == k) found = true;
      if (!found) add(where, "unknown key '" + key + "'");
    }
  }
};

}  // namespace

std::vector<std::string> validate_annotation_json(std::string_view text) {
  SchemaCheck check;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    check.add("document", std::string("not valid JSON: ") + err.what());
    return std::move(check.problems);
  }
  if (!root.is_object()) {
    check.add("document", "expected a JSON object");
    return std::move(check.problems);
  }

  if (check.require_int(root, "document", "format_version") &&
      root.at("format_version").get<int>() != 1)
    check.add("document.format_version", "expected 1");
  check.require_string(root, "document", "scenario");
  check.require_string(root, "document", "camera_id");
  if (check.require_number(root, "document", "fps") &&
      !(root.at("fps").get<double>() > 0.0))
    check.add("document.fps", "expected a positive number");
  if (root.contains("seed") && !root.at("seed").is_number_unsigned())
    check.add("document.seed", "expected an unsigned integer");
  else if (!root.contains("seed"))
    check.add("document", "missing key 'seed'");

  double image_w = 0.0;
  double image_h = 0.0;
  if (!root.contains("intrinsics") || !root.at("intrinsics").is_object()) {
    check.add("document", "missing or non-object 'intrinsics'");
  } else {
    const auto& k = root.at("intrinsics");
    if (check.require_int(k, "intrinsics", "width") &&
        k.at("width").get<int>() <= 0)
      check.add("intrinsics.width", "expected a positive integer");
    if (check.require_int(k, "intrinsics", "height") &&
        k.at("height").get<int>() <= 0)
      check.add("intrinsics.height", "expected a positive integer");
    check.require_number(k, "intrinsics", "hfov_rad");
    check.require_number(k, "intrinsics", "fx");
    check.require_number(k, "intrinsics", "fy");
    check.require_number(k, "intrinsics", "cx");
    check.require_number(k, "intrinsics", "cy");
    check.check_unknown(k, "intrinsics",
                        {"width", "height", "hfov_rad", "fx", "fy", "cx", "cy"});
    if (k.contains("width") && k.at("width").is_number_integer())
      image_w = k.at("width").get<int>();
    if (k.contains("height") && k.at("height").is_number_integer())
      image_h = k.at("height").get<int>();
  }

  check.check_unknown(root, "document",
                      {"format_version", "scenario", "camera_id", "fps", "seed",
                       "intrinsics", "frames"});

  if (!root.contains("frames") || !root.at("frames").is_array()) {
    check.add("document", "missing or non-array 'frames'");
    return std::move(check.problems);
  }

  int index = 0;
  for (const auto& frame : root.at("frames")) {
    const std::string where = "frames[" + std::to_string(index++) + "]";
    if (!frame.is_object()) {
      check.add(where, "expected an object");
      continue;
    }
    if (check.require_int(frame, where, "frame") &&
        frame.at("frame").get<int>() < 0)
      check.add(where + ".frame", "expected a non-negative integer");
    check.require_number(frame, where, "timestamp_s");
    check.check_pose(frame, where, "camera_pose_world");
    check.check_pose(frame, where, "camera_pose_relative_initial");
    check.check_unknown(frame, where,
                        {"frame", "timestamp_s", "camera_pose_world",
                         "camera_pose_relative_initial", "pedestrians"});
    if (!frame.contains("pedestrians") ||
        !frame.at("pedestrians").is_array()) {
      check.add(where, "missing or non-array 'pedestrians'");
      continue;
    }
    int ped_index = 0;
    for (const auto& ped : frame.at("pedestrians")) {
      const std::string pw =
          where + ".pedestrians[" + std::to_string(ped_index++) + "]";
      if (!ped.is_object()) {
        check.add(pw, "expected an object");
        continue;
      }
      if (check.require_int(ped, pw, "id") && ped.at("id").get<int>() < 1)
        check.add(pw + ".id", "expected a positive integer");
      if (check.require_string(ped, pw, "name") &&
          ped.at("name").get<std::string>().empty())
        check.add(pw + ".name", "expected a non-empty string");
      check.check_number_array(ped, pw, "position_3d", 3);
      if (check.require_number(ped, pw, "distance_m") &&
          !(ped.at("distance_m").get<double>() >= 0.0))
        check.add(pw + ".distance_m", "expected a non-negative number");
      check.check_number_array(ped, pw, "bbox", 4);
      if (ped.contains("bbox") && ped.at("bbox").is_array() &&
          ped.at("bbox").size() == 4 && ped.at("bbox")[0].is_number() &&
          ped.at("bbox")[1].is_number() && ped.at("bbox")[2].is_number() &&
          ped.at("bbox")[3].is_number()) {
        const double bx0 = ped.at("bbox")[0].get<double>();
        const double by0 = ped.at("bbox")[1].get<double>();
        const double bx1 = ped.at("bbox")[2].get<double>();
        const double by1 = ped.at("bbox")[3].get<double>();
        if (!(bx0 <= bx1) || !(by0 <= by1))
          check.add(pw + ".bbox", "expected min <= max");
        else if (image_w > 0.0 && image_h > 0.0 &&
                 (bx0 < 0.0 || by0 < 0.0 || bx1 > image_w || by1 > image_h))
          check.add(pw + ".bbox", "extends beyond the image");
      }
      if (check.require_number(ped, pw, "visibility")) {
        const double vis = ped.at("visibility").get<double>();
        if (!(vis > 0.0) || vis > 1.0)
          check.add(pw + ".visibility", "expected a value in (0, 1]");
      }
      check.require_bool(ped, pw, "truncated");
      check.check_unknown(ped, pw,
                          {"id", "name", "position_3d", "distance_m", "bbox",
                           "visibility", "truncated"});
    }
  }
  return std::move(check.problems);
}

}  // namespace pedsim::annotate
