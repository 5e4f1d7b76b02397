// SPDX-License-Identifier: Apache-2.0
#include "pedsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pedsim::sim {

namespace {

using scenario::ContinuousPath;
using scenario::CustomizedTargets;
using scenario::DroneMount;
using scenario::EgocentricMount;
using scenario::EndBehavior;
using scenario::FollowPath;
using scenario::RandomTargets;
using scenario::StaticMount;

// Resolved goal drive for one pedestrian: the ordered goal positions plus
// what happens when the list runs out.
struct GoalPlan {
  std::vector<Vec3> goals;
  EndBehavior end = EndBehavior::kLoop;
  bool is_path = false;
};

GoalPlan resolve_plan(const PedestrianSpec& spec, const Scenario& scenario) {
  GoalPlan plan;
  if (const auto* random = std::get_if<RandomTargets>(&spec.controller)) {
    for (int idx : scenario.area_goal_indices(random->area))
      plan.goals.push_back(scenario.target_points[idx].position);
  } else if (const auto* custom =
                 std::get_if<CustomizedTargets>(&spec.controller)) {
    for (int idx : scenario.owned_goal_indices(spec.name))
      plan.goals.push_back(scenario.target_points[idx].position);
    plan.end = custom->end_behavior;
  } else {
    const auto& follow = std::get<FollowPath>(spec.controller);
    const ContinuousPath* path = scenario.find_path(follow.path_id);
    if (path == nullptr)
      throw std::invalid_argument("pedestrian '" + spec.name +
                                  "' follows unknown path '" + follow.path_id +
                                  "'");
    plan.goals = path->vertices;
    plan.end = follow.end_override.value_or(path->end_behavior);
    plan.is_path = true;
  }
  return plan;
}

int active_goal_index(const ControllerState& controller) {
  if (const auto* random = std::get_if<RandomModeState>(&controller))
    return random->current_goal;
  if (const auto* custom = std::get_if<CustomizedModeState>(&controller))
    return custom->goal_cursor;
  return std::get<PathModeState>(controller).segment_index;
}

bool is_finished(const ControllerState& controller) {
  if (const auto* custom = std::get_if<CustomizedModeState>(&controller))
    return custom->finished;
  if (const auto* path = std::get_if<PathModeState>(&controller))
    return path->finished;
  return false;
}

void aim_at(PedestrianState& state, const Vec3& goal) {
  const double dn = goal.x - state.position.x;
  const double de = goal.y - state.position.y;
  // Keep the previous heading when the goal sits (horizontally) on top of us.
  if (dn * dn + de * de < 1e-24) return;
  state.heading = std::atan2(de, dn);
}

// Goal advancement on arrival. Returns false when the controller has entered
// (or already was in) its terminal state.
bool advance_goal(PedestrianState& state, const GoalPlan& plan,
                  RngStream& rng) {
  const int n = static_cast<int>(plan.goals.size());
  if (auto* random = std::get_if<RandomModeState>(&state.controller)) {
    random->current_goal = pick_next_goal(rng, n, random->current_goal);
    return true;
  }
  if (auto* custom = std::get_if<CustomizedModeState>(&state.controller)) {
    if (custom->finished) return false;
    if (custom->goal_cursor + 1 < n) {
      ++custom->goal_cursor;
    } else if (plan.end == EndBehavior::kLoop) {
      custom->goal_cursor = 0;
    } else {
      custom->finished = true;
      return false;
    }
    return true;
  }
  auto& path = std::get<PathModeState>(state.controller);
  if (path.finished) return false;
  path.arc_position = 0.0;
  const int next = path.segment_index + path.direction;
  if (next >= 0 && next < n) {
    path.segment_index = next;
    return true;
  }
  switch (plan.end) {
    case EndBehavior::kLoop:
      // Walk back to the start; no teleporting, the speed bound holds.
      path.segment_index = 0;
      return true;
    case EndBehavior::kReverse:
      // Turn around at the endpoint: the next target is the neighbor vertex.
      path.direction = -path.direction;
      path.segment_index += path.direction;
      return true;
    case EndBehavior::kStop:
      path.finished = true;
      return false;
  }
  return false;
}

void snapshot_rng(PedestrianState& state, const RngStream& rng) {
  if (auto* random = std::get_if<RandomModeState>(&state.controller))
    random->rng_state = rng.state();
}

Pose drone_pose(const DroneMount& mount, double t) {
  const auto& wp = mount.waypoints;
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < wp.size(); ++i)
    cumulative.push_back(cumulative.back() + (wp[i] - wp[i - 1]).norm());
  const double total = cumulative.back();
  const double travelled = std::clamp(mount.speed * t, 0.0, total);

  std::size_t seg = wp.size() - 1;
  for (std::size_t i = 1; i < wp.size(); ++i) {
    if (travelled <= cumulative[i]) {
      seg = i;
      break;
    }
  }
  const double seg_len = cumulative[seg] - cumulative[seg - 1];
  const double f = seg_len > 0.0 ? (travelled - cumulative[seg - 1]) / seg_len
                                 : 0.0;
  const Vec3 position = wp[seg - 1] + f * (wp[seg] - wp[seg - 1]);

  double yaw = 0.0;
  double pitch = mount.fixed_pitch_rad;
  if (mount.look_at) {
    const Vec3 d = *mount.look_at - position;
    const double n = d.norm();
    if (n > 1e-9) {
      yaw = std::atan2(d.y, d.x);
      pitch = -std::asin(std::clamp(d.z / n, -1.0, 1.0));
    }
  } else {
    // Yaw along the travel direction; vertical segments fall back to the
    // most recent segment with horizontal extent.
    for (std::size_t i = seg;; --i) {
      const Vec3 d = wp[i] - wp[i - 1];
      if (d.x * d.x + d.y * d.y > 1e-18) {
        yaw = std::atan2(d.y, d.x);
        break;
      }
      if (i == 1) break;
    }
  }
  return {position, geom::Quat::from_yaw_pitch_roll(yaw, pitch, 0.0)};
}

}  // namespace

int pick_next_goal(RngStream& rng, int goal_count, int exclude_index) {
  if (goal_count <= 0)
    throw std::invalid_argument("pick_next_goal: empty goal list");
  if (exclude_index < 0 || exclude_index >= goal_count)
    return static_cast<int>(rng.next_below(goal_count));
  if (goal_count == 1)
    throw std::invalid_argument(
        "pick_next_goal: cannot exclude the only goal");
  int pick = static_cast<int>(rng.next_below(goal_count - 1));
  if (pick >= exclude_index) ++pick;
  return pick;
}

PedestrianState initial_pedestrian_state(const PedestrianSpec& spec,
                                         const Scenario& scenario,
                                         RngStream& rng) {
  const GoalPlan plan = resolve_plan(spec, scenario);
  PedestrianState state;
  state.name = spec.name;
  state.position = spec.spawn;
  if (std::holds_alternative<RandomTargets>(spec.controller)) {
    RandomModeState mode;
    mode.current_goal =
        pick_next_goal(rng, static_cast<int>(plan.goals.size()), -1);
    state.controller = mode;
  } else if (std::holds_alternative<CustomizedTargets>(spec.controller)) {
    state.controller = CustomizedModeState{};
  } else {
    state.controller = PathModeState{};
  }
  snapshot_rng(state, rng);
  if (!plan.goals.empty())
    aim_at(state, plan.goals[active_goal_index(state.controller)]);
  return state;
}

void step_pedestrian(PedestrianState& state, const PedestrianSpec& spec,
                     const Scenario& scenario, double dt, RngStream& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_pedestrian: dt <= 0");
  const GoalPlan plan = resolve_plan(spec, scenario);
  if (plan.goals.empty() || is_finished(state.controller)) return;

  const Vec3 goal = plan.goals[active_goal_index(state.controller)];
  const Vec3 delta = goal - state.position;
  const double distance = delta.norm();

  if (distance <= kArrivalRadius) {
    // Arrival consumes the tick: select the next goal, do not move.
    if (advance_goal(state, plan, rng)) {
      snapshot_rng(state, rng);
      aim_at(state, plan.goals[active_goal_index(state.controller)]);
    }
    return;
  }

  const double step = std::min(spec.speed * dt, distance);
  state.position = state.position + (step / distance) * delta;
  aim_at(state, goal);
  if (auto* path = std::get_if<PathModeState>(&state.controller)) {
    path->arc_position += step;
    const int target = path->segment_index;
    const int prev = target - path->direction;
    if (prev >= 0 && prev < static_cast<int>(plan.goals.size())) {
      const double seg_len = (plan.goals[target] - plan.goals[prev]).norm();
      path->arc_position = std::min(path->arc_position, seg_len);
    }
  }
}

Pose camera_pose(const scenario::CameraMount& mount, double t,
                 const std::vector<PedestrianState>& current_pedestrians) {
  if (const auto* fixed = std::get_if<StaticMount>(&mount)) return fixed->pose;
  if (const auto* drone = std::get_if<DroneMount>(&mount))
    return drone_pose(*drone, t);

  const auto& ego = std::get<EgocentricMount>(mount);
  const PedestrianState* carrier = nullptr;
  for (const auto& ped : current_pedestrians)
    if (ped.name == ego.pedestrian) {
      carrier = &ped;
      break;
    }
  if (carrier == nullptr)
    throw std::invalid_argument("egocentric mount: pedestrian '" +
                                ego.pedestrian + "' not in trace");
  const geom::Quat q =
      geom::Quat::from_yaw_pitch_roll(carrier->heading, 0.0, 0.0);
  return {carrier->position + q.rotate(ego.eye_offset), q};
}

SimTrace run_simulation(const Scenario& scenario) {
  if (const auto violations = scenario::validate_scenario(scenario);
      !violations.empty())
    throw std::invalid_argument("run_simulation: invalid scenario: " +
                                violations.front().str());

  SimTrace trace;
  trace.scenario = scenario.name;
  trace.fps = scenario.fps;
  trace.seed = scenario.seed;
  trace.ticks.reserve(scenario.duration_frames);
  const double dt = 1.0 / scenario.fps;

  std::vector<PedestrianState> states;
  std::vector<RngStream> streams;
  states.reserve(scenario.pedestrians.size());
  streams.reserve(scenario.pedestrians.size());
  for (const auto& spec : scenario.pedestrians) {
    streams.push_back(derive_stream(scenario.seed, "ped:" + spec.name));
    states.push_back(initial_pedestrian_state(spec, scenario, streams.back()));
  }

  for (int frame = 0; frame < scenario.duration_frames; ++frame) {
    if (frame > 0)
      for (std::size_t i = 0; i < states.size(); ++i)
        step_pedestrian(states[i], scenario.pedestrians[i], scenario, dt,
                        streams[i]);
    Tick tick;
    tick.frame = frame;
    tick.timestamp_s = frame / scenario.fps;
    tick.pedestrians = states;
    for (const auto& cam : scenario.cameras)
      tick.cameras.push_back(
          {cam.id, camera_pose(cam.mount, tick.timestamp_s, states)});
    trace.ticks.push_back(std::move(tick));
  }
  return trace;
}

namespace {

using json = nlohmann::ordered_json;

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error("trace: expected [n, e, d] triple");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json controller_json(const ControllerState& controller) {
  json j;
  if (const auto* random = std::get_if<RandomModeState>(&controller)) {
    j["kind"] = "random";
    j["goal"] = random->current_goal;
    j["rng_state"] = random->rng_state;
  } else if (const auto* custom =
                 std::get_if<CustomizedModeState>(&controller)) {
    j["kind"] = "customized";
    j["cursor"] = custom->goal_cursor;
    j["finished"] = custom->finished;
  } else {
    const auto& path = std::get<PathModeState>(controller);
    j["kind"] = "path";
    j["segment"] = path.segment_index;
    j["arc"] = path.arc_position;
    j["direction"] = path.direction;
    j["finished"] = path.finished;
  }
  return j;
}

ControllerState controller_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "random") {
    RandomModeState mode;
    mode.current_goal = j.at("goal").get<int>();
    mode.rng_state = j.at("rng_state").get<std::uint64_t>();
    return mode;
  }
  if (kind == "customized") {
    CustomizedModeState mode;
    mode.goal_cursor = j.at("cursor").get<int>();
    mode.finished = j.at("finished").get<bool>();
    return mode;
  }
  if (kind == "path") {
    PathModeState mode;
    mode.segment_index = j.at("segment").get<int>();
    mode.arc_position = j.at("arc").get<double>();
    mode.direction = j.at("direction").get<int>();
    mode.finished = j.at("finished").get<bool>();
    return mode;
  }
  throw std::runtime_error("trace: unknown controller kind '" + kind + "'");
}

}  // namespace

std::string trace_to_json(const SimTrace& trace) {
  json root;
  root["format_version"] = 1;
  root["scenario"] = trace.scenario;
  root["fps"] = trace.fps;
  root["seed"] = trace.seed;
  json ticks = json::array();
  for (const auto& tick : trace.ticks) {
    json t;
    t["frame"] = tick.frame;
    t["timestamp_s"] = tick.timestamp_s;
    json peds = json::array();
    for (const auto& ped : tick.pedestrians) {
      json p;
      p["name"] = ped.name;
      p["position"] = vec_json(ped.position);
      p["heading"] = ped.heading;
      p["controller"] = controller_json(ped.controller);
      peds.push_back(std::move(p));
    }
    t["pedestrians"] = std::move(peds);
    json cams = json::array();
    for (const auto& cam : tick.cameras) {
      json c;
      c["id"] = cam.id;
      c["position"] = vec_json(cam.pose.position);
      c["quaternion"] = json::array({cam.pose.orientation.w,
                                     cam.pose.orientation.x,
                                     cam.pose.orientation.y,
                                     cam.pose.orientation.z});
      cams.push_back(std::move(c));
    }
    t["cameras"] = std::move(cams);
    ticks.push_back(std::move(t));
  }
  root["ticks"] = std::move(ticks);
  return root.dump();
}

SimTrace trace_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("trace: not valid JSON: ") +
                             err.what());
  }
  try {
    if (root.at("format_version").get<int>() != 1)
      throw std::runtime_error("trace: unsupported format_version");
    SimTrace trace;
    trace.scenario = root.at("scenario").get<std::string>();
    trace.fps = root.at("fps").get<double>();
    trace.seed = root.at("seed").get<std::uint64_t>();
    for (const auto& t : root.at("ticks")) {
      Tick tick;
      tick.frame = t.at("frame").get<int>();
      tick.timestamp_s = t.at("timestamp_s").get<double>();
      for (const auto& p : t.at("pedestrians")) {
        PedestrianState ped;
        ped.name = p.at("name").get<std::string>();
        ped.position = vec_from(p.at("position"));
        ped.heading = p.at("heading").get<double>();
        ped.controller = controller_from(p.at("controller"));
        tick.pedestrians.push_back(std::move(ped));
      }
      for (const auto& c : t.at("cameras")) {
        CameraPoseSample cam;
        cam.id = c.at("id").get<std::string>();
        cam.pose.position = vec_from(c.at("position"));
        const auto& q = c.at("quaternion");
        if (!q.is_array() || q.size() != 4)
          throw std::runtime_error("trace: quaternion needs 4 entries");
        cam.pose.orientation = {q[0].get<double>(), q[1].get<double>(),
                                q[2].get<double>(), q[3].get<double>()};
        tick.cameras.push_back(std::move(cam));
      }
      trace.ticks.push_back(std::move(tick));
    }
    return trace;
  } catch (const json::exception& err) {
    throw std::runtime_error(std::string("trace: malformed document: ") +
                             err.what());
  }
}

}  // namespace pedsim::sim
