// SPDX-License-Identifier: Apache-2.0
#include "pedsim/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace pedsim::scenario {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;  // of the value
};

struct RawSection {
  std::string kind;
  std::string id;
  int line = 0;
  std::vector<KeyValue> entries;
};

struct Document {
  std::vector<KeyValue> header;
  std::vector<RawSection> sections;
};

Document tokenize(std::string_view text, std::vector<Violation>& errors) {
  Document doc;
  RawSection* current = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    const std::size_t next = eol == std::string_view::npos ? text.size() + 1
                                                           : eol + 1;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    pos = next;
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({ViolationCode::kSyntax, "",
                          "section header missing closing ']'", line_no,
                          static_cast<int>(raw.find('[')) + 1});
        continue;
      }
      std::string_view inner = trim(line.substr(1, line.size() - 2));
      const auto space = inner.find_first_of(" \t");
      RawSection section;
      section.line = line_no;
      if (space == std::string_view::npos) {
        section.kind = std::string(inner);
      } else {
        section.kind = std::string(inner.substr(0, space));
        section.id = std::string(trim(inner.substr(space + 1)));
      }
      if (section.kind.empty()) {
        errors.push_back({ViolationCode::kSyntax, "", "empty section header",
                          line_no, 1});
        continue;
      }
      doc.sections.push_back(std::move(section));
      current = &doc.sections.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({ViolationCode::kSyntax, "",
                        "expected 'key = value' or '[section id]'", line_no,
                        1});
      continue;
    }
    KeyValue kv;
    kv.key = std::string(trim(line.substr(0, eq)));
    kv.value = std::string(trim(line.substr(eq + 1)));
    kv.line = line_no;
    // column of the first value character in the raw line (1-based)
    const auto value_off = raw.find(kv.value.empty() ? "=" : kv.value,
                                    raw.find('='));
    kv.column = static_cast<int>(value_off) + 1;
    if (kv.key.empty()) {
      errors.push_back({ViolationCode::kSyntax, "", "missing key before '='",
                        line_no, 1});
      continue;
    }
    if (kv.value.empty()) {
      errors.push_back({ViolationCode::kSyntax, kv.key,
                        "missing value after '='", line_no, kv.column});
      continue;
    }
    if (current)
      current->entries.push_back(std::move(kv));
    else
      doc.header.push_back(std::move(kv));
  }
  return doc;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

bool parse_int64(std::string_view s, long long& out) {
  s = trim(s);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '-') {
    // accept negative seeds as two's complement for convenience
    long long v;
    if (!parse_int64(s, v)) return false;
    out = static_cast<std::uint64_t>(v);
    return true;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_vec3(std::string_view s, Vec3& out) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  s = s.substr(1, s.size() - 2);
  double comp[3];
  for (int i = 0; i < 3; ++i) {
    const auto comma = s.find(',');
    if (i < 2 && comma == std::string_view::npos) return false;
    if (i == 2 && comma != std::string_view::npos) return false;
    std::string_view field =
        i < 2 ? s.substr(0, comma) : s;
    if (!parse_double(field, comp[i])) return false;
    if (i < 2) s = s.substr(comma + 1);
  }
  out = {comp[0], comp[1], comp[2]};
  return true;
}

bool parse_vec3_list(std::string_view s, std::vector<Vec3>& out) {
  out.clear();
  s = trim(s);
  while (!s.empty()) {
    if (s.front() != '(') return false;
    const auto close = s.find(')');
    if (close == std::string_view::npos) return false;
    Vec3 v;
    if (!parse_vec3(s.substr(0, close + 1), v)) return false;
    out.push_back(v);
    s = trim(s.substr(close + 1));
  }
  return !out.empty();
}

bool parse_quat(std::string_view s, geom::Quat& out) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  s = s.substr(1, s.size() - 2);
  double comp[4];
  for (int i = 0; i < 4; ++i) {
    const auto comma = s.find(',');
    const bool last = i == 3;
    if (!last && comma == std::string_view::npos) return false;
    if (last && comma != std::string_view::npos) return false;
    if (!parse_double(last ? s : s.substr(0, comma), comp[i])) return false;
    if (!last) s = s.substr(comma + 1);
  }
  out = {comp[0], comp[1], comp[2], comp[3]};
  return true;
}

bool parse_end_behavior(std::string_view s, EndBehavior& out) {
  s = trim(s);
  if (s == "loop") out = EndBehavior::kLoop;
  else if (s == "reverse") out = EndBehavior::kReverse;
  else if (s == "stop") out = EndBehavior::kStop;
  else return false;
  return true;
}

// Pulls typed values out of a section's key/value list, recording violations
// for malformed or missing entries and, at the end, for unconsumed keys.
class SectionReader {
 public:
  SectionReader(const std::string& subject, const std::vector<KeyValue>& kvs,
                std::vector<Violation>& errors)
      : subject_(subject), kvs_(kvs), errors_(errors) {}

  const KeyValue* find(std::string_view key) {
    const KeyValue* found = nullptr;
    for (const auto& kv : kvs_) {
      if (kv.key == key) {
        if (found)
          error(ViolationCode::kSyntax, kv, "duplicate key '" + kv.key + "'");
        else
          found = &kv;
      }
    }
    if (found) consumed_.insert(std::string(key));
    return found;
  }

  bool has(std::string_view key) const {
    for (const auto& kv : kvs_)
      if (kv.key == key) return true;
    return false;
  }

  template <typename T, typename Fn>
  std::optional<T> get(std::string_view key, Fn&& parser,
                       const char* expected) {
    const KeyValue* kv = find(key);
    if (!kv) return std::nullopt;
    T value{};
    if (!parser(kv->value, value)) {
      error(ViolationCode::kBadValue, *kv,
            "cannot parse '" + kv->value + "' as " + expected + " for key '" +
                kv->key + "'");
      return std::nullopt;
    }
    return value;
  }

  std::optional<double> get_double(std::string_view key) {
    return get<double>(key, parse_double, "a number");
  }
  std::optional<long long> get_int(std::string_view key) {
    return get<long long>(key, parse_int64, "an integer");
  }
  std::optional<std::uint64_t> get_u64(std::string_view key) {
    return get<std::uint64_t>(key, parse_u64, "an integer");
  }
  std::optional<Vec3> get_vec3(std::string_view key) {
    return get<Vec3>(key, parse_vec3, "a vector '(n, e, d)'");
  }
  std::optional<std::vector<Vec3>> get_vec3_list(std::string_view key) {
    return get<std::vector<Vec3>>(key, parse_vec3_list,
                                  "a vector list '(..) (..)'");
  }
  std::optional<geom::Quat> get_quat(std::string_view key) {
    return get<geom::Quat>(key, parse_quat, "a quaternion '(w, x, y, z)'");
  }
  std::optional<EndBehavior> get_end(std::string_view key) {
    return get<EndBehavior>(key, parse_end_behavior,
                            "one of loop | reverse | stop");
  }
  std::optional<std::string> get_string(std::string_view key) {
    const KeyValue* kv = find(key);
    if (!kv) return std::nullopt;
    return kv->value;
  }

  void require(std::string_view key, int section_line) {
    if (!has(key))
      errors_.push_back({ViolationCode::kMissingKey, subject_,
                         "required key '" + std::string(key) + "' missing",
                         section_line, 0});
  }

  void finish() {
    for (const auto& kv : kvs_) {
      if (!consumed_.contains(kv.key))
        error(ViolationCode::kUnknownKey, kv,
              "key '" + kv.key + "' not recognized here");
    }
  }

 private:
  void error(ViolationCode code, const KeyValue& kv, std::string message) {
    errors_.push_back(
        {code, subject_, std::move(message), kv.line, kv.column});
  }

  std::string subject_;
  const std::vector<KeyValue>& kvs_;
  std::vector<Violation>& errors_;
  std::set<std::string> consumed_;
};

CameraIntrinsics intrinsics_raw(int width, int height, double hfov_rad) {
  CameraIntrinsics k;
  k.width_px = width;
  k.height_px = height;
  k.hfov_rad = hfov_rad;
  if (width > 0 && height > 0 && hfov_rad > 0.0 &&
      hfov_rad < std::numbers::pi) {
    k.fx = width / (2.0 * std::tan(hfov_rad / 2.0));
    k.fy = k.fx;
    k.cx = width / 2.0;
    k.cy = height / 2.0;
  }
  return k;
}

void read_header(const Document& doc, Scenario& s,
                 std::vector<Violation>& errors) {
  SectionReader reader("header", doc.header, errors);
  const auto format = reader.get_int("format");
  if (!reader.has("format"))
    errors.push_back({ViolationCode::kMissingKey, "header",
                      "missing 'format = 1' header", 1, 0});
  else if (format && *format != 1)
    errors.push_back({ViolationCode::kBadValue, "header",
                      "unsupported format version " + std::to_string(*format),
                      1, 0});
  if (auto v = reader.get_string("name")) s.name = *v;
  reader.require("name", 1);
  if (auto v = reader.get_int("duration_frames"))
    s.duration_frames = static_cast<int>(*v);
  reader.require("duration_frames", 1);
  if (auto v = reader.get_double("fps")) s.fps = *v;
  if (auto v = reader.get_u64("seed")) s.seed = *v;
  reader.finish();
}

void read_obstacle(const RawSection& sec, Scenario& s,
                   std::vector<Violation>& errors) {
  Obstacle o;
  o.id = sec.id;
  SectionReader reader("obstacle " + sec.id, sec.entries, errors);
  if (auto v = reader.get_vec3("min")) o.min_corner = *v;
  if (auto v = reader.get_vec3("max")) o.max_corner = *v;
  reader.require("min", sec.line);
  reader.require("max", sec.line);
  reader.finish();
  s.obstacles.push_back(std::move(o));
}

void read_path(const RawSection& sec, Scenario& s,
               std::vector<Violation>& errors) {
  ContinuousPath p;
  p.id = sec.id;
  SectionReader reader("path " + sec.id, sec.entries, errors);
  if (auto v = reader.get_vec3_list("vertices")) p.vertices = *v;
  reader.require("vertices", sec.line);
  if (auto v = reader.get_end("end")) p.end_behavior = *v;
  reader.finish();
  s.paths.push_back(std::move(p));
}

void read_target(const RawSection& sec, Scenario& s,
                 std::vector<Violation>& errors) {
  TargetPoint t;
  t.id = sec.id;
  SectionReader reader("target " + sec.id, sec.entries, errors);
  if (auto v = reader.get_vec3("position")) t.position = *v;
  reader.require("position", sec.line);
  if (auto v = reader.get_string("area")) t.area = *v;
  if (auto v = reader.get_string("owner")) t.owner_tag = *v;
  if (auto v = reader.get_int("index")) t.creation_index = static_cast<int>(*v);
  if (!t.owner_tag.empty() && !reader.has("index"))
    errors.push_back({ViolationCode::kMissingKey, "target " + sec.id,
                      "owned target points need an explicit 'index'",
                      sec.line, 0});
  reader.finish();
  s.target_points.push_back(std::move(t));
}

void read_pedestrian(const RawSection& sec, Scenario& s,
                     std::vector<Violation>& errors) {
  PedestrianSpec ped;
  ped.name = sec.id;
  SectionReader reader("pedestrian " + sec.id, sec.entries, errors);
  if (auto v = reader.get_vec3("spawn")) ped.spawn = *v;
  reader.require("spawn", sec.line);
  if (auto v = reader.get_double("height")) ped.height = *v;
  if (auto v = reader.get_double("radius")) ped.radius = *v;
  if (auto v = reader.get_double("speed")) ped.speed = *v;

  const auto mode = reader.get_string("controller");
  reader.require("controller", sec.line);
  if (mode == "random") {
    RandomTargets ctl;
    if (auto v = reader.get_string("area")) ctl.area = *v;
    reader.require("area", sec.line);
    ped.controller = std::move(ctl);
  } else if (mode == "customized") {
    CustomizedTargets ctl;
    if (auto v = reader.get_end("end")) {
      if (*v == EndBehavior::kReverse)
        errors.push_back({ViolationCode::kBadValue, "pedestrian " + sec.id,
                          "customized controllers support end = loop | stop",
                          sec.line, 0});
      else
        ctl.end_behavior = *v;
    }
    ped.controller = ctl;
  } else if (mode == "path") {
    FollowPath ctl;
    if (auto v = reader.get_string("path")) ctl.path_id = *v;
    reader.require("path", sec.line);
    if (auto v = reader.get_end("end")) ctl.end_override = *v;
    ped.controller = std::move(ctl);
  } else if (mode) {
    errors.push_back({ViolationCode::kBadValue, "pedestrian " + sec.id,
                      "controller must be random | customized | path, got '" +
                          *mode + "'",
                      sec.line, 0});
  }
  reader.finish();
  s.pedestrians.push_back(std::move(ped));
}

void read_camera(const RawSection& sec, Scenario& s,
                 std::vector<Violation>& errors) {
  CameraSpec cam;
  cam.id = sec.id;
  SectionReader reader("camera " + sec.id, sec.entries, errors);

  int width = 0, height = 0;
  double hfov = 0.0;
  if (auto v = reader.get_int("width")) width = static_cast<int>(*v);
  if (auto v = reader.get_int("height")) height = static_cast<int>(*v);
  reader.require("width", sec.line);
  reader.require("height", sec.line);
  const bool has_deg = reader.has("hfov_deg");
  const bool has_rad = reader.has("hfov_rad");
  if (has_deg && has_rad)
    errors.push_back({ViolationCode::kBadValue, "camera " + sec.id,
                      "give either hfov_deg or hfov_rad, not both", sec.line,
                      0});
  if (auto v = reader.get_double("hfov_deg")) hfov = *v * kDegToRad;
  if (auto v = reader.get_double("hfov_rad")) hfov = *v;
  if (!has_deg && !has_rad)
    errors.push_back({ViolationCode::kMissingKey, "camera " + sec.id,
                      "required key 'hfov_deg' (or 'hfov_rad') missing",
                      sec.line, 0});
  cam.intrinsics = intrinsics_raw(width, height, hfov);

  const auto mount = reader.get_string("mount");
  reader.require("mount", sec.line);
  if (mount == "static") {
    StaticMount m;
    if (auto v = reader.get_vec3("position")) m.pose.position = *v;
    reader.require("position", sec.line);
    if (reader.has("quaternion")) {
      if (auto v = reader.get_quat("quaternion")) {
        const double n = v->norm();
        if (n <= 0.0)
          errors.push_back({ViolationCode::kBadValue, "camera " + sec.id,
                            "quaternion must be nonzero", sec.line, 0});
        // Keep already-unit quaternions bit-exact so canonical round-trips
        // reproduce the input; only repair clearly off-unit ones.
        else if (std::abs(n - 1.0) > 1e-12)
          m.pose.orientation = v->normalized();
        else
          m.pose.orientation = *v;
      }
      for (const char* k : {"yaw_deg", "pitch_deg", "roll_deg"})
        if (reader.has(k))
          errors.push_back({ViolationCode::kBadValue, "camera " + sec.id,
                            "give either quaternion or euler angles, not both",
                            sec.line, 0});
    } else {
      double yaw = 0.0, pitch = 0.0, roll = 0.0;
      if (auto v = reader.get_double("yaw_deg")) yaw = *v * kDegToRad;
      if (auto v = reader.get_double("pitch_deg")) pitch = *v * kDegToRad;
      if (auto v = reader.get_double("roll_deg")) roll = *v * kDegToRad;
      m.pose.orientation = geom::Quat::from_yaw_pitch_roll(yaw, pitch, roll);
    }
    cam.mount = std::move(m);
  } else if (mount == "drone") {
    DroneMount m;
    if (auto v = reader.get_vec3_list("waypoints")) m.waypoints = *v;
    reader.require("waypoints", sec.line);
    if (auto v = reader.get_double("speed")) m.speed = *v;
    if (auto v = reader.get_vec3("look_at")) m.look_at = *v;
    if (auto v = reader.get_double("pitch_deg"))
      m.fixed_pitch_rad = *v * kDegToRad;
    if (auto v = reader.get_double("pitch_rad")) m.fixed_pitch_rad = *v;
    cam.mount = std::move(m);
  } else if (mount == "ego") {
    EgocentricMount m;
    if (auto v = reader.get_string("pedestrian")) m.pedestrian = *v;
    reader.require("pedestrian", sec.line);
    if (auto v = reader.get_vec3("eye_offset")) m.eye_offset = *v;
    cam.mount = std::move(m);
  } else if (mount) {
    errors.push_back({ViolationCode::kBadValue, "camera " + sec.id,
                      "mount must be static | drone | ego, got '" + *mount +
                          "'",
                      sec.line, 0});
  }
  reader.finish();
  s.cameras.push_back(std::move(cam));
}

void read_degradation(const RawSection& sec, DegradationSpec& d,
                      std::vector<Violation>& errors) {
  SectionReader reader("degradation", sec.entries, errors);
  if (auto v = reader.get_double("fog_extinction")) d.fog_extinction = *v;
  if (auto v = reader.get_double("base_detect_prob")) d.base_detect_prob = *v;
  if (auto v = reader.get_double("night_factor")) d.night_factor = *v;
  if (auto v = reader.get_double("bbox_noise_sigma")) d.bbox_noise_sigma = *v;
  if (auto v = reader.get_double("false_positive_rate"))
    d.false_positive_rate = *v;
  if (auto v = reader.get_double("visibility_exponent"))
    d.visibility_exponent = *v;
  reader.finish();
}

}  // namespace

ParseResult parse_scenario(std::string_view text) {
  ParseResult result;
  Document doc = tokenize(text, result.errors);

  Scenario s;
  read_header(doc, s, result.errors);

  bool saw_degradation = false;
  for (const auto& sec : doc.sections) {
    if (sec.kind != "degradation" && sec.id.empty()) {
      result.errors.push_back({ViolationCode::kSyntax, sec.kind,
                               "section [" + sec.kind + "] needs an id",
                               sec.line, 1});
      continue;
    }
    if (sec.kind == "obstacle") read_obstacle(sec, s, result.errors);
    else if (sec.kind == "path") read_path(sec, s, result.errors);
    else if (sec.kind == "target") read_target(sec, s, result.errors);
    else if (sec.kind == "pedestrian") read_pedestrian(sec, s, result.errors);
    else if (sec.kind == "camera") read_camera(sec, s, result.errors);
    else if (sec.kind == "degradation") {
      if (saw_degradation)
        result.errors.push_back({ViolationCode::kSyntax, "degradation",
                                 "duplicate [degradation] section", sec.line,
                                 1});
      else
        read_degradation(sec, s.degradation, result.errors);
      saw_degradation = true;
    } else {
      result.errors.push_back({ViolationCode::kSyntax, sec.kind,
                               "unknown section kind '" + sec.kind + "'",
                               sec.line, 1});
    }
  }

  if (result.errors.empty()) {
    auto semantic = validate_scenario(s);
    for (auto& v : semantic) result.errors.push_back(std::move(v));
  }
  if (result.errors.empty()) result.scenario = std::move(s);
  return result;
}

ParseResult parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(const Vec3& v) {
  return "(" + fmt(v.x) + ", " + fmt(v.y) + ", " + fmt(v.z) + ")";
}

std::string fmt(const geom::Quat& q) {
  return "(" + fmt(q.w) + ", " + fmt(q.x) + ", " + fmt(q.y) + ", " +
         fmt(q.z) + ")";
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "format = 1\n";
  out << "name = " << s.name << "\n";
  out << "duration_frames = " << s.duration_frames << "\n";
  out << "fps = " << fmt(s.fps) << "\n";
  out << "seed = " << s.seed << "\n";

  for (const auto& o : s.obstacles) {
    out << "\n[obstacle " << o.id << "]\n";
    out << "min = " << fmt(o.min_corner) << "\n";
    out << "max = " << fmt(o.max_corner) << "\n";
  }
  for (const auto& p : s.paths) {
    out << "\n[path " << p.id << "]\n";
    out << "vertices =";
    for (const auto& v : p.vertices) out << " " << fmt(v);
    out << "\n";
    out << "end = " << to_string(p.end_behavior) << "\n";
  }
  for (const auto& t : s.target_points) {
    out << "\n[target " << t.id << "]\n";
    out << "position = " << fmt(t.position) << "\n";
    if (!t.area.empty()) out << "area = " << t.area << "\n";
    if (!t.owner_tag.empty()) out << "owner = " << t.owner_tag << "\n";
    out << "index = " << t.creation_index << "\n";
  }
  for (const auto& ped : s.pedestrians) {
    out << "\n[pedestrian " << ped.name << "]\n";
    out << "spawn = " << fmt(ped.spawn) << "\n";
    out << "height = " << fmt(ped.height) << "\n";
    out << "radius = " << fmt(ped.radius) << "\n";
    out << "speed = " << fmt(ped.speed) << "\n";
    if (const auto* random = std::get_if<RandomTargets>(&ped.controller)) {
      out << "controller = random\n";
      out << "area = " << random->area << "\n";
    } else if (const auto* custom =
                   std::get_if<CustomizedTargets>(&ped.controller)) {
      out << "controller = customized\n";
      out << "end = " << to_string(custom->end_behavior) << "\n";
    } else if (const auto* follow = std::get_if<FollowPath>(&ped.controller)) {
      out << "controller = path\n";
      out << "path = " << follow->path_id << "\n";
      if (follow->end_override)
        out << "end = " << to_string(*follow->end_override) << "\n";
    }
  }
  for (const auto& cam : s.cameras) {
    out << "\n[camera " << cam.id << "]\n";
    out << "width = " << cam.intrinsics.width_px << "\n";
    out << "height = " << cam.intrinsics.height_px << "\n";
    out << "hfov_rad = " << fmt(cam.intrinsics.hfov_rad) << "\n";
    if (const auto* st = std::get_if<StaticMount>(&cam.mount)) {
      out << "mount = static\n";
      out << "position = " << fmt(st->pose.position) << "\n";
      out << "quaternion = " << fmt(st->pose.orientation) << "\n";
    } else if (const auto* drone = std::get_if<DroneMount>(&cam.mount)) {
      out << "mount = drone\n";
      out << "waypoints =";
      for (const auto& w : drone->waypoints) out << " " << fmt(w);
      out << "\n";
      out << "speed = " << fmt(drone->speed) << "\n";
      if (drone->look_at) out << "look_at = " << fmt(*drone->look_at) << "\n";
      out << "pitch_rad = " << fmt(drone->fixed_pitch_rad) << "\n";
    } else if (const auto* ego = std::get_if<EgocentricMount>(&cam.mount)) {
      out << "mount = ego\n";
      out << "pedestrian = " << ego->pedestrian << "\n";
      out << "eye_offset = " << fmt(ego->eye_offset) << "\n";
    }
  }

  const auto& d = s.degradation;
  out << "\n[degradation]\n";
  out << "fog_extinction = " << fmt(d.fog_extinction) << "\n";
  out << "base_detect_prob = " << fmt(d.base_detect_prob) << "\n";
  out << "night_factor = " << fmt(d.night_factor) << "\n";
  out << "bbox_noise_sigma = " << fmt(d.bbox_noise_sigma) << "\n";
  out << "false_positive_rate = " << fmt(d.false_positive_rate) << "\n";
  out << "visibility_exponent = " << fmt(d.visibility_exponent) << "\n";
  return out.str();
}

DegradationParseResult parse_degradation_profile(std::string_view text) {
  DegradationParseResult result;
  Document doc = tokenize(text, result.errors);

  {
    SectionReader reader("header", doc.header, result.errors);
    const auto format = reader.get_int("format");
    if (!reader.has("format"))
      result.errors.push_back({ViolationCode::kMissingKey, "header",
                               "missing 'format = 1' header", 1, 0});
    else if (format && *format != 1)
      result.errors.push_back(
          {ViolationCode::kBadValue, "header",
           "unsupported format version " + std::to_string(*format), 1, 0});
    reader.finish();
  }

  DegradationSpec spec;
  bool seen = false;
  for (const auto& sec : doc.sections) {
    if (sec.kind != "degradation") {
      result.errors.push_back(
          {ViolationCode::kSyntax, sec.kind,
           "profile files allow only a [degradation] section", sec.line, 1});
      continue;
    }
    if (seen) {
      result.errors.push_back({ViolationCode::kSyntax, "degradation",
                               "duplicate [degradation] section", sec.line, 1});
      continue;
    }
    seen = true;
    read_degradation(sec, spec, result.errors);
  }
  if (!seen)
    result.errors.push_back({ViolationCode::kMissingKey, "degradation",
                             "missing [degradation] section", 1, 0});

  if (result.errors.empty()) {
    auto ranges = validate_degradation(spec);
    for (auto& v : ranges) result.errors.push_back(std::move(v));
  }
  if (result.errors.empty()) result.spec = spec;
  return result;
}

DegradationParseResult parse_degradation_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open profile file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_degradation_profile(buf.str());
}

}  // namespace pedsim::scenario
