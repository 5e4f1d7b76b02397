// SPDX-License-Identifier: Apache-2.0
//
// Coordinate frames, rigid poses and the pinhole camera model.
//
// World frame ("AirSimLocal"): north-east-down (NED), right handed, origin at
// the scenario origin. Body frame: x forward, y right, z down; yaw rotates
// about +z (north toward east), pitch about +y (positive = nose up), roll
// about +x. Camera optical frame: x right, y down, z forward; it is obtained
// from the body frame by the fixed rotation kBodyFromOptical below.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace pedsim::geom {

struct Vec3 {
  double x = 0.0;  // north, meters
  double y = 0.0;  // east, meters
  double z = 0.0;  // down, meters

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
  }
  Vec3 operator-() const { return {-x, -y, -z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
    return (1.0 / n) * *this;
  }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

// Unit quaternion, scalar-first (w, x, y, z). Represents a world-from-body
// rotation: rotate() maps body-frame vectors into the parent frame.
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quat identity() { return {}; }

  static Quat from_axis_angle(const Vec3& axis, double angle_rad) {
    const Vec3 u = axis.normalized();
    const double h = 0.5 * angle_rad;
    const double s = std::sin(h);
    return {std::cos(h), s * u.x, s * u.y, s * u.z};
  }

  // Aerospace z-y'-x'' sequence: yaw about down, then pitch, then roll.
  static Quat from_yaw_pitch_roll(double yaw, double pitch, double roll) {
    const Quat qz = from_axis_angle({0, 0, 1}, yaw);
    const Quat qy = from_axis_angle({0, 1, 0}, pitch);
    const Quat qx = from_axis_angle({1, 0, 0}, roll);
    return qz * qy * qx;
  }

  friend Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend bool operator==(const Quat&, const Quat&) = default;

  Quat conjugate() const { return {w, -x, -y, -z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quat normalized() const {
    double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize zero quaternion");
    return {w / n, x / n, y / n, z / n};
  }

  Vec3 rotate(const Vec3& v) const {
    // v' = v + 2 w (u x v) + 2 u x (u x v), u = (x, y, z)
    const Vec3 u{x, y, z};
    const Vec3 t = 2.0 * u.cross(v);
    return v + w * t + u.cross(t);
  }

  double yaw() const {
    return std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
  }
};

struct Pose {
  Vec3 position;
  Quat orientation;

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Rotation taking camera-optical coordinates (x right, y down, z forward)
// into body coordinates (x forward, y right, z down). It is the cyclic axis
// permutation optical(x,y,z) -> body(y,z,x).
inline constexpr Quat kBodyFromOptical{0.5, 0.5, 0.5, 0.5};

// p_a = compose(a_from_b) applied to p_b.
inline Pose compose(const Pose& a, const Pose& b) {
  return {a.position + a.orientation.rotate(b.position),
          (a.orientation * b.orientation).normalized()};
}

inline Pose inverse(const Pose& p) {
  const Quat qi = p.orientation.conjugate();
  return {qi.rotate(-p.position), qi};
}

// Pose of `current` expressed in the frame anchored at `initial`; the
// convention AirSim uses for dynamic cameras.
inline Pose relative_to_initial(const Pose& current, const Pose& initial) {
  return compose(inverse(initial), current);
}

// World point expressed in the camera optical frame.
inline Vec3 world_to_camera(const Vec3& p, const Pose& cam_pose) {
  const Quat optical_from_world =
      (cam_pose.orientation * kBodyFromOptical).conjugate();
  return optical_from_world.rotate(p - cam_pose.position);
}

inline Vec3 camera_to_world(const Vec3& p_cam, const Pose& cam_pose) {
  const Quat world_from_optical = cam_pose.orientation * kBodyFromOptical;
  return world_from_optical.rotate(p_cam) + cam_pose.position;
}

struct CameraIntrinsics {
  int width_px = 0;
  int height_px = 0;
  double hfov_rad = 0.0;
  // Derived; square pixels, principal point at the image center.
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) =
      default;
};

inline CameraIntrinsics make_intrinsics(int width_px, int height_px,
                                        double hfov_rad) {
  if (width_px <= 0 || height_px <= 0)
    throw std::invalid_argument("intrinsics: resolution must be positive");
  if (!(hfov_rad > 0.0) || !(hfov_rad < 3.14159265358979323846))
    throw std::invalid_argument("intrinsics: hfov must be in (0, pi)");
  CameraIntrinsics k;
  k.width_px = width_px;
  k.height_px = height_px;
  k.hfov_rad = hfov_rad;
  k.fx = width_px / (2.0 * std::tan(hfov_rad / 2.0));
  k.fy = k.fx;
  k.cx = width_px / 2.0;
  k.cy = height_px / 2.0;
  return k;
}

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

inline constexpr double kZNear = 0.01;  // meters

// Pinhole projection of an optical-frame point. nullopt = behind the camera
// (z <= z_near). The pixel may lie outside the image; callers clamp.
inline std::optional<PixelPoint> project(const Vec3& p_cam,
                                         const CameraIntrinsics& k,
                                         double z_near = kZNear) {
  if (!(p_cam.z > z_near)) return std::nullopt;
  return PixelPoint{k.fx * p_cam.x / p_cam.z + k.cx,
                    k.fy * p_cam.y / p_cam.z + k.cy};
}

// Rigid transform between two named frames. Tag checking keeps compositions
// honest when several frames are in flight (world, initial-camera, body).
struct FrameTransform {
  Quat rotation;
  Vec3 translation;
  std::string source;  // frame the input point is expressed in
  std::string target;  // frame the output point is expressed in

  Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }

  FrameTransform inverse() const {
    const Quat qi = rotation.conjugate();
    return {qi, qi.rotate(-translation), target, source};
  }
};

// a_from_b composed with b_from_c gives a_from_c.
inline FrameTransform compose(const FrameTransform& a, const FrameTransform& b) {
  if (a.source != b.target)
    throw std::invalid_argument("frame mismatch: composing " + a.target + "<-" +
                                a.source + " with " + b.target + "<-" +
                                b.source);
  return {(a.rotation * b.rotation).normalized(),
          a.rotation.rotate(b.translation) + a.translation, b.source, a.target};
}

inline FrameTransform transform_from_pose(const Pose& world_from_body,
                                          const std::string& body_frame) {
  return {world_from_body.orientation, world_from_body.position, body_frame,
          "world"};
}

}  // namespace pedsim::geom
