// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth generation: cylinder projection, occlusion-aware visibility,
// instance masks, and the per-camera annotation JSON.
//
// Pedestrians are vertical cylinders standing on their base point (up is -z),
// sampled at 16 rim angles on the base and top circles plus the two axis
// endpoints: 34 samples. Rim angles are anchored to the horizontal bearing
// from the cylinder axis to the camera (offset half a step), which keeps the
// sampled silhouette tight and symmetric for any viewing direction.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedsim/bbox.hpp"
#include "pedsim/geometry.hpp"
#include "pedsim/scenario.hpp"
#include "pedsim/sim.hpp"

namespace pedsim::annotate {

using geom::CameraIntrinsics;
using geom::Pose;
using geom::Vec3;

inline constexpr int kRimSamples = 16;
inline constexpr int kSampleCount = 2 * kRimSamples + 2;  // 34

// Solid vertical cylinder: base at `base`, occupying base.z - height .. base.z.
struct Cylinder {
  Vec3 base;
  double height = 1.7;
  double radius = 0.3;
};

// The 34 world-space sample points for a cylinder seen from camera_position
// (bearing-anchored rim phase). Order: base rim 0..15, top rim 0..15, base
// center, top center.
std::vector<Vec3> cylinder_samples(const Cylinder& cylinder,
                                   const Vec3& camera_position);

struct ProjectionResult {
  std::vector<Vec3> samples;  // kSampleCount world points
  // Per sample; nullopt = at or behind the near plane.
  std::vector<std::optional<geom::PixelPoint>> projections;
  std::optional<BBox2D> bbox;  // clamped to the image; nullopt = off-frame
  BBox2D unclamped;            // pre-clamp extent (when any sample projects)
  bool truncated = false;      // unclamped box exceeded the image bounds
  int in_frustum = 0;          // samples with depth that land inside the image
};

ProjectionResult project_pedestrian(const Cylinder& cylinder,
                                    const Pose& camera_pose,
                                    const CameraIntrinsics& intrinsics);

// Ray p(t) = origin + t * dir. Smallest parameter in [t_min, t_max] at which
// the ray is inside the solid, or nullopt; an origin already inside reports
// t_min.
std::optional<double> ray_aabb_hit(const Vec3& origin, const Vec3& dir,
                                   const Vec3& box_min, const Vec3& box_max,
                                   double t_min, double t_max);
std::optional<double> ray_cylinder_hit(const Vec3& origin, const Vec3& dir,
                                       const Cylinder& cylinder, double t_min,
                                       double t_max);

// Fraction of the 34 samples that are inside the image and whose ray from the
// camera is blocked by no obstacle box and no other pedestrian's cylinder.
// The annotated pedestrian's own cylinder is not an occluder here; pass only
// the others.
double compute_visibility(const ProjectionResult& projection,
                          const CameraIntrinsics& intrinsics,
                          const Pose& camera_pose,
                          const std::vector<scenario::Obstacle>& obstacles,
                          const std::vector<Cylinder>& other_pedestrians);

struct InstanceMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;  // row-major, 0 = background/obstacle

  std::uint8_t at(int x, int y) const { return labels[y * width + x]; }
  friend bool operator==(const InstanceMask&, const InstanceMask&) = default;
};

// Stable pedestrian ids: 1-based ordinals of the name-sorted pedestrian list,
// identical across every frame and camera of the scenario.
std::vector<std::pair<std::string, int>> stable_ids(
    const scenario::Scenario& scenario);

// Per-pixel ray cast at the given raster size (pixel centers, scaled to the
// camera resolution). Nearest hit wins; pedestrian pixels carry the stable
// id, obstacles and background are 0. An egocentric camera's carrier is not
// rendered. Throws std::invalid_argument for unknown cameras and
// std::length_error when an id exceeds the 8-bit label range.
InstanceMask render_instance_mask(const scenario::Scenario& scenario,
                                  const sim::Tick& tick,
                                  const std::string& camera_id,
                                  int mask_width, int mask_height);

// Binary PGM (P5, maxval 255) encoding of a mask.
std::string mask_to_pgm(const InstanceMask& mask);

struct PedestrianAnnotation {
  int id = 0;
  std::string name;
  Vec3 position_3d;        // cylinder base, world frame
  double distance_m = 0.0; // camera to mid-height center
  BBox2D bbox;             // clamped to the image
  double visibility = 0.0; // always > 0 for emitted entries
  bool truncated = false;
  friend bool operator==(const PedestrianAnnotation&,
                         const PedestrianAnnotation&) = default;
};

struct FrameAnnotation {
  int frame = 0;
  double timestamp_s = 0.0;
  Pose camera_pose_world;
  Pose camera_pose_relative_initial;
  std::vector<PedestrianAnnotation> pedestrians;  // ordered by id
  friend bool operator==(const FrameAnnotation&, const FrameAnnotation&) =
      default;
};

struct AnnotationSequence {
  std::string scenario;
  std::string camera_id;
  double fps = 30.0;
  std::uint64_t seed = 0;
  CameraIntrinsics intrinsics;
  std::vector<FrameAnnotation> frames;
  friend bool operator==(const AnnotationSequence&, const AnnotationSequence&) =
      default;
};

// One FrameAnnotation per trace tick. Pedestrians with zero visibility are
// omitted from that frame (ids stay stable). An egocentric camera neither
// annotates its carrier nor lets the carrier occlude others. Throws
// std::invalid_argument for unknown cameras or traces foreign to the
// scenario.
AnnotationSequence annotate_trace(const sim::SimTrace& trace,
                                  const scenario::Scenario& scenario,
                                  const std::string& camera_id);

std::string annotation_to_json(const AnnotationSequence& sequence);
// Throws std::runtime_error on malformed input.
AnnotationSequence annotation_from_json(std::string_view text);
// Structural schema check; returns human-readable problems, empty = valid.
std::vector<std::string> validate_annotation_json(std::string_view text);

}  // namespace pedsim::annotate
