// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>

namespace pedsim {

// Axis-aligned image-space box, pixels, continuous coordinates.
struct BBox2D {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  bool valid() const { return x_min <= x_max && y_min <= y_max; }

  BBox2D clamped(double image_w, double image_h) const {
    return {std::clamp(x_min, 0.0, image_w), std::clamp(y_min, 0.0, image_h),
            std::clamp(x_max, 0.0, image_w), std::clamp(y_max, 0.0, image_h)};
  }

  bool contains(double u, double v) const {
    return u >= x_min && u <= x_max && v >= y_min && v <= y_max;
  }

  BBox2D dilated(double margin) const {
    return {x_min - margin, y_min - margin, x_max + margin, y_max + margin};
  }

  friend bool operator==(const BBox2D&, const BBox2D&) = default;
};

inline double iou(const BBox2D& a, const BBox2D& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace pedsim
