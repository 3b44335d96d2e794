#pragma once

// Trajectory post-processing: box overlap, LCSS similarity and classification
// of tracked paths into turning movements.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmcsig/core_model.hpp"

namespace tmcsig {

/// Axis-aligned box in pixels; (x, y) is the top-left corner.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
};

/// Intersection over union of two boxes with positive extent.
double iou(const BBox& a, const BBox& b);

/// Default match threshold for tracker association.
inline constexpr double kIouMatchThreshold = 0.5;

inline bool iou_match(const BBox& a, const BBox& b, double threshold = kIouMatchThreshold) {
  return iou(a, b) > threshold;
}

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

using PointSeq = std::vector<Point>;

enum class RoadUser : int { Pedestrian = 0, Vehicle = 1 };

struct Trajectory {
  std::string id;
  int class_label = static_cast<int>(RoadUser::Vehicle);
  PointSeq points;
};

struct TypicalPath {
  Movement movement = Movement::WBL;
  PointSeq points;
};

struct LcssOptions {
  double eps = 25.0;                 // Chebyshev match radius in pixels
  std::optional<std::size_t> window; // optional |i - j| bound on matched indices
};

/// Longest common subsequence length where two points match when their
/// Chebyshev distance is at most `eps`. O(|a| * |b|) time, O(|b|) memory.
std::size_t lcss(std::span<const Point> a, std::span<const Point> b, const LcssOptions& opts);

inline std::size_t lcss(std::span<const Point> a, std::span<const Point> b, double eps) {
  return lcss(a, b, LcssOptions{eps, std::nullopt});
}

/// lcss normalized by the shorter sequence; 0 when either is empty.
double lcss_similarity(std::span<const Point> a, std::span<const Point> b,
                       const LcssOptions& opts);

struct ClassifyOptions {
  LcssOptions lcss;
  double min_similarity = 0.6;
};

struct Classification {
  std::optional<Movement> movement;  // nullopt means unmatched
  double similarity = 0.0;           // best similarity seen
};

/// Best-matching typical path; ties go to the earlier movement. Throws
/// std::invalid_argument if `paths` is empty.
Classification classify(std::span<const Point> points, std::span<const TypicalPath> paths,
                        const ClassifyOptions& opts);

struct MovementCount {
  TmcTable tmc;
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  std::size_t pedestrians = 0;
};

/// Tally of classified vehicle trajectories. Pedestrians and unmatched
/// trajectories are counted separately and excluded from the table.
MovementCount count_movements(std::span<const Trajectory> trajectories,
                              std::span<const TypicalPath> paths, const ClassifyOptions& opts);

}  // namespace tmcsig
