#include "tmcsig/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmcsig {

double iou(const BBox& a, const BBox& b) {
  if (!(a.w > 0 && a.h > 0 && b.w > 0 && b.h > 0)) {
    throw std::invalid_argument("iou: boxes need positive width and height");
  }
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return inter / uni;
}

namespace {

bool close(const Point& p, const Point& q, double eps) {
  return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y)) <= eps;
}

}  // namespace

std::size_t lcss(std::span<const Point> a, std::span<const Point> b, const LcssOptions& opts) {
  if (!(opts.eps > 0.0)) throw std::invalid_argument("lcss: eps must be positive");
  if (a.empty() || b.empty()) return 0;

  // Two rolling rows of the classic DP table.
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const bool in_window =
          !opts.window || (i > j ? i - j : j - i) <= *opts.window;
      if (in_window && close(a[i - 1], b[j - 1], opts.eps)) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double lcss_similarity(std::span<const Point> a, std::span<const Point> b,
                       const LcssOptions& opts) {
  const std::size_t shorter = std::min(a.size(), b.size());
  if (shorter == 0) return 0.0;
  return static_cast<double>(lcss(a, b, opts)) / static_cast<double>(shorter);
}

Classification classify(std::span<const Point> points, std::span<const TypicalPath> paths,
                        const ClassifyOptions& opts) {
  if (paths.empty()) throw std::invalid_argument("classify: no typical paths");

  std::vector<const TypicalPath*> ordered;
  for (const auto& p : paths) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* l, const auto* r) {
    return index(l->movement) < index(r->movement);
  });

  Classification best;
  std::optional<Movement> arg;
  double best_sim = -1.0;
  for (const auto* path : ordered) {
    const double sim = lcss_similarity(points, path->points, opts.lcss);
    if (sim > best_sim) {
      best_sim = sim;
      arg = path->movement;
    }
  }
  best.similarity = std::max(best_sim, 0.0);
  if (best_sim >= opts.min_similarity) best.movement = arg;
  return best;
}

MovementCount count_movements(std::span<const Trajectory> trajectories,
                              std::span<const TypicalPath> paths, const ClassifyOptions& opts) {
  MovementCount out;
  for (const auto& t : trajectories) {
    if (t.class_label == static_cast<int>(RoadUser::Pedestrian)) {
      ++out.pedestrians;
      continue;
    }
    const auto c = classify(t.points, paths, opts);
    if (c.movement) {
      out.tmc.add(*c.movement);
      ++out.matched;
    } else {
      ++out.unmatched;
    }
  }
  return out;
}

}  // namespace tmcsig
