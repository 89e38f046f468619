#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "uavsg/model.hpp"

namespace uavsg {

/// Uniform bucket grid over a square, used for neighbour searches.
class SpatialGrid {
 public:
  SpatialGrid(const std::vector<Point2>& pts, double half_extent, double cell_size)
      : pts_(&pts), x0_(-half_extent), cs_(cell_size) {
    n_ = std::max(1, static_cast<int>(std::ceil(2.0 * half_extent / cell_size)));
    start_.assign(static_cast<std::size_t>(n_ * n_) + 1, 0);
    std::vector<int> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = index(cell_x(pts[i].x), cell_x(pts[i].y));
      ++start_[static_cast<std::size_t>(cell_of[i]) + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    items_.resize(pts.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[static_cast<std::size_t>(fill[static_cast<std::size_t>(cell_of[i])]++)] = static_cast<int>(i);
  }

  int cell_x(double v) const { return std::clamp(static_cast<int>(std::floor((v - x0_) / cs_)), 0, n_ - 1); }
  int cells_per_side() const { return n_; }
  double cell_size() const { return cs_; }

  /// Calls f(index) for every point in the cells at Chebyshev ring k around
  /// cell (cx, cy). Returns false when the ring lies entirely outside the grid.
  template <class F>
  bool visit_ring(int cx, int cy, int k, F&& f) const {
    if (cx - k < 0 && cy - k < 0 && cx + k >= n_ && cy + k >= n_) return false;
    if (k == 0) {
      visit_cell(cx, cy, f);
      return true;
    }
    for (int i = cx - k; i <= cx + k; ++i) {
      visit_cell(i, cy - k, f);
      visit_cell(i, cy + k, f);
    }
    for (int j = cy - k + 1; j <= cy + k - 1; ++j) {
      visit_cell(cx - k, j, f);
      visit_cell(cx + k, j, f);
    }
    return true;
  }

  /// Distance from point i to its nearest other point (+inf if alone).
  double nearest_distance(std::size_t i) const {
    const Point2 p = (*pts_)[i];
    const int cx = cell_x(p.x), cy = cell_x(p.y);
    double best2 = kInf;
    for (int k = 0;; ++k) {
      const bool inside = visit_ring(cx, cy, k, [&](int j) {
        if (static_cast<std::size_t>(j) == i) return;
        const Point2 q = (*pts_)[static_cast<std::size_t>(j)];
        best2 = std::min(best2, (q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y));
      });
      const double reach = k * cs_;
      if (best2 <= reach * reach || !inside) break;
    }
    return std::sqrt(best2);
  }

 private:
  int index(int i, int j) const { return j * n_ + i; }

  template <class F>
  void visit_cell(int i, int j, F& f) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) return;
    const int c = index(i, j);
    for (int s = start_[static_cast<std::size_t>(c)]; s < start_[static_cast<std::size_t>(c) + 1]; ++s)
      f(items_[static_cast<std::size_t>(s)]);
  }

  const std::vector<Point2>* pts_;
  double x0_;
  double cs_;
  int n_ = 1;
  std::vector<int> start_;
  std::vector<int> items_;
};

using Polygon = std::vector<Point2>;

inline double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

/// Keeps the part of a convex polygon closer to p than to q.
inline void clip_bisector(Polygon& poly, Polygon& scratch, Point2 p, Point2 q) {
  const double nx = q.x - p.x, ny = q.y - p.y;
  const double c = 0.5 * (nx * (p.x + q.x) + ny * (p.y + q.y));
  scratch.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    const double fa = nx * a.x + ny * a.y - c;
    const double fb = nx * b.x + ny * b.y - c;
    if (fa <= 0.0) scratch.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      const double t = fa / (fa - fb);
      scratch.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  poly.swap(scratch);
}

/// Voronoi cell area of point i inside the square [-half_extent, half_extent]^2.
/// Stops early and returns a value below `stop_below` as soon as the area is
/// known to be smaller than it.
inline double voronoi_cell_area(const std::vector<Point2>& pts, const SpatialGrid& grid, std::size_t i,
                                double half_extent, double stop_below = 0.0) {
  const Point2 p = pts[i];
  Polygon poly{{-half_extent, -half_extent}, {half_extent, -half_extent}, {half_extent, half_extent}, {-half_extent, half_extent}};
  Polygon scratch;
  const int cx = grid.cell_x(p.x), cy = grid.cell_x(p.y);
  double area = polygon_area(poly);
  for (int k = 0;; ++k) {
    const bool inside = grid.visit_ring(cx, cy, k, [&](int j) {
      if (static_cast<std::size_t>(j) != i) clip_bisector(poly, scratch, p, pts[static_cast<std::size_t>(j)]);
    });
    area = polygon_area(poly);
    if (area < stop_below || !inside) break;
    double r2 = 0.0;
    for (const Point2& v : poly) r2 = std::max(r2, (v.x - p.x) * (v.x - p.x) + (v.y - p.y) * (v.y - p.y));
    // Points beyond ring k are at least k cells away; they can only cut the
    // cell if closer than twice the farthest vertex.
    const double reach = k * grid.cell_size();
    if (reach * reach >= 4.0 * r2) break;
  }
  return area;
}

}  // namespace uavsg
