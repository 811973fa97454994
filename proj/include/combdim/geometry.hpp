#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <vector>

namespace combdim {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
  friend constexpr auto operator<=>(Point2, Point2) = default;
};

inline double norm(Point2 v) { return std::hypot(v.x, v.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 mirror_y(Point2 p) { return {p.x, -p.y}; }

/// Euclidean distance from p to the closed segment [a, b].
inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(((p.x - a.x) * d.x + (p.y - a.y) * d.y) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

/// Ordered vertex list describing a rectifiable curve. Consecutive duplicate
/// vertices are dropped on construction; a single remaining vertex denotes a
/// curve of length zero.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Point2> vertices, bool closed = false) : closed_(closed) {
    for (const Point2& v : vertices) {
      if (vertices_.empty() || !(vertices_.back() == v)) vertices_.push_back(v);
    }
  }

  const std::vector<Point2>& vertices() const { return vertices_; }
  bool closed() const { return closed_; }
  bool empty() const { return vertices_.empty(); }
  std::size_t segment_count() const {
    if (vertices_.size() < 2) return 0;
    return vertices_.size() - 1 + (closed_ ? 1 : 0);
  }
  Point2 segment_start(std::size_t k) const { return vertices_[k]; }
  Point2 segment_end(std::size_t k) const { return vertices_[(k + 1) % vertices_.size()]; }

  double length() const {
    double total = 0.0;
    for (std::size_t k = 0; k < segment_count(); ++k) total += distance(segment_start(k), segment_end(k));
    return total;
  }

  Polyline reversed() const {
    std::vector<Point2> v(vertices_.rbegin(), vertices_.rend());
    return Polyline(std::move(v), closed_);
  }

  /// Number of maximal straight pieces (collinear consecutive segments merged).
  std::size_t straight_piece_count() const {
    std::size_t n = segment_count();
    if (n == 0) return 0;
    std::size_t pieces = 1;
    for (std::size_t k = 1; k < segment_count(); ++k) {
      const Point2 d0 = segment_end(k - 1) - segment_start(k - 1);
      const Point2 d1 = segment_end(k) - segment_start(k);
      const double cross = d0.x * d1.y - d0.y * d1.x;
      const double dot = d0.x * d1.x + d0.y * d1.y;
      if (!(std::abs(cross) <= 1e-12 * norm(d0) * norm(d1) && dot > 0.0)) ++pieces;
    }
    return pieces;
  }

 private:
  std::vector<Point2> vertices_;
  bool closed_ = false;
};

}  // namespace combdim
