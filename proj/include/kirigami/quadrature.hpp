#pragma once

#include <array>
#include <vector>

namespace kirigami {

struct TriQuadPoint {
  std::array<double, 3> bary;
  double weight;  // weights sum to 1; multiply by triangle area
};

// Rule exact for polynomials of the given degree: 1 -> centroid,
// 2 (default in assembly) -> edge midpoints, >= 3 -> six-point degree-4 rule.
inline const std::vector<TriQuadPoint>& triangle_rule(int order) {
  static const std::vector<TriQuadPoint> centroid = {
      {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 1.0}};
  static const std::vector<TriQuadPoint> midedge = {
      {{0.5, 0.5, 0.0}, 1.0 / 3.0},
      {{0.0, 0.5, 0.5}, 1.0 / 3.0},
      {{0.5, 0.0, 0.5}, 1.0 / 3.0}};
  static const std::vector<TriQuadPoint> six_point = [] {
    const double a1 = 0.816847572980459, b1 = 0.091576213509771, w1 = 0.109951743655322;
    const double a2 = 0.108103018168070, b2 = 0.445948490915965, w2 = 0.223381589678011;
    std::vector<TriQuadPoint> pts;
    pts.push_back({{a1, b1, b1}, w1});
    pts.push_back({{b1, a1, b1}, w1});
    pts.push_back({{b1, b1, a1}, w1});
    pts.push_back({{a2, b2, b2}, w2});
    pts.push_back({{b2, a2, b2}, w2});
    pts.push_back({{b2, b2, a2}, w2});
    return pts;
  }();
  if (order <= 1) return centroid;
  if (order == 2) return midedge;
  return six_point;
}

struct EdgeQuadPoint {
  double t;       // position on [0, 1]
  double weight;  // weights sum to 1; multiply by edge length
};

// Two-point Gauss rule, exact for cubics.
inline const std::array<EdgeQuadPoint, 2>& edge_rule() {
  static const std::array<EdgeQuadPoint, 2> rule = {{
      {0.5 - 0.5 / 1.7320508075688772, 0.5},
      {0.5 + 0.5 / 1.7320508075688772, 0.5},
  }};
  return rule;
}

}  // namespace kirigami
