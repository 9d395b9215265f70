#pragma once

// Reference computations used only by tests. Each one takes a different
// route from the library code it checks (brute force, enumeration, normal
// equations, closed forms) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "calorie/joints.hpp"
#include "calorie/mass.hpp"

namespace oracle {

/// Two-sided signed-rank p-value by direct enumeration of all 2^n sign
/// flips of the observed |d| (ranks recomputed with mid-ranks for ties).
inline double wilcoxon_enumerated_p(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> d;
  for (const auto& [a, b] : pairs) {
    if (a != b) d.push_back(a - b);
  }
  const std::size_t n = d.size();
  if (n == 0) return 1.0;
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0.0;
    double equal = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(d[k]) < std::abs(d[i])) less += 1.0;
      if (std::abs(d[k]) == std::abs(d[i])) equal += 1.0;
    }
    ranks[i] = less + (equal + 1.0) / 2.0;
  }
  double w_plus = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += ranks[i];
    if (d[i] > 0) w_plus += ranks[i];
  }
  const double observed = std::min(w_plus, total - w_plus);
  std::uint64_t at_or_below = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) s += ranks[i];
    }
    if (s <= observed + 1e-9) ++at_or_below;
  }
  return std::min(1.0, 2.0 * static_cast<double>(at_or_below) / static_cast<double>(count));
}

/// Solves the normal equations (A^T A) x = A^T b by Gauss-Jordan elimination
/// with partial pivoting. Only valid for full-column-rank A.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  const std::size_t n = a.front().size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < m; ++r) g[i][j] += a[r][i] * a[r][j];
    }
    for (std::size_t r = 0; r < m; ++r) g[i][n] += a[r][i] * b[r];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(g[r][c]) > std::abs(g[p][c])) p = r;
    }
    std::swap(g[c], g[p]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = g[r][c] / g[c][c];
      for (std::size_t k = c; k <= n; ++k) g[r][k] -= f * g[c][k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = g[i][n] / g[i][i];
  return x;
}

inline double sum_sq_residual(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                              const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    double pred = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) pred += a[r][c] * x[c];
    s += (pred - b[r]) * (pred - b[r]);
  }
  return s;
}

/// Brute-force nearest-joint labeling: for every pixel, scan all joints and
/// keep the first one at minimum squared distance.
inline std::vector<std::uint8_t> nearest_joint_labels(const calorie::Silhouette& sil,
                                                      const calorie::JointMap<calorie::PixelCoord>& joints) {
  std::vector<std::uint8_t> out(sil.width * sil.height, 0);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    if (!sil.foreground[idx]) continue;
    const double u = static_cast<double>(idx % sil.width);
    const double v = static_cast<double>(idx / sil.width);
    std::vector<double> dist;
    for (auto j : calorie::kAllJoints) {
      dist.push_back((u - joints[j].u) * (u - joints[j].u) + (v - joints[j].v) * (v - joints[j].v));
    }
    const auto best = std::min_element(dist.begin(), dist.end()) - dist.begin();
    out[idx] = static_cast<std::uint8_t>(best + 1);
  }
  return out;
}

/// Random mask of the given size with labels 0..20 and at least one
/// foreground pixel.
inline calorie::SegmentationMask random_mask(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 48);
  std::uniform_int_distribution<int> label(0, 20);
  calorie::SegmentationMask m{dim(rng), dim(rng), {}};
  m.labels.resize(m.width * m.height);
  for (auto& l : m.labels) l = static_cast<std::uint8_t>(label(rng));
  if (m.foreground_count() == 0) m.labels[0] = static_cast<std::uint8_t>(1 + rng() % 20);
  return m;
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace oracle
