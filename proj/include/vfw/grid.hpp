#pragma once
#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "vfw/errors.hpp"
#include "vfw/vector3.hpp"

namespace vfw {

// Uniform collocated grid on a rectangular box.  All differential operators
// in ops.hpp require periodic topology; the flag exists so the unsupported
// case can be reported cleanly instead of silently mis-differencing.
struct Grid3 {
  std::array<int, 3> n{0, 0, 0};          // nodes per axis, >= 4 each
  std::array<double, 3> h{0.0, 0.0, 0.0}; // node spacing, > 0
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  bool periodic = true;

  Grid3() = default;
  Grid3(std::array<int, 3> n_, std::array<double, 3> h_,
        std::array<double, 3> origin_ = {0.0, 0.0, 0.0}, bool periodic_ = true)
      : n(n_), h(h_), origin(origin_), periodic(periodic_) {
    for (int a = 0; a < 3; ++a) {
      if (n[a] < 4) throw DomainError("Grid3: need at least 4 nodes per axis");
      if (!(h[a] > 0.0)) throw DomainError("Grid3: spacing must be positive");
    }
  }

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
           static_cast<std::size_t>(n[2]);
  }
  // x fastest: idx = i + nx*(j + ny*k)
  std::size_t idx(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n[0]) * (static_cast<std::size_t>(j) +
                                             static_cast<std::size_t>(n[1]) *
                                                 static_cast<std::size_t>(k));
  }
  Vec3 node(int i, int j, int k) const {
    return {origin[0] + i * h[0], origin[1] + j * h[1], origin[2] + k * h[2]};
  }
  double cell_volume() const { return h[0] * h[1] * h[2]; }
  double extent(int a) const { return n[a] * h[a]; }
  double min_spacing() const { return std::min(h[0], std::min(h[1], h[2])); }

  bool operator==(const Grid3&) const = default;
};

inline void require_same_grid(const Grid3& a, const Grid3& b, const char* where) {
  if (!(a == b)) throw GridMismatchError(std::string(where) + ": fields live on different grids");
}
inline void require_periodic(const Grid3& g, const char* where) {
  if (!g.periodic)
    throw UnsupportedBoundaryError(std::string(where) +
                                   ": only periodic boundaries are supported");
}

// Nodal scalar samples.
struct ScalarField {
  Grid3 grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid3& g) : grid(g), v(g.size(), 0.0) {}

  double& operator()(int i, int j, int k) { return v[grid.idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v[grid.idx(i, j, k)]; }
};

// Nodal vector samples, stored component-major: component c occupies
// v[c*N .. (c+1)*N).
struct VectorField {
  Grid3 grid;
  std::vector<double> v;

  VectorField() = default;
  explicit VectorField(const Grid3& g) : grid(g), v(3 * g.size(), 0.0) {}

  double* component(int c) { return v.data() + static_cast<std::size_t>(c) * grid.size(); }
  const double* component(int c) const {
    return v.data() + static_cast<std::size_t>(c) * grid.size();
  }
  double& operator()(int c, int i, int j, int k) {
    return v[static_cast<std::size_t>(c) * grid.size() + grid.idx(i, j, k)];
  }
  double operator()(int c, int i, int j, int k) const {
    return v[static_cast<std::size_t>(c) * grid.size() + grid.idx(i, j, k)];
  }
  Vec3 at(int i, int j, int k) const {
    const std::size_t N = grid.size(), q = grid.idx(i, j, k);
    return {v[q], v[N + q], v[2 * N + q]};
  }
};

}  // namespace vfw
