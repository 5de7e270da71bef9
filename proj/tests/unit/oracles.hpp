#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

using C = std::complex<double>;
inline const double kPi = std::acos(-1.0);

// Newton on g(z) = e^z + c - z.
inline C fixed_point(C c, C z) {
  for (int i = 0; i < 200; ++i) {
    C e = std::exp(z);
    C step = (e + c - z) / (e - 1.0);
    z -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

// Newton on f^p(z) - z with the derivative accumulated along the orbit.
inline C periodic_point(C c, C z, int p) {
  for (int i = 0; i < 200; ++i) {
    C w = z, d = 1.0;
    for (int k = 0; k < p; ++k) {
      C e = std::exp(w);
      d *= e;
      w = e + c;
    }
    C step = (w - z) / (d - 1.0);
    z -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

// Principal log of (w - c) shifted into the strip of label k.
inline C branch(C c, C w, std::int64_t k) {
  return std::log(w - c) + C(0, 2 * kPi * static_cast<double>(k));
}

// ψ(z) = L_{w[0]}∘…∘L_{w[p-1]}(z) and its derivative.
inline std::pair<C, C> psi(C c, const std::vector<std::int64_t>& word, C z) {
  C d = 1.0;
  for (std::size_t j = word.size(); j-- > 0;) {
    d *= 1.0 / (z - c);
    z = branch(c, z, word[j]);
  }
  return {z, d};
}

// Newton on ψ(z) - z.
inline std::optional<C> psi_fixed_point(C c, const std::vector<std::int64_t>& word, C z) {
  for (int i = 0; i < 100; ++i) {
    auto [v, d] = psi(c, word, z);
    C step = (v - z) / (d - 1.0);
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) return z;
  }
  return std::nullopt;
}

// All words of length p over [-K, K].
inline std::vector<std::vector<std::int64_t>> words(int K, int p) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> w(static_cast<std::size_t>(p), -K);
  while (true) {
    out.push_back(w);
    int i = p - 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == K) w[static_cast<std::size_t>(i--)] = -K;
    if (i < 0) return out;
    ++w[static_cast<std::size_t>(i)];
  }
}

// Distance from z to segment [a, b].
inline double segment_distance(C z, C a, C b) {
  C d = b - a;
  double t = std::norm(d) == 0 ? 0 : std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

inline bool segments_cross(C a, C b, C p, C q) {
  auto orient = [](C u, C v, C w) {
    double x = (v - u).real() * (w - u).imag() - (v - u).imag() * (w - u).real();
    return (x > 0) - (x < 0);
  };
  return orient(a, b, p) * orient(a, b, q) < 0 && orient(p, q, a) * orient(p, q, b) < 0;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x)
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

// Connected components of a probe grid over [x0,x1]×[y0,y1]; neighbouring
// probes are joined unless the segment between them crosses a polyline.
// Polylines are given with their horizontal continuation to x = xfar.
struct GridComponents {
  int n;
  double x0, x1, y0, y1;
  std::vector<int> label;  // -1 for probes too close to a polyline

  C probe(int i, int j) const {
    return {x0 + (x1 - x0) * (i + 0.5) / n, y0 + (y1 - y0) * (j + 0.5) / n};
  }
  int at(C z) const {
    int i = static_cast<int>(std::floor((z.real() - x0) / (x1 - x0) * n));
    int j = static_cast<int>(std::floor((z.imag() - y0) / (y1 - y0) * n));
    if (i < 0 || j < 0 || i >= n || j >= n) return -1;
    return label[static_cast<std::size_t>(i * n + j)];
  }
};

inline GridComponents grid_components(const std::vector<std::vector<C>>& polylines, int n,
                                      double x0, double x1, double y0, double y1,
                                      double clearance) {
  GridComponents g{n, x0, x1, y0, y1, std::vector<int>(static_cast<std::size_t>(n * n), -1)};
  std::vector<std::pair<C, C>> segments;
  for (const auto& poly : polylines) {
    for (std::size_t k = 1; k < poly.size(); ++k) segments.emplace_back(poly[k - 1], poly[k]);
    segments.emplace_back(poly.back(), C(std::max(poly.back().real(), x1) + 10, poly.back().imag()));
  }
  auto blocked = [&](C a, C b) {
    for (const auto& [p, q] : segments)
      if (segments_cross(a, b, p, q)) return true;
    return false;
  };
  std::vector<bool> ok(static_cast<std::size_t>(n * n), true);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& [p, q] : segments)
        if (segment_distance(g.probe(i, j), p, q) < clearance) {
          ok[static_cast<std::size_t>(i * n + j)] = false;
          break;
        }
  UnionFind uf(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int a = i * n + j;
      if (!ok[static_cast<std::size_t>(a)]) continue;
      if (i + 1 < n && ok[static_cast<std::size_t>(a + n)] && !blocked(g.probe(i, j), g.probe(i + 1, j)))
        uf.unite(a, a + n);
      if (j + 1 < n && ok[static_cast<std::size_t>(a + 1)] && !blocked(g.probe(i, j), g.probe(i, j + 1)))
        uf.unite(a, a + 1);
    }
  for (int a = 0; a < n * n; ++a)
    if (ok[static_cast<std::size_t>(a)]) g.label[static_cast<std::size_t>(a)] = uf.find(a);
  return g;
}

// Siegel parameter c = 2πiθ - e^{2πiθ} with θ the golden mean conjugate.
inline C siegel_parameter() {
  const double theta = (std::sqrt(5.0) - 1.0) / 2.0;
  C lambda = std::exp(C(0, 2 * kPi * theta));
  return C(0, 2 * kPi * theta) - lambda;
}

}  // namespace oracle
