#pragma once

// Independent reference computations used by the unit and acceptance
// tests. None of them calls into the code under test except for the small
// data types needed to describe inputs.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "quiverloop/laurent.hpp"
#include "quiverloop/quiver.hpp"

namespace oracle {

using Dec = boost::multiprecision::cpp_dec_float_50;

// Reference moments m_1 .. m_6 transcribed by hand, as (c, a, b) for
// c * y^a / x^b.
inline const std::vector<std::vector<std::tuple<int, int, int>>>& printed_moments() {
  static const std::vector<std::vector<std::tuple<int, int, int>>> table = {
      {{1, 1, 0}},
      {{1, 1, 1}, {1, 0, 0}},
      {{1, 1, 0}, {1, 2, 1}, {1, 0, 1}, {1, 1, 2}},
      {{4, 1, 1}, {3, 2, 2}, {1, 0, 2}, {1, 1, 3}, {1, 0, 0}},
      {{1, 1, 0}, {3, 2, 1}, {2, 3, 2}, {3, 0, 1}, {9, 1, 2}, {6, 2, 3}, {1, 0, 3}, {1, 1, 4}},
      {{9, 1, 1}, {18, 2, 2}, {10, 3, 3}, {6, 0, 2}, {16, 1, 3}, {10, 2, 4}, {1, 0, 4},
       {1, 1, 5}, {1, 0, 0}},
  };
  return table;
}

inline quiverloop::LaurentPolynomial printed_moment(std::size_t n) {
  quiverloop::LaurentPolynomial p;
  for (auto [c, a, b] : printed_moments().at(n - 1)) {
    p += quiverloop::LaurentPolynomial::monomial(c, a, b);
  }
  return p;
}

// Closed walks of length k at each vertex on the underlying graph:
// diagonal of A^k with A symmetric, a self-loop adding 2 on the diagonal.
inline std::vector<std::int64_t> closed_walk_counts(std::size_t vertices,
                                                    const std::vector<std::pair<int, int>>& edges,
                                                    std::size_t k) {
  using Mat = std::vector<std::vector<std::int64_t>>;
  Mat a(vertices, std::vector<std::int64_t>(vertices, 0));
  for (auto [s, t] : edges) {
    a[s][t] += 1;
    a[t][s] += 1;
  }
  Mat p(vertices, std::vector<std::int64_t>(vertices, 0));
  for (std::size_t i = 0; i < vertices; ++i) p[i][i] = 1;
  for (std::size_t step = 0; step < k; ++step) {
    Mat next(vertices, std::vector<std::int64_t>(vertices, 0));
    for (std::size_t i = 0; i < vertices; ++i)
      for (std::size_t j = 0; j < vertices; ++j)
        for (std::size_t l = 0; l < vertices; ++l) next[i][j] += p[i][l] * a[l][j];
    p = std::move(next);
  }
  std::vector<std::int64_t> diag(vertices);
  for (std::size_t i = 0; i < vertices; ++i) diag[i] = p[i][i];
  return diag;
}

// Coefficients of u^j in q(u + 1/u) for a polynomial q given low to high.
inline std::map<int, std::int64_t> laurent_in_u(const std::vector<std::int64_t>& q) {
  std::map<int, std::int64_t> out;
  std::map<int, std::int64_t> power = {{0, 1}};  // (u + 1/u)^k
  for (std::size_t k = 0; k < q.size(); ++k) {
    for (auto [j, c] : power) out[j] += q[k] * c;
    std::map<int, std::int64_t> next;
    for (auto [j, c] : power) {
      next[j + 1] += c;
      next[j - 1] += c;
    }
    power = std::move(next);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

// I_q(z) from the first 60 terms of its series in 50-digit decimal floats.
inline Dec bessel_i(int q, const Dec& z) {
  q = std::abs(q);
  Dec half = z / 2;
  Dec term = 1;
  for (int k = 1; k <= q; ++k) term *= half / k;
  Dec sum = 0;
  for (int k = 0; k < 60; ++k) {
    sum += term;
    term *= half * half / ((k + 1) * (k + 1 + q));
  }
  return sum;
}

inline double bessel_i_double(int q, double z) { return static_cast<double>(bessel_i(q, Dec(z))); }

// Laplace expansion along the first row.
inline Dec cofactor_determinant(const std::vector<std::vector<Dec>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Dec det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Dec>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Dec> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(m[i][c]);
      }
      minor.push_back(std::move(row));
    }
    const Dec c = m[0][j] * cofactor_determinant(minor);
    det += (j % 2 == 0) ? c : Dec(-c);
  }
  return det;
}

// det[I_{k-m}(-2 x N)] by cofactor expansion.
inline Dec gww_partition_function(int n, double x) {
  const Dec z = Dec(-2) * Dec(x) * n;
  std::vector<std::vector<Dec>> m(n, std::vector<Dec>(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) m[k][j] = bessel_i(k - j, z);
  return cofactor_determinant(m);
}

// (1/2pi) integral of exp(-2 x cos theta): the U(1) model. The periodic
// trapezoid rule converges geometrically for this analytic integrand.
inline double u1_quadrature(double x, int points = 4000) {
  double sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / points;
    sum += std::exp(-2.0 * x * std::cos(theta));
  }
  return sum / points;
}

// Random quiver with the given vertex count and edge count (self-loops and
// parallel edges allowed).
struct RandomQuiver {
  std::size_t vertices;
  std::vector<std::pair<int, int>> edges;

  quiverloop::Quiver build() const {
    std::vector<std::string> ids;
    for (std::size_t v = 0; v < vertices; ++v) ids.push_back("v" + std::to_string(v));
    std::vector<quiverloop::EdgeSpec> specs;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      specs.push_back({"e" + std::to_string(e), ids[edges[e].first], ids[edges[e].second]});
    }
    return quiverloop::Quiver(ids, specs);
  }
};

inline RandomQuiver random_quiver(std::mt19937_64& gen, std::size_t max_vertices, std::size_t max_edges) {
  RandomQuiver r;
  r.vertices = std::uniform_int_distribution<std::size_t>(1, max_vertices)(gen);
  const std::size_t e = std::uniform_int_distribution<std::size_t>(1, max_edges)(gen);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(r.vertices) - 1);
  for (std::size_t i = 0; i < e; ++i) r.edges.emplace_back(pick(gen), pick(gen));
  return r;
}

}  // namespace oracle
