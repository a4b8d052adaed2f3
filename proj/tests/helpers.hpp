#pragma once

#include <random>

#include "framekit/construct.hpp"
#include "framekit/frames.hpp"
#include "framekit/fusion.hpp"
#include "oracles.hpp"

namespace testutil {

inline oracle::Mat to_oracle(const framekit::DenseMatrix& m) {
  oracle::Mat out = oracle::zeros(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

inline framekit::Frame random_frame(std::mt19937_64& g, std::size_t n, std::size_t m, bool complex) {
  std::vector<framekit::Vector> vs;
  for (std::size_t i = 0; i < m; ++i) vs.push_back(oracle::random_vec(g, n, complex));
  return framekit::Frame(n, std::move(vs), complex ? framekit::Field::Complex : framekit::Field::Real);
}

inline framekit::DenseMatrix random_hermitian(std::mt19937_64& g, std::size_t n, bool complex) {
  std::normal_distribution<double> d;
  framekit::DenseMatrix a(n, n, complex ? framekit::Field::Complex : framekit::Field::Real);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = d(g);
    for (std::size_t j = i + 1; j < n; ++j) {
      const framekit::Scalar z{d(g), complex ? d(g) : 0.0};
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

// Union of `layers` randomly rotated orthonormal bases, each cut into blocks of
// random size with a per-layer weight. S_W = (sum of squared weights) Id.
inline framekit::FusionFrame random_tight_fusion(std::mt19937_64& g, std::size_t n, std::size_t layers,
                                                 bool complex) {
  using namespace framekit;
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  std::vector<SubspaceSpec> specs;
  for (std::size_t l = 0; l < layers; ++l) {
    const Frame u = random_parseval(n, n, g(), complex ? Field::Complex : Field::Real);
    const double w = wdist(g);
    std::size_t k = 0;
    while (k < n) {
      const std::size_t len = std::uniform_int_distribution<std::size_t>(1, n - k)(g);
      SubspaceSpec s;
      for (std::size_t j = k; j < k + len; ++j) s.spanning.push_back(u[j]);
      s.weight = w;
      specs.push_back(std::move(s));
      k += len;
    }
  }
  return FusionFrame(n, specs);
}

// Random subspaces with random weights and random local frames of
// dim W_i + extra vectors each.
inline framekit::FusionFrame random_fusion_system(std::mt19937_64& g, std::size_t n, std::size_t count,
                                                  bool complex) {
  using namespace framekit;
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  std::vector<SubspaceSpec> specs;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, n)(g);
    SubspaceSpec s;
    for (std::size_t k = 0; k < d; ++k) s.spanning.push_back(oracle::random_vec(g, n, complex));
    s.weight = wdist(g);
    const auto basis = gram_schmidt(s.spanning);
    std::vector<Vector> local;
    const std::size_t m = d + std::uniform_int_distribution<std::size_t>(0, 3)(g);
    for (std::size_t k = 0; k < m; ++k) {
      const auto c = oracle::random_vec(g, d, complex);
      Vector v(n, Scalar{0.0, 0.0});
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t r = 0; r < n; ++r) v[r] += c[j] * basis[j][r];
      local.push_back(std::move(v));
    }
    s.local_frame = std::move(local);
    specs.push_back(std::move(s));
  }
  return FusionFrame(n, specs);
}

}  // namespace testutil
