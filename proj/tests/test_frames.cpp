#include <doctest.h>

#include <cmath>
#include <random>

#include "framekit/construct.hpp"
#include "framekit/frames.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace framekit;
using testutil::random_frame;
using testutil::to_oracle;

namespace {

const double kR = std::sqrt(2.0 / 3.0);
const double kH = std::sqrt(3.0) / 2.0;

Frame mercedes_parseval() { return Frame::real({{0.0, kR}, {kR * kH, -kR * 0.5}, {-kR * kH, -kR * 0.5}}); }
Frame e1e1e2() { return Frame::real({{1, 0}, {1, 0}, {0, 1}}); }

bool frames_close(const Frame& a, const Frame& b, double tol) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  return frame_distance(a, b) <= tol * tol;
}

// A coefficient vector in ker T^* (synthesis kernel): project a random vector
// off the rows of the synthesis matrix.
Vector kernel_vector(const Frame& f, std::mt19937_64& g) {
  const DenseMatrix synth = synthesis_matrix(f);
  std::vector<Vector> rows;
  for (std::size_t r = 0; r < synth.rows(); ++r) {
    Vector row(synth.cols());
    for (std::size_t c = 0; c < synth.cols(); ++c) row[c] = std::conj(synth(r, c));
    rows.push_back(row);
  }
  const auto basis = orthonormal_basis(rows);
  Vector v = oracle::random_vec(g, f.size(), f.field() == Field::Complex);
  for (const auto& e : basis) v = difference(v, scaled(e, inner(v, e)));
  return v;
}

}  // namespace

TEST_SUITE("frames") {
  TEST_CASE("Frame validation") {
    CHECK_THROWS_AS(Frame(2, {}), Error);
    try {
      Frame(2, {{1.0, 0.0}, {1.0}});
      FAIL("expected DimMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimMismatch);
      CHECK(e.index() == std::optional<std::size_t>(1));
    }
    CHECK(Frame(1, {{Scalar{0.0, 1.0}}}).field() == Field::Complex);
    CHECK(Frame(1, {{1.0}}, Field::Complex).field() == Field::Complex);
    CHECK_THROWS_AS(Frame(1, {{Scalar{0.0, 1.0}}}, Field::Real), Error);
  }

  TEST_CASE("synthesis and analysis examples") {
    CHECK(approx_equal(synthesis_matrix(Frame::real({{1, 0}, {0, 1}})), DenseMatrix::identity(2), 0.0));
    CHECK(approx_equal(synthesis_matrix(e1e1e2()), DenseMatrix::from_rows({{1, 1, 0}, {0, 0, 1}}), 0.0));
    const auto mb = synthesis_matrix(mercedes_parseval());
    CHECK(mb(0, 0) == Scalar{0.0, 0.0});
    CHECK(mb(1, 0).real() == doctest::Approx(kR));
    CHECK(mb(0, 1).real() == doctest::Approx(kR * kH));
    CHECK(mb(1, 2).real() == doctest::Approx(-kR / 2));

    const Vector x34{3.0, 4.0};
    CHECK(analysis(Frame::real({{1, 0}, {0, 1}}), x34) == Vector{3.0, 4.0});
    CHECK(analysis(e1e1e2(), Vector{1.0, 2.0}) == Vector{1.0, 1.0, 2.0});
    CHECK_THROWS_AS(analysis(e1e1e2(), Vector{1.0}), Error);

    std::mt19937_64 g(31);
    for (int trial = 0; trial < 20; ++trial) {
      const bool complex = trial % 2 == 0;
      const Frame f = random_frame(g, 3, 5, complex);
      const Vector x = oracle::random_vec(g, 3, complex);
      const auto t = oracle::adjoint(to_oracle(synthesis_matrix(f)));
      oracle::Mat xc = oracle::zeros(3, 1);
      for (std::size_t i = 0; i < 3; ++i) xc[i][0] = x[i];
      const auto expect = oracle::mul(t, xc);
      const auto got = analysis(f, x);
      for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(got[i] - expect[i][0]) < 1e-13);
      CHECK(approx_equal(analysis_matrix(f), synthesis_matrix(f).adjoint(), 0.0));
    }
  }

  TEST_CASE("frame operator and Gramian") {
    CHECK(approx_equal(frame_operator(e1e1e2()), DenseMatrix::from_rows({{2, 0}, {0, 1}}), 0.0));
    CHECK(approx_equal(frame_operator(mercedes_parseval()), DenseMatrix::identity(2), 1e-15));
    CHECK(approx_equal(gramian(Frame::real({{1, 0}, {0, 1}})), DenseMatrix::identity(2), 0.0));
    CHECK(approx_equal(gramian(Frame::real({{1, 0}, {1, 0}})), DenseMatrix::from_rows({{1, 1}, {1, 1}}), 0.0));
    const DenseMatrix gm = gramian(mercedes_parseval());
    CHECK(approx_equal(gm * gm, gm, 1e-14));

    std::mt19937_64 g(32);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + trial % 5, m = n + trial % 4;
      const bool complex = trial % 2 == 1;
      const Frame f = random_frame(g, n, m, complex);
      const auto t = to_oracle(analysis_matrix(f));
      const auto s_oracle = oracle::mul(oracle::adjoint(t), t);
      CHECK(oracle::fro_diff(to_oracle(frame_operator(f)), s_oracle) < 1e-12 * (1 + oracle::fro(s_oracle)));
      CHECK(oracle::fro_diff(to_oracle(frame_operator(f)), oracle::frame_operator(f.vectors())) < 1e-12 * (1 + oracle::fro(s_oracle)));
      const auto g_oracle = oracle::mul(t, oracle::adjoint(t));
      CHECK(oracle::fro_diff(to_oracle(gramian(f)), g_oracle) < 1e-12 * (1 + oracle::fro(g_oracle)));
      // shared nonzero eigenvalues
      const auto es = hermitian_eigenvalues(frame_operator(f));
      const auto eg = hermitian_eigenvalues(gramian(f));
      for (std::size_t k = 0; k < n; ++k) CHECK(es[k] == doctest::Approx(eg[k]).epsilon(1e-9).scale(es[0]));
      for (std::size_t k = n; k < m; ++k) CHECK(std::abs(eg[k]) < 1e-9 * es[0]);
      // <Sx, x> = sum |<x, phi_i>|^2
      const Vector x = oracle::random_vec(g, n, complex);
      double energy = 0.0;
      for (const auto& c : analysis(f, x)) energy += std::norm(c);
      CHECK(inner(frame_operator(f).apply(x), x).real() == doctest::Approx(energy).epsilon(1e-10));
      // Gramian invertible iff M = N and is_frame
      const bool invertible = eg.back() > 1e-10 * eg.front();
      CHECK(invertible == (m == n && is_frame(f)));
    }
  }

  TEST_CASE("bounds and is_frame") {
    const FrameBounds b = frame_bounds(e1e1e2());
    CHECK(b.lower == doctest::Approx(1.0));
    CHECK(b.upper == doctest::Approx(2.0));
    const FrameBounds p = frame_bounds(mercedes_parseval());
    CHECK(p.lower == doctest::Approx(1.0));
    CHECK(p.upper == doctest::Approx(1.0));
    const Frame single = Frame::real({{1, 0}});
    CHECK(frame_bounds(single).lower == 0.0);
    CHECK(frame_bounds(single).upper == doctest::Approx(1.0));
    CHECK_FALSE(is_frame(single));
    CHECK(is_frame(Frame::real({{1, 0}, {0, 1}, {0, 0}})));
    CHECK(is_frame(simplex_frame(2)));
    CHECK_FALSE(is_frame(Frame::real({{0, 0}, {0, 0}})));
  }

  TEST_CASE("frame inequality sampled, bounds attained on extreme eigenvectors") {
    std::mt19937_64 g(33);
    for (int trial = 0; trial < 10; ++trial) {
      const bool complex = trial % 2 == 0;
      const Frame f = random_frame(g, 4, 7, complex);
      const FrameBounds b = frame_bounds(f);
      for (int k = 0; k < 100; ++k) {
        const Vector x = oracle::random_vec(g, 4, complex);
        double energy = 0.0;
        for (const auto& c : analysis(f, x)) energy += std::norm(c);
        CHECK(energy >= b.lower * norm_sq(x) * (1 - 1e-9));
        CHECK(energy <= b.upper * norm_sq(x) * (1 + 1e-9));
      }
      const auto e = hermitian_eig(frame_operator(f));
      double top = 0.0, bottom = 0.0;
      for (const auto& c : analysis(f, e.vectors.front())) top += std::norm(c);
      for (const auto& c : analysis(f, e.vectors.back())) bottom += std::norm(c);
      CHECK(top == doctest::Approx(b.upper).epsilon(1e-10));
      CHECK(bottom == doctest::Approx(b.lower).epsilon(1e-9));
    }
  }

  TEST_CASE("canonical dual and canonical Parseval examples") {
    CHECK(frames_close(canonical_dual(e1e1e2()), Frame::real({{0.5, 0}, {0.5, 0}, {0, 1}}), 1e-14));
    CHECK(frames_close(canonical_dual(mercedes_parseval()), mercedes_parseval(), 1e-14));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(frames_close(canonical_parseval(e1e1e2()), Frame::real({{s, 0}, {s, 0}, {0, 1}}), 1e-14));
    CHECK(frames_close(canonical_parseval(mercedes_parseval()), mercedes_parseval(), 1e-14));
    try {
      canonical_dual(Frame::real({{1, 0}}));
      FAIL("expected NotAFrame");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotAFrame);
    }
    CHECK_THROWS_AS(canonical_parseval(Frame::real({{1, 0}})), Error);
  }

  TEST_CASE("dual pairs") {
    const Frame onb = Frame::real({{1, 0}, {0, 1}});
    CHECK(is_dual_pair(onb, onb));
    CHECK(is_dual_pair(e1e1e2(), canonical_dual(e1e1e2())));
    CHECK(is_dual_pair(e1e1e2(), Frame::real({{1, 0}, {0, 0}, {0, 1}})));
    CHECK_FALSE(is_dual_pair(e1e1e2(), e1e1e2()));
    CHECK_THROWS_AS(is_dual_pair(onb, e1e1e2()), Error);

    const Frame zero = Frame::real({{0, 0}, {0, 0}, {0, 0}});
    CHECK(frames_close(make_alternate_dual(e1e1e2(), zero), canonical_dual(e1e1e2()), 1e-14));
    const Frame psi = Frame::real({{0.5, 0}, {-0.5, 0}, {0, 0}});
    CHECK(frames_close(make_alternate_dual(e1e1e2(), psi), Frame::real({{1, 0}, {0, 0}, {0, 1}}), 1e-14));
    try {
      make_alternate_dual(e1e1e2(), Frame::real({{1, 0}, {0, 0}, {0, 0}}));
      FAIL("expected NotOrthogonalRanges");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotOrthogonalRanges);
    }

    std::mt19937_64 g(34);
    for (int trial = 0; trial < 20; ++trial) {
      const bool complex = trial % 2 == 0;
      const Frame f = random_frame(g, 3, 6, complex);
      // psi_i = conj(c_i) w with c in ker T_f^*, so T_f^* T_psi = (sum c_i phi_i) w^* = 0.
      const Vector c = kernel_vector(f, g);
      const Vector w = oracle::random_vec(g, 3, complex);
      std::vector<Vector> pv;
      for (std::size_t i = 0; i < 6; ++i) pv.push_back(scaled(w, std::conj(c[i])));
      const Frame psi_frame(3, pv, f.field());
      const Frame dual = make_alternate_dual(f, psi_frame);
      CHECK(is_dual_pair(f, dual));
      // duality survives a joint permutation
      const std::vector<std::size_t> order{5, 3, 1, 0, 2, 4};
      CHECK(is_dual_pair(permuted(f, order), permuted(dual, order)));
    }
  }

  TEST_CASE("minimal coefficients and the moment identity") {
    const auto c = minimal_coefficients(e1e1e2(), Vector{1.0, 0.0});
    CHECK(std::abs(c[0] - 0.5) < 1e-15);
    CHECK(std::abs(c[1] - 0.5) < 1e-15);
    CHECK(std::abs(c[2]) < 1e-15);
    CHECK(norm_sq(c) == doctest::Approx(0.5));
    const Vector b{1.0, 0.0, 0.0};
    CHECK(norm_sq(b) == doctest::Approx(norm_sq(c) + norm_sq(difference(c, b))));
    const auto onb = minimal_coefficients(Frame::real({{1, 0}, {0, 1}}), Vector{3.0, -2.0});
    CHECK(std::abs(onb[0] - 3.0) < 1e-15);
    CHECK(std::abs(onb[1] + 2.0) < 1e-15);

    std::mt19937_64 g(35);
    for (int trial = 0; trial < 20; ++trial) {
      const bool complex = trial % 2 == 1;
      const Frame f = random_frame(g, 3, 7, complex);
      const Vector x = oracle::random_vec(g, 3, complex);
      const auto mc = minimal_coefficients(f, x);
      CHECK(norm(difference(synthesis(f, mc), x)) < 1e-10 * norm(x));
      const Vector alt = sum(mc, kernel_vector(f, g));
      CHECK(norm(difference(synthesis(f, alt), x)) < 1e-9 * (1 + norm(alt)));
      CHECK(norm_sq(alt) == doctest::Approx(norm_sq(mc) + norm_sq(difference(mc, alt))).epsilon(1e-10));
    }
  }

  TEST_CASE("reconstruction with both dual forms") {
    std::mt19937_64 g(36);
    for (int trial = 0; trial < 30; ++trial) {
      const bool complex = trial % 2 == 0;
      const std::size_t n = 1 + trial % 6;
      const Frame f = random_frame(g, n, n + 2, complex);
      const Frame dual = canonical_dual(f);
      const Vector x = oracle::random_vec(g, n, complex);
      Vector r1(n, 0.0), r2(n, 0.0);
      for (std::size_t i = 0; i < f.size(); ++i) {
        r1 = sum(r1, scaled(f[i], inner(x, dual[i])));
        r2 = sum(r2, scaled(dual[i], inner(x, f[i])));
      }
      CHECK(norm(difference(r1, x)) < 1e-9 * norm(x));
      CHECK(norm(difference(r2, x)) < 1e-9 * norm(x));
      CHECK(is_parseval(canonical_parseval(f)));
    }
  }

  TEST_CASE("apply_operator") {
    CHECK(frames_close(apply_operator(e1e1e2(), DenseMatrix::identity(2)), e1e1e2(), 0.0));
    const double d[] = {2.0, 1.0};
    const Frame out = apply_operator(Frame::real({{1, 0}, {0, 1}}), DenseMatrix::diagonal(d));
    CHECK(frames_close(out, Frame::real({{2, 0}, {0, 1}}), 0.0));
    CHECK(approx_equal(frame_operator(out), DenseMatrix::from_rows({{4, 0}, {0, 1}}), 0.0));
    CHECK_THROWS_AS(apply_operator(e1e1e2(), DenseMatrix::identity(3)), Error);

    std::mt19937_64 g(37);
    for (int trial = 0; trial < 20; ++trial) {
      const bool complex = trial % 2 == 1;
      const Frame f = random_frame(g, 3, 5, complex);
      const DenseMatrix op = synthesis_matrix(random_frame(g, 3, 3, complex));
      const Frame h = apply_operator(f, op);
      CHECK(approx_equal(frame_operator(h), op * frame_operator(f) * op.adjoint(), 1e-12));
      CHECK(approx_equal(analysis_matrix(h), analysis_matrix(f) * op.adjoint(), 1e-12));
      CHECK(is_frame(h));
    }
  }

  TEST_CASE("project_frame") {
    const Frame onb3 = Frame::real({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const Frame p = project_frame(onb3, std::vector<Vector>{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    CHECK(p.dim() == 2);
    CHECK(frames_close(p, Frame::real({{1, 0}, {0, 1}, {0, 0}}), 1e-15));
    CHECK(is_parseval(p));
    const Frame q = project_frame(onb3, std::vector<Vector>{{1.0, 1.0, 1.0}});
    CHECK(q.dim() == 1);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(q[i][0]) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(is_parseval(q));

    std::mt19937_64 g(38);
    for (int trial = 0; trial < 10; ++trial) {
      const bool complex = trial % 2 == 0;
      const Frame pf = random_parseval(4, 7, 100 + trial, complex ? Field::Complex : Field::Real);
      std::vector<Vector> sub{oracle::random_vec(g, 4, complex), oracle::random_vec(g, 4, complex)};
      CHECK(is_parseval(project_frame(pf, sub)));
      const Frame f = random_frame(g, 4, 7, complex);
      const FrameBounds fb = frame_bounds(f);
      const FrameBounds pb = frame_bounds(project_frame(f, sub));
      CHECK(pb.lower >= fb.lower * (1 - 1e-9));
      CHECK(pb.upper <= fb.upper * (1 + 1e-9));
    }
  }

  TEST_CASE("naimark completion") {
    const Frame cols = Frame::real({{1, 0}, {0, 1}, {0, 0}});
    CHECK(approx_equal(naimark_complete(cols), DenseMatrix::identity(3), 0.0));
    const DenseMatrix u = naimark_complete(mercedes_parseval());
    CHECK(approx_equal(u * u.adjoint(), DenseMatrix::identity(3), 1e-14));
    const double t = 1.0 / std::sqrt(3.0);
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(u(2, c)) == doctest::Approx(t));
    CHECK(std::abs(u(2, 0) - u(2, 1)) < 1e-14);
    CHECK(std::abs(u(2, 1) - u(2, 2)) < 1e-14);
    try {
      naimark_complete(e1e1e2());
      FAIL("expected NotParseval");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotParseval);
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Frame f = random_parseval(3, 6, seed, seed % 2 ? Field::Complex : Field::Real);
      const DenseMatrix w = naimark_complete(f);
      CHECK((w.adjoint() * w - DenseMatrix::identity(6, w.field())).frobenius_norm() <= 1e-10);
      // P e_i = phi_i: column i of U truncated to the first N rows
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t r = 0; r < 3; ++r) CHECK(w(r, i) == f[i][r]);
    }
  }

  TEST_CASE("distances and nearest frames") {
    CHECK(frame_distance(e1e1e2(), e1e1e2()) == 0.0);
    CHECK(frame_distance(Frame::real({{1, 0}}), Frame::real({{0, 1}})) == doctest::Approx(2.0));
    CHECK(frame_distance(Frame::real({{2, 0}}), Frame::real({{1, 0}})) == doctest::Approx(1.0));
    CHECK_THROWS_AS(frame_distance(e1e1e2(), Frame::real({{1, 0}})), Error);

    CHECK(frames_close(nearest_equal_norm(Frame::real({{2, 0}, {0, 1}})), Frame::real({{1.5, 0}, {0, 1.5}}), 1e-15));
    CHECK(frames_close(nearest_equal_norm(e1e1e2()), e1e1e2(), 0.0));
    try {
      nearest_equal_norm(Frame::real({{1, 0}, {0, 0}}));
      FAIL("expected ZeroVector");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroVector);
      CHECK(e.index() == std::optional<std::size_t>(1));
    }

    const NearestParseval np = nearest_parseval(e1e1e2());
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(frames_close(np.frame, Frame::real({{s, 0}, {s, 0}, {0, 1}}), 1e-14));
    CHECK(np.distance == doctest::Approx(2.0 * (1.0 - s) * (1.0 - s)));
    CHECK(nearest_parseval(mercedes_parseval()).distance < 1e-28);
  }

  TEST_CASE("trace formula") {
    const auto mb = trace_formula_check(mercedes_parseval(), DenseMatrix::identity(2));
    CHECK(std::abs(mb.lhs - 2.0) < 1e-14);
    CHECK(std::abs(mb.rhs - 2.0) < 1e-14);
    const auto z = trace_formula_check(mercedes_parseval(), DenseMatrix(2, 2));
    CHECK(z.lhs == Scalar{0.0, 0.0});
    CHECK(std::abs(z.rhs) < 1e-15);
    CHECK_THROWS_AS(trace_formula_check(e1e1e2(), DenseMatrix::identity(2)), Error);
    std::mt19937_64 g(39);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Frame f = random_parseval(3, 5, seed, Field::Complex);
      const DenseMatrix op = synthesis_matrix(random_frame(g, 3, 3, true));
      const auto t = trace_formula_check(f, op);
      CHECK(std::abs(t.lhs - t.rhs) <= 1e-9 * std::max(1.0, std::abs(t.lhs)));
    }
  }

  TEST_CASE("constants identities and removal") {
    std::mt19937_64 g(40);
    for (int trial = 0; trial < 20; ++trial) {
      const Frame f = random_frame(g, 3, 6, trial % 2 == 0);
      double norms = 0.0;
      for (double v : f.norms()) norms += v * v;
      double eigs = 0.0;
      for (double v : hermitian_eigenvalues(frame_operator(f))) eigs += v;
      CHECK(eigs == doctest::Approx(norms).epsilon(1e-10));
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Frame f = random_parseval(3, 6, seed);
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (norm(f[i]) < 1.0 - 1e-6) CHECK(is_frame(remove_vector(f, i)));
      }
    }
    // A Parseval frame containing a unit vector: removing it loses spanning.
    const Frame with_unit = Frame::real({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    for (std::size_t i = 0; i < 3; ++i) CHECK_FALSE(is_frame(remove_vector(with_unit, i)));
    const Frame mixed(2, {{1.0, 0.0}, {0.0, std::sqrt(0.5)}, {0.0, std::sqrt(0.5)}});
    REQUIRE(is_parseval(mixed));
    CHECK_FALSE(is_frame(remove_vector(mixed, 0)));
    CHECK(is_frame(remove_vector(mixed, 1)));
  }
}
