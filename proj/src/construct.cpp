#include "framekit/construct.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "framekit/random.hpp"

namespace framekit {

namespace {

std::vector<double> sorted_positive(std::vector<double> values, const char* what) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::BadParams, std::string(what) + " must be positive");
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

NormSpec::NormSpec(std::vector<double> norms_squared)
    : values_(sorted_positive(std::move(norms_squared), "squared norms")) {
  if (values_.empty()) throw Error(ErrorCode::BadParams, "norm specification is empty");
}

SpectrumSpec::SpectrumSpec(std::vector<double> eigenvalues)
    : values_(sorted_positive(std::move(eigenvalues), "eigenvalues")) {
  if (values_.empty()) throw Error(ErrorCode::BadParams, "spectrum specification is empty");
}

// ---------------------------------------------------------------------------

Frame spectral_tetris(std::size_t dim, std::size_t count) {
  if (dim == 0) throw Error(ErrorCode::BadParams, "dimension must be positive");
  if (count < 2 * dim) {
    throw Error(ErrorCode::InsufficientRedundancy, "spectral tetris needs at least twice as many vectors as dimensions");
  }
  // Row weights are tracked in units of 1/N so every comparison is exact: the
  // target for each row is M units and a unit singleton contributes N.
  const std::size_t n = dim;
  const std::size_t target = count;
  std::vector<std::size_t> filled(n, 0);
  DenseMatrix synth(n, count);
  std::size_t col = 0;
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t remaining = target - filled[row];
    while (remaining >= n) {
      synth(row, col++) = 1.0;
      remaining -= n;
    }
    if (remaining > 0) {
      // 2x2 block A(x), x = remaining / N, spilling 2 - x onto the next row.
      const double top = std::sqrt(static_cast<double>(remaining) / static_cast<double>(2 * n));
      const double bottom = std::sqrt(static_cast<double>(2 * n - remaining) / static_cast<double>(2 * n));
      synth(row, col) = top;
      synth(row, col + 1) = top;
      synth(row + 1, col) = bottom;
      synth(row + 1, col + 1) = -bottom;
      filled[row + 1] += 2 * n - remaining;
      col += 2;
    }
  }
  std::vector<Vector> vectors;
  vectors.reserve(count);
  for (std::size_t j = 0; j < count; ++j) vectors.push_back(synth.column(j));
  return Frame(dim, std::move(vectors), Field::Real);
}

Frame tight_completion(const Frame& f, const Tolerances& tol) {
  if (!is_frame(f, tol)) throw Error(ErrorCode::NotAFrame, "tight completion requires a frame");
  const HermitianEigen eig = hermitian_eig(frame_operator(f), tol);
  const double top = eig.values.front();
  std::vector<Vector> out = f.vectors();
  for (std::size_t j = 1; j < eig.values.size(); ++j) {
    const double gap = top - eig.values[j];
    if (gap > tol.eq_tol * top) out.push_back(scaled(eig.vectors[j], std::sqrt(gap)));
  }
  return Frame(f.dim(), std::move(out), f.field());
}

bool majorization_feasible(const SpectrumSpec& spec, const NormSpec& norms, const Tolerances& tol) {
  const auto& lambda = spec.eigenvalues();
  const auto& a2 = norms.norms_squared();
  if (a2.size() < lambda.size()) return false;
  const double scale = std::max(1.0, total(lambda));
  double lambda_sum = 0.0;
  double norm_sum = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    lambda_sum += lambda[k];
    norm_sum += a2[k];
    if (norm_sum > lambda_sum + tol.eq_tol * scale) return false;
  }
  return std::abs(total(a2) - total(lambda)) <= tol.eq_tol * scale;
}

TightSpecConditions tight_spec_conditions(const NormSpec& norms, std::size_t dim, const Tolerances& tol) {
  const auto& a2 = norms.norms_squared();
  const double sum = total(a2);
  const double slack = tol.eq_tol * std::max(1.0, sum);
  TightSpecConditions c{true, true, true};
  if (a2.size() < dim || dim == 0) return {false, false, false};
  double tail = sum;
  for (std::size_t n = 1; n < dim; ++n) {
    tail -= a2[n - 1];
    if (a2[n - 1] * static_cast<double>(dim - n) > tail + slack) c.tail_average = false;
  }
  c.total_vs_first = sum + slack >= static_cast<double>(dim) * a2.front();
  const double lambda = std::sqrt(static_cast<double>(dim) / sum);
  for (double v : a2) {
    if (lambda * std::sqrt(v) > 1.0 + tol.eq_tol) c.scaled_norms = false;
  }
  return c;
}

bool tight_spec_feasible(const NormSpec& norms, std::size_t dim, const Tolerances& tol) {
  return tight_spec_conditions(norms, dim, tol).total_vs_first;
}

// ---------------------------------------------------------------------------
// Prescribed spectrum and diagonal.
//
// Starting from diag(spectrum, 0...), targets are placed from largest to
// smallest. For the current target t, the two free diagonal positions that
// bracket it most tightly (d_i >= t >= d_j) are rotated in their plane until
// d_i = t; position i is then frozen. The remaining free diagonal still
// majorizes the remaining targets, so the next step is again bracketed. A
// final permutation moves each frozen entry to its target's index.

namespace {

// Unitary change of basis on coordinates (i, j): H <- U^H H U with
// U = [[u0, w0], [u1, w1]] acting on (e_i, e_j).
void rotate_plane(DenseMatrix& h, std::size_t i, std::size_t j, Scalar u0, Scalar u1, Scalar w0, Scalar w1) {
  const std::size_t n = h.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar hi = h(i, k);
    const Scalar hj = h(j, k);
    h(i, k) = std::conj(u0) * hi + std::conj(u1) * hj;
    h(j, k) = std::conj(w0) * hi + std::conj(w1) * hj;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar hi = h(k, i);
    const Scalar hj = h(k, j);
    h(k, i) = hi * u0 + hj * u1;
    h(k, j) = hi * w0 + hj * w1;
  }
}

}  // namespace

DenseMatrix hermitian_with_spectrum_and_diagonal(const std::vector<double>& spectrum,
                                                 const std::vector<double>& diagonal, const Tolerances& tol) {
  const std::size_t m = diagonal.size();
  if (spectrum.size() > m) throw Error(ErrorCode::BadParams, "spectrum longer than the diagonal");
  std::vector<double> padded(spectrum);
  padded.resize(m, 0.0);
  std::sort(padded.begin(), padded.end(), std::greater<>());

  std::vector<std::size_t> target_order(m);
  std::iota(target_order.begin(), target_order.end(), 0);
  std::stable_sort(target_order.begin(), target_order.end(),
                   [&](std::size_t x, std::size_t y) { return diagonal[x] > diagonal[y]; });

  DenseMatrix h = DenseMatrix::diagonal(padded);
  std::vector<bool> frozen(m, false);
  std::vector<std::size_t> position_of_target(m, 0);
  const double scale = std::max(1.0, std::abs(padded.front()));

  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t t = target_order[step];
    const double goal = diagonal[t];
    std::size_t above = m, below = m;
    for (std::size_t p = 0; p < m; ++p) {
      if (frozen[p]) continue;
      const double d = h(p, p).real();
      if (d >= goal && (above == m || d < h(above, above).real())) above = p;
      if (d <= goal && (below == m || d > h(below, below).real())) below = p;
    }
    std::size_t chosen;
    if (step + 1 == m) {
      chosen = above != m ? above : below;
    } else if (above != m && h(above, above).real() - goal <= tol.eq_tol * 1e-3 * scale) {
      chosen = above;
    } else if (below != m && goal - h(below, below).real() <= tol.eq_tol * 1e-3 * scale) {
      chosen = below;
    } else if (above == m || below == m || above == below) {
      throw Error(ErrorCode::MajorizationFails, "spectrum does not majorize the diagonal");
    } else {
      const std::size_t i = above, j = below;
      DenseMatrix block(2, 2, h.field());
      block(0, 0) = h(i, i);
      block(0, 1) = h(i, j);
      block(1, 0) = h(j, i);
      block(1, 1) = h(j, j);
      const HermitianEigen e2 = hermitian_eig(block, tol);
      const double mu1 = e2.values[0], mu2 = e2.values[1];
      double c2 = mu1 - mu2 > 0.0 ? (goal - mu2) / (mu1 - mu2) : 1.0;
      c2 = std::clamp(c2, 0.0, 1.0);
      const double c = std::sqrt(c2), s = std::sqrt(1.0 - c2);
      const Vector& v1 = e2.vectors[0];
      const Vector& v2 = e2.vectors[1];
      const Scalar u0 = c * v1[0] + s * v2[0];
      const Scalar u1 = c * v1[1] + s * v2[1];
      const Scalar w0 = -s * v1[0] + c * v2[0];
      const Scalar w1 = -s * v1[1] + c * v2[1];
      const double trace_pair = h(i, i).real() + h(j, j).real();
      rotate_plane(h, i, j, u0, u1, w0, w1);
      h(i, i) = goal;
      h(j, j) = trace_pair - goal;
      chosen = i;
    }
    frozen[chosen] = true;
    position_of_target[t] = chosen;
  }

  DenseMatrix out(m, m, h.field());
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) out(r, c) = h(position_of_target[r], position_of_target[c]);
  }
  for (std::size_t r = 0; r < m; ++r) out(r, r) = diagonal[r];
  return out;
}

Frame gramian_factor_frame(const DenseMatrix& gram, std::size_t rank, const Tolerances& tol) {
  if (!gram.is_square()) throw Error(ErrorCode::NotSquare, "Gramian must be square");
  const HermitianEigen eig = hermitian_eig(gram, tol);
  const std::size_t m = gram.rows();
  const double top = std::max(eig.values.front(), 0.0);
  if (eig.values.back() < -tol.eq_tol * std::max(top, 1.0)) {
    throw Error(ErrorCode::NotPSD, "Gramian must be positive semidefinite");
  }
  std::size_t numeric_rank = 0;
  for (double v : eig.values)
    if (v > tol.rank_tol * top) ++numeric_rank;
  if (numeric_rank != rank || rank == 0) {
    throw Error(ErrorCode::WrongRank, "Gramian rank " + std::to_string(numeric_rank) + " differs from requested " +
                                          std::to_string(rank));
  }
  // phi_i[k] = sqrt(lambda_k) conj(v_k[i]) gives <phi_j, phi_i> = G_ij.
  std::vector<Vector> vectors(m, Vector(rank));
  for (std::size_t k = 0; k < rank; ++k) {
    const double root = std::sqrt(eig.values[k]);
    for (std::size_t i = 0; i < m; ++i) vectors[i][k] = root * std::conj(eig.vectors[k][i]);
  }
  return Frame(rank, std::move(vectors), gram.field());
}

Frame frame_with_spectrum_and_norms(const SpectrumSpec& spec, const NormSpec& norms, const Tolerances& tol) {
  if (!majorization_feasible(spec, norms, tol)) {
    throw Error(ErrorCode::MajorizationFails, "spectrum does not majorize the squared norms");
  }
  const DenseMatrix g = hermitian_with_spectrum_and_diagonal(spec.eigenvalues(), norms.norms_squared(), tol);
  return gramian_factor_frame(g, spec.size(), tol);
}

Frame equal_norm_with_operator(const SpectrumSpec& spec, std::size_t count, const Tolerances& tol) {
  if (count < spec.size()) throw Error(ErrorCode::BadParams, "need at least as many vectors as dimensions");
  const double a2 = total(spec.eigenvalues()) / static_cast<double>(count);
  return frame_with_spectrum_and_norms(spec, NormSpec(std::vector<double>(count, a2)), tol);
}

Frame random_parseval(std::size_t dim, std::size_t count, std::uint64_t seed, Field field) {
  if (dim == 0 || count < dim) throw Error(ErrorCode::BadParams, "random_parseval needs 0 < N <= M");
  Rng rng(seed);
  // Rows are drawn one after another, so these are exactly the first N rows of
  // a seeded M x M Gaussian matrix; Gram-Schmidt is prefix-stable.
  std::vector<Vector> rows;
  rows.reserve(dim);
  for (std::size_t r = 0; r < dim; ++r) rows.push_back(rng.normal_vector(count, field));
  const auto ortho = gram_schmidt(rows);
  std::vector<Vector> vectors(count, Vector(dim));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t i = 0; i < count; ++i) vectors[i][r] = ortho[r][i];
  return Frame(dim, std::move(vectors), field);
}

Frame simplex_frame(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::BadParams, "dimension must be positive");
  const std::size_t m = dim + 1;
  // (Id - P) e_i with P the projection onto the all-ones direction, normalized.
  std::vector<Vector> lifted;
  lifted.reserve(m);
  const double shift = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    Vector v(m, Scalar{-shift, 0.0});
    v[i] += 1.0;
    lifted.push_back(scaled(v, 1.0 / norm(v)));
  }
  const auto basis = gram_schmidt(std::span<const Vector>(lifted.data(), dim));
  std::vector<Vector> vectors;
  vectors.reserve(m);
  for (const auto& v : lifted) {
    Vector coords(dim);
    for (std::size_t k = 0; k < dim; ++k) coords[k] = inner(v, basis[k]).real();
    vectors.push_back(std::move(coords));
  }
  return Frame(dim, std::move(vectors), Field::Real);
}

// ---------------------------------------------------------------------------
// Scaling

namespace {

// Least squares on the selected columns via Householder QR. Columns whose
// pivot collapses are given a zero coefficient.
std::vector<double> least_squares_columns(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                                          const std::vector<std::size_t>& selected, const std::vector<double>& b) {
  const std::size_t p = selected.size();
  std::vector<double> q(rows * p);  // column-major working copy
  for (std::size_t c = 0; c < p; ++c)
    for (std::size_t r = 0; r < rows; ++r) q[c * rows + r] = a[r * cols + selected[c]];
  std::vector<double> rhs(b);
  std::vector<double> diag(p, 0.0);
  double largest = 0.0;
  for (std::size_t k = 0; k < p && k < rows; ++k) {
    double* col = &q[k * rows];
    double alpha = 0.0;
    for (std::size_t r = k; r < rows; ++r) alpha += col[r] * col[r];
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (col[k] > 0.0) alpha = -alpha;
    // v = x - alpha e_k stored in place.
    col[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t r = k; r < rows; ++r) vnorm2 += col[r] * col[r];
    auto reflect = [&](double* target) {
      double dot = 0.0;
      for (std::size_t r = k; r < rows; ++r) dot += col[r] * target[r];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t r = k; r < rows; ++r) target[r] -= f * col[r];
    };
    for (std::size_t c = k + 1; c < p; ++c) reflect(&q[c * rows]);
    reflect(rhs.data());
    diag[k] = alpha;
    largest = std::max(largest, std::abs(alpha));
  }
  std::vector<double> x(p, 0.0);
  for (std::size_t kk = std::min(p, rows); kk-- > 0;) {
    if (std::abs(diag[kk]) <= 1e-13 * largest) continue;
    double s = rhs[kk];
    for (std::size_t c = kk + 1; c < p; ++c) s -= q[c * rows + kk] * x[c];
    x[kk] = s / diag[kk];
  }
  return x;
}

std::vector<double> residual_vector(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                                    const std::vector<double>& x, const std::vector<double>& b) {
  std::vector<double> r(b);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) r[i] -= a[i * cols + j] * x[j];
  return r;
}

std::vector<double> gradient(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                             const std::vector<double>& r) {
  std::vector<double> w(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) w[j] += a[i * cols + j] * r[i];
  return w;
}

}  // namespace

std::vector<double> nnls(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                         const std::vector<double>& b) {
  if (a.size() != rows * cols || b.size() != rows) throw Error(ErrorCode::DimMismatch, "nnls shape mismatch");
  std::vector<double> x(cols, 0.0);
  std::vector<bool> passive(cols, false);
  double anorm = 0.0, bnorm = 0.0;
  for (double v : a) anorm += v * v;
  for (double v : b) bnorm += v * v;
  const double wtol = 10.0 * std::numeric_limits<double>::epsilon() * std::sqrt(anorm) *
                      std::max(std::sqrt(bnorm), 1.0) * static_cast<double>(std::max(rows, cols));
  const std::size_t max_iter = 3 * cols + 10;

  std::vector<double> w = gradient(a, rows, cols, residual_vector(a, rows, cols, x, b));
  std::vector<bool> blocked(cols, false);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::size_t j = cols;
    for (std::size_t k = 0; k < cols; ++k) {
      if (passive[k] || blocked[k]) continue;
      if (w[k] > wtol && (j == cols || w[k] > w[j])) j = k;
    }
    if (j == cols) break;
    passive[j] = true;

    for (std::size_t inner_iter = 0; inner_iter < max_iter; ++inner_iter) {
      std::vector<std::size_t> sel;
      for (std::size_t k = 0; k < cols; ++k)
        if (passive[k]) sel.push_back(k);
      const std::vector<double> sp = least_squares_columns(a, rows, cols, sel, b);
      std::vector<double> s(cols, 0.0);
      for (std::size_t c = 0; c < sel.size(); ++c) s[sel[c]] = sp[c];

      if (s[j] <= 0.0 && x[j] == 0.0 && inner_iter == 0) {
        // The new column cannot enter with a positive weight; skip it this round.
        passive[j] = false;
        blocked[j] = true;
        break;
      }
      bool all_positive = true;
      for (std::size_t k : sel) all_positive = all_positive && s[k] > 0.0;
      if (all_positive) {
        x = s;
        break;
      }
      double alpha = 1.0;
      for (std::size_t k : sel) {
        if (s[k] <= 0.0) alpha = std::min(alpha, x[k] / (x[k] - s[k]));
      }
      for (std::size_t k = 0; k < cols; ++k) x[k] += alpha * (s[k] - x[k]);
      for (std::size_t k : sel) {
        if (x[k] <= 1e-15) {
          x[k] = 0.0;
          passive[k] = false;
        }
      }
    }
    w = gradient(a, rows, cols, residual_vector(a, rows, cols, x, b));
    if (!blocked[j] || passive[j]) std::fill(blocked.begin(), blocked.end(), false);
  }
  return x;
}

ScalingSolution scale_to_parseval(const Frame& f, const Tolerances& tol) {
  const std::size_t n = f.dim();
  const std::size_t m = f.size();
  const DenseMatrix identity = DenseMatrix::identity(n, f.field());

  ScalingSolution out;
  if (is_parseval(f, tol)) {
    out.feasible = true;
    out.scales.assign(m, 1.0);
    out.residual = (frame_operator(f) - identity).frobenius_norm();
    return out;
  }

  // One equation per independent real coordinate of the Hermitian matrix
  // sum w_i phi_i phi_i^*; off-diagonal rows carry sqrt(2) so the residual is
  // the Frobenius norm of S_w - Id.
  const bool complex = f.field() == Field::Complex;
  std::vector<double> a;
  std::vector<double> b;
  std::size_t rows = 0;
  const double root2 = std::sqrt(2.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r; c < n; ++c) {
      const double weight = r == c ? 1.0 : root2;
      for (int part = 0; part < (complex && r != c ? 2 : 1); ++part) {
        for (std::size_t i = 0; i < m; ++i) {
          const Scalar entry = f[i][r] * std::conj(f[i][c]);
          a.push_back(weight * (part == 0 ? entry.real() : entry.imag()));
        }
        b.push_back(r == c && part == 0 ? 1.0 : 0.0);
        ++rows;
      }
    }
  }
  const std::vector<double> w = nnls(a, rows, m, b);
  const std::vector<double> r = residual_vector(a, rows, m, w, b);
  double res = 0.0;
  for (double v : r) res += v * v;
  out.residual = std::sqrt(res);
  out.scales.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.scales[i] = std::sqrt(std::max(w[i], 0.0));
  out.feasible = out.residual <= tol.eq_tol;
  return out;
}

}  // namespace framekit
