#include "framekit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "framekit/kernels.hpp"

namespace framekit {

const char* to_string(Field field) { return field == Field::Real ? "real" : "complex"; }

Field join(Field a, Field b) { return (a == Field::Complex || b == Field::Complex) ? Field::Complex : Field::Real; }

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SingularForNegativePower: return "SingularForNegativePower";
    case ErrorCode::DependentInput: return "DependentInput";
    case ErrorCode::NotOrthonormalInput: return "NotOrthonormalInput";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::NotOrthogonalRanges: return "NotOrthogonalRanges";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotParseval: return "NotParseval";
    case ErrorCode::InsufficientRedundancy: return "InsufficientRedundancy";
    case ErrorCode::MajorizationFails: return "MajorizationFails";
    case ErrorCode::WrongRank: return "WrongRank";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NotUnitNorm: return "NotUnitNorm";
    case ErrorCode::DegenerateAlpha: return "DegenerateAlpha";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ComplexUnsupported: return "ComplexUnsupported";
    case ErrorCode::TooManyPermutations: return "TooManyPermutations";
    case ErrorCode::NotTight: return "NotTight";
    case ErrorCode::LocalNotFrame: return "LocalNotFrame";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  if (!(eq_tol > 0.0) || !(eig_offdiag_tol > 0.0) || !(rank_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  }
}

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Field field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols, Scalar{0.0, 0.0}) {}

DenseMatrix DenseMatrix::identity(std::size_t n, Field field) {
  DenseMatrix m(n, n, field);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
  DenseMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::DimMismatch, "ragged matrix rows");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<Vector>& rows, Field field) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  DenseMatrix m(rows.size(), c, field);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::DimMismatch, "ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vector>& cols, std::size_t rows, Field field) {
  DenseMatrix m(rows, cols.size(), field);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(ErrorCode::DimMismatch, "column length does not match row count");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

void DenseMatrix::set_field(Field field) {
  field_ = field;
  if (field == Field::Real) {
    for (auto& v : data_) v.imag(0.0);
  }
}

Vector DenseMatrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
  return out;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix out(cols_, rows_, field_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

double DenseMatrix::frobenius_norm() const { return std::sqrt(kernels::norm_sq(data_)); }

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::hermitian_defect() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  }
  return d;
}

Vector DenseMatrix::apply(std::span<const Scalar> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::DimMismatch, "matrix-vector dimension mismatch");
  Vector y(rows_, Scalar{0.0, 0.0});
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar acc{0.0, 0.0};
    const auto r = row(i);
    for (std::size_t k = 0; k < cols_; ++k) acc += r[k] * x[k];
    y[i] = acc;
  }
  return y;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::DimMismatch, "matrix sum shape mismatch");
  kernels::axpy(Scalar{1.0, 0.0}, other.data_, data_);
  field_ = join(field_, other.field_);
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::DimMismatch, "matrix difference shape mismatch");
  kernels::axpy(Scalar{-1.0, 0.0}, other.data_, data_);
  field_ = join(field_, other.field_);
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(Scalar alpha) {
  kernels::active().scale(alpha, data_.data(), data_.data(), data_.size());
  if (alpha.imag() != 0.0) field_ = Field::Complex;
  return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimMismatch, "matrix product shape mismatch");
  DenseMatrix c(a.rows_, b.cols_, join(a.field_, b.field_));
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar aik = a(i, k);
      if (aik != Scalar{0.0, 0.0}) kernels::axpy(aik, b.row(k), out);
    }
  }
  return c;
}

bool approx_equal(const DenseMatrix& a, const DenseMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).frobenius_norm() <= tol * std::max(1.0, b.frobenius_norm());
}

// ---------------------------------------------------------------------------
// Vectors

Scalar inner(std::span<const Scalar> x, std::span<const Scalar> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimMismatch, "inner product of vectors with different lengths");
  return kernels::dotc(y, x);
}

double norm_sq(std::span<const Scalar> x) { return kernels::norm_sq(x); }
double norm(std::span<const Scalar> x) { return std::sqrt(kernels::norm_sq(x)); }

Vector scaled(std::span<const Scalar> x, Scalar alpha) {
  Vector out(x.size());
  kernels::active().scale(alpha, x.data(), out.data(), x.size());
  return out;
}

Vector sum(std::span<const Scalar> x, std::span<const Scalar> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimMismatch, "vector sum length mismatch");
  Vector out(x.begin(), x.end());
  kernels::axpy(Scalar{1.0, 0.0}, y, out);
  return out;
}

Vector difference(std::span<const Scalar> x, std::span<const Scalar> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimMismatch, "vector difference length mismatch");
  Vector out(x.begin(), x.end());
  kernels::axpy(Scalar{-1.0, 0.0}, y, out);
  return out;
}

Field field_of(std::span<const Scalar> x) {
  return std::any_of(x.begin(), x.end(), [](const Scalar& v) { return v.imag() != 0.0; }) ? Field::Complex
                                                                                         : Field::Real;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver: cyclic complex Jacobi.

namespace {

constexpr std::size_t kMaxSweeps = 100;

// Rotate so the first component with magnitude above the threshold is real
// and positive.
void normalize_phase(Vector& v) {
  double largest = 0.0;
  for (const auto& x : v) largest = std::max(largest, std::abs(x));
  for (const auto& x : v) {
    if (std::abs(x) > 1e-8 * largest) {
      const Scalar phase = std::conj(x) / std::abs(x);
      for (auto& y : v) y *= phase;
      return;
    }
  }
}

void orthonormalize_in_place(std::vector<Vector>& block) {
  for (std::size_t k = 0; k < block.size(); ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        kernels::axpy(-kernels::dotc(block[j], block[k]), block[j], block[k]);
      }
    }
    const double n = norm(block[k]);
    for (auto& x : block[k]) x /= n;
  }
}

bool lexicographically_greater(const Vector& a, const Vector& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].real() != b[k].real()) return a[k].real() > b[k].real();
    if (a[k].imag() != b[k].imag()) return a[k].imag() > b[k].imag();
  }
  return false;
}

}  // namespace

HermitianEigen hermitian_eig(const DenseMatrix& a, const Tolerances& tol) {
  tol.validate();
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "hermitian_eig requires a square matrix");
  const std::size_t n = a.rows();
  const double scale = a.max_abs();
  if (a.hermitian_defect() > tol.eq_tol * std::max(scale, std::numeric_limits<double>::min())) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
  }

  // Symmetrized working copy; e holds V^H so every update is a row rotation.
  DenseMatrix h(n, n, a.field());
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Scalar v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  DenseMatrix e = DenseMatrix::identity(n, a.field());

  const double fro = h.frobenius_norm();
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = fro * 1e-30;
  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
  };

  std::size_t sweeps = 0;
  bool converged = (fro == 0.0);
  while (!converged && sweeps < kMaxSweeps) {
    ++sweeps;
    std::size_t rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Scalar b = h(p, q);
        const double mag = std::abs(b);
        const double app = h(p, p).real();
        const double aqq = h(q, q).real();
        if (mag <= floor || mag <= eps * std::sqrt(std::abs(app) * std::abs(aqq))) {
          if (mag != 0.0 && mag <= floor) {
            h(p, q) = 0.0;
            h(q, p) = 0.0;
          }
          continue;
        }
        ++rotations;
        const Scalar w = b / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Scalar ra{c, 0.0}, rb = -s * w, rc{s, 0.0}, rd = c * w;
        kernels::rotate(h.row(p), h.row(q), ra, rb, rc, rd);
        kernels::rotate(e.row(p), e.row(q), ra, rb, rc, rd);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          h(k, p) = std::conj(h(p, k));
          h(k, q) = std::conj(h(q, k));
        }
        h(p, p) = app - t * mag;
        h(q, q) = aqq + t * mag;
        h(p, q) = 0.0;
        h(q, p) = 0.0;
      }
    }
    if (rotations == 0) converged = true;
  }
  if (!converged && off_diagonal() > tol.eig_offdiag_tol * fro) {
    throw Error(ErrorCode::NoConvergence, "Jacobi sweep budget exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return h(x, x).real() > h(y, y).real(); });

  HermitianEigen out;
  out.sweeps = sweeps;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t idx : order) {
    out.values.push_back(h(idx, idx).real());
    Vector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = std::conj(e(idx, k));
    if (a.field() == Field::Real) {
      for (auto& x : v) x.imag(0.0);
    }
    out.vectors.push_back(std::move(v));
  }

  // Numerically degenerate clusters: re-orthonormalize, fix phases, order
  // lexicographically.
  double spread = 0.0;
  for (double v : out.values) spread = std::max(spread, std::abs(v));
  const double tie = tol.eq_tol * spread;
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && out.values[stop - 1] - out.values[stop] <= tie) ++stop;
    std::vector<Vector> block(out.vectors.begin() + start, out.vectors.begin() + stop);
    if (block.size() > 1) orthonormalize_in_place(block);
    for (auto& v : block) normalize_phase(v);
    if (block.size() > 1) {
      std::vector<std::size_t> idx(block.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(),
                [&](std::size_t x, std::size_t y) { return lexicographically_greater(block[x], block[y]); });
      std::vector<double> vals(out.values.begin() + start, out.values.begin() + stop);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        out.vectors[start + k] = block[idx[k]];
        out.values[start + k] = vals[k];
      }
    } else {
      out.vectors[start] = block.front();
    }
    start = stop;
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const DenseMatrix& a, const Tolerances& tol) {
  return hermitian_eig(a, tol).values;
}

DenseMatrix HermitianEigen::reconstruct(Field field) const {
  const std::size_t n = vectors.empty() ? 0 : vectors.front().size();
  DenseMatrix out(n, n, field);
  Vector vc(n);
  for (std::size_t j = 0; j < values.size(); ++j) {
    const Vector& v = vectors[j];
    for (std::size_t k = 0; k < n; ++k) vc[k] = std::conj(v[k]);
    for (std::size_t r = 0; r < n; ++r) kernels::axpy(values[j] * v[r], std::span<const Scalar>(vc), out.row(r));
  }
  if (field == Field::Real) out.set_field(Field::Real);
  return out;
}

namespace {

// sum_j f(lambda_j) v_j v_j^*
DenseMatrix spectral_function(const HermitianEigen& eig, Field field, const std::vector<double>& f) {
  HermitianEigen mapped{f, eig.vectors, eig.sweeps};
  DenseMatrix out = mapped.reconstruct(field);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    out(i, i).imag(0.0);
    for (std::size_t j = i + 1; j < out.cols(); ++j) {
      const Scalar v = 0.5 * (out(i, j) + std::conj(out(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

}  // namespace

DenseMatrix matrix_power(const DenseMatrix& a, double power, const Tolerances& tol) {
  const HermitianEigen eig = hermitian_eig(a, tol);
  const std::size_t n = eig.values.size();
  if (n == 0) return DenseMatrix(0, 0, a.field());
  double largest = 0.0;
  for (double v : eig.values) largest = std::max(largest, std::abs(v));
  const double smallest = eig.values.back();
  if (smallest < -tol.eq_tol * largest) {
    throw Error(ErrorCode::NotPSD, "matrix_power requires a positive semidefinite matrix");
  }
  if (power < 0.0 && !(smallest > tol.rank_tol * largest)) {
    throw Error(ErrorCode::SingularForNegativePower, "negative power of a singular matrix");
  }
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = std::max(eig.values[j], 0.0);
    f[j] = power == 0.0 ? 1.0 : std::pow(lam, power);
  }
  return spectral_function(eig, a.field(), f);
}

double operator_norm(const DenseMatrix& a, const Tolerances& tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const DenseMatrix ah = a.adjoint();
  const DenseMatrix g = a.rows() < a.cols() ? a * ah : ah * a;
  const auto values = hermitian_eigenvalues(g, tol);
  return std::sqrt(std::max(values.front(), 0.0));
}

// ---------------------------------------------------------------------------
// Orthogonalization

namespace {

// Projects v against an orthonormal set twice; returns the residual norm.
double orthogonalize(Vector& v, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : basis) kernels::axpy(-kernels::dotc(e, v), e, v);
  }
  return norm(v);
}

}  // namespace

std::vector<Vector> gram_schmidt(std::span<const Vector> vectors, const Tolerances& tol) {
  tol.validate();
  std::vector<Vector> basis;
  basis.reserve(vectors.size());
  const std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != dim) throw Error(ErrorCode::DimMismatch, "gram_schmidt inputs differ in length");
    const double original = norm(vectors[k]);
    Vector v = vectors[k];
    const double residual = orthogonalize(v, basis);
    if (original == 0.0 || residual <= tol.rank_tol * original) {
      throw Error(ErrorCode::DependentInput,
                  "vector " + std::to_string(k) + " is linearly dependent on its predecessors", k);
    }
    for (auto& x : v) x /= residual;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vector> orthonormal_basis(std::span<const Vector> vectors, const Tolerances& tol) {
  tol.validate();
  double largest = 0.0;
  for (const auto& v : vectors) largest = std::max(largest, norm(v));
  std::vector<Vector> basis;
  if (largest == 0.0) return basis;
  const std::size_t dim = vectors.front().size();
  for (const auto& original : vectors) {
    if (original.size() != dim) throw Error(ErrorCode::DimMismatch, "spanning set vectors differ in length");
    if (basis.size() == dim) break;
    Vector v = original;
    const double residual = orthogonalize(v, basis);
    if (residual <= tol.rank_tol * largest) continue;
    for (auto& x : v) x /= residual;
    basis.push_back(std::move(v));
  }
  return basis;
}

DenseMatrix unitary_complete(std::span<const Vector> rows, std::size_t dim, const Tolerances& tol) {
  tol.validate();
  if (rows.size() > dim) throw Error(ErrorCode::NotOrthonormalInput, "more rows than the ambient dimension");
  Field field = Field::Real;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw Error(ErrorCode::DimMismatch, "row length does not match dimension");
    field = join(field, field_of(rows[i]));
    for (std::size_t j = 0; j <= i; ++j) {
      const Scalar g = inner(rows[i], rows[j]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(g - expected) > tol.eq_tol) {
        throw Error(ErrorCode::NotOrthonormalInput, "rows are not orthonormal within tolerance");
      }
    }
  }

  std::vector<Vector> basis(rows.begin(), rows.end());
  std::vector<bool> used(dim, false);
  while (basis.size() < dim) {
    // Take the standard basis candidate with the largest residual; lowest
    // index wins ties.
    double best = -1.0;
    std::size_t best_index = 0;
    Vector best_vec;
    for (std::size_t c = 0; c < dim; ++c) {
      if (used[c]) continue;
      Vector v(dim, Scalar{0.0, 0.0});
      v[c] = 1.0;
      const double r = orthogonalize(v, basis);
      if (r > best) {
        best = r;
        best_index = c;
        best_vec = std::move(v);
      }
    }
    if (best <= tol.rank_tol) throw Error(ErrorCode::NotOrthonormalInput, "could not extend rows to a basis");
    used[best_index] = true;
    for (auto& x : best_vec) x /= best;
    if (field == Field::Real) {
      for (auto& x : best_vec) x.imag(0.0);
    }
    basis.push_back(std::move(best_vec));
  }
  return DenseMatrix::from_rows(basis, field);
}

DenseMatrix projection_onto_span(std::span<const Vector> vectors, std::size_t dim, const Tolerances& tol) {
  for (const auto& v : vectors) {
    if (v.size() != dim) throw Error(ErrorCode::DimMismatch, "spanning vector length does not match dimension");
  }
  const auto basis = orthonormal_basis(vectors, tol);
  Field field = Field::Real;
  for (const auto& v : vectors) field = join(field, field_of(v));
  HermitianEigen unit;
  unit.values.assign(basis.size(), 1.0);
  unit.vectors = basis;
  if (basis.empty()) return DenseMatrix(dim, dim, field);
  return spectral_function(unit, field, unit.values);
}

Scalar trace(const DenseMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "trace requires a square matrix");
  Scalar t{0.0, 0.0};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

}  // namespace framekit
