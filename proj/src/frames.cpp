#include "framekit/frames.hpp"

#include <algorithm>
#include <cmath>

#include "framekit/kernels.hpp"

namespace framekit {

Frame::Frame(std::size_t dim, std::vector<Vector> vectors, std::optional<Field> field)
    : dim_(dim), vectors_(std::move(vectors)), field_(Field::Real) {
  if (vectors_.empty()) throw Error(ErrorCode::InvalidArgument, "a frame needs at least one vector");
  if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "frame dimension must be positive");
  Field inferred = Field::Real;
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i].size() != dim_) {
      throw Error(ErrorCode::DimMismatch, "frame vector " + std::to_string(i) + " has the wrong length", i);
    }
    inferred = join(inferred, field_of(vectors_[i]));
  }
  if (field && *field == Field::Real && inferred == Field::Complex) {
    throw Error(ErrorCode::InvalidArgument, "complex entries in a real-field frame");
  }
  field_ = field.value_or(inferred);
}

Frame Frame::real(std::initializer_list<std::initializer_list<double>> vectors) {
  std::vector<Vector> vs;
  std::size_t dim = vectors.size() == 0 ? 0 : vectors.begin()->size();
  for (const auto& v : vectors) vs.emplace_back(v.begin(), v.end());
  return Frame(dim, std::move(vs), Field::Real);
}

std::vector<double> Frame::norms() const {
  std::vector<double> out;
  out.reserve(vectors_.size());
  for (const auto& v : vectors_) out.push_back(norm(v));
  return out;
}

namespace {

void require_same_shape(const Frame& f, const Frame& g) {
  if (f.dim() != g.dim() || f.size() != g.size()) {
    throw Error(ErrorCode::DimMismatch, "frames differ in dimension or vector count");
  }
}

Frame with_vectors(const Frame& like, std::vector<Vector> vectors) {
  return Frame(like.dim(), std::move(vectors), like.field() == Field::Real ? std::optional<Field>(Field::Real)
                                                                           : std::optional<Field>(Field::Complex));
}

Frame transform_vectors(const Frame& f, const DenseMatrix& op) {
  std::vector<Vector> out;
  out.reserve(f.size());
  for (const auto& v : f.vectors()) out.push_back(op.apply(v));
  return Frame(op.rows(), std::move(out), join(f.field(), op.field()));
}

}  // namespace

DenseMatrix synthesis_matrix(const Frame& f) { return DenseMatrix::from_columns(f.vectors(), f.dim(), f.field()); }

DenseMatrix analysis_matrix(const Frame& f) { return synthesis_matrix(f).adjoint(); }

CoefficientVector analysis(const Frame& f, std::span<const Scalar> x) {
  if (x.size() != f.dim()) throw Error(ErrorCode::DimMismatch, "analysis input has the wrong dimension");
  CoefficientVector out;
  out.reserve(f.size());
  for (const auto& phi : f.vectors()) out.push_back(inner(x, phi));
  return out;
}

Vector synthesis(const Frame& f, std::span<const Scalar> coefficients) {
  if (coefficients.size() != f.size()) throw Error(ErrorCode::DimMismatch, "coefficient count differs from frame size");
  Vector out(f.dim(), Scalar{0.0, 0.0});
  for (std::size_t i = 0; i < f.size(); ++i) kernels::axpy(coefficients[i], f[i], out);
  return out;
}

DenseMatrix cross_operator(const Frame& f, const Frame& g) {
  require_same_shape(f, g);
  const std::size_t n = f.dim();
  DenseMatrix out(n, n, join(f.field(), g.field()));
  Vector conj_psi(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t k = 0; k < n; ++k) conj_psi[k] = std::conj(g[i][k]);
    for (std::size_t r = 0; r < n; ++r) {
      const Scalar coeff = f[i][r];
      if (coeff != Scalar{0.0, 0.0}) kernels::axpy(coeff, std::span<const Scalar>(conj_psi), out.row(r));
    }
  }
  return out;
}

DenseMatrix frame_operator(const Frame& f) {
  DenseMatrix s = cross_operator(f, f);
  for (std::size_t i = 0; i < s.rows(); ++i) s(i, i).imag(0.0);
  return s;
}

DenseMatrix gramian(const Frame& f) {
  const std::size_t m = f.size();
  DenseMatrix g(m, m, f.field());
  for (std::size_t i = 0; i < m; ++i) {
    g(i, i) = norm_sq(f[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      const Scalar v = inner(f[j], f[i]);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

FrameBounds frame_bounds(const Frame& f, const Tolerances& tol) {
  const auto values = hermitian_eigenvalues(frame_operator(f), tol);
  return {std::max(values.back(), 0.0), std::max(values.front(), 0.0)};
}

bool is_frame(const Frame& f, const Tolerances& tol) {
  const FrameBounds b = frame_bounds(f, tol);
  return b.upper > 0.0 && b.lower > tol.rank_tol * b.upper;
}

bool is_parseval(const Frame& f, const Tolerances& tol) {
  return approx_equal(frame_operator(f), DenseMatrix::identity(f.dim(), f.field()), tol.eq_tol);
}

namespace {

DenseMatrix frame_operator_power(const Frame& f, double power, const Tolerances& tol) {
  if (!is_frame(f, tol)) throw Error(ErrorCode::NotAFrame, "vectors do not span the space");
  return matrix_power(frame_operator(f), power, tol);
}

}  // namespace

Frame canonical_dual(const Frame& f, const Tolerances& tol) {
  return transform_vectors(f, frame_operator_power(f, -1.0, tol));
}

Frame canonical_parseval(const Frame& f, const Tolerances& tol) {
  return transform_vectors(f, frame_operator_power(f, -0.5, tol));
}

bool is_dual_pair(const Frame& f, const Frame& g, const Tolerances& tol) {
  require_same_shape(f, g);
  return approx_equal(cross_operator(f, g), DenseMatrix::identity(f.dim(), f.field()), tol.eq_tol);
}

Frame make_alternate_dual(const Frame& f, const Frame& perturbation, const Tolerances& tol) {
  require_same_shape(f, perturbation);
  const DenseMatrix cross = cross_operator(f, perturbation);
  const double scale = operator_norm(synthesis_matrix(f), tol) * operator_norm(synthesis_matrix(perturbation), tol);
  if (cross.frobenius_norm() > tol.eq_tol * scale) {
    throw Error(ErrorCode::NotOrthogonalRanges, "ranges of the two analysis operators are not orthogonal");
  }
  const Frame dual = canonical_dual(f, tol);
  std::vector<Vector> out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(sum(dual[i], perturbation[i]));
  return Frame(f.dim(), std::move(out), join(f.field(), perturbation.field()));
}

CoefficientVector minimal_coefficients(const Frame& f, std::span<const Scalar> x, const Tolerances& tol) {
  if (x.size() != f.dim()) throw Error(ErrorCode::DimMismatch, "vector has the wrong dimension");
  const Vector sx = frame_operator_power(f, -1.0, tol).apply(x);
  return analysis(f, sx);
}

Frame apply_operator(const Frame& f, const DenseMatrix& op) {
  if (!op.is_square() || op.cols() != f.dim()) {
    throw Error(ErrorCode::DimMismatch, "operator must be square with the frame's dimension");
  }
  return transform_vectors(f, op);
}

Frame project_frame(const Frame& f, std::span<const Vector> subspace, const Tolerances& tol) {
  for (const auto& v : subspace) {
    if (v.size() != f.dim()) throw Error(ErrorCode::DimMismatch, "subspace vector has the wrong dimension");
  }
  const auto basis = orthonormal_basis(subspace, tol);
  if (basis.empty()) throw Error(ErrorCode::InvalidArgument, "subspace is trivial");
  Field field = f.field();
  for (const auto& b : basis) field = join(field, field_of(b));
  std::vector<Vector> out;
  out.reserve(f.size());
  for (const auto& phi : f.vectors()) {
    Vector coords(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) coords[k] = inner(phi, basis[k]);
    out.push_back(std::move(coords));
  }
  return Frame(basis.size(), std::move(out), field);
}

DenseMatrix naimark_complete(const Frame& f, const Tolerances& tol) {
  if (!is_parseval(f, tol)) throw Error(ErrorCode::NotParseval, "Naimark completion requires a Parseval frame");
  const DenseMatrix synth = synthesis_matrix(f);
  std::vector<Vector> rows;
  rows.reserve(f.dim());
  for (std::size_t r = 0; r < f.dim(); ++r) rows.emplace_back(synth.row(r).begin(), synth.row(r).end());
  if (f.size() < f.dim()) throw Error(ErrorCode::NotParseval, "fewer vectors than dimensions");
  DenseMatrix u = unitary_complete(rows, f.size(), tol);
  if (f.field() == Field::Complex) u.set_field(Field::Complex);
  return u;
}

double frame_distance(const Frame& f, const Frame& g) {
  require_same_shape(f, g);
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d += norm_sq(difference(f[i], g[i]));
  return d;
}

Frame nearest_equal_norm(const Frame& f) {
  const auto norms = f.norms();
  double mean = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] == 0.0) throw Error(ErrorCode::ZeroVector, "zero vector has no direction", i);
    mean += norms[i];
  }
  mean /= static_cast<double>(norms.size());
  std::vector<Vector> out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(scaled(f[i], mean / norms[i]));
  return with_vectors(f, std::move(out));
}

NearestParseval nearest_parseval(const Frame& f, const Tolerances& tol) {
  Frame p = canonical_parseval(f, tol);
  const double d = frame_distance(f, p);
  return {std::move(p), d};
}

TraceFormula trace_formula_check(const Frame& f, const DenseMatrix& op, const Tolerances& tol) {
  if (!op.is_square() || op.rows() != f.dim()) throw Error(ErrorCode::DimMismatch, "operator shape mismatch");
  if (!is_parseval(f, tol)) throw Error(ErrorCode::NotParseval, "trace formula requires a Parseval frame");
  Scalar rhs{0.0, 0.0};
  for (const auto& phi : f.vectors()) rhs += inner(op.apply(phi), phi);
  return {trace(op), rhs};
}

Frame remove_vector(const Frame& f, std::size_t index) {
  if (index >= f.size()) throw Error(ErrorCode::InvalidArgument, "index out of range");
  std::vector<Vector> out;
  out.reserve(f.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (i != index) out.push_back(f[i]);
  return with_vectors(f, std::move(out));
}

Frame permuted(const Frame& f, std::span<const std::size_t> order) {
  if (order.size() != f.size()) throw Error(ErrorCode::DimMismatch, "permutation length differs from frame size");
  std::vector<Vector> out;
  out.reserve(order.size());
  for (std::size_t i : order) {
    if (i >= f.size()) throw Error(ErrorCode::InvalidArgument, "permutation index out of range");
    out.push_back(f[i]);
  }
  return with_vectors(f, std::move(out));
}

Frame normalized(const Frame& f) {
  std::vector<Vector> out;
  out.reserve(f.size());
  for (const auto& v : f.vectors()) {
    const double n = norm(v);
    out.push_back(n == 0.0 ? v : scaled(v, 1.0 / n));
  }
  return with_vectors(f, std::move(out));
}

}  // namespace framekit
