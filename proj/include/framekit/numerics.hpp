#pragma once

// Field-generic dense linear algebra used throughout framekit.
//
// All scalars are stored as std::complex<double>. Real-field objects keep
// every imaginary part at exactly zero; operations on real inputs only ever
// produce real outputs, so the field tag is preserved end to end.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace framekit {

using Scalar = std::complex<double>;
using Vector = std::vector<Scalar>;

enum class Field { Real, Complex };

const char* to_string(Field field);
Field join(Field a, Field b);

enum class ErrorCode {
  InvalidArgument,
  NotHermitian,
  NoConvergence,
  NotPSD,
  SingularForNegativePower,
  DependentInput,
  NotOrthonormalInput,
  NotSquare,
  DimMismatch,
  NotAFrame,
  NotOrthogonalRanges,
  ZeroVector,
  NotParseval,
  InsufficientRedundancy,
  MajorizationFails,
  WrongRank,
  BadParams,
  NotUnitNorm,
  DegenerateAlpha,
  TooLarge,
  ComplexUnsupported,
  TooManyPermutations,
  NotTight,
  LocalNotFrame,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  // Offending element, when the failure is tied to one (e.g. DependentInput).
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

struct Tolerances {
  double eq_tol = 1e-9;            // relative equality tolerance
  double eig_offdiag_tol = 1e-12;  // Jacobi stopping threshold, relative to ||A||_F
  double rank_tol = 1e-10;         // rank decisions, relative to the largest eigen/singular value

  void validate() const;
};

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, Field field = Field::Real);

  static DenseMatrix identity(std::size_t n, Field field = Field::Real);
  static DenseMatrix diagonal(std::span<const double> values);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<Vector>& rows, Field field);
  static DenseMatrix from_columns(const std::vector<Vector>& cols, std::size_t rows, Field field);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  Field field() const noexcept { return field_; }
  void set_field(Field field);

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;

  std::span<const Scalar> data() const noexcept { return data_; }

  DenseMatrix adjoint() const;
  double frobenius_norm() const;
  double max_abs() const;
  // max_ij |A_ij - conj(A_ji)|
  double hermitian_defect() const;

  Vector apply(std::span<const Scalar> x) const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(Scalar alpha);

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(Scalar alpha, DenseMatrix a) { return a *= alpha; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_ = Field::Real;
  std::vector<Scalar> data_;
};

// ||a - b||_F <= tol * max(1, ||b||_F)
bool approx_equal(const DenseMatrix& a, const DenseMatrix& b, double tol);

// <x, y> = sum x_k conj(y_k); linear in the first argument.
Scalar inner(std::span<const Scalar> x, std::span<const Scalar> y);
double norm(std::span<const Scalar> x);
double norm_sq(std::span<const Scalar> x);
Vector scaled(std::span<const Scalar> x, Scalar alpha);
Vector sum(std::span<const Scalar> x, std::span<const Scalar> y);
Vector difference(std::span<const Scalar> x, std::span<const Scalar> y);
Field field_of(std::span<const Scalar> x);

struct HermitianEigen {
  std::vector<double> values;   // descending
  std::vector<Vector> vectors;  // vectors[j] pairs with values[j]
  std::size_t sweeps = 0;

  DenseMatrix reconstruct(Field field) const;
};

HermitianEigen hermitian_eig(const DenseMatrix& a, const Tolerances& tol = {});

// Eigenvalues only; same solver.
std::vector<double> hermitian_eigenvalues(const DenseMatrix& a, const Tolerances& tol = {});

// A^power for Hermitian positive semidefinite A. Negative powers require
// min eigenvalue > rank_tol * max eigenvalue.
DenseMatrix matrix_power(const DenseMatrix& a, double power, const Tolerances& tol = {});

// sqrt(lambda_max(A* A)).
double operator_norm(const DenseMatrix& a, const Tolerances& tol = {});

// Classical Gram-Schmidt with one re-orthogonalization pass. Throws
// DependentInput (index of the first offending vector) when a residual drops
// below rank_tol relative to the input vector.
std::vector<Vector> gram_schmidt(std::span<const Vector> vectors, const Tolerances& tol = {});

// Orthonormal basis of span(vectors); dependent and zero vectors are skipped.
std::vector<Vector> orthonormal_basis(std::span<const Vector> vectors, const Tolerances& tol = {});

// Extends K orthonormal rows of length M to an M x M unitary whose first K rows
// are the input rows verbatim.
DenseMatrix unitary_complete(std::span<const Vector> rows, std::size_t dim, const Tolerances& tol = {});

DenseMatrix projection_onto_span(std::span<const Vector> vectors, std::size_t dim,
                                 const Tolerances& tol = {});

Scalar trace(const DenseMatrix& a);

}  // namespace framekit
