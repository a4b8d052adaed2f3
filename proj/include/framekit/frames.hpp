#pragma once

// Finite frames over R^N / C^N and the operators attached to them.
//
// Conventions: the analysis operator T maps x to (<x, phi_i>)_i, so T is the
// M x N matrix whose rows are phi_i^*; the synthesis operator T^* has the
// frame vectors as columns; the frame operator is S = T^* T = sum phi_i phi_i^*
// and the Gramian is G = T T^* with G_ij = <phi_j, phi_i>.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "framekit/numerics.hpp"

namespace framekit {

class Frame {
 public:
  // Throws InvalidArgument for an empty list and DimMismatch for vectors whose
  // length differs from dim. The field is inferred from the entries unless
  // given explicitly.
  Frame(std::size_t dim, std::vector<Vector> vectors, std::optional<Field> field = std::nullopt);

  static Frame real(std::initializer_list<std::initializer_list<double>> vectors);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  Field field() const noexcept { return field_; }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  const Vector& operator[](std::size_t i) const { return vectors_[i]; }

  std::vector<double> norms() const;

 private:
  std::size_t dim_;
  std::vector<Vector> vectors_;
  Field field_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

using CoefficientVector = Vector;

DenseMatrix synthesis_matrix(const Frame& f);
DenseMatrix analysis_matrix(const Frame& f);

CoefficientVector analysis(const Frame& f, std::span<const Scalar> x);
Vector synthesis(const Frame& f, std::span<const Scalar> coefficients);

DenseMatrix frame_operator(const Frame& f);
DenseMatrix gramian(const Frame& f);

// T_f^* T_g = sum_i phi_i psi_i^*. Duality of (f, g) means this is the identity.
DenseMatrix cross_operator(const Frame& f, const Frame& g);

// Optimal bounds (lambda_N(S), lambda_1(S)).
FrameBounds frame_bounds(const Frame& f, const Tolerances& tol = {});
bool is_frame(const Frame& f, const Tolerances& tol = {});
bool is_parseval(const Frame& f, const Tolerances& tol = {});

Frame canonical_dual(const Frame& f, const Tolerances& tol = {});
Frame canonical_parseval(const Frame& f, const Tolerances& tol = {});
bool is_dual_pair(const Frame& f, const Frame& g, const Tolerances& tol = {});

// {S^-1 phi_i + psi_i}; requires T_f^* T_psi = 0.
Frame make_alternate_dual(const Frame& f, const Frame& perturbation, const Tolerances& tol = {});

// (<S^-1 x, phi_i>)_i, the minimal l2-norm synthesizing coefficients of x.
CoefficientVector minimal_coefficients(const Frame& f, std::span<const Scalar> x, const Tolerances& tol = {});

// {F phi_i}
Frame apply_operator(const Frame& f, const DenseMatrix& op);

// {P phi_i} in coordinates of an orthonormal basis of span(subspace).
Frame project_frame(const Frame& f, std::span<const Vector> subspace, const Tolerances& tol = {});

// M x M unitary whose first N rows are the rows of synthesis_matrix(f).
DenseMatrix naimark_complete(const Frame& f, const Tolerances& tol = {});

// sum_i ||phi_i - psi_i||^2 (squared; not a metric).
double frame_distance(const Frame& f, const Frame& g);

// {C phi_i / ||phi_i||} with C the mean norm.
Frame nearest_equal_norm(const Frame& f);

struct NearestParseval {
  Frame frame;
  double distance;
};
NearestParseval nearest_parseval(const Frame& f, const Tolerances& tol = {});

struct TraceFormula {
  Scalar lhs;  // Tr F
  Scalar rhs;  // sum_i <F phi_i, phi_i>
};
TraceFormula trace_formula_check(const Frame& f, const DenseMatrix& op, const Tolerances& tol = {});

Frame remove_vector(const Frame& f, std::size_t index);
Frame permuted(const Frame& f, std::span<const std::size_t> order);
// Each vector divided by its norm; zero vectors are kept as zero.
Frame normalized(const Frame& f);

}  // namespace framekit
