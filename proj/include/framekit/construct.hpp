#pragma once

// Frame constructions.

#include <cstdint>
#include <vector>

#include "framekit/frames.hpp"

namespace framekit {

// Squared norms a_1^2 >= ... >= a_M^2 > 0. The constructor sorts descending
// and rejects non-positive entries.
class NormSpec {
 public:
  explicit NormSpec(std::vector<double> norms_squared);
  const std::vector<double>& norms_squared() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

// Eigenvalues lambda_1 >= ... >= lambda_N > 0, sorted by the constructor.
class SpectrumSpec {
 public:
  explicit SpectrumSpec(std::vector<double> eigenvalues);
  const std::vector<double>& eigenvalues() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct ScalingSolution {
  bool feasible = false;
  std::vector<double> scales;  // a_i, so that {a_i phi_i} is Parseval when feasible
  double residual = 0.0;       // ||sum a_i^2 phi_i phi_i^* - Id||_F
};

// Sparse unit-norm tight frame of M vectors in dimension N (M >= 2N), built
// column by column from unit singletons and 2x2 blocks.
Frame spectral_tetris(std::size_t dim, std::size_t count);

// f followed by sqrt(lambda_1 - lambda_j) e_j for every eigenpair of S below
// the top eigenvalue.
Frame tight_completion(const Frame& f, const Tolerances& tol = {});

bool majorization_feasible(const SpectrumSpec& spec, const NormSpec& norms, const Tolerances& tol = {});

// The three equivalent conditions for a tight frame with the given norms.
struct TightSpecConditions {
  bool tail_average;    // a_n^2 <= sum_{i>n} a_i^2 / (N - n), 1 <= n < N
  bool total_vs_first;  // sum a_i^2 >= N a_1^2
  bool scaled_norms;    // sqrt(N / sum a_i^2) a_i <= 1 for all i
};
TightSpecConditions tight_spec_conditions(const NormSpec& norms, std::size_t dim, const Tolerances& tol = {});
bool tight_spec_feasible(const NormSpec& norms, std::size_t dim, const Tolerances& tol = {});

// M x M Hermitian matrix with eigenvalues (spectrum, 0, ..., 0) and the given
// diagonal (which the padded spectrum must majorize).
DenseMatrix hermitian_with_spectrum_and_diagonal(const std::vector<double>& spectrum,
                                                 const std::vector<double>& diagonal,
                                                 const Tolerances& tol = {});

Frame frame_with_spectrum_and_norms(const SpectrumSpec& spec, const NormSpec& norms, const Tolerances& tol = {});

Frame equal_norm_with_operator(const SpectrumSpec& spec, std::size_t count, const Tolerances& tol = {});

// N rows of a seeded random M x M orthogonal (unitary) matrix; the columns form
// a Parseval frame.
Frame random_parseval(std::size_t dim, std::size_t count, std::uint64_t seed, Field field = Field::Real);

// N+1 unit vectors in R^N with pairwise inner products -1/N.
Frame simplex_frame(std::size_t dim);

// M vectors in dimension `rank` whose Gramian is F.
Frame gramian_factor_frame(const DenseMatrix& gram, std::size_t rank, const Tolerances& tol = {});

ScalingSolution scale_to_parseval(const Frame& f, const Tolerances& tol = {});

// Nonnegative least squares: argmin ||A x - b||, x >= 0 (Lawson-Hanson active
// set). A is rows x cols, row-major.
std::vector<double> nnls(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                         const std::vector<double>& b);

}  // namespace framekit
