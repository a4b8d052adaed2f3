#pragma once

// Fusion frames: weighted families of subspaces of H^N.

#include <cstddef>
#include <optional>
#include <vector>

#include "framekit/frames.hpp"

namespace framekit {

struct SubspaceSpec {
  std::vector<Vector> spanning;  // linearly independent; orthonormalized on ingestion
  double weight = 1.0;
  std::optional<std::vector<Vector>> local_frame;  // ambient coordinates, inside the subspace
};

class FusionFrame {
 public:
  FusionFrame(std::size_t dim, const std::vector<SubspaceSpec>& subspaces, const Tolerances& tol = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return bases_.size(); }
  Field field() const noexcept { return field_; }
  const std::vector<Vector>& basis(std::size_t i) const { return bases_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::optional<std::vector<Vector>>& local_frame(std::size_t i) const { return locals_[i]; }
  bool has_local_frames() const;

 private:
  std::size_t dim_;
  Field field_;
  std::vector<std::vector<Vector>> bases_;
  std::vector<double> weights_;
  std::vector<std::optional<std::vector<Vector>>> locals_;
};

struct FusionBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// S_W = sum_i v_i^2 P_{W_i}
DenseMatrix fusion_operator(const FusionFrame& ff);
FusionBounds fusion_bounds(const FusionFrame& ff, const Tolerances& tol = {});
bool is_fusion_frame(const FusionFrame& ff, const Tolerances& tol = {});

// (v_i P_{W_i} x)_i
std::vector<Vector> fusion_analysis(const FusionFrame& ff, std::span<const Scalar> x);

// (sum_i v_i^2 dim W_i) / N; throws NotTight unless the fusion bounds agree.
double tight_redundancy(const FusionFrame& ff, const Tolerances& tol = {});

// The family {v_i phi_ij} over all local frames.
Frame flattened_frame(const FusionFrame& ff);

struct LocalGlobalReport {
  double local_lower = 0.0;   // A = inf A_i
  double local_upper = 0.0;   // B = sup B_i
  FusionBounds fusion;        // (C, D)
  FrameBounds flattened;      // (C', D')
  bool lower_holds = false;   // A C <= C'
  bool upper_holds = false;   // D' <= B D
  bool converse_lower = false;  // C' / B <= C
  bool converse_upper = false;  // D <= D' / A
  bool all() const { return lower_holds && upper_holds && converse_lower && converse_upper; }
};

// Local bounds default to the inf/sup of the per-subspace optimal bounds; when
// given explicitly they must enclose every local frame's bounds.
LocalGlobalReport local_global_check(const FusionFrame& ff, std::optional<FrameBounds> local_bounds = std::nullopt,
                                     const Tolerances& tol = {});

}  // namespace framekit
