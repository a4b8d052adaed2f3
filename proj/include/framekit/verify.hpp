#pragma once

// Diagnostics and property checks for finite frames.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "framekit/frames.hpp"

namespace framekit {

struct FrameReport {
  FrameBounds bounds;
  std::vector<double> norms;
  std::vector<double> eigenvalues;  // of S, descending
  bool is_frame = false;
  bool is_tight = false;
  bool is_parseval = false;
  bool is_equal_norm = false;
  bool is_unit_norm = false;
  // Equal-norm frame (M >= 2) whose vectors have constant pairwise |<phi_i, phi_j>|.
  bool is_equiangular = false;
  // Normalized vectors have constant pairwise |<.,.>|, whatever the norms.
  bool is_equiangular_lines = false;
  bool is_exact = false;
  double coherence = 0.0;
  double redundancy = 0.0;
};

FrameReport frame_report(const Frame& f, const Tolerances& tol = {});

// max_{i != j} |<phi_i, phi_j>| / (||phi_i|| ||phi_j||) over nonzero vectors.
double coherence(const Frame& f);

bool is_exact(const Frame& f, const Tolerances& tol = {});

double welch_bound(std::size_t count, std::size_t dim);

struct WelchCheck {
  bool equality = false;
  double coherence = 0.0;
  double bound = 0.0;
  bool tight = false;
  bool equiangular = false;
};
// Throws NotUnitNorm unless every vector has norm 1 within eq_tol.
WelchCheck welch_check(const Frame& f, const Tolerances& tol = {});
bool welch_equality_check(const Frame& f, const Tolerances& tol = {});

std::size_t gerzon_bound(std::size_t dim, Field field);

struct ETFParams {
  std::size_t dim = 0;
  std::size_t count = 0;
  double alpha = 0.0;  // reciprocal angle; coherence is 1 / alpha
};

struct EtfItem {
  std::string id;
  std::string statement;
  bool applicable = true;
  bool pass = true;
  std::string detail;
};

struct EtfReport {
  std::vector<EtfItem> items;
  const EtfItem& item(const std::string& id) const;
  bool all_pass() const;
};

EtfReport etf_param_check(const ETFParams& p, const Tolerances& tol = {});

inline constexpr std::size_t kSubsetSearchLimit = 22;

struct ComplementResult {
  bool holds = false;
  // A split I / I^c where neither side spans, when one exists.
  std::optional<std::vector<std::size_t>> failing_subset;
  std::size_t subsets_checked = 0;
};

ComplementResult complement_property_search(const Frame& f, const Tolerances& tol = {},
                                            std::size_t limit = kSubsetSearchLimit);
bool complement_property(const Frame& f, const Tolerances& tol = {}, std::size_t limit = kSubsetSearchLimit);
bool does_phase_retrieval_real(const Frame& f, const Tolerances& tol = {}, std::size_t limit = kSubsetSearchLimit);

enum class SearchMode { Exhaustive, Greedy };

inline constexpr std::size_t kExhaustiveOrderingLimit = 9;

struct SparsityResult {
  std::vector<std::size_t> ordering;
  std::size_t total_nonzeros = 0;
  std::vector<Vector> basis;
};

// Number of coordinates of v, in the orthonormal reference basis, whose
// magnitude exceeds eq_tol * ||v||. An empty reference means the standard basis.
std::size_t count_nonzeros(const Vector& v, const std::vector<Vector>& reference, const Tolerances& tol = {});

SparsityResult sparse_gs_search(const Frame& f, const std::vector<Vector>& reference, SearchMode mode,
                                const Tolerances& tol = {});

struct AuditEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ConstantsAudit {
  std::vector<AuditEntry> entries;
  bool all_pass() const;
};

ConstantsAudit constants_audit(const Frame& f, const Tolerances& tol = {});

}  // namespace framekit
