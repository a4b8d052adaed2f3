#include "framekit/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "framekit/kernels.hpp"

namespace framekit {

FusionFrame::FusionFrame(std::size_t dim, const std::vector<SubspaceSpec>& subspaces, const Tolerances& tol)
    : dim_(dim), field_(Field::Real) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "fusion frame dimension must be positive");
  if (subspaces.empty()) throw Error(ErrorCode::InvalidArgument, "a fusion frame needs at least one subspace");
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    const auto& s = subspaces[i];
    if (s.spanning.empty()) throw Error(ErrorCode::InvalidArgument, "subspace has no spanning vectors", i);
    for (const auto& v : s.spanning) {
      if (v.size() != dim) throw Error(ErrorCode::DimMismatch, "subspace vector has the wrong length", i);
      field_ = join(field_, field_of(v));
    }
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) {
      throw Error(ErrorCode::BadParams, "subspace weights must be positive", i);
    }
    auto basis = gram_schmidt(s.spanning, tol);
    if (s.local_frame) {
      if (s.local_frame->empty()) throw Error(ErrorCode::LocalNotFrame, "local frame is empty", i);
      for (const auto& phi : *s.local_frame) {
        if (phi.size() != dim) throw Error(ErrorCode::DimMismatch, "local frame vector has the wrong length", i);
        Vector r = phi;
        for (const auto& e : basis) kernels::axpy(-kernels::dotc(e, r), e, r);
        if (norm(r) > tol.eq_tol * std::max(1.0, norm(phi))) {
          throw Error(ErrorCode::InvalidArgument, "local frame vector lies outside its subspace", i);
        }
        field_ = join(field_, field_of(phi));
      }
    }
    bases_.push_back(std::move(basis));
    weights_.push_back(s.weight);
    locals_.push_back(s.local_frame);
  }
}

bool FusionFrame::has_local_frames() const {
  return std::all_of(locals_.begin(), locals_.end(), [](const auto& l) { return l.has_value(); });
}

DenseMatrix fusion_operator(const FusionFrame& ff) {
  const std::size_t n = ff.dim();
  DenseMatrix s(n, n, ff.field());
  Vector conj_e(n);
  for (std::size_t i = 0; i < ff.size(); ++i) {
    const double w2 = ff.weight(i) * ff.weight(i);
    for (const auto& e : ff.basis(i)) {
      for (std::size_t k = 0; k < n; ++k) conj_e[k] = std::conj(e[k]);
      for (std::size_t r = 0; r < n; ++r) {
        const Scalar coeff = w2 * e[r];
        if (coeff != Scalar{0.0, 0.0}) kernels::axpy(coeff, std::span<const Scalar>(conj_e), s.row(r));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) s(i, i).imag(0.0);
  return s;
}

FusionBounds fusion_bounds(const FusionFrame& ff, const Tolerances& tol) {
  const auto values = hermitian_eigenvalues(fusion_operator(ff), tol);
  return {std::max(values.back(), 0.0), std::max(values.front(), 0.0)};
}

bool is_fusion_frame(const FusionFrame& ff, const Tolerances& tol) {
  const FusionBounds b = fusion_bounds(ff, tol);
  return b.upper > 0.0 && b.lower > tol.rank_tol * b.upper;
}

std::vector<Vector> fusion_analysis(const FusionFrame& ff, std::span<const Scalar> x) {
  if (x.size() != ff.dim()) throw Error(ErrorCode::DimMismatch, "vector has the wrong dimension");
  std::vector<Vector> out;
  out.reserve(ff.size());
  for (std::size_t i = 0; i < ff.size(); ++i) {
    Vector p(ff.dim(), Scalar{0.0, 0.0});
    for (const auto& e : ff.basis(i)) kernels::axpy(ff.weight(i) * kernels::dotc(e, x), e, p);
    out.push_back(std::move(p));
  }
  return out;
}

double tight_redundancy(const FusionFrame& ff, const Tolerances& tol) {
  const FusionBounds b = fusion_bounds(ff, tol);
  if (b.upper - b.lower > tol.eq_tol * std::max(1.0, b.upper)) {
    throw Error(ErrorCode::NotTight, "fusion frame is not tight");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < ff.size(); ++i) {
    total += ff.weight(i) * ff.weight(i) * static_cast<double>(ff.basis(i).size());
  }
  return total / static_cast<double>(ff.dim());
}

Frame flattened_frame(const FusionFrame& ff) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < ff.size(); ++i) {
    if (!ff.local_frame(i)) throw Error(ErrorCode::LocalNotFrame, "subspace has no local frame", i);
    for (const auto& phi : *ff.local_frame(i)) out.push_back(scaled(phi, ff.weight(i)));
  }
  return Frame(ff.dim(), std::move(out), ff.field());
}

LocalGlobalReport local_global_check(const FusionFrame& ff, std::optional<FrameBounds> local_bounds,
                                     const Tolerances& tol) {
  LocalGlobalReport rep;
  double inf_a = std::numeric_limits<double>::infinity();
  double sup_b = 0.0;
  for (std::size_t i = 0; i < ff.size(); ++i) {
    if (!ff.local_frame(i)) throw Error(ErrorCode::LocalNotFrame, "subspace has no local frame", i);
    const auto& basis = ff.basis(i);
    std::vector<Vector> coords;
    for (const auto& phi : *ff.local_frame(i)) {
      Vector c(basis.size());
      for (std::size_t k = 0; k < basis.size(); ++k) c[k] = inner(phi, basis[k]);
      coords.push_back(std::move(c));
    }
    const FrameBounds b = frame_bounds(Frame(basis.size(), std::move(coords), ff.field()), tol);
    if (!(b.upper > 0.0 && b.lower > tol.rank_tol * b.upper)) {
      throw Error(ErrorCode::LocalNotFrame, "local family does not span its subspace", i);
    }
    if (local_bounds && (b.lower < local_bounds->lower * (1.0 - tol.eq_tol) ||
                         b.upper > local_bounds->upper * (1.0 + tol.eq_tol))) {
      throw Error(ErrorCode::InvalidArgument, "local frame bounds fall outside the supplied (A, B)", i);
    }
    inf_a = std::min(inf_a, b.lower);
    sup_b = std::max(sup_b, b.upper);
  }
  rep.local_lower = local_bounds ? local_bounds->lower : inf_a;
  rep.local_upper = local_bounds ? local_bounds->upper : sup_b;
  rep.fusion = fusion_bounds(ff, tol);
  rep.flattened = frame_bounds(flattened_frame(ff), tol);

  const double a = rep.local_lower;
  const double b = rep.local_upper;
  const double c = rep.fusion.lower;
  const double d = rep.fusion.upper;
  const double c1 = rep.flattened.lower;
  const double d1 = rep.flattened.upper;
  auto leq = [&](double x, double y) { return x <= y + tol.eq_tol * std::max(1.0, std::abs(y)); };
  rep.lower_holds = leq(a * c, c1);
  rep.upper_holds = leq(d1, b * d);
  rep.converse_lower = leq(c1 / b, c);
  rep.converse_upper = leq(d, d1 / a);
  return rep;
}

}  // namespace framekit
