#include "framekit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "framekit/kernels.hpp"

namespace framekit {

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double coherence(const Frame& f) {
  const auto norms = f.norms();
  double c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (norms[i] == 0.0) continue;
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (norms[j] == 0.0) continue;
      c = std::max(c, std::abs(inner(f[i], f[j])) / (norms[i] * norms[j]));
    }
  }
  return c;
}

bool is_exact(const Frame& f, const Tolerances& tol) {
  if (!is_frame(f, tol)) throw Error(ErrorCode::NotAFrame, "exactness is defined for frames only");
  if (f.size() == 1) return true;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (is_frame(remove_vector(f, i), tol)) return false;
  }
  return true;
}

FrameReport frame_report(const Frame& f, const Tolerances& tol) {
  FrameReport r;
  r.eigenvalues = hermitian_eigenvalues(frame_operator(f), tol);
  r.bounds = {std::max(r.eigenvalues.back(), 0.0), std::max(r.eigenvalues.front(), 0.0)};
  r.is_frame = r.bounds.upper > 0.0 && r.bounds.lower > tol.rank_tol * r.bounds.upper;
  r.norms = f.norms();
  r.redundancy = static_cast<double>(f.size()) / static_cast<double>(f.dim());

  const double largest = *std::max_element(r.norms.begin(), r.norms.end());
  r.is_equal_norm = largest > 0.0 && std::all_of(r.norms.begin(), r.norms.end(), [&](double n) {
                      return std::abs(n - r.norms.front()) <= tol.eq_tol * largest;
                    });
  r.is_unit_norm =
      std::all_of(r.norms.begin(), r.norms.end(), [&](double n) { return std::abs(n - 1.0) <= tol.eq_tol; });
  r.is_tight = r.is_frame && r.bounds.upper - r.bounds.lower <= tol.eq_tol * std::max(1.0, r.bounds.upper);
  r.is_parseval =
      r.is_tight && std::abs(r.bounds.lower - 1.0) <= tol.eq_tol && std::abs(r.bounds.upper - 1.0) <= tol.eq_tol;

  r.coherence = coherence(f);
  bool lines = f.size() >= 2 && std::none_of(r.norms.begin(), r.norms.end(), [](double n) { return n == 0.0; });
  if (lines) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = i + 1; j < f.size(); ++j) {
        const double c = std::abs(inner(f[i], f[j])) / (r.norms[i] * r.norms[j]);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
    }
    lines = hi - lo <= tol.eq_tol;
  }
  r.is_equiangular_lines = lines;
  r.is_equiangular = lines && r.is_equal_norm;
  r.is_exact = r.is_frame && is_exact(f, tol);
  return r;
}

double welch_bound(std::size_t count, std::size_t dim) {
  if (dim < 1 || count < dim || count < 2) throw Error(ErrorCode::BadParams, "Welch bound needs M >= N >= 1, M >= 2");
  const double m = static_cast<double>(count);
  const double n = static_cast<double>(dim);
  return std::sqrt((m - n) / (n * (m - 1.0)));
}

WelchCheck welch_check(const Frame& f, const Tolerances& tol) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(norm(f[i]) - 1.0) > tol.eq_tol) throw Error(ErrorCode::NotUnitNorm, "frame is not unit-norm", i);
  }
  WelchCheck w;
  w.coherence = coherence(f);
  w.bound = welch_bound(f.size(), f.dim());
  w.equality = std::abs(w.coherence - w.bound) <= tol.eq_tol;
  const FrameReport r = frame_report(f, tol);
  w.tight = r.is_tight;
  w.equiangular = r.is_equiangular;
  return w;
}

bool welch_equality_check(const Frame& f, const Tolerances& tol) { return welch_check(f, tol).equality; }

std::size_t gerzon_bound(std::size_t dim, Field field) {
  if (dim < 1) throw Error(ErrorCode::BadParams, "dimension must be positive");
  return field == Field::Real ? dim * (dim + 1) / 2 : dim * dim;
}

// ---------------------------------------------------------------------------
// ETF parameters

const EtfItem& EtfReport::item(const std::string& id) const {
  for (const auto& it : items)
    if (it.id == id) return it;
  throw Error(ErrorCode::InvalidArgument, "no ETF item named " + id);
}

bool EtfReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const EtfItem& i) { return i.pass; });
}

namespace {

std::optional<long long> as_integer(double v, double tol) {
  const double r = std::round(v);
  if (std::abs(v - r) <= tol * std::max(1.0, std::abs(v))) return static_cast<long long>(r);
  return std::nullopt;
}

bool sum_of_two_squares(long long n) {
  if (n < 0) return false;
  for (long long a = 0; a * a <= n; ++a) {
    const long long rest = n - a * a;
    const auto b = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(rest))));
    for (long long c = std::max(0LL, b - 1); c <= b + 1; ++c)
      if (c * c == rest) return true;
  }
  return false;
}

}  // namespace

EtfReport etf_param_check(const ETFParams& p, const Tolerances& tol) {
  const double n = static_cast<double>(p.dim);
  const double m = static_cast<double>(p.count);
  const double a2 = p.alpha * p.alpha;
  if (std::abs(a2 - n) <= tol.eq_tol * std::max(1.0, n)) {
    throw Error(ErrorCode::DegenerateAlpha, "alpha^2 equals N; the count formula is undefined");
  }
  if (p.dim == 0 || p.count == 0 || !(p.alpha > 0.0)) throw Error(ErrorCode::BadParams, "invalid ETF parameters");

  const auto alpha_int = as_integer(p.alpha, tol.eq_tol);
  const auto alpha2_int = as_integer(a2, tol.eq_tol);
  const long long N = static_cast<long long>(p.dim);
  const long long M = static_cast<long long>(p.count);
  auto eq = [&](double x, double y) { return close(x, y, tol.eq_tol); };

  EtfReport rep;
  {
    EtfItem it{"count-formula", "M = (alpha^2 - 1) N / (alpha^2 - N)", true, true, {}};
    const double predicted = (a2 - 1.0) * n / (a2 - n);
    if (alpha2_int) {
      it.pass = (*alpha2_int - 1) * N == M * (*alpha2_int - N);
    } else {
      it.pass = eq(predicted, m);
    }
    it.detail = "predicted M = " + fmt(predicted) + ", given M = " + std::to_string(M);
    rep.items.push_back(it);
  }
  {
    EtfItem it{"a", "alpha <= N <= alpha^2 - 2", true, true, {}};
    it.pass = p.alpha <= n * (1.0 + tol.eq_tol) && n <= a2 - 2.0 + tol.eq_tol * std::max(1.0, a2);
    it.detail = "alpha = " + fmt(p.alpha) + ", alpha^2 - 2 = " + fmt(a2 - 2.0);
    rep.items.push_back(it);
  }
  {
    EtfItem it{"b", "N = alpha iff M = N + 1", true, true, {}};
    const bool lhs = eq(n, p.alpha);
    const bool rhs = M == N + 1;
    it.pass = lhs == rhs;
    it.detail = std::string("N = alpha: ") + (lhs ? "yes" : "no") + ", M = N + 1: " + (rhs ? "yes" : "no");
    rep.items.push_back(it);
  }
  {
    EtfItem it{"c", "N = alpha^2 - 2 iff M = N(N + 1)/2", true, true, {}};
    const bool lhs = eq(n, a2 - 2.0);
    const bool rhs = 2 * M == N * (N + 1);
    it.pass = lhs == rhs;
    it.detail = std::string("N = alpha^2 - 2: ") + (lhs ? "yes" : "no") + ", M = N(N+1)/2: " + (rhs ? "yes" : "no");
    rep.items.push_back(it);
  }
  {
    EtfItem it{"d", "M = 2N iff alpha^2 = 2N - 1 = a^2 + b^2 for integers a, b", true, true, {}};
    const bool lhs = M == 2 * N;
    const bool rhs = alpha2_int && *alpha2_int == 2 * N - 1 && sum_of_two_squares(*alpha2_int);
    it.pass = lhs == rhs;
    it.detail = std::string("M = 2N: ") + (lhs ? "yes" : "no") + ", alpha^2 = 2N - 1 as a sum of two squares: " +
                (rhs ? "yes" : "no");
    rep.items.push_back(it);
  }
  const bool generic = M != N + 1 && M != 2 * N;
  const std::string skipped = "not applicable: M is N + 1 or 2N";
  {
    EtfItem it{"e", "alpha is an odd integer", true, true, {}};
    it.applicable = generic;
    it.pass = !generic || (alpha_int && (*alpha_int % 2 == 1));
    it.detail = generic ? "alpha = " + fmt(p.alpha) : skipped;
    rep.items.push_back(it);
  }
  {
    EtfItem it{"f", "M is even", true, true, {}};
    it.applicable = generic;
    it.pass = !generic || M % 2 == 0;
    it.detail = generic ? "M = " + std::to_string(M) : skipped;
    rep.items.push_back(it);
  }
  {
    EtfItem it{"g", "alpha divides M - 1", true, true, {}};
    it.applicable = generic;
    it.pass = !generic || (alpha_int && *alpha_int != 0 && (M - 1) % *alpha_int == 0);
    it.detail = generic ? "M - 1 = " + std::to_string(M - 1) : skipped;
    rep.items.push_back(it);
  }
  {
    EtfItem it{"h", "beta = (M - 1)/alpha is the reciprocal angle of the complementary ETF", true, true, {}};
    it.applicable = generic;
    // The complement of a unit-norm ETF lives in dimension M - N; normalizing
    // its Gramian gives reciprocal angle alpha (M - N) / N.
    const double beta = (m - 1.0) / p.alpha;
    const double complement = p.alpha * (m - n) / n;
    it.pass = !generic || eq(beta, complement);
    it.detail = generic ? "beta = " + fmt(beta) + ", complement reciprocal angle = " + fmt(complement) : skipped;
    rep.items.push_back(it);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Complement property

namespace {

// Rank by column-pivoted Gram-Schmidt on the selected vectors; residuals are
// compared with rank_tol times the largest selected norm.
class SubsetSpanTester {
 public:
  SubsetSpanTester(const Frame& f, const Tolerances& tol) : f_(f), tol_(tol) {}

  bool spans(std::uint64_t mask) const {
    const std::size_t n = f_.dim();
    if (static_cast<std::size_t>(std::popcount(mask)) < n) return false;
    std::vector<Vector> work;
    double top = 0.0;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      if (!(mask >> i & 1U)) continue;
      work.push_back(f_[i]);
      top = std::max(top, norm(f_[i]));
    }
    std::vector<double> res(work.size());
    for (std::size_t rank = 0; rank < n; ++rank) {
      std::size_t best = rank;
      for (std::size_t j = rank; j < work.size(); ++j) {
        res[j] = norm(work[j]);
        if (res[j] > res[best]) best = j;
      }
      if (!(res[best] > tol_.rank_tol * top)) return false;
      std::swap(work[rank], work[best]);
      auto& q = work[rank];
      const double inv = 1.0 / norm(q);
      for (auto& x : q) x *= inv;
      for (std::size_t j = rank + 1; j < work.size(); ++j) kernels::axpy(-kernels::dotc(q, work[j]), q, work[j]);
    }
    return true;
  }

 private:
  const Frame& f_;
  const Tolerances& tol_;
};

std::vector<std::size_t> indices_of(std::uint64_t mask, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i)
    if (mask >> i & 1U) out.push_back(i);
  return out;
}

}  // namespace

ComplementResult complement_property_search(const Frame& f, const Tolerances& tol, std::size_t limit) {
  const std::size_t m = f.size();
  const std::size_t n = f.dim();
  if (m > limit || m > 62) {
    throw Error(ErrorCode::TooLarge, "subset search limited to " + std::to_string(limit) + " vectors");
  }
  ComplementResult res;
  if (m + 2 <= 2 * n) {
    // Any N-1 vectors and their complement (at most N-1 vectors) both fail to span.
    std::vector<std::size_t> first(n - 1);
    std::iota(first.begin(), first.end(), 0);
    res.failing_subset = first;
    return res;
  }
  const SubsetSpanTester tester(f, tol);
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  // The last vector always sits in the complement: each split I / I^c is
  // visited once.
  const std::uint64_t masks = std::uint64_t{1} << (m - 1);

  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, masks / 4096));
  std::atomic<std::uint64_t> first_failure{std::numeric_limits<std::uint64_t>::max()};
  std::atomic<std::size_t> checked{0};

  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    std::size_t local = 0;
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      if (mask > first_failure.load(std::memory_order_relaxed)) break;
      ++local;
      if (tester.spans(mask) || tester.spans(full & ~mask)) continue;
      std::uint64_t current = first_failure.load();
      while (mask < current && !first_failure.compare_exchange_weak(current, mask)) {
      }
      break;
    }
    checked += local;
  };

  if (workers <= 1) {
    scan(0, masks);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (masks + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(masks, begin + chunk);
      if (begin < end) pool.emplace_back(scan, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  res.subsets_checked = checked.load();
  const std::uint64_t fail = first_failure.load();
  if (fail == std::numeric_limits<std::uint64_t>::max()) {
    res.holds = true;
  } else {
    res.failing_subset = indices_of(fail, m);
  }
  return res;
}

bool complement_property(const Frame& f, const Tolerances& tol, std::size_t limit) {
  return complement_property_search(f, tol, limit).holds;
}

bool does_phase_retrieval_real(const Frame& f, const Tolerances& tol, std::size_t limit) {
  if (f.field() != Field::Real) {
    throw Error(ErrorCode::ComplexUnsupported, "phase retrieval check is only available for real frames");
  }
  return complement_property(f, tol, limit);
}

// ---------------------------------------------------------------------------
// Sparse Gram-Schmidt ordering

std::size_t count_nonzeros(const Vector& v, const std::vector<Vector>& reference, const Tolerances& tol) {
  const double threshold = tol.eq_tol * norm(v);
  std::size_t count = 0;
  if (reference.empty()) {
    for (const auto& x : v)
      if (std::abs(x) > threshold) ++count;
    return count;
  }
  for (const auto& g : reference)
    if (std::abs(inner(v, g)) > threshold) ++count;
  return count;
}

namespace {

// Residual of v against an orthonormal prefix, normalized; nullopt when dependent.
std::optional<Vector> next_basis_vector(const Vector& v, const std::vector<Vector>& basis, const Tolerances& tol) {
  Vector r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : basis) kernels::axpy(-kernels::dotc(e, r), e, r);
  const double rn = norm(r);
  if (rn <= tol.rank_tol * norm(v)) return std::nullopt;
  for (auto& x : r) x /= rn;
  return r;
}

}  // namespace

SparsityResult sparse_gs_search(const Frame& f, const std::vector<Vector>& reference, SearchMode mode,
                                const Tolerances& tol) {
  const std::size_t k = f.size();
  for (const auto& g : reference) {
    if (g.size() != f.dim()) throw Error(ErrorCode::DimMismatch, "reference basis vector has the wrong length");
  }
  if (!reference.empty() && reference.size() != f.dim()) {
    throw Error(ErrorCode::DimMismatch, "reference basis must have N vectors");
  }
  // Rejects dependent input up front, with the offending index.
  (void)gram_schmidt(f.vectors(), tol);

  std::vector<std::size_t> best_order;
  std::size_t best_total = std::numeric_limits<std::size_t>::max();

  if (mode == SearchMode::Exhaustive) {
    if (k > kExhaustiveOrderingLimit) {
      throw Error(ErrorCode::TooManyPermutations,
                  "exhaustive ordering search limited to " + std::to_string(kExhaustiveOrderingLimit) + " vectors");
    }
    // Depth-first over orderings in lexicographic order, pruning prefixes that
    // cannot beat the best complete ordering found so far.
    std::vector<std::size_t> order;
    std::vector<bool> used(k, false);
    std::vector<Vector> basis;
    std::function<void(std::size_t)> dfs = [&](std::size_t running) {
      if (running >= best_total) return;
      if (order.size() == k) {
        best_total = running;
        best_order = order;
        return;
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (used[i]) continue;
        auto e = next_basis_vector(f[i], basis, tol);
        if (!e) throw Error(ErrorCode::DependentInput, "dependent vector in ordering search", i);
        const std::size_t nz = count_nonzeros(*e, reference, tol);
        used[i] = true;
        order.push_back(i);
        basis.push_back(std::move(*e));
        dfs(running + nz);
        basis.pop_back();
        order.pop_back();
        used[i] = false;
      }
    };
    dfs(0);
  } else {
    std::vector<bool> used(k, false);
    std::vector<Vector> basis;
    best_total = 0;
    for (std::size_t step = 0; step < k; ++step) {
      std::size_t pick = k;
      std::size_t pick_nz = 0;
      std::optional<Vector> pick_vec;
      for (std::size_t i = 0; i < k; ++i) {
        if (used[i]) continue;
        auto e = next_basis_vector(f[i], basis, tol);
        if (!e) throw Error(ErrorCode::DependentInput, "dependent vector in ordering search", i);
        const std::size_t nz = count_nonzeros(*e, reference, tol);
        if (pick == k || nz < pick_nz) {
          pick = i;
          pick_nz = nz;
          pick_vec = std::move(e);
        }
      }
      used[pick] = true;
      best_order.push_back(pick);
      basis.push_back(std::move(*pick_vec));
      best_total += pick_nz;
    }
  }

  SparsityResult res;
  res.ordering = best_order;
  res.basis = gram_schmidt(permuted(f, best_order).vectors(), tol);
  res.total_nonzeros = 0;
  for (const auto& e : res.basis) res.total_nonzeros += count_nonzeros(e, reference, tol);
  return res;
}

// ---------------------------------------------------------------------------

bool ConstantsAudit::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.pass; });
}

ConstantsAudit constants_audit(const Frame& f, const Tolerances& tol) {
  const FrameReport r = frame_report(f, tol);
  const double n = static_cast<double>(f.dim());
  const double m = static_cast<double>(f.size());
  double sum_norms_sq = 0.0;
  for (double v : r.norms) sum_norms_sq += v * v;
  const double sum_eigs = std::accumulate(r.eigenvalues.begin(), r.eigenvalues.end(), 0.0);

  ConstantsAudit audit;
  auto add = [&](std::string name, double lhs, double rhs) {
    audit.entries.push_back({std::move(name), lhs, rhs, close(lhs, rhs, tol.eq_tol)});
  };
  add("sum of eigenvalues = sum of squared norms", sum_eigs, sum_norms_sq);
  if (r.is_tight) {
    add("tight: N A = sum of squared norms", n * r.bounds.lower, sum_norms_sq);
    add("tight: N A = sum of eigenvalues", n * r.bounds.lower, sum_eigs);
  }
  if (r.is_parseval) add("parseval: N = sum of squared norms", n, sum_norms_sq);
  if (r.is_tight && r.is_equal_norm) {
    const double c = r.norms.front();
    add("equal-norm tight: A = M c^2 / N", r.bounds.lower, m * c * c / n);
  }
  if (r.is_tight && r.is_unit_norm) add("unit-norm tight: A = M / N", r.bounds.lower, m / n);
  return audit;
}

}  // namespace framekit
