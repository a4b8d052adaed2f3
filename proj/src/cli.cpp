#include "framekit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "framekit/construct.hpp"
#include "framekit/fusion.hpp"
#include "framekit/io.hpp"
#include "framekit/verify.hpp"

namespace framekit {

namespace {

using io::Json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  Tolerances tol;
};

// Input-shaped errors map to exit 2, failed mathematical preconditions to 1.
int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimMismatch:
    case ErrorCode::BadParams:
    case ErrorCode::TooLarge:
    case ErrorCode::ComplexUnsupported:
    case ErrorCode::TooManyPermutations:
      return kUsage;
    default:
      return kFail;
  }
}

void emit(const Context& ctx, const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    ctx.out << text;
  } else {
    io::write_text_file(out_path, text);
  }
}

Json tolerances_json(const Tolerances& tol) {
  return Json{{"eq_tol", tol.eq_tol}, {"eig_offdiag_tol", tol.eig_offdiag_tol}, {"rank_tol", tol.rank_tol}};
}

Json bounds_json(double lower, double upper) { return Json{{"lower", lower}, {"upper", upper}}; }

struct AngleRange {
  double lo = 0.0;
  double hi = 0.0;
};

AngleRange normalized_inner_range(const Frame& f) {
  const auto norms = f.norms();
  AngleRange r{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (norms[i] == 0.0 || norms[j] == 0.0) continue;
      const double c = std::abs(inner(f[i], f[j])) / (norms[i] * norms[j]);
      r.lo = std::min(r.lo, c);
      r.hi = std::max(r.hi, c);
    }
  }
  if (r.lo > r.hi) r.lo = r.hi = 0.0;
  return r;
}

std::optional<std::size_t> removable_vector(const Frame& f, const Tolerances& tol) {
  if (f.size() == 1) return std::nullopt;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (is_frame(remove_vector(f, i), tol)) return i;
  return std::nullopt;
}

Json flag(bool value, Json witness) { return Json{{"value", value}, {"witness", std::move(witness)}}; }

Json analysis_report(const Frame& f, const Tolerances& tol) {
  const FrameReport r = frame_report(f, tol);
  const auto [min_norm, max_norm] = std::minmax_element(r.norms.begin(), r.norms.end());
  const AngleRange angles = normalized_inner_range(f);
  const double parseval_defect = (frame_operator(f) - DenseMatrix::identity(f.dim(), f.field())).frobenius_norm();

  Json rep;
  rep["tolerances"] = tolerances_json(tol);
  rep["field"] = to_string(f.field());
  rep["dim"] = f.dim();
  rep["count"] = f.size();
  rep["bounds"] = bounds_json(r.bounds.lower, r.bounds.upper);
  rep["eigenvalues"] = r.eigenvalues;
  rep["norms"] = r.norms;
  rep["coherence"] = r.coherence;
  rep["redundancy"] = r.redundancy;

  Json flags;
  flags["frame"] = flag(r.is_frame, bounds_json(r.bounds.lower, r.bounds.upper));
  flags["tight"] = flag(r.is_tight, Json{{"upper_minus_lower", r.bounds.upper - r.bounds.lower}});
  flags["parseval"] = flag(r.is_parseval, Json{{"frame_operator_minus_identity_fro", parseval_defect}});
  flags["equal_norm"] = flag(r.is_equal_norm, Json{{"min_norm", *min_norm}, {"max_norm", *max_norm}});
  flags["unit_norm"] = flag(r.is_unit_norm, Json{{"min_norm", *min_norm}, {"max_norm", *max_norm}});
  const Json angle_witness{{"min_normalized_abs_inner", angles.lo}, {"max_normalized_abs_inner", angles.hi}};
  flags["equiangular"] = flag(r.is_equiangular, angle_witness);
  flags["equiangular_lines"] = flag(r.is_equiangular_lines, angle_witness);
  Json exact_witness = Json::object();
  if (r.is_frame) {
    const auto idx = removable_vector(f, tol);
    exact_witness["removable_index"] = idx ? Json(*idx) : Json(nullptr);
  } else {
    exact_witness["lower_bound"] = r.bounds.lower;
  }
  flags["exact"] = flag(r.is_exact, exact_witness);
  rep["flags"] = flags;

  Json audit = Json::array();
  for (const auto& e : constants_audit(f, tol).entries) {
    audit.push_back(Json{{"name", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"pass", e.pass}});
  }
  rep["audit"] = audit;

  if (r.is_frame) {
    const FrameBounds db = frame_bounds(canonical_dual(f, tol), tol);
    const NearestParseval np = nearest_parseval(f, tol);
    rep["duals"] = Json{{"canonical_dual_bounds", bounds_json(db.lower, db.upper)},
                        {"nearest_parseval_distance", np.distance}};
  } else {
    rep["duals"] = nullptr;
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  std::string kind;
  std::size_t dim = 0;
  std::size_t count = 0;
  std::optional<std::uint64_t> seed;
  std::vector<double> spectrum;
  std::vector<double> norms;
  std::string input;
  std::string field = "real";
  std::string out;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("FRAMEKIT_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::BadParams, std::string("FRAMEKIT_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::BadParams, what);
}

int cmd_construct(const Context& ctx, const ConstructArgs& a) {
  try {
    Json meta{{"construction", a.kind}};
    std::optional<Frame> frame;
    if (a.kind == "tetris") {
      require(a.dim > 0 && a.count > 0, "tetris needs --dim and --count");
      frame = spectral_tetris(a.dim, a.count);
      meta["params"] = Json{{"dim", a.dim}, {"count", a.count}};
    } else if (a.kind == "simplex") {
      require(a.dim > 0, "simplex needs --dim");
      frame = simplex_frame(a.dim);
      meta["params"] = Json{{"dim", a.dim}};
    } else if (a.kind == "random-parseval") {
      require(a.dim > 0 && a.count > 0, "random-parseval needs --dim and --count");
      const std::uint64_t seed = resolve_seed(a.seed);
      frame = random_parseval(a.dim, a.count, seed, a.field == "complex" ? Field::Complex : Field::Real);
      meta["params"] = Json{{"dim", a.dim}, {"count", a.count}, {"field", a.field}};
      meta["seed"] = seed;
    } else if (a.kind == "spectrum-norms") {
      require(!a.spectrum.empty() && !a.norms.empty(), "spectrum-norms needs --spectrum and --norms");
      frame = frame_with_spectrum_and_norms(SpectrumSpec(a.spectrum), NormSpec(a.norms), ctx.tol);
      meta["params"] = Json{{"spectrum", a.spectrum}, {"norms_squared", a.norms}};
    } else if (a.kind == "equal-norm-op") {
      require(!a.spectrum.empty() && a.count > 0, "equal-norm-op needs --spectrum and --count");
      frame = equal_norm_with_operator(SpectrumSpec(a.spectrum), a.count, ctx.tol);
      meta["params"] = Json{{"spectrum", a.spectrum}, {"count", a.count}};
    } else if (a.kind == "tight-complete") {
      require(!a.input.empty(), "tight-complete needs --in FILE");
      frame = tight_completion(io::read_frame_file(a.input).frame, ctx.tol);
      meta["params"] = Json{{"in", a.input}};
    }
    emit(ctx, a.out, io::write_frame_json({*frame, meta}));
    return kPass;
  } catch (const Error& e) {
    ctx.err << "framekit construct: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kUsage;
  }
}

int cmd_analyze(const Context& ctx, const std::string& path, const std::string& report_path) {
  const auto doc = io::read_frame_file(path);
  emit(ctx, report_path, analysis_report(doc.frame, ctx.tol).dump(2) + "\n");
  return kPass;
}

int verdict(const Context& ctx, const std::string& check, bool pass, const std::string& witness) {
  ctx.out << (pass ? "PASS " : "FAIL ") << check << ": " << witness << "\n";
  return pass ? kPass : kFail;
}

std::string subset_string(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

int cmd_verify(const Context& ctx, const Frame& f, const std::string& check, const std::string& other) {
  const Tolerances& tol = ctx.tol;
  if (check == "frame" || check == "tight" || check == "parseval") {
    const FrameReport r = frame_report(f, tol);
    std::string w = "lower=" + num(r.bounds.lower) + " upper=" + num(r.bounds.upper);
    if (check == "frame") return verdict(ctx, check, r.is_frame, w);
    if (check == "tight") return verdict(ctx, check, r.is_tight, w);
    const double defect = (frame_operator(f) - DenseMatrix::identity(f.dim(), f.field())).frobenius_norm();
    return verdict(ctx, check, is_parseval(f, tol), w + " ||S-I||_F=" + num(defect));
  }
  if (check == "equal-norm") {
    const auto norms = f.norms();
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    return verdict(ctx, check, frame_report(f, tol).is_equal_norm,
                   "min_norm=" + num(*lo) + " (index " + std::to_string(lo - norms.begin()) + ") max_norm=" +
                       num(*hi) + " (index " + std::to_string(hi - norms.begin()) + ")");
  }
  if (check == "equiangular") {
    const FrameReport r = frame_report(f, tol);
    const AngleRange a = normalized_inner_range(f);
    const auto [lo, hi] = std::minmax_element(r.norms.begin(), r.norms.end());
    return verdict(ctx, check, r.is_equiangular,
                   "normalized |<phi_i,phi_j>| in [" + num(a.lo) + ", " + num(a.hi) + "], norms in [" + num(*lo) +
                       ", " + num(*hi) + "]");
  }
  if (check == "exact") {
    const FrameReport r = frame_report(f, tol);
    if (!r.is_frame) return verdict(ctx, check, false, "not a frame: lower=" + num(r.bounds.lower));
    const auto idx = removable_vector(f, tol);
    if (!idx) return verdict(ctx, check, true, "every single removal leaves a non-spanning family");
    const FrameBounds b = frame_bounds(remove_vector(f, *idx), tol);
    return verdict(ctx, check, false,
                   "removing vector " + std::to_string(*idx) + " leaves a frame with lower bound " + num(b.lower));
  }
  if (check == "welch-equality") {
    const auto norms = f.norms();
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (std::abs(norms[i] - 1.0) > tol.eq_tol) {
        return verdict(ctx, check, false, "vector " + std::to_string(i) + " has norm " + num(norms[i]));
      }
    }
    const WelchCheck w = welch_check(f, tol);
    return verdict(ctx, check, w.equality, "coherence=" + num(w.coherence) + " welch_bound=" + num(w.bound));
  }
  if (check == "complement-property" || check == "phase-retrieval") {
    if (check == "phase-retrieval" && f.field() != Field::Real) {
      throw Error(ErrorCode::ComplexUnsupported, "phase retrieval check is only available for real frames");
    }
    const ComplementResult r = complement_property_search(f, tol);
    if (r.holds) return verdict(ctx, check, true, std::to_string(r.subsets_checked) + " splits checked");
    std::vector<std::size_t> complement;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (std::find(r.failing_subset->begin(), r.failing_subset->end(), i) == r.failing_subset->end())
        complement.push_back(i);
    return verdict(ctx, check, false,
                   "neither I=" + subset_string(*r.failing_subset) + " nor its complement " +
                       subset_string(complement) + " spans");
  }
  if (check == "dual-of") {
    if (other.empty()) throw Error(ErrorCode::InvalidArgument, "dual-of needs a second frame file");
    const Frame g = io::read_frame_file(other).frame;
    if (g.dim() != f.dim() || g.size() != f.size()) {
      throw Error(ErrorCode::DimMismatch, "frames differ in dimension or vector count");
    }
    const double defect = (cross_operator(g, f) - DenseMatrix::identity(f.dim(), join(f.field(), g.field())))
                              .frobenius_norm();
    return verdict(ctx, check, is_dual_pair(g, f, tol), "||T_g^* T_f - I||_F=" + num(defect));
  }
  if (check == "scaling") {
    const ScalingSolution s = scale_to_parseval(f, tol);
    std::string w = "residual=" + num(s.residual) + " scales=[";
    for (std::size_t i = 0; i < s.scales.size(); ++i) w += (i ? "," : "") + num(s.scales[i]);
    return verdict(ctx, check, s.feasible, w + "]");
  }
  throw Error(ErrorCode::InvalidArgument, "unknown check " + check);
}

int cmd_fusion(const Context& ctx, const std::string& path, const std::string& op, const std::string& out_path) {
  const FusionFrame ff = io::parse_fusion_json(io::read_text_file(path), ctx.tol);
  Json rep;
  rep["tolerances"] = tolerances_json(ctx.tol);
  int code = kPass;
  const FusionBounds b = fusion_bounds(ff, ctx.tol);
  rep["bounds"] = bounds_json(b.lower, b.upper);
  if (op == "bounds") {
    rep["is_fusion_frame"] = is_fusion_frame(ff, ctx.tol);
  } else if (op == "operator") {
    rep["operator"] = io::matrix_to_json(fusion_operator(ff));
  } else if (op == "redundancy") {
    try {
      rep["redundancy"] = tight_redundancy(ff, ctx.tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotTight) throw;
      ctx.err << "framekit fusion: not tight: lower=" << num(b.lower) << " upper=" << num(b.upper) << "\n";
      return kFail;
    }
  } else {
    const LocalGlobalReport r = local_global_check(ff, std::nullopt, ctx.tol);
    rep["local_bounds"] = bounds_json(r.local_lower, r.local_upper);
    rep["flattened_bounds"] = bounds_json(r.flattened.lower, r.flattened.upper);
    rep["checks"] = Json{{"AC <= C'", r.lower_holds},
                         {"D' <= BD", r.upper_holds},
                         {"C'/B <= C", r.converse_lower},
                         {"D <= D'/A", r.converse_upper}};
    code = r.all() ? kPass : kFail;
  }
  emit(ctx, out_path, rep.dump(2) + "\n");
  return code;
}

int cmd_dual(const Context& ctx, const std::string& path, const std::string& out_path) {
  const Frame f = io::read_frame_file(path).frame;
  Json meta{{"construction", "canonical-dual"}, {"source", path}};
  emit(ctx, out_path, io::write_frame_json({canonical_dual(f, ctx.tol), meta}));
  return kPass;
}

int cmd_scale(const Context& ctx, const std::string& path, const std::string& out_path) {
  const Frame f = io::read_frame_file(path).frame;
  const ScalingSolution s = scale_to_parseval(f, ctx.tol);
  Json rep{{"tolerances", tolerances_json(ctx.tol)}, {"feasible", s.feasible}, {"residual", s.residual},
           {"scales", s.scales}};
  if (s.feasible) {
    std::vector<Vector> scaled_vectors;
    for (std::size_t i = 0; i < f.size(); ++i) scaled_vectors.push_back(scaled(f[i], s.scales[i]));
    const Frame g(f.dim(), std::move(scaled_vectors), f.field());
    Json vectors = Json::array();
    for (const auto& v : g.vectors()) vectors.push_back(io::vector_to_json(v, g.field()));
    rep["scaled_vectors"] = vectors;
  }
  emit(ctx, out_path, rep.dump(2) + "\n");
  return s.feasible ? kPass : kFail;
}

int cmd_naimark(const Context& ctx, const std::string& path, const std::string& out_path) {
  const Frame f = io::read_frame_file(path).frame;
  if (!is_parseval(f, ctx.tol)) {
    const double defect = (frame_operator(f) - DenseMatrix::identity(f.dim(), f.field())).frobenius_norm();
    ctx.err << "framekit naimark: not a Parseval frame: ||S-I||_F=" << num(defect) << "\n";
    return kFail;
  }
  const DenseMatrix u = naimark_complete(f, ctx.tol);
  Json rep{{"field", to_string(u.field())}, {"size", u.rows()}, {"unitary", io::matrix_to_json(u)}};
  emit(ctx, out_path, rep.dump(2) + "\n");
  return kPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite frame toolkit: construct, analyze and verify frames in R^N and C^N.", "framekit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Tolerances tol;
  app.add_option("--tol", tol.eq_tol, "Equality tolerance for all checks")->capture_default_str();

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a frame and write it as a frame document");
  construct->add_option("kind", ca.kind, "Construction")
      ->required()
      ->check(CLI::IsMember({"tetris", "simplex", "random-parseval", "spectrum-norms", "equal-norm-op",
                             "tight-complete"}));
  construct->add_option("--dim", ca.dim, "Dimension N");
  construct->add_option("--count", ca.count, "Number of vectors M");
  construct->add_option("--seed", ca.seed, "Seed (falls back to FRAMEKIT_SEED, then 0)");
  construct->add_option("--spectrum", ca.spectrum, "Frame operator eigenvalues")->delimiter(',');
  construct->add_option("--norms", ca.norms, "Squared vector norms")->delimiter(',');
  construct->add_option("--in", ca.input, "Input frame (tight-complete)");
  construct->add_option("--field", ca.field, "real or complex (random-parseval)")
      ->check(CLI::IsMember({"real", "complex"}))
      ->capture_default_str();
  construct->add_option("--out", ca.out, "Output file (default stdout)");

  std::string analyze_file, report_path;
  auto* analyze = app.add_subcommand("analyze", "Report bounds, flags, constants audit and dual summary");
  analyze->add_option("file", analyze_file, "Frame document")->required();
  analyze->add_option("--report", report_path, "Report file (default stdout)");

  std::string verify_file;
  std::vector<std::string> check;
  auto* verify = app.add_subcommand("verify", "Check one property; exit 0 pass, 1 fail, 2 input error");
  verify->add_option("file", verify_file, "Frame document");
  verify
      ->add_option("--check", check,
                   "frame | parseval | tight | equal-norm | equiangular | exact | welch-equality | "
                   "complement-property | phase-retrieval | dual-of FILE | scaling")
      ->required()
      ->expected(1, 2);

  std::string fusion_file, fusion_op, fusion_out;
  auto* fusion = app.add_subcommand("fusion", "Fusion frame bounds, operator, redundancy, local-global check");
  fusion->add_option("file", fusion_file, "Fusion document")->required();
  fusion->add_option("--op", fusion_op, "Operation")
      ->required()
      ->check(CLI::IsMember({"bounds", "operator", "redundancy", "local-global"}));
  fusion->add_option("--out", fusion_out, "Output file (default stdout)");

  std::string simple_file, simple_out;
  auto* dual = app.add_subcommand("dual", "Write the canonical dual frame");
  auto* scale = app.add_subcommand("scale", "Search for scalars making the frame Parseval");
  auto* naimark = app.add_subcommand("naimark", "Complete a Parseval frame's synthesis rows to a unitary");
  for (auto* sub : {dual, scale, naimark}) {
    sub->add_option("file", simple_file, "Frame document")->required();
    sub->add_option("--out", simple_out, "Output file (default stdout)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    tol.validate();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  } catch (const Error& e) {
    err << "framekit: " << e.what() << "\n";
    return kUsage;
  }

  const Context ctx{out, err, tol};
  const char* name = "framekit";
  try {
    if (construct->parsed()) return cmd_construct(ctx, ca);
    if (analyze->parsed()) {
      name = "framekit analyze";
      return cmd_analyze(ctx, analyze_file, report_path);
    }
    if (verify->parsed()) {
      name = "framekit verify";
      std::string other;
      if (check.size() == 2) {
        if (check[0] == "dual-of") {
          other = check[1];
        } else if (verify_file.empty()) {
          verify_file = check[1];
        } else {
          throw Error(ErrorCode::InvalidArgument, "unexpected argument " + check[1]);
        }
      }
      if (verify_file.empty()) throw Error(ErrorCode::InvalidArgument, "missing frame file");
      const Frame f = io::read_frame_file(verify_file).frame;
      return cmd_verify(ctx, f, check[0], other);
    }
    if (fusion->parsed()) {
      name = "framekit fusion";
      return cmd_fusion(ctx, fusion_file, fusion_op, fusion_out);
    }
    if (dual->parsed()) {
      name = "framekit dual";
      return cmd_dual(ctx, simple_file, simple_out);
    }
    if (scale->parsed()) {
      name = "framekit scale";
      return cmd_scale(ctx, simple_file, simple_out);
    }
    name = "framekit naimark";
    return cmd_naimark(ctx, simple_file, simple_out);
  } catch (const Error& e) {
    err << name << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace framekit
