#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "framekit/cli.hpp"
#include "framekit/construct.hpp"
#include "framekit/io.hpp"

using namespace framekit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("framekit_cli_" + std::to_string(std::rand()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& text) const {
    const auto p = (path_ / name).string();
    io::write_text_file(p, text);
    return p;
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string doc(const Frame& f) { return io::write_frame_json({f, io::Json::object()}); }

const char* kOverlap = R"({"dim": 3, "subspaces": [{"basis": [[1,0,0],[0,1,0]]}, {"basis": [[0,1,0],[0,0,1]]}]})";
const char* kOnbFusion = R"({"dim": 2, "subspaces": [
  {"basis": [[1,0]], "local_frame": [[1,0]]}, {"basis": [[0,1]], "local_frame": [[0,1]]}]})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"construct", "nonsense"}).code == 2);
    CHECK(run({"construct", "tetris", "--dim", "4"}).code == 2);
    CHECK(run({"construct", "tetris", "--dim", "4", "--count", "5"}).code == 2);
    CHECK(run({"construct", "simplex", "--dim", "0"}).code == 2);
    CHECK(run({"construct", "spectrum-norms", "--spectrum", "1,1", "--norms", "3,0.5"}).code == 2);
    CHECK(run({"--tol", "-1", "construct", "simplex", "--dim", "2"}).code == 2);
    CHECK(run({"analyze"}).code == 2);
    CHECK(run({"analyze", "/nonexistent/frame.json"}).code == 2);
    CHECK(run({"verify", "--check", "frame"}).code == 2);
    CHECK(run({"fusion", "x.json", "--op", "nope"}).code == 2);
  }

  TEST_CASE("construct") {
    const Run t = run({"construct", "tetris", "--dim", "4", "--count", "11"});
    REQUIRE(t.code == 0);
    const auto d = io::parse_frame_json(t.out);
    CHECK(d.frame.size() == 11);
    CHECK(d.meta["construction"] == "tetris");
    CHECK(d.meta["params"]["dim"] == 4);
    for (std::size_t i = 0; i < 11; ++i)
      for (std::size_t k = 0; k < 4; ++k) CHECK(d.frame[i][k] == spectral_tetris(4, 11)[i][k]);

    const Run s = run({"construct", "simplex", "--dim", "2"});
    REQUIRE(s.code == 0);
    CHECK(io::parse_frame_json(s.out).frame.size() == 3);

    const Run r1 = run({"construct", "random-parseval", "--dim", "2", "--count", "4", "--seed", "7"});
    const Run r2 = run({"construct", "random-parseval", "--dim", "2", "--count", "4", "--seed", "7"});
    const Run r3 = run({"construct", "random-parseval", "--dim", "2", "--count", "4", "--seed", "8"});
    REQUIRE(r1.code == 0);
    CHECK(r1.out == r2.out);
    CHECK(r1.out != r3.out);
    CHECK(io::parse_frame_json(r1.out).meta["seed"] == 7);

    const Run c = run({"construct", "random-parseval", "--dim", "2", "--count", "3", "--field", "complex"});
    REQUIRE(c.code == 0);
    CHECK(io::parse_frame_json(c.out).frame.field() == Field::Complex);

    const Run sn = run({"construct", "spectrum-norms", "--spectrum", "3,1", "--norms", "1.5,1,1,0.5"});
    REQUIRE(sn.code == 0);
    CHECK(io::parse_frame_json(sn.out).frame.size() == 4);
    CHECK(run({"construct", "equal-norm-op", "--spectrum", "2,1", "--count", "3"}).code == 0);

    TempDir dir;
    const std::string in = dir.file("e.json", doc(Frame::real({{1, 0}, {1, 0}, {0, 1}})));
    const std::string out = dir.path("tc.json");
    REQUIRE(run({"construct", "tight-complete", "--in", in, "--out", out}).code == 0);
    CHECK(io::read_frame_file(out).frame.size() == 4);
    CHECK(run({"construct", "tight-complete"}).code == 2);
  }

  TEST_CASE("seed falls back to FRAMEKIT_SEED") {
    ::setenv("FRAMEKIT_SEED", "7", 1);
    const Run env = run({"construct", "random-parseval", "--dim", "2", "--count", "4"});
    ::unsetenv("FRAMEKIT_SEED");
    const Run flag = run({"construct", "random-parseval", "--dim", "2", "--count", "4", "--seed", "7"});
    CHECK(env.out == flag.out);
    const Run none = run({"construct", "random-parseval", "--dim", "2", "--count", "4"});
    CHECK(io::parse_frame_json(none.out).meta["seed"] == 0);
  }

  TEST_CASE("analyze") {
    TempDir dir;
    const std::string mb = dir.file("mb.json", run({"construct", "simplex", "--dim", "2"}).out);
    const std::string sq = dir.file("sq.json", doc(canonical_parseval(simplex_frame(2))));
    const Run r = run({"analyze", sq});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["flags"]["parseval"]["value"] == true);
    CHECK(std::abs(j["coherence"].get<double>() - 0.5) < 1e-12);
    CHECK(j["flags"]["equiangular"]["value"] == true);
    CHECK(j.contains("tolerances"));
    CHECK(j["audit"].is_array());
    CHECK(j["duals"]["canonical_dual_bounds"].is_object());

    const std::string e = dir.file("e.json", doc(Frame::real({{1, 0}, {1, 0}, {0, 1}})));
    const std::string rep = dir.path("rep.json");
    REQUIRE(run({"analyze", e, "--report", rep}).code == 0);
    const auto j2 = nlohmann::json::parse(io::read_text_file(rep));
    CHECK(j2["bounds"]["lower"].get<double>() == doctest::Approx(1.0));
    CHECK(j2["bounds"]["upper"].get<double>() == doctest::Approx(2.0));
    CHECK(j2["flags"]["tight"]["value"] == false);

    const std::string empty = dir.file("empty.json", R"({"field": "real", "dim": 2, "vectors": []})");
    CHECK(run({"analyze", empty}).code == 2);
    const std::string dep = dir.file("dep.json", R"({"vectors": [[1, 0], [2, 0]]})");
    const Run nf = run({"analyze", dep});
    CHECK(nf.code == 0);
    CHECK(nlohmann::json::parse(nf.out)["duals"].is_null());
    CHECK(run({"analyze", mb}).code == 0);
  }

  TEST_CASE("verify exit codes with witnesses") {
    TempDir dir;
    const std::string tetris = dir.file("t.json", doc(spectral_tetris(4, 11)));
    const std::string onb = dir.file("onb.json", doc(Frame::real({{1, 0}, {0, 1}})));
    const std::string mb = dir.file("mb.json", doc(canonical_parseval(simplex_frame(2))));
    const std::string simplex = dir.file("s.json", doc(simplex_frame(2)));
    const std::string e112 = dir.file("e.json", doc(Frame::real({{1, 0}, {1, 0}, {0, 1}})));
    const std::string skew = dir.file("k.json", doc(Frame::real({{1, 0}, {1, 1}})));
    const std::string dep = dir.file("dep.json", R"({"vectors": [[1, 0], [2, 0]]})");
    const std::string bad = dir.file("bad.json", R"({"vectors": [[1, 0], [1]]})");
    const std::string cplx = dir.file("c.json", doc(random_parseval(2, 3, 1, Field::Complex)));

    struct Case {
      std::vector<std::string> args;
      int code;
    };
    const std::vector<Case> cases = {
        {{"verify", tetris, "--check", "tight"}, 0},
        {{"verify", tetris, "--check", "frame"}, 0},
        {{"verify", tetris, "--check", "parseval"}, 1},
        {{"verify", tetris, "--check", "equal-norm"}, 0},
        {{"verify", onb, "--check", "complement-property"}, 1},
        {{"verify", mb, "--check", "complement-property"}, 0},
        {{"verify", mb, "--check", "phase-retrieval"}, 0},
        {{"verify", e112, "--check", "complement-property"}, 1},
        {{"verify", bad, "--check", "frame"}, 2},
        {{"verify", dep, "--check", "frame"}, 1},
        {{"verify", mb, "--check", "parseval"}, 0},
        {{"verify", mb, "--check", "equiangular"}, 0},
        {{"verify", e112, "--check", "equiangular"}, 1},
        {{"verify", onb, "--check", "exact"}, 0},
        {{"verify", e112, "--check", "exact"}, 1},
        {{"verify", simplex, "--check", "welch-equality"}, 0},
        {{"verify", e112, "--check", "welch-equality"}, 1},
        {{"verify", mb, "--check", "welch-equality"}, 1},
        {{"verify", e112, "--check", "scaling"}, 0},
        {{"verify", skew, "--check", "scaling"}, 1},
        {{"verify", simplex, "--check", "dual-of", simplex}, 1},
        {{"verify", cplx, "--check", "phase-retrieval"}, 2},
        {{"verify", cplx, "--check", "complement-property"}, 0},
        {{"verify", mb, "--check", "no-such-check"}, 2},
        {{"verify", "--check", "tight", tetris}, 0},
        {{"--tol", "1e-3", "verify", tetris, "--check", "parseval"}, 1},
    };
    for (const auto& c : cases) {
      const Run r = run(c.args);
      std::string joined;
      for (const auto& a : c.args) joined += a + " ";
      INFO(joined << " -> " << r.out << r.err);
      CHECK(r.code == c.code);
      if (r.code == 0) CHECK(r.out.rfind("PASS ", 0) == 0);
      if (r.code == 1) {
        CHECK(r.out.rfind("FAIL ", 0) == 0);
        CHECK(r.out.find_first_of("0123456789") != std::string::npos);
      }
    }
    // Canonical dual of the simplex frame is (N/(N+1)) phi_i.
    const std::string dual = dir.path("dual.json");
    REQUIRE(run({"dual", simplex, "--out", dual}).code == 0);
    CHECK(run({"verify", simplex, "--check", "dual-of", dual}).code == 0);
    CHECK(run({"verify", simplex, "--check", "dual-of", onb}).code == 2);
    // Subset witness for a failing complement property.
    const Run w = run({"verify", e112, "--check", "complement-property"});
    CHECK(w.out.find("{") != std::string::npos);
  }

  TEST_CASE("dual, scale, naimark") {
    TempDir dir;
    const std::string simplex = dir.file("s.json", doc(simplex_frame(2)));
    const std::string mb = dir.file("mb.json", doc(canonical_parseval(simplex_frame(2))));
    const std::string e112 = dir.file("e.json", doc(Frame::real({{1, 0}, {1, 0}, {0, 1}})));
    const std::string skew = dir.file("k.json", doc(Frame::real({{1, 0}, {1, 1}})));
    const std::string dep = dir.file("dep.json", R"({"vectors": [[1, 0], [2, 0]]})");

    const Run d = run({"dual", simplex});
    REQUIRE(d.code == 0);
    const Frame dual = io::parse_frame_json(d.out).frame;
    CHECK(is_dual_pair(simplex_frame(2), dual));
    CHECK(run({"dual", dep}).code == 1);

    const Run s = run({"scale", e112});
    REQUIRE(s.code == 0);
    const auto js = nlohmann::json::parse(s.out);
    CHECK(js["feasible"] == true);
    const Frame scaled_frame = io::parse_frame_json(nlohmann::json{{"vectors", js["scaled_vectors"]}}.dump()).frame;
    CHECK(is_parseval(scaled_frame, Tolerances{}));
    CHECK(run({"scale", skew}).code == 1);

    const Run n = run({"naimark", mb});
    REQUIRE(n.code == 0);
    const auto j = nlohmann::json::parse(n.out);
    CHECK(j["unitary"].size() == 3);
    const Run nf = run({"naimark", simplex});
    CHECK(nf.code == 1);
    CHECK(nf.err.find("||S-I||_F") != std::string::npos);
  }

  TEST_CASE("fusion") {
    TempDir dir;
    const std::string ov = dir.file("ov.json", kOverlap);
    const std::string onb = dir.file("onb.json", kOnbFusion);
    const Run b = run({"fusion", onb, "--op", "bounds"});
    REQUIRE(b.code == 0);
    const auto jb = nlohmann::json::parse(b.out);
    CHECK(jb["bounds"]["lower"] == 1.0);
    CHECK(jb["bounds"]["upper"] == 1.0);

    const Run o = run({"fusion", ov, "--op", "operator"});
    REQUIRE(o.code == 0);
    const auto jo = nlohmann::json::parse(o.out)["operator"];
    CHECK(jo == nlohmann::json::parse("[[1.0,0.0,0.0],[0.0,2.0,0.0],[0.0,0.0,1.0]]"));

    const std::string tight = dir.file("tight.json", R"({"dim": 2, "subspaces": [
      {"basis": [[1,0]], "weight": 1.4142135623730951}, {"basis": [[0,1]], "weight": 1.4142135623730951}]})");
    const Run r = run({"fusion", tight, "--op", "redundancy"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["redundancy"].get<double>() == doctest::Approx(2.0));
    CHECK(run({"fusion", ov, "--op", "redundancy"}).code == 1);

    CHECK(run({"fusion", onb, "--op", "local-global"}).code == 0);
    CHECK(run({"fusion", ov, "--op", "local-global"}).code == 1);
    const std::string malformed = dir.file("m.json", R"({"dim": 2, "subspaces": [{"basis": [[1,0,0]]}]})");
    CHECK(run({"fusion", malformed, "--op", "bounds"}).code == 2);
    const std::string out = dir.path("out.json");
    CHECK(run({"fusion", ov, "--op", "bounds", "--out", out}).code == 0);
    CHECK(fs::exists(out));
  }

  TEST_CASE("installed binary") {
    TempDir dir;
    const std::string bin = FRAMEKIT_BIN;
    const std::string out = dir.path("t.json");
    auto sh = [](const std::string& cmd) {
      const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    CHECK(sh(bin + " construct tetris --dim 4 --count 11 --out " + out) == 0);
    CHECK(sh(bin + " verify " + out + " --check tight") == 0);
    CHECK(sh(bin + " verify " + out + " --check parseval") == 1);
    CHECK(sh(bin + " verify " + dir.path("missing.json") + " --check frame") == 2);
    CHECK(sh(bin) == 2);
  }
}
