#include "framekit/io.hpp"

#include <fstream>
#include <sstream>

namespace framekit::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

Scalar parse_scalar(const Json& j, bool allow_complex) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    const Scalar z{j[0].get<double>(), j[1].get<double>()};
    if (!allow_complex && z.imag() != 0.0) fail("complex entry in a real document");
    return z;
  }
  fail("vector entries must be numbers or [re, im] pairs");
}

std::vector<Vector> parse_vectors(const Json& j, std::optional<std::size_t> dim, bool allow_complex,
                                  const std::string& what) {
  if (!j.is_array()) fail(what + " must be an array of vectors");
  std::vector<Vector> out;
  for (const auto& row : j) {
    if (!row.is_array()) fail(what + " rows must be arrays");
    Vector v;
    v.reserve(row.size());
    for (const auto& x : row) v.push_back(parse_scalar(x, allow_complex));
    if (!dim) dim = v.size();
    if (v.size() != *dim) fail(what + ": row " + std::to_string(out.size()) + " has length " +
                               std::to_string(v.size()) + ", expected " + std::to_string(*dim));
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Field> parse_field(const Json& doc) {
  if (!doc.contains("field")) return std::nullopt;
  const auto& f = doc["field"];
  if (f == "real") return Field::Real;
  if (f == "complex") return Field::Complex;
  fail("field must be \"real\" or \"complex\"");
}

std::optional<std::size_t> parse_dim(const Json& doc) {
  if (!doc.contains("dim")) return std::nullopt;
  const auto& d = doc["dim"];
  if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) fail("dim must be a positive integer");
  return d.get<std::size_t>();
}

Json parse_document(const std::string& text) {
  try {
    Json doc = Json::parse(text);
    if (!doc.is_object()) fail("document must be a JSON object");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

FrameDocument parse_frame_json(const std::string& text) {
  const Json doc = parse_document(text);
  const auto field = parse_field(doc);
  const auto dim = parse_dim(doc);
  if (!doc.contains("vectors")) fail("missing \"vectors\"");
  auto vectors = parse_vectors(doc["vectors"], dim, field != Field::Real, "vectors");
  if (vectors.empty()) fail("vector list is empty");
  if (vectors.front().empty()) fail("vectors have length 0");
  const std::size_t n = vectors.front().size();
  FrameDocument out{Frame(n, std::move(vectors), field)};
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) fail("meta must be an object");
    out.meta = doc["meta"];
  }
  return out;
}

FrameDocument parse_frame_csv(const std::string& text) {
  std::vector<Vector> vectors;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    Vector v;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        const double x = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
        v.emplace_back(x, 0.0);
      } catch (const std::exception&) {
        fail("line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (!vectors.empty() && v.size() != vectors.front().size()) {
      fail("line " + std::to_string(lineno) + " has " + std::to_string(v.size()) + " entries, expected " +
           std::to_string(vectors.front().size()));
    }
    if (v.empty()) fail("line " + std::to_string(lineno) + " is empty");
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) fail("vector list is empty");
  const std::size_t n = vectors.front().size();
  return {Frame(n, std::move(vectors), Field::Real)};
}

Json scalar_to_json(Scalar z, Field field) {
  if (field == Field::Real) return z.real();
  return Json::array({z.real(), z.imag()});
}

Json vector_to_json(const Vector& v, Field field) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(scalar_to_json(z, field));
  return out;
}

Json matrix_to_json(const DenseMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c), m.field()));
    out.push_back(std::move(row));
  }
  return out;
}

std::string write_frame_json(const FrameDocument& doc) {
  const Frame& f = doc.frame;
  std::ostringstream os;
  os << "{\n";
  os << "  \"field\": " << Json(to_string(f.field())).dump() << ",\n";
  os << "  \"dim\": " << f.dim() << ",\n";
  os << "  \"vectors\": [\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << "    " << vector_to_json(f[i], f.field()).dump() << (i + 1 < f.size() ? ",\n" : "\n");
  }
  os << "  ],\n";
  os << "  \"meta\": " << doc.meta.dump() << "\n";
  os << "}\n";
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

FrameDocument read_frame_file(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return parse_frame_csv(text);
  return parse_frame_json(text);
}

FusionFrame parse_fusion_json(const std::string& text, const Tolerances& tol) {
  const Json doc = parse_document(text);
  const auto field = parse_field(doc);
  const auto dim = parse_dim(doc);
  if (!dim) fail("fusion document needs \"dim\"");
  if (!doc.contains("subspaces") || !doc["subspaces"].is_array() || doc["subspaces"].empty()) {
    fail("fusion document needs a non-empty \"subspaces\" array");
  }
  const bool allow_complex = field != Field::Real;
  std::vector<SubspaceSpec> specs;
  for (const auto& s : doc["subspaces"]) {
    const std::string where = "subspace " + std::to_string(specs.size());
    if (!s.is_object() || !s.contains("basis")) fail(where + " needs a \"basis\"");
    SubspaceSpec spec;
    spec.spanning = parse_vectors(s["basis"], dim, allow_complex, where + " basis");
    if (spec.spanning.empty()) fail(where + " basis is empty");
    if (s.contains("weight")) {
      if (!s["weight"].is_number()) fail(where + " weight must be a number");
      spec.weight = s["weight"].get<double>();
    }
    if (s.contains("local_frame")) spec.local_frame = parse_vectors(s["local_frame"], dim, allow_complex, where + " local_frame");
    specs.push_back(std::move(spec));
  }
  try {
    return FusionFrame(*dim, specs, tol);
  } catch (const Error& e) {
    fail(std::string("malformed subspaces: ") + e.what());
  }
}

}  // namespace framekit::io
