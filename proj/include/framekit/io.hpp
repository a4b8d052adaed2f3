#pragma once

// Frame and fusion-frame documents (JSON, plus CSV import for real frames).

#include <string>

#include <json.hpp>

#include "framekit/frames.hpp"
#include "framekit/fusion.hpp"

namespace framekit::io {

using Json = nlohmann::ordered_json;

struct FrameDocument {
  Frame frame;
  Json meta = Json::object();
};

// Throws Error(ParseError) on malformed input: bad JSON, missing or ragged
// vectors, unknown field names, complex entries in a real document.
FrameDocument parse_frame_json(const std::string& text);
FrameDocument parse_frame_csv(const std::string& text);

// Canonical form: fixed key order, one vector per line, shortest round-trip
// number formatting. write(read(write(d))) == write(d).
std::string write_frame_json(const FrameDocument& doc);

// Dispatches on the extension (.csv or JSON).
FrameDocument read_frame_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// {"dim": N, "subspaces": [{"basis": [...], "weight": v, "local_frame": [...]}]}
FusionFrame parse_fusion_json(const std::string& text, const Tolerances& tol = {});

Json scalar_to_json(Scalar z, Field field);
Json vector_to_json(const Vector& v, Field field);
Json matrix_to_json(const DenseMatrix& m);

}  // namespace framekit::io
