#include "dynphase/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dynphase/error.hpp"

namespace dynphase::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::kParse, what); }

const Json& field(const Json& obj, const char* key, const char* where) {
  if (!obj.is_object()) bad(std::string(where) + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) bad(std::string(where) + ": missing field \"" + key + "\"");
  return *it;
}

double as_real(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + ": expected a number");
  return j.get<double>();
}

std::size_t as_count(const Json& j, const char* what) {
  if (!j.is_number_unsigned()) bad(std::string(what) + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

// Byte offset (1-based, as reported by the parser) to "line L, column C".
std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::size_t dimension_of(const FrameSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HarmonicFrameSpec>) {
          return s.dimension;
        } else {
          return s.phi.size();
        }
      },
      spec);
}

std::size_t length_of(const FrameSpec& spec) {
  return std::visit([](const auto& s) { return s.length; }, spec);
}

DynamicalFrame materialize(const FrameSpec& spec) {
  return std::visit(
      [](const auto& s) -> DynamicalFrame {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MatrixFrameSpec>) {
          return DynamicalFrame::build(s.op, s.phi, s.length);
        } else if constexpr (std::is_same_v<T, JordanFrameSpec>) {
          validate(s.jordan);
          return DynamicalFrame::build(assemble(s.jordan), s.phi, s.length);
        } else if constexpr (std::is_same_v<T, CirculantFrameSpec>) {
          if (s.first_column.size() != s.phi.size()) {
            fail(Errc::kDimensionMismatch, "circulant frame: a and phi lengths differ");
          }
          return DynamicalFrame::build(circulant(s.first_column), s.phi, s.length);
        } else {
          return harmonic_frame(s.dimension, s.length);
        }
      },
      spec);
}

Json encode(Complex z) { return Json::array({z.real(), z.imag()}); }

Json encode(const ComplexVector& v) {
  Json out = Json::array();
  for (const Complex& z : v) out.push_back(encode(z));
  return out;
}

Json encode(const ComplexMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (const Complex& z : m.row(r)) row.push_back(encode(z));
    out.push_back(std::move(row));
  }
  return out;
}

Json encode(const JordanSpec& spec) {
  return Json{{"eigenvalues", encode(spec.eigenvalues)},
              {"multiplicities", spec.multiplicities},
              {"basis", encode(spec.basis)}};
}

Json encode(const FrameSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MatrixFrameSpec>) {
          return Json{{"A", encode(s.op)}, {"phi", encode(s.phi)}, {"L", s.length}};
        } else if constexpr (std::is_same_v<T, JordanFrameSpec>) {
          return Json{{"jordan", encode(s.jordan)}, {"phi", encode(s.phi)}, {"L", s.length}};
        } else if constexpr (std::is_same_v<T, CirculantFrameSpec>) {
          return Json{{"circulant", encode(s.first_column)},
                      {"phi", encode(s.phi)},
                      {"L", s.length}};
        } else {
          return Json{{"harmonic", Json{{"d", s.dimension}, {"L", s.length}}}};
        }
      },
      spec);
}

Json encode(const MeasurementConfig& cfg) {
  return Json{{"angles", Json::array({cfg.angles.first(), cfg.angles.second()})},
              {"J", cfg.jumps},
              {"zero_tol", cfg.zero_tol},
              {"real", cfg.real_mode},
              {"real_sign", cfg.real_sign},
              {"consistency_tol", cfg.consistency_tol}};
}

Json encode(const InstanceFile& instance) {
  Json out{{"frame", encode(instance.frame)}, {"config", encode(instance.config)}};
  if (instance.x) out["x"] = encode(*instance.x);
  if (instance.seed) out["seed"] = *instance.seed;
  return out;
}

Json encode(const MeasurementSet& ms) {
  Json aligned = Json::array();
  for (const auto& [key, value] : ms.aligned) {
    aligned.push_back(Json{{"l", key.l}, {"j", key.j}, {"k", key.k}, {"value", value}});
  }
  Json out{{"L", ms.length},
           {"J", ms.jumps},
           {"angles", Json::array({ms.angles[0], ms.angles[1]})},
           {"base", ms.base},
           {"aligned", std::move(aligned)}};
  if (ms.real_mode) out["real"] = true;
  return out;
}

Json encode(const SparkCertificate& cert) {
  static constexpr const char* kMethods[] = {"enumeration", "geometric_nodes", "positive_real",
                                             "degenerate"};
  Json out{{"full_spark", cert.full_spark},
           {"method", kMethods[static_cast<int>(cert.method)]},
           {"subsets_checked", cert.subsets_checked}};
  out["witness"] = cert.witness ? Json(*cert.witness) : Json(nullptr);
  if (cert.min_scaled_det) out["min_scaled_det"] = *cert.min_scaled_det;
  return out;
}

Complex decode_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad("complex value: expected [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexVector decode_vector(const Json& j) {
  if (!j.is_array()) bad("vector: expected an array of [re, im] pairs");
  ComplexVector out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = decode_complex(j[i]);
  return out;
}

ComplexMatrix decode_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) bad("matrix: expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  ComplexMatrix out(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      bad("matrix: row " + std::to_string(r) + " does not have " + std::to_string(cols) +
          " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = decode_complex(j[r][c]);
  }
  return out;
}

JordanSpec decode_jordan(const Json& j) {
  JordanSpec spec;
  spec.eigenvalues = decode_vector(field(j, "eigenvalues", "jordan"));
  const Json& mult = field(j, "multiplicities", "jordan");
  if (!mult.is_array()) bad("jordan: multiplicities must be an array");
  for (const Json& m : mult) spec.multiplicities.push_back(as_count(m, "jordan multiplicity"));
  spec.basis = decode_matrix(field(j, "basis", "jordan"));
  return spec;
}

FrameSpec decode_frame(const Json& j) {
  if (!j.is_object()) bad("frame: expected an object");
  if (j.contains("harmonic")) {
    const Json& h = j["harmonic"];
    return HarmonicFrameSpec{as_count(field(h, "d", "harmonic"), "harmonic d"),
                             as_count(field(h, "L", "harmonic"), "harmonic L")};
  }
  const std::size_t length = as_count(field(j, "L", "frame"), "frame L");
  ComplexVector phi = decode_vector(field(j, "phi", "frame"));
  if (j.contains("A")) return MatrixFrameSpec{decode_matrix(j["A"]), std::move(phi), length};
  if (j.contains("jordan")) {
    return JordanFrameSpec{decode_jordan(j["jordan"]), std::move(phi), length};
  }
  if (j.contains("circulant")) {
    return CirculantFrameSpec{decode_vector(j["circulant"]), std::move(phi), length};
  }
  bad("frame: expected one of \"A\", \"jordan\", \"circulant\", \"harmonic\"");
}

MeasurementConfig decode_config(const Json& j) {
  MeasurementConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) bad("config: expected an object");
  if (j.contains("angles")) {
    const Json& a = j["angles"];
    if (!a.is_array() || a.size() != 2) bad("config: angles must be [a1, a2]");
    cfg.angles = PolarizationAngles(as_real(a[0], "angle"), as_real(a[1], "angle"));
  }
  if (j.contains("J")) cfg.jumps = as_count(j["J"], "config J");
  if (j.contains("zero_tol")) cfg.zero_tol = as_real(j["zero_tol"], "config zero_tol");
  if (j.contains("real")) {
    if (!j["real"].is_boolean()) bad("config: real must be a boolean");
    cfg.real_mode = j["real"].get<bool>();
  }
  if (j.contains("real_sign")) {
    if (!j["real_sign"].is_number_integer()) bad("config: real_sign must be 1 or -1");
    cfg.real_sign = j["real_sign"].get<int>();
    if (cfg.real_sign != 1 && cfg.real_sign != -1) bad("config: real_sign must be 1 or -1");
  }
  if (j.contains("consistency_tol")) {
    cfg.consistency_tol = as_real(j["consistency_tol"], "config consistency_tol");
  }
  return cfg;
}

InstanceFile decode_instance(const Json& j) {
  InstanceFile out{decode_frame(field(j, "frame", "instance")), std::nullopt, std::nullopt,
                   decode_config(j.contains("config") ? j["config"] : Json())};
  if (j.contains("x")) {
    out.x = decode_vector(j["x"]);
    if (out.x->size() != dimension_of(out.frame)) {
      fail(Errc::kDimensionMismatch, "instance: x has length " + std::to_string(out.x->size()) +
                                         ", frame dimension is " +
                                         std::to_string(dimension_of(out.frame)));
    }
  }
  if (j.contains("seed")) out.seed = j["seed"].get<std::uint64_t>();
  return out;
}

MeasurementSet decode_measurements(const Json& j) {
  MeasurementSet ms;
  ms.length = as_count(field(j, "L", "measurements"), "measurements L");
  ms.jumps = as_count(field(j, "J", "measurements"), "measurements J");
  const Json& angles = field(j, "angles", "measurements");
  if (!angles.is_array() || angles.size() != 2) bad("measurements: angles must be [a1, a2]");
  ms.angles = {as_real(angles[0], "angle"), as_real(angles[1], "angle")};
  if (j.contains("real")) ms.real_mode = j["real"].get<bool>();
  const Json& base = field(j, "base", "measurements");
  if (!base.is_array()) bad("measurements: base must be an array");
  for (const Json& b : base) ms.base.push_back(as_real(b, "base value"));
  const Json& aligned = field(j, "aligned", "measurements");
  if (!aligned.is_array()) bad("measurements: aligned must be an array");
  for (const Json& entry : aligned) {
    const AlignedKey key{as_count(field(entry, "l", "aligned entry"), "l"),
                         as_count(field(entry, "j", "aligned entry"), "j"),
                         as_count(field(entry, "k", "aligned entry"), "k")};
    if (!ms.aligned.emplace(key, as_real(field(entry, "value", "aligned entry"), "value"))
             .second) {
      bad("measurements: duplicate aligned entry");
    }
  }
  validate(ms);
  return ms;
}

Json parse(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    // Drop the library prefix "[json.exception.parse_error.101] parse error at line ..: ".
    if (const auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    fail(Errc::kParse, std::string(source) + ": " + locate(text, e.byte) + ": " + msg);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kInvalidArgument, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::kInvalidArgument, "cannot write " + path.string());
  out << contents;
  if (!out) fail(Errc::kInvalidArgument, "write failed for " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace dynphase::io
