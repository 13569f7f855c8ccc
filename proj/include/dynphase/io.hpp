#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "dynphase/frames.hpp"
#include "dynphase/retrieval.hpp"
#include "dynphase/spectral.hpp"

namespace dynphase::io {

using Json = nlohmann::json;

struct MatrixFrameSpec {
  ComplexMatrix op;
  ComplexVector phi;
  std::size_t length = 0;
  friend bool operator==(const MatrixFrameSpec&, const MatrixFrameSpec&) = default;
};

struct JordanFrameSpec {
  JordanSpec jordan;
  ComplexVector phi;
  std::size_t length = 0;
  friend bool operator==(const JordanFrameSpec&, const JordanFrameSpec&) = default;
};

struct CirculantFrameSpec {
  ComplexVector first_column;
  ComplexVector phi;
  std::size_t length = 0;
  friend bool operator==(const CirculantFrameSpec&, const CirculantFrameSpec&) = default;
};

struct HarmonicFrameSpec {
  std::size_t dimension = 0;
  std::size_t length = 0;
  friend bool operator==(const HarmonicFrameSpec&, const HarmonicFrameSpec&) = default;
};

using FrameSpec =
    std::variant<MatrixFrameSpec, JordanFrameSpec, CirculantFrameSpec, HarmonicFrameSpec>;

std::size_t dimension_of(const FrameSpec& spec);
std::size_t length_of(const FrameSpec& spec);
DynamicalFrame materialize(const FrameSpec& spec);

struct InstanceFile {
  FrameSpec frame;
  std::optional<ComplexVector> x;
  std::optional<std::uint64_t> seed;
  MeasurementConfig config;
  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

// Complex numbers are [re, im]; a bare number is accepted as a real value.
Json encode(Complex z);
Json encode(const ComplexVector& v);
Json encode(const ComplexMatrix& m);
Json encode(const JordanSpec& spec);
Json encode(const FrameSpec& spec);
Json encode(const MeasurementConfig& cfg);
Json encode(const InstanceFile& instance);
Json encode(const MeasurementSet& ms);
Json encode(const SparkCertificate& cert);

Complex decode_complex(const Json& j);
ComplexVector decode_vector(const Json& j);
ComplexMatrix decode_matrix(const Json& j);
JordanSpec decode_jordan(const Json& j);
FrameSpec decode_frame(const Json& j);
MeasurementConfig decode_config(const Json& j);
InstanceFile decode_instance(const Json& j);
MeasurementSet decode_measurements(const Json& j);

/// Throws Errc::kParse with line and column of the offending byte.
Json parse(std::string_view text, std::string_view source = "<input>");

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string digest(std::string_view bytes);

}  // namespace dynphase::io
