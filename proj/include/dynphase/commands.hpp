#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dynphase/io.hpp"
#include "dynphase/retrieval.hpp"

namespace dynphase::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitRecoveryFailed = 1,
  kExitInvalidInput = 2,
  kExitBudgetExceeded = 3,
};

struct GenOptions {
  std::string kind;
  std::size_t dimension = 0;
  std::size_t length = 0;
  std::uint64_t seed = 1;
  double theta = 0.7853981633974483;  // pi / 4
  bool real = false;
  MeasurementConfig config;
};

/// Deterministic instance for a fixed seed. kind is one of random-diag,
/// jordan, circulant, harmonic, rotation.
io::InstanceFile gen(const GenOptions& options);

struct AnalyzeSettings {
  double tol = 1e-10;
  bool spark = true;
  std::uint64_t budget = 2'000'000;
};

io::Json analyze(const io::InstanceFile& instance, const AnalyzeSettings& settings);

/// Magnitudes of x, optionally perturbed by N(0, noise^2) and clipped at zero.
MeasurementSet measure(const io::InstanceFile& instance, const ComplexVector& x,
                       double noise, std::uint64_t seed);

enum class Method { kAuto, kGeneric, kFullSpark, kReal };

struct RecoverOutcome {
  io::Json report;
  RecoveryResult result;
};

/// Throws Errc::kInvalidArgument when L, J or the angles disagree with the
/// instance.
RecoverOutcome recover(const MeasurementSet& ms, const io::InstanceFile& instance,
                       Method method, const std::optional<ComplexVector>& truth);

struct BenchOptions {
  std::size_t dimension = 4;
  std::size_t min_length = 4;
  std::size_t max_length = 8;
  std::size_t max_jumps = 0;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::uint64_t budget = 2'000'000;
};

io::Json bench(const BenchOptions& options);

struct VerifyOutcome {
  io::Json report;
  RecoveryStatus status = RecoveryStatus::kFailed;
};

/// analyze + measure + recover + distance. The signal is the instance's x or,
/// if absent, a random draw from `seed`.
VerifyOutcome verify(const io::InstanceFile& instance, std::uint64_t seed,
                     const AnalyzeSettings& settings);

/// Renders a report as "key: value" lines (bench rows as a table).
std::string render_text(const io::Json& report);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dynphase::cli
