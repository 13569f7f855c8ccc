#include "dynphase/commands.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "dynphase/error.hpp"
#include "dynphase/numeric.hpp"

namespace dynphase::cli {

namespace {

using io::Json;

ComplexVector random_real_vector(Rng& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector out(d);
  for (auto& z : out) z = normal(rng);
  return out;
}

std::vector<std::size_t> random_composition(Rng& rng, std::size_t d) {
  std::vector<std::size_t> blocks;
  std::size_t left = d;
  while (left > 0) {
    std::uniform_int_distribution<std::size_t> size(1, std::min<std::size_t>(3, left));
    blocks.push_back(size(rng));
    left -= blocks.back();
  }
  return blocks;
}

std::optional<bool> frame_criterion(const io::FrameSpec& spec, double tol) {
  if (const auto* s = std::get_if<io::JordanFrameSpec>(&spec)) {
    return frame_criterion_jordan(s->jordan, s->phi);
  }
  if (const auto* s = std::get_if<io::CirculantFrameSpec>(&spec)) {
    return circulant_frame(s->first_column, s->phi, std::max(s->length, s->phi.size()), tol)
        .criterion;
  }
  if (const auto* s = std::get_if<io::HarmonicFrameSpec>(&spec)) {
    return s->length >= s->dimension;
  }
  const auto& m = std::get<io::MatrixFrameSpec>(spec);
  try {
    const Eigensystem eig = eigendecompose(m.op);
    return frame_criterion_diagonalizable(eig.values, solve(eig.vectors, m.phi), tol);
  } catch (const Error& e) {
    if (e.code() == Errc::kDefective) return std::nullopt;
    throw;
  }
}

Json frame_summary(const FrameAnalysis& a) {
  return Json{{"is_frame", a.is_frame},
              {"lower_bound", a.lower_bound},
              {"upper_bound", a.upper_bound}};
}

void check_consistent(const MeasurementSet& ms, const io::InstanceFile& instance) {
  const MeasurementConfig& cfg = instance.config;
  if (ms.length != io::length_of(instance.frame)) {
    fail(Errc::kInvalidArgument, "measurements have L = " + std::to_string(ms.length) +
                                     ", instance has L = " +
                                     std::to_string(io::length_of(instance.frame)));
  }
  if (ms.jumps != cfg.jumps) {
    fail(Errc::kInvalidArgument, "measurements have J = " + std::to_string(ms.jumps) +
                                     ", configuration has J = " + std::to_string(cfg.jumps));
  }
  if (ms.real_mode != cfg.real_mode) {
    fail(Errc::kInvalidArgument, "measurement and configuration disagree on real mode");
  }
  if (!ms.real_mode &&
      (ms.angles[0] != cfg.angles.first() || ms.angles[1] != cfg.angles.second())) {
    fail(Errc::kInvalidArgument, "measurement angles differ from the configured angles");
  }
}

RecoveryResult run_method(Method method, const MeasurementSet& ms, const DynamicalFrame& frame,
                          const MeasurementConfig& cfg) {
  switch (method) {
    case Method::kGeneric: return recover_generic(ms, frame, cfg);
    case Method::kFullSpark: return recover_full_spark(ms, frame, cfg);
    case Method::kReal: return recover_real(ms, frame, cfg);
    case Method::kAuto: break;
  }
  return recover(ms, frame, cfg);
}

Json recovery_summary(const RecoveryResult& r, const std::optional<ComplexVector>& truth) {
  Json out{{"status", std::string(to_string(r.status))},
           {"component_size", r.component_size},
           {"known_zeros", r.known_zeros},
           {"used_indices", r.used_indices},
           {"residual", r.residual},
           {"estimate", io::encode(r.estimate)}};
  if (truth) {
    const double dist = global_phase_distance(*truth, r.estimate);
    const double scale = norm(*truth);
    out["global_phase_distance"] = dist;
    out["relative_error"] = scale > 0.0 ? Json(dist / scale) : Json(nullptr);
  }
  return out;
}

ComplexVector signal_for(const io::InstanceFile& instance, std::uint64_t seed) {
  if (instance.x) return *instance.x;
  Rng rng(seed);
  const std::size_t d = io::dimension_of(instance.frame);
  return instance.config.real_mode ? random_real_vector(rng, d) : random_vector(rng, d);
}

// Zero patterns with at most d - 1 zeros over L positions, as nonzero masks.
template <typename Visit>
void for_each_pattern(std::size_t d, std::size_t L, Visit&& visit) {
  for (std::size_t m = 0; m < d && m <= L; ++m) {
    for_each_combination(L, m, [&](const std::vector<std::size_t>& zeros) {
      std::vector<bool> mask(L, true);
      for (std::size_t z : zeros) mask[z] = false;
      visit(mask, zeros);
      return true;
    });
  }
}

void render_value(std::ostringstream& out, const std::string& prefix, const Json& value) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items()) {
      render_value(out, prefix.empty() ? key : prefix + "." + key, child);
    }
    return;
  }
  out << prefix << ": ";
  if (value.is_string()) {
    out << value.get<std::string>();
  } else {
    out << value.dump();
  }
  out << '\n';
}

}  // namespace

io::InstanceFile gen(const GenOptions& o) {
  const std::size_t d = o.dimension, L = o.length;
  if (d == 0 || L < d) fail(Errc::kInvalidArgument, "gen: need d >= 1 and L >= d");
  if (o.real && o.kind != "rotation") {
    fail(Errc::kInvalidArgument, "gen: --real is only supported for the rotation kind");
  }
  Rng rng(o.seed);
  io::InstanceFile out{io::HarmonicFrameSpec{d, L}, std::nullopt, o.seed, o.config};

  if (o.kind == "random-diag") {
    JordanSpec spec = random_jordan_spec(rng, std::vector<std::size_t>(d, 1),
                                         std::min(0.2, 1.0 / static_cast<double>(d)));
    out.frame = io::JordanFrameSpec{std::move(spec), random_vector(rng, d), L};
  } else if (o.kind == "jordan") {
    JordanSpec spec = random_jordan_spec(rng, random_composition(rng, d),
                                         std::min(0.2, 1.0 / static_cast<double>(d)));
    out.frame = io::JordanFrameSpec{std::move(spec), random_vector(rng, d), L};
  } else if (o.kind == "circulant") {
    ComplexVector a = random_vector(rng, d);
    out.frame = io::CirculantFrameSpec{std::move(a), random_vector(rng, d), L};
  } else if (o.kind == "harmonic") {
    out.frame = io::HarmonicFrameSpec{d, L};
  } else if (o.kind == "rotation") {
    if (d != 2) fail(Errc::kInvalidArgument, "gen rotation: d must be 2");
    out.frame = io::MatrixFrameSpec{rotation(o.theta), ComplexVector{1.0, 0.0}, L};
    out.config.real_mode = o.real;
  } else {
    fail(Errc::kInvalidArgument, "gen: unknown kind '" + o.kind +
                                     "' (random-diag, jordan, circulant, harmonic, rotation)");
  }
  out.x = out.config.real_mode ? random_real_vector(rng, d) : random_vector(rng, d);
  return out;
}

Json analyze(const io::InstanceFile& instance, const AnalyzeSettings& settings) {
  const DynamicalFrame frame = io::materialize(instance.frame);
  AnalyzeOptions opts;
  opts.rank_tol = settings.tol;
  opts.certify_spark = settings.spark;
  opts.spark = SparkOptions{settings.tol, settings.budget};
  const FrameAnalysis a = analyze(frame, opts);

  Json report{{"command", "analyze"},
              {"d", frame.dimension()},
              {"L", frame.length()},
              {"frame", frame_summary(a)}};
  const auto criterion = frame_criterion(instance.frame, settings.tol);
  report["criterion"] = criterion ? Json(*criterion) : Json(nullptr);
  report["spark"] = a.spark ? io::encode(*a.spark) : Json(nullptr);
  return report;
}

MeasurementSet measure(const io::InstanceFile& instance, const ComplexVector& x, double noise,
                       std::uint64_t seed) {
  const DynamicalFrame frame = io::materialize(instance.frame);
  MeasurementSet ms = dynphase::measure(x, frame, instance.config);
  if (noise > 0.0) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, noise);
    for (double& b : ms.base) b = std::abs(b + normal(rng));
    for (auto& [key, value] : ms.aligned) value = std::abs(value + normal(rng));
  }
  return ms;
}

RecoverOutcome recover(const MeasurementSet& ms, const io::InstanceFile& instance, Method method,
                       const std::optional<ComplexVector>& truth) {
  check_consistent(ms, instance);
  const DynamicalFrame frame = io::materialize(instance.frame);
  RecoverOutcome out;
  out.result = run_method(method, ms, frame, instance.config);
  out.report = Json{{"command", "recover"}, {"d", frame.dimension()}, {"L", frame.length()},
                    {"J", ms.jumps}};
  out.report["recovery"] = recovery_summary(out.result, truth);
  return out;
}

Json bench(const BenchOptions& o) {
  const std::size_t d = o.dimension;
  if (d == 0 || o.min_length < d || o.max_length < o.min_length) {
    fail(Errc::kInvalidArgument, "bench: need 1 <= d <= L_min <= L_max");
  }
  Json rows = Json::array();
  Rng rng(o.seed);
  for (std::size_t jumps = 0; jumps <= o.max_jumps; ++jumps) {
    if (jumps > 0 && (d < 2 || jumps > d - 2)) break;
    const std::size_t bound = min_length(d, jumps);
    for (std::size_t L = o.min_length; L <= o.max_length; ++L) {
      std::uint64_t patterns = 0;
      for (std::size_t m = 0; m < d && m <= L; ++m) patterns += binomial_saturated(L, m);
      if (patterns > o.budget) {
        fail(Errc::kBudgetExceeded, "bench: " + std::to_string(patterns) +
                                        " zero patterns exceed the budget of " +
                                        std::to_string(o.budget));
      }
      std::uint64_t recoverable = 0;
      std::vector<std::vector<std::size_t>> worst;
      for_each_pattern(d, L, [&](const std::vector<bool>& mask,
                                 const std::vector<std::size_t>& zeros) {
        if (pattern_recoverable(mask, d, jumps)) {
          ++recoverable;
        } else {
          worst.push_back(zeros);
        }
      });

      // Realised trials on a diagonal frame with distinct positive eigenvalues,
      // which is full spark for every L.
      const ComplexVector lambda =
          random_real_eigenvalues(rng, d, 0.5, 1.5, std::min(0.1, 0.5 / static_cast<double>(d)));
      const DynamicalFrame frame =
          DynamicalFrame::build(ComplexMatrix::diagonal(lambda), random_vector(rng, d), L);
      MeasurementConfig cfg;
      cfg.jumps = jumps;
      std::size_t successes = 0;
      for (std::size_t t = 0; t < o.trials; ++t) {
        std::vector<std::size_t> zeros;
        if (!worst.empty() && t % 2 == 0) {
          zeros = worst[std::uniform_int_distribution<std::size_t>(0, worst.size() - 1)(rng)];
        } else {
          const std::size_t m = std::uniform_int_distribution<std::size_t>(0, d - 1)(rng);
          std::vector<std::size_t> all(L);
          for (std::size_t l = 0; l < L; ++l) all[l] = l;
          std::shuffle(all.begin(), all.end(), rng);
          zeros.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(m, L)));
          std::sort(zeros.begin(), zeros.end());
        }
        const auto x = signal_with_zero_pattern(frame, zeros, rng);
        if (!x) continue;
        const MeasurementSet ms = dynphase::measure(*x, frame, cfg);
        const RecoveryResult r = recover_full_spark(ms, frame, cfg);
        if (r.status != RecoveryStatus::kFailed &&
            global_phase_distance(*x, r.estimate) <= 1e-6 * norm(*x)) {
          ++successes;
        }
      }
      rows.push_back(Json{
          {"d", d},
          {"L", L},
          {"J", jumps},
          {"min_length", bound},
          {"patterns", patterns},
          {"patterns_recoverable", recoverable},
          {"pattern_rate", static_cast<double>(recoverable) / static_cast<double>(patterns)},
          {"trials", o.trials},
          {"success_rate", o.trials == 0 ? 1.0
                                          : static_cast<double>(successes) /
                                                static_cast<double>(o.trials)}});
    }
  }
  return Json{{"command", "bench"}, {"seed", o.seed}, {"rows", std::move(rows)}};
}

VerifyOutcome verify(const io::InstanceFile& instance, std::uint64_t seed,
                     const AnalyzeSettings& settings) {
  VerifyOutcome out;
  const ComplexVector x = signal_for(instance, seed);
  Json analysis = analyze(instance, settings);
  const MeasurementSet ms = measure(instance, x, 0.0, seed);
  const DynamicalFrame frame = io::materialize(instance.frame);
  const RecoveryResult r = dynphase::recover(ms, frame, instance.config);
  out.status = r.status;
  out.report = Json{{"command", "verify"},
                    {"d", frame.dimension()},
                    {"L", frame.length()},
                    {"J", ms.jumps},
                    {"seed", seed},
                    {"frame", analysis["frame"]},
                    {"criterion", analysis["criterion"]},
                    {"spark", analysis["spark"]},
                    {"recovery", recovery_summary(r, x)}};
  return out;
}

std::string render_text(const Json& report) {
  std::ostringstream out;
  if (report.contains("rows") && report["rows"].is_array()) {
    out << "command: " << report.value("command", "") << '\n';
    out << std::setw(3) << "d" << std::setw(5) << "L" << std::setw(4) << "J" << std::setw(9)
        << "min_len" << std::setw(10) << "patterns" << std::setw(13) << "pattern_rate"
        << std::setw(8) << "trials" << std::setw(13) << "success_rate" << '\n';
    for (const Json& row : report["rows"]) {
      out << std::setw(3) << row["d"].get<std::size_t>() << std::setw(5)
          << row["L"].get<std::size_t>() << std::setw(4) << row["J"].get<std::size_t>()
          << std::setw(9) << row["min_length"].get<std::size_t>() << std::setw(10)
          << row["patterns"].get<std::uint64_t>() << std::setw(13) << std::fixed
          << std::setprecision(4) << row["pattern_rate"].get<double>() << std::setw(8)
          << row["trials"].get<std::size_t>() << std::setw(13)
          << row["success_rate"].get<double>() << '\n';
    }
    for (const auto& [key, value] : report.items()) {
      if (key != "rows" && key != "command") render_value(out, key, value);
    }
    return out.str();
  }
  render_value(out, "", report);
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase retrieval from dynamical samples"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  double tol = 1e-10;
  std::optional<double> zero_tol;
  std::vector<double> angles;
  std::optional<std::size_t> jumps;
  std::uint64_t budget = 2'000'000;
  std::string output;
  std::string format = "json";
  bool timing = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_flag, "Random seed");
    sub->add_option("--tol", tol, "Rank / spark tolerance");
    sub->add_option("--zero-tol", zero_tol, "Relative threshold for zero coefficients");
    sub->add_option("--angles", angles, "Polarization angles a1,a2")
        ->delimiter(',')
        ->expected(2);
    sub->add_option("--jumps", jumps, "Jump parameter J");
    sub->add_option("--budget", budget, "Enumeration budget");
    sub->add_option("-o,--output", output, "Write the result to this path");
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_flag("--timing", timing, "Include wall time in reports");
  };

  GenOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("kind", gen_opts.kind, "random-diag | jordan | circulant | harmonic | rotation")
      ->required();
  gen_cmd->add_option("d", gen_opts.dimension, "Dimension")->required();
  gen_cmd->add_option("L", gen_opts.length, "Number of samples")->required();
  gen_cmd->add_option("--theta", gen_opts.theta, "Rotation angle");
  gen_cmd->add_flag("--real", gen_opts.real, "Real signal and real-mode measurements");
  common(gen_cmd);

  std::string instance_path, measurements_path, signal_path, estimate_path, truth_path;
  bool no_spark = false;
  double noise = 0.0;
  std::string method_name = "auto";

  auto* analyze_cmd = app.add_subcommand("analyze", "Frame bounds and spark certificate");
  analyze_cmd->add_option("instance", instance_path)->required();
  analyze_cmd->add_flag("--no-spark", no_spark, "Skip the spark enumeration");
  common(analyze_cmd);

  auto* measure_cmd = app.add_subcommand("measure", "Simulate phaseless measurements");
  measure_cmd->add_option("instance", instance_path)->required();
  measure_cmd->add_option("--signal", signal_path, "JSON file with {\"x\": [...]}");
  measure_cmd->add_option("--noise", noise, "Std. deviation of additive magnitude noise");
  common(measure_cmd);

  auto* recover_cmd = app.add_subcommand("recover", "Recover x from measurements");
  recover_cmd->add_option("measurements", measurements_path)->required();
  recover_cmd->add_option("instance", instance_path)->required();
  recover_cmd->add_option("--method", method_name)
      ->check(CLI::IsMember({"auto", "generic", "full-spark", "real"}));
  recover_cmd->add_option("--estimate", estimate_path, "Write the estimate to this path");
  recover_cmd->add_option("--truth", truth_path, "Ground truth {\"x\": [...]}");
  common(recover_cmd);

  BenchOptions bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "Zero-pattern and recovery success table");
  bench_cmd->add_option("--d", bench_opts.dimension, "Dimension");
  bench_cmd->add_option("--L-min", bench_opts.min_length, "Smallest L");
  bench_cmd->add_option("--L-max", bench_opts.max_length, "Largest L");
  bench_cmd->add_option("--trials", bench_opts.trials, "Random trials per row");
  common(bench_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "analyze + measure + recover in one run");
  verify_cmd->add_option("instance", instance_path)->required();
  verify_cmd->add_flag("--no-spark", no_spark, "Skip the spark enumeration");
  common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitInvalidInput;
  }

  const std::uint64_t seed = seed_flag.value_or(1);
  const auto started = std::chrono::steady_clock::now();
  auto apply_overrides = [&](MeasurementConfig& cfg) {
    if (!angles.empty()) cfg.angles = PolarizationAngles(angles[0], angles[1]);
    if (jumps) cfg.jumps = *jumps;
    if (zero_tol) cfg.zero_tol = *zero_tol;
  };
  auto emit = [&](const Json& report) {
    Json r = report;
    if (timing) {
      r["wall_time_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    const std::string text = format == "text" ? render_text(r) : io::dump(r);
    if (output.empty()) {
      out << text;
    } else {
      io::write_file(output, text);
    }
  };
  auto load_instance = [&](const std::string& path, std::string* bytes) {
    const std::string text = io::read_file(path);
    io::InstanceFile inst = io::decode_instance(io::parse(text, path));
    apply_overrides(inst.config);
    if (bytes) *bytes += text;
    return inst;
  };
  auto load_signal = [&](const std::string& path) {
    const Json j = io::parse(io::read_file(path), path);
    if (!j.is_object() || !j.contains("x")) fail(Errc::kParse, path + ": missing field \"x\"");
    return io::decode_vector(j["x"]);
  };

  try {
    if (*gen_cmd) {
      apply_overrides(gen_opts.config);
      gen_opts.seed = seed;
      const std::string text = io::dump(io::encode(gen(gen_opts)));
      if (output.empty()) {
        out << text;
      } else {
        io::write_file(output, text);
      }
      return kExitSuccess;
    }
    if (*analyze_cmd) {
      std::string bytes;
      const io::InstanceFile inst = load_instance(instance_path, &bytes);
      Json report = analyze(inst, AnalyzeSettings{tol, !no_spark, budget});
      report["inputs_digest"] = io::digest(bytes);
      emit(report);
      return kExitSuccess;
    }
    if (*measure_cmd) {
      const io::InstanceFile inst = load_instance(instance_path, nullptr);
      const ComplexVector x = signal_path.empty()
                                   ? signal_for(inst, seed_flag.value_or(inst.seed.value_or(1)))
                                   : load_signal(signal_path);
      const std::string text = io::dump(io::encode(measure(inst, x, noise, seed)));
      if (output.empty()) {
        out << text;
      } else {
        io::write_file(output, text);
      }
      return kExitSuccess;
    }
    if (*recover_cmd) {
      std::string bytes = io::read_file(measurements_path);
      const MeasurementSet ms =
          io::decode_measurements(io::parse(bytes, measurements_path));
      const io::InstanceFile inst = load_instance(instance_path, &bytes);
      std::optional<ComplexVector> truth = inst.x;
      if (!truth_path.empty()) truth = load_signal(truth_path);
      const Method method = method_name == "generic"      ? Method::kGeneric
                            : method_name == "full-spark" ? Method::kFullSpark
                            : method_name == "real"       ? Method::kReal
                                                          : Method::kAuto;
      RecoverOutcome result = recover(ms, inst, method, truth);
      result.report["inputs_digest"] = io::digest(bytes);
      if (!estimate_path.empty()) {
        io::write_file(estimate_path, io::dump(Json{{"x", io::encode(result.result.estimate)}}));
      }
      emit(result.report);
      return result.result.status == RecoveryStatus::kFailed ? kExitRecoveryFailed
                                                             : kExitSuccess;
    }
    if (*bench_cmd) {
      bench_opts.seed = seed;
      bench_opts.budget = budget;
      if (jumps) bench_opts.max_jumps = *jumps;
      emit(bench(bench_opts));
      return kExitSuccess;
    }
    if (*verify_cmd) {
      std::string bytes;
      const io::InstanceFile inst = load_instance(instance_path, &bytes);
      const std::uint64_t used_seed = seed_flag.value_or(inst.seed.value_or(1));
      VerifyOutcome result = verify(inst, used_seed, AnalyzeSettings{tol, !no_spark, budget});
      result.report["inputs_digest"] = io::digest(bytes);
      emit(result.report);
      return result.status == RecoveryStatus::kFailed ? kExitRecoveryFailed : kExitSuccess;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == Errc::kBudgetExceeded ? kExitBudgetExceeded : kExitInvalidInput;
  } catch (const io::Json::exception& e) {
    err << "error (parse_error): " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace dynphase::cli
