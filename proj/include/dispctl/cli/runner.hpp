#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dispctl/biorthogonal.hpp"
#include "dispctl/cli/scenario.hpp"
#include "dispctl/control_shape.hpp"
#include "dispctl/dynamics.hpp"
#include "dispctl/io.hpp"
#include "dispctl/moment.hpp"
#include "dispctl/spectrum.hpp"

namespace dispctl::cli {

namespace fs = std::filesystem;

enum class Command { Analyze, Synthesize, Simulate, Stabilize };

inline std::string to_string(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Synthesize: return "synthesize";
    case Command::Simulate: return "simulate";
    case Command::Stabilize: return "stabilize";
  }
  return "analyze";
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitHypothesis = 2;

struct RunOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool zero_feedback = false;
  std::ostream* log = &std::cout;
  std::ostream* err = &std::cerr;
};

// ---- reports ---------------------------------------------------------------

struct SpectrumReport {
  std::string name;
  std::string family;
  int N = 0;
  std::string criterion;
  int n0 = 0;
  int k1_star = 0;
  double gamma = 0.0;
  double controllability_time = -1.0;  ///< -1 when inapplicable
  std::vector<int> representatives;
  std::vector<std::vector<int>> clusters;
  std::vector<int> profile_radius;
  std::vector<double> profile_gap;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SpectrumReport, name, family, N, criterion, n0, k1_star, gamma,
                                   controllability_time, representatives, clusters, profile_radius,
                                   profile_gap)

struct ControlReport {
  std::string name;
  int N = 0;
  double s = 0.0;
  double T = 0.0;
  std::vector<double> h_re;
  std::vector<double> h_im;
  std::vector<std::string> paths;
  double residual_max = 0.0;
  double control_norm = 0.0;
  double nu_empirical = 0.0;
  double frame_A = 0.0;
  double frame_B = 0.0;
  double condition = 0.0;
  double biorthogonality_residual = 0.0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ControlReport, name, N, s, T, h_re, h_im, paths, residual_max,
                                   control_norm, nu_empirical, frame_A, frame_B, condition,
                                   biorthogonality_residual)

struct SimulateReport {
  std::string name;
  int N = 0;
  double s = 0.0;
  double T = 0.0;
  double steering_error = 0.0;
  double mean_drift = 0.0;
  double residual_max = 0.0;
  double control_norm = 0.0;
  double nu_empirical = 0.0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SimulateReport, name, N, s, T, steering_error, mean_drift,
                                   residual_max, control_norm, nu_empirical)

struct StabilizeReport {
  std::string name;
  std::string feedback;
  int N = 0;
  double s = 0.0;
  double fitted_rate = 0.0;
  double decay_rate = 0.0;
  double fit_residual = 0.0;
  double delta_sq = 0.0;
  double lambda_target = 0.0;
  double min_eig_L = 0.0;
  double mean_drift = 0.0;
  double t_max = 0.0;
  double dt_out = 0.0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StabilizeReport, name, feedback, N, s, fitted_rate, decay_rate,
                                   fit_residual, delta_sq, lambda_target, min_eig_L, mean_drift,
                                   t_max, dt_out)

template <typename Report>
json report_to_json(const Report& r, const std::string& command) {
  json j = r;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

template <typename Report>
Report report_from_json(const json& j) {
  if (j.value("schema", 0) != kSchemaVersion) throw ConfigError("report: unsupported schema");
  return j.get<Report>();
}

// ---- artifact writers --------------------------------------------------------

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string trajectory_csv(const std::vector<double>& times, const std::vector<double>& norms,
                                  const std::vector<cplx>& means) {
  std::ostringstream os;
  os << "time,hs_norm,mean_re,mean_im\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << fmt(times[i]) << ',' << fmt(norms[i]) << ',' << fmt(means[i].real()) << ','
       << fmt(means[i].imag()) << '\n';
  }
  return os.str();
}

// ---- commands ----------------------------------------------------------------

struct Context {
  Scenario sc;
  DispersionSymbol sym;
  SpectrumAnalysis analysis;
};

inline Context make_context(const Scenario& sc) {
  DispersionSymbol sym = symbol_from_json(sc.symbol);
  SpectrumAnalysis an;
  try {
    an = cluster_spectrum(sym, sc.N, sc.cluster_tol);
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  return {sc, sym, an};
}

inline ControlShape make_shape(const Scenario& sc) {
  return make_bump(sc.bump.center, sc.bump.half_width, sc.N, sc.bump.M);
}

inline SpectrumReport spectrum_report(const Context& ctx) {
  const auto& a = ctx.analysis;
  SpectrumReport r;
  r.name = ctx.sc.name;
  r.family = ctx.sym.name();
  r.N = a.N;
  r.criterion = to_string(a.criterion);
  r.n0 = a.n0;
  r.k1_star = a.k1_star;
  r.gamma = a.gamma;
  r.controllability_time = a.criterion == Criterion::Inapplicable ? -1.0 : controllability_time(a);
  r.representatives = a.representatives;
  for (const auto& c : a.clusters) r.clusters.push_back(c.members);
  for (const auto& e : a.gamma_prime_profile) {
    r.profile_radius.push_back(e.radius);
    r.profile_gap.push_back(e.gap);
  }
  return r;
}

inline int cmd_analyze(const Context& ctx, const fs::path& out, std::ostream& log) {
  const SpectrumReport r = spectrum_report(ctx);
  write_json(out / "spectrum.json", report_to_json(r, "analyze"));
  log << "analyze " << ctx.sc.name << ": criterion " << r.criterion << ", n0=" << r.n0
      << ", k1*=" << r.k1_star << ", gamma=" << r.gamma << '\n';
  return kExitOk;
}

struct Synthesis {
  ControlShape shape;
  FourierField u0;
  FourierField u1;
  ControlSignal signal;
  Eigen::VectorXcd residuals;
};

inline Synthesis run_synthesis(const Context& ctx, std::uint64_t seed) {
  Synthesis s;
  s.shape = make_shape(ctx.sc);
  s.u0 = build_field(ctx.sc.initial, ctx.sc.N, ctx.sc.s, seed);
  s.u1 = build_field(ctx.sc.target, ctx.sc.N, ctx.sc.s, seed + 1);
  s.signal = synthesize(s.u0, s.u1, ctx.sym, ctx.analysis, s.shape, ctx.sc.T, ctx.sc.s);
  s.residuals = moment_residuals(s.signal, s.shape, ctx.analysis);
  return s;
}

inline int cmd_synthesize(const Context& ctx, const fs::path& out, std::uint64_t seed,
                          std::ostream& log) {
  const Synthesis syn = run_synthesis(ctx, seed);
  const auto& sig = syn.signal;
  ControlReport r;
  r.name = ctx.sc.name;
  r.N = sig.N;
  r.s = sig.s;
  r.T = sig.T;
  for (int k = -sig.N; k <= sig.N; ++k) {
    r.h_re.push_back(sig.h_at(k).real());
    r.h_im.push_back(sig.h_at(k).imag());
    r.paths.push_back(to_string(sig.path[k + sig.N]));
  }
  r.residual_max = syn.residuals.cwiseAbs().maxCoeff();
  r.control_norm = sig.norm;
  r.nu_empirical = sig.nu_empirical;
  r.frame_A = sig.family.bounds.A;
  r.frame_B = sig.family.bounds.B;
  r.condition = sig.family.condition;
  r.biorthogonality_residual = biorthogonality_residual(sig.family);
  write_json(out / "control.json", report_to_json(r, "synthesize"));
  write_json(out / "shape.json", shape_to_json(syn.shape));

  std::ostringstream csv;
  csv << "t,k,q_re,q_im\n";
  const int n = ctx.sc.samples;
  for (std::size_t c = 0; c < ctx.analysis.clusters.size(); ++c) {
    const int k = ctx.analysis.clusters[c].representative;
    for (int i = 0; i < n; ++i) {
      const double t = sig.T * i / (n - 1);
      const cplx q = sig.family.q(static_cast<Eigen::Index>(c), t);
      csv << fmt(t) << ',' << k << ',' << fmt(q.real()) << ',' << fmt(q.imag()) << '\n';
    }
  }
  write_text(out / "q_samples.csv", csv.str());
  log << "synthesize " << ctx.sc.name << ": residual_max=" << r.residual_max
      << ", control_norm=" << r.control_norm << ", nu=" << r.nu_empirical << '\n';
  return kExitOk;
}

inline int cmd_simulate(const Context& ctx, const fs::path& out, std::uint64_t seed,
                        std::ostream& log) {
  const Synthesis syn = run_synthesis(ctx, seed);
  const int n = ctx.sc.samples;
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) grid.push_back(ctx.sc.T * i / (n - 1));
  const auto traj = duhamel(syn.u0, ctx.sym, syn.shape, syn.signal, grid);
  std::vector<double> norms;
  std::vector<cplx> means;
  double drift = 0.0;
  for (const auto& u : traj) {
    norms.push_back(sobolev_norm(mean_free(u), ctx.sc.s));
    means.push_back(u.mean());
    drift = std::max(drift, std::abs(u.mean() - syn.u0.mean()));
  }
  write_text(out / "trajectory.csv", trajectory_csv(grid, norms, means));
  SimulateReport r;
  r.name = ctx.sc.name;
  r.N = ctx.sc.N;
  r.s = ctx.sc.s;
  r.T = ctx.sc.T;
  const double target_norm = sobolev_norm(syn.u1, ctx.sc.s);
  const double err = sobolev_norm(traj.back() - syn.u1, ctx.sc.s);
  r.steering_error = target_norm > 0.0 ? err / target_norm : err;
  r.mean_drift = drift;
  r.residual_max = syn.residuals.cwiseAbs().maxCoeff();
  r.control_norm = syn.signal.norm;
  r.nu_empirical = syn.signal.nu_empirical;
  write_json(out / "simulate.json", report_to_json(r, "simulate"));
  log << "simulate " << ctx.sc.name << ": steering_error=" << r.steering_error
      << ", mean_drift=" << r.mean_drift << '\n';
  return kExitOk;
}

inline int cmd_stabilize(const Context& ctx, const fs::path& out, std::uint64_t seed,
                         bool zero_feedback, std::ostream& log) {
  const auto& st = ctx.sc.stabilize;
  const ControlShape shape = make_shape(ctx.sc);
  const FieldSpec start = st.initial.is_null() ? ctx.sc.initial : FieldSpec{st.initial};
  const FourierField u0 = build_field(start, ctx.sc.N, ctx.sc.s, seed);
  const FeedbackKind kind = zero_feedback ? FeedbackKind::Zero : feedback_from_string(st.feedback);
  const FeedbackLaw law = build_feedback(kind, ctx.sym, shape, ctx.sc.s, st.lambda, st.T);
  const TrajectoryReport traj = closed_loop(u0, law, st.t_max, st.dt_out);
  write_text(out / "trajectory.csv", trajectory_csv(traj.times, traj.norms, traj.means));
  StabilizeReport r;
  r.name = ctx.sc.name;
  r.feedback = to_string(kind);
  r.N = ctx.sc.N;
  r.s = ctx.sc.s;
  r.fitted_rate = traj.fitted_rate;
  r.decay_rate = traj.decay_rate;
  r.fit_residual = traj.fit_residual;
  r.delta_sq = observability_constant(ctx.sym, shape, ctx.sc.s, st.T);
  r.lambda_target = kind == FeedbackKind::GramianInverse ? st.lambda : 0.0;
  r.min_eig_L = law.min_eig_L;
  r.mean_drift = traj.mean_drift;
  r.t_max = st.t_max;
  r.dt_out = st.dt_out;
  write_json(out / "stabilize.json", report_to_json(r, "stabilize"));
  log << "stabilize " << ctx.sc.name << ": feedback " << r.feedback
      << ", fitted_rate=" << r.fitted_rate << ", delta_sq=" << r.delta_sq << '\n';
  return kExitOk;
}

/// Runs one command on one scenario; maps errors to exit codes
/// (1 configuration, 2 violated hypothesis).
inline int run(Command command, const Scenario& sc, const RunOptions& opts) {
  std::ostream& err = *opts.err;
  try {
    const fs::path out(opts.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw ConfigError("cannot create output directory '" + out.string() + "': " + ec.message());
    const Context ctx = make_context(sc);
    write_json(out / "scenario.json", scenario_to_json(sc));
    switch (command) {
      case Command::Analyze: return cmd_analyze(ctx, out, *opts.log);
      case Command::Synthesize: return cmd_synthesize(ctx, out, opts.seed, *opts.log);
      case Command::Simulate: return cmd_simulate(ctx, out, opts.seed, *opts.log);
      case Command::Stabilize: return cmd_stabilize(ctx, out, opts.seed, opts.zero_feedback, *opts.log);
    }
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return kExitHypothesis;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

// ---- sweeps --------------------------------------------------------------------

struct Sweep {
  std::string path;
  std::vector<json> values;
};

inline json parse_scalar(const std::string& text) {
  try {
    std::size_t used = 0;
    if (text.find_first_of(".eE") == std::string::npos) {
      const long long v = std::stoll(text, &used);
      if (used == text.size()) return v;
    }
    const double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("sweep: '" + text + "' is not a number");
}

/// `path=a:b:n` (n evenly spaced values) or `path=v1,v2,...`.
inline Sweep parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("sweep: expected <param>=<start:stop:count> or <param>=<v1,v2,...>");
  }
  Sweep sw;
  sw.path = spec.substr(0, eq);
  const std::string range = spec.substr(eq + 1);
  if (range.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(range);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("sweep: range must be start:stop:count");
    const double a = parse_scalar(parts[0]).get<double>();
    const double b = parse_scalar(parts[1]).get<double>();
    const json n = parse_scalar(parts[2]);
    if (!n.is_number_integer() || n.get<long long>() < 1) throw ConfigError("sweep: count must be a positive integer");
    const long long count = n.get<long long>();
    for (long long i = 0; i < count; ++i) {
      sw.values.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
  } else {
    std::stringstream ss(range);
    std::string p;
    while (std::getline(ss, p, ',')) sw.values.push_back(parse_scalar(p));
  }
  if (sw.values.empty()) throw ConfigError("sweep: no values");
  return sw;
}

/// Runs `command` once per sweep value on a worker pool; each run writes to
/// its own subdirectory sweep_<i>/. Returns the worst exit code.
inline int run_sweep(Command command, const json& base, const Sweep& sweep, const RunOptions& opts,
                     unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = sweep.values.size();
  std::vector<int> codes(n, kExitOk);
  std::vector<std::string> logs(n), errs(n), dirs(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      std::ostringstream name;
      name << "sweep_" << std::setw(3) << std::setfill('0') << i;
      dirs[i] = name.str();
      std::ostringstream log, err;
      RunOptions local = opts;
      local.out_dir = (fs::path(opts.out_dir) / dirs[i]).string();
      local.log = &log;
      local.err = &err;
      try {
        json cfg = base;
        set_path(cfg, sweep.path, sweep.values[i]);
        codes[i] = run(command, scenario_from_json(cfg), local);
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        codes[i] = kExitConfig;
      }
      logs[i] = log.str();
      errs[i] = err.str();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, n); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json index = {{"schema", kSchemaVersion}, {"command", to_string(command)}, {"param", sweep.path},
                {"runs", json::array()}};
  int worst = kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    *opts.log << logs[i];
    *opts.err << errs[i];
    index["runs"].push_back({{"value", sweep.values[i]}, {"dir", dirs[i]}, {"exit_code", codes[i]}});
    worst = std::max(worst, codes[i]);
  }
  fs::create_directories(opts.out_dir);
  write_json(fs::path(opts.out_dir) / "sweep.json", index);
  return worst;
}

}  // namespace dispctl::cli
