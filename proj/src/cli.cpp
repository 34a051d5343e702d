#include "skewlqu/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skewlqu/state_io.hpp"

namespace skewlqu::cli {

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string spectrum_text(const RVector& s) {
  std::string out = "[";
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", s(k));
    out += (k ? ", " : "") + std::string(buf);
  }
  return out + "]";
}

struct ParsedFlags {
  long dim_a = 2;
  long dim_b = 2;
  long trials = 1000;
  long restarts = 16;
  long kraus = 2;
  long bases = 20;
  std::string spectrum;
  std::string format = "json";
  std::string side = "A";
  std::string mode = "argmin";
};

void add_common_flags(CLI::App* app, RunConfig& cfg, ParsedFlags& flags, bool verify) {
  app->add_option("--dim-a", flags.dim_a, "dimension of subsystem A")->capture_default_str();
  app->add_option("--dim-b", flags.dim_b, "dimension of subsystem B")->capture_default_str();
  app->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  app->add_option("--spectrum", flags.spectrum, "observable spectrum v1,v2,... (strictly ascending)");
  app->add_option("--restarts", flags.restarts, "optimizer restarts")->capture_default_str();
  app->add_option("--tol", cfg.tol, "violation tolerance")->capture_default_str();
  app->add_option("--out", cfg.out_path, "output file");
  app->add_option("--format", flags.format, "report format: json or csv")->capture_default_str();
  app->add_option("--state-file", cfg.state_file, "input state (plain-text matrix file)");
  if (verify) {
    app->add_option("--trials", flags.trials, "number of trials")->capture_default_str();
    app->add_option("--kraus", flags.kraus, "Kraus operators per channel")->capture_default_str();
    app->add_option("--bases", flags.bases, "measurement bases per trial")->capture_default_str();
  } else {
    app->add_option("--basis-file", cfg.basis_file, "unitary whose columns form the observable/measurement basis");
    app->add_option("--side", flags.side, "subsystem for lqu: A or B")->capture_default_str();
  }
}

void require_positive(long v, const char* name) {
  if (v < 1) throw Error(ErrorKind::UsageError, std::string(name) + " must be positive");
}

}  // namespace

RVector parse_spectrum(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw Error(ErrorKind::UsageError, "bad spectrum value '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorKind::UsageError, "empty spectrum");
  RVector s = Eigen::Map<RVector>(values.data(), static_cast<Eigen::Index>(values.size()));
  try {
    require_nondegenerate(s);
  } catch (const Error& e) {
    throw Error(ErrorKind::UsageError, std::string("degenerate spectrum: ") + e.what());
  }
  return s;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  ParsedFlags flags;
  CLI::App app{"Skew information, local quantum uncertainty and steering bounds", "skewlqu"};
  app.require_subcommand(1);

  auto* skew = app.add_subcommand("skew", "skew information and variance of a state");
  auto* q = app.add_subcommand("q", "total and local quantum uncertainty");
  auto* lqu_cmd = app.add_subcommand("lqu", "local quantum uncertainty");
  auto* steer_cmd = app.add_subcommand("steer", "steering ensemble and steering-induced skew information");
  auto* verify = app.add_subcommand("verify", "Monte Carlo verification harnesses");
  verify->require_subcommand(1);
  auto* claim1 = verify->add_subcommand("claim1", "LQU after a commuting-Kraus channel vs local skew information");
  auto* claim2 = verify->add_subcommand("claim2", "steering-induced skew information vs LQU");
  auto* lemma = verify->add_subcommand("lemma", "per-basis steering inequality without optimization");
  auto* avg = verify->add_subcommand("avg", "averaged steering bound vs Q_B");
  for (auto* sub : {skew, q, lqu_cmd, steer_cmd}) add_common_flags(sub, cfg, flags, false);
  for (auto* sub : {claim1, claim2, lemma, avg}) add_common_flags(sub, cfg, flags, true);
  claim2->add_option("--mode", flags.mode, "argmin or random")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cfg.command = Command::Help;
    const CLI::App* target = &app;
    for (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub;
         sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front()) {
      target = sub;
    }
    cfg.help_text = target->help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::UsageError, e.what() + std::string("\n\n") + app.help());
  }

  if (*skew) cfg.command = Command::Skew;
  else if (*q) cfg.command = Command::Q;
  else if (*lqu_cmd) cfg.command = Command::Lqu;
  else if (*steer_cmd) cfg.command = Command::Steer;
  else if (*claim1) cfg.command = Command::VerifyClaim1;
  else if (*claim2) cfg.command = Command::VerifyClaim2;
  else if (*lemma) cfg.command = Command::VerifyClaim2Lemma;
  else cfg.command = Command::VerifyAvg;

  require_positive(flags.dim_a, "--dim-a");
  require_positive(flags.dim_b, "--dim-b");
  require_positive(flags.trials, "--trials");
  require_positive(flags.restarts, "--restarts");
  require_positive(flags.kraus, "--kraus");
  require_positive(flags.bases, "--bases");
  if (!(cfg.tol > 0.0)) throw Error(ErrorKind::UsageError, "--tol must be positive");
  if (flags.dim_a * flags.dim_b > kMaxDimension) throw Error(ErrorKind::UsageError, "joint dimension exceeds 32");
  cfg.n_a = flags.dim_a;
  cfg.n_b = flags.dim_b;
  cfg.trials = static_cast<std::size_t>(flags.trials);
  cfg.restarts = static_cast<int>(flags.restarts);
  cfg.kraus_count = static_cast<std::size_t>(flags.kraus);
  cfg.bases_per_trial = static_cast<std::size_t>(flags.bases);
  if (!flags.spectrum.empty()) cfg.spectrum = parse_spectrum(flags.spectrum);
  cfg.out_format = parse_report_format(flags.format);
  if (flags.side == "A" || flags.side == "a") cfg.side = Subsystem::A;
  else if (flags.side == "B" || flags.side == "b") cfg.side = Subsystem::B;
  else throw Error(ErrorKind::UsageError, "--side must be A or B");
  if (flags.mode == "argmin" || flags.mode == "argmin_K") cfg.mode = Claim2Mode::ArgminK;
  else if (flags.mode == "random" || flags.mode == "random_K") cfg.mode = Claim2Mode::RandomK;
  else throw Error(ErrorKind::UsageError, "--mode must be argmin or random");
  return cfg;
}

namespace {

BipartiteState input_bipartite(const RunConfig& cfg) {
  if (cfg.state_file.empty()) {
    Rng rng{cfg.master_seed, 0x7374617465ULL};
    return BipartiteState(ginibre_state(cfg.n_a * cfg.n_b, rng), {cfg.n_a, cfg.n_b});
  }
  auto loaded = load_state(cfg.state_file);
  if (auto* bi = std::get_if<BipartiteState>(&loaded)) return *bi;
  const auto& rho = std::get<DensityMatrix>(loaded);
  if (rho.dim() != cfg.n_a * cfg.n_b) {
    throw Error(ErrorKind::DimensionMismatch, "state file has 'dim: " + std::to_string(rho.dim()) +
                                                  "'; use a 'dims: n_A n_B' header or matching --dim-a/--dim-b");
  }
  return BipartiteState(rho, {cfg.n_a, cfg.n_b});
}

DensityMatrix input_single(const RunConfig& cfg) {
  if (cfg.state_file.empty()) return input_bipartite(cfg).state();
  auto loaded = load_state(cfg.state_file);
  if (auto* bi = std::get_if<BipartiteState>(&loaded)) return bi->state();
  return std::get<DensityMatrix>(loaded);
}

CMatrix basis_unitary(const RunConfig& cfg, Eigen::Index n) {
  if (cfg.basis_file.empty()) return CMatrix::Identity(n, n);
  const auto file = read_matrix_file(cfg.basis_file);
  if (file.matrix.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "basis file has dimension " + std::to_string(file.matrix.rows()) +
                                                  ", expected " + std::to_string(n));
  }
  return file.matrix;
}

RVector spectrum_for(const RunConfig& cfg, Eigen::Index n) {
  RVector s = cfg.spectrum ? *cfg.spectrum : default_spectrum(n);
  if (s.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "spectrum has " + std::to_string(s.size()) + " values, need " +
                                                  std::to_string(n));
  }
  return s;
}

HarnessConfig harness_config(const RunConfig& cfg) {
  HarnessConfig h;
  h.n_a = cfg.n_a;
  h.n_b = cfg.n_b;
  h.trials = cfg.trials;
  h.tol = cfg.tol;
  h.master_seed = cfg.master_seed;
  h.restarts = cfg.restarts;
  h.kraus_count = cfg.kraus_count;
  h.bases_per_trial = cfg.bases_per_trial;
  h.mode = cfg.mode;
  h.workers = workers_from_env(0);
  return h;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const HarnessConfig h = harness_config(cfg);
  VerificationRun result;
  switch (cfg.command) {
    case Command::VerifyClaim1: result = verify_claim1(h); break;
    case Command::VerifyClaim2: result = verify_claim2(h); break;
    case Command::VerifyClaim2Lemma: result = verify_claim2_lemma(h); break;
    default: result = verify_avg_bound(h); break;
  }
  out << format_summary(result.report);
  const auto& report = result.report;
  out << "result=" << (report.violations > 0 ? "VIOLATION" : report.failed > 0 ? "FAILED_TRIALS" : "PASS") << '\n';
  if (!cfg.out_path.empty()) write_report(result.report, result.records, cfg.out_path, cfg.out_format);
  if (report.violations > 0) return kExitViolation;
  return report.failed > 0 ? kExitError : kExitOk;
}

void run_skew(const RunConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = input_single(cfg);
  const RVector s = spectrum_for(cfg, rho.dim());
  const NondegenerateObservable k(s, basis_unitary(cfg, rho.dim()));
  out << "dim=" << rho.dim() << '\n';
  out << "spectrum=" << spectrum_text(s) << '\n';
  out << "skew_information=" << fixed(skew_information(rho, k.observable())) << '\n';
  out << "variance=" << fixed(variance(rho, k.observable())) << '\n';
}

void run_q(const RunConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = input_single(cfg);
  out << "dim=" << rho.dim() << '\n';
  out << "q_total=" << fixed(q_total(rho, gell_mann_basis(rho.dim()))) << '\n';
  if (!cfg.state_file.empty() && !std::holds_alternative<BipartiteState>(load_state(cfg.state_file))) return;
  const BipartiteState bi = input_bipartite(cfg);
  out << "q_local_A=" << fixed(q_local(bi, Subsystem::A, gell_mann_basis(bi.n_a()))) << '\n';
  out << "q_local_B=" << fixed(q_local(bi, Subsystem::B, gell_mann_basis(bi.n_b()))) << '\n';
}

void run_lqu(const RunConfig& cfg, std::ostream& out) {
  const BipartiteState rho = input_bipartite(cfg);
  const RVector s = spectrum_for(cfg, rho.dims().of(cfg.side));
  LquOptions opts;
  opts.restarts = cfg.restarts;
  opts.seed = derive_seed({cfg.master_seed, 0x6c7175ULL});
  const auto result = lqu(rho, s, cfg.side, opts);
  out << "dims=" << rho.n_a() << "x" << rho.n_b() << '\n';
  out << "side=" << (cfg.side == Subsystem::A ? "A" : "B") << '\n';
  out << "spectrum=" << spectrum_text(s) << '\n';
  out << "lqu=" << fixed(result.value) << '\n';
  out << "restarts=" << result.restarts_used << '\n';
  out << "converged=" << (result.converged ? "true" : "false") << '\n';
  if (cfg.side == Subsystem::A && rho.n_a() == 2 && s.size() == 2 && s(0) == -1.0 && s(1) == 1.0) {
    out << "lqu_closed_form=" << fixed(lqu_2xd(rho)) << '\n';
  }
}

void run_steer(const RunConfig& cfg, std::ostream& out) {
  const BipartiteState rho = input_bipartite(cfg);
  const MeasurementBasis theta(basis_unitary(cfg, rho.n_a()));
  const RVector s = spectrum_for(cfg, rho.n_b());
  const auto k_b = NondegenerateObservable::diagonal(s);
  const auto ensemble = steer(rho, theta);
  out << "dims=" << rho.n_a() << "x" << rho.n_b() << '\n';
  for (const auto& o : ensemble.outcomes) {
    out << "outcome " << o.index << " p=" << fixed(o.probability) << '\n';
    write_matrix_file(out, o.conditional.matrix());
  }
  for (const auto& sk : ensemble.skipped) out << "outcome " << sk.index << " skipped p=" << fixed(sk.probability) << '\n';
  SteeringOptions opts;
  opts.restarts = cfg.restarts;
  opts.seed = derive_seed({cfg.master_seed, 0x7374656572ULL});
  const ObservableBasis basis_b = gell_mann_basis(rho.n_b());
  out << "spectrum_B=" << spectrum_text(s) << '\n';
  out << "steered_skew_sum=" << fixed(steered_skew_sum(rho, theta, k_b)) << '\n';
  out << "steering_induced_skew=" << fixed(steering_induced_skew(rho, k_b, opts).value) << '\n';
  out << "skew_joint_B=" << fixed(skew_information(rho.state(), Observable(embed_local(k_b.matrix(), rho.dims(),
                                                                                        Subsystem::B))))
      << '\n';
  out << "average_steering_induced_q=" << fixed(average_steering_induced_q(rho, basis_b, opts).value) << '\n';
  out << "q_local_B=" << fixed(q_local(rho, Subsystem::B, basis_b)) << '\n';
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == Command::Help) {
    out << cfg.help_text;
    return kExitOk;
  }
  switch (cfg.command) {
    case Command::VerifyClaim1:
    case Command::VerifyClaim2:
    case Command::VerifyClaim2Lemma:
    case Command::VerifyAvg:
      return run_verify(cfg, out);
    default:
      break;
  }
  std::ostringstream text;
  switch (cfg.command) {
    case Command::Skew: run_skew(cfg, text); break;
    case Command::Q: run_q(cfg, text); break;
    case Command::Lqu: run_lqu(cfg, text); break;
    default: run_steer(cfg, text); break;
  }
  out << text.str();
  if (!cfg.out_path.empty()) {
    std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text.str())) throw Error(ErrorKind::IoError, "cannot write " + cfg.out_path);
  }
  return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  try {
    return run(cfg, out);
  } catch (const std::exception& e) {
    std::string line = e.what();
    std::replace(line.begin(), line.end(), '\n', ' ');
    err << "error: " << line << '\n';
    if (const auto* error = dynamic_cast<const Error*>(&e); error && error->kind() == ErrorKind::UsageError) {
      return kExitUsage;
    }
    return kExitError;
  }
}

}  // namespace skewlqu::cli
