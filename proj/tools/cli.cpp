#include "cli.hpp"

#include "minplus/evolution.hpp"
#include "minplus/io.hpp"
#include "minplus/regimes.hpp"
#include "minplus/series.hpp"
#include "minplus/simulate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace minplus::cli {
namespace {

Range parse_range(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const auto v = std::stoll(text);
      return Range{v, v};
    }
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    Range r{std::stoll(lo, &used_lo), std::stoll(hi, &used_hi)};
    if (used_lo != lo.size() || used_hi != hi.size()) throw std::invalid_argument(text);
    if (r.lo < 1 || r.hi < r.lo) throw std::out_of_range(text);
    return r;
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected LO:HI with 1 <= LO <= HI, got '" + text + "'", kExitError);
  }
}

std::optional<std::int64_t> parse_kmax(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoll(text, &used);
    if (used == text.size() && v >= 2) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--kmax: expected 'auto' or an integer >= 2, got '" + text + "'", kExitError);
}

int default_workers() {
  const char* env = std::getenv(kWorkersEnv);
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096) {
    throw UsageError(std::string(kWorkersEnv) + " must be an integer in [1, 4096]", kExitError);
  }
  return static_cast<int>(v);
}

TailMode parse_tail_mode(const std::string& s) {
  if (s == "lump") return TailMode::kLump;
  if (s == "drop") return TailMode::kDropRenormalize;
  return TailMode::kExact;
}

TruncationPolicy policy_for(const RunConfig& cfg) {
  TruncationPolicy pol = cfg.k_max ? TruncationPolicy::fixed(*cfg.k_max) : TruncationPolicy::automatic();
  pol.tail_mode = parse_tail_mode(cfg.tail_mode);
  return pol;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Data goes to the output path; the summary goes to stdout unless stdout
/// already carries the data.
struct Sink {
  const RunConfig& cfg;
  const ExecOptions& opts;

  void data(const std::string& contents) const {
    if (cfg.output_path.empty() || cfg.output_path == "-") {
      *opts.out << contents;
    } else {
      write_output(cfg.output_path, contents);
    }
  }
  std::ostream& summary() const {
    return (cfg.output_path.empty() || cfg.output_path == "-") ? *opts.err : *opts.out;
  }
};

int run_evolve(const RunConfig& cfg, const Sink& sink) {
  const MassFunction m = evolve(cfg.N, cfg.p, policy_for(cfg));
  std::ostringstream os;
  if (cfg.format == Format::kJson) {
    os << to_json(m).dump(1) << '\n';
  } else {
    write_mass_csv(os, m);
  }
  sink.data(os.str());
  const Moments mo = moments(m);
  sink.summary() << "evolve N=" << cfg.N << " p=" << format_double(cfg.p) << " support="
                 << m.support() << " k_max=" << m.k_max << " tail_mass=" << sci(m.tail_mass)
                 << " mean_log=" << fixed6(mo.mean_log_x) << '\n';
  return kExitOk;
}

int run_sample(const RunConfig& cfg, const Sink& sink) {
  SimConfig sim;
  sim.depth = cfg.N;
  sim.p_plus = cfg.p;
  sim.n_samples = cfg.samples;
  sim.seed = cfg.seed;
  sim.workers = cfg.workers;
  const EmpiricalSummary s = run(sim);

  std::optional<ExactComparison> cmp;
  if (cfg.compare) {
    const auto cap = std::max<std::int64_t>(2, std::int64_t{1} << (cfg.N - 1));
    cmp = compare_to_exact(s, evolve(cfg.N, cfg.p, TruncationPolicy::fixed(cap)));
  }

  std::ostringstream os;
  if (cfg.format == Format::kJson) {
    Json j = to_json(s);
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    if (cmp) {
      j["exact_comparison"] = Json{{"max_abs_cdf_gap", cmp->max_abs_cdf_gap},
                                   {"chi2_stat", cmp->chi2_stat},
                                   {"chi2_dof", cmp->chi2_dof},
                                   {"chi2_p_value", cmp->chi2_p_value}};
    }
    os << j.dump(1) << '\n';
  } else {
    write_empirical_csv(os, s);
  }
  sink.data(os.str());

  auto& line = sink.summary();
  line << "sample N=" << cfg.N << " p=" << format_double(cfg.p) << " n=" << s.n
       << " seed=" << cfg.seed << " workers=" << cfg.workers << " mean_log=" << fixed6(s.mean_log);
  if (cmp) {
    line << " sup_cdf_gap=" << sci(cmp->max_abs_cdf_gap) << " chi2_p=" << sci(cmp->chi2_p_value);
  }
  line << '\n';
  if (cfg.strict && cmp && cmp->chi2_p_value < 1e-3) return kExitViolation;
  return kExitOk;
}

LowerStepModel lower_model_for(const RunConfig& cfg) {
  if (cfg.model == "lower-a") return LowerStepModel::pure_a(cfg.k_range.hi);
  if (cfg.model == "lower-log") return LowerStepModel::log_squared(cfg.K, cfg.c);
  LowerStepModel m = LowerStepModel::from_a_sequence(cfg.K, cfg.c);
  m.check();
  return m;
}

int run_bounds(const RunConfig& cfg, const Sink& sink) {
  CertificateReport rep;
  Json j;
  if (cfg.model == "upper") {
    const UpperModel m(cfg.C, cfg.beta);
    rep = certify_upper(m, cfg.n_range, cfg.k_range, cfg.emit_grid);
    j["model"] = Json{{"kind", "upper"}, {"C", m.C}, {"beta", m.beta}, {"admissible", m.admissible()}};
  } else {
    rep = certify_lower(lower_model_for(cfg), cfg.n_range, cfg.k_range, cfg.emit_grid);
    j["model"] = Json{{"kind", cfg.model}, {"c", cfg.c}, {"K", cfg.K}};
  }
  j["report"] = to_json(rep);
  sink.data(j.dump(1) + "\n");

  auto& line = sink.summary();
  line << "bounds model=" << cfg.model << " N=" << cfg.n_range.lo << ':' << cfg.n_range.hi
       << " k=" << cfg.k_range.lo << ':' << cfg.k_range.hi << " min_margin=" << sci(rep.min_margin)
       << " violations=" << rep.violations;
  if (rep.gamma_estimate) line << " gamma=" << sci(*rep.gamma_estimate);
  line << (rep.passed() ? " PASS" : " FAIL") << '\n';
  return cfg.strict && !rep.passed() ? kExitViolation : kExitOk;
}

int run_series(const RunConfig& cfg, const Sink& sink) {
  SeriesEval e;
  if (cfg.fn == "h") {
    e = eval_h(cfg.k);
  } else if (cfg.fn == "B") {
    e = eval_B(cfg.k);
  } else if (cfg.fn == "M") {
    e = eval_M(cfg.A, cfg.k);
  } else {
    e = eval_S(cfg.k, cfg.alpha);
  }
  const std::string verdict = e.satisfied ? "OK" : "FAIL";
  *sink.opts.out << e.name << '(' << e.k << ") = " << fixed6(e.value) << " bound "
                 << fixed6(e.bound) << ' ' << verdict << '\n';
  if (!cfg.output_path.empty() && cfg.output_path != "-") {
    write_output(cfg.output_path, to_json(e).dump(1) + "\n");
  }
  return cfg.strict && !e.satisfied ? kExitViolation : kExitOk;
}

int run_limit(const RunConfig& cfg, const Sink& sink) {
  const MassFunction m = evolve(cfg.N, 0.5, policy_for(cfg));
  const LimitDiagnostics d = diagnose(m);
  const auto rows = limit_table(m, cfg.max_rows);
  std::ostringstream os;
  if (cfg.format == Format::kJson) {
    Json j = to_json(d);
    Json table = Json::array();
    for (const auto& r : rows) table.push_back({r.t, r.empirical, r.limit});
    j["rows"] = table;
    os << j.dump(1) << '\n';
  } else {
    write_limit_csv(os, rows);
  }
  sink.data(os.str());
  sink.summary() << "limit N=" << d.N << " ks_distance=" << fixed6(d.ks_distance)
                 << " mean_scaled=" << fixed6(d.mean_scaled)
                 << " target=" << fixed6(d.target_mean)
                 << (d.truncated ? " truncated" : "") << '\n';
  return kExitOk;
}

int run_regimes(const RunConfig& cfg, const Sink& sink) {
  RegimeOptions ro;
  ro.k_max = cfg.regime_k_max;
  ro.tol = cfg.tol;
  ro.N_max = cfg.N_max;
  const RegimeReport r = regime_report(cfg.p, ro);
  sink.data(to_json(r).dump(1) + "\n");

  auto& line = sink.summary();
  line << "regimes p=" << format_double(cfg.p) << ' ' << to_string(r.classification);
  bool ok = true;
  if (r.limit_survival) {
    line << " levels=" << r.limit_survival->levels;
    if (r.limit_survival->values.size() >= 2) line << " c_2=" << fixed6(r.limit_survival->values[1]);
    if (r.fixed_point_c2) line << " predicted=" << fixed6(*r.fixed_point_c2);
  }
  if (!r.growth.empty()) {
    for (const auto& g : r.growth) ok = ok && g.ok;
    line << " growth_rows=" << r.growth.size() << (ok ? " all_ok" : " BELOW_BOUND");
  }
  line << '\n';
  return cfg.strict && !ok ? kExitViolation : kExitOk;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string format;
  std::string kmax = "auto";
  std::string n_range = "10000:10050";
  std::string k_range = "1:10000";

  CLI::App app{"Exact law, sampling and bound checks for the min/plus binary tree"};
  app.name("minplus");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--output", cfg.output_path, "Output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_flag("--strict", cfg.strict, "Exit 2 when a check fails");

  auto* ev = app.add_subcommand("evolve", "Exact distribution of X_N");
  ev->add_option("--N", cfg.N, "Tree depth (a single leaf is depth 1)")->check(CLI::Range(1, 100000));
  ev->add_option("--p", cfg.p, "Probability of +")->check(CLI::Range(0.0, 1.0));
  ev->add_option("--kmax", kmax, "Support cap or 'auto'");
  ev->add_option("--tail", cfg.tail_mode, "Mass above the cap")
      ->check(CLI::IsMember({"lump", "drop", "exact"}));

  auto* sa = app.add_subcommand("sample", "Monte Carlo draws of X_N");
  sa->add_option("--N", cfg.N, "Tree depth")->check(CLI::Range(1, kMaxSimDepth));
  sa->add_option("--p", cfg.p, "Probability of +")->check(CLI::Range(0.0, 1.0));
  sa->add_option("--samples", cfg.samples, "Number of draws")->check(CLI::PositiveNumber);
  auto* workers_opt =
      sa->add_option("--workers", cfg.workers, "Worker threads (default from MINPLUS_WORKERS, else 1)")
          ->check(CLI::Range(1, 4096));
  sa->add_flag("--compare", cfg.compare, "Compare with the exact law (N <= 20)");

  auto* bo = app.add_subcommand("bounds", "Recurrence-inequality certificates for bound models");
  bo->add_option("--model", cfg.model, "upper, lower (a_k splice), lower-a, lower-log")
      ->check(CLI::IsMember({"upper", "lower", "lower-a", "lower-log"}));
  bo->add_option("--C", cfg.C, "Upper model constant")->check(CLI::PositiveNumber);
  bo->add_option("--beta", cfg.beta, "Upper model tail parameter (> 1)");
  bo->add_option("--c", cfg.c, "Lower model constant")->check(CLI::PositiveNumber);
  bo->add_option("--K", cfg.K, "Lower model junction index")->check(CLI::Range(1, 1 << 30));
  bo->add_option("--N-range", n_range, "LO:HI");
  bo->add_option("--k-range", k_range, "LO:HI");
  bo->add_flag("--emit-grid", cfg.emit_grid, "Include every residual in the JSON");

  auto* se = app.add_subcommand("series", "Evaluate h, B, M or S against its bound");
  se->add_option("--fn", cfg.fn, "h, B, M or S")->check(CLI::IsMember({"h", "B", "M", "S"}));
  se->add_option("--k", cfg.k, "Argument")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  se->add_option("--alpha", cfg.alpha, "Exponent for S, in (0, 1/2)");
  se->add_option("--A", cfg.A, "Window divisor for M")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));

  auto* li = app.add_subcommand("limit", "Scaled CDF of log X_N against t^2 (p = 1/2)");
  li->add_option("--N", cfg.N, "Tree depth")->check(CLI::Range(1, 100000));
  li->add_option("--kmax", kmax, "Support cap or 'auto'");
  li->add_option("--max-rows", cfg.max_rows, "Row limit for the CSV")->check(CLI::Range(2, 10000000));

  auto* re = app.add_subcommand("regimes", "Sub- and supercritical behaviour");
  re->add_option("--p", cfg.p, "Probability of +")->check(CLI::Range(0.0, 1.0));
  re->add_option("--k-max", cfg.regime_k_max, "Support cap")->check(CLI::Range(2, 1 << 26));
  re->add_option("--tol", cfg.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  re->add_option("--N-max", cfg.N_max, "Deepest level for growth rows")->check(CLI::Range(1, 64));

  app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), kExitOk);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), kExitOk);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\nRun with --help for usage.", kExitError);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "evolve") cfg.command = Command::kEvolve;
  if (name == "sample") cfg.command = Command::kSample;
  if (name == "bounds") cfg.command = Command::kBounds;
  if (name == "series") cfg.command = Command::kSeries;
  if (name == "limit") cfg.command = Command::kLimit;
  if (name == "regimes") cfg.command = Command::kRegimes;
  if (name == "selftest") cfg.command = Command::kSelftest;

  const bool csv_ok = cfg.command == Command::kEvolve || cfg.command == Command::kSample ||
                      cfg.command == Command::kLimit;
  if (format.empty()) {
    cfg.format = csv_ok ? Format::kCsv : Format::kJson;
  } else {
    cfg.format = format == "json" ? Format::kJson : Format::kCsv;
    if (cfg.format == Format::kCsv && !csv_ok) {
      throw UsageError("--format csv is not available for '" + name + "'", kExitError);
    }
  }

  cfg.k_max = parse_kmax(kmax);
  cfg.n_range = parse_range(n_range, "--N-range");
  cfg.k_range = parse_range(k_range, "--k-range");
  if (cfg.command == Command::kSample && workers_opt->count() == 0) cfg.workers = default_workers();
  if (cfg.command == Command::kSample && cfg.compare && cfg.N > 20) {
    throw UsageError("--compare needs N <= 20", kExitError);
  }
  if (cfg.command == Command::kBounds) {
    if (cfg.model == "upper" && !(cfg.beta > 1.0)) throw UsageError("--beta must exceed 1", kExitError);
    if (cfg.n_range.hi > 100000000) throw UsageError("--N-range upper end too large", kExitError);
  }
  if (cfg.command == Command::kSeries) {
    if (cfg.fn == "B" && cfg.k < 2) throw UsageError("B needs --k >= 2", kExitError);
    if (cfg.fn == "S" && (cfg.k < 2 || !(cfg.alpha > 0.0 && cfg.alpha < 0.5))) {
      throw UsageError("S needs --k >= 2 and 0 < --alpha < 0.5", kExitError);
    }
    if (cfg.fn == "M" && cfg.k < cfg.A) throw UsageError("M needs --k >= --A", kExitError);
  }
  return cfg;
}

int execute(const RunConfig& cfg, const ExecOptions& opts_in) {
  ExecOptions opts = opts_in;
  if (opts.out == nullptr) opts.out = &std::cout;
  if (opts.err == nullptr) opts.err = &std::cerr;
  const Sink sink{cfg, opts};
  try {
    switch (cfg.command) {
      case Command::kEvolve:
        return run_evolve(cfg, sink);
      case Command::kSample:
        return run_sample(cfg, sink);
      case Command::kBounds:
        return run_bounds(cfg, sink);
      case Command::kSeries:
        return run_series(cfg, sink);
      case Command::kLimit:
        return run_limit(cfg, sink);
      case Command::kRegimes:
        return run_regimes(cfg, sink);
      case Command::kSelftest:
        if (!opts.selftest) {
          *opts.err << "selftest: acceptance suite not linked into this binary\n";
          return kExitError;
        }
        return opts.selftest(*opts.out) == 0 ? kExitOk : (cfg.strict ? kExitViolation : kExitError);
    }
  } catch (const std::exception& e) {
    *opts.err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

int run(int argc, const char* const* argv, const ExecOptions& opts) {
  std::ostream& err = opts.err ? *opts.err : std::cerr;
  std::ostream& out = opts.out ? *opts.out : std::cout;
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const UsageError& e) {
    (e.exit_code() == kExitOk ? out : err) << e.what() << '\n';
    return e.exit_code();
  }
  return execute(cfg, opts);
}

}  // namespace minplus::cli
