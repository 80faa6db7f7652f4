#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.hpp"
#include "wva/errors.hpp"
#include "wva/inference.hpp"
#include "wva/photostats.hpp"
#include "wva/simulator.hpp"

namespace wva::cli {

namespace {

using json = nlohmann::json;

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Diagnostics on the error stream, filtered by WVA_LOG.
class Log {
 public:
  explicit Log(std::ostream& err) : err_(err) {
    if (const char* env = std::getenv("WVA_LOG")) {
      const std::string v = env;
      if (v == "error") level_ = LogLevel::Error;
      else if (v == "warn") level_ = LogLevel::Warn;
      else if (v == "info") level_ = LogLevel::Info;
      else if (v == "debug") level_ = LogLevel::Debug;
    }
  }
  void error(const std::string& msg) const { write(LogLevel::Error, "error", msg); }
  void warn(const std::string& msg) const { write(LogLevel::Warn, "warn", msg); }
  void info(const std::string& msg) const { write(LogLevel::Info, "info", msg); }

 private:
  void write(LogLevel at, const char* tag, const std::string& msg) const {
    if (static_cast<int>(at) <= static_cast<int>(level_)) {
      err_ << "wva: " << tag << ": " << msg << '\n';
    }
  }
  std::ostream& err_;
  LogLevel level_ = LogLevel::Warn;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

json json_number(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

/// Global flags plus per-key overrides of the configuration file.
struct Options {
  std::string config_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_path;

  double phi = 0, delta = 0, alpha_sq = 0, gamma_rate = 0, tau_corr = 0, eta_sq = 0;
  long long m_photons = 0;
  std::size_t trials = 0;
  std::string noise, measurement, indexing;

  // subcommand options
  double delta_theta = 0.0;
  std::optional<long long> kmin, kmax;
  std::string fisher_mode = "analytic";
  std::size_t datasets = 10000;
  std::string summary_path;
  double pmin = 0.0025, pmax = 0.1;
  std::size_t steps = 40;
  std::vector<double> deltas;
  std::size_t numeric = 0;
  long long mmin = 10, mmax = 1000000;
  std::vector<double> probs = {0.01, 0.03};
};

struct Flags {
  CLI::Option* seed = nullptr;
  CLI::Option* phi = nullptr;
  CLI::Option* delta = nullptr;
  CLI::Option* alpha_sq = nullptr;
  CLI::Option* m_photons = nullptr;
  CLI::Option* gamma_rate = nullptr;
  CLI::Option* tau_corr = nullptr;
  CLI::Option* eta_sq = nullptr;
  CLI::Option* noise = nullptr;
  CLI::Option* measurement = nullptr;
  CLI::Option* indexing = nullptr;
  CLI::Option* trials = nullptr;
};

RunConfig resolve(const Options& o, const Flags& f) {
  RunConfig rc = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
  ExperimentConfig& e = rc.experiment;
  if (f.phi->count()) e.phi = o.phi;
  if (f.delta->count()) e.delta = o.delta;
  if (f.alpha_sq->count()) e.alpha_sq = o.alpha_sq;
  if (f.m_photons->count()) e.m_photons = o.m_photons;
  if (f.gamma_rate->count()) e.gamma_rate = o.gamma_rate;
  if (f.tau_corr->count()) e.tau_corr = o.tau_corr;
  if (f.eta_sq->count()) e.eta_sq = o.eta_sq;
  if (f.noise->count()) e.noise_regime = parse_noise(o.noise);
  if (f.measurement->count()) e.measurement_mode = parse_measurement(o.measurement);
  if (f.indexing->count()) e.noise_indexing = parse_indexing(o.indexing);
  if (f.seed->count()) rc.seed = o.seed;
  if (f.trials->count()) {
    if (o.trials < 2) throw ConfigError("--trials must be >= 2");
    rc.trials = o.trials;
  }
  validate(e);
  return rc;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw ConfigError("unsupported --format '" + format + "' for this command");
}

// ---------------------------------------------------------------------------

void cmd_pmf(const Options& o, const RunConfig& rc, std::ostream& out) {
  require_format(o.format, {"csv", "json"});
  const double alpha_sq = rc.experiment.alpha_sq;
  const auto [lo, hi] = skellam_support(alpha_sq, o.delta_theta);
  const long long kmin = o.kmin.value_or(lo);
  const long long kmax = o.kmax.value_or(hi);
  if (kmin > kmax) {
    throw DomainError("empty k range: kmin > kmax");
  }
  if (o.format == "json") {
    json rows = json::array();
    for (long long k = kmin; k <= kmax; ++k) {
      rows.push_back({{"k", k}, {"pmf", skellam_pmf(k, alpha_sq, o.delta_theta)}});
    }
    out << rows.dump(2) << '\n';
    return;
  }
  out << "k,pmf\n";
  for (long long k = kmin; k <= kmax; ++k) {
    out << k << ',' << sci(skellam_pmf(k, alpha_sq, o.delta_theta)) << '\n';
  }
}

void cmd_fisher(const Options& o, const RunConfig& rc, std::ostream& out) {
  require_format(o.format, {"csv", "json"});
  if (o.fisher_mode != "analytic" && o.fisher_mode != "numeric" && o.fisher_mode != "both") {
    throw ConfigError("--mode must be analytic, numeric or both");
  }
  FisherReport report;
  if (o.fisher_mode == "analytic") {
    report = fisher_analytic(rc.experiment);
  } else {
    RandomStream rng(rc.seed);
    report = fisher_numeric(rc.experiment, o.datasets, rng);
  }
  const bool with_numeric = o.fisher_mode != "analytic";
  if (o.format == "json") {
    json doc = {{"analytic", report.analytic},
                {"crlb", report.crlb},
                {"regime", std::string(to_string(report.regime))},
                {"noise", std::string(to_string(report.noise_kind))}};
    if (with_numeric) {
      doc["numeric"] = *report.numeric;
      doc["numeric_se"] = *report.numeric_se;
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "analytic," << (with_numeric ? "numeric,numeric_se," : "") << "crlb,regime,noise\n";
  out << num(report.analytic) << ',';
  if (with_numeric) out << num(*report.numeric) << ',' << num(*report.numeric_se) << ',';
  out << num(report.crlb) << ',' << to_string(report.regime) << ',' << to_string(report.noise_kind)
      << '\n';
}

json summary_json(const TrialSummary& s) {
  return {{"n_trials", s.n_trials},
          {"mean", json_number(s.mean_estimate)},
          {"var", json_number(s.var_estimate)},
          {"efficiency", json_number(s.efficiency)},
          {"snr", json_number(s.snr_empirical)},
          {"failed", s.failed_trials},
          {"mean_postselected", json_number(s.mean_postselected)},
          {"fisher_analytic", json_number(s.fisher_analytic)}};
}

void cmd_simulate(const Options& o, const RunConfig& rc, std::ostream& out, std::ostream& stdout_,
                  const Log& log) {
  require_format(o.format, {"csv", "json"});
  const TrialSummary summary = run_trials(rc.experiment, rc.trials, rc.seed, o.threads);
  if (summary.failed_trials > 0) {
    log.info(std::to_string(summary.failed_trials) + " trial(s) had no postselected photon");
  }
  if (o.format == "json") {
    json trials = json::array();
    for (const auto& r : summary.records) {
      trials.push_back({{"trial", r.trial},
                        {"n_postselected", r.n_postselected},
                        {"phi_hat", json_number(r.phi_hat)}});
    }
    out << json{{"summary", summary_json(summary)}, {"trials", trials}}.dump(2) << '\n';
    return;
  }
  out << "trial,n_postselected,phi_hat\n";
  for (const auto& r : summary.records) {
    out << r.trial << ',' << r.n_postselected << ',' << num(r.phi_hat) << '\n';
  }
  const std::string doc = summary_json(summary).dump(2) + "\n";
  if (!o.summary_path.empty()) {
    std::ofstream file(o.summary_path);
    if (!file) throw ConfigError("cannot write summary file '" + o.summary_path + "'");
    file << doc;
  } else if (!o.out_path.empty()) {
    stdout_ << doc;
  } else {
    log.info("summary omitted from stdout; use --out or --summary to get it alongside the CSV");
  }
}

void cmd_sweep_p(const Options& o, const RunConfig& rc, std::ostream& out, const Log& log) {
  require_format(o.format, {"csv", "json"});
  std::vector<double> deltas = o.deltas;
  if (deltas.empty()) {
    if (o.steps < 1 || !(o.pmin > 0.0) || !(o.pmax >= o.pmin) || o.pmax > 0.5) {
      throw DomainError("invalid P range: need 0 < pmin <= pmax <= 0.5 and steps >= 1");
    }
    for (std::size_t i = 0; i < o.steps; ++i) {
      const double t = o.steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(o.steps - 1);
      deltas.push_back(std::sqrt(o.pmin + t * (o.pmax - o.pmin)));
    }
  }
  const SweepResult res = sweep_postselection(rc.experiment, deltas, o.numeric, rc.seed);
  for (const auto& w : res.warnings) log.warn(w);
  const bool with_numeric = !res.numeric.empty();
  if (o.format == "json") {
    json doc = {{"x", res.axis},
                {"fisher_weak", res.analytic[0].values},
                {"fisher_nops", res.analytic[1].values}};
    if (with_numeric) {
      doc["fisher_numeric"] = res.numeric;
      doc["se"] = res.numeric_se;
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "x,fisher_weak,fisher_nops" << (with_numeric ? ",fisher_numeric,se" : "") << '\n';
  for (std::size_t i = 0; i < res.axis.size(); ++i) {
    out << num(res.axis[i]) << ',' << num(res.analytic[0].values[i]) << ','
        << num(res.analytic[1].values[i]);
    if (with_numeric) out << ',' << num(res.numeric[i]) << ',' << num(res.numeric_se[i]);
    out << '\n';
  }
}

void cmd_sweep_m(const Options& o, const RunConfig& rc, std::ostream& out, const Log& log) {
  require_format(o.format, {"csv", "json"});
  if (o.steps < 1 || o.mmin < 1 || o.mmax < o.mmin || o.probs.empty()) {
    throw DomainError("invalid M range: need 1 <= mmin <= mmax, steps >= 1 and at least one P");
  }
  std::set<long long> unique;
  const double lo = std::log(static_cast<double>(o.mmin));
  const double hi = std::log(static_cast<double>(o.mmax));
  for (std::size_t i = 0; i < o.steps; ++i) {
    const double t = o.steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(o.steps - 1);
    unique.insert(std::llround(std::exp(lo + t * (hi - lo))));
  }
  const std::vector<long long> ms(unique.begin(), unique.end());
  const SweepResult res = sweep_photons(rc.experiment, ms, o.probs);
  for (const auto& w : res.warnings) log.warn(w);
  if (o.format == "json") {
    json series = json::array();
    for (const auto& s : res.analytic) {
      series.push_back({{"label", s.label},
                        {"values", s.values},
                        {"plateau", s.plateau ? json(*s.plateau) : json(nullptr)}});
    }
    out << json{{"m", res.axis}, {"post_probs", o.probs}, {"series", series}}.dump(2) << '\n';
    return;
  }
  out << "m";
  for (const auto& s : res.analytic) out << ',' << s.label;
  out << '\n';
  for (std::size_t i = 0; i < res.axis.size(); ++i) {
    out << ms[i];
    for (const auto& s : res.analytic) out << ',' << num(s.values[i]);
    out << '\n';
  }
}

void cmd_table1(const Options& o, const RunConfig& rc, std::ostream& out) {
  require_format(o.format, {"csv", "json", "text"});
  const ExperimentConfig& e = rc.experiment;
  const Table1 t = table1(e.alpha_sq, e.m_photons, e.eta_sq, e.delta, e.phi);
  if (o.format == "json") {
    json doc = json::object();
    for (std::size_t r = 0; r < 3; ++r) {
      json row = json::object();
      for (std::size_t c = 0; c < 3; ++c) {
        row[std::string(to_string(Table1::kColumns[c]))] = json_number(t.entries[r][c]);
      }
      doc[std::string(to_string(Table1::kRows[r]))] = row;
    }
    out << doc.dump(2) << '\n';
    return;
  }
  if (o.format == "csv") {
    out << "noise,none,weak,strong\n";
    for (std::size_t r = 0; r < 3; ++r) {
      out << to_string(Table1::kRows[r]);
      for (double v : t.entries[r]) out << ',' << num(v);
      out << '\n';
    }
    return;
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %24s %24s %24s\n", "noise", "none", "weak", "strong");
  out << line;
  for (std::size_t r = 0; r < 3; ++r) {
    std::snprintf(line, sizeof line, "%-8s %24.17g %24.17g %24.17g\n",
                  std::string(to_string(Table1::kRows[r])).c_str(), t.entries[r][0],
                  t.entries[r][1], t.entries[r][2]);
    out << line;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Log log(err);
  Options o;
  Flags f;

  CLI::App app{"Weak-value-amplified estimation of the optomechanical coupling phi = g0/omega_m"};
  app.name("wva");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--config", o.config_path, "JSON run configuration (flags override its keys)");
  app.add_option("--format", o.format, "Output format: csv | json (table1 also: text)");
  f.seed = app.add_option("--seed", o.seed, "Master random seed (default 0)");
  app.add_option("--threads", o.threads, "Worker threads for simulate (0 = auto)");
  app.add_option("--out", o.out_path, "Write data to this file instead of stdout");
  f.phi = app.add_option("--phi", o.phi, "Coupling ratio phi");
  f.delta = app.add_option("--delta", o.delta, "PDBS imbalance delta");
  f.alpha_sq = app.add_option("--alpha-sq", o.alpha_sq, "Probe mean photon number |alpha|^2");
  f.m_photons = app.add_option("--m-photons", o.m_photons, "Injected single photons M");
  f.gamma_rate = app.add_option("--gamma-rate", o.gamma_rate, "Injection rate Gamma (1/s)");
  f.tau_corr = app.add_option("--tau-corr", o.tau_corr, "Noise correlation time tau (s)");
  f.eta_sq = app.add_option("--eta-sq", o.eta_sq, "Technical noise strength eta~^2");
  f.noise = app.add_option("--noise", o.noise, "white | colored | quantum | exponential");
  f.measurement = app.add_option("--measurement", o.measurement, "none | weak | strong");
  f.indexing = app.add_option("--indexing", o.indexing, "Noise lag counting: postselected | slot");
  f.trials = app.add_option("--trials", o.trials, "Monte-Carlo trials (default 1000)");

  auto* pmf = app.add_subcommand("pmf", "Skellam PMF of the photocount difference D.\n"
                                        "CSV columns: k,pmf");
  pmf->add_option("--delta-theta", o.delta_theta, "Signal phase (rad), |value| < pi/2");
  pmf->add_option("--kmin", o.kmin, "First k (default mean - 20 sigma)");
  pmf->add_option("--kmax", o.kmax, "Last k (default mean + 20 sigma)");

  auto* fisher = app.add_subcommand("fisher", "Fisher information report.\n"
                                              "Fields: analytic,[numeric,numeric_se,]crlb,regime,noise");
  fisher->add_option("--mode", o.fisher_mode, "analytic | numeric | both");
  fisher->add_option("--datasets", o.datasets, "Monte-Carlo datasets for numeric mode");

  auto* simulate = app.add_subcommand(
      "simulate", "Repeated experiments with the maximum-likelihood estimator.\n"
                  "CSV columns: trial,n_postselected,phi_hat. Summary JSON fields:\n"
                  "n_trials,mean,var,efficiency,snr,failed,mean_postselected,fisher_analytic");
  simulate->add_option("--summary", o.summary_path,
                       "Write the summary JSON here (default: stdout when --out is set)");

  auto* sweep_p = app.add_subcommand(
      "sweep-p", "Fisher information against postselection probability P = delta^2.\n"
                 "CSV columns: x (= P),fisher_weak,fisher_nops[,fisher_numeric,se]");
  sweep_p->add_option("--pmin", o.pmin, "Smallest P");
  sweep_p->add_option("--pmax", o.pmax, "Largest P");
  sweep_p->add_option("--steps", o.steps, "Number of P values (linear grid)");
  sweep_p->add_option("--deltas", o.deltas, "Explicit delta values (overrides the P grid)")
      ->delimiter(',');
  sweep_p->add_option("--numeric", o.numeric, "Monte-Carlo datasets per point (0 = analytic only)");

  auto* sweep_m = app.add_subcommand(
      "sweep-m", "Fisher information against injected photons M.\n"
                 "CSV columns: m,fisher_p1,...,fisher_pK,fisher_nops where fisher_pj is the\n"
                 "weak-measurement curve for the j-th value of --probs");
  sweep_m->add_option("--mmin", o.mmin, "Smallest M");
  sweep_m->add_option("--mmax", o.mmax, "Largest M");
  sweep_m->add_option("--steps", o.steps, "Number of M values (log grid, duplicates removed)");
  sweep_m->add_option("--probs", o.probs, "Postselection probabilities (default 0.01,0.03)")
      ->delimiter(',');

  auto* table = app.add_subcommand("table1", "Fisher information for each noise model and "
                                             "measurement type.\nCSV columns: noise,none,weak,strong");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const RunConfig rc = resolve(o, f);
    for (const auto& w : config_warnings(rc.experiment)) log.warn(w);

    std::ostringstream buffer;
    if (pmf->parsed()) cmd_pmf(o, rc, buffer);
    else if (fisher->parsed()) cmd_fisher(o, rc, buffer);
    else if (simulate->parsed()) cmd_simulate(o, rc, buffer, out, log);
    else if (sweep_p->parsed()) cmd_sweep_p(o, rc, buffer, log);
    else if (sweep_m->parsed()) cmd_sweep_m(o, rc, buffer, log);
    else if (table->parsed()) cmd_table1(o, rc, buffer);

    if (o.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(o.out_path);
      if (!file) throw ConfigError("cannot write output file '" + o.out_path + "'");
      file << buffer.str();
    }
  } catch (const DegenerateError& e) {
    log.error(e.what());
    return kExitDegenerate;
  } catch (const std::invalid_argument& e) {
    log.error(e.what());
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    log.error(e.what());
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    log.error(e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    log.error(e.what());
    return 1;
  }
  return kExitOk;
}

}  // namespace wva::cli
