#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "posec/error.hpp"
#include "posec/greedy.hpp"
#include "posec/poset_io.hpp"
#include "posec/rational.hpp"
#include "posec/simulator.hpp"
#include "posec/statistics.hpp"

namespace posec::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kToolName = "posec";

// Shortest text that parses back to the same double.
std::string fmt(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, static_cast<std::size_t>(res.ptr - buf)};
}

double parse_probability_like(const std::string& text, const char* what) {
  if (text == "1/e") return kDefaultThreshold;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw InvalidParameter(std::string("bad ") + what + " '" + text + "'");
  }
  return value;
}

double parse_tau(const std::string& text) {
  const double tau = parse_probability_like(text, "threshold");
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidParameter("threshold " + text + " outside [0, 1)");
  return tau;
}

struct Common {
  std::string source;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  double confidence = kDefaultConfidence;
  std::string format = "json";
};

void validate(const Common& c) {
  if (c.trials == 0) throw InvalidParameter("--trials must be at least 1");
  if (!(c.confidence > 0.0 && c.confidence < 1.0)) throw InvalidParameter("--confidence must lie in (0, 1)");
}

Json header(const std::string& command) {
  Json doc;
  doc["tool"] = kToolName;
  doc["version"] = POSEC_VERSION;
  doc["command"] = command;
  return doc;
}

Json estimate_json(const Estimate& e) {
  return Json{{"tau", e.tau},         {"successes", e.successes}, {"trials", e.trials},
              {"p_hat", e.p_hat},     {"ci_low", e.ci_low},       {"ci_high", e.ci_high},
              {"confidence", e.confidence}, {"seed", e.master_seed}};
}

void write_estimates_csv(std::ostream& out, const std::vector<Estimate>& estimates) {
  out << "tau,p_hat,ci_low,ci_high,trials,seed\n";
  for (const Estimate& e : estimates) {
    out << fmt(e.tau) << ',' << fmt(e.p_hat) << ',' << fmt(e.ci_low) << ',' << fmt(e.ci_high) << ',' << e.trials
        << ',' << e.master_seed << '\n';
  }
}

Json report_json(const std::string& lemma, const LemmaReport& r) {
  return Json{{"lemma", lemma},         {"statistic", r.statistic}, {"label", r.label},
              {"observed", r.observed}, {"reference", r.reference}, {"p_value", r.p_value},
              {"passed", r.passed},     {"sample_size", r.sample_size}};
}

std::string common_flags(const Common& c, bool with_format) {
  std::string s = " --trials " + std::to_string(c.trials) + " --seed " + std::to_string(c.seed) +
                  " --confidence " + fmt(c.confidence);
  if (with_format) s += " --format " + c.format;
  return s;
}

int cmd_simulate(const Common& c, const std::string& tau_text, std::ostream& out) {
  validate(c);
  const double tau = parse_tau(tau_text);
  const Poset p = load_poset_source(c.source);
  const Estimate e = estimate_success(p, tau, c.trials, c.seed, {c.workers, c.confidence});
  if (c.format == "csv") {
    write_estimates_csv(out, {e});
    return kOk;
  }
  Json doc = header(std::string(kToolName) + " simulate " + c.source + " --tau " + fmt(tau) + common_flags(c, true));
  doc["parameters"] = Json{{"source", c.source}, {"n", p.size()}, {"tau", tau}, {"trials", c.trials},
                           {"seed", c.seed},     {"confidence", c.confidence}};
  doc["results"] = estimate_json(e);
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& tau_texts, std::ostream& out) {
  validate(c);
  std::vector<double> taus;
  for (const auto& t : tau_texts) taus.push_back(parse_tau(t));
  if (taus.empty()) throw InvalidParameter("--taus needs at least one threshold");
  const Poset p = load_poset_source(c.source);
  const auto estimates = threshold_sweep(p, taus, c.trials, c.seed, {c.workers, c.confidence});
  if (c.format == "csv") {
    write_estimates_csv(out, estimates);
    return kOk;
  }
  std::string tau_list;
  for (double t : taus) tau_list += (tau_list.empty() ? "" : ",") + fmt(t);
  Json doc = header(std::string(kToolName) + " sweep " + c.source + " --taus " + tau_list + common_flags(c, true));
  doc["parameters"] = Json{{"source", c.source}, {"n", p.size()}, {"taus", taus}, {"trials", c.trials},
                           {"seed", c.seed},     {"confidence", c.confidence}};
  Json rows = Json::array();
  for (const Estimate& e : estimates) rows.push_back(estimate_json(e));
  doc["results"] = rows;
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_exact_mu(const std::string& source, const std::optional<std::string>& t_text, std::size_t cap,
                 std::ostream& out) {
  std::optional<Rational> t;
  if (t_text) {
    try {
      t = parse_rational(*t_text);
    } catch (const ParseError& e) {
      throw InvalidParameter(e.what());
    }
    if (*t < 0 || *t > 1) throw InvalidParameter("--t must lie in [0, 1]");
  }
  const Poset p = load_poset_source(source);
  const MuTable table = mu_exact(p, cap);

  std::string command = std::string(kToolName) + " exact-mu " + source + " --cap " + std::to_string(cap);
  if (t) command += " --t " + to_string(*t);
  Json doc = header(command);
  doc["parameters"] = Json{{"source", source}, {"n", p.size()}, {"cap", cap}};
  if (t) doc["parameters"]["t"] = to_string(*t);

  Json results;
  results["denominator"] = std::to_string(table.denominator());
  results["maximal"] = p.maximal_elements();
  Json mu = Json::array();
  for (ElementId x = 0; x < p.size(); ++x) mu.push_back(to_string(table.at(x)));
  results["mu"] = mu;
  if (t) {
    MuOracle oracle(p);
    Json mu_t = Json::array();
    for (ElementId x : p.maximal_elements()) {
      mu_t.push_back(Json{{"element", x}, {"mu_t", to_string(oracle.mu_t(x, *t))}});
    }
    results["mu_t"] = mu_t;
  }
  doc["results"] = results;
  out << doc.dump(2) << '\n';
  return kOk;
}

struct VerifyOptions {
  std::string lemma = "all";
  std::vector<double> last_tag_times{0.5, 1.0};
  std::vector<double> pinned_times{0.25, 0.5, 1.0};
  unsigned grid_steps = 16;
  double alpha = kDefaultAlpha;
  bool deep = false;
};

int cmd_verify(const Common& c, const VerifyOptions& v, std::ostream& out) {
  validate(c);
  if (!(v.alpha > 0.0 && v.alpha < 1.0)) throw InvalidParameter("--alpha must lie in (0, 1)");
  const bool all = v.lemma == "all";
  const Poset p = load_poset_source(c.source);
  if ((all || v.lemma == "4" || v.lemma == "5") && p.size() > kMuTEnumerationCap) {
    throw TooLargeError("pinned-arrival and monotonicity checks need an exact oracle; n = " + std::to_string(p.size()) +
                        " exceeds the cap of " + std::to_string(kMuTEnumerationCap));
  }
  if (v.deep && p.size() > kJointPatternCap) {
    throw TooLargeError("--deep joint check needs n <= " + std::to_string(kJointPatternCap));
  }
  for (double t : v.last_tag_times) {
    if (!(t > 0.0 && t <= 1.0)) throw InvalidParameter("--t values must lie in (0, 1]");
  }
  const SimulationOptions sim{c.workers, c.confidence};

  Json checks = Json::array();
  Json summaries = Json::array();
  bool passed = true;
  auto add = [&](const std::string& lemma, const LemmaReport& r) {
    checks.push_back(report_json(lemma, r));
    passed = passed && r.passed;
  };

  if (all || v.lemma == "2") {
    const TagStatistics stats = collect_tag_statistics(p, c.trials, c.seed, sim);
    for (const auto& r : tag_marginal_reports(stats)) add("2", r);
    for (const auto& [name, rep] : {std::pair{"pairwise_independence", pairwise_independence(stats, v.alpha)},
                                    std::pair{"triple_independence", triple_independence(stats, v.alpha)}}) {
      for (const auto& r : rep.tests) checks.push_back(report_json("2", r));
      summaries.push_back(Json{{"lemma", "2"},
                               {"check", name},
                               {"tested", rep.tests.size()},
                               {"flagged", rep.flagged},
                               {"alpha", rep.alpha},
                               {"passed", rep.passed()}});
      passed = passed && rep.passed();
    }
    if (v.deep) add("2", joint_independence(stats, v.alpha));
  }
  if (all || v.lemma == "3") {
    for (double t : v.last_tag_times) add("3", verify_last_tag_uniform(p, t, c.trials, c.seed, v.alpha, sim));
  }
  if (all || v.lemma == "4") {
    for (ElementId x : p.maximal_elements()) {
      for (double t : v.pinned_times) add("4", verify_tagged_given_arrival(p, x, t, c.trials, c.seed, sim));
    }
  }
  if (all || v.lemma == "5") {
    const auto grid = uniform_grid(v.grid_steps);
    MuOracle oracle(p);
    std::size_t violations = 0;
    for (ElementId x : p.maximal_elements()) {
      const Rational mu = oracle.mu(x);
      for (const Rational& t : grid) {
        const Rational mu_t = oracle.mu_t(x, t);
        const bool ok = mu_t >= mu;
        if (!ok) ++violations;
        checks.push_back(Json{{"lemma", "5"},
                              {"statistic", "mu_t_monotonicity"},
                              {"label", "x=" + std::to_string(x) + ",t=" + to_string(t)},
                              {"mu_t", to_string(mu_t)},
                              {"mu", to_string(mu)},
                              {"passed", ok}});
      }
    }
    summaries.push_back(Json{{"lemma", "5"}, {"check", "exact_monotonicity"}, {"violations", violations},
                             {"passed", violations == 0}});
    passed = passed && violations == 0;
  }

  std::string command = std::string(kToolName) + " verify " + c.source + " --lemma " + v.lemma +
                        common_flags(c, false) + " --alpha " + fmt(v.alpha) + " --grid-steps " +
                        std::to_string(v.grid_steps);
  std::string ts;
  for (double t : v.last_tag_times) ts += (ts.empty() ? "" : ",") + fmt(t);
  command += " --t " + ts;
  ts.clear();
  for (double t : v.pinned_times) ts += (ts.empty() ? "" : ",") + fmt(t);
  command += " --pin " + ts;
  if (v.deep) command += " --deep";

  Json doc = header(command);
  doc["parameters"] = Json{{"source", c.source}, {"n", p.size()},  {"lemma", v.lemma},
                           {"trials", c.trials}, {"seed", c.seed}, {"alpha", v.alpha},
                           {"last_tag_times", v.last_tag_times},   {"pinned_times", v.pinned_times},
                           {"grid_steps", v.grid_steps},           {"deep", v.deep}};
  doc["results"] = Json{{"checks", checks}, {"summaries", summaries}, {"passed", passed}};
  out << doc.dump(2) << '\n';
  return passed ? kOk : kVerificationFailed;
}

int cmd_write(const std::string& source, std::ostream& out) {
  write_poset(out, load_poset_source(source));
  return kOk;
}

void add_common(CLI::App* sub, Common& c, bool with_trials, bool with_format) {
  sub->add_option("source", c.source, "Poset file or generator spec (chain:N, antichain:N, wedge, boolean:K, "
                                      "forest:L1,L2,..., random:N:P:SEED)")
      ->required();
  if (with_trials) {
    sub->add_option("--trials", c.trials, "Number of Monte Carlo trials");
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--workers", c.workers, "Worker threads (0: $POSEC_WORKERS or all cores)");
    sub->add_option("--confidence", c.confidence, "Confidence level of Wilson intervals");
  }
  if (with_format) sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partially ordered secretary problem: simulation and verification toolkit", std::string(kToolName)};
  app.set_version_flag("--version", POSEC_VERSION);
  app.require_subcommand(1);

  Common common;
  std::string tau_text = "1/e";
  std::vector<std::string> tau_texts{"0.1", "0.2", "0.3", "1/e", "0.4", "0.5", "0.6", "0.7", "0.8"};
  std::optional<std::string> t_text;
  std::size_t cap = kMuEnumerationCap;
  VerifyOptions verify;

  auto* simulate = app.add_subcommand("simulate", "Estimate the success probability of the greedy threshold strategy");
  add_common(simulate, common, true, true);
  simulate->add_option("--tau", tau_text, "Threshold in [0, 1) (number or 1/e)");

  auto* sweep = app.add_subcommand("sweep", "Estimate success probabilities over several thresholds");
  add_common(sweep, common, true, true);
  sweep->add_option("--taus", tau_texts, "Comma separated thresholds")->delimiter(',');

  auto* exact = app.add_subcommand("exact-mu", "Exact greedy-maximum distribution (and mu_t with --t)");
  add_common(exact, common, false, false);
  exact->add_option("--t", t_text, "Rational in [0, 1], e.g. 1/2");
  exact->add_option("--cap", cap, "Enumeration cap on the number of elements");

  auto* verify_cmd = app.add_subcommand("verify", "Statistical and exact checks of the tag process");
  add_common(verify_cmd, common, true, false);
  verify_cmd->add_option("--lemma", verify.lemma, "Which check to run")
      ->check(CLI::IsMember({"2", "3", "4", "5", "all"}));
  verify_cmd->add_option("--t", verify.last_tag_times, "Cut-off times for the last-tag uniformity test")
      ->delimiter(',');
  verify_cmd->add_option("--pin", verify.pinned_times, "Pinned arrival times for the conditional tag check")
      ->delimiter(',');
  verify_cmd->add_option("--grid-steps", verify.grid_steps, "Exact monotonicity grid {k/steps}");
  verify_cmd->add_option("--alpha", verify.alpha, "Significance level of individual tests");
  verify_cmd->add_flag("--deep", verify.deep, "Also test the full joint tag pattern (n <= 12)");

  auto* write = app.add_subcommand("write", "Print a poset in file format (cover relations)");
  add_common(write, common, false, false);

  std::vector<const char*> argv{kToolName.data()};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParseError;
  }

  try {
    if (*simulate) return cmd_simulate(common, tau_text, out);
    if (*sweep) return cmd_sweep(common, tau_texts, out);
    if (*exact) return cmd_exact_mu(common.source, t_text, cap, out);
    if (*verify_cmd) return cmd_verify(common, verify, out);
    if (*write) return cmd_write(common.source, out);
  } catch (const TooLargeError& e) {
    err << "error: " << e.what() << '\n';
    return kOverCap;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const CycleError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameter;
  }
  return kInvalidParameter;
}

}  // namespace posec::cli
