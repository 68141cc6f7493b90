#include "posec/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "posec/error.hpp"
#include "posec/greedy.hpp"
#include "posec/parallel.hpp"
#include "posec/rational.hpp"
#include "posec/simulator.hpp"

namespace posec {

namespace {

void require_trials(std::uint64_t trials) {
  if (trials == 0) throw ZeroTrialsError("at least one trial is required");
}

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidParameter("threshold must lie in [0, 1)");
}

std::string position_label(std::size_t k) { return "k=" + std::to_string(k + 1); }

std::string pair_label(std::size_t j, std::size_t k) {
  return "(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
}

double binomial_se(double p, std::uint64_t trials) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

// |observed - reference| within kToleranceSigmas standard errors. A zero
// standard error (reference 0 or 1) demands exact agreement.
bool within_band(double observed, double reference, std::uint64_t trials) {
  const double se = binomial_se(reference, trials);
  if (se == 0.0) return observed == reference;
  return std::abs(observed - reference) <= kToleranceSigmas * se;
}

LemmaReport proportion_report(std::string statistic, std::string label, std::uint64_t hits,
                              std::uint64_t trials, double reference) {
  LemmaReport r;
  r.statistic = std::move(statistic);
  r.label = std::move(label);
  r.observed = static_cast<double>(hits) / static_cast<double>(trials);
  r.reference = reference;
  r.p_value = binomial_two_sided_pvalue(hits, trials, reference);
  r.passed = within_band(r.observed, reference, trials);
  r.sample_size = trials;
  return r;
}

double pearson(std::span<const double> observed, std::span<const double> expected) {
  double chi2 = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] > 0.0) {
      const double d = observed[i] - expected[i];
      chi2 += d * d / expected[i];
    }
  }
  return chi2;
}

}  // namespace

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  require_trials(trials);
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidParameter("confidence must lie in (0, 1)");
  if (successes > trials) throw InvalidParameter("more successes than trials");
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
}

namespace {

Estimate make_estimate(std::uint64_t successes, std::uint64_t trials, double confidence, std::uint64_t seed,
                       double tau) {
  Estimate e;
  e.successes = successes;
  e.trials = trials;
  e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  const Interval ci = wilson_interval(successes, trials, confidence);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.confidence = confidence;
  e.master_seed = seed;
  e.tau = tau;
  return e;
}

}  // namespace

Estimate estimate_success(const Poset& p, double tau, std::uint64_t trials, std::uint64_t master_seed,
                          const SimulationOptions& options) {
  require_trials(trials);
  check_tau(tau);
  const auto blocks = run_blocks<std::uint64_t>(trials, master_seed, options.workers, [&] {
    return [&p, tau, runner = StrategyRunner(p), selector = GreedyThresholdSelector(tau)](
               Engine& rng, std::uint64_t begin, std::uint64_t end, std::uint64_t& hits) mutable {
      for (std::uint64_t i = begin; i < end; ++i) {
        const Trial trial = sample_trial(p.size(), rng);
        if (runner.run(trial, selector, false).success) ++hits;
      }
    };
  });
  const std::uint64_t successes = std::accumulate(blocks.begin(), blocks.end(), std::uint64_t{0});
  return make_estimate(successes, trials, options.confidence, master_seed, tau);
}

std::vector<Estimate> threshold_sweep(const Poset& p, std::span<const double> taus, std::uint64_t trials,
                                      std::uint64_t master_seed, const SimulationOptions& options) {
  require_trials(trials);
  for (double tau : taus) check_tau(tau);
  std::vector<double> thresholds(taus.begin(), taus.end());
  const auto blocks = run_blocks<std::vector<std::uint64_t>>(
      trials, master_seed, options.workers,
      [&] {
        return [&p, &thresholds, runner = StrategyRunner(p)](Engine& rng, std::uint64_t begin, std::uint64_t end,
                                                             std::vector<std::uint64_t>& hits) mutable {
          for (std::uint64_t i = begin; i < end; ++i) {
            const Trial trial = sample_trial(p.size(), rng);
            const EventLog log = runner.tags(trial);
            for (std::size_t j = 0; j < thresholds.size(); ++j) {
              auto accepted = std::find_if(log.begin(), log.end(), [&](const TagEvent& ev) {
                return ev.tagged && ev.time > thresholds[j];
              });
              if (accepted != log.end() && p.is_maximal(accepted->element)) ++hits[j];
            }
          }
        };
      },
      std::vector<std::uint64_t>(thresholds.size(), 0));

  std::vector<Estimate> out;
  out.reserve(thresholds.size());
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    std::uint64_t successes = 0;
    for (const auto& b : blocks) successes += b[j];
    out.push_back(make_estimate(successes, trials, options.confidence, master_seed, thresholds[j]));
  }
  return out;
}

void TagStatistics::merge(const TagStatistics& other) {
  trials += other.trials;
  auto add = [](std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
    for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
  };
  add(tagged, other.tagged);
  add(pairs, other.pairs);
  add(triples, other.triples);
  add(patterns, other.patterns);
}

TagStatistics collect_tag_statistics(const Poset& p, std::uint64_t trials, std::uint64_t seed,
                                     const SimulationOptions& options) {
  require_trials(trials);
  const std::size_t n = p.size();
  TagStatistics empty;
  empty.n = n;
  empty.tagged.assign(n, 0);
  empty.pairs.assign(n * n, 0);
  empty.triples.assign(n >= 4 ? 8 * (n - 2) : 0, 0);
  if (n <= kJointPatternCap) empty.patterns.assign(std::size_t{1} << (n - 1), 0);

  auto blocks = run_blocks<TagStatistics>(
      trials, seed, options.workers,
      [&] {
        return [&p, n, runner = StrategyRunner(p), flags = std::vector<bool>(n)](
                   Engine& rng, std::uint64_t begin, std::uint64_t end, TagStatistics& acc) mutable {
          for (std::uint64_t i = begin; i < end; ++i) {
            const Trial trial = sample_trial(n, rng);
            const EventLog log = runner.tags(trial);
            ++acc.trials;
            std::uint64_t pattern = 0;
            for (std::size_t k = 0; k < n; ++k) {
              flags[k] = log[k].tagged;
              if (!flags[k]) continue;
              ++acc.tagged[k];
              if (k >= 1) pattern |= std::uint64_t{1} << (k - 1);
              for (std::size_t j = 0; j < k; ++j) {
                if (flags[j]) ++acc.pairs[j * n + k];
              }
            }
            if (!acc.triples.empty()) {
              for (std::size_t j = 1; j + 2 < n; ++j) {
                const unsigned cell = (flags[j] ? 1U : 0U) | (flags[j + 1] ? 2U : 0U) | (flags[j + 2] ? 4U : 0U);
                ++acc.triples[8 * j + cell];
              }
            }
            if (!acc.patterns.empty()) ++acc.patterns[pattern];
          }
        };
      },
      empty);

  TagStatistics total = empty;
  for (const auto& b : blocks) total.merge(b);
  return total;
}

std::vector<LemmaReport> tag_marginal_reports(const TagStatistics& stats) {
  std::vector<LemmaReport> out;
  for (std::size_t k = 0; k < stats.n; ++k) {
    out.push_back(proportion_report("tag_marginal", position_label(k), stats.tagged[k], stats.trials,
                                    1.0 / static_cast<double>(k + 1)));
  }
  return out;
}

std::vector<LemmaReport> verify_tag_marginals(const Poset& p, std::uint64_t trials, std::uint64_t seed,
                                              const SimulationOptions& options) {
  return tag_marginal_reports(collect_tag_statistics(p, trials, seed, options));
}

std::vector<LemmaReport> compare_marginals(const TagStatistics& a, const TagStatistics& b) {
  if (a.n != b.n) throw DimensionError("marginal vectors of different length");
  const boost::math::normal standard;
  std::vector<LemmaReport> out;
  for (std::size_t k = 0; k < a.n; ++k) {
    const double reference = 1.0 / static_cast<double>(k + 1);
    const std::uint64_t trials = std::min(a.trials, b.trials);
    LemmaReport r;
    r.statistic = "marginal_agreement";
    r.label = position_label(k);
    r.observed = a.frequency(k) - b.frequency(k);
    r.reference = 0.0;
    r.sample_size = trials;
    const double bound = kToleranceSigmas * binomial_se(reference, trials);
    r.passed = std::abs(r.observed) <= bound;
    const double pooled = static_cast<double>(a.tagged[k] + b.tagged[k]) / static_cast<double>(a.trials + b.trials);
    const double se = std::sqrt(pooled * (1.0 - pooled) *
                                (1.0 / static_cast<double>(a.trials) + 1.0 / static_cast<double>(b.trials)));
    r.p_value = se > 0.0 ? 2.0 * boost::math::cdf(boost::math::complement(standard, std::abs(r.observed) / se))
                         : (r.observed == 0.0 ? 1.0 : 0.0);
    out.push_back(std::move(r));
  }
  return out;
}

IndependenceReport pairwise_independence(const TagStatistics& stats, double alpha) {
  IndependenceReport report;
  report.alpha = alpha;
  const double n_trials = static_cast<double>(stats.trials);
  for (std::size_t j = 0; j < stats.n; ++j) {
    for (std::size_t k = j + 1; k < stats.n; ++k) {
      LemmaReport r;
      r.statistic = "pair_independence_chi2";
      r.label = pair_label(j, k);
      r.sample_size = stats.trials;
      const double both = static_cast<double>(stats.pairs[j * stats.n + k]);
      const double tj = static_cast<double>(stats.tagged[j]);
      const double tk = static_cast<double>(stats.tagged[k]);
      r.reference = tj * tk / (n_trials * n_trials);
      r.observed = both / n_trials;
      const bool degenerate = tj == 0.0 || tj == n_trials || tk == 0.0 || tk == n_trials;
      if (degenerate) {
        // A constant indicator is independent of everything.
        r.p_value = 1.0;
      } else {
        const double observed[4] = {both, tj - both, tk - both, n_trials - tj - tk + both};
        const double expected[4] = {tj * tk / n_trials, tj * (n_trials - tk) / n_trials,
                                    (n_trials - tj) * tk / n_trials, (n_trials - tj) * (n_trials - tk) / n_trials};
        r.p_value = chi_square_survival(pearson(observed, expected), 1.0);
      }
      r.passed = r.p_value >= alpha;
      if (!r.passed) ++report.flagged;
      report.tests.push_back(std::move(r));
    }
  }
  return report;
}

IndependenceReport triple_independence(const TagStatistics& stats, double alpha) {
  IndependenceReport report;
  report.alpha = alpha;
  const double n_trials = static_cast<double>(stats.trials);
  for (std::size_t j = 1; j + 2 < stats.n && !stats.triples.empty(); ++j) {
    std::span<const std::uint64_t> cells(stats.triples.data() + 8 * j, 8);
    double marginal[3] = {0.0, 0.0, 0.0};
    for (unsigned c = 0; c < 8; ++c) {
      for (unsigned bit = 0; bit < 3; ++bit) {
        if (c & (1U << bit)) marginal[bit] += static_cast<double>(cells[c]);
      }
    }
    for (double& m : marginal) m /= n_trials;
    std::vector<double> observed(8);
    std::vector<double> expected(8);
    for (unsigned c = 0; c < 8; ++c) {
      observed[c] = static_cast<double>(cells[c]);
      double prob = 1.0;
      for (unsigned bit = 0; bit < 3; ++bit) prob *= (c & (1U << bit)) ? marginal[bit] : 1.0 - marginal[bit];
      expected[c] = prob * n_trials;
    }
    LemmaReport r;
    r.statistic = "triple_independence_chi2";
    r.label = "(" + std::to_string(j + 1) + "," + std::to_string(j + 2) + "," + std::to_string(j + 3) + ")";
    r.observed = observed[7] / n_trials;
    r.reference = expected[7] / n_trials;
    r.sample_size = stats.trials;
    // 8 cells, minus one for the total, minus three estimated marginals.
    r.p_value = chi_square_survival(pearson(observed, expected), 4.0);
    r.passed = r.p_value >= alpha;
    if (!r.passed) ++report.flagged;
    report.tests.push_back(std::move(r));
  }
  return report;
}

LemmaReport joint_independence(const TagStatistics& stats, double alpha) {
  if (stats.patterns.empty()) {
    throw TooLargeError("joint tag patterns are only collected for n <= " + std::to_string(kJointPatternCap));
  }
  const double n_trials = static_cast<double>(stats.trials);
  std::vector<double> observed;
  std::vector<double> expected;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  for (std::size_t pattern = 0; pattern < stats.patterns.size(); ++pattern) {
    double prob = 1.0;
    for (std::size_t k = 1; k < stats.n; ++k) {
      const double q = 1.0 / static_cast<double>(k + 1);
      prob *= (pattern >> (k - 1)) & 1U ? q : 1.0 - q;
    }
    const double e = prob * n_trials;
    const auto o = static_cast<double>(stats.patterns[pattern]);
    if (e < 5.0) {
      pooled_obs += o;
      pooled_exp += e;
    } else {
      observed.push_back(o);
      expected.push_back(e);
    }
  }
  if (pooled_exp > 0.0) {
    observed.push_back(pooled_obs);
    expected.push_back(pooled_exp);
  }
  LemmaReport r;
  r.statistic = "joint_pattern_chi2";
  r.label = "cells=" + std::to_string(observed.size());
  r.observed = pearson(observed, expected);
  r.reference = static_cast<double>(observed.size()) - 1.0;
  r.sample_size = stats.trials;
  r.p_value = observed.size() > 1 ? chi_square_survival(r.observed, r.reference) : 1.0;
  r.passed = r.p_value >= alpha;
  return r;
}

IndependenceReport verify_tag_independence(const Poset& p, std::uint64_t trials, std::uint64_t seed, double alpha,
                                           const SimulationOptions& options) {
  return pairwise_independence(collect_tag_statistics(p, trials, seed, options), alpha);
}

LemmaReport verify_last_tag_uniform(const Poset& p, double t, std::uint64_t trials, std::uint64_t seed,
                                    double alpha, const SimulationOptions& options) {
  require_trials(trials);
  if (!(t > 0.0 && t <= 1.0)) throw InvalidParameter("t must lie in (0, 1]");
  const auto blocks = run_blocks<std::vector<double>>(trials, seed, options.workers, [&] {
    return [&p, t, runner = StrategyRunner(p)](Engine& rng, std::uint64_t begin, std::uint64_t end,
                                               std::vector<double>& samples) mutable {
      for (std::uint64_t i = begin; i < end; ++i) {
        const Trial trial = sample_trial(p.size(), rng);
        const EventLog log = runner.tags(trial);
        double last = -1.0;
        for (const TagEvent& ev : log) {
          if (ev.time >= t) break;
          if (ev.tagged) last = ev.time;
        }
        if (last >= 0.0) samples.push_back(last / t);
      }
    };
  });
  std::vector<double> samples;
  for (const auto& b : blocks) samples.insert(samples.end(), b.begin(), b.end());

  LemmaReport r;
  r.statistic = "ks_last_tag";
  r.label = "t=" + std::to_string(t);
  r.sample_size = samples.size();
  if (samples.empty()) {
    r.p_value = 1.0;
    r.passed = true;
    return r;
  }
  const std::size_t count = samples.size();
  r.observed = ks_statistic_uniform(std::move(samples));
  r.reference = 0.0;
  r.p_value = ks_pvalue(r.observed, count);
  r.passed = r.p_value > alpha;
  return r;
}

LemmaReport verify_tagged_given_arrival(const Poset& p, ElementId x, double t, std::uint64_t trials,
                                        std::uint64_t seed, const SimulationOptions& options) {
  require_trials(trials);
  if (!p.is_maximal(x)) throw NotMaximalError("element " + std::to_string(x) + " is not maximal");
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidParameter("t must lie in [0, 1]");
  const double reference = to_double(mu_t_exact(p, x, rational_from_double(t)));

  const auto blocks = run_blocks<std::uint64_t>(trials, seed, options.workers, [&] {
    return [&p, x, t, runner = StrategyRunner(p)](Engine& rng, std::uint64_t begin, std::uint64_t end,
                                                  std::uint64_t& hits) mutable {
      for (std::uint64_t i = begin; i < end; ++i) {
        Trial trial = sample_trial(p.size(), rng);
        // Arrival times are independent, so pinning x realises the conditioning.
        trial.arrival_time[x] = t;
        for (const TagEvent& ev : runner.tags(trial)) {
          if (ev.element == x) {
            if (ev.tagged) ++hits;
            break;
          }
        }
      }
    };
  });
  const std::uint64_t hits = std::accumulate(blocks.begin(), blocks.end(), std::uint64_t{0});
  return proportion_report("tagged_given_arrival", "x=" + std::to_string(x) + ",t=" + std::to_string(t), hits,
                           trials, reference);
}

std::vector<LemmaReport> verify_mu_sampling(const Poset& p, std::uint64_t samples, std::uint64_t seed,
                                            const SimulationOptions& options) {
  require_trials(samples);
  const MuTable mu = mu_exact(p);
  const std::size_t n = p.size();
  const auto blocks = run_blocks<std::vector<std::uint64_t>>(
      samples, seed, options.workers,
      [&] {
        return [&p, n, weights = std::vector<double>(n), order = std::vector<ElementId>(n)](
                   Engine& rng, std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& counts) mutable {
          for (std::uint64_t i = begin; i < end; ++i) {
            for (double& w : weights) w = uniform01(rng);
            std::iota(order.begin(), order.end(), ElementId{0});
            std::sort(order.begin(), order.end(), [&](ElementId a, ElementId b) {
              return weights[a] < weights[b] || (weights[a] == weights[b] && a < b);
            });
            ++counts[greedy_maximum_of_order(p, order)];
          }
        };
      },
      std::vector<std::uint64_t>(n, 0));

  std::vector<LemmaReport> out;
  for (ElementId x = 0; x < n; ++x) {
    std::uint64_t hits = 0;
    for (const auto& b : blocks) hits += b[x];
    out.push_back(proportion_report("greedy_max_frequency", "x=" + std::to_string(x), hits, samples,
                                    to_double(mu.at(x))));
  }
  return out;
}

double ks_statistic_uniform(std::vector<double> samples) {
  if (samples.empty()) throw InvalidParameter("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double u = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Jacobi theta form of the CDF; converges fast for small lambda.
    const double x = -pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(odd * odd * x);
      cdf += term;
      if (term < 1e-17 * cdf) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double statistic, std::size_t n) {
  return kolmogorov_survival(std::sqrt(static_cast<double>(n)) * statistic);
}

double chi_square_survival(double statistic, double degrees_of_freedom) {
  if (statistic <= 0.0) return 1.0;
  const boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double binomial_two_sided_pvalue(std::uint64_t successes, std::uint64_t trials, double p) {
  if (trials == 0) return 1.0;
  if (p <= 0.0) return successes == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return successes == trials ? 1.0 : 0.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(trials), p);
  const auto k = static_cast<double>(successes);
  const double lower = boost::math::cdf(dist, k);
  const double upper = successes == 0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, k - 1.0));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

}  // namespace posec
