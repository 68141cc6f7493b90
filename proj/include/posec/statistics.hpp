#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "posec/poset.hpp"

namespace posec {

inline constexpr double kDefaultConfidence = 0.99;
inline constexpr double kDefaultAlpha = 0.001;
// Standard-error multiple used by every tolerance-band comparison.
inline constexpr double kToleranceSigmas = 4.0;
// Joint tag-pattern histograms are collected up to this many elements.
inline constexpr std::size_t kJointPatternCap = 12;

struct SimulationOptions {
  unsigned workers = 0;  // 0: $POSEC_WORKERS or hardware concurrency
  double confidence = kDefaultConfidence;
};

struct Interval {
  double low;
  double high;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence);

struct Estimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = kDefaultConfidence;
  std::uint64_t master_seed = 0;
  double tau = 0.0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

// Success frequency of the greedy threshold strategy over `trials`
// independent trials. Throws ZeroTrialsError for trials == 0.
Estimate estimate_success(const Poset& p, double tau, std::uint64_t trials, std::uint64_t master_seed,
                          const SimulationOptions& options = {});

// One Estimate per threshold, all computed on the same trials.
std::vector<Estimate> threshold_sweep(const Poset& p, std::span<const double> taus, std::uint64_t trials,
                                      std::uint64_t master_seed, const SimulationOptions& options = {});

// Result of one statistical or exact check.
struct LemmaReport {
  std::string statistic;  // e.g. "tag_marginal", "ks_last_tag"
  std::string label;      // what was tested, e.g. "k=3" or "(2,5)"
  double observed = 0.0;
  double reference = 0.0;
  double p_value = 1.0;
  bool passed = false;
  std::uint64_t sample_size = 0;
};

// Tag counts by arrival position gathered in one simulation pass.
struct TagStatistics {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> tagged;   // [k]: trials where position k was tagged
  std::vector<std::uint64_t> pairs;    // [j * n + k], j < k: both tagged
  std::vector<std::uint64_t> triples;  // [8 * j + pattern] for positions (j, j+1, j+2), j >= 1
  std::vector<std::uint64_t> patterns; // joint pattern of positions 1..n-1; empty if n > kJointPatternCap

  double frequency(std::size_t k) const { return static_cast<double>(tagged[k]) / static_cast<double>(trials); }
  void merge(const TagStatistics& other);
};

TagStatistics collect_tag_statistics(const Poset& p, std::uint64_t trials, std::uint64_t seed,
                                     const SimulationOptions& options = {});

// Position k (1-based in labels) against the reference 1/k. Passes when the
// frequency is within kToleranceSigmas standard errors.
std::vector<LemmaReport> tag_marginal_reports(const TagStatistics& stats);
std::vector<LemmaReport> verify_tag_marginals(const Poset& p, std::uint64_t trials, std::uint64_t seed,
                                              const SimulationOptions& options = {});

// Position-wise agreement of two marginal vectors of equal length, within the
// tolerance band of the common reference 1/k.
std::vector<LemmaReport> compare_marginals(const TagStatistics& a, const TagStatistics& b);

struct IndependenceReport {
  std::vector<LemmaReport> tests;
  std::size_t flagged = 0;
  double alpha = kDefaultAlpha;

  double flagged_fraction() const {
    return tests.empty() ? 0.0 : static_cast<double>(flagged) / static_cast<double>(tests.size());
  }
  // The multiple-testing budget: at most 5 alpha of the tests may be flagged.
  bool passed() const { return flagged_fraction() <= 5.0 * alpha; }
};

// 2x2 chi-square test of every pair of positions. Pairs involving a constant
// indicator are reported as trivially independent.
IndependenceReport pairwise_independence(const TagStatistics& stats, double alpha = kDefaultAlpha);
// 2x2x2 mutual-independence chi-square test on consecutive position triples.
IndependenceReport triple_independence(const TagStatistics& stats, double alpha = kDefaultAlpha);
// Goodness of fit of the full joint tag pattern against the product law
// prod_k (1/k); cells with expected count below 5 are pooled. Requires
// stats.patterns.
LemmaReport joint_independence(const TagStatistics& stats, double alpha = kDefaultAlpha);

IndependenceReport verify_tag_independence(const Poset& p, std::uint64_t trials, std::uint64_t seed,
                                           double alpha = kDefaultAlpha, const SimulationOptions& options = {});

// KS test of the last tagged arrival time before t, rescaled by 1/t, against
// Uniform[0, 1]. Trials with no arrival before t are skipped.
LemmaReport verify_last_tag_uniform(const Poset& p, double t, std::uint64_t trials, std::uint64_t seed,
                                    double alpha = kDefaultAlpha, const SimulationOptions& options = {});

// Tag frequency of maximal element x with its arrival pinned at t, against the
// exact mu_t(x). Throws NotMaximalError.
LemmaReport verify_tagged_given_arrival(const Poset& p, ElementId x, double t, std::uint64_t trials,
                                        std::uint64_t seed, const SimulationOptions& options = {});

// Greedy-maximum frequency of each element under random weights against
// mu_exact.
std::vector<LemmaReport> verify_mu_sampling(const Poset& p, std::uint64_t samples, std::uint64_t seed,
                                            const SimulationOptions& options = {});

// Test primitives.
double ks_statistic_uniform(std::vector<double> samples);
// P(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);
// Asymptotic p-value of a one-sample KS statistic over n samples.
double ks_pvalue(double statistic, std::size_t n);
double chi_square_survival(double statistic, double degrees_of_freedom);
// Two-sided binomial test, twice the smaller tail, capped at 1.
double binomial_two_sided_pvalue(std::uint64_t successes, std::uint64_t trials, double p);

}  // namespace posec
