// Acceptance suite: runs every exit criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "posec/generators.hpp"
#include "posec/greedy.hpp"
#include "posec/simulator.hpp"
#include "posec/statistics.hpp"

using namespace posec;

namespace {

constexpr std::uint64_t kMillion = 1'000'000;
constexpr double kInvE = kDefaultThreshold;
constexpr double kSuccessSlack = 0.005;
constexpr double kSingletonTolerance = 0.003;
constexpr double kAlpha = 0.001;
constexpr std::uint64_t kSeed = 20261016;

struct Verdict {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    passed = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Verdict success_on_suite() {
  Verdict v;
  double worst = 1.0;
  std::string worst_name;
  for (const auto& named : canonical_suite()) {
    const Estimate e = estimate_success(named.poset, kInvE, kMillion, kSeed);
    std::printf("    %-16s p_hat=%s ci=[%s, %s]\n", named.name.c_str(), num(e.p_hat).c_str(), num(e.ci_low).c_str(),
                num(e.ci_high).c_str());
    if (e.ci_low < worst) {
      worst = e.ci_low;
      worst_name = named.name;
    }
    if (e.ci_low < kInvE - kSuccessSlack) v.fail(named.name + " ci_low=" + num(e.ci_low));
  }
  if (v.passed) v.detail = "min ci_low=" + num(worst) + " (" + worst_name + ") >= " + num(kInvE - kSuccessSlack);
  return v;
}

Verdict singleton_calibration() {
  Verdict v;
  const Estimate e = estimate_success(chain(1), kInvE, kMillion, kSeed);
  const double target = 1.0 - kInvE;
  const double gap = std::abs(e.p_hat - target);
  v.detail = "p_hat=" + num(e.p_hat) + " target=" + num(target) + " |gap|=" + num(gap);
  if (gap > kSingletonTolerance) v.fail("gap exceeds " + num(kSingletonTolerance, 3));
  return v;
}

Verdict tag_marginals() {
  Verdict v;
  const TagStatistics random8 = collect_tag_statistics(random_poset(8, 0.3, 42), kMillion, kSeed);
  double worst_sigmas = 0.0;
  for (std::size_t k = 0; k < random8.n; ++k) {
    const double q = 1.0 / static_cast<double>(k + 1);
    const double bound = 4.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(kMillion));
    const double gap = std::abs(random8.frequency(k) - q);
    if (bound > 0.0) worst_sigmas = std::max(worst_sigmas, gap / (bound / 4.0));
    if (gap > bound || (bound == 0.0 && gap != 0.0)) v.fail("k=" + std::to_string(k + 1) + " gap=" + num(gap));
  }
  const TagStatistics c5 = collect_tag_statistics(chain(5), kMillion, kSeed + 1);
  const TagStatistics a5 = collect_tag_statistics(antichain(5), kMillion, kSeed + 2);
  double worst_diff = 0.0;
  for (const LemmaReport& r : compare_marginals(c5, a5)) {
    worst_diff = std::max(worst_diff, std::abs(r.observed));
    if (!r.passed) v.fail("chain/antichain disagree at " + r.label);
  }
  v.detail = "random(8,0.3) worst |freq-1/k| = " + num(worst_sigmas, 2) + " SE; chain(5) vs antichain(5) max diff " +
             num(worst_diff);
  return v;
}

Verdict tag_independence() {
  Verdict v;
  const TagStatistics stats = collect_tag_statistics(random_poset(6, 0.4, 42), kMillion, kSeed);
  const IndependenceReport pairs = pairwise_independence(stats, kAlpha);
  double min_p = 1.0;
  for (const auto& r : pairs.tests) min_p = std::min(min_p, r.p_value);
  v.detail = std::to_string(pairs.flagged) + "/" + std::to_string(pairs.tests.size()) +
             " pairs flagged at alpha=0.001, min p=" + num(min_p, 4);
  if (pairs.flagged_fraction() > 5 * kAlpha) v.fail("flagged fraction " + num(pairs.flagged_fraction(), 4));
  return v;
}

Verdict last_tag_uniform() {
  Verdict v;
  const std::vector<std::pair<std::string, Poset>> posets = {
      {"chain(3)", chain(3)}, {"wedge", wedge()}, {"boolean(3)", boolean_lattice(3)}};
  double min_p = 1.0;
  for (const auto& [name, p] : posets) {
    for (double t : {0.5, 1.0}) {
      const LemmaReport r = verify_last_tag_uniform(p, t, kMillion, kSeed, kAlpha);
      std::printf("    %-10s t=%.1f KS D=%s p=%s n=%llu\n", name.c_str(), t, num(r.observed).c_str(),
                  num(r.p_value, 4).c_str(), static_cast<unsigned long long>(r.sample_size));
      min_p = std::min(min_p, r.p_value);
      if (!(r.p_value > kAlpha)) v.fail(name + " t=" + num(t, 1) + " p=" + num(r.p_value, 5));
    }
  }
  if (v.passed) v.detail = "min KS p-value " + num(min_p, 4) + " > 0.001";
  return v;
}

Verdict pinned_arrival() {
  Verdict v;
  // a = 0 < b = 1, c = 2 isolated; x = b.
  const Poset abc = Poset::from_relations(3, {{0, 1}});
  for (const Rational t : {Rational(1, 4), Rational(1, 2), Rational(1)}) {
    const Rational polynomial = 1 - t / 2 + t * t / 6;
    if (mu_t_exact(abc, 1, t) != polynomial) v.fail("exact mu_t differs from 1 - t/2 + t^2/6 at t=" + to_string(t));
    const LemmaReport r = verify_tagged_given_arrival(abc, 1, to_double(t), 100'000, kSeed);
    const double se = std::sqrt(r.reference * (1.0 - r.reference) / 100'000.0);
    std::printf("    t=%-4s freq=%s mu_t=%s (%s) |z|=%s\n", to_string(t).c_str(), num(r.observed).c_str(),
                to_string(polynomial).c_str(), num(r.reference).c_str(),
                num(std::abs(r.observed - r.reference) / se, 2).c_str());
    if (std::abs(r.observed - to_double(polynomial)) > 4.0 * se) v.fail("t=" + to_string(t) + " outside 4 SE");
  }
  if (v.passed) v.detail = "all three points within 4 standard errors";
  return v;
}

Verdict exact_monotonicity() {
  Verdict v;
  const auto grid = uniform_grid(16);
  std::size_t checks = 0;
  std::size_t posets = 0;
  for (const auto& named : canonical_suite()) {
    if (named.poset.size() > 8) continue;
    ++posets;
    const MonotonicityReport r = check_mu_monotonicity(named.poset, grid);
    checks += r.checks;
    if (!r.passed()) v.fail(named.name + ": " + std::to_string(r.violations.size()) + " violations");
  }
  v.detail = std::to_string(checks) + " exact comparisons over " + std::to_string(posets) + " posets";
  return v;
}

Verdict oracle_consistency() {
  Verdict v;
  std::size_t posets = 0;
  for (const auto& named : canonical_suite()) {
    if (named.poset.size() > 10) continue;
    ++posets;
    const MuTable mu = mu_exact(named.poset);
    Rational sum = 0;
    for (ElementId x = 0; x < named.poset.size(); ++x) sum += mu.at(x);
    if (sum != 1) v.fail(named.name + " sum of mu = " + to_string(sum));
    for (const LemmaReport& r : verify_mu_sampling(named.poset, kMillion, kSeed)) {
      if (!r.passed) v.fail(named.name + " " + r.label + " freq=" + num(r.observed) + " mu=" + num(r.reference));
    }
  }
  if (v.passed) v.detail = std::to_string(posets) + " posets: sum mu = 1 exactly, sampled frequencies within 4 SE";
  return v;
}

bool offline_tag(const Poset& p, const std::vector<ElementId>& order, const Trial& trial, std::size_t k) {
  std::vector<ElementId> members(order.begin(), order.begin() + static_cast<long>(k) + 1);
  std::vector<std::size_t> arrival_pos(p.size());
  for (std::size_t i = 0; i <= k; ++i) arrival_pos[order[i]] = i;
  std::sort(members.begin(), members.end());
  const SubsetMap subset(members);
  std::vector<ElementId> by_weight(members.size());
  std::iota(by_weight.begin(), by_weight.end(), ElementId{0});
  std::sort(by_weight.begin(), by_weight.end(), [&](ElementId a, ElementId b) {
    const double wa = trial.weight[members[a]];
    const double wb = trial.weight[members[b]];
    return wa < wb || (wa == wb && arrival_pos[members[a]] < arrival_pos[members[b]]);
  });
  return is_tagged(p.induced(subset), subset.local_of(order[k]), WeightRanking::from_order(by_weight));
}

Verdict online_offline() {
  Verdict v;
  const Poset p = random_poset(7, 0.3, 42);
  Engine rng = block_engine(kSeed, 0);
  std::size_t mismatches = 0;
  std::size_t flags = 0;
  for (int i = 0; i < 10'000; ++i) {
    const Trial trial = sample_trial(p.size(), rng);
    const EventLog log = tag_sequence(p, trial);
    const auto order = arrival_order(trial);
    for (std::size_t k = 0; k < log.size(); ++k) {
      ++flags;
      if (log[k].tagged != offline_tag(p, order, trial, k)) ++mismatches;
    }
  }
  v.detail = std::to_string(mismatches) + " mismatches over " + std::to_string(flags) + " tag flags";
  if (mismatches != 0) v.fail("online and offline tags differ");
  return v;
}

Verdict determinism() {
  Verdict v;
  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "random:8:0.3:42", "--trials", "200000", "--seed", "7"},
      {"simulate", "antichain:5", "--trials", "1000", "--seed", "7", "--format", "csv"},
      {"sweep", "chain:20", "--trials", "100000", "--seed", "3"},
      {"sweep", "wedge", "--trials", "100000", "--seed", "3", "--format", "csv"},
      {"exact-mu", "boolean:3", "--t", "1/3"},
      {"verify", "wedge", "--lemma", "all", "--trials", "50000", "--seed", "11"},
      {"write", "random:8:0.3:42"},
  };
  for (const auto& base : commands) {
    std::string first;
    for (const char* workers : {"1", "1", "4"}) {
      auto args = base;
      if (base[0] != "write" && base[0] != "exact-mu") {
        args.push_back("--workers");
        args.push_back(workers);
      }
      std::ostringstream out, err;
      const int code = cli::run(args, out, err);
      if (code != 0) v.fail(base[0] + " exited with " + std::to_string(code));
      if (first.empty()) {
        first = out.str();
      } else if (out.str() != first) {
        v.fail(base[0] + " " + base[1] + " output differs with --workers " + workers);
      }
    }
  }
  if (v.passed) v.detail = std::to_string(commands.size()) + " commands byte-identical across runs and worker counts";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 success probability >= 1/e on the canonical suite", success_on_suite},
      {"2 singleton calibration to 1 - 1/e", singleton_calibration},
      {"3 tag marginals 1/k and structure independence", tag_marginals},
      {"4 pairwise tag independence", tag_independence},
      {"5 last tag time uniform", last_tag_uniform},
      {"6 tag probability with pinned arrival equals mu_t", pinned_arrival},
      {"7 exact mu_t >= mu", exact_monotonicity},
      {"8 mu oracle consistency", oracle_consistency},
      {"9 online/offline tag equivalence", online_offline},
      {"10 determinism across runs and worker counts", determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1fs)\n", v.passed ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.passed) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
