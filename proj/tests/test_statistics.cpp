#include <doctest.h>

#include <cmath>

#include "posec/error.hpp"
#include "posec/generators.hpp"
#include "posec/greedy.hpp"
#include "posec/simulator.hpp"
#include "posec/statistics.hpp"

using namespace posec;

namespace {

Poset abc() { return Poset::from_relations(3, {{0, 1}}); }

}  // namespace

TEST_CASE("wilson_interval matches reference values") {
  // References from statsmodels proportion_confint(method="wilson").
  Interval a = wilson_interval(37, 100, 0.99);
  CHECK(a.low == doctest::Approx(0.2573862900780333).epsilon(1e-12));
  CHECK(a.high == doctest::Approx(0.4987910887280806).epsilon(1e-12));
  Interval b = wilson_interval(632, 1000, 0.95);
  CHECK(b.low == doctest::Approx(0.6016575198074788).epsilon(1e-12));
  CHECK(b.high == doctest::Approx(0.6613322159523346).epsilon(1e-12));
  Interval c = wilson_interval(0, 10, 0.99);
  CHECK(c.low == 0.0);
  CHECK(c.high == doctest::Approx(0.3988540933049082).epsilon(1e-12));
  Interval d = wilson_interval(10, 10, 0.99);
  CHECK(d.high == 1.0);
  CHECK_THROWS_AS(wilson_interval(1, 0, 0.99), ZeroTrialsError);
  CHECK_THROWS_AS(wilson_interval(1, 10, 1.5), InvalidParameter);
}

TEST_CASE("test primitives match reference values") {
  // scipy.stats.kstwobign.sf
  CHECK(kolmogorov_survival(0.3) == doctest::Approx(0.9999906941986655).epsilon(1e-9));
  CHECK(kolmogorov_survival(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-9));
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-9));
  CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.049485876755377876).epsilon(1e-9));
  CHECK(kolmogorov_survival(2.0) == doctest::Approx(0.0006709252557796953).epsilon(1e-9));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  // Both series branches agree where they meet.
  CHECK(kolmogorov_survival(1.1799999) == doctest::Approx(kolmogorov_survival(1.1800001)).epsilon(1e-6));

  CHECK(ks_statistic_uniform({0.5}) == doctest::Approx(0.5));
  CHECK(ks_statistic_uniform({0.1, 0.6}) == doctest::Approx(0.4));
  CHECK_THROWS_AS(ks_statistic_uniform({}), InvalidParameter);

  // scipy.stats.chi2.sf
  CHECK(chi_square_survival(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_survival(10.0, 4.0) == doctest::Approx(0.04042768199451279).epsilon(1e-9));
  CHECK(chi_square_survival(0.0, 1.0) == 1.0);

  // 2 * min(binom.cdf(k), binom.sf(k - 1)) from scipy.
  CHECK(binomial_two_sided_pvalue(7, 20, 0.5) == doctest::Approx(0.26317596435546875).epsilon(1e-9));
  CHECK(binomial_two_sided_pvalue(3, 30, 0.2) == doctest::Approx(0.24542161278832705).epsilon(1e-9));
  CHECK(binomial_two_sided_pvalue(40, 100, 0.5) == doctest::Approx(0.056887933640980784).epsilon(1e-9));
  CHECK(binomial_two_sided_pvalue(10, 10, 1.0) == 1.0);
  CHECK(binomial_two_sided_pvalue(9, 10, 1.0) == 0.0);
}

TEST_CASE("estimate_success") {
  SUBCASE("singleton calibrates to 1 - 1/e") {
    const Estimate e = estimate_success(chain(1), kDefaultThreshold, 1'000'000, 1);
    CHECK(std::abs(e.p_hat - (1.0 - kDefaultThreshold)) <= 0.003);
    CHECK(e.ci_low <= e.p_hat);
    CHECK(e.p_hat <= e.ci_high);
    CHECK(e.trials == 1'000'000);
    CHECK(e.p_hat == static_cast<double>(e.successes) / 1e6);
  }
  SUBCASE("deterministic and independent of the worker count") {
    const Poset p = random_poset(8, 0.3, 4);
    const Estimate a = estimate_success(p, 0.3, 20'000, 9, {1, 0.99});
    const Estimate b = estimate_success(p, 0.3, 20'000, 9, {1, 0.99});
    const Estimate c = estimate_success(p, 0.3, 20'000, 9, {3, 0.99});
    CHECK(a == b);
    CHECK(a == c);
    const Estimate tiny = estimate_success(antichain(4), kDefaultThreshold, 10, 5);
    CHECK(tiny == estimate_success(antichain(4), kDefaultThreshold, 10, 5));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(estimate_success(chain(2), 0.3, 0, 1), ZeroTrialsError);
    CHECK_THROWS_AS(estimate_success(chain(2), 1.0, 10, 1), InvalidParameter);
  }
}

TEST_CASE("threshold_sweep") {
  const Poset p = wedge();
  const double taus[] = {0.0, 0.2, kDefaultThreshold, 0.99};
  const auto sweep = threshold_sweep(p, taus, 50'000, 3);
  REQUIRE(sweep.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(sweep[i] == estimate_success(p, taus[i], 50'000, 3));
  }
  CHECK(sweep[3].p_hat <= 0.05);

  const double zero[] = {0.0};
  CHECK(threshold_sweep(chain(1), zero, 10'000, 1).front().p_hat == 1.0);
}

TEST_CASE("tag marginals") {
  const TagStatistics stats = collect_tag_statistics(random_poset(8, 0.3, 42), 200'000, 5);
  const auto reports = tag_marginal_reports(stats);
  REQUIRE(reports.size() == 8);
  CHECK(reports[0].observed == 1.0);
  CHECK(reports[0].p_value == 1.0);
  for (const auto& r : reports) {
    CAPTURE(r.label);
    CHECK(r.passed);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
  }
  // Structure independence between a chain and an antichain.
  const auto agreement = compare_marginals(collect_tag_statistics(chain(5), 200'000, 6),
                                           collect_tag_statistics(antichain(5), 200'000, 7));
  for (const auto& r : agreement) CHECK(r.passed);
  CHECK_THROWS_AS(compare_marginals(collect_tag_statistics(chain(3), 10, 1), collect_tag_statistics(chain(4), 10, 1)),
                  DimensionError);
}

TEST_CASE("tag independence") {
  const TagStatistics stats = collect_tag_statistics(random_poset(6, 0.4, 1), 200'000, 8);
  const IndependenceReport pairs = pairwise_independence(stats);
  CHECK(pairs.tests.size() == 15);
  // Pairs with the first arrival involve a constant indicator.
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(pairs.tests[k].label.rfind("(1,", 0) == 0);
    CHECK(pairs.tests[k].p_value == 1.0);
  }
  CHECK(pairs.passed());

  // A_2 and A_3 jointly: 1/2 * 1/3.
  const double joint = static_cast<double>(stats.pairs[1 * 6 + 2]) / static_cast<double>(stats.trials);
  CHECK(std::abs(joint - 1.0 / 6.0) <= 4.0 * std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / 200'000.0));

  const IndependenceReport triples = triple_independence(stats);
  CHECK(triples.tests.size() == 3);
  CHECK(triples.passed());

  const LemmaReport deep = joint_independence(stats);
  CHECK(deep.passed);
  CHECK(deep.p_value >= 0.0);
  CHECK(deep.p_value <= 1.0);

  const TagStatistics wide = collect_tag_statistics(antichain(13), 10, 1);
  CHECK(wide.patterns.empty());
  CHECK_THROWS_AS(joint_independence(wide), TooLargeError);
}

TEST_CASE("independence checks flag dependent indicators") {
  // Forge statistics in which A_2 and A_3 always coincide.
  TagStatistics s;
  s.n = 3;
  s.trials = 6000;
  s.tagged = {6000, 2000, 2000};
  s.pairs.assign(9, 0);
  s.pairs[0 * 3 + 1] = 2000;
  s.pairs[0 * 3 + 2] = 2000;
  s.pairs[1 * 3 + 2] = 2000;
  const IndependenceReport r = pairwise_independence(s);
  CHECK(r.flagged == 1);
  CHECK_FALSE(r.passed());
}

TEST_CASE("last tag uniformity") {
  const LemmaReport single = verify_last_tag_uniform(chain(1), 1.0, 50'000, 2);
  CHECK(single.sample_size == 50'000);
  CHECK(single.passed);
  const LemmaReport wedge_half = verify_last_tag_uniform(wedge(), 0.5, 100'000, 3);
  CHECK(wedge_half.passed);
  CHECK(wedge_half.sample_size < 100'000);
  CHECK_THROWS_AS(verify_last_tag_uniform(wedge(), 0.0, 10, 1), InvalidParameter);
}

TEST_CASE("tag frequency with a pinned arrival") {
  const LemmaReport early = verify_tagged_given_arrival(abc(), 1, 0.01, 100'000, 4);
  CHECK(early.reference == doctest::Approx(59701.0 / 60000.0));
  CHECK(early.passed);
  const LemmaReport late = verify_tagged_given_arrival(abc(), 1, 1.0, 100'000, 4);
  CHECK(late.reference == doctest::Approx(2.0 / 3.0));
  CHECK(late.passed);
  const LemmaReport single = verify_tagged_given_arrival(chain(1), 0, 0.4, 1000, 4);
  CHECK(single.observed == 1.0);
  CHECK(single.passed);
  CHECK_THROWS_AS(verify_tagged_given_arrival(abc(), 0, 0.5, 10, 1), NotMaximalError);
}

TEST_CASE("sampled greedy maxima agree with mu_exact") {
  for (const Poset& p : {abc(), wedge(), random_poset(8, 0.3, 2)}) {
    for (const auto& r : verify_mu_sampling(p, 100'000, 12)) {
      CAPTURE(r.label);
      CHECK(r.passed);
    }
  }
}
