#include "posec/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "posec/error.hpp"

namespace posec {

Trial sample_trial(std::size_t n, Engine& rng) {
  Trial trial;
  trial.arrival_time.resize(n);
  trial.weight.resize(n);
  for (double& t : trial.arrival_time) t = uniform01(rng);
  for (double& w : trial.weight) w = uniform01(rng);
  return trial;
}

Trial discrete_adapter(std::span<const ElementId> arrival_order, Engine& rng) {
  const std::size_t n = arrival_order.size();
  std::vector<bool> seen(n, false);
  for (ElementId x : arrival_order) {
    if (x >= n || seen[x]) throw InvalidParameter("arrival order is not a permutation");
    seen[x] = true;
  }
  std::vector<double> times(n);
  for (double& t : times) t = uniform01(rng);
  std::sort(times.begin(), times.end());

  Trial trial;
  trial.arrival_time.resize(n);
  trial.weight.resize(n);
  for (std::size_t k = 0; k < n; ++k) trial.arrival_time[arrival_order[k]] = times[k];
  for (double& w : trial.weight) w = uniform01(rng);
  return trial;
}

std::vector<ElementId> arrival_order(const Trial& trial) {
  std::vector<ElementId> order(trial.size());
  std::iota(order.begin(), order.end(), ElementId{0});
  const auto& t = trial.arrival_time;
  std::sort(order.begin(), order.end(),
            [&](ElementId a, ElementId b) { return t[a] < t[b] || (t[a] == t[b] && a < b); });
  return order;
}

void TagTracker::reset() {
  weights_.clear();
  by_weight_.clear();
}

bool TagTracker::above(std::size_t lower, std::size_t upper) const {
  const auto& row = above_[lower];
  const std::size_t word = upper / 64;
  return word < row.size() && ((row[word] >> (upper % 64)) & 1U);
}

bool TagTracker::push(const Arrival& arrival) {
  const std::size_t m = weights_.size();
  if (above_.size() <= m) above_.emplace_back();
  auto& own = above_[m];
  own.assign(m / 64 + 1, 0);
  for (std::size_t j : arrival.above) {
    if (j >= m) throw InvalidParameter("arrival refers to a position not yet exposed");
    own[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  for (std::size_t j : arrival.below) {
    if (j >= m) throw InvalidParameter("arrival refers to a position not yet exposed");
    auto& row = above_[j];
    if (row.size() <= m / 64) row.resize(m / 64 + 1, 0);
    row[m / 64] |= std::uint64_t{1} << (m % 64);
  }

  weights_.push_back(arrival.weight);
  // Equal weights keep arrival order.
  auto pos = std::upper_bound(by_weight_.begin(), by_weight_.end(), arrival.weight,
                              [&](double w, std::size_t j) { return w < weights_[j]; });
  by_weight_.insert(pos, m);

  std::size_t current = by_weight_.front();
  for (std::size_t i = 1; i < by_weight_.size(); ++i) {
    if (above(current, by_weight_[i])) current = by_weight_[i];
  }
  return current == m;
}

GreedyThresholdSelector::GreedyThresholdSelector(double tau) : tau_(tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw InvalidParameter("threshold must lie in [0, 1)");
}

bool GreedyThresholdSelector::offer(const Arrival& arrival) {
  last_tagged_ = tracker_.push(arrival);
  return last_tagged_ && arrival.time > tau_;
}

void StrategyRunner::check(const Trial& trial) const {
  if (trial.arrival_time.size() != poset_->size() || trial.weight.size() != poset_->size()) {
    throw DimensionError("trial has " + std::to_string(trial.arrival_time.size()) + " times and " +
                         std::to_string(trial.weight.size()) + " weights for a poset of " +
                         std::to_string(poset_->size()) + " elements");
  }
}

void StrategyRunner::expose(std::size_t position) {
  below_.clear();
  above_.clear();
  const ElementId e = order_[position];
  for (std::size_t j = 0; j < position; ++j) {
    const ElementId f = order_[j];
    if (poset_->less(f, e)) {
      below_.push_back(j);
    } else if (poset_->less(e, f)) {
      above_.push_back(j);
    }
  }
}

Outcome StrategyRunner::run(const Trial& trial, Selector& selector, bool keep_log) {
  check(trial);
  order_ = arrival_order(trial);
  selector.reset();
  Outcome outcome;
  if (keep_log) outcome.log.reserve(order_.size());
  for (std::size_t m = 0; m < order_.size(); ++m) {
    expose(m);
    const ElementId e = order_[m];
    const double time = trial.arrival_time[e];
    const bool accept = selector.offer(Arrival{time, trial.weight[e], below_, above_});
    if (keep_log) outcome.log.push_back({time, e, selector.marked()});
    if (accept) {
      outcome.accepted = e;
      outcome.accept_time = time;
      outcome.success = poset_->is_maximal(e);
      break;
    }
  }
  return outcome;
}

EventLog StrategyRunner::tags(const Trial& trial) {
  check(trial);
  order_ = arrival_order(trial);
  tracker_.reset();
  EventLog log;
  log.reserve(order_.size());
  for (std::size_t m = 0; m < order_.size(); ++m) {
    expose(m);
    const ElementId e = order_[m];
    const double time = trial.arrival_time[e];
    const bool tagged = tracker_.push(Arrival{time, trial.weight[e], below_, above_});
    log.push_back({time, e, tagged});
  }
  return log;
}

Outcome run_selector(const Poset& p, const Trial& trial, Selector& selector) {
  StrategyRunner runner(p);
  return runner.run(trial, selector);
}

Outcome run_strategy(const Poset& p, const Trial& trial, double tau) {
  GreedyThresholdSelector selector(tau);
  return run_selector(p, trial, selector);
}

EventLog tag_sequence(const Poset& p, const Trial& trial) {
  StrategyRunner runner(p);
  return runner.tags(trial);
}

}  // namespace posec
