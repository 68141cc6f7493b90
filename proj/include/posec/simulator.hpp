#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "posec/poset.hpp"
#include "posec/random.hpp"

namespace posec {

// Nearest double to 1/e.
inline constexpr double kDefaultThreshold = 0.36787944117144233;

// One realisation of the arrival process: per element an arrival time and a
// selector-assigned weight, both in [0, 1].
struct Trial {
  std::vector<double> arrival_time;
  std::vector<double> weight;

  std::size_t size() const { return arrival_time.size(); }
};

// Draws n arrival times, then n weights.
Trial sample_trial(std::size_t n, Engine& rng);

// Discrete-time game: n uniform times are drawn, sorted, and handed out in
// order to the elements of `arrival_order`. Weights are drawn as usual.
Trial discrete_adapter(std::span<const ElementId> arrival_order, Engine& rng);

// Elements sorted by arrival time, ties broken by element index.
std::vector<ElementId> arrival_order(const Trial& trial);

struct TagEvent {
  double time;
  ElementId element;
  bool tagged;

  friend bool operator==(const TagEvent&, const TagEvent&) = default;
};

using EventLog = std::vector<TagEvent>;

struct Outcome {
  std::optional<ElementId> accepted;
  std::optional<double> accept_time;
  bool success = false;
  // Arrivals up to and including the accepted one (all arrivals if none).
  EventLog log;
};

// What a selector sees when an element is exposed: its time, the weight the
// selector assigned to it, and its order relations to the earlier arrivals,
// identified by arrival position (0 = first arrival). Element identities stay
// hidden.
struct Arrival {
  double time;
  double weight;
  std::span<const std::size_t> below;  // earlier arrivals below the newcomer
  std::span<const std::size_t> above;  // earlier arrivals above the newcomer
};

// Online stopping rule. run_selector calls reset() once per trial, then
// offer() for each arrival in time order until offer() returns true.
class Selector {
 public:
  virtual ~Selector() = default;
  virtual void reset() = 0;
  // Return true to accept the newcomer and stop.
  virtual bool offer(const Arrival& arrival) = 0;
  // Whether the most recent arrival was marked by the selector's own rule;
  // recorded in the event log.
  virtual bool marked() const { return false; }
};

// Incrementally maintained induced order on the exposed elements, answering
// "is the newcomer the greedy maximum of everything exposed so far?".
class TagTracker {
 public:
  void reset();
  // Registers the arrival and returns whether it is tagged.
  bool push(const Arrival& arrival);
  std::size_t exposed() const { return weights_.size(); }

 private:
  bool above(std::size_t lower, std::size_t upper) const;

  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> above_;  // row per arrival position
  std::vector<double> weights_;
  std::vector<std::size_t> by_weight_;  // arrival positions, lightest first
};

// Rejects everything up to time tau, then accepts the first tagged arrival.
class GreedyThresholdSelector final : public Selector {
 public:
  // Throws InvalidParameter unless 0 <= tau < 1.
  explicit GreedyThresholdSelector(double tau = kDefaultThreshold);

  void reset() override { tracker_.reset(); }
  bool offer(const Arrival& arrival) override;
  bool marked() const override { return last_tagged_; }
  double threshold() const { return tau_; }

 private:
  double tau_;
  TagTracker tracker_;
  bool last_tagged_ = false;
};

// Drives a selector through the trial. Only the adjudication of success
// consults the full poset.
class StrategyRunner {
 public:
  explicit StrategyRunner(const Poset& poset) : poset_(&poset) {}

  // Throws DimensionError if the trial does not match the poset.
  Outcome run(const Trial& trial, Selector& selector, bool keep_log = true);

  // Full tag log, independent of any threshold.
  EventLog tags(const Trial& trial);

 private:
  void expose(std::size_t position);
  void check(const Trial& trial) const;

  const Poset* poset_;
  std::vector<ElementId> order_;
  std::vector<std::size_t> below_;
  std::vector<std::size_t> above_;
  TagTracker tracker_;
};

Outcome run_selector(const Poset& p, const Trial& trial, Selector& selector);

// Runs the greedy threshold strategy with threshold tau.
Outcome run_strategy(const Poset& p, const Trial& trial, double tau = kDefaultThreshold);

// Tag flag of every arrival position.
EventLog tag_sequence(const Poset& p, const Trial& trial);

}  // namespace posec
