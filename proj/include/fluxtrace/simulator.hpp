#ifndef FLUXTRACE_SIMULATOR_HPP
#define FLUXTRACE_SIMULATOR_HPP

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fluxtrace/model.hpp"
#include "fluxtrace/rng.hpp"

namespace fluxtrace {

/// A tagged token: species plus the (id, origin, birth time) provenance tag.
///
/// Field order defines the canonical ordering: species, then id, then age
/// (oldest first). Instances of one species sharing an id are only
/// distinguishable by their origin, which the textual trace format does not
/// carry; whenever such a tie has to be broken the oldest instance is used.
struct SpeciesInstance {
  std::string species;
  std::uint64_t id = 0;
  double birth_time = 0.0;
  std::string origin{kInitLabel};

  friend bool operator==(const SpeciesInstance&, const SpeciesInstance&) = default;
  friend auto operator<=>(const SpeciesInstance&, const SpeciesInstance&) = default;
};

/// Multiset of species instances plus the simulation clock.
class SimulationState {
public:
  SimulationState() = default;

  void add(const SpeciesInstance& instance, std::size_t copies = 1);
  /// Removes one copy of exactly this instance; false if absent.
  bool remove(const SpeciesInstance& instance);
  /// Removes and returns the oldest instance of `species` carrying `id`.
  std::optional<SpeciesInstance> take_oldest(std::string_view species, std::uint64_t id);

  bool contains(const SpeciesInstance& instance) const;
  std::uint64_t count(std::string_view species) const;
  std::uint64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  /// All instances in canonical order, repeated by multiplicity.
  std::vector<SpeciesInstance> instances() const;
  const std::map<std::string, std::uint64_t, std::less<>>& species_counts() const noexcept {
    return by_species_;
  }

  double clock() const noexcept { return clock_; }
  void set_clock(double t) noexcept { clock_ = t; }

  friend bool operator==(const SimulationState&, const SimulationState&) = default;

private:
  std::map<SpeciesInstance, std::uint64_t> multiset_;
  std::map<std::string, std::uint64_t, std::less<>> by_species_;
  std::uint64_t size_ = 0;
  double clock_ = 0.0;
};

/// One fired reaction: (t, L, R).
///
/// `consumed` follows the reaction's reactant order (for a homodimer the
/// lower-ordered instance comes first); `produced` follows the product order.
struct TransitionInstance {
  double time = 0.0;
  std::string reaction;
  std::vector<SpeciesInstance> consumed;
  std::vector<SpeciesInstance> produced;

  /// Id of the event this transition instantiates: the products' id, or the
  /// first consumed id when there are no products.
  std::uint64_t event_id() const noexcept {
    return produced.empty() ? consumed.front().id : produced.front().id;
  }

  friend bool operator==(const TransitionInstance&, const TransitionInstance&) = default;
};

struct Trajectory {
  SimulationState initial_state;
  std::vector<TransitionInstance> steps;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Z0: one instance per element of the initial multiset, ids 1..n assigned
/// over the species in lexicographic order, all tagged `init` at time 0.
SimulationState initial_state(const Model& model);

/// Mass-action propensity of `reaction` in `state`:
/// k*n(A) for A -> ..., k*n(A)*n(B) for A + B -> ..., k*n(A)*(n(A)-1)/2 for A + A -> ....
double propensity(const Reaction& reaction, const SimulationState& state);

/// Exact stochastic simulation over tagged instances.
///
/// Each step draws an exponential waiting time from the total propensity,
/// picks a reaction by roulette over model order and picks each consumed
/// instance uniformly among the instances of its species (two distinct ones
/// for a homodimer). Ties between same-species same-id instances resolve to
/// the oldest. Products inherit the id of the first consumed instance and are
/// tagged with the reaction name and the new clock value.
class Simulator {
public:
  Simulator(const Model& model, const SimulationState& state);

  /// Fires one reaction and returns it, or returns nullopt when the state is
  /// dead (zero total propensity) or the next firing would land after
  /// `t_limit`. In the latter case the clock is advanced to `t_limit`.
  std::optional<TransitionInstance> step(SplitMix64& rng,
                                         double t_limit = std::numeric_limits<double>::infinity());

  double total_propensity() const;
  double propensity(std::size_t reaction_index) const;
  bool dead() const { return total_propensity() <= 0.0; }
  double clock() const noexcept { return clock_; }
  std::uint64_t count(std::string_view species) const;

  SimulationState state() const;

private:
  struct Pool {
    std::vector<std::uint64_t> slots;  // one id per live instance
    std::unordered_map<std::uint64_t, std::vector<SpeciesInstance>> groups;  // birth order
  };
  struct Compiled {
    std::vector<std::size_t> reactants;
    std::vector<std::size_t> products;
  };

  void insert(std::size_t species, SpeciesInstance instance);
  SpeciesInstance take_slot(std::size_t species, std::size_t slot);

  const Model* model_;
  std::vector<Compiled> compiled_;
  std::vector<Pool> pools_;
  std::vector<double> propensities_;
  double clock_ = 0.0;
};

struct StopCondition {
  std::optional<double> t_end;
  std::optional<std::uint64_t> max_steps;
};

enum class StopReason { Dead, TimeLimit, StepLimit };

struct SimulationRun {
  Trajectory trajectory;
  StopReason reason = StopReason::Dead;
  /// Time up to which the state is known: t_end, the last step for a step
  /// limit, or +infinity once the state is dead.
  double horizon = 0.0;
};

/// Runs from Z0 until the stop condition or a dead state, whichever comes
/// first. Deterministic in (model, stop, seed). Throws std::invalid_argument
/// if neither limit is given or t_end <= 0.
SimulationRun run_simulation(const Model& model, const StopCondition& stop, std::uint64_t seed);
Trajectory simulate(const Model& model, const StopCondition& stop, std::uint64_t seed);

/// Checks the trajectory invariants (strictly increasing times, every
/// consumed instance present on replay, products tagged with the step, and,
/// when a model is given, species matching the named reaction). Returns one
/// message per violation; empty means valid.
std::vector<std::string> validate_trajectory(const Trajectory& trajectory,
                                             const Model* model = nullptr);

/// Time of the last step, or 0 for an empty trajectory.
double last_time(const Trajectory& trajectory) noexcept;

/// Species counts sampled along a trajectory.
struct CountTable {
  std::vector<std::string> species;
  std::vector<double> times;
  std::vector<std::vector<std::uint64_t>> counts;  // [row][species]

  std::uint64_t at(std::size_t row, std::string_view species) const;
  /// "time,<species...>" header followed by one row per sample.
  std::string to_csv() const;
};

struct CountOptions {
  /// Column order; defaults to every species seen in the trajectory, sorted.
  std::vector<std::string> species;
  /// Latest admissible sample time; defaults to the last step's time.
  std::optional<double> horizon;
};

/// Replays the trajectory: the count at time s reflects every step with
/// timestamp <= s. Throws std::invalid_argument for decreasing or negative
/// sample times and std::out_of_range for a sample past the horizon.
CountTable species_counts(const Trajectory& trajectory, std::span<const double> sample_times,
                          const CountOptions& options = {});

}  // namespace fluxtrace

#endif  // FLUXTRACE_SIMULATOR_HPP
