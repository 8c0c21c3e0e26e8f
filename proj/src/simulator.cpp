#include "fluxtrace/simulator.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fluxtrace/format.hpp"

namespace fluxtrace {

// SimulationState -----------------------------------------------------------

void SimulationState::add(const SpeciesInstance& instance, std::size_t copies) {
  if (copies == 0) return;
  multiset_[instance] += copies;
  auto it = by_species_.find(instance.species);
  if (it == by_species_.end()) {
    by_species_.emplace(instance.species, copies);
  } else {
    it->second += copies;
  }
  size_ += copies;
}

bool SimulationState::remove(const SpeciesInstance& instance) {
  auto it = multiset_.find(instance);
  if (it == multiset_.end()) return false;
  if (--it->second == 0) multiset_.erase(it);
  auto sp = by_species_.find(instance.species);
  if (--sp->second == 0) by_species_.erase(sp);
  --size_;
  return true;
}

std::optional<SpeciesInstance> SimulationState::take_oldest(std::string_view species,
                                                            std::uint64_t id) {
  SpeciesInstance probe{std::string(species), id, -std::numeric_limits<double>::infinity(), ""};
  auto it = multiset_.lower_bound(probe);
  if (it == multiset_.end() || it->first.species != species || it->first.id != id) {
    return std::nullopt;
  }
  SpeciesInstance found = it->first;
  remove(found);
  return found;
}

bool SimulationState::contains(const SpeciesInstance& instance) const {
  return multiset_.count(instance) > 0;
}

std::uint64_t SimulationState::count(std::string_view species) const {
  auto it = by_species_.find(species);
  return it == by_species_.end() ? 0 : it->second;
}

std::vector<SpeciesInstance> SimulationState::instances() const {
  std::vector<SpeciesInstance> out;
  out.reserve(size_);
  for (const auto& [inst, n] : multiset_) out.insert(out.end(), n, inst);
  return out;
}

// Initial state and propensities -------------------------------------------

SimulationState initial_state(const Model& model) {
  SimulationState state;
  std::uint64_t next_id = 1;
  for (const auto& [species, count] : model.initial()) {
    for (std::uint64_t i = 0; i < count; ++i) {
      state.add(SpeciesInstance{species, next_id++, 0.0, std::string(kInitLabel)});
    }
  }
  return state;
}

namespace {

double mass_action(const Reaction& r, std::uint64_t a, std::uint64_t b) {
  if (r.arity() == 1) return r.rate() * static_cast<double>(a);
  if (r.is_homodimer()) {
    return a < 2 ? 0.0 : r.rate() * static_cast<double>(a) * static_cast<double>(a - 1) / 2.0;
  }
  return r.rate() * static_cast<double>(a) * static_cast<double>(b);
}

}  // namespace

double propensity(const Reaction& reaction, const SimulationState& state) {
  const std::uint64_t a = state.count(reaction.reactants()[0]);
  const std::uint64_t b = reaction.arity() == 2 ? state.count(reaction.reactants()[1]) : 0;
  return mass_action(reaction, a, b);
}

// Simulator -----------------------------------------------------------------

Simulator::Simulator(const Model& model, const SimulationState& state)
    : model_(&model), pools_(model.species().size()), clock_(state.clock()) {
  auto index_of = [&](const std::string& s) {
    auto it = std::lower_bound(model.species().begin(), model.species().end(), s);
    return static_cast<std::size_t>(it - model.species().begin());
  };
  for (const auto& r : model.reactions()) {
    Compiled c;
    for (const auto& s : r.reactants()) c.reactants.push_back(index_of(s));
    for (const auto& s : r.products()) c.products.push_back(index_of(s));
    compiled_.push_back(std::move(c));
  }
  for (const auto& inst : state.instances()) {
    if (!model.has_species(inst.species)) {
      throw std::invalid_argument("state holds species '" + inst.species +
                                  "' unknown to the model");
    }
    insert(index_of(inst.species), inst);
  }
  propensities_.resize(compiled_.size());
}

void Simulator::insert(std::size_t species, SpeciesInstance instance) {
  Pool& pool = pools_[species];
  pool.slots.push_back(instance.id);
  pool.groups[instance.id].push_back(std::move(instance));
}

SpeciesInstance Simulator::take_slot(std::size_t species, std::size_t slot) {
  Pool& pool = pools_[species];
  const std::uint64_t id = pool.slots[slot];
  pool.slots[slot] = pool.slots.back();
  pool.slots.pop_back();
  auto it = pool.groups.find(id);
  SpeciesInstance inst = std::move(it->second.front());
  it->second.erase(it->second.begin());
  if (it->second.empty()) pool.groups.erase(it);
  return inst;
}

double Simulator::propensity(std::size_t i) const {
  const Reaction& r = model_->reactions()[i];
  const Compiled& c = compiled_[i];
  const std::uint64_t a = pools_[c.reactants[0]].slots.size();
  const std::uint64_t b = c.reactants.size() == 2 ? pools_[c.reactants[1]].slots.size() : 0;
  return mass_action(r, a, b);
}

double Simulator::total_propensity() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < compiled_.size(); ++i) sum += propensity(i);
  return sum;
}

std::uint64_t Simulator::count(std::string_view species) const {
  const auto& names = model_->species();
  auto it = std::lower_bound(names.begin(), names.end(), species);
  if (it == names.end() || *it != species) return 0;
  return pools_[static_cast<std::size_t>(it - names.begin())].slots.size();
}

std::optional<TransitionInstance> Simulator::step(SplitMix64& rng, double t_limit) {
  double total = 0.0;
  for (std::size_t i = 0; i < compiled_.size(); ++i) {
    propensities_[i] = propensity(i);
    total += propensities_[i];
  }
  if (!(total > 0.0)) return std::nullopt;

  double next = clock_;
  while (!(next > clock_)) next = clock_ + rng.exponential(total);
  if (next > t_limit) {
    clock_ = t_limit;
    return std::nullopt;
  }

  const double target = rng.uniform_open() * total;
  std::size_t chosen = compiled_.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < compiled_.size(); ++i) {
    if (propensities_[i] <= 0.0) continue;
    acc += propensities_[i];
    chosen = i;
    if (target < acc) break;
  }

  const Reaction& reaction = model_->reactions()[chosen];
  const Compiled& c = compiled_[chosen];
  TransitionInstance tr;
  tr.time = next;
  tr.reaction = reaction.name();
  if (reaction.is_homodimer()) {
    const std::size_t s = c.reactants[0];
    auto first = take_slot(s, rng.below(pools_[s].slots.size()));
    auto second = take_slot(s, rng.below(pools_[s].slots.size()));
    if (second < first) std::swap(first, second);
    tr.consumed.push_back(std::move(first));
    tr.consumed.push_back(std::move(second));
  } else {
    for (std::size_t s : c.reactants) {
      tr.consumed.push_back(take_slot(s, rng.below(pools_[s].slots.size())));
    }
  }
  const std::uint64_t id = tr.consumed.front().id;
  for (std::size_t k = 0; k < c.products.size(); ++k) {
    SpeciesInstance p{reaction.products()[k], id, next, reaction.name()};
    insert(c.products[k], p);
    tr.produced.push_back(std::move(p));
  }
  clock_ = next;
  return tr;
}

SimulationState Simulator::state() const {
  SimulationState out;
  for (const auto& pool : pools_) {
    for (const auto& [id, group] : pool.groups) {
      for (const auto& inst : group) out.add(inst);
    }
  }
  out.set_clock(clock_);
  return out;
}

SimulationRun run_simulation(const Model& model, const StopCondition& stop, std::uint64_t seed) {
  if (!stop.t_end && !stop.max_steps) {
    throw std::invalid_argument("a stop condition needs t_end or max_steps");
  }
  if (stop.t_end && !(*stop.t_end > 0.0)) {
    throw std::invalid_argument("t_end must be positive");
  }
  SimulationRun run;
  run.trajectory.initial_state = initial_state(model);
  Simulator sim(model, run.trajectory.initial_state);
  SplitMix64 rng = SplitMix64::stream(seed);
  const double limit = stop.t_end.value_or(std::numeric_limits<double>::infinity());
  auto& steps = run.trajectory.steps;
  for (;;) {
    if (stop.max_steps && steps.size() >= *stop.max_steps) {
      run.reason = StopReason::StepLimit;
      run.horizon = last_time(run.trajectory);
      break;
    }
    auto tr = sim.step(rng, limit);
    if (!tr) {
      if (sim.dead()) {
        run.reason = StopReason::Dead;
        run.horizon = std::numeric_limits<double>::infinity();
      } else {
        run.reason = StopReason::TimeLimit;
        run.horizon = limit;
      }
      break;
    }
    steps.push_back(std::move(*tr));
  }
  return run;
}

Trajectory simulate(const Model& model, const StopCondition& stop, std::uint64_t seed) {
  return run_simulation(model, stop, seed).trajectory;
}

double last_time(const Trajectory& trajectory) noexcept {
  return trajectory.steps.empty() ? 0.0 : trajectory.steps.back().time;
}

namespace {

std::map<std::string, std::size_t> tally(const std::vector<std::string>& names) {
  std::map<std::string, std::size_t> out;
  for (const auto& n : names) ++out[n];
  return out;
}

std::map<std::string, std::size_t> tally(const std::vector<SpeciesInstance>& insts) {
  std::map<std::string, std::size_t> out;
  for (const auto& i : insts) ++out[i.species];
  return out;
}

}  // namespace

std::vector<std::string> validate_trajectory(const Trajectory& trajectory, const Model* model) {
  std::vector<std::string> problems;
  SimulationState state = trajectory.initial_state;
  double previous = 0.0;
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    const auto& step = trajectory.steps[i];
    const std::string where = "step " + std::to_string(i) + ": ";
    if (!(step.time > previous)) problems.push_back(where + "timestamp not strictly increasing");
    previous = step.time;
    if (step.consumed.empty() || step.consumed.size() > 2) {
      problems.push_back(where + "must consume one or two instances");
    }
    for (const auto& c : step.consumed) {
      if (!state.remove(c)) {
        problems.push_back(where + "consumed " + c.species + "(" + std::to_string(c.id) +
                           ") is not present");
      }
    }
    for (const auto& p : step.produced) {
      if (p.origin != step.reaction || p.birth_time != step.time) {
        problems.push_back(where + "product " + p.species + " is not tagged with the step");
      }
      state.add(p);
    }
    if (model) {
      const Reaction* r = model->find_reaction(step.reaction);
      if (!r) {
        problems.push_back(where + "unknown reaction '" + step.reaction + "'");
      } else if (tally(r->reactants()) != tally(step.consumed) ||
                 tally(r->products()) != tally(step.produced)) {
        problems.push_back(where + "species do not match reaction '" + step.reaction + "'");
      }
    }
  }
  return problems;
}

// Species counts ------------------------------------------------------------

std::uint64_t CountTable::at(std::size_t row, std::string_view name) const {
  auto it = std::find(species.begin(), species.end(), name);
  if (it == species.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return counts.at(row)[static_cast<std::size_t>(it - species.begin())];
}

std::string CountTable::to_csv() const {
  std::ostringstream out;
  out << "time";
  for (const auto& s : species) out << ',' << s;
  out << '\n';
  for (std::size_t r = 0; r < times.size(); ++r) {
    out << format_time(times[r]);
    for (auto c : counts[r]) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

CountTable species_counts(const Trajectory& trajectory, std::span<const double> sample_times,
                          const CountOptions& options) {
  const double horizon = options.horizon.value_or(last_time(trajectory));
  double previous = 0.0;
  for (double t : sample_times) {
    if (!(t >= previous)) {
      throw std::invalid_argument("sample times must be non-negative and non-decreasing");
    }
    if (t > horizon) {
      throw std::out_of_range("sample time " + format_time(t) +
                              " is beyond the trajectory horizon " + format_time(horizon));
    }
    previous = t;
  }

  CountTable table;
  if (options.species.empty()) {
    std::set<std::string> seen;
    for (const auto& [s, n] : trajectory.initial_state.species_counts()) seen.insert(s);
    for (const auto& step : trajectory.steps) {
      for (const auto& c : step.consumed) seen.insert(c.species);
      for (const auto& p : step.produced) seen.insert(p.species);
    }
    table.species.assign(seen.begin(), seen.end());
  } else {
    table.species = options.species;
  }

  std::map<std::string, std::int64_t> current;
  for (const auto& [s, n] : trajectory.initial_state.species_counts()) {
    current[s] = static_cast<std::int64_t>(n);
  }
  std::size_t next = 0;
  for (double t : sample_times) {
    while (next < trajectory.steps.size() && trajectory.steps[next].time <= t) {
      for (const auto& c : trajectory.steps[next].consumed) --current[c.species];
      for (const auto& p : trajectory.steps[next].produced) ++current[p.species];
      ++next;
    }
    std::vector<std::uint64_t> row;
    row.reserve(table.species.size());
    for (const auto& s : table.species) {
      auto it = current.find(s);
      const std::int64_t v = it == current.end() ? 0 : it->second;
      if (v < 0) throw std::invalid_argument("trajectory replay underflows species " + s);
      row.push_back(static_cast<std::uint64_t>(v));
    }
    table.times.push_back(t);
    table.counts.push_back(std::move(row));
  }
  return table;
}

}  // namespace fluxtrace
