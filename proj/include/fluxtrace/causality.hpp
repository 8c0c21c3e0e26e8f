#ifndef FLUXTRACE_CAUSALITY_HPP
#define FLUXTRACE_CAUSALITY_HPP

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxtrace/simulator.hpp"

namespace fluxtrace {

/// An event (id, label, time): one reaction firing, or the initialization of
/// the instances carrying one id.
struct Event {
  std::uint64_t id = 0;
  std::string label;
  double time = 0.0;

  bool is_init() const noexcept { return label == kInitLabel; }
  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;
};

/// Causal edge: `target` consumed an instance produced by `source`.
/// `carrier` names the species of that instance.
struct CausalEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  std::string carrier;

  friend bool operator==(const CausalEdge&, const CausalEdge&) = default;
};

/// The simulation configuration of a run: events are the endpoints of the
/// causal edges, edges form a multiset (one per consumed instance).
struct CausalConfiguration {
  std::vector<Event> events;
  std::vector<CausalEdge> edges;

  friend bool operator==(const CausalConfiguration&, const CausalConfiguration&) = default;
};

/// Replay failure: a step consumes an instance absent from the running state.
class ReplayError : public std::runtime_error {
public:
  ReplayError(std::size_t step, const std::string& message);
  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

/// Builds the causal configuration of a trajectory by forward replay.
///
/// Every consumed instance contributes one edge from the event that created
/// it, (id, init, 0) for initial instances or the earlier step whose label
/// and time it carries, to the event of the consuming step (x, r, t).
/// Events are ordered init-first by id, then by time. Throws ReplayError.
CausalConfiguration extract_configuration(const Trajectory& trajectory);

struct Violation {
  enum class Kind {
    DanglingEndpoint,
    SelfLoop,
    TimeOrder,
    Cycle,
    InitWithCause,
    MissingCause,
  };
  Kind kind;
  std::vector<std::size_t> events;  // offending event indices
  std::string message;
};

struct ConfigurationReport {
  bool acyclic = true;
  bool causes_closed = true;
  std::vector<Violation> violations;

  bool valid() const noexcept { return acyclic && causes_closed && violations.empty(); }
};

/// Checks a configuration for the properties the transitive reflexive
/// closure needs to be an event-structure configuration: no directed cycle,
/// every cause inside the event set, causes strictly earlier than effects,
/// init events uncaused and every other event caused.
ConfigurationReport validate_configuration(const CausalConfiguration& config);

/// Keeps the edges whose target time lies in (t_lo, t_hi]; events are the
/// endpoints of the kept edges, so sources before t_lo stay as nodes.
/// Throws std::invalid_argument unless t_lo < t_hi.
CausalConfiguration restrict_interval(const CausalConfiguration& config, double t_lo, double t_hi);

/// Drops the edges carried by the given species, e.g. enzymes whose lineage
/// is not of interest. Events are re-derived from the remaining edges.
CausalConfiguration drop_carriers(const CausalConfiguration& config,
                                  const std::set<std::string>& species);

/// `{"events":[{"id":..,"label":..,"time":..}],"edges":[[i,j],...],"carriers":[...]}`
std::string configuration_to_json(const CausalConfiguration& config);
CausalConfiguration configuration_from_json(const std::string& text);

/// One node per event labelled `label@time`, one arrow per edge.
std::string configuration_to_dot(const CausalConfiguration& config);

}  // namespace fluxtrace

#endif  // FLUXTRACE_CAUSALITY_HPP
