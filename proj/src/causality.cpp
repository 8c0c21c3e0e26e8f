#include "fluxtrace/causality.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "fluxtrace/format.hpp"

namespace fluxtrace {

ReplayError::ReplayError(std::size_t step, const std::string& message)
    : std::runtime_error("step " + std::to_string(step) + ": " + message), step_(step) {}

CausalConfiguration extract_configuration(const Trajectory& trajectory) {
  // Events are first collected by value and indexed once the set is known.
  struct RawEdge {
    Event source;
    Event target;
    std::string carrier;
  };
  std::vector<RawEdge> raw;
  SimulationState state = trajectory.initial_state;

  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    const auto& step = trajectory.steps[i];
    if (step.consumed.empty()) throw ReplayError(i, "step consumes nothing");
    const Event target{step.event_id(), step.reaction, step.time};
    for (const auto& c : step.consumed) {
      if (!state.remove(c)) {
        throw ReplayError(i, c.species + "(" + std::to_string(c.id) + ") tagged " + c.origin + "@" +
                                 format_time(c.birth_time) + " is not present");
      }
      raw.push_back({Event{c.id, c.origin, c.birth_time}, target, c.species});
    }
    for (const auto& p : step.produced) state.add(p);
  }

  // Init events are keyed by id; reaction events by (label, time), the id of
  // the consuming instance being the producing event's id for well-formed runs.
  auto key = [](const Event& e) {
    return e.is_init() ? std::make_tuple(0, 0.0, std::string(), e.id)
                       : std::make_tuple(1, e.time, e.label, std::uint64_t{0});
  };
  std::map<decltype(key(Event{})), Event> unique;
  for (const auto& e : raw) {
    unique.emplace(key(e.target), e.target);
    unique.emplace(key(e.source), e.source);
  }
  // A target event always wins over a source spelling of the same firing.
  for (const auto& e : raw) unique[key(e.target)] = e.target;

  CausalConfiguration config;
  std::map<decltype(key(Event{})), std::size_t> index;
  for (const auto& [k, e] : unique) {
    index.emplace(k, config.events.size());
    config.events.push_back(e);
  }
  config.edges.reserve(raw.size());
  for (const auto& e : raw) {
    config.edges.push_back({index.at(key(e.source)), index.at(key(e.target)), e.carrier});
  }
  return config;
}

namespace {

CausalConfiguration rebuild(const CausalConfiguration& config, const std::vector<bool>& keep) {
  std::vector<std::size_t> remap(config.events.size(), SIZE_MAX);
  std::vector<bool> used(config.events.size(), false);
  for (std::size_t i = 0; i < config.edges.size(); ++i) {
    if (!keep[i]) continue;
    used[config.edges[i].source] = true;
    used[config.edges[i].target] = true;
  }
  CausalConfiguration out;
  for (std::size_t e = 0; e < config.events.size(); ++e) {
    if (!used[e]) continue;
    remap[e] = out.events.size();
    out.events.push_back(config.events[e]);
  }
  for (std::size_t i = 0; i < config.edges.size(); ++i) {
    if (!keep[i]) continue;
    const auto& edge = config.edges[i];
    out.edges.push_back({remap[edge.source], remap[edge.target], edge.carrier});
  }
  return out;
}

std::string event_text(const Event& e) {
  if (e.is_init()) return "init#" + std::to_string(e.id) + "@0";
  return e.label + "@" + format_time(e.time);
}

}  // namespace

ConfigurationReport validate_configuration(const CausalConfiguration& config) {
  ConfigurationReport report;
  const std::size_t n = config.events.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> out(n);

  for (const auto& edge : config.edges) {
    if (edge.source >= n || edge.target >= n) {
      report.causes_closed = false;
      report.violations.push_back({Violation::Kind::DanglingEndpoint, {},
                                   "edge endpoint outside the event set"});
      continue;
    }
    const Event& s = config.events[edge.source];
    const Event& t = config.events[edge.target];
    if (edge.source == edge.target) {
      report.acyclic = false;
      report.violations.push_back({Violation::Kind::SelfLoop, {edge.source},
                                   "self-loop on " + event_text(s)});
      continue;
    }
    if (!(s.time < t.time)) {
      report.violations.push_back({Violation::Kind::TimeOrder, {edge.source, edge.target},
                                   event_text(s) + " does not precede " + event_text(t)});
    }
    ++indegree[edge.target];
    out[edge.source].push_back(edge.target);
  }

  for (std::size_t e = 0; e < n; ++e) {
    if (config.events[e].is_init() && indegree[e] > 0) {
      report.violations.push_back({Violation::Kind::InitWithCause, {e},
                                   event_text(config.events[e]) + " has a cause"});
    }
    if (!config.events[e].is_init() && indegree[e] == 0) {
      report.violations.push_back({Violation::Kind::MissingCause, {e},
                                   event_text(config.events[e]) + " has no cause"});
    }
  }

  // Kahn: whatever cannot be peeled off lies on or behind a cycle.
  std::vector<std::size_t> remaining = indegree;
  std::queue<std::size_t> ready;
  for (std::size_t e = 0; e < n; ++e) {
    if (remaining[e] == 0) ready.push(e);
  }
  std::size_t peeled = 0;
  while (!ready.empty()) {
    const std::size_t e = ready.front();
    ready.pop();
    ++peeled;
    for (std::size_t t : out[e]) {
      if (--remaining[t] == 0) ready.push(t);
    }
  }
  if (peeled < n) {
    report.acyclic = false;
    Violation v{Violation::Kind::Cycle, {}, "directed cycle among events"};
    for (std::size_t e = 0; e < n; ++e) {
      if (remaining[e] > 0) v.events.push_back(e);
    }
    report.violations.push_back(std::move(v));
  }
  return report;
}

CausalConfiguration restrict_interval(const CausalConfiguration& config, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("interval needs t_lo < t_hi");
  std::vector<bool> keep(config.edges.size());
  for (std::size_t i = 0; i < config.edges.size(); ++i) {
    const double t = config.events.at(config.edges[i].target).time;
    keep[i] = t_lo < t && t <= t_hi;
  }
  return rebuild(config, keep);
}

CausalConfiguration drop_carriers(const CausalConfiguration& config,
                                  const std::set<std::string>& species) {
  std::vector<bool> keep(config.edges.size());
  for (std::size_t i = 0; i < config.edges.size(); ++i) {
    keep[i] = species.count(config.edges[i].carrier) == 0;
  }
  return rebuild(config, keep);
}

std::string configuration_to_json(const CausalConfiguration& config) {
  nlohmann::ordered_json doc;
  doc["events"] = nlohmann::ordered_json::array();
  for (const auto& e : config.events) {
    doc["events"].push_back({{"id", e.id}, {"label", e.label}, {"time", e.time}});
  }
  doc["edges"] = nlohmann::ordered_json::array();
  doc["carriers"] = nlohmann::ordered_json::array();
  for (const auto& edge : config.edges) {
    doc["edges"].push_back({edge.source, edge.target});
    doc["carriers"].push_back(edge.carrier);
  }
  return doc.dump(1) + "\n";
}

CausalConfiguration configuration_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  CausalConfiguration config;
  for (const auto& e : doc.at("events")) {
    config.events.push_back(
        {e.at("id").get<std::uint64_t>(), e.at("label").get<std::string>(), e.at("time").get<double>()});
  }
  const auto& edges = doc.at("edges");
  const auto carriers = doc.contains("carriers") ? doc.at("carriers") : nlohmann::json::array();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    config.edges.push_back({edges[i].at(0).get<std::size_t>(), edges[i].at(1).get<std::size_t>(),
                            i < carriers.size() ? carriers[i].get<std::string>() : std::string()});
  }
  return config;
}

std::string configuration_to_dot(const CausalConfiguration& config) {
  std::ostringstream out;
  out << "digraph configuration {\n  rankdir=LR;\n";
  for (std::size_t e = 0; e < config.events.size(); ++e) {
    out << "  e" << e << " [label=\"" << event_text(config.events[e]) << "\"];\n";
  }
  for (const auto& edge : config.edges) {
    out << "  e" << edge.source << " -> e" << edge.target << " [label=\"" << edge.carrier
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace fluxtrace
