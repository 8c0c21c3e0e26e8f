#include "fluxtrace/flux.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace fluxtrace {

FluxConfiguration::FluxConfiguration(std::initializer_list<FluxTriple> triples) {
  for (const auto& t : triples) add(t.from, t.to, t.n);
}

void FluxConfiguration::add(const std::string& from, const std::string& to, std::uint64_t n) {
  if (n == 0) return;
  weights_[{from, to}] += n;
}

namespace {

std::uint64_t lookup(const std::map<LabelPair, std::uint64_t>& w, const std::string& from,
                     const std::string& to) {
  auto it = w.find({from, to});
  return it == w.end() ? 0 : it->second;
}

std::vector<FluxTriple> listing(const std::map<LabelPair, std::uint64_t>& w) {
  std::vector<FluxTriple> out;
  out.reserve(w.size());
  for (const auto& [k, n] : w) out.push_back({k.first, k.second, n});
  return out;
}

bool from_init(const LabelPair& k) { return k.first == kInitLabel; }

}  // namespace

std::uint64_t FluxConfiguration::weight(const std::string& from, const std::string& to) const {
  return lookup(weights_, from, to);
}

std::vector<FluxTriple> FluxConfiguration::triples() const { return listing(weights_); }

std::uint64_t FluxConfiguration::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [k, n] : weights_) sum += n;
  return sum;
}

std::uint64_t NetFluxGraph::weight(const std::string& from, const std::string& to) const {
  return lookup(weights_, from, to);
}

std::vector<FluxTriple> NetFluxGraph::triples() const { return listing(weights_); }

FluxConfiguration NetFluxGraph::as_flux() const {
  FluxConfiguration out;
  for (const auto& [k, n] : weights_) out.add(k.first, k.second, n);
  return out;
}

FluxConfiguration flux_configuration(const CausalConfiguration& config) {
  FluxConfiguration out;
  for (const auto& edge : config.edges) {
    out.add(config.events.at(edge.source).label, config.events.at(edge.target).label);
  }
  return out;
}

NetFluxGraph net_flux(const FluxConfiguration& flux) {
  NetFluxGraph out;
  for (const auto& [k, n] : flux.weights()) {
    if (k.first == k.second) {
      out.weights_.emplace(k, n);
      continue;
    }
    const std::uint64_t back = flux.weight(k.second, k.first);
    if (n > back) out.weights_.emplace(k, n - back);
  }
  return out;
}

double threshold_value(const FluxConfiguration& flux, double fraction, bool exclude_init) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [k, n] : flux.weights()) {
    if (exclude_init && from_init(k)) continue;
    sum += static_cast<double>(n);
    ++count;
  }
  return count == 0 ? 0.0 : fraction * (sum / static_cast<double>(count));
}

namespace {

void check_fraction(double fraction) {
  if (!std::isfinite(fraction) || fraction < 0.0) {
    throw std::invalid_argument("threshold fraction must be a finite non-negative number");
  }
}

}  // namespace

FluxConfiguration threshold_filter(const FluxConfiguration& flux, double fraction,
                                   bool exclude_init) {
  check_fraction(fraction);
  const double t = threshold_value(flux, fraction, exclude_init);
  FluxConfiguration out;
  for (const auto& [k, n] : flux.weights()) {
    if (exclude_init && from_init(k)) continue;
    if (static_cast<double>(n) >= t) out.add(k.first, k.second, n);
  }
  return out;
}

NetFluxGraph dominant_pathway(const FluxConfiguration& flux, double fraction, bool exclude_init) {
  check_fraction(fraction);
  const double t = threshold_value(flux, fraction, exclude_init);
  const NetFluxGraph net = net_flux(flux);
  FluxConfiguration kept;
  for (const auto& [k, n] : net.weights()) {
    if (exclude_init && from_init(k)) continue;
    if (static_cast<double>(n) >= t) kept.add(k.first, k.second, n);
  }
  return net_flux(kept);
}

std::map<std::string, std::uint64_t> flux_fire_counts(const FluxConfiguration& flux,
                                                      const Model& model) {
  std::map<std::string, std::uint64_t> incoming;
  for (const auto& r : model.reactions()) incoming[r.name()] = 0;
  for (const auto& [k, n] : flux.weights()) {
    for (const auto* label : {&k.first, &k.second}) {
      if (*label != kInitLabel && !model.find_reaction(*label)) {
        throw InconsistentFlux("inconsistent flux configuration: unknown reaction '" + *label + "'");
      }
    }
    if (k.second == kInitLabel) {
      throw InconsistentFlux("inconsistent flux configuration: edge into init");
    }
    incoming[k.second] += n;
  }
  std::map<std::string, std::uint64_t> fires;
  for (const auto& r : model.reactions()) {
    const std::uint64_t in = incoming[r.name()];
    if (in % r.arity() != 0) {
      throw InconsistentFlux("inconsistent flux configuration: reaction '" + r.name() + "' has " +
                             std::to_string(in) + " incoming edges, not a multiple of " +
                             std::to_string(r.arity()));
    }
    fires[r.name()] = in / r.arity();
  }
  return fires;
}

std::map<std::string, std::int64_t> mass_balance(const FluxConfiguration& flux, const Model& model) {
  const auto fires = flux_fire_counts(flux, model);
  std::map<std::string, std::int64_t> out;
  for (const auto& s : model.species()) out[s] = 0;
  for (const auto& r : model.reactions()) {
    const auto f = static_cast<std::int64_t>(fires.at(r.name()));
    for (const auto& s : r.reactants()) out[s] -= f;
    for (const auto& s : r.products()) out[s] += f;
  }
  return out;
}

std::map<std::string, std::int64_t> retained_products(const FluxConfiguration& flux,
                                                      const Model& model) {
  const auto fires = flux_fire_counts(flux, model);
  std::map<std::string, std::int64_t> out;
  for (const auto& r : model.reactions()) {
    out[r.name()] =
        static_cast<std::int64_t>(fires.at(r.name()) * r.products().size());
  }
  for (const auto& [k, n] : flux.weights()) {
    if (k.first != kInitLabel) out[k.first] -= static_cast<std::int64_t>(n);
  }
  return out;
}

std::map<std::string, std::uint64_t> reaction_fire_counts(
    const Trajectory& trajectory, const Model& model,
    std::optional<std::pair<double, double>> interval) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& r : model.reactions()) out[r.name()] = 0;
  for (const auto& step : trajectory.steps) {
    if (interval && !(interval->first < step.time && step.time <= interval->second)) continue;
    ++out[step.reaction];
  }
  return out;
}

std::string flux_to_json(const FluxConfiguration& flux) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& t : flux.triples()) {
    doc.push_back({{"from", t.from}, {"to", t.to}, {"n", t.n}});
  }
  return doc.dump(1) + "\n";
}

FluxConfiguration flux_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("flux JSON: ") + e.what());
  }
  if (!doc.is_array()) throw std::invalid_argument("flux JSON: expected an array");
  FluxConfiguration out;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("from") || !item.contains("to") ||
        !item.contains("n") || !item["from"].is_string() || !item["to"].is_string() ||
        !item["n"].is_number_unsigned()) {
      throw std::invalid_argument("flux JSON: each entry needs string from/to and unsigned n");
    }
    const auto from = item["from"].get<std::string>();
    const auto to = item["to"].get<std::string>();
    const auto n = item["n"].get<std::uint64_t>();
    if (n == 0) throw std::invalid_argument("flux JSON: zero weight for " + from + " -> " + to);
    if (out.weight(from, to) != 0) {
      throw std::invalid_argument("flux JSON: duplicate pair " + from + " -> " + to);
    }
    out.add(from, to, n);
  }
  return out;
}

}  // namespace fluxtrace
