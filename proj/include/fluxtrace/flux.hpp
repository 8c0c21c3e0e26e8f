#ifndef FLUXTRACE_FLUX_HPP
#define FLUXTRACE_FLUX_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fluxtrace/causality.hpp"
#include "fluxtrace/model.hpp"
#include "fluxtrace/simulator.hpp"

namespace fluxtrace {

struct FluxTriple {
  std::string from;
  std::string to;
  std::uint64_t n = 0;

  friend bool operator==(const FluxTriple&, const FluxTriple&) = default;
};

using LabelPair = std::pair<std::string, std::string>;

/// Weighted label graph: at most one triple per ordered (p, q), weights >= 1.
class FluxConfiguration {
public:
  FluxConfiguration() = default;
  FluxConfiguration(std::initializer_list<FluxTriple> triples);

  /// Adds `n` to the weight of (from, to); a zero `n` is a no-op.
  void add(const std::string& from, const std::string& to, std::uint64_t n = 1);

  std::uint64_t weight(const std::string& from, const std::string& to) const;
  const std::map<LabelPair, std::uint64_t>& weights() const noexcept { return weights_; }
  /// Triples sorted by (from, to).
  std::vector<FluxTriple> triples() const;

  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }
  std::uint64_t total() const noexcept;

  friend bool operator==(const FluxConfiguration&, const FluxConfiguration&) = default;

private:
  std::map<LabelPair, std::uint64_t> weights_;
};

/// Opposite-direction weights cancelled: for each unordered pair only the
/// dominant direction is stored, carrying the positive difference.
class NetFluxGraph {
public:
  std::uint64_t weight(const std::string& from, const std::string& to) const;
  const std::map<LabelPair, std::uint64_t>& weights() const noexcept { return weights_; }
  std::vector<FluxTriple> triples() const;
  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }

  /// The same triples viewed as a plain flux configuration.
  FluxConfiguration as_flux() const;

  friend bool operator==(const NetFluxGraph&, const NetFluxGraph&) = default;

private:
  friend NetFluxGraph net_flux(const FluxConfiguration&);
  std::map<LabelPair, std::uint64_t> weights_;
};

/// Merges events by label, counting the edges that collapse onto each pair.
FluxConfiguration flux_configuration(const CausalConfiguration& config);

/// m = n(p,q) - n(q,p), kept in the positive direction and dropped when zero.
/// Self-loops pass through unchanged.
NetFluxGraph net_flux(const FluxConfiguration& flux);
inline NetFluxGraph net_flux(const NetFluxGraph& net) { return net; }

/// fraction times the mean weight, the mean taken over the triples present
/// (init-sourced triples left out when `exclude_init`). Zero for an empty set.
double threshold_value(const FluxConfiguration& flux, double fraction, bool exclude_init);

/// Keeps triples with n >= threshold_value(...). Init-sourced triples are
/// dropped from the result as well when `exclude_init`.
/// Throws std::invalid_argument for a negative or non-finite fraction.
FluxConfiguration threshold_filter(const FluxConfiguration& flux, double fraction,
                                   bool exclude_init);

/// The pathway view: the threshold is computed on the raw weights, then
/// opposite directions are cancelled and the net edges below the threshold
/// are removed. Init-sourced edges are removed too when `exclude_init`.
NetFluxGraph dominant_pathway(const FluxConfiguration& flux, double fraction, bool exclude_init);

/// Raised when firing counts cannot be recovered from a flux configuration.
class InconsistentFlux : public std::runtime_error {
public:
  explicit InconsistentFlux(const std::string& message) : std::runtime_error(message) {}
};

/// fires(r) = (sum of incoming weights of r) / arity(r). Every model reaction
/// appears. Throws InconsistentFlux on an unknown label or a remainder.
std::map<std::string, std::uint64_t> flux_fire_counts(const FluxConfiguration& flux,
                                                      const Model& model);

/// Net production per species implied by flux_fire_counts; every model
/// species appears. Initial instances are not counted as production.
std::map<std::string, std::int64_t> mass_balance(const FluxConfiguration& flux, const Model& model);

/// Per reaction, products made and not consumed within the flux:
/// fires(r) * |products(r)| - (sum of outgoing weights of r).
std::map<std::string, std::int64_t> retained_products(const FluxConfiguration& flux,
                                                      const Model& model);

/// Steps per reaction, restricted to timestamps in (lo, hi] if given.
/// Every model reaction appears.
std::map<std::string, std::uint64_t> reaction_fire_counts(
    const Trajectory& trajectory, const Model& model,
    std::optional<std::pair<double, double>> interval = std::nullopt);

/// `[{"from":p,"to":q,"n":n},...]`, sorted by (from, to).
std::string flux_to_json(const FluxConfiguration& flux);
/// Throws std::invalid_argument on malformed input, zero weights or
/// duplicate pairs.
FluxConfiguration flux_from_json(const std::string& text);

}  // namespace fluxtrace

#endif  // FLUXTRACE_FLUX_HPP
