#ifndef FLUXTRACE_MODEL_HPP
#define FLUXTRACE_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fluxtrace {

/// Label carried by initialization events and by instances present at time 0.
inline constexpr std::string_view kInitLabel = "init";

/// True if `name` is a valid species or reaction identifier:
/// a letter followed by letters, digits or underscores.
bool is_identifier(std::string_view name) noexcept;

/// A named rewrite rule `name: A [+ B] -> P1 + ... + Pk @ rate`.
///
/// The reactant list always has one or two entries and the rate is strictly
/// positive and finite; the constructor throws std::invalid_argument
/// otherwise. Reactant order is significant: products inherit the instance id
/// of the first reactant. Products form a multiset but are kept in the order
/// they were written so that serialization is stable.
class Reaction {
public:
  Reaction(std::string name, std::vector<std::string> reactants,
           std::vector<std::string> products, double rate);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& reactants() const noexcept { return reactants_; }
  const std::vector<std::string>& products() const noexcept { return products_; }
  double rate() const noexcept { return rate_; }

  std::size_t arity() const noexcept { return reactants_.size(); }
  bool is_homodimer() const noexcept {
    return reactants_.size() == 2 && reactants_[0] == reactants_[1];
  }

  /// Number of times `species` occurs among the reactants / products.
  std::size_t consumed(std::string_view species) const noexcept;
  std::size_t produced(std::string_view species) const noexcept;

  friend bool operator==(const Reaction&, const Reaction&) = default;

private:
  std::string name_;
  std::vector<std::string> reactants_;
  std::vector<std::string> products_;
  double rate_;
};

/// A reaction-network model: an initial multiset together with an ordered
/// list of reactions.
///
/// The species set is the sorted union of every species named by the initial
/// state or by a reaction; species declared with a zero initial count are
/// kept so that they survive serialization. Models are immutable once built.
class Model {
public:
  Model() = default;

  /// Throws std::invalid_argument on duplicate reaction names, invalid
  /// species names, or a reaction called `init`.
  Model(std::map<std::string, std::uint64_t> initial, std::vector<Reaction> reactions);

  /// Initial multiset; zero counts are kept only for declared-but-empty species.
  const std::map<std::string, std::uint64_t>& initial() const noexcept { return initial_; }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
  const std::vector<std::string>& species() const noexcept { return species_; }

  std::uint64_t initial_count(std::string_view species) const noexcept;
  std::uint64_t initial_size() const noexcept;

  /// Reaction by name, or nullptr.
  const Reaction* find_reaction(std::string_view name) const noexcept;
  /// Position of the reaction in model order; throws std::out_of_range.
  std::size_t reaction_index(std::string_view name) const;
  bool has_species(std::string_view name) const noexcept;

  /// Copy of this model with a different initial multiset.
  Model with_initial(std::map<std::string, std::uint64_t> initial) const;

  /// Structural equality: same species set, same positive initial counts and
  /// the same reactions in the same order.
  friend bool operator==(const Model& a, const Model& b);

private:
  std::map<std::string, std::uint64_t> initial_;
  std::vector<Reaction> reactions_;
  std::vector<std::string> species_;
};

/// Structured error produced by parse_model. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Parses the line-oriented `.rxn` model language:
///
///     # comment
///     init A * 4
///     r1: A -> P + P @ 1.0
///     r4: B + C -> D @ 1.0
///     r5: D -> @ 0.5            # empty product list
///
/// Reactions keep their textual order and repeated `init` lines for the same
/// species are summed. Throws ParseError.
Model parse_model(std::string_view text);

/// Inverse of parse_model: `parse_model(serialize_model(m)) == m`.
std::string serialize_model(const Model& model);

/// "A + B -> P + P" (no name, no rate).
std::string describe(const Reaction& reaction);

}  // namespace fluxtrace

#endif  // FLUXTRACE_MODEL_HPP
