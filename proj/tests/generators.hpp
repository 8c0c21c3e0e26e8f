// Random inputs for the property suites.
#ifndef FLUXTRACE_TESTS_GENERATORS_HPP
#define FLUXTRACE_TESTS_GENERATORS_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fluxtrace/causality.hpp"
#include "fluxtrace/model.hpp"
#include "fluxtrace/simulator.hpp"
#include "mu_oracle.hpp"

namespace gen {

struct ModelShape {
  int max_species = 4;
  int max_reactions = 4;
  int max_products = 3;
  int max_initial = 3;
};

inline int uniform(std::mt19937_64& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline fluxtrace::Model random_model(std::mt19937_64& g, const ModelShape& shape = {}) {
  const int n_species = uniform(g, 1, shape.max_species);
  std::vector<std::string> species;
  for (int i = 0; i < n_species; ++i) species.push_back("S" + std::to_string(i));
  auto pick = [&] { return species[uniform(g, 0, n_species - 1)]; };

  std::map<std::string, std::uint64_t> initial;
  for (const auto& s : species) initial[s] = static_cast<std::uint64_t>(uniform(g, 0, shape.max_initial));
  initial[pick()] += 1;

  std::vector<fluxtrace::Reaction> reactions;
  const int n_reactions = uniform(g, 1, shape.max_reactions);
  for (int r = 0; r < n_reactions; ++r) {
    std::vector<std::string> lhs{pick()};
    if (uniform(g, 0, 1) == 1) lhs.push_back(pick());
    std::vector<std::string> rhs;
    const int k = uniform(g, 0, shape.max_products);
    for (int i = 0; i < k; ++i) rhs.push_back(pick());
    const double rate = std::uniform_real_distribution<double>(0.25, 4.0)(g);
    reactions.emplace_back("r" + std::to_string(r + 1), lhs, rhs, rate);
  }
  return fluxtrace::Model(initial, reactions);
}

inline std::vector<oracle::Tok> tokens(const std::vector<fluxtrace::SpeciesInstance>& side) {
  std::vector<oracle::Tok> out;
  for (const auto& i : side) out.push_back({i.species, i.id});
  return out;
}

inline std::vector<oracle::Rule> rules(const fluxtrace::Model& model) {
  std::vector<oracle::Rule> out;
  for (const auto& r : model.reactions()) out.push_back({r.name(), r.reactants(), r.products()});
  return out;
}

inline std::set<oracle::Bag> oracle_configurations(const fluxtrace::Trajectory& traj,
                                                   const fluxtrace::Model& model) {
  std::vector<oracle::Step> steps;
  for (const auto& s : traj.steps) steps.push_back({s.time, tokens(s.consumed), tokens(s.produced)});
  return oracle::configurations(tokens(traj.initial_state.instances()), steps, rules(model));
}

inline oracle::Bag as_bag(const fluxtrace::CausalConfiguration& config) {
  oracle::Bag out;
  for (const auto& e : config.edges) {
    const auto& s = config.events.at(e.source);
    const auto& t = config.events.at(e.target);
    out.push_back({{s.id, s.label, s.time}, {t.id, t.label, t.time}});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gen

namespace fixtures {

inline std::string models_dir() { return FLUXTRACE_MODELS_DIR; }

inline std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string model_text(const std::string& name) { return read(models_dir() + "/" + name); }

}  // namespace fixtures

#endif  // FLUXTRACE_TESTS_GENERATORS_HPP
