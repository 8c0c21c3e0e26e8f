// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fluxtrace/causality.hpp"
#include "fluxtrace/flux.hpp"
#include "fluxtrace/model.hpp"
#include "fluxtrace/report.hpp"
#include "fluxtrace/simulator.hpp"
#include "fluxtrace/trace_io.hpp"
#include "generators.hpp"
#include "pathway.hpp"

using namespace fluxtrace;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  double budget_s;
  std::function<Outcome()> check;
};

// Collects failures; the first few are kept for the detail line.
class Tally {
public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  void note(const std::string& s) { extra_ << (extra_.tellp() > 0 ? "; " : "") << s; }
  Outcome done() const {
    std::string d = extra_.str();
    if (failures_ > 0) d = std::to_string(failures_) + " failure(s): " + notes_.str() + (d.empty() ? "" : " | " + d);
    return {failures_ == 0, d};
  }

private:
  int failures_ = 0;
  std::ostringstream notes_;
  std::ostringstream extra_;
};

Model load(const std::string& name) { return parse_model(fixtures::model_text(name)); }

const std::set<std::string> kEnzymes{"E", "A"};
const std::vector<std::string> kRho{"R", "RD", "RT", "RDE", "RE", "RTE", "RTA", "RA", "RDA"};

double mean_rt(const Trajectory& t, double horizon, double lo, double hi, double dt) {
  std::vector<double> at;
  for (int k = 0; lo + k * dt <= hi + 1e-12; ++k) at.push_back(lo + k * dt);
  const CountTable c = species_counts(t, at, {{"RT"}, horizon});
  double sum = 0.0;
  for (std::size_t i = 0; i < at.size(); ++i) sum += double(c.at(i, "RT"));
  return sum / double(at.size()) / 1000.0;
}

struct PathwayRun {
  pathway::Verdict verdict;
  std::uint64_t rte_rt = 0;
  double rt = 0.0;
};

PathwayRun pathway_run(const Model& m, std::uint64_t seed, double lo, double hi) {
  const SimulationRun run = run_simulation(m, {hi, std::nullopt}, seed);
  const CausalConfiguration rho =
      restrict_interval(drop_carriers(extract_configuration(run.trajectory), kEnzymes), lo, hi);
  PathwayRun out;
  out.verdict = pathway::analyse(dominant_pathway(flux_configuration(rho), 0.1, true).triples(),
                                 pathway::by_model(m));
  out.rte_rt = reaction_fire_counts(run.trajectory, m, std::pair{lo, hi}).at("RTE_RT");
  out.rt = mean_rt(run.trajectory, run.horizon, lo, hi, (hi - lo) / 50.0);
  return out;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

Outcome golden_diamond() {
  Tally t;
  const Model m = load("diamond.rxn");
  const FluxConfiguration f =
      flux_configuration(extract_configuration(parse_trace(fixtures::model_text("fig8.trace"), m)));
  const FluxConfiguration want{
      {"init", "r1", 4}, {"r1", "r2", 5}, {"r1", "r3", 3}, {"r2", "r4", 3}, {"r3", "r4", 3}};
  t.expect(f == want, "flux differs: " + flux_to_json(f));
  return t.done();
}

Outcome mass_balance_audit() {
  Tally t;
  // a = R->RD, b = R->RT, c = RD->R, d = RT->R, e = RT->RD
  const Model m({{"R", 1000}}, {Reaction("a", {"R"}, {"RD"}, 1.65), Reaction("b", {"R"}, {"RT"}, 50),
                                Reaction("c", {"RD"}, {"R"}, 0.02), Reaction("d", {"RT"}, {"R"}, 0.02),
                                Reaction("e", {"RT"}, {"RD"}, 0.02)});
  const FluxConfiguration f{{"init", "a", 44}, {"c", "a", 35},   {"d", "a", 52},  {"init", "b", 956},
                            {"d", "b", 1560},  {"c", "b", 1175}, {"b", "e", 1583}, {"b", "d", 1612},
                            {"e", "c", 1118},  {"a", "c", 93}};
  const auto kept = retained_products(f, m);
  const auto mb = mass_balance(f, m);
  t.expect(kept.at("e") == 465, "RT->RD retains " + std::to_string(kept.at("e")));
  t.expect(kept.at("a") == 38, "R->RD retains " + std::to_string(kept.at("a")));
  t.expect(mb.at("RD") == 503, "RD " + std::to_string(mb.at("RD")));
  t.expect(mb.at("RT") == 496, "RT " + std::to_string(mb.at("RT")));
  const std::int64_t r = std::int64_t(m.initial_count("R")) + mb.at("R");
  t.expect(r == 1, "R " + std::to_string(r));
  t.expect(mb.at("RD") + mb.at("RT") + r == 1000, "total is not 1000");
  std::int64_t retained = 0;
  for (const auto& [name, n] : kept) retained += n;
  t.expect(retained == 1000, "retained products sum to " + std::to_string(retained));
  return t.done();
}

Outcome zero_sum() {
  Tally t;
  const Model m = load("rho_gtp_reduced.rxn");
  std::mt19937_64 g(140);
  std::size_t slices = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SimulationRun run = run_simulation(m, {140.0, std::nullopt}, seed);
    const CausalConfiguration c = extract_configuration(run.trajectory);
    std::vector<std::vector<double>> slicings{{0.0, 140.0}, {0.0, 70.0, 140.0}};
    std::vector<double> even;
    for (int k = 0; k <= 7; ++k) even.push_back(20.0 * k);
    slicings.push_back(even);
    std::vector<double> random{0.0, 140.0};
    for (int k = 0; k < 4; ++k) random.push_back(std::uniform_real_distribution<double>(0.0, 140.0)(g));
    std::sort(random.begin(), random.end());
    slicings.push_back(random);

    for (const auto& cuts : slicings) {
      const CountTable counts = species_counts(run.trajectory, cuts, {{"R", "RD", "RT"}, run.horizon});
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (!(cuts[k] < cuts[k + 1])) continue;
        const auto mb = mass_balance(flux_configuration(restrict_interval(c, cuts[k], cuts[k + 1])), m);
        const std::int64_t sum = mb.at("R") + mb.at("RD") + mb.at("RT");
        t.expect(sum == 0, "seed " + std::to_string(seed) + " sums to " + std::to_string(sum));
        for (const char* s : {"R", "RD", "RT"}) {
          const std::int64_t delta = std::int64_t(counts.at(k + 1, s)) - std::int64_t(counts.at(k, s));
          t.expect(mb.at(s) == delta, "seed " + std::to_string(seed) + " " + s + " balance " +
                                          std::to_string(mb.at(s)) + " vs count change " +
                                          std::to_string(delta));
        }
        ++slices;
      }
    }
  }
  t.note(std::to_string(slices) + " slices over 50 seeds");
  return t.done();
}

Outcome steady_split() {
  Tally t;
  const Model m = load("rho_gtp_reduced.rxn");
  int passed = 0;
  std::ostringstream seen;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SimulationRun run = run_simulation(m, {140.0, std::nullopt}, seed);
    const CountTable c = species_counts(run.trajectory, std::vector<double>{140.0}, {{"R", "RD", "RT"}, run.horizon});
    const auto rd = c.at(0, "RD"), rt = c.at(0, "RT"), r = c.at(0, "R");
    seen << (seed > 1 ? " " : "") << rd << "/" << rt << "/" << r;
    passed += (rd >= 450 && rd <= 550 && rt >= 450 && rt <= 550 && r <= 10);
  }
  t.expect(passed >= 3, std::to_string(passed) + " of 5 seeds in range");
  t.note("RD/RT/R at t=140: " + seen.str());
  return t.done();
}

Outcome high_activity() {
  Tally t;
  const Model m = load("rho_gtp.rxn");
  int passed = 0;
  std::ostringstream seen;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SimulationRun run = run_simulation(m, {4.0, std::nullopt}, seed);
    const double rt = mean_rt(run.trajectory, run.horizon, 2.0, 4.0, 0.01);
    seen << (seed > 1 ? " " : "") << fixed(rt);
    passed += std::abs(rt - 0.8) <= 0.1;
  }
  t.expect(passed >= 3, std::to_string(passed) + " of 5 seeds within 0.8 +- 0.1");
  t.note("mean RT/R0 over [2,4]: " + seen.str());
  return t.done();
}

Outcome dominant() {
  Tally t;
  const Model m = load("rho_gtp.rxn");
  int strict = 0;
  int magnitude = 0;
  std::ostringstream seen;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PathwayRun p = pathway_run(m, seed, 2.0, 2.5);
    strict += p.verdict.strict();
    magnitude += p.rte_rt * 3 >= 2240 && p.rte_rt <= 3 * 2240;
    seen << (seed > 1 ? "; " : "") << p.verdict.describe() << ", RTE->RT " << p.rte_rt;
  }
  t.expect(strict >= 4, std::to_string(strict) + " of 5 seeds give exactly the cycle");
  t.expect(magnitude >= 4, std::to_string(magnitude) + " of 5 seeds within a factor 3 of 2240");
  t.note(seen.str());
  return t.done();
}

Outcome turnover() {
  Tally t;
  const Model base = load("rho_gtp.rxn");
  struct Regime {
    std::uint64_t a0;
    double lo, hi;
  };
  std::vector<double> activity;
  std::ostringstream seen;
  for (const Regime& r : {Regime{1, 2.0, 2.5}, Regime{10, 1.7, 1.8}, Regime{100, 0.3, 0.4}}) {
    const Model m = base.with_initial({{"R", 1000}, {"E", 776}, {"A", r.a0}});
    int shape = 0;
    double rt = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const PathwayRun p = pathway_run(m, seed, r.lo, r.hi);
      shape += p.verdict.contains_expected();
      rt += p.rt / 5.0;
    }
    t.expect(shape >= 3, "A0=" + std::to_string(r.a0) + ": cycle in " + std::to_string(shape) + " of 5");
    activity.push_back(rt);
    seen << (r.a0 > 1 ? ", " : "") << "A0=" << r.a0 << " RT " << fixed(rt) << " cycle " << shape << "/5";
  }
  t.expect(activity[0] > activity[1] && activity[1] > activity[2], "RT activity not decreasing");
  t.note(seen.str());
  return t.done();
}

bool unambiguous(const Model& m) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto& rs = m.reactions();
  for (std::size_t a = 0; a < rs.size(); ++a) {
    for (std::size_t b = a + 1; b < rs.size(); ++b) {
      if (sorted(rs[a].reactants()) == sorted(rs[b].reactants()) &&
          sorted(rs[a].products()) == sorted(rs[b].products())) {
        return false;
      }
    }
  }
  return true;
}

Outcome properties() {
  Tally t;
  std::mt19937_64 g(8);
  std::size_t traces = 0;
  for (int i = 0; i < 100; ++i) {
    const Model m = gen::random_model(g);
    const std::uint64_t seed = g();
    const std::string tag = "model " + std::to_string(i);
    t.expect(parse_model(serialize_model(m)) == m, tag + ": model DSL round-trip");

    const Trajectory tr = simulate(m, {10.0, 80}, seed);
    const std::string text = serialize_trace(tr);
    t.expect(text == serialize_trace(simulate(m, {10.0, 80}, seed)), tag + ": trace not deterministic");
    if (unambiguous(m)) {
      t.expect(parse_trace(text, m) == tr, tag + ": trace round-trip");
      ++traces;
    }

    const CausalConfiguration c = extract_configuration(tr);
    t.expect(validate_configuration(c).valid(), tag + ": configuration invalid");
    for (const auto& e : c.edges) {
      t.expect(c.events[e.source].time < c.events[e.target].time, tag + ": edge against time");
    }
    const FluxConfiguration f = flux_configuration(c);
    t.expect(f.total() == c.edges.size(), tag + ": weights do not sum to edge count");
    t.expect(flux_from_json(flux_to_json(f)) == f, tag + ": flux JSON round-trip");
    t.expect(configuration_to_json(configuration_from_json(configuration_to_json(c))) ==
                 configuration_to_json(c),
             tag + ": configuration JSON round-trip");
    t.expect(render_report(reaction_fire_counts(tr, m), f, m) ==
                 render_report(reaction_fire_counts(tr, m), flux_configuration(extract_configuration(tr)), m),
             tag + ": report not deterministic");

    if (tr.steps.empty()) continue;
    const double end = last_time(tr);
    std::vector<double> cuts{0.0, end};
    for (int k = 0; k < 3; ++k) cuts.push_back(std::uniform_real_distribution<double>(0.0, end)(g));
    std::sort(cuts.begin(), cuts.end());
    FluxConfiguration sum;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (!(cuts[k] < cuts[k + 1])) continue;
      for (const auto& x : flux_configuration(restrict_interval(c, cuts[k], cuts[k + 1])).triples()) {
        sum.add(x.from, x.to, x.n);
      }
    }
    t.expect(sum == f, tag + ": interval slices do not add up");
  }
  t.note(std::to_string(traces) + " trace round-trips");
  return t.done();
}

Outcome oracle_equivalence() {
  Tally t;
  std::mt19937_64 g(9);
  int unique = 0;
  for (int i = 0; i < 1000; ++i) {
    const Model m = gen::random_model(g);
    const Trajectory tr = simulate(m, {20.0, 6}, g());
    const auto admitted = gen::oracle_configurations(tr, m);
    t.expect(admitted.count(gen::as_bag(extract_configuration(tr))) == 1,
             "trajectory " + std::to_string(i) + " not admitted by the recursion");
    unique += admitted.size() == 1;
  }
  t.note(std::to_string(unique) + " of 1000 with a unique configuration");
  return t.done();
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "golden diamond pipeline", 1.0, golden_diamond},
      {2, "mass-balance audit", 1.0, mass_balance_audit},
      {3, "closed-system zero sum", 60.0, zero_sum},
      {4, "reduced model steady split", 30.0, steady_split},
      {5, "high-activity regime", 120.0, high_activity},
      {6, "dominant pathway extraction", 120.0, dominant},
      {7, "turnover trend", 300.0, turnover},
      {8, "property suites", 60.0, properties},
      {9, "oracle equivalence", 30.0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += " (over the " + fixed(c.budget_s, 0) + " s budget)";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.number << ". " << c.title << " (" << fixed(secs, 2)
              << " s)" << (o.detail.empty() ? "" : ": " + o.detail) << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
