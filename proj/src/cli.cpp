#include "fluxtrace/cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluxtrace/causality.hpp"
#include "fluxtrace/flux.hpp"
#include "fluxtrace/format.hpp"
#include "fluxtrace/model.hpp"
#include "fluxtrace/report.hpp"
#include "fluxtrace/simulator.hpp"
#include "fluxtrace/trace_io.hpp"

namespace fluxtrace::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Failure : std::runtime_error {
  Failure(int code, const std::string& message) : std::runtime_error(message), code(code) {}
  int code;
};

using Outputs = std::vector<std::pair<fs::path, std::string>>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kIo, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Failure(kIo, "error while reading '" + path + "'");
  return buf.str();
}

// Writes every output or none: a failed write removes what was written.
void commit(const Outputs& outputs) {
  std::vector<fs::path> written;
  auto undo = [&] {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
  };
  for (const auto& [path, content] : outputs) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      undo();
      throw Failure(kIo, "cannot write '" + path.string() + "'");
    }
    written.push_back(path);
    out << content;
    out.close();
    if (!out) {
      undo();
      throw Failure(kIo, "error while writing '" + path.string() + "'");
    }
  }
}

Model load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw Failure(kUsageOrParse, path + ":" + std::to_string(e.line()) + ":" +
                                     std::to_string(e.column()) + ": " + e.detail());
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model;
  std::vector<std::uint64_t> seeds;
  std::optional<double> t_end;
  std::optional<std::uint64_t> max_steps;
  std::optional<double> sample_every;
  std::string out_dir = ".";
};

std::vector<double> sample_grid(double every, double horizon) {
  std::vector<double> times;
  if (!(every > 0.0) || !std::isfinite(every)) {
    throw Failure(kUsageOrParse, "--sample-every must be a positive number");
  }
  const double rows = std::floor(horizon / every) + 1.0;
  if (rows > 1e7) throw Failure(kUsageOrParse, "--sample-every yields more than 10^7 rows");
  for (std::uint64_t k = 0; static_cast<double>(k) < rows; ++k) {
    const double t = static_cast<double>(k) * every;
    if (t > horizon) break;
    times.push_back(t);
  }
  return times;
}

Outputs simulate_one(const Model& model, const SimulateArgs& args, std::uint64_t seed,
                     const fs::path& dir) {
  StopCondition stop{args.t_end, args.max_steps};
  const SimulationRun run = run_simulation(model, stop, seed);

  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["command"] = "simulate";
  manifest["model"] = args.model;
  manifest["seed"] = seed;
  manifest["t_end"] = optional_json(args.t_end);
  manifest["max_steps"] = args.max_steps ? json(*args.max_steps) : json(nullptr);
  manifest["sample_every"] = optional_json(args.sample_every);
  manifest["outputs"] = json::array({"trajectory.trace"});

  Outputs out;
  out.emplace_back(dir / "trajectory.trace", serialize_trace(run.trajectory));
  if (args.sample_every) {
    double horizon = run.horizon;
    if (!std::isfinite(horizon)) horizon = args.t_end ? *args.t_end : last_time(run.trajectory);
    const auto times = sample_grid(*args.sample_every, horizon);
    CountOptions options{model.species(), horizon};
    out.emplace_back(dir / "counts.csv", species_counts(run.trajectory, times, options).to_csv());
    manifest["outputs"].push_back("counts.csv");
  }
  manifest["outputs"].push_back("manifest.json");
  out.emplace_back(dir / "manifest.json", manifest.dump(2) + "\n");
  return out;
}

Outputs plan_simulate(const SimulateArgs& args) {
  if (!args.t_end && !args.max_steps) {
    throw Failure(kUsageOrParse, "simulate needs --t-end or --max-steps");
  }
  if (args.t_end && !(*args.t_end > 0.0)) throw Failure(kUsageOrParse, "--t-end must be positive");
  if (args.seeds.empty()) throw Failure(kUsageOrParse, "simulate needs at least one --seed");
  const Model model = load_model(args.model);

  const bool fan_out = args.seeds.size() > 1;
  std::vector<std::future<Outputs>> runs;
  for (std::uint64_t seed : args.seeds) {
    fs::path dir = args.out_dir;
    if (fan_out) dir /= "seed-" + std::to_string(seed);
    runs.push_back(std::async(std::launch::async, [&model, &args, seed, dir] {
      return simulate_one(model, args, seed, dir);
    }));
  }
  Outputs all;
  for (auto& f : runs) {
    Outputs one = f.get();
    all.insert(all.end(), std::make_move_iterator(one.begin()), std::make_move_iterator(one.end()));
  }
  return all;
}

// -------------------------------------------------------------------- flux

struct Interval {
  double lo;
  double hi;
};

struct FluxArgs {
  std::string model;
  std::string trace;
  std::vector<Interval> intervals;
  std::optional<double> threshold;
  bool net = false;
  bool exclude_init = false;
  std::vector<std::string> untracked;
  bool names = false;
  bool emit_configuration = false;
  std::string out_dir = ".";
};

Interval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  Interval iv{};
  if (colon == std::string::npos || !parse_real(std::string_view(text).substr(0, colon), iv.lo) ||
      !parse_real(std::string_view(text).substr(colon + 1), iv.hi)) {
    throw Failure(kUsageOrParse, "--interval expects LO:HI, got '" + text + "'");
  }
  if (!(iv.lo < iv.hi)) throw Failure(kUsageOrParse, "--interval needs LO < HI, got '" + text + "'");
  return iv;
}

fs::path suffixed(const fs::path& dir, const std::string& stem, const std::string& ext,
                  const std::optional<Interval>& iv) {
  std::string name = stem;
  if (iv) name += "." + format_real(iv->lo) + "-" + format_real(iv->hi);
  return dir / (name + ext);
}

Outputs plan_flux(const FluxArgs& args) {
  if (args.threshold && (!std::isfinite(*args.threshold) || *args.threshold < 0.0)) {
    throw Failure(kUsageOrParse, "--threshold must be a non-negative number");
  }
  const Model model = load_model(args.model);
  const std::string text = read_file(args.trace);
  Trajectory trajectory;
  try {
    trajectory = parse_trace(text, model);
  } catch (const TraceError& e) {
    throw Failure(e.kind() == TraceError::Kind::CausalityViolation ? kCausality : kUsageOrParse,
                  args.trace + ": " + e.what());
  }
  CausalConfiguration config;
  try {
    config = extract_configuration(trajectory);
  } catch (const ReplayError& e) {
    throw Failure(kCausality, args.trace + ": " + e.what());
  }
  if (!args.untracked.empty()) {
    config = drop_carriers(config, {args.untracked.begin(), args.untracked.end()});
  }

  const fs::path dir = args.out_dir;
  const LabelStyle style = args.names ? LabelStyle::Name : LabelStyle::Index;
  const double fraction = args.threshold.value_or(0.0);
  std::vector<std::optional<Interval>> slices;
  if (args.intervals.empty()) slices.emplace_back();
  for (const auto& iv : args.intervals) slices.emplace_back(iv);

  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["command"] = "flux";
  manifest["model"] = args.model;
  manifest["trace"] = args.trace;
  manifest["intervals"] = json::array();
  for (const auto& iv : args.intervals) manifest["intervals"].push_back({iv.lo, iv.hi});
  manifest["threshold"] = optional_json(args.threshold);
  manifest["net"] = args.net;
  manifest["exclude_init"] = args.exclude_init;
  manifest["untracked"] = args.untracked;
  manifest["labels"] = args.names ? "name" : "index";
  manifest["emit_configuration"] = args.emit_configuration;
  manifest["outputs"] = json::array();

  Outputs out;
  auto emit = [&](fs::path path, std::string content) {
    manifest["outputs"].push_back(path.filename().string());
    out.emplace_back(std::move(path), std::move(content));
  };
  for (const auto& slice : slices) {
    const CausalConfiguration part = slice ? restrict_interval(config, slice->lo, slice->hi) : config;
    const FluxConfiguration flux = flux_configuration(part);
    std::optional<std::pair<double, double>> window;
    if (slice) window = std::make_pair(slice->lo, slice->hi);
    const auto counts = reaction_fire_counts(trajectory, model, window);

    std::string dot;
    FluxConfiguration processed;
    if (args.net) {
      const NetFluxGraph net = dominant_pathway(flux, fraction, args.exclude_init);
      dot = emit_dot(net);
      processed = net.as_flux();
    } else {
      processed = threshold_filter(flux, fraction, args.exclude_init);
      dot = emit_dot(processed);
    }
    emit(suffixed(dir, "report", ".txt", slice), render_report(counts, flux, model, style));
    emit(suffixed(dir, "flux", ".json", slice), flux_to_json(flux));
    emit(suffixed(dir, "flux", ".dot", slice), std::move(dot));
    emit(suffixed(dir, "pathway", ".json", slice), flux_to_json(processed));
    if (args.emit_configuration) {
      emit(suffixed(dir, "configuration", ".json", slice), configuration_to_json(part));
      emit(suffixed(dir, "configuration", ".dot", slice), configuration_to_dot(part));
    }
  }
  manifest["outputs"].push_back("manifest.json");
  out.emplace_back(dir / "manifest.json", manifest.dump(2) + "\n");
  return out;
}

// ------------------------------------------------------------------ replay

Outputs plan_replay(const std::string& manifest_path, const std::optional<std::string>& out_dir) {
  const std::string text = read_file(manifest_path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(text);
    const std::string dir =
        out_dir ? *out_dir : fs::path(manifest_path).parent_path().string();
    const std::string target = dir.empty() ? "." : dir;
    const auto command = m.at("command").get<std::string>();
    auto opt_real = [&](const char* key) -> std::optional<double> {
      if (!m.contains(key) || m[key].is_null()) return std::nullopt;
      return m[key].get<double>();
    };
    if (command == "simulate") {
      SimulateArgs a;
      a.model = m.at("model").get<std::string>();
      a.seeds = {m.at("seed").get<std::uint64_t>()};
      a.t_end = opt_real("t_end");
      if (m.contains("max_steps") && !m["max_steps"].is_null()) {
        a.max_steps = m["max_steps"].get<std::uint64_t>();
      }
      a.sample_every = opt_real("sample_every");
      a.out_dir = target;
      return plan_simulate(a);
    }
    if (command == "flux") {
      FluxArgs a;
      a.model = m.at("model").get<std::string>();
      a.trace = m.at("trace").get<std::string>();
      for (const auto& iv : m.at("intervals")) {
        a.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
      }
      a.threshold = opt_real("threshold");
      a.net = m.at("net").get<bool>();
      a.exclude_init = m.at("exclude_init").get<bool>();
      a.untracked = m.at("untracked").get<std::vector<std::string>>();
      a.names = m.at("labels").get<std::string>() == "name";
      a.emit_configuration = m.value("emit_configuration", false);
      a.out_dir = target;
      return plan_flux(a);
    }
    throw Failure(kUsageOrParse, manifest_path + ": unknown command '" + command + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Failure(kUsageOrParse, manifest_path + ": malformed manifest: " + e.what());
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal flux analysis of stochastic reaction-network simulations",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run seeded simulations and write traces");
  simulate->add_option("--model", sim.model, "Model file (.rxn)")->required();
  simulate->add_option("--seed", sim.seeds, "Seed; repeat for concurrent runs")->required();
  simulate->add_option("--t-end", sim.t_end, "Stop time");
  simulate->add_option("--max-steps", sim.max_steps, "Stop after this many steps");
  simulate->add_option("--sample-every", sim.sample_every, "Write species counts every DT");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory");

  FluxArgs fx;
  std::vector<std::string> intervals;
  std::string threshold_text;
  std::string untracked;
  std::string labels = "index";
  auto* flux = app.add_subcommand("flux", "Extract causal flux from a trace");
  flux->add_option("--model", fx.model, "Model file (.rxn)")->required();
  flux->add_option("--trace", fx.trace, "Trace file")->required();
  flux->add_option("--interval", intervals, "LO:HI window over target times; repeatable")
      ->allow_extra_args(false);
  auto* threshold_opt =
      flux->add_option("--threshold", threshold_text, "Drop edges below F times the mean (0.1)")
          ->expected(0, 1);
  flux->add_flag("--net", fx.net, "Cancel opposite-direction fluxes");
  flux->add_flag("--exclude-init", fx.exclude_init, "Leave init edges out of the analysis");
  flux->add_option("--untracked", untracked, "Comma-separated species whose edges are dropped");
  flux->add_option("--labels", labels, "Report labels")->check(CLI::IsMember({"index", "name"}));
  flux->add_flag("--emit-configuration", fx.emit_configuration,
                 "Also write the causal configuration");
  flux->add_option("--out-dir", fx.out_dir, "Output directory");

  std::string manifest;
  std::optional<std::string> replay_dir;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest, "manifest.json")->required();
  replay->add_option("--out-dir", replay_dir, "Output directory (default: the manifest's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrParse;
  }

  try {
    Outputs outputs;
    if (*simulate) {
      outputs = plan_simulate(sim);
    } else if (*flux) {
      for (const auto& iv : intervals) fx.intervals.push_back(parse_interval(iv));
      if (threshold_opt->count() > 0) {
        double f = 0.1;
        if (!threshold_text.empty() && !parse_real(threshold_text, f)) {
          throw Failure(kUsageOrParse, "--threshold expects a number, got '" + threshold_text + "'");
        }
        fx.threshold = f;
      }
      std::stringstream list(untracked);
      for (std::string item; std::getline(list, item, ',');) {
        if (!item.empty()) fx.untracked.push_back(item);
      }
      fx.names = labels == "name";
      outputs = plan_flux(fx);
    } else {
      outputs = plan_replay(manifest, replay_dir);
    }
    commit(outputs);
  } catch (const Failure& e) {
    err << kToolName << ": " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << "\n";
    return kUsageOrParse;
  }
  return kOk;
}

}  // namespace fluxtrace::cli
