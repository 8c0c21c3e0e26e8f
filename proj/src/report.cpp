#include "fluxtrace/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fluxtrace/format.hpp"

namespace fluxtrace {

namespace {

std::string joined_sorted(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

}  // namespace

AnalysisReport build_report(const std::map<std::string, std::uint64_t>& counts,
                            const FluxConfiguration& flux, const Model& model, LabelStyle style) {
  AnalysisReport report;
  const auto& reactions = model.reactions();
  std::vector<std::size_t> order(reactions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto count_of = [&](std::size_t i) {
    auto it = counts.find(reactions[i].name());
    return it == counts.end() ? std::uint64_t{0} : it->second;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return count_of(a) < count_of(b); });

  std::map<std::string, std::size_t> index;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Reaction& r = reactions[order[pos]];
    index[r.name()] = pos + 1;
    report.reactions.push_back({pos + 1, r.name(),
                                joined_sorted(r.reactants()) + "  --> " + joined_sorted(r.products()),
                                count_of(order[pos])});
  }

  // Sort key: init first, then by number or name.
  auto key = [&](const std::string& label) {
    if (label == kInitLabel) return std::make_pair(std::size_t{0}, std::string());
    if (style == LabelStyle::Name) return std::make_pair(std::size_t{1}, label);
    auto it = index.find(label);
    return std::make_pair(it == index.end() ? SIZE_MAX : it->second, label);
  };
  auto text = [&](const std::string& label) {
    if (label == kInitLabel || style == LabelStyle::Name) return label;
    auto it = index.find(label);
    return it == index.end() ? label : std::to_string(it->second);
  };
  std::vector<FluxTriple> triples = flux.triples();
  std::stable_sort(triples.begin(), triples.end(), [&](const FluxTriple& a, const FluxTriple& b) {
    return std::make_pair(key(a.from), key(a.to)) < std::make_pair(key(b.from), key(b.to));
  });
  for (const auto& t : triples) report.dependencies.push_back({text(t.from), text(t.to), t.n});
  return report;
}

std::string render_report(const AnalysisReport& report, LabelStyle style) {
  std::string out = "Reactions:\n----------\n\n";
  for (const auto& r : report.reactions) {
    out += (style == LabelStyle::Name ? r.name : std::to_string(r.index)) + ": " + r.rendering +
           "  fires " + std::to_string(r.count) + " times.\n";
  }
  out += "\n\nExtracted dependencies:\n-----------------------\n\n";
  for (const auto& d : report.dependencies) {
    out += d.source + " ==> " + d.target + "  appears " + std::to_string(d.n) + " times.\n";
  }
  out += "\n==================================\n==================================\n";
  return out;
}

std::string render_report(const std::map<std::string, std::uint64_t>& counts,
                          const FluxConfiguration& flux, const Model& model, LabelStyle style) {
  return render_report(build_report(counts, flux, model, style), style);
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string dot_of(const std::vector<FluxTriple>& triples, const DotOptions& options,
                   const char* graph_name) {
  std::set<std::string> nodes;
  std::uint64_t lo = UINT64_MAX;
  std::uint64_t hi = 0;
  for (const auto& t : triples) {
    nodes.insert(t.from);
    nodes.insert(t.to);
    lo = std::min(lo, t.n);
    hi = std::max(hi, t.n);
  }
  std::vector<std::string> ordered;
  if (nodes.count(std::string(kInitLabel))) ordered.emplace_back(kInitLabel);
  for (const auto& n : nodes) {
    if (n != kInitLabel) ordered.push_back(n);
  }

  std::ostringstream out;
  out << "digraph " << graph_name << " {\n";
  for (const auto& n : ordered) out << "  " << quoted(n) << ";\n";
  std::vector<FluxTriple> edges = triples;
  auto rank = [](const std::string& s) { return std::make_pair(s != kInitLabel, s); };
  std::sort(edges.begin(), edges.end(), [&](const FluxTriple& a, const FluxTriple& b) {
    return std::make_pair(rank(a.from), rank(a.to)) < std::make_pair(rank(b.from), rank(b.to));
  });
  for (const auto& t : edges) {
    double width = options.max_penwidth;
    if (hi > lo) {
      const double f = static_cast<double>(t.n - lo) / static_cast<double>(hi - lo);
      width = options.min_penwidth + f * (options.max_penwidth - options.min_penwidth);
    }
    out << "  " << quoted(t.from) << " -> " << quoted(t.to) << " [label=\"" << t.n
        << "\", penwidth=" << format_fixed(width, 3) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string emit_dot(const FluxConfiguration& flux, const DotOptions& options) {
  return dot_of(flux.triples(), options, "flux");
}

std::string emit_dot(const NetFluxGraph& net, const DotOptions& options) {
  return dot_of(net.triples(), options, "net_flux");
}

}  // namespace fluxtrace
