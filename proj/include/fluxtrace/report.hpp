#ifndef FLUXTRACE_REPORT_HPP
#define FLUXTRACE_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fluxtrace/flux.hpp"
#include "fluxtrace/model.hpp"

namespace fluxtrace {

enum class LabelStyle {
  Index,  // positional numbers, as in the printed analysis output
  Name,   // reaction names from the model
};

struct ReportReaction {
  std::size_t index = 0;  // 1-based
  std::string name;
  std::string rendering;  // "A R  --> RA"
  std::uint64_t count = 0;
};

struct ReportDependency {
  std::string source;  // index, name, or "init"
  std::string target;
  std::uint64_t n = 0;
};

struct AnalysisReport {
  std::vector<ReportReaction> reactions;
  std::vector<ReportDependency> dependencies;
};

/// Numbers the reactions by ascending fire count (ties in model order) and
/// lists the flux triples in that numbering, sorted by (source, target) with
/// init first. Missing counts are taken as zero.
AnalysisReport build_report(const std::map<std::string, std::uint64_t>& counts,
                            const FluxConfiguration& flux, const Model& model,
                            LabelStyle style = LabelStyle::Index);

/// Text layout:
///
///     Reactions:
///     ----------
///
///     1: A R  --> RA  fires 0 times.
///
///
///     Extracted dependencies:
///     -----------------------
///
///     22 ==> 23  appears 2093 times.
///
///     ==================================
///     ==================================
std::string render_report(const AnalysisReport& report, LabelStyle style = LabelStyle::Index);
std::string render_report(const std::map<std::string, std::uint64_t>& counts,
                          const FluxConfiguration& flux, const Model& model,
                          LabelStyle style = LabelStyle::Index);

struct DotOptions {
  double min_penwidth = 1.0;
  double max_penwidth = 8.0;
};

/// Digraph with one node per label (init first, then sorted) and one edge per
/// triple, labelled with its weight. Penwidth interpolates linearly from
/// min_penwidth at the smallest weight to max_penwidth at the largest.
std::string emit_dot(const FluxConfiguration& flux, const DotOptions& options = {});
std::string emit_dot(const NetFluxGraph& net, const DotOptions& options = {});

}  // namespace fluxtrace

#endif  // FLUXTRACE_REPORT_HPP
