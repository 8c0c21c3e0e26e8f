#ifndef FLUXTRACE_TRACE_IO_HPP
#define FLUXTRACE_TRACE_IO_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fluxtrace/model.hpp"
#include "fluxtrace/simulator.hpp"

namespace fluxtrace {

/// Failure while reading a `.trace` file. `line()` is 1-based.
class TraceError : public std::runtime_error {
public:
  enum class Kind {
    Syntax,
    NoMatchingReaction,
    AmbiguousReaction,
    NonIncreasingTime,
    CausalityViolation,
  };

  TraceError(Kind kind, std::size_t line, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

private:
  Kind kind_;
  std::size_t line_;
};

/// Reads the textual trace format
///
///     0. --> A(4) A(3) A(2) A(1)
///     0.362742117504 A(4)  --> P(4) P(4)
///     2.09975124488 B(4) C(1)  --> D(4)
///
/// The first non-blank line declares Z0 (time 0, nothing consumed). Every
/// later line is matched to the single model reaction whose reactant and
/// product species multisets equal the line's; origins and birth times are
/// rebuilt by forward replay, taking the oldest instance when several share
/// a species and id.
Trajectory parse_trace(std::string_view text, const Model& model);

/// Writes the initialization line and one line per step. Tokens on each side
/// are sorted by species then id; times use at least 12 significant digits
/// and always read back exactly.
std::string serialize_trace(const Trajectory& trajectory);

}  // namespace fluxtrace

#endif  // FLUXTRACE_TRACE_IO_HPP
