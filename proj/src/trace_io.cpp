#include "fluxtrace/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <vector>

#include "fluxtrace/format.hpp"

namespace fluxtrace {

TraceError::TraceError(Kind kind, std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), kind_(kind), line_(line) {}

namespace {

struct Token {
  std::string species;
  std::uint64_t id;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == '\r')) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Token parse_token(std::string_view text, std::size_t line) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw TraceError(TraceError::Kind::Syntax, line,
                     "malformed token '" + std::string(text) + "', expected Name(id)");
  }
  std::string_view name = text.substr(0, open);
  std::string_view digits = text.substr(open + 1, text.size() - open - 2);
  if (!is_identifier(name)) {
    throw TraceError(TraceError::Kind::Syntax, line, "invalid species name in '" + std::string(text) + "'");
  }
  std::uint64_t id = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
  if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size() || id == 0) {
    throw TraceError(TraceError::Kind::Syntax, line,
                     "token '" + std::string(text) + "' needs a positive integer id");
  }
  return Token{std::string(name), id};
}

struct Line {
  std::size_t number;
  double time;
  std::vector<Token> consumed;
  std::vector<Token> produced;
};

Line parse_line(std::string_view text, std::size_t number) {
  const auto arrow = text.find("-->");
  if (arrow == std::string_view::npos) {
    throw TraceError(TraceError::Kind::Syntax, number, "missing '-->'");
  }
  auto left = split_ws(text.substr(0, arrow));
  auto right = split_ws(text.substr(arrow + 3));
  if (left.empty()) throw TraceError(TraceError::Kind::Syntax, number, "missing timestamp");
  Line out{number, 0.0, {}, {}};
  if (!parse_real(left.front(), out.time) || out.time < 0.0) {
    throw TraceError(TraceError::Kind::Syntax, number,
                     "malformed timestamp '" + std::string(left.front()) + "'");
  }
  for (std::size_t i = 1; i < left.size(); ++i) out.consumed.push_back(parse_token(left[i], number));
  for (auto tok : right) {
    if (tok.find("-->") != std::string_view::npos) {
      throw TraceError(TraceError::Kind::Syntax, number, "more than one '-->'");
    }
    out.produced.push_back(parse_token(tok, number));
  }
  return out;
}

template <class Names>
std::map<std::string, std::size_t> tally_names(const Names& names) {
  std::map<std::string, std::size_t> out;
  for (const auto& n : names) ++out[n];
  return out;
}

std::map<std::string, std::size_t> tally_tokens(const std::vector<Token>& toks) {
  std::map<std::string, std::size_t> out;
  for (const auto& t : toks) ++out[t.species];
  return out;
}

// Orders tokens to follow `species_order`; equal species by ascending id.
std::vector<Token> align(std::vector<Token> toks, const std::vector<std::string>& species_order) {
  std::sort(toks.begin(), toks.end(), [](const Token& a, const Token& b) {
    return a.species != b.species ? a.species < b.species : a.id < b.id;
  });
  std::vector<Token> out;
  std::vector<bool> used(toks.size(), false);
  for (const auto& s : species_order) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (!used[i] && toks[i].species == s) {
        used[i] = true;
        out.push_back(toks[i]);
        break;
      }
    }
  }
  return out;
}

std::string token_text(const SpeciesInstance& inst) {
  return inst.species + "(" + std::to_string(inst.id) + ")";
}

void append_side(std::string& out, std::vector<SpeciesInstance> side) {
  std::sort(side.begin(), side.end());
  for (const auto& inst : side) {
    out += ' ';
    out += token_text(inst);
  }
}

}  // namespace

Trajectory parse_trace(std::string_view text, const Model& model) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++number;
    start = end + 1;
    if (split_ws(raw).empty()) continue;
    lines.push_back(parse_line(raw, number));
  }
  if (lines.empty()) {
    throw TraceError(TraceError::Kind::Syntax, 1, "empty trace: missing initialization line");
  }

  Trajectory traj;
  const Line& init = lines.front();
  if (init.time != 0.0 || !init.consumed.empty()) {
    throw TraceError(TraceError::Kind::Syntax, init.number,
                     "first line must be the initialization line '0. --> ...'");
  }
  for (const auto& tok : init.produced) {
    traj.initial_state.add(SpeciesInstance{tok.species, tok.id, 0.0, std::string(kInitLabel)});
  }

  SimulationState state = traj.initial_state;
  double previous = 0.0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (!(line.time > previous)) {
      throw TraceError(TraceError::Kind::NonIncreasingTime, line.number,
                       "timestamp " + format_time(line.time) + " does not increase");
    }
    previous = line.time;

    const auto lhs = tally_tokens(line.consumed);
    const auto rhs = tally_tokens(line.produced);
    std::vector<const Reaction*> matches;
    for (const auto& r : model.reactions()) {
      if (tally_names(r.reactants()) == lhs && tally_names(r.products()) == rhs) {
        matches.push_back(&r);
      }
    }
    if (matches.empty()) {
      throw TraceError(TraceError::Kind::NoMatchingReaction, line.number,
                       "no reaction of the model matches this line");
    }
    if (matches.size() > 1) {
      std::string names;
      for (const auto* r : matches) names += (names.empty() ? "" : ", ") + r->name();
      throw TraceError(TraceError::Kind::AmbiguousReaction, line.number,
                       "line matches several reactions (" + names + ")");
    }
    const Reaction& reaction = *matches.front();

    TransitionInstance tr;
    tr.time = line.time;
    tr.reaction = reaction.name();
    for (const auto& tok : align(line.consumed, reaction.reactants())) {
      auto inst = state.take_oldest(tok.species, tok.id);
      if (!inst) {
        throw TraceError(TraceError::Kind::CausalityViolation, line.number,
                         "causality violation at line " + std::to_string(line.number) + ": " +
                             tok.species + "(" + std::to_string(tok.id) + ") is not available");
      }
      tr.consumed.push_back(std::move(*inst));
    }
    for (const auto& tok : align(line.produced, reaction.products())) {
      tr.produced.push_back(SpeciesInstance{tok.species, tok.id, line.time, reaction.name()});
    }
    for (const auto& p : tr.produced) state.add(p);
    traj.steps.push_back(std::move(tr));
  }
  return traj;
}

std::string serialize_trace(const Trajectory& trajectory) {
  std::string out = "0. -->";
  append_side(out, trajectory.initial_state.instances());
  out += '\n';
  for (const auto& step : trajectory.steps) {
    out += format_time(step.time);
    append_side(out, step.consumed);
    out += " -->";
    append_side(out, step.produced);
    out += '\n';
  }
  return out;
}

}  // namespace fluxtrace
