#include "fluxtrace/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "fluxtrace/format.hpp"

namespace fluxtrace {

bool is_identifier(std::string_view name) noexcept {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

Reaction::Reaction(std::string name, std::vector<std::string> reactants,
                   std::vector<std::string> products, double rate)
    : name_(std::move(name)),
      reactants_(std::move(reactants)),
      products_(std::move(products)),
      rate_(rate) {
  if (!is_identifier(name_)) {
    throw std::invalid_argument("invalid reaction name '" + name_ + "'");
  }
  if (reactants_.empty() || reactants_.size() > 2) {
    throw std::invalid_argument("reaction '" + name_ + "' must have 1 or 2 reactants, got " +
                                std::to_string(reactants_.size()));
  }
  if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
    throw std::invalid_argument("reaction '" + name_ + "' must have a positive finite rate");
  }
  for (const auto& s : reactants_) {
    if (!is_identifier(s)) throw std::invalid_argument("invalid species name '" + s + "'");
  }
  for (const auto& s : products_) {
    if (!is_identifier(s)) throw std::invalid_argument("invalid species name '" + s + "'");
  }
}

std::size_t Reaction::consumed(std::string_view species) const noexcept {
  return static_cast<std::size_t>(std::count(reactants_.begin(), reactants_.end(), species));
}

std::size_t Reaction::produced(std::string_view species) const noexcept {
  return static_cast<std::size_t>(std::count(products_.begin(), products_.end(), species));
}

Model::Model(std::map<std::string, std::uint64_t> initial, std::vector<Reaction> reactions)
    : initial_(std::move(initial)), reactions_(std::move(reactions)) {
  std::set<std::string> names;
  std::set<std::string> species;
  for (const auto& [name, count] : initial_) {
    if (!is_identifier(name)) throw std::invalid_argument("invalid species name '" + name + "'");
    species.insert(name);
  }
  for (const auto& r : reactions_) {
    if (r.name() == kInitLabel) {
      throw std::invalid_argument("reaction name 'init' is reserved");
    }
    if (!names.insert(r.name()).second) {
      throw std::invalid_argument("duplicate reaction name '" + r.name() + "'");
    }
    species.insert(r.reactants().begin(), r.reactants().end());
    species.insert(r.products().begin(), r.products().end());
  }
  species_.assign(species.begin(), species.end());
  // Zero entries are only meaningful for species nothing else mentions.
  for (auto it = initial_.begin(); it != initial_.end();) {
    bool mentioned = std::any_of(reactions_.begin(), reactions_.end(), [&](const Reaction& r) {
      return r.consumed(it->first) > 0 || r.produced(it->first) > 0;
    });
    if (it->second == 0 && mentioned) {
      it = initial_.erase(it);
    } else {
      ++it;
    }
  }
}

std::uint64_t Model::initial_count(std::string_view species) const noexcept {
  auto it = initial_.find(std::string(species));
  return it == initial_.end() ? 0 : it->second;
}

std::uint64_t Model::initial_size() const noexcept {
  std::uint64_t n = 0;
  for (const auto& [name, count] : initial_) n += count;
  return n;
}

const Reaction* Model::find_reaction(std::string_view name) const noexcept {
  for (const auto& r : reactions_) {
    if (r.name() == name) return &r;
  }
  return nullptr;
}

std::size_t Model::reaction_index(std::string_view name) const {
  for (std::size_t i = 0; i < reactions_.size(); ++i) {
    if (reactions_[i].name() == name) return i;
  }
  throw std::out_of_range("unknown reaction '" + std::string(name) + "'");
}

bool Model::has_species(std::string_view name) const noexcept {
  return std::binary_search(species_.begin(), species_.end(), name);
}

Model Model::with_initial(std::map<std::string, std::uint64_t> initial) const {
  return Model(std::move(initial), reactions_);
}

bool operator==(const Model& a, const Model& b) {
  auto positive = [](const Model& m) {
    std::map<std::string, std::uint64_t> out;
    for (const auto& [k, v] : m.initial_) {
      if (v > 0) out.emplace(k, v);
    }
    return out;
  };
  return a.species_ == b.species_ && positive(a) == positive(b) && a.reactions_ == b.reactions_;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

enum class Tok { Ident, Number, Colon, Plus, Arrow, At, Star, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t column;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Colon: return "':'";
    case Tok::Plus: return "'+'";
    case Tok::Arrow: return "'->'";
    case Tok::At: return "'@'";
    case Tok::Star: return "'*'";
    case Tok::End: return "end of line";
  }
  return "?";
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

class LineLexer {
public:
  LineLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line_.size()) {
      const char c = line_[i];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      const std::size_t col = i + 1;
      if (c == '#') break;
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
        std::size_t j = i;
        while (j < line_.size() && is_ident_char(line_[j])) ++j;
        out.push_back({Tok::Ident, line_.substr(i, j - i), col});
        i = j;
        continue;
      }
      if (is_digit(c) || c == '.' ||
          (c == '-' && i + 1 < line_.size() && (is_digit(line_[i + 1]) || line_[i + 1] == '.'))) {
        std::size_t j = i + 1;
        while (j < line_.size() && (is_digit(line_[j]) || line_[j] == '.')) ++j;
        if (j < line_.size() && (line_[j] == 'e' || line_[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < line_.size() && (line_[k] == '+' || line_[k] == '-')) ++k;
          if (k < line_.size() && is_digit(line_[k])) {
            j = k;
            while (j < line_.size() && is_digit(line_[j])) ++j;
          }
        }
        if (j < line_.size() && is_ident_char(line_[j])) {
          throw ParseError(line_no_, j + 1, "malformed number");
        }
        out.push_back({Tok::Number, line_.substr(i, j - i), col});
        i = j;
        continue;
      }
      switch (c) {
        case ':': out.push_back({Tok::Colon, line_.substr(i, 1), col}); ++i; continue;
        case '+': out.push_back({Tok::Plus, line_.substr(i, 1), col}); ++i; continue;
        case '@': out.push_back({Tok::At, line_.substr(i, 1), col}); ++i; continue;
        case '*': out.push_back({Tok::Star, line_.substr(i, 1), col}); ++i; continue;
        case '-':
          if (i + 1 < line_.size() && line_[i + 1] == '>') {
            out.push_back({Tok::Arrow, line_.substr(i, 2), col});
            i += 2;
            continue;
          }
          throw ParseError(line_no_, col, "expected '->'");
        case '\\':
          throw ParseError(line_no_, col, "unknown escape sequence");
        case '_':
          throw ParseError(line_no_, col, "identifiers must start with a letter");
        default:
          break;
      }
      if (static_cast<unsigned char>(c) >= 0x80) {
        throw ParseError(line_no_, col, "non-ASCII character outside a comment");
      }
      throw ParseError(line_no_, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, std::string_view{}, line_.size() + 1});
    return out;
  }

private:
  std::string_view line_;
  std::size_t line_no_;
};

class LineParser {
public:
  LineParser(std::vector<Token> toks, std::size_t line_no)
      : toks_(std::move(toks)), line_no_(line_no) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& expect(Tok kind, const char* context) {
    const Token& t = peek();
    if (t.kind != kind) {
      throw ParseError(line_no_, t.column,
                       std::string("expected ") + tok_name(kind) + " " + context + ", found " +
                           (t.kind == Tok::End ? std::string("end of line")
                                               : "'" + std::string(t.text) + "'"));
    }
    ++pos_;
    return t;
  }
  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::size_t line() const { return line_no_; }

  std::vector<std::string> species_list(const char* context) {
    std::vector<std::string> out;
    out.emplace_back(expect(Tok::Ident, context).text);
    while (accept(Tok::Plus)) out.emplace_back(expect(Tok::Ident, "after '+'").text);
    return out;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
};

std::uint64_t parse_count(const Token& t, std::size_t line) {
  if (!std::all_of(t.text.begin(), t.text.end(), is_digit)) {
    throw ParseError(line, t.column, "count must be a non-negative integer");
  }
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
    throw ParseError(line, t.column, "count out of range");
  }
  return v;
}

double parse_rate(const Token& t, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
    throw ParseError(line, t.column, "malformed rate '" + std::string(t.text) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(line, t.column, "rate must be finite");
  if (!(v > 0.0)) throw ParseError(line, t.column, "rate must be positive");
  return v;
}

}  // namespace

Model parse_model(std::string_view text) {
  std::map<std::string, std::uint64_t> initial;
  std::vector<Reaction> reactions;
  std::set<std::string, std::less<>> names;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    LineParser p(LineLexer(line, line_no).run(), line_no);
    if (p.peek().kind == Tok::End) {
      if (end == text.size()) break;
      continue;
    }

    if (p.peek().kind == Tok::Ident && p.peek().text == kInitLabel && p.peek(1).kind != Tok::Colon) {
      p.expect(Tok::Ident, "");
      const Token& species = p.expect(Tok::Ident, "after 'init'");
      p.expect(Tok::Star, "after species name");
      const Token& count_tok = p.expect(Tok::Number, "after '*'");
      std::uint64_t count = parse_count(count_tok, line_no);
      p.expect(Tok::End, "after count");
      auto& slot = initial[std::string(species.text)];
      if (count > UINT64_MAX - slot) throw ParseError(line_no, count_tok.column, "count out of range");
      slot += count;
    } else {
      const Token& name = p.expect(Tok::Ident, "at start of reaction");
      if (name.text == kInitLabel) {
        throw ParseError(line_no, name.column, "reaction name 'init' is reserved");
      }
      p.expect(Tok::Colon, "after reaction name");
      if (p.peek().kind == Tok::Arrow) {
        throw ParseError(line_no, p.peek().column, "reaction has no reactants");
      }
      const std::size_t reactant_col = p.peek().column;
      auto reactants = p.species_list("as reactant");
      if (reactants.size() > 2) {
        throw ParseError(line_no, reactant_col,
                         "too many reactants (" + std::to_string(reactants.size()) +
                             "); a reaction has one or two");
      }
      p.expect(Tok::Arrow, "after reactants");
      std::vector<std::string> products;
      if (p.peek().kind == Tok::Ident) products = p.species_list("as product");
      p.expect(Tok::At, "before rate");
      const Token& rate_tok = p.expect(Tok::Number, "after '@'");
      double rate = parse_rate(rate_tok, line_no);
      p.expect(Tok::End, "after rate");
      if (!names.insert(std::string(name.text)).second) {
        throw ParseError(line_no, name.column,
                         "duplicate reaction name '" + std::string(name.text) + "'");
      }
      reactions.emplace_back(std::string(name.text), std::move(reactants), std::move(products), rate);
    }
    if (end == text.size()) break;
  }
  return Model(std::move(initial), std::move(reactions));
}

std::string describe(const Reaction& reaction) {
  std::string out;
  for (std::size_t i = 0; i < reaction.reactants().size(); ++i) {
    if (i) out += " + ";
    out += reaction.reactants()[i];
  }
  out += " ->";
  for (std::size_t i = 0; i < reaction.products().size(); ++i) {
    out += i ? " + " : " ";
    out += reaction.products()[i];
  }
  return out;
}

std::string serialize_model(const Model& model) {
  std::ostringstream out;
  for (const auto& [species, count] : model.initial()) {
    out << "init " << species << " * " << count << '\n';
  }
  for (const auto& r : model.reactions()) {
    out << r.name() << ": " << describe(r) << " @ " << format_real(r.rate()) << '\n';
  }
  return out.str();
}

}  // namespace fluxtrace
