#include "diagnoscope/fdl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <utility>

namespace diagnoscope {

namespace {

enum class Tok {
  identifier,
  number,
  bang,
  amp,
  pipe,
  arrow,    // ->
  biarrow,  // <->
  implies,  // =>
  lparen,
  rparen,
  comma,
  star,
  end_of_line,
};

std::string describe(Tok kind) {
  switch (kind) {
    case Tok::identifier:
      return "identifier";
    case Tok::number:
      return "number";
    case Tok::bang:
      return "'!'";
    case Tok::amp:
      return "'&'";
    case Tok::pipe:
      return "'|'";
    case Tok::arrow:
      return "'->'";
    case Tok::biarrow:
      return "'<->'";
    case Tok::implies:
      return "'=>'";
    case Tok::lparen:
      return "'('";
    case Tok::rparen:
      return "')'";
    case Tok::comma:
      return "','";
    case Tok::star:
      return "'*'";
    case Tok::end_of_line:
      return "end of line";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string_view text;
  SourceSpan span;
  double number = 0.0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

[[noreturn]] void fail(SourceSpan span, std::string message,
                       std::vector<std::string> expected = {}) {
  throw ParseFailure(ParseError{span, std::move(message), std::move(expected)});
}

// Tokenizes a single line (without its newline). Comments are dropped.
std::vector<Token> lex_line(std::string_view line, std::size_t line_number) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto span_at = [&](std::size_t begin, std::size_t end) {
    return SourceSpan{line_number, begin + 1, end - begin};
  };
  const auto push = [&](Tok kind, std::size_t begin, std::size_t end) {
    out.push_back({kind, line.substr(begin, end - begin), span_at(begin, end)});
  };
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    const auto next = [&](std::size_t k) { return i + k < line.size() ? line[i + k] : '\0'; };
    if (ident_start(c)) {
      ++i;
      // Hyphens join words (treat-faulty) but never start an arrow.
      while (i < line.size() &&
             (ident_char(line[i]) || (line[i] == '-' && i + 1 < line.size() &&
                                      std::isalnum(static_cast<unsigned char>(line[i + 1]))))) {
        ++i;
      }
      push(Tok::identifier, begin, i);
      continue;
    }
    if (digit(c) || c == '.' || ((c == '-' || c == '+') && (digit(next(1)) || next(1) == '.'))) {
      if (c == '-' || c == '+') ++i;
      while (i < line.size() && digit(line[i])) ++i;
      if (i < line.size() && line[i] == '.') {
        ++i;
        while (i < line.size() && digit(line[i])) ++i;
      }
      if (i < line.size() && (line[i] == 'e' || line[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < line.size() && (line[j] == '+' || line[j] == '-')) ++j;
        if (j < line.size() && digit(line[j])) {
          i = j;
          while (i < line.size() && digit(line[i])) ++i;
        }
      }
      std::string_view text = line.substr(begin, i - begin);
      std::string_view parse_text = text.front() == '+' ? text.substr(1) : text;
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(parse_text.data(), parse_text.data() + parse_text.size(), value);
      if (ec != std::errc() || ptr != parse_text.data() + parse_text.size()) {
        fail(span_at(begin, i), "malformed number '" + std::string(text) + "'");
      }
      out.push_back({Tok::number, text, span_at(begin, i), value});
      continue;
    }
    switch (c) {
      case '!':
        push(Tok::bang, begin, ++i);
        continue;
      case '&':
        push(Tok::amp, begin, ++i);
        continue;
      case '|':
        push(Tok::pipe, begin, ++i);
        continue;
      case '(':
        push(Tok::lparen, begin, ++i);
        continue;
      case ')':
        push(Tok::rparen, begin, ++i);
        continue;
      case ',':
        push(Tok::comma, begin, ++i);
        continue;
      case '*':
        push(Tok::star, begin, ++i);
        continue;
      case '-':
        if (next(1) == '>') {
          i += 2;
          push(Tok::arrow, begin, i);
          continue;
        }
        break;
      case '=':
        if (next(1) == '>') {
          i += 2;
          push(Tok::implies, begin, i);
          continue;
        }
        break;
      case '<':
        if (next(1) == '-' && next(2) == '>') {
          i += 3;
          push(Tok::biarrow, begin, i);
          continue;
        }
        break;
      default:
        break;
    }
    fail(span_at(begin, begin + 1), "unexpected character '" + std::string(1, c) + "'");
  }
  std::size_t end = line.size();
  while (end > 0 && (line[end - 1] == '\r')) --end;
  out.push_back({Tok::end_of_line, {}, SourceSpan{line_number, end + 1, 0}});
  return out;
}

class LineParser {
 public:
  explicit LineParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view word) const { return at(Tok::identifier) && peek().text == word; }
  const Token& take() { return tokens_[pos_++]; }

  bool accept(Tok kind) {
    if (!at(kind)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void unexpected(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found =
        t.kind == Tok::end_of_line ? "end of line" : "'" + std::string(t.text) + "'";
    std::string message = "unexpected " + found;
    if (!expected.empty()) {
      message += ", expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) message += i + 1 == expected.size() ? " or " : ", ";
        message += expected[i];
      }
    }
    fail(t.span, std::move(message), std::move(expected));
  }

  const Token& expect(Tok kind) {
    if (!at(kind)) unexpected({describe(kind)});
    return take();
  }

  const Token& expect_name() {
    if (!at(Tok::identifier)) unexpected({describe(Tok::identifier)});
    if (peek().text == "true" || peek().text == "false") {
      fail(peek().span, "'" + std::string(peek().text) + "' is reserved and cannot name anything",
           {describe(Tok::identifier)});
    }
    return take();
  }

  void expect_word(std::string_view word) {
    if (!at_word(word)) unexpected({"'" + std::string(word) + "'"});
    ++pos_;
  }

  double expect_number() { return expect(Tok::number).number; }

  void expect_end() { expect(Tok::end_of_line); }

  // iff := imp ('<->' imp)*
  Formula formula() {
    Formula lhs = implication();
    while (accept(Tok::biarrow)) lhs = Formula::biconditional(std::move(lhs), implication());
    return lhs;
  }

 private:
  // imp := or ('->' imp)?
  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::arrow)) return Formula::implication(std::move(lhs), implication());
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (accept(Tok::pipe)) parts.push_back(conjunction());
    return parts.size() == 1 ? std::move(parts.front()) : Formula::disjunction(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (accept(Tok::amp)) parts.push_back(unary());
    return parts.size() == 1 ? std::move(parts.front()) : Formula::conjunction(std::move(parts));
  }

  Formula unary() {
    if (accept(Tok::bang)) return Formula::negation(unary());
    if (accept(Tok::lparen)) {
      Formula inner = formula();
      expect(Tok::rparen);
      return inner;
    }
    if (at_word("true")) {
      ++pos_;
      return Formula::truth();
    }
    if (at_word("false")) {
      ++pos_;
      return Formula::falsity();
    }
    if (at(Tok::identifier)) return Formula::atom(std::string(take().text));
    unexpected({"identifier", "'!'", "'('", "'true'", "'false'"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

const std::array<std::string_view, 7> kKeywords = {"hypothesis", "observable", "rule",   "fact",
                                                   "observe",    "treatment",  "utility"};

std::vector<std::string> keyword_list() {
  std::vector<std::string> out;
  for (auto k : kKeywords) out.push_back("'" + std::string(k) + "'");
  return out;
}

CausalRule parse_rule(LineParser& p) {
  CausalRule rule;
  if (p.at_word("true")) {
    p.take();
  } else {
    rule.body.emplace_back(p.expect_name().text);
    while (p.at(Tok::amp)) {
      const Token amp = p.take();
      if (!p.at(Tok::identifier)) {
        fail(amp.span, "dangling '&' in rule body", {describe(Tok::identifier)});
      }
      rule.body.emplace_back(p.expect_name().text);
    }
  }
  if (!p.at(Tok::implies)) p.unexpected({"'&'", "'=>'"});
  p.take();
  rule.head = std::string(p.expect_name().text);
  p.expect_end();
  return rule;
}

template <typename Literal, typename Make>
std::vector<Literal> parse_literal_list(LineParser& p, Make make) {
  std::vector<Literal> out;
  if (p.accept(Tok::star)) return out;
  do {
    const bool negated = p.accept(Tok::bang);
    out.push_back(make(std::string(p.expect_name().text), !negated));
  } while (p.accept(Tok::comma));
  return out;
}

void parse_utility(LineParser& p, UtilityModel& utility) {
  if (p.at_word("joint")) {
    p.take();
    JointUtility entry;
    p.expect_word("when");
    entry.when = parse_literal_list<HypothesisLiteral>(p, [](std::string id, bool positive) {
      return HypothesisLiteral{std::move(id), positive};
    });
    p.expect_word("given");
    entry.given = parse_literal_list<TreatmentLiteral>(
        p, [](std::string id, bool applied) { return TreatmentLiteral{std::move(id), applied}; });
    p.expect_word("value");
    entry.value = p.expect_number();
    p.expect_end();
    utility.joint.push_back(std::move(entry));
    return;
  }

  const Token& name = p.expect_name();
  const std::string id(name.text);
  if (utility.additive.contains(id)) {
    fail(name.span, "duplicate utility entry for treatment '" + id + "'");
  }
  constexpr std::array<std::string_view, 4> keys = {"treat-faulty", "treat-ok", "skip-faulty",
                                                    "skip-ok"};
  std::array<std::optional<double>, 4> values;
  while (!p.at(Tok::end_of_line)) {
    const auto key = std::find_if(keys.begin(), keys.end(), [&](auto k) { return p.at_word(k); });
    if (key == keys.end()) {
      std::vector<std::string> expected;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!values[i]) expected.push_back("'" + std::string(keys[i]) + "'");
      }
      p.unexpected(std::move(expected));
    }
    const auto slot = static_cast<std::size_t>(key - keys.begin());
    const Token& key_token = p.take();
    if (values[slot]) fail(key_token.span, "'" + std::string(*key) + "' given twice");
    values[slot] = p.expect_number();
  }
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!values[i]) missing.push_back("'" + std::string(keys[i]) + "'");
  }
  if (!missing.empty()) p.unexpected(std::move(missing));
  utility.additive.emplace(id, AdditiveUtility{*values[0], *values[1], *values[2], *values[3]});
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::to_string(value);
}

template <typename Literal, typename Render>
std::string render_literals(const std::vector<Literal>& literals, Render render) {
  if (literals.empty()) return "*";
  std::string out;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i > 0) out += ", ";
    out += render(literals[i]);
  }
  return out;
}

}  // namespace

ParseFailure::ParseFailure(ParseError error)
    : std::runtime_error(error.message), error_(std::move(error)) {}

std::string render_parse_error(const ParseError& error, std::string_view filename,
                               std::string_view text) {
  std::string out = std::string(filename) + ":" + std::to_string(error.span.line) + ":" +
                    std::to_string(error.span.column) + ": error: " + error.message + "\n";
  std::size_t line_begin = 0;
  for (std::size_t n = 1; n < error.span.line && line_begin != std::string_view::npos; ++n) {
    line_begin = text.find('\n', line_begin);
    if (line_begin != std::string_view::npos) ++line_begin;
  }
  if (line_begin == std::string_view::npos || line_begin > text.size()) return out;
  std::string_view line = text.substr(line_begin);
  line = line.substr(0, line.find('\n'));
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  out += "  " + std::string(line) + "\n";
  out += "  " + std::string(error.span.column - 1, ' ') +
         std::string(std::max<std::size_t>(error.span.length, 1), '^') + "\n";
  return out;
}

ModelBundle parse_bundle(std::string_view text) {
  std::vector<Hypothesis> hypotheses;
  std::vector<ObservableVar> observables;
  std::vector<CausalRule> rules;
  std::vector<Formula> facts;
  std::vector<ObservationLiteral> observations;
  ModelBundle bundle;

  std::size_t line_number = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    const std::size_t newline = text.find('\n', offset);
    const std::string_view line = text.substr(
        offset, newline == std::string_view::npos ? std::string_view::npos : newline - offset);
    ++line_number;
    offset = newline == std::string_view::npos ? text.size() + 1 : newline + 1;

    LineParser p(lex_line(line, line_number));
    if (p.at(Tok::end_of_line)) continue;
    if (!p.at(Tok::identifier)) p.unexpected(keyword_list());
    const Token& keyword = p.peek();
    if (std::find(kKeywords.begin(), kKeywords.end(), keyword.text) == kKeywords.end()) {
      fail(keyword.span, "unknown keyword '" + std::string(keyword.text) + "'", keyword_list());
    }
    const std::string_view word = p.take().text;

    if (word == "hypothesis") {
      Hypothesis h;
      h.id = std::string(p.expect_name().text);
      p.expect_word("prior");
      h.prior = p.expect_number();
      p.expect_end();
      hypotheses.push_back(std::move(h));
    } else if (word == "observable") {
      ObservableVar o;
      o.id = std::string(p.expect_name().text);
      if (p.at_word("free")) {
        p.take();
        o.free = true;
      }
      p.expect_end();
      observables.push_back(std::move(o));
    } else if (word == "rule") {
      rules.push_back(parse_rule(p));
    } else if (word == "fact") {
      facts.push_back(p.formula());
      p.expect_end();
    } else if (word == "observe") {
      const bool negated = p.accept(Tok::bang);
      observations.push_back({std::string(p.expect_name().text), !negated});
      p.expect_end();
    } else if (word == "treatment") {
      TreatmentAction t;
      t.id = std::string(p.expect_name().text);
      p.expect_word("targets");
      t.target = std::string(p.expect_name().text);
      p.expect_end();
      bundle.treatments.push_back(std::move(t));
    } else {
      parse_utility(p, bundle.utility);
    }
  }

  bundle.model =
      FaultModel(std::move(hypotheses), std::move(observables), std::move(rules), std::move(facts));
  bundle.observations = ObservationSet(std::move(observations));
  return bundle;
}

std::vector<ValidationFinding> validate_bundle(const ModelBundle& bundle) {
  auto findings = validate_model(bundle.model);
  for (auto& f : validate_observations(bundle.model, bundle.observations)) {
    findings.push_back(std::move(f));
  }
  for (auto& f : validate_treatments(bundle.model, bundle.treatments, &bundle.utility)) {
    findings.push_back(std::move(f));
  }
  return findings;
}

ParseResult parse_model_file(std::string_view text) {
  ParseResult result{parse_bundle(text), {}};
  result.findings = validate_bundle(result.bundle);
  return result;
}

std::string serialize_bundle(const ModelBundle& bundle) {
  std::string out;
  const auto& model = bundle.model;
  for (const auto& h : model.hypotheses()) {
    out += "hypothesis " + h.id + " prior " + format_number(h.prior) + "\n";
  }
  for (const auto& o : model.observables()) {
    out += "observable " + o.id + (o.free ? " free" : "") + "\n";
  }
  for (const auto& rule : model.rules()) {
    out += "rule ";
    if (rule.body.empty()) out += "true";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (i > 0) out += " & ";
      out += rule.body[i];
    }
    out += " => " + rule.head + "\n";
  }
  for (const auto& fact : model.extra_facts()) out += "fact " + fact.to_string() + "\n";
  for (const auto& literal : bundle.observations.literals()) {
    out += std::string("observe ") + (literal.positive ? "" : "!") + literal.observable + "\n";
  }
  for (const auto& t : bundle.treatments) {
    out += "treatment " + t.id + " targets " + t.target + "\n";
  }
  for (const auto& [id, u] : bundle.utility.additive) {
    out += "utility " + id + " treat-faulty " + format_number(u.treat_faulty) + " treat-ok " +
           format_number(u.treat_ok) + " skip-faulty " + format_number(u.skip_faulty) +
           " skip-ok " + format_number(u.skip_ok) + "\n";
  }
  for (const auto& entry : bundle.utility.joint) {
    out += "utility joint when " +
           render_literals(
               entry.when,
               [](const HypothesisLiteral& l) { return (l.positive ? "" : "!") + l.hypothesis; }) +
           " given " +
           render_literals(
               entry.given,
               [](const TreatmentLiteral& l) { return (l.applied ? "" : "!") + l.treatment; }) +
           " value " + format_number(entry.value) + "\n";
  }
  return out;
}

Formula parse_formula(std::string_view text) {
  if (text.find('\n') != std::string_view::npos) {
    fail(SourceSpan{1, text.find('\n') + 1, 1}, "formula must fit on one line");
  }
  LineParser p(lex_line(text, 1));
  Formula f = p.formula();
  p.expect_end();
  return f;
}

ObservationLiteral parse_observation_literal(std::string_view text) {
  if (text.find('\n') != std::string_view::npos) {
    fail(SourceSpan{1, text.find('\n') + 1, 1}, "observation must fit on one line");
  }
  LineParser p(lex_line(text, 1));
  const bool negated = p.accept(Tok::bang);
  ObservationLiteral literal{std::string(p.expect_name().text), !negated};
  p.expect_end();
  return literal;
}

}  // namespace diagnoscope
