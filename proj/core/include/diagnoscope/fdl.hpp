#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diagnoscope/formula.hpp"
#include "diagnoscope/model.hpp"

// Reader and writer for fault description files (.fdl).
//
// The format is line oriented; `#` starts a comment that runs to the end
// of the line. One declaration per line:
//
//   hypothesis <id> prior <decimal>
//   observable <id> [free]
//   rule <id> (& <id>)* => <observable>      (or: rule true => <observable>)
//   fact <formula>                           (! & | -> <-> and parentheses)
//   observe [!]<observable>
//   treatment <id> targets <hypothesis>
//   utility <treatment> treat-faulty <v> treat-ok <v> skip-faulty <v> skip-ok <v>
//   utility joint when <literals> given <treatment literals> value <v>
//
// Literal lists are comma separated, `!` negates, and `*` is the empty list.

namespace diagnoscope {

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;
};

/// `file:line:col: error: message`, followed by the offending source line
/// and a caret marker.
std::string render_parse_error(const ParseError& error, std::string_view filename,
                               std::string_view text);

class ParseFailure : public std::runtime_error {
 public:
  explicit ParseFailure(ParseError error);

  const ParseError& error() const noexcept { return error_; }

 private:
  ParseError error_;
};

/// Everything a model file can declare.
struct ModelBundle {
  FaultModel model;
  ObservationSet observations;
  std::vector<TreatmentAction> treatments;
  UtilityModel utility;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

struct ParseResult {
  ModelBundle bundle;
  /// Semantic problems found after a clean parse; empty for a usable model.
  std::vector<ValidationFinding> findings;
};

/// Syntax only. Throws ParseFailure at the first error.
ModelBundle parse_bundle(std::string_view text);

/// parse_bundle() followed by validate_bundle().
ParseResult parse_model_file(std::string_view text);

std::vector<ValidationFinding> validate_bundle(const ModelBundle& bundle);

/// Writes a bundle back out; parse_bundle(serialize_bundle(b)) == b.
std::string serialize_bundle(const ModelBundle& bundle);

Formula parse_formula(std::string_view text);
/// `E` or `!E`.
ObservationLiteral parse_observation_literal(std::string_view text);

}  // namespace diagnoscope
