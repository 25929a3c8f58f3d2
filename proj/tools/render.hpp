#pragma once

#include <string>
#include <vector>

#include "diagnoscope/decision.hpp"
#include "diagnoscope/fdl.hpp"
#include "diagnoscope/probability.hpp"
#include "diagnoscope/strategy.hpp"

namespace diagnoscope::cli {

enum class Format { table, json };

// Table output rounds probabilities to four decimals. JSON output carries
// every number at full precision next to a four-decimal "rounded" copy.

std::string render_check(const ModelBundle& bundle, const std::vector<ValidationFinding>& findings,
                         Format format);
std::string render_interpretations(const PosteriorTable& table, Format format);
std::string render_ranking(const RankedDiagnoses& ranking, const PosteriorTable& table,
                           Format format);
std::string render_report(const StrategyReport& report, Format format);
std::string render_treatment(const TreatmentDecision& decision, const DecisionProblem& problem,
                             const PosteriorTable& table, Format format);
std::string render_cover(const std::vector<PosteriorEntry>& rows, double mass,
                         const PosteriorTable& table, Format format);

}  // namespace diagnoscope::cli
