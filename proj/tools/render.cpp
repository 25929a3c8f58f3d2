#include "render.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace diagnoscope::cli {

namespace {

using nlohmann::ordered_json;

double round4(double x) { return std::round(x * 1e4) / 1e4 + 0.0; }

ordered_json number(double x) { return {{"value", x}, {"rounded", round4(x)}}; }

std::string prob(double x) { return fmt::format("{:.4f}", round4(x)); }

std::string money(double x) {
  const double r = round4(x);
  return r < 0 ? fmt::format("-${:.4f}", -r) : fmt::format("${:.4f}", r);
}

std::string evidence_line(double evidence) {
  return fmt::format("evidence probability: {:.6g}\n", evidence);
}

std::string fault_label(const std::vector<std::string>& faulty) {
  if (faulty.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < faulty.size(); ++i) {
    if (i > 0) out += ",";
    out += faulty[i];
  }
  return out;
}

std::string index_label(std::uint64_t index) { return fmt::format("p_{}", index); }

// Left-aligned columns separated by two spaces; no trailing blanks.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()));
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) line += "  ";
        line += row[c];
        if (c + 1 < row.size()) line += std::string(width[c] - row[c].size(), ' ');
      }
      out += line + "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> interpretation_cells(const PosteriorEntry& row, std::size_t m) {
  std::vector<std::string> cells{index_label(row.index)};
  for (std::size_t k = 0; k < m; ++k)
    cells.emplace_back(row.interpretation.is_faulty(k) ? "T" : "F");
  return cells;
}

ordered_json interpretation_json(const PosteriorEntry& row, const PosteriorTable& table) {
  return {{"index", row.index},
          {"faulty", fault_names(table.hypotheses(), row.interpretation.faulty_mask())}};
}

bool interpretation_strategy(Strategy s) {
  return s == Strategy::mpe || s == Strategy::single_fault;
}

std::string ranking_body(const RankedDiagnoses& ranking) {
  if (ranking.candidates.empty()) return "no candidates\nleader: none\n";
  const bool with_index = interpretation_strategy(ranking.strategy);
  std::vector<std::string> header{"rank"};
  if (with_index) header.emplace_back("index");
  header.emplace_back("candidate");
  header.emplace_back("score");
  TextTable t(std::move(header));
  for (std::size_t i = 0; i < ranking.candidates.size(); ++i) {
    const auto& c = ranking.candidates[i];
    std::vector<std::string> row{std::to_string(i + 1)};
    if (with_index) row.push_back(c.interpretation ? index_label(c.interpretation->index()) : "-");
    row.push_back(fault_label(c.diagnosis.faulty));
    row.push_back(prob(c.score));
    t.add(std::move(row));
  }
  std::string out = t.render();
  if (ranking.ties.size() > 1) {
    out += "leader: tie between";
    for (std::size_t i = 0; i < ranking.ties.size(); ++i) {
      out += (i == 0 ? " " : "; ") + fault_label(ranking.ties[i].diagnosis.faulty);
    }
    out += "\n";
  } else {
    out += "leader: " + fault_label(ranking.candidates.front().diagnosis.faulty) + "\n";
  }
  return out;
}

ordered_json ranking_candidates_json(const RankedDiagnoses& ranking) {
  ordered_json list = ordered_json::array();
  for (const auto& c : ranking.candidates) {
    ordered_json item{{"faulty", c.diagnosis.faulty}};
    if (c.interpretation) item["index"] = c.interpretation->index();
    list.push_back(std::move(item));
  }
  return list;
}

ordered_json ranking_scores_json(const RankedDiagnoses& ranking) {
  ordered_json list = ordered_json::array();
  for (const auto& c : ranking.candidates) list.push_back(number(c.score));
  return list;
}

ordered_json ties_json(const RankedDiagnoses& ranking) {
  ordered_json list = ordered_json::array();
  for (const auto& c : ranking.ties) list.push_back(c.diagnosis.faulty);
  return list;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string render_check(const ModelBundle& bundle, const std::vector<ValidationFinding>& findings,
                         Format format) {
  const auto& m = bundle.model;
  if (format == Format::json) {
    ordered_json list = ordered_json::array();
    for (const auto& f : findings) list.push_back({{"subject", f.subject}, {"message", f.message}});
    ordered_json j{{"strategy", "check"},
                   {"candidates", ordered_json::array()},
                   {"scores", ordered_json::array()},
                   {"evidence_probability", nullptr},
                   {"valid", findings.empty()},
                   {"hypotheses", m.hypotheses().size()},
                   {"observables", m.observables().size()},
                   {"rules", m.rules().size()},
                   {"facts", m.extra_facts().size()},
                   {"observations", bundle.observations.literals().size()},
                   {"treatments", bundle.treatments.size()},
                   {"findings", std::move(list)}};
    return dump(j);
  }
  std::string out;
  for (const auto& f : findings) out += "finding: " + f.message + "\n";
  out += fmt::format(
      "{}: {} hypotheses, {} observables, {} rules, {} facts, {} observations, {} treatments\n",
      findings.empty() ? "ok" : "invalid", m.hypotheses().size(), m.observables().size(),
      m.rules().size(), m.extra_facts().size(), bundle.observations.literals().size(),
      bundle.treatments.size());
  return out;
}

std::string render_interpretations(const PosteriorTable& table, Format format) {
  const std::size_t m = table.hypotheses().size();
  if (format == Format::json) {
    ordered_json candidates = ordered_json::array();
    ordered_json scores = ordered_json::array();
    for (const auto& row : table.entries()) {
      candidates.push_back(interpretation_json(row, table));
      scores.push_back(number(row.posterior));
    }
    ordered_json j{{"strategy", "interpretations"},
                   {"hypotheses", table.hypotheses()},
                   {"candidates", std::move(candidates)},
                   {"scores", std::move(scores)},
                   {"evidence_probability", number(table.evidence_probability())}};
    return dump(j);
  }
  std::vector<std::string> header{"index"};
  for (const auto& h : table.hypotheses()) header.push_back(h);
  header.emplace_back("posterior");
  TextTable t(std::move(header));
  for (const auto& row : table.entries()) {
    auto cells = interpretation_cells(row, m);
    cells.push_back(prob(row.posterior));
    t.add(std::move(cells));
  }
  return evidence_line(table.evidence_probability()) + t.render();
}

std::string render_ranking(const RankedDiagnoses& ranking, const PosteriorTable& table,
                           Format format) {
  if (format == Format::json) {
    ordered_json j{{"strategy", to_string(ranking.strategy)},
                   {"candidates", ranking_candidates_json(ranking)},
                   {"scores", ranking_scores_json(ranking)},
                   {"evidence_probability", number(table.evidence_probability())},
                   {"ties", ties_json(ranking)}};
    return dump(j);
  }
  return fmt::format("strategy: {}\n", to_string(ranking.strategy)) +
         evidence_line(table.evidence_probability()) + ranking_body(ranking);
}

std::string render_report(const StrategyReport& report, Format format) {
  if (format == Format::json) {
    ordered_json candidates = ordered_json::object();
    ordered_json scores = ordered_json::object();
    ordered_json leaders = ordered_json::object();
    ordered_json errors = ordered_json::object();
    for (const auto& o : report.outcomes) {
      const std::string name(to_string(o.strategy));
      if (o.ranking) {
        candidates[name] = ranking_candidates_json(*o.ranking);
        scores[name] = ranking_scores_json(*o.ranking);
      } else {
        candidates[name] = ordered_json::array();
        scores[name] = ordered_json::array();
      }
      const auto leader = o.leader();
      leaders[name] = leader ? ordered_json(*leader) : ordered_json(nullptr);
      if (o.error) errors[name] = *o.error;
    }
    ordered_json j{
        {"strategy", "all"},
        {"candidates", std::move(candidates)},
        {"scores", std::move(scores)},
        {"evidence_probability", report.evidence_probability ? number(*report.evidence_probability)
                                                             : ordered_json(nullptr)}};
    if (report.treatment) {
      const auto& t = *report.treatment;
      if (t.decision) {
        j["utility"] = {{"chosen", t.decision->chosen},
                        {"expected_utility", number(t.decision->expected_utility)}};
        leaders["utility"] = t.treated_hypotheses;
      } else {
        leaders["utility"] = nullptr;
        if (t.error) errors["utility"] = *t.error;
      }
    }
    ordered_json disagreements = ordered_json::array();
    for (const auto& d : report.disagreements) disagreements.push_back({d.first, d.second});
    j["leaders"] = std::move(leaders);
    j["unanimous"] = report.unanimous();
    j["disagreements"] = std::move(disagreements);
    j["errors"] = std::move(errors);
    return dump(j);
  }

  std::string out;
  if (report.evidence_probability) out += evidence_line(*report.evidence_probability);
  TextTable summary({"strategy", "leader"});
  for (const auto& o : report.outcomes) {
    const std::string name(to_string(o.strategy));
    out += "\n[" + name + "]\n";
    if (o.error) {
      out += "error: " + *o.error + "\n";
    } else {
      out += ranking_body(*o.ranking);
    }
    const auto leader = o.leader();
    summary.add({name, leader ? fault_label(*leader) : "-"});
  }
  if (report.treatment) {
    const auto& t = *report.treatment;
    out += "\n[utility]\n";
    if (t.decision) {
      out += "chosen: " +
             (t.decision->chosen.empty() ? std::string("{}") : fault_label(t.decision->chosen)) +
             "\n";
      out += "expected utility: " + money(t.decision->expected_utility) + "\n";
      summary.add({"utility", fault_label(t.treated_hypotheses)});
    } else {
      out += "error: " + t.error.value_or("unknown") + "\n";
      summary.add({"utility", "-"});
    }
  }
  out += "\n[comparison]\n" + summary.render();
  if (report.unanimous()) {
    out += "verdict: all strategies agree\n";
  } else {
    out += "verdict: strategies disagree\n";
    for (const auto& d : report.disagreements) {
      out += "  " + d.first + " vs " + d.second + "\n";
    }
  }
  return out;
}

std::string render_treatment(const TreatmentDecision& decision, const DecisionProblem& problem,
                             const PosteriorTable& table, Format format) {
  std::vector<TreatmentAction> treatments = problem.treatments;
  std::sort(treatments.begin(), treatments.end(),
            [](const TreatmentAction& a, const TreatmentAction& b) { return a.id < b.id; });

  struct Row {
    const TreatmentAction* action;
    double p_faulty;
    std::optional<double> threshold;
    std::string threshold_note;
    bool applied;
    double contribution;
  };
  std::vector<Row> rows;
  for (const auto& t : treatments) {
    Row row{&t, marginal(table, Formula::atom(t.target)), std::nullopt, "-", false, 0.0};
    if (const auto it = problem.utility.additive.find(t.id); it != problem.utility.additive.end()) {
      try {
        row.threshold = additive_fix_threshold(it->second);
      } catch (const ThresholdError& e) {
        switch (e.dominance()) {
          case Dominance::always_treat:
            row.threshold_note = "always";
            break;
          case Dominance::never_treat:
            row.threshold_note = "never";
            break;
          case Dominance::inverted:
            row.threshold_note = "inverted";
            break;
        }
      }
    }
    row.applied =
        std::find(decision.chosen.begin(), decision.chosen.end(), t.id) != decision.chosen.end();
    if (const auto it = decision.per_treatment_breakdown.find(t.id);
        it != decision.per_treatment_breakdown.end()) {
      row.contribution = it->second;
    }
    rows.push_back(std::move(row));
  }

  if (format == Format::json) {
    ordered_json list = ordered_json::array();
    for (const auto& r : rows) {
      list.push_back({{"id", r.action->id},
                      {"target", r.action->target},
                      {"p_faulty", number(r.p_faulty)},
                      {"threshold", r.threshold ? number(*r.threshold) : ordered_json(nullptr)},
                      {"applied", r.applied},
                      {"contribution", number(r.contribution)}});
    }
    ordered_json j{{"strategy", "utility"},
                   {"candidates", ordered_json::array({decision.chosen})},
                   {"scores", ordered_json::array({number(decision.expected_utility)})},
                   {"evidence_probability", number(table.evidence_probability())},
                   {"chosen", decision.chosen},
                   {"expected_utility", number(decision.expected_utility)},
                   {"joint_terms", problem.utility.joint.size()},
                   {"treatments", std::move(list)}};
    return dump(j);
  }

  std::string out = evidence_line(table.evidence_probability());
  out += "chosen: " + (decision.chosen.empty() ? std::string("{}") : fault_label(decision.chosen)) +
         "\n";
  out += "expected utility: " + money(decision.expected_utility) + "\n";
  TextTable t({"treatment", "target", "p(faulty)", "threshold", "applied", "contribution"});
  for (const auto& r : rows) {
    t.add({r.action->id, r.action->target, prob(r.p_faulty),
           r.threshold ? prob(*r.threshold) : r.threshold_note, r.applied ? "yes" : "no",
           money(r.contribution)});
  }
  out += t.render();
  if (!problem.utility.joint.empty()) {
    out += fmt::format("joint utility terms: {}\n", problem.utility.joint.size());
  }
  return out;
}

std::string render_cover(const std::vector<PosteriorEntry>& rows, double mass,
                         const PosteriorTable& table, Format format) {
  double covered = 0.0;
  for (const auto& r : rows) covered += r.posterior;
  if (format == Format::json) {
    ordered_json candidates = ordered_json::array();
    ordered_json scores = ordered_json::array();
    for (const auto& r : rows) {
      candidates.push_back(interpretation_json(r, table));
      scores.push_back(number(r.posterior));
    }
    ordered_json j{{"strategy", "cover"},
                   {"candidates", std::move(candidates)},
                   {"scores", std::move(scores)},
                   {"evidence_probability", number(table.evidence_probability())},
                   {"mass", mass},
                   {"covered", number(covered)}};
    return dump(j);
  }
  const std::size_t m = table.hypotheses().size();
  std::vector<std::string> header{"index"};
  for (const auto& h : table.hypotheses()) header.push_back(h);
  header.emplace_back("posterior");
  header.emplace_back("cumulative");
  TextTable t(std::move(header));
  double cumulative = 0.0;
  for (const auto& r : rows) {
    cumulative += r.posterior;
    auto cells = interpretation_cells(r, m);
    cells.push_back(prob(r.posterior));
    cells.push_back(prob(cumulative));
    t.add(std::move(cells));
  }
  return evidence_line(table.evidence_probability()) + t.render() +
         fmt::format("covered: {} of target {} with {} of {} interpretations\n", prob(covered),
                     prob(mass), rows.size(), table.entries().size());
}

}  // namespace diagnoscope::cli
