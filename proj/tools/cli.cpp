#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "diagnoscope/decision.hpp"
#include "diagnoscope/error.hpp"
#include "diagnoscope/fdl.hpp"
#include "diagnoscope/probability.hpp"
#include "diagnoscope/strategy.hpp"
#include "render.hpp"

namespace diagnoscope::cli {

namespace {

// Thrown inside a command to stop with a given exit code; the message has
// already been written to the error stream.
struct Exit {
  int code;
};

struct CommonOptions {
  std::string model_path;
  std::vector<std::string> observe;
  std::string format = "table";
  std::size_t max_hypotheses = EnumerationLimits{}.max_hypotheses;
  std::size_t max_treatments = EnumerationLimits{}.max_treatments;
};

struct Loaded {
  ModelBundle bundle;
  EnumerationLimits limits;
  Format format = Format::table;
};

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read '" << path << "'\n";
    throw Exit{kExitUsageError};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ModelBundle parse_or_exit(const std::string& path, std::ostream& err) {
  const std::string text = read_file(path, err);
  try {
    return parse_bundle(text);
  } catch (const ParseFailure& e) {
    err << render_parse_error(e.error(), path, text);
    throw Exit{kExitUsageError};
  }
}

void report_findings(const std::vector<ValidationFinding>& findings, std::ostream& err) {
  if (findings.empty()) return;
  for (const auto& f : findings) err << "error: " << f.message << "\n";
  throw Exit{kExitDomainError};
}

Loaded load(const CommonOptions& options, const std::optional<std::string>& utility_path,
            std::ostream& err) {
  Loaded loaded;
  loaded.format = options.format == "json" ? Format::json : Format::table;
  loaded.limits.max_hypotheses = options.max_hypotheses;
  loaded.limits.max_treatments = options.max_treatments;
  loaded.bundle = parse_or_exit(options.model_path, err);

  if (!options.observe.empty()) {
    std::vector<ObservationLiteral> literals;
    for (const auto& text : options.observe) {
      try {
        literals.push_back(parse_observation_literal(text));
      } catch (const ParseFailure& e) {
        err << render_parse_error(e.error(), "--observe", text);
        throw Exit{kExitUsageError};
      }
    }
    loaded.bundle.observations = ObservationSet(std::move(literals));
  }

  if (utility_path) {
    ModelBundle extra = parse_or_exit(*utility_path, err);
    const auto& m = extra.model;
    if (!m.hypotheses().empty() || !m.observables().empty() || !m.rules().empty() ||
        !m.extra_facts().empty() || !extra.observations.empty()) {
      err << "error: '" << *utility_path
          << "' may only contain treatment and utility declarations\n";
      throw Exit{kExitUsageError};
    }
    loaded.bundle.treatments = std::move(extra.treatments);
    loaded.bundle.utility = std::move(extra.utility);
  }

  report_findings(validate_bundle(loaded.bundle), err);
  return loaded;
}

void add_common(CLI::App* cmd, CommonOptions& options, bool with_observe) {
  cmd->add_option("model", options.model_path, "Fault description file (.fdl)")->required();
  if (with_observe) {
    cmd->add_option("--observe", options.observe,
                    "Observation literal such as E or !E; repeatable, replaces the file's "
                    "observations")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  }
  cmd->add_option("--format", options.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}));
  cmd->add_option("--max-hypotheses", options.max_hypotheses,
                  "Cap on hypotheses for exhaustive enumeration")
      ->check(CLI::Range(0, 62));
  cmd->add_option("--max-treatments", options.max_treatments,
                  "Cap on treatments for exhaustive optimisation")
      ->check(CLI::Range(0, 62));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compare notions of optimal diagnosis on propositional fault models", "diagnoscope"};
  app.require_subcommand(1);

  CommonOptions options;
  std::string strategy = "all";
  std::optional<std::string> utility_path;
  double mass = 0.0;

  auto* check = app.add_subcommand("check", "Parse and validate a model file");
  add_common(check, options, true);

  auto* interpretations =
      app.add_subcommand("interpretations", "Print the posterior of every interpretation");
  add_common(interpretations, options, true);

  auto* diagnose_cmd = app.add_subcommand("diagnose", "Rank diagnoses under one or all strategies");
  add_common(diagnose_cmd, options, true);
  diagnose_cmd->add_option("--strategy", strategy, "Diagnosis strategy")
      ->check(
          CLI::IsMember({"single-fault", "posterior", "mpe", "consistency", "abductive", "all"}));
  diagnose_cmd->add_option("--utility", utility_path,
                           "Treatments and utilities to include in the comparison");

  auto* treat = app.add_subcommand("treat", "Choose the treatment set of maximum expected utility");
  add_common(treat, options, true);
  treat->add_option("--utility", utility_path,
                    "File with treatment and utility declarations (default: the model file)");

  auto* cover = app.add_subcommand(
      "cover", "Smallest set of most probable interpretations reaching a probability mass");
  add_common(cover, options, true);
  cover->add_option("--mass", mass, "Probability mass to cover, in (0, 1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help(app.get_name()));
    return kExitUsageError;
  }

  try {
    if (check->parsed()) {
      Loaded loaded;
      loaded.format = options.format == "json" ? Format::json : Format::table;
      loaded.bundle = parse_or_exit(options.model_path, err);
      if (!options.observe.empty()) {
        std::vector<ObservationLiteral> literals;
        for (const auto& text : options.observe)
          literals.push_back(parse_observation_literal(text));
        loaded.bundle.observations = ObservationSet(std::move(literals));
      }
      const auto findings = validate_bundle(loaded.bundle);
      out << render_check(loaded.bundle, findings, loaded.format);
      return findings.empty() ? kExitOk : kExitDomainError;
    }

    if (interpretations->parsed()) {
      const Loaded loaded = load(options, std::nullopt, err);
      const auto table =
          posterior_table(loaded.bundle.model, loaded.bundle.observations, loaded.limits);
      out << render_interpretations(table, loaded.format);
      return kExitOk;
    }

    if (diagnose_cmd->parsed()) {
      const Loaded loaded = load(options, utility_path, err);
      const auto& b = loaded.bundle;
      if (strategy == "all") {
        std::optional<DecisionProblem> problem;
        if (utility_path || !b.treatments.empty()) {
          problem = DecisionProblem{b.treatments, b.utility};
        }
        const auto report = compare_strategies(b.model, b.observations,
                                               problem ? &*problem : nullptr, loaded.limits);
        out << render_report(report, loaded.format);
        return kExitOk;
      }
      const Strategy s = *parse_strategy(strategy);
      if (s == Strategy::abductive && !b.observations.all_positive()) {
        throw DiagnosisError(ErrorCode::negative_observation,
                             "abduction requires positive observations");
      }
      const auto table = posterior_table(b.model, b.observations, loaded.limits);
      const auto ranking = diagnose(s, b.model, table, b.observations, loaded.limits);
      out << render_ranking(ranking, table, loaded.format);
      return kExitOk;
    }

    if (treat->parsed()) {
      const Loaded loaded = load(options, utility_path, err);
      const auto& b = loaded.bundle;
      if (b.treatments.empty()) {
        err << "error: no treatments declared\n";
        return kExitDomainError;
      }
      const DecisionProblem problem{b.treatments, b.utility};
      const auto table = posterior_table(b.model, b.observations, loaded.limits);
      const auto decision = optimal_treatment(table, problem, loaded.limits);
      out << render_treatment(decision, problem, table, loaded.format);
      return kExitOk;
    }

    if (cover->parsed()) {
      if (!(mass > 0.0)) {
        err << "error: --mass must be greater than 0\n";
        return kExitUsageError;
      }
      const Loaded loaded = load(options, std::nullopt, err);
      const auto table =
          posterior_table(loaded.bundle.model, loaded.bundle.observations, loaded.limits);
      out << render_cover(covering_mass_set(table, mass), mass, table, loaded.format);
      return kExitOk;
    }
  } catch (const Exit& e) {
    return e.code;
  } catch (const ParseFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const DiagnosisError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace diagnoscope::cli
