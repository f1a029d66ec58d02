#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pfml/cli_commands.hpp"

namespace {

using pfml::cli::AttackOptions;
using pfml::cli::EvaluateOptions;
using pfml::cli::ExperimentOptions;
using pfml::cli::PrepareOptions;

int dispatch(int argc, char** argv) {
  CLI::App app{"Poisoning attacks against fairness-penalized linear classifiers"};
  app.require_subcommand(1);

  PrepareOptions prep;
  auto* prepare = app.add_subcommand("prepare", "Split an input CSV into clean/attack/test sets");
  prepare->add_option("--input", prep.input, "Input CSV with header row")->required();
  prepare->add_option("--sensitive", prep.sensitive_column, "Sensitive column name")->required();
  prepare->add_option("--label", prep.label_column, "Label column name")->required();
  prepare->add_option("--seed", prep.seed, "Split seed")->capture_default_str();
  prepare->add_option("--out", prep.out_dir, "Output directory")->required();
  prepare->add_flag("--no-standardize", [&prep](std::int64_t) { prep.standardize = false; },
                    "Skip zero-mean unit-variance scaling of non-binary features");
  prepare->add_option("--easy-fraction", prep.easy_fraction,
                      "Fraction of lowest-loss samples split 4:1:1")->capture_default_str();
  prepare->add_option("--eta", prep.ranking.eta, "Ranking-model learning rate")
      ->capture_default_str();
  prepare->add_option("--iters", prep.ranking.iters, "Ranking-model iterations")
      ->capture_default_str();

  AttackOptions atk;
  std::string atk_variant = "AS";
  std::string atk_notion = "EO";
  double atk_gamma = 0.0;
  auto* attack = app.add_subcommand("attack", "Generate a poisoning set from prepared splits");
  attack->add_option("--splits", atk.split_dir, "Prepared split directory")->required();
  attack->add_option("--out", atk.out_dir, "Output directory")->required();
  attack->add_option("--variant", atk_variant, "Attack variant: AS, AF, or AM")
      ->capture_default_str();
  attack->add_option("--notion", atk.config.notion, "Fairness notion: DP or EO")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, pfml::FairnessNotion>{
              {"DP", pfml::FairnessNotion::DemographicParity},
              {"EO", pfml::FairnessNotion::EqualizedOdds}},
          CLI::ignore_case))
      ->default_str("EO");
  attack->add_option("--alpha", atk.config.alpha, "Accuracy/fairness balance in [0,1]")
      ->capture_default_str();
  attack->add_option("--epsilon", atk.config.epsilon, "Poison fraction of |clean|")
      ->capture_default_str();
  attack->add_option("--lambda", atk.config.lambda, "Fairness penalty multiplier")
      ->capture_default_str();
  attack->add_option("--eta", atk.config.eta, "Learning rate")->capture_default_str();
  attack->add_option("--pretrain-iters", atk.config.pretrain_iters, "Pretraining steps")
      ->capture_default_str();
  attack->add_option("--flip-fraction", atk.config.flip_fraction,
                     "Label-flip fraction for variant AF")->capture_default_str();
  attack->add_option("--gamma", atk_gamma, "Fixed scaling factor (default: auto)");
  attack->add_option("--seed", atk.config.seed, "Attack seed")->capture_default_str();

  ExperimentOptions exp;
  auto* experiment = app.add_subcommand("experiment", "Run a full attack/victim/report sweep");
  experiment->add_option("--splits", exp.split_dir, "Prepared split directory")->required();
  experiment->add_option("--grid", exp.grid_file, "Grid JSON file")->required();
  experiment->add_option("--out", exp.out_dir, "Output directory")->required();

  EvaluateOptions ev;
  std::string ev_notion = "EO";
  auto* evaluate = app.add_subcommand("evaluate", "Train a victim and report test metrics");
  evaluate->add_option("--splits", ev.split_dir, "Prepared split directory")->required();
  evaluate->add_option("--poison", ev.poison_csv, "Poison CSV to append to the clean set");
  evaluate->add_option("--notion", ev_notion, "Victim fairness notion: DP or EO")
      ->capture_default_str();
  evaluate->add_option("--lambda", ev.lambda, "Victim fairness penalty")->capture_default_str();
  evaluate->add_option("--eta", ev.victim.eta, "Victim learning rate")->capture_default_str();
  evaluate->add_option("--iters", ev.victim.iters, "Victim training iterations")
      ->capture_default_str();
  evaluate->add_option("--out", ev.out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (prepare->parsed()) {
      pfml::cli::cmd_prepare(prep);
    } else if (attack->parsed()) {
      atk.config.variant = pfml::variant_from_string(atk_variant);
      if (attack->count("--gamma") > 0) {
        atk.config.gamma = pfml::GammaSpec::fixed(atk_gamma);
      }
      atk.config.validate();
      pfml::cli::cmd_attack(atk);
    } else if (experiment->parsed()) {
      pfml::cli::cmd_experiment(exp);
    } else if (evaluate->parsed()) {
      ev.notion = pfml::notion_from_string(ev_notion);
      pfml::cli::cmd_evaluate(ev);
    }
  } catch (const pfml::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", pfml::error_name(e.code()), e.what());
    return pfml::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
