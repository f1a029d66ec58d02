#include "pfml/cli_commands.hpp"

#include <fstream>

#include <json.hpp>

#include "pfml/data_pipeline.hpp"
#include "pfml/linear_model.hpp"
#include "pfml/rng.hpp"

namespace pfml::cli {

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

void write_poison_csv(const std::filesystem::path& path, const Dataset& poison,
                      const std::string& sensitive_column, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  for (const std::string& name : poison.feature_names) {
    out << name << ',';
  }
  out << sensitive_column << ',' << label_column << "\n";
  for (const Sample& s : poison.samples) {
    for (double v : s.features) {
      out << format_double(v) << ',';
    }
    out << s.sensitive << ',' << s.label << '\n';
  }
}

std::pair<std::string, std::string> column_names(const std::filesystem::path& split_dir) {
  std::ifstream in(split_dir / "manifest.json");
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open manifest in " + split_dir.string());
  }
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "malformed manifest: " + std::string(e.what()));
  }
  return {manifest.at("sensitive_column").get<std::string>(),
          manifest.at("label_column").get<std::string>()};
}

}  // namespace

void cmd_prepare(const PrepareOptions& opt) {
  Dataset raw = load_csv(opt.input, opt.sensitive_column, opt.label_column);
  Dataset data = preprocess(raw, opt.standardize);

  SplitSpec spec;
  spec.easy_fraction = opt.easy_fraction;
  spec.seed = opt.seed;
  SplitResult split = loss_ranked_split(data, spec, opt.ranking);

  std::filesystem::create_directories(opt.out_dir);
  write_split_dir(opt.out_dir / "splits", split, opt.sensitive_column, opt.label_column, spec,
                  opt.ranking);

  nlohmann::json config;
  config["command"] = "prepare";
  config["input"] = opt.input.string();
  config["sensitive_column"] = opt.sensitive_column;
  config["label_column"] = opt.label_column;
  config["seed"] = opt.seed;
  config["standardize"] = opt.standardize;
  config["easy_fraction"] = opt.easy_fraction;
  config["ranking_model"] = {{"eta", opt.ranking.eta}, {"iters", opt.ranking.iters}};
  write_json(opt.out_dir / "config.json", config);
}

void cmd_attack(const AttackOptions& opt) {
  opt.config.validate();
  const SplitResult split = read_split_dir(opt.split_dir);
  const auto [sensitive, label] = column_names(opt.split_dir);

  PoisonPool pool;
  const std::uint64_t pool_seed =
      derive_seed(opt.config.seed, std::string("pool/") + to_string(opt.config.variant));
  switch (opt.config.variant) {
    case AttackVariant::AS: pool = build_as(split.d_k); break;
    case AttackVariant::AF:
      pool = build_af(split.d_k, opt.config.flip_fraction, pool_seed);
      break;
    case AttackVariant::AM: pool = build_am(split.d_k, pool_seed); break;
  }

  const AttackResult result = run_pfml(split.d_c, pool, opt.config);

  std::filesystem::create_directories(opt.out_dir);
  write_poison_csv(opt.out_dir / "poison.csv", result.poison_set, sensitive, label);
  write_trace_csv(opt.out_dir / "trace.csv", result);

  nlohmann::json theta;
  theta["weights"] = result.final_theta.weights;
  theta["bias"] = result.final_theta.bias;
  theta["gamma"] = result.gamma;
  write_json(opt.out_dir / "theta.json", theta);

  nlohmann::json config;
  config["command"] = "attack";
  config["splits"] = opt.split_dir.string();
  config["variant"] = to_string(opt.config.variant);
  config["notion"] = to_string(opt.config.notion);
  config["alpha"] = opt.config.alpha;
  config["epsilon"] = opt.config.epsilon;
  config["lambda"] = opt.config.lambda;
  config["eta"] = opt.config.eta;
  config["pretrain_iters"] = opt.config.pretrain_iters;
  config["flip_fraction"] = opt.config.flip_fraction;
  config["seed"] = opt.config.seed;
  if (opt.config.gamma.mode == GammaSpec::Mode::Fixed) {
    config["gamma"] = opt.config.gamma.value;
  } else {
    config["gamma"] = "auto";
  }
  write_json(opt.out_dir / "config.json", config);
}

void cmd_experiment(const ExperimentOptions& opt) {
  const SplitResult split = read_split_dir(opt.split_dir);
  const ExperimentGrid grid = grid_from_json_file(opt.grid_file);

  const ExperimentResult result =
      run_experiment(split.d_c, split.d_k, split.d_test, split.hard_flags, grid);

  std::filesystem::create_directories(opt.out_dir);
  write_report_csv(opt.out_dir / "report.csv", result);
  write_report_json(opt.out_dir / "report.json", result);
  // Wall-clock goes to its own file so report files stay byte-reproducible.
  write_timings_csv(opt.out_dir / "timings.csv", result);

  nlohmann::json config;
  config["command"] = "experiment";
  config["splits"] = opt.split_dir.string();
  config["grid_file"] = opt.grid_file.string();
  write_json(opt.out_dir / "config.json", config);
}

void cmd_evaluate(const EvaluateOptions& opt) {
  const SplitResult split = read_split_dir(opt.split_dir);
  const auto [sensitive, label] = column_names(opt.split_dir);

  Dataset train = split.d_c;
  if (!opt.poison_csv.empty()) {
    const Dataset poison = load_csv(opt.poison_csv, sensitive, label);
    train = concat(train, poison);
  }
  const ModelParams theta = train_victim(train, opt.notion, opt.lambda, opt.victim);
  EvalReport report = evaluate(theta, split.d_test);
  report.attack_id = opt.poison_csv.empty() ? "Benign" : "Poisoned";
  report.notion = opt.notion;
  report.victim_lambda = opt.lambda;

  std::filesystem::create_directories(opt.out_dir);
  nlohmann::json j;
  j["attack_id"] = report.attack_id;
  j["notion"] = to_string(report.notion);
  j["victim_lambda"] = report.victim_lambda;
  j["accuracy"] = report.accuracy;
  j["dp_gap"] = report.dp_gap;
  j["eo_gap"] = report.eo_gap;
  write_json(opt.out_dir / "eval.json", j);
}

}  // namespace pfml::cli
