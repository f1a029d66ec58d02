#include "pfml/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "pfml/linear_model.hpp"
#include "pfml/rng.hpp"

namespace pfml {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell_or_empty(double v) {
  return std::isnan(v) ? std::string() : format_double(v);
}

std::string group_key(const EvalReport& r) {
  return r.attack_id + '|' + to_string(r.notion) + '|' + format_double(r.victim_lambda) +
         '|' + cell_or_empty(r.alpha) + '|' + cell_or_empty(r.epsilon);
}

}  // namespace

void ExperimentGrid::validate() const {
  if (alphas.empty() || epsilons.empty() || lambdas.empty() || notions.empty() ||
      variants.empty()) {
    throw Error(ErrorCode::InvalidArgument, "experiment grid has an empty axis");
  }
  if (repeats < 1) {
    throw Error(ErrorCode::InvalidArgument, "repeats must be >= 1");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
    }
  }
  for (double e : epsilons) {
    if (!(e > 0.0 && e <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
    }
  }
  for (double l : lambdas) {
    if (!(l >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
    }
  }
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "flip_fraction must lie in [0, 1]");
  }
}

ModelParams train_victim(const Dataset& train, FairnessNotion notion, double lambda,
                         const TrainHyper& hyper) {
  return train_penalized(train, notion, lambda, hyper.eta, hyper.iters,
                         zero_params(train.dim()))
      .final_params;
}

EvalReport evaluate(const ModelParams& theta, const Dataset& test) {
  validate_dataset(test);
  std::size_t correct = 0;
  for (const Sample& s : test.samples) {
    correct += predict(theta, s.features) == s.label ? 1 : 0;
  }
  EvalReport report;
  report.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  report.dp_gap = dp_gap(theta, test);
  report.eo_gap = eo_gap(theta, test);
  return report;
}

Dataset concat(const Dataset& a, const Dataset& b) {
  Dataset out = a;
  out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
  return out;
}

ExperimentResult run_experiment(const Dataset& dc, const Dataset& dk, const Dataset& dtest,
                                const std::vector<bool>& hard_flags,
                                const ExperimentGrid& grid) {
  grid.validate();
  validate_dataset(dc);
  validate_dataset(dk);
  validate_dataset(dtest);
  const std::size_t n = dc.size();

  ExperimentResult result;
  for (FairnessNotion notion : grid.notions) {
    for (double lambda : grid.lambdas) {
      {
        const ModelParams theta = train_victim(dc, notion, lambda, grid.victim_hyper);
        EvalReport row = evaluate(theta, dtest);
        row.attack_id = "Benign";
        row.notion = notion;
        row.victim_lambda = lambda;
        row.alpha = kNaN;
        row.epsilon = kNaN;
        row.seed = grid.base_seed;
        result.rows.push_back(row);
      }
      for (double eps : grid.epsilons) {
        const std::size_t count = poison_count(eps, n);
        for (int r = 0; r < grid.repeats; ++r) {
          const std::uint64_t run_seed = grid.base_seed + static_cast<std::uint64_t>(r);
          for (BaselineKind kind : {BaselineKind::RS, BaselineKind::LF, BaselineKind::HE}) {
            const std::uint64_t sd =
                derive_seed(run_seed, std::string("baseline/") + to_string(kind));
            const Dataset dp = baseline_select(dk, kind, count, hard_flags, sd);
            const ModelParams theta =
                train_victim(concat(dc, dp), notion, lambda, grid.victim_hyper);
            EvalReport row = evaluate(theta, dtest);
            row.attack_id = to_string(kind);
            row.notion = notion;
            row.victim_lambda = lambda;
            row.alpha = kNaN;
            row.epsilon = eps;
            row.seed = run_seed;
            result.rows.push_back(row);
          }
          for (AttackVariant variant : grid.variants) {
            PoisonPool pool;
            const std::uint64_t pool_seed =
                derive_seed(run_seed, std::string("pool/") + to_string(variant));
            switch (variant) {
              case AttackVariant::AS: pool = build_as(dk); break;
              case AttackVariant::AF: pool = build_af(dk, grid.flip_fraction, pool_seed); break;
              case AttackVariant::AM: pool = build_am(dk, pool_seed); break;
            }
            for (double alpha : grid.alphas) {
              AttackConfig cfg;
              cfg.alpha = alpha;
              cfg.epsilon = eps;
              cfg.lambda = lambda;
              cfg.eta = grid.victim_hyper.eta;
              cfg.notion = notion;
              cfg.variant = variant;
              cfg.pretrain_iters = grid.victim_hyper.iters;
              cfg.flip_fraction = grid.flip_fraction;
              cfg.seed = run_seed;

              const auto t0 = std::chrono::steady_clock::now();
              const AttackResult attack = run_pfml(dc, pool, cfg);
              const auto t1 = std::chrono::steady_clock::now();

              const ModelParams theta = train_victim(concat(dc, attack.poison_set), notion,
                                                     lambda, grid.victim_hyper);
              EvalReport row = evaluate(theta, dtest);
              row.attack_id = std::string("PFML-") + to_string(variant);
              row.notion = notion;
              row.victim_lambda = lambda;
              row.alpha = alpha;
              row.epsilon = eps;
              row.seed = run_seed;
              row.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
              result.rows.push_back(row);
            }
          }
        }
      }
    }
  }

  // Mean and population standard deviation over repeats, grouped by cell.
  std::vector<std::string> key_order;
  std::map<std::string, std::vector<const EvalReport*>> groups;
  for (const EvalReport& row : result.rows) {
    const std::string key = group_key(row);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) key_order.push_back(key);
    it->second.push_back(&row);
  }
  for (const std::string& key : key_order) {
    const auto& members = groups[key];
    AggregateReport agg;
    agg.attack_id = members.front()->attack_id;
    agg.notion = members.front()->notion;
    agg.victim_lambda = members.front()->victim_lambda;
    agg.alpha = members.front()->alpha;
    agg.epsilon = members.front()->epsilon;
    agg.repeats = static_cast<int>(members.size());
    const double m = static_cast<double>(members.size());
    for (const EvalReport* r : members) {
      agg.mean_accuracy += r->accuracy / m;
      agg.mean_dp_gap += r->dp_gap / m;
      agg.mean_eo_gap += r->eo_gap / m;
    }
    for (const EvalReport* r : members) {
      agg.std_accuracy += (r->accuracy - agg.mean_accuracy) * (r->accuracy - agg.mean_accuracy) / m;
      agg.std_dp_gap += (r->dp_gap - agg.mean_dp_gap) * (r->dp_gap - agg.mean_dp_gap) / m;
      agg.std_eo_gap += (r->eo_gap - agg.mean_eo_gap) * (r->eo_gap - agg.mean_eo_gap) / m;
    }
    agg.std_accuracy = std::sqrt(agg.std_accuracy);
    agg.std_dp_gap = std::sqrt(agg.std_dp_gap);
    agg.std_eo_gap = std::sqrt(agg.std_eo_gap);
    result.aggregates.push_back(agg);
  }
  return result;
}

ExperimentGrid grid_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open grid file " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "malformed grid file: " + std::string(e.what()));
  }
  ExperimentGrid grid;
  try {
    grid.alphas = j.at("alphas").get<std::vector<double>>();
    grid.epsilons = j.at("epsilons").get<std::vector<double>>();
    grid.lambdas = j.at("lambdas").get<std::vector<double>>();
    for (const auto& s : j.at("notions")) {
      grid.notions.push_back(notion_from_string(s.get<std::string>()));
    }
    for (const auto& s : j.at("variants")) {
      grid.variants.push_back(variant_from_string(s.get<std::string>()));
    }
    grid.repeats = j.value("repeats", 1);
    grid.base_seed = j.value("base_seed", std::uint64_t{0});
    grid.victim_hyper.eta = j.value("eta", 0.001);
    grid.victim_hyper.iters = j.value("pretrain_iters", 2000);
    grid.flip_fraction = j.value("flip_fraction", 0.15);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "grid file field error: " + std::string(e.what()));
  }
  grid.validate();
  return grid;
}

void write_report_csv(const std::filesystem::path& path, const ExperimentResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << "row_type,attack_id,notion,victim_lambda,alpha,epsilon,seed,repeats,"
         "accuracy,dp_gap,eo_gap,std_accuracy,std_dp_gap,std_eo_gap\n";
  for (const EvalReport& r : result.rows) {
    out << "raw," << r.attack_id << ',' << to_string(r.notion) << ','
        << format_double(r.victim_lambda) << ',' << cell_or_empty(r.alpha) << ','
        << cell_or_empty(r.epsilon) << ',' << r.seed << ",," << format_double(r.accuracy)
        << ',' << format_double(r.dp_gap) << ',' << format_double(r.eo_gap) << ",,,\n";
  }
  for (const AggregateReport& a : result.aggregates) {
    out << "mean," << a.attack_id << ',' << to_string(a.notion) << ','
        << format_double(a.victim_lambda) << ',' << cell_or_empty(a.alpha) << ','
        << cell_or_empty(a.epsilon) << ",," << a.repeats << ','
        << format_double(a.mean_accuracy) << ',' << format_double(a.mean_dp_gap) << ','
        << format_double(a.mean_eo_gap) << ',' << format_double(a.std_accuracy) << ','
        << format_double(a.std_dp_gap) << ',' << format_double(a.std_eo_gap) << '\n';
  }
}

void write_report_json(const std::filesystem::path& path, const ExperimentResult& result) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const EvalReport& r : result.rows) {
    nlohmann::json row;
    row["attack_id"] = r.attack_id;
    row["notion"] = to_string(r.notion);
    row["victim_lambda"] = r.victim_lambda;
    if (!std::isnan(r.alpha)) row["alpha"] = r.alpha;
    if (!std::isnan(r.epsilon)) row["epsilon"] = r.epsilon;
    row["seed"] = r.seed;
    row["accuracy"] = r.accuracy;
    row["dp_gap"] = r.dp_gap;
    row["eo_gap"] = r.eo_gap;
    j["rows"].push_back(row);
  }
  j["aggregates"] = nlohmann::json::array();
  for (const AggregateReport& a : result.aggregates) {
    nlohmann::json row;
    row["attack_id"] = a.attack_id;
    row["notion"] = to_string(a.notion);
    row["victim_lambda"] = a.victim_lambda;
    if (!std::isnan(a.alpha)) row["alpha"] = a.alpha;
    if (!std::isnan(a.epsilon)) row["epsilon"] = a.epsilon;
    row["repeats"] = a.repeats;
    row["mean_accuracy"] = a.mean_accuracy;
    row["std_accuracy"] = a.std_accuracy;
    row["mean_dp_gap"] = a.mean_dp_gap;
    row["std_dp_gap"] = a.std_dp_gap;
    row["mean_eo_gap"] = a.mean_eo_gap;
    row["std_eo_gap"] = a.std_eo_gap;
    j["aggregates"].push_back(row);
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

void write_timings_csv(const std::filesystem::path& path, const ExperimentResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << "attack_id,notion,victim_lambda,alpha,epsilon,seed,runtime_seconds\n";
  for (const EvalReport& r : result.rows) {
    if (r.attack_id.rfind("PFML-", 0) != 0) continue;
    out << r.attack_id << ',' << to_string(r.notion) << ',' << format_double(r.victim_lambda)
        << ',' << cell_or_empty(r.alpha) << ',' << cell_or_empty(r.epsilon) << ',' << r.seed
        << ',' << format_double(r.runtime_seconds) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const AttackResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << "t,accuracy_loss,fairness_empirical,fairness_relaxed,combined_score\n";
  for (std::size_t t = 0; t < result.trace.size(); ++t) {
    const TraceRecord& r = result.trace[t];
    out << (t + 1) << ',' << format_double(r.accuracy_loss) << ','
        << format_double(r.fairness_empirical) << ',' << format_double(r.fairness_relaxed)
        << ',' << format_double(r.combined_score) << '\n';
  }
}

}  // namespace pfml
