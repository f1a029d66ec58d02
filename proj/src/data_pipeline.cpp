#include "pfml/data_pipeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pfml/linear_model.hpp"

namespace pfml {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ", column '" + column +
                                           "': cannot parse '" + cell + "' as a number");
  }
  return value;
}

int parse_binary(const std::string& cell, std::size_t row, const std::string& column) {
  const double v = parse_double(cell, row, column);
  if (v != 0.0 && v != 1.0) {
    throw Error(ErrorCode::NonBinaryColumn, "row " + std::to_string(row) + ", column '" +
                                                column + "': value " + cell +
                                                " is not in {0,1}");
  }
  return static_cast<int>(v);
}

std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

// 4:1:1 allocation by largest remainder; ties resolved in part order.
std::array<std::size_t, 3> allocate_parts(std::size_t n, const SplitSpec& spec) {
  const std::array<double, 3> weights = {static_cast<double>(spec.clean_ratio),
                                         static_cast<double>(spec.attack_ratio),
                                         static_cast<double>(spec.test_ratio)};
  const double total = weights[0] + weights[1] + weights[2];
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double quota = static_cast<double>(n) * weights[i] / total;
    sizes[i] = static_cast<std::size_t>(std::floor(quota));
    remainders[i] = quota - std::floor(quota);
    assigned += sizes[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
    sizes[order[k % 3]] += 1;
  }
  return sizes;
}

Dataset subset(const Dataset& d, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.feature_names = d.feature_names;
  out.binary_feature_indices = d.binary_feature_indices;
  out.samples.reserve(indices.size());
  for (std::size_t i : indices) {
    out.samples.push_back(d.samples[i]);
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const Dataset& d,
               const std::string& sensitive_column, const std::string& label_column,
               const std::vector<std::string>& roles) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  }
  for (const std::string& name : d.feature_names) {
    out << name << ',';
  }
  out << sensitive_column << ',' << label_column << ",role\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Sample& s = d.samples[i];
    for (double v : s.features) {
      out << format_double(v) << ',';
    }
    out << s.sensitive << ',' << s.label << ',' << roles[i] << '\n';
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void SplitSpec::validate() const {
  if (clean_ratio <= 0 || attack_ratio <= 0 || test_ratio <= 0) {
    throw Error(ErrorCode::InvalidArgument, "split ratios must be positive");
  }
  if (!(easy_fraction > 0.0 && easy_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "easy_fraction must lie in (0,1)");
  }
}

Dataset load_csv(const std::filesystem::path& path, const std::string& sensitive_column,
                 const std::string& label_column) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, path.string() + ": missing header row");
  }
  const std::vector<std::string> header = split_line(line);

  std::size_t sensitive_idx = header.size();
  std::size_t label_idx = header.size();
  std::vector<std::size_t> feature_cols;
  Dataset d;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == sensitive_column) {
      sensitive_idx = c;
    } else if (header[c] == label_column) {
      label_idx = c;
    } else if (header[c] != "role") {
      feature_cols.push_back(c);
      d.feature_names.push_back(header[c]);
    }
  }
  if (sensitive_idx == header.size()) {
    throw Error(ErrorCode::MissingColumn, "column '" + sensitive_column + "' not found");
  }
  if (label_idx == header.size()) {
    throw Error(ErrorCode::MissingColumn, "column '" + label_column + "' not found");
  }

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError,
                  "row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                      " cells, found " + std::to_string(cells.size()));
    }
    Sample s;
    s.features.reserve(feature_cols.size());
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      s.features.push_back(parse_double(cells[feature_cols[k]], row, d.feature_names[k]));
    }
    s.sensitive = parse_binary(cells[sensitive_idx], row, sensitive_column);
    s.label = parse_binary(cells[label_idx], row, label_column);
    d.samples.push_back(std::move(s));
  }
  if (d.samples.empty()) {
    throw Error(ErrorCode::EmptyDataset, path.string() + ": no data rows");
  }

  // Auto-register feature columns holding only {0,1}.
  for (std::size_t j = 0; j < d.feature_names.size(); ++j) {
    bool binary = true;
    for (const Sample& s : d.samples) {
      if (s.features[j] != 0.0 && s.features[j] != 1.0) {
        binary = false;
        break;
      }
    }
    if (binary) {
      d.binary_feature_indices.push_back(j);
    }
  }
  validate_dataset(d);
  return d;
}

Dataset preprocess(const Dataset& d, bool standardize) {
  validate_dataset(d);
  if (!standardize) {
    return d;
  }
  Dataset out = d;
  const std::size_t dim = d.dim();
  const double n = static_cast<double>(d.size());
  std::vector<bool> binary(dim, false);
  for (std::size_t j : d.binary_feature_indices) {
    binary[j] = true;
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (binary[j]) continue;
    double mean = 0.0;
    for (const Sample& s : d.samples) {
      mean += s.features[j];
    }
    mean /= n;
    double var = 0.0;
    for (const Sample& s : d.samples) {
      const double dev = s.features[j] - mean;
      var += dev * dev;
    }
    var /= n;
    if (var == 0.0) continue;  // constant column
    const double inv_std = 1.0 / std::sqrt(var);
    for (Sample& s : out.samples) {
      s.features[j] = (s.features[j] - mean) * inv_std;
    }
  }
  return out;
}

SplitResult loss_ranked_split(const Dataset& d, const SplitSpec& spec,
                              const TrainHyper& pretrain) {
  validate_dataset(d);
  spec.validate();
  if (d.size() < 12) {
    throw Error(ErrorCode::TooSmall, "need at least 12 samples to split");
  }

  // Ranking model: unpenalized SVM over the whole input.
  const TrainReport report = train_penalized(d, FairnessNotion::DemographicParity, 0.0,
                                             pretrain.eta, pretrain.iters,
                                             zero_params(d.dim()));
  std::vector<double> losses(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    losses[i] = hinge_loss(report.final_params, d.samples[i]);
  }
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (losses[a] != losses[b]) return losses[a] < losses[b];
    return a < b;
  });

  const std::size_t n_easy = round_half_up(spec.easy_fraction * static_cast<double>(d.size()));
  const std::vector<std::size_t> easy(order.begin(), order.begin() + n_easy);
  const std::vector<std::size_t> hard(order.begin() + n_easy, order.end());
  const auto sizes = allocate_parts(n_easy, spec);
  if (sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0) {
    throw Error(ErrorCode::TooSmall, "a split part would be empty");
  }

  // Reseeded retry until D_c covers all four (y,s) cells (needed by the
  // equalized-odds relaxation).
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::size_t> shuffled = easy;
    std::mt19937_64 rng(spec.seed + attempt);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    std::vector<std::size_t> clean_idx(shuffled.begin(), shuffled.begin() + sizes[0]);
    std::vector<std::size_t> attack_idx(shuffled.begin() + sizes[0],
                                        shuffled.begin() + sizes[0] + sizes[1]);
    std::vector<std::size_t> test_idx(shuffled.begin() + sizes[0] + sizes[1], shuffled.end());

    SplitResult result;
    result.d_c = subset(d, clean_idx);
    if (!has_full_group_coverage(result.d_c)) {
      continue;
    }
    attack_idx.insert(attack_idx.end(), hard.begin(), hard.end());
    result.d_k = subset(d, attack_idx);
    result.d_test = subset(d, test_idx);
    result.hard_flags.assign(result.d_k.size(), false);
    for (std::size_t i = sizes[1]; i < result.d_k.size(); ++i) {
      result.hard_flags[i] = true;
    }
    return result;
  }
  throw Error(ErrorCode::GroupCoverageUnsatisfiable,
              "could not cover all four (y,s) cells in the clean split after 100 reseeds");
}

void write_split_dir(const std::filesystem::path& dir, const SplitResult& split,
                     const std::string& sensitive_column, const std::string& label_column,
                     const SplitSpec& spec, const TrainHyper& pretrain) {
  std::filesystem::create_directories(dir);
  write_csv(dir / "clean.csv", split.d_c, sensitive_column, label_column,
            std::vector<std::string>(split.d_c.size(), "clean"));
  std::vector<std::string> attack_roles(split.d_k.size());
  std::size_t hard_count = 0;
  for (std::size_t i = 0; i < split.d_k.size(); ++i) {
    attack_roles[i] = split.hard_flags[i] ? "attack_hard" : "attack";
    hard_count += split.hard_flags[i] ? 1 : 0;
  }
  write_csv(dir / "attack.csv", split.d_k, sensitive_column, label_column, attack_roles);
  write_csv(dir / "test.csv", split.d_test, sensitive_column, label_column,
            std::vector<std::string>(split.d_test.size(), "test"));

  nlohmann::json manifest;
  manifest["sensitive_column"] = sensitive_column;
  manifest["label_column"] = label_column;
  manifest["feature_names"] = split.d_c.feature_names;
  manifest["binary_feature_indices"] = split.d_c.binary_feature_indices;
  manifest["counts"] = {{"clean", split.d_c.size()},
                        {"attack", split.d_k.size()},
                        {"attack_hard", hard_count},
                        {"test", split.d_test.size()}};
  manifest["seed"] = spec.seed;
  manifest["ratios"] = {spec.clean_ratio, spec.attack_ratio, spec.test_ratio};
  manifest["easy_fraction"] = spec.easy_fraction;
  manifest["ranking_model"] = {{"eta", pretrain.eta}, {"iters", pretrain.iters}};
  std::ofstream out(dir / "manifest.json");
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write manifest in " + dir.string());
  }
  out << manifest.dump(2) << '\n';
}

SplitResult read_split_dir(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open manifest in " + dir.string());
  }
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "malformed manifest: " + std::string(e.what()));
  }
  const std::string sensitive = manifest.at("sensitive_column").get<std::string>();
  const std::string label = manifest.at("label_column").get<std::string>();
  const auto binary = manifest.at("binary_feature_indices").get<std::vector<std::size_t>>();

  SplitResult result;
  result.d_c = load_csv(dir / "clean.csv", sensitive, label);
  result.d_test = load_csv(dir / "test.csv", sensitive, label);

  // The attack file needs its role column to recover hard-example flags.
  std::ifstream attack_file(dir / "attack.csv");
  if (!attack_file) {
    throw Error(ErrorCode::IoError, "cannot open " + (dir / "attack.csv").string());
  }
  std::string line;
  std::getline(attack_file, line);
  const std::vector<std::string> header = split_line(line);
  std::size_t role_idx = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "role") role_idx = c;
  }
  if (role_idx == header.size()) {
    throw Error(ErrorCode::MissingColumn, "attack.csv has no role column");
  }
  std::size_t row = 1;
  while (std::getline(attack_file, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError, "attack.csv row " + std::to_string(row) +
                                             ": wrong cell count");
    }
    result.hard_flags.push_back(cells[role_idx] == "attack_hard");
  }
  result.d_k = load_csv(dir / "attack.csv", sensitive, label);

  // Binary columns are a property of the full input; the auto-registration on
  // a subset could over-report, so restore the manifest's list.
  result.d_c.binary_feature_indices = binary;
  result.d_k.binary_feature_indices = binary;
  result.d_test.binary_feature_indices = binary;
  validate_dataset(result.d_c);
  validate_dataset(result.d_k);
  validate_dataset(result.d_test);
  return result;
}

}  // namespace pfml
