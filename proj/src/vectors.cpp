#include "wordorder/vectors.hpp"

#include <cmath>

#include "wordorder/common.hpp"

namespace wordorder {

VectorSet load_vectors(std::istream& in, std::string source_label) {
  VectorSet set;
  set.source_label = std::move(source_label);
  std::uint64_t line_number = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < 2)
      throw DataError("vector file line " + std::to_string(line_number) +
                      ": no numeric fields after code '" +
                      std::string(fields[0]) + "'");

    std::string code(fields[0]);
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = parse_double(fields[i]);
      if (!v)
        throw DataError("vector file line " + std::to_string(line_number) +
                        ": non-numeric field '" + std::string(fields[i]) + "'");
      if (!std::isfinite(*v))
        throw DataError("vector file line " + std::to_string(line_number) +
                        ": non-finite value '" + std::string(fields[i]) + "'");
      values.push_back(*v);
    }

    if (set.vectors.empty()) {
      set.dim = values.size();
    } else if (values.size() != set.dim) {
      throw DataError("vector file line " + std::to_string(line_number) +
                      ": dimension " + std::to_string(values.size()) +
                      " != " + std::to_string(set.dim) +
                      " inferred from the first record");
    }
    if (!set.vectors.emplace(code, std::move(values)).second)
      throw DataError("vector file line " + std::to_string(line_number) +
                      ": duplicate code '" + code + "'");
  }
  return set;
}

std::map<std::string, std::string> load_aliases(std::istream& in) {
  std::map<std::string, std::string> aliases;
  std::uint64_t line_number = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    std::size_t hash = view.find('#');
    if (hash != std::string_view::npos) view = view.substr(0, hash);
    auto fields = split_whitespace(view);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw ConfigError("alias file line " + std::to_string(line_number) +
                        ": expected two columns, got " +
                        std::to_string(fields.size()));
    auto [it, inserted] =
        aliases.emplace(std::string(fields[0]), std::string(fields[1]));
    if (!inserted)
      throw ConfigError("alias file line " + std::to_string(line_number) +
                        ": duplicate alias for '" + std::string(fields[0]) +
                        "'");
  }
  return aliases;
}

RegressionDataset join(const DatasetTable& table, const VectorSet& vectors,
                       const std::string& feature) {
  // language -> target proportion; sorted, so the output order is canonical
  // regardless of table row order.
  std::map<std::string, double> targets;
  for (const DatasetRow& row : table.rows) {
    if (row.feature != feature || !row.proportion) continue;
    if (!targets.emplace(row.language_code, *row.proportion).second)
      throw DataError("language '" + row.language_code +
                      "' has several rows for feature '" + feature +
                      "'; reduce to one treebank per language first");
  }

  RegressionDataset dataset;
  dataset.feature = feature;
  dataset.source = vectors.source_label;
  for (const auto& [language, proportion] : targets) {
    if (vectors.vectors.count(language)) dataset.languages.push_back(language);
  }
  const auto n = static_cast<Eigen::Index>(dataset.languages.size());
  if (n == 0)
    throw DataError("no language has both a vector from '" +
                    vectors.source_label + "' and a defined '" + feature +
                    "' proportion");
  dataset.X.resize(n, static_cast<Eigen::Index>(vectors.dim));
  dataset.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string& language = dataset.languages[static_cast<std::size_t>(i)];
    const std::vector<double>& values = vectors.vectors.at(language);
    for (std::size_t j = 0; j < vectors.dim; ++j)
      dataset.X(i, static_cast<Eigen::Index>(j)) = values[j];
    dataset.y(i) = targets.at(language);
  }
  return dataset;
}

}  // namespace wordorder
