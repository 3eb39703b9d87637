#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "wordorder/dataset.hpp"

namespace wordorder {

// Pretrained language vectors from one source file.  All vectors share the
// dimension inferred from the first record.
struct VectorSet {
  std::string source_label;
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>> vectors;  // code -> values
};

// One record per line: language code then d numeric fields, separated by any
// run of spaces or tabs.  Blank lines and '#' comments are skipped.  Throws
// DataError on an inconsistent dimension, a non-numeric or non-finite field,
// or a duplicate code, naming the line.
VectorSet load_vectors(std::istream& in, std::string source_label);

// Alias file: two whitespace-separated columns (from-code to-code);
// '#' comments allowed.  Throws ConfigError on malformed lines.
std::map<std::string, std::string> load_aliases(std::istream& in);

// Regression-ready matrices for one feature: one row of X and one entry of y
// per language, ordered by language code.
struct RegressionDataset {
  std::vector<std::string> languages;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::string feature;
  std::string source;
};

// Inner join on language code.  Rows lacking a vector or a defined
// proportion for the feature are dropped.  The table must already hold one
// treebank per language; a second row for the same language throws.  Throws
// DataError when the intersection is empty.
RegressionDataset join(const DatasetTable& table, const VectorSet& vectors,
                       const std::string& feature);

}  // namespace wordorder
