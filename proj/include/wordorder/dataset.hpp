#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wordorder/extraction.hpp"

namespace wordorder {

struct DatasetRow {
  std::string treebank_id;
  std::string language_code;
  std::string feature;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  std::optional<double> proportion;  // absent iff count_a + count_b == 0

  std::uint64_t total() const { return count_a + count_b; }

  friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

// One row per (treebank, feature).  Rows keep the order they were built in;
// consumers that need a canonical order sort for themselves.
struct DatasetTable {
  std::vector<DatasetRow> rows;

  friend bool operator==(const DatasetTable&, const DatasetTable&) = default;
};

// Flattens treebank records into a table.  Throws DataError when two records
// share a treebank_id.
DatasetTable aggregate(const std::vector<TreebankRecord>& records);

// For each language with several treebanks, keeps the rows of exactly one,
// chosen uniformly by a seeded deterministic generator.  Languages are
// visited in sorted order so the same seed always selects the same
// treebanks.  Single-treebank languages pass through without consuming
// randomness, which makes the operation idempotent.
DatasetTable select_one_treebank_per_language(const DatasetTable& table,
                                              std::uint64_t seed);

// Proportion >= 0.5 maps to 1, everything below to 0.
int discretize(double proportion);

// Throws DataError on an absent proportion; callers filter undefined rows.
int discretize(const std::optional<double>& proportion);

struct HistogramSeries {
  std::string feature;
  std::array<double, 11> bin_edges{};   // 0.0, 0.1, ..., 1.0
  std::array<std::uint64_t, 10> bin_counts{};
  std::string source;  // "gradient" or "categorical-reference"
};

// Bins the defined proportions of one feature into 10 equal-width bins over
// [0,1]; the last bin is right-closed so 1.0 lands in bin 10.  Throws
// DataError when the table has no rows for the feature.
HistogramSeries density(const DatasetTable& table, const std::string& feature);

// Renames language codes through an alias map; codes without an entry pass
// through.
DatasetTable apply_language_aliases(const DatasetTable& table,
                                    const std::map<std::string, std::string>& aliases);

// Dataset CSV:
//   header  treebank,language,feature,count_a,count_b,total,proportion
//   absent proportions serialize as an empty field (0 is a meaningful value);
//   defined ones carry 17 significant digits so a round trip is exact.
// A stamp comment line precedes the header.
void write_dataset_csv(std::ostream& out, const DatasetTable& table,
                       std::uint64_t seed);

// Parses a dataset CSV, skipping leading '#' comment lines.  Throws
// DataError (with a line number) on a bad header, field count, number, or a
// total that does not equal count_a + count_b.
DatasetTable read_dataset_csv(std::istream& in);

// Externally supplied categorical reference values, one numeric value in
// [0,1] per (feature, language) row; header feature,language,value.
struct ReferenceRow {
  std::string feature;
  std::string language;
  double value = 0.0;
};

std::vector<ReferenceRow> read_reference_csv(std::istream& in);

// Bins reference rows per feature, tagged "categorical-reference"; features
// appear in first-occurrence order.
std::vector<HistogramSeries> reference_histograms(const std::vector<ReferenceRow>& rows);

// Density TSV: feature, bin_lo, bin_hi, count, source.  Edges print with one
// decimal (they are exact tenths); a stamp comment line comes first.
void write_density_tsv(std::ostream& out,
                       const std::vector<HistogramSeries>& series,
                       std::uint64_t seed);

}  // namespace wordorder
