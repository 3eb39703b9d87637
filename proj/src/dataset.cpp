#include "wordorder/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_set>

#include "wordorder/common.hpp"
#include "wordorder/random.hpp"

namespace wordorder {

namespace {

constexpr std::string_view kDatasetHeader =
    "treebank,language,feature,count_a,count_b,total,proportion";
constexpr std::string_view kReferenceHeader = "feature,language,value";

std::array<double, 11> tenth_edges() {
  std::array<double, 11> edges{};
  for (int i = 0; i <= 10; ++i) edges[i] = i / 10.0;
  return edges;
}

std::size_t bin_index(double p) {
  auto idx = static_cast<std::size_t>(p * 10.0);
  return idx > 9 ? 9 : idx;  // right-closed last bin: 1.0 -> bin 10
}

// Reads lines, strips '\r', skips leading '#' comments, checks the header.
class CsvReader {
public:
  CsvReader(std::istream& in, std::string_view expected_header,
            std::string_view what)
      : in_(in), what_(what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] == '#') continue;
      if (line != expected_header)
        throw DataError(std::string(what_) + ": expected header '" +
                        std::string(expected_header) + "', got '" + line +
                        "' (line " + std::to_string(line_number_) + ")");
      return;
    }
    throw DataError(std::string(what_) + ": missing header");
  }

  bool next_row(std::string& out) {
    while (std::getline(in_, out)) {
      ++line_number_;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (out.empty()) continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw DataError(std::string(what_) + ": " + message + " (line " +
                    std::to_string(line_number_) + ")");
  }

private:
  std::istream& in_;
  std::string_view what_;
  std::uint64_t line_number_ = 0;
};

}  // namespace

DatasetTable aggregate(const std::vector<TreebankRecord>& records) {
  DatasetTable table;
  std::unordered_set<std::string> seen;
  for (const TreebankRecord& record : records) {
    if (!seen.insert(record.treebank_id).second)
      throw DataError("duplicate treebank '" + record.treebank_id + "'");
    for (const FeatureCounts& fc : record.counts) {
      DatasetRow row;
      row.treebank_id = record.treebank_id;
      row.language_code = record.language_code;
      row.feature = fc.feature;
      row.count_a = fc.count_a;
      row.count_b = fc.count_b;
      row.proportion = fc.proportion;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

DatasetTable select_one_treebank_per_language(const DatasetTable& table,
                                              std::uint64_t seed) {
  // language -> sorted distinct treebank ids
  std::map<std::string, std::set<std::string>> by_language;
  for (const DatasetRow& row : table.rows)
    by_language[row.language_code].insert(row.treebank_id);

  std::mt19937_64 gen(seed);
  std::unordered_set<std::string> kept;
  for (const auto& [language, treebanks] : by_language) {
    if (treebanks.size() == 1) {
      kept.insert(*treebanks.begin());
      continue;
    }
    auto it = treebanks.begin();
    std::advance(it, static_cast<long>(bounded_uniform(gen, treebanks.size())));
    kept.insert(*it);
  }

  DatasetTable out;
  for (const DatasetRow& row : table.rows)
    if (kept.count(row.treebank_id)) out.rows.push_back(row);
  return out;
}

int discretize(double proportion) { return proportion >= 0.5 ? 1 : 0; }

int discretize(const std::optional<double>& proportion) {
  if (!proportion)
    throw DataError("discretize called on an absent proportion");
  return discretize(*proportion);
}

HistogramSeries density(const DatasetTable& table, const std::string& feature) {
  HistogramSeries series;
  series.feature = feature;
  series.bin_edges = tenth_edges();
  series.source = "gradient";
  bool found = false;
  for (const DatasetRow& row : table.rows) {
    if (row.feature != feature) continue;
    found = true;
    if (row.proportion) ++series.bin_counts[bin_index(*row.proportion)];
  }
  if (!found) throw DataError("unknown feature '" + feature + "'");
  return series;
}

DatasetTable apply_language_aliases(const DatasetTable& table,
                                    const std::map<std::string, std::string>& aliases) {
  DatasetTable out = table;
  for (DatasetRow& row : out.rows) {
    auto it = aliases.find(row.language_code);
    if (it != aliases.end()) row.language_code = it->second;
  }
  return out;
}

void write_dataset_csv(std::ostream& out, const DatasetTable& table,
                       std::uint64_t seed) {
  write_stamp(out, seed);
  out << kDatasetHeader << '\n';
  for (const DatasetRow& row : table.rows) {
    for (const std::string* id :
         {&row.treebank_id, &row.language_code, &row.feature})
      if (!is_plain_id(*id))
        throw DataError("id '" + *id +
                        "' contains characters outside [A-Za-z0-9_-]");
    out << row.treebank_id << ',' << row.language_code << ',' << row.feature
        << ',' << row.count_a << ',' << row.count_b << ',' << row.total()
        << ',';
    if (row.proportion) out << format_g17(*row.proportion);
    out << '\n';
  }
}

DatasetTable read_dataset_csv(std::istream& in) {
  CsvReader reader(in, kDatasetHeader, "dataset csv");
  DatasetTable table;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  while (reader.next_row(line)) {
    auto fields = split_on(line, ',');
    if (fields.size() != 7)
      reader.fail("expected 7 fields, got " + std::to_string(fields.size()));
    DatasetRow row;
    row.treebank_id = std::string(fields[0]);
    row.language_code = std::string(fields[1]);
    row.feature = std::string(fields[2]);
    auto a = parse_u64(fields[3]);
    auto b = parse_u64(fields[4]);
    auto total = parse_u64(fields[5]);
    if (!a || !b || !total) reader.fail("non-numeric count");
    row.count_a = *a;
    row.count_b = *b;
    if (*total != row.count_a + row.count_b)
      reader.fail("total " + std::to_string(*total) + " != count_a + count_b");
    if (fields[6].empty()) {
      if (*total != 0) reader.fail("missing proportion for nonzero total");
    } else {
      auto p = parse_double(fields[6]);
      if (!p) reader.fail("non-numeric proportion");
      if (*total == 0) reader.fail("proportion present for zero total");
      row.proportion = *p;
    }
    if (!seen.insert({row.treebank_id, row.feature}).second)
      reader.fail("duplicate (treebank, feature) row '" + row.treebank_id +
                  "', '" + row.feature + "'");
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<ReferenceRow> read_reference_csv(std::istream& in) {
  CsvReader reader(in, kReferenceHeader, "reference csv");
  std::vector<ReferenceRow> rows;
  std::string line;
  while (reader.next_row(line)) {
    auto fields = split_on(line, ',');
    if (fields.size() != 3)
      reader.fail("expected 3 fields, got " + std::to_string(fields.size()));
    ReferenceRow row;
    row.feature = std::string(fields[0]);
    row.language = std::string(fields[1]);
    auto value = parse_double(fields[2]);
    if (!value) reader.fail("non-numeric value");
    if (!(*value >= 0.0 && *value <= 1.0))
      reader.fail("value " + std::string(fields[2]) + " outside [0,1]");
    row.value = *value;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<HistogramSeries> reference_histograms(const std::vector<ReferenceRow>& rows) {
  std::vector<HistogramSeries> series;
  std::map<std::string, std::size_t> index;
  for (const ReferenceRow& row : rows) {
    auto [it, inserted] = index.try_emplace(row.feature, series.size());
    if (inserted) {
      HistogramSeries s;
      s.feature = row.feature;
      s.bin_edges = tenth_edges();
      s.source = "categorical-reference";
      series.push_back(std::move(s));
    }
    ++series[it->second].bin_counts[bin_index(row.value)];
  }
  return series;
}

void write_density_tsv(std::ostream& out,
                       const std::vector<HistogramSeries>& series,
                       std::uint64_t seed) {
  write_stamp(out, seed);
  out << "feature\tbin_lo\tbin_hi\tcount\tsource\n";
  char lo[8], hi[8];
  for (const HistogramSeries& s : series) {
    for (std::size_t bin = 0; bin < s.bin_counts.size(); ++bin) {
      std::snprintf(lo, sizeof(lo), "%.1f", s.bin_edges[bin]);
      std::snprintf(hi, sizeof(hi), "%.1f", s.bin_edges[bin + 1]);
      out << s.feature << '\t' << lo << '\t' << hi << '\t' << s.bin_counts[bin]
          << '\t' << s.source << '\n';
    }
  }
}

}  // namespace wordorder
