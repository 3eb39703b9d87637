#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wordorder/common.hpp"
#include "wordorder/dataset.hpp"

using namespace wordorder;

namespace {

using CountTriple = std::tuple<std::string, std::uint64_t, std::uint64_t>;

TreebankRecord record(const std::string& treebank, const std::string& language,
                      const std::vector<CountTriple>& counts) {
  TreebankRecord r;
  r.treebank_id = treebank;
  r.language_code = language;
  for (const auto& [feature, a, b] : counts) {
    FeatureCounts fc;
    fc.feature = feature;
    fc.count_a = a;
    fc.count_b = b;
    if (a + b > 0)
      fc.proportion = static_cast<double>(a) / static_cast<double>(a + b);
    r.counts.push_back(std::move(fc));
  }
  return r;
}

const std::vector<CountTriple> kFiveFeatures = {
    {"noun-adjective", 3, 1}, {"noun-numeral", 2, 2}, {"subject-verb", 5, 0},
    {"object-verb", 0, 4},    {"object-subject", 1, 1},
};

DatasetRow row(const std::string& treebank, const std::string& language,
               const std::string& feature, std::uint64_t a, std::uint64_t b) {
  DatasetRow r;
  r.treebank_id = treebank;
  r.language_code = language;
  r.feature = feature;
  r.count_a = a;
  r.count_b = b;
  if (a + b > 0)
    r.proportion = static_cast<double>(a) / static_cast<double>(a + b);
  return r;
}

}  // namespace

TEST_CASE("aggregate flattens records to one row per treebank and feature") {
  const DatasetTable table = aggregate(
      {record("aa_one", "aa", kFiveFeatures),
       record("bb_one", "bb", kFiveFeatures)});
  CHECK(table.rows.size() == 10);
  CHECK(table.rows[0].treebank_id == "aa_one");
  CHECK(table.rows[0].feature == "noun-adjective");
  CHECK(table.rows[0].count_a == 3);
  CHECK(table.rows[5].treebank_id == "bb_one");
}

TEST_CASE("aggregate keeps zero-total rows with absent proportion") {
  const DatasetTable table = aggregate({record(
      "aa_one", "aa", {{"noun-adjective", 2, 1}, {"subject-verb", 0, 0}})});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].proportion.has_value());
  CHECK_FALSE(table.rows[1].proportion.has_value());
}

TEST_CASE("aggregate rejects duplicate treebank ids") {
  try {
    aggregate({record("aa_one", "aa", kFiveFeatures),
               record("aa_one", "aa", kFiveFeatures)});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("aa_one") != std::string::npos);
  }
}

TEST_CASE("selection keeps single-treebank languages untouched") {
  const DatasetTable table = aggregate(
      {record("aa_one", "aa", kFiveFeatures),
       record("bb_one", "bb", kFiveFeatures)});
  for (std::uint64_t seed : {0ull, 1ull, 99ull})
    CHECK(select_one_treebank_per_language(table, seed) == table);
}

TEST_CASE("selection keeps exactly one treebank per language, stably") {
  const DatasetTable table = aggregate(
      {record("aa_one", "aa", kFiveFeatures),
       record("aa_two", "aa", kFiveFeatures),
       record("aa_three", "aa", kFiveFeatures),
       record("bb_one", "bb", kFiveFeatures)});
  const DatasetTable once = select_one_treebank_per_language(table, 17);
  CHECK(once.rows.size() == 10);
  std::map<std::string, std::set<std::string>> by_language;
  for (const DatasetRow& r : once.rows)
    by_language[r.language_code].insert(r.treebank_id);
  for (const auto& [language, treebanks] : by_language)
    CHECK(treebanks.size() == 1);
  // Same seed, same pick; applying again changes nothing.
  CHECK(select_one_treebank_per_language(table, 17) == once);
  CHECK(select_one_treebank_per_language(once, 17) == once);
  CHECK(select_one_treebank_per_language(once, 4242) == once);
}

TEST_CASE("selection frequencies are uniform over seeds") {
  const DatasetTable table = aggregate(
      {record("aa_one", "aa", kFiveFeatures),
       record("aa_two", "aa", kFiveFeatures),
       record("aa_three", "aa", kFiveFeatures)});
  std::map<std::string, int> hits;
  const int seeds = 1000;
  for (int seed = 0; seed < seeds; ++seed) {
    const DatasetTable picked =
        select_one_treebank_per_language(table, static_cast<std::uint64_t>(seed));
    hits[picked.rows[0].treebank_id]++;
  }
  REQUIRE(hits.size() == 3);
  for (const auto& [treebank, count] : hits) {
    const double freq = count / static_cast<double>(seeds);
    CHECK(freq > 1.0 / 3.0 - 0.05);
    CHECK(freq < 1.0 / 3.0 + 0.05);
  }
}

TEST_CASE("discretize thresholds at one half") {
  CHECK(discretize(0.0) == 0);
  CHECK(discretize(0.49) == 0);
  CHECK(discretize(0.5) == 1);
  CHECK(discretize(0.51) == 1);
  CHECK(discretize(1.0) == 1);
}

TEST_CASE("discretize mirrors around one half except at the threshold") {
  for (double p : {0.0, 0.1, 0.25, 0.4999, 0.7, 0.99, 1.0})
    if (p != 0.5) CHECK(discretize(p) == 1 - discretize(1.0 - p));
  CHECK(discretize(0.5) == 1);
  CHECK(discretize(1.0 - 0.5) == 1);
}

TEST_CASE("discretize rejects absent proportions") {
  CHECK(discretize(std::optional<double>(0.7)) == 1);
  CHECK_THROWS_AS(discretize(std::optional<double>()), DataError);
}

TEST_CASE("density puts a point mass at 1.0 into the last bin") {
  DatasetTable table;
  table.rows = {row("t1", "aa", "noun-adjective", 3, 0),
                row("t2", "bb", "noun-adjective", 7, 0)};
  const HistogramSeries series = density(table, "noun-adjective");
  CHECK(series.source == "gradient");
  CHECK(series.bin_edges[0] == 0.0);
  CHECK(series.bin_edges[10] == 1.0);
  for (std::size_t i = 0; i < 9; ++i) CHECK(series.bin_counts[i] == 0);
  CHECK(series.bin_counts[9] == 2);
}

TEST_CASE("density separates low and high proportions") {
  DatasetTable table;
  table.rows = {row("t1", "aa", "noun-adjective", 1, 19),   // 0.05
                row("t2", "bb", "noun-adjective", 19, 1)};  // 0.95
  const HistogramSeries series = density(table, "noun-adjective");
  CHECK(series.bin_counts[0] == 1);
  CHECK(series.bin_counts[9] == 1);
}

TEST_CASE("density drops undefined rows and matches the oracle") {
  DatasetTable table;
  std::vector<double> defined;
  const std::uint64_t counts[][2] = {{0, 10}, {1, 9},  {5, 5}, {9, 1},
                                     {10, 0}, {0, 0},  {3, 7}, {7, 13},
                                     {2, 18}, {11, 9}, {1, 3}};
  int index = 0;
  for (const auto& c : counts) {
    table.rows.push_back(row("t" + std::to_string(index++), "l",
                             "noun-adjective", c[0], c[1]));
    if (c[0] + c[1] > 0)
      defined.push_back(static_cast<double>(c[0]) /
                        static_cast<double>(c[0] + c[1]));
  }
  const HistogramSeries series = density(table, "noun-adjective");
  const auto expected = oracles::bins(defined);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(series.bin_counts[i] == expected[i]);
    total += series.bin_counts[i];
  }
  CHECK(total == defined.size());
}

TEST_CASE("density rejects unknown features") {
  DatasetTable table;
  table.rows = {row("t1", "aa", "noun-adjective", 1, 1)};
  CHECK_THROWS_AS(density(table, "verb-adverb"), DataError);
}

TEST_CASE("language aliases remap codes and leave the rest alone") {
  DatasetTable table;
  table.rows = {row("t1", "fra", "noun-adjective", 1, 1),
                row("t2", "de", "noun-adjective", 1, 1)};
  const DatasetTable out =
      apply_language_aliases(table, {{"fra", "fr"}, {"x", "y"}});
  CHECK(out.rows[0].language_code == "fr");
  CHECK(out.rows[1].language_code == "de");
}

TEST_CASE("dataset csv round-trips exactly") {
  DatasetTable table;
  table.rows = {row("aa_one", "aa", "noun-adjective", 1, 2),
                row("aa_one", "aa", "subject-verb", 0, 0),
                row("bb_one", "bb", "noun-adjective", 999, 1)};
  table.rows[0].proportion = 1.0 / 3.0;  // needs all 17 digits

  std::ostringstream out;
  write_dataset_csv(out, table, 42);
  std::istringstream in(out.str());
  const DatasetTable back = read_dataset_csv(in);
  CHECK(back == table);
}

TEST_CASE("dataset csv carries the stamp, header, and empty-field rule") {
  DatasetTable table;
  table.rows = {row("t1", "aa", "noun-adjective", 1, 1),
                row("t2", "bb", "subject-verb", 0, 0)};
  std::ostringstream out;
  write_dataset_csv(out, table, 7);
  CHECK(out.str() ==
        "# wordorder 0.1.0 seed=7\n"
        "treebank,language,feature,count_a,count_b,total,proportion\n"
        "t1,aa,noun-adjective,1,1,2,0.5\n"
        "t2,bb,subject-verb,0,0,0,\n");
}

TEST_CASE("writer rejects ids that would break the csv") {
  DatasetTable table;
  table.rows = {row("bad id", "aa", "noun-adjective", 1, 1)};
  std::ostringstream out;
  CHECK_THROWS_AS(write_dataset_csv(out, table, 0), DataError);
}

TEST_CASE("reader rejects malformed dataset csv") {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_dataset_csv(in);
  };
  const std::string stamp = "# wordorder 0.1.0 seed=0\n";
  const std::string header =
      "treebank,language,feature,count_a,count_b,total,proportion\n";

  CHECK_THROWS_AS(read("wrong,header\n"), DataError);
  CHECK_THROWS_AS(read(stamp), DataError);  // missing header
  CHECK_THROWS_AS(read(stamp + header + "t1,aa,f,1,1\n"), DataError);
  CHECK_THROWS_AS(read(stamp + header + "t1,aa,f,x,1,1,0.5\n"), DataError);
  CHECK_THROWS_AS(read(stamp + header + "t1,aa,f,1,1,3,0.5\n"), DataError);
  CHECK_THROWS_AS(read(stamp + header + "t1,aa,f,1,1,2,\n"), DataError);
  CHECK_THROWS_AS(read(stamp + header + "t1,aa,f,0,0,0,0.5\n"), DataError);
  CHECK_THROWS_AS(read(stamp + header + "t1,aa,f,1,1,2,zz\n"), DataError);
  CHECK_THROWS_AS(
      read(stamp + header + "t1,aa,f,1,1,2,0.5\nt1,aa,f,2,2,4,0.5\n"),
      DataError);
  // Line numbers point at the offending row.
  try {
    read(stamp + header + "t1,aa,f,1,1,2,0.5\nt2,bb,f,1,1,3,0.5\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("reference csv reads categories and validates the range") {
  std::istringstream in(
      "# comment\n"
      "feature,language,value\n"
      "noun-adjective,fr,1\n"
      "noun-adjective,en,0\n"
      "noun-adjective,de,0.5\n");
  const auto rows = read_reference_csv(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].feature == "noun-adjective");
  CHECK(rows[0].language == "fr");
  CHECK(rows[0].value == 1.0);

  std::istringstream bad("feature,language,value\nnoun-adjective,fr,1.5\n");
  CHECK_THROWS_AS(read_reference_csv(bad), DataError);
}

TEST_CASE("reference histograms bin per feature with the reference tag") {
  std::vector<ReferenceRow> rows = {{"noun-adjective", "fr", 1.0},
                                    {"noun-adjective", "en", 0.0},
                                    {"noun-adjective", "de", 0.5},
                                    {"subject-verb", "fr", 1.0}};
  const auto series = reference_histograms(rows);
  REQUIRE(series.size() == 2);
  CHECK(series[0].feature == "noun-adjective");
  CHECK(series[0].source == "categorical-reference");
  CHECK(series[0].bin_counts[0] == 1);
  CHECK(series[0].bin_counts[5] == 1);
  CHECK(series[0].bin_counts[9] == 1);
  CHECK(series[1].feature == "subject-verb");
  CHECK(series[1].bin_counts[9] == 1);
}

TEST_CASE("density tsv lists ten bins per series with tenth edges") {
  DatasetTable table;
  table.rows = {row("t1", "aa", "noun-adjective", 1, 1)};
  std::ostringstream out;
  write_density_tsv(out, {density(table, "noun-adjective")}, 3);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# wordorder 0.1.0 seed=3");
  std::getline(lines, line);
  CHECK(line == "feature\tbin_lo\tbin_hi\tcount\tsource");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "noun-adjective\t0.0\t0.1\t0\tgradient");
  CHECK(rows[5] == "noun-adjective\t0.5\t0.6\t1\tgradient");
  CHECK(rows[9] == "noun-adjective\t0.9\t1.0\t0\tgradient");
}
