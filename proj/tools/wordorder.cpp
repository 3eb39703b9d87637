// Command-line front end: extract word-order counts from CoNLL-U treebanks,
// evaluate regression predictors over pretrained language vectors, and emit
// histogram series for plotting.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wordorder/common.hpp"
#include "wordorder/conllu.hpp"
#include "wordorder/dataset.hpp"
#include "wordorder/extraction.hpp"
#include "wordorder/regress.hpp"
#include "wordorder/vectors.hpp"

namespace fs = std::filesystem;
using namespace wordorder;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

std::ifstream open_input(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

std::map<std::string, std::string> maybe_load_aliases(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in = open_input(path, "alias file");
  return load_aliases(in);
}

// Language code is the filename prefix before the first underscore, the
// naming convention of UD releases ("fr_gsd-ud-train.conllu" -> "fr").
std::string language_from_stem(const std::string& stem) {
  std::size_t underscore = stem.find('_');
  if (underscore == std::string::npos || underscore == 0) return stem;
  return stem.substr(0, underscore);
}

struct ExtractArgs {
  std::string treebank_dir;
  std::string output;
  std::string alias_file;
  std::string features_file;
  bool strict_deprel = false;
  bool strict = false;
  std::uint64_t seed = 0;
};

int run_extract(const ExtractArgs& args) {
  if (!fs::is_directory(args.treebank_dir))
    throw ConfigError("'" + args.treebank_dir + "' is not a directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(args.treebank_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".conllu")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw DataError("no .conllu files under '" + args.treebank_dir + "'");

  const auto aliases = maybe_load_aliases(args.alias_file);
  std::vector<FeatureSpec> specs = builtin_features();
  if (!args.features_file.empty()) {
    std::ifstream in = open_input(args.features_file, "feature config");
    for (FeatureSpec& spec : parse_feature_config(in))
      specs.push_back(std::move(spec));
  }
  ExtractOptions options;
  options.strict_deprel = args.strict_deprel;

  std::vector<TreebankRecord> records;
  std::uint64_t total_sentences = 0;
  std::size_t failed_files = 0;
  for (const fs::path& path : files) {
    const std::string stem = path.stem().string();
    std::string language = language_from_stem(stem);
    if (auto it = aliases.find(language); it != aliases.end())
      language = it->second;
    try {
      std::ifstream in(path);
      if (!in) throw DataError("cannot open '" + path.string() + "'");
      TreebankReader reader(in, [&](const std::string& message) {
        std::cerr << path.string() << ": " << message << '\n';
      });
      TreebankAccumulator acc(specs, options);
      Sentence sentence;
      while (reader.next(sentence)) acc.add(sentence);
      records.push_back(acc.finish(stem, language));
      total_sentences += reader.stats().sentences;
    } catch (const ParseError& e) {
      std::cerr << path.string() << ": " << e.what() << ", file skipped\n";
      ++failed_files;
    } catch (const DataError& e) {
      std::cerr << e.what() << ", file skipped\n";
      ++failed_files;
    }
  }

  std::sort(records.begin(), records.end(),
            [](const TreebankRecord& a, const TreebankRecord& b) {
              return a.treebank_id < b.treebank_id;
            });
  const DatasetTable table = aggregate(records);

  std::ofstream out = open_output(args.output);
  write_dataset_csv(out, table, args.seed);
  if (!out) throw DataError("write to '" + args.output + "' failed");

  std::set<std::string> languages;
  for (const TreebankRecord& record : records)
    languages.insert(record.language_code);
  std::cout << "treebanks: " << records.size() << " (" << failed_files
            << " failed), languages: " << languages.size()
            << ", sentences: " << total_sentences << '\n';

  if (failed_files > 0 && args.strict) {
    std::cerr << failed_files << " file(s) failed with --strict\n";
    return kExitData;
  }
  return kExitOk;
}

struct EvaluateArgs {
  std::string dataset_csv;
  std::string vectors_file;
  std::string source_label;
  std::string output;
  std::string alias_file;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  bool standardize = false;
  double ridge = 0.0;
  double logistic_lambda = 1.0;
  int logistic_max_iter = 10000;
  double logistic_tol = 1e-6;
  bool score_against_discrete = false;
};

int run_evaluate(const EvaluateArgs& args) {
  std::ifstream csv = open_input(args.dataset_csv, "dataset csv");
  DatasetTable table = read_dataset_csv(csv);
  table = apply_language_aliases(table, maybe_load_aliases(args.alias_file));
  table = select_one_treebank_per_language(table, args.seed);

  std::string label = args.source_label;
  if (label.empty()) label = fs::path(args.vectors_file).stem().string();
  std::ifstream vec = open_input(args.vectors_file, "vector file");
  const VectorSet vectors = load_vectors(vec, label);

  EvalOptions options;
  options.split.seed = args.seed;
  options.split.train_fraction = args.train_fraction;
  options.logistic.lambda = args.logistic_lambda;
  options.logistic.max_iter = args.logistic_max_iter;
  options.logistic.tol = args.logistic_tol;
  options.ridge = args.ridge;
  options.standardize = args.standardize;
  options.score_against_discrete = args.score_against_discrete;

  std::vector<EvalReport> reports;
  for (const FeatureSpec& spec : builtin_features()) {
    const RegressionDataset dataset = join(table, vectors, spec.name);
    for (EvalReport& report : evaluate_feature(dataset, options))
      reports.push_back(std::move(report));
  }

  std::ofstream out = open_output(args.output);
  write_report_tsv(out, reports, args.seed);
  if (!out) throw DataError("write to '" + args.output + "' failed");
  std::cout << "evaluated " << builtin_features().size() << " features from '"
            << label << "', " << reports.size() << " reports\n";
  return kExitOk;
}

struct DensityArgs {
  std::string dataset_csv;
  std::string reference_csv;
  std::string output;
  std::uint64_t seed = 0;
};

int run_density(const DensityArgs& args) {
  std::ifstream csv = open_input(args.dataset_csv, "dataset csv");
  const DatasetTable table = read_dataset_csv(csv);

  std::vector<std::string> features;
  for (const DatasetRow& row : table.rows)
    if (std::find(features.begin(), features.end(), row.feature) ==
        features.end())
      features.push_back(row.feature);

  std::vector<HistogramSeries> series;
  for (const std::string& feature : features)
    series.push_back(density(table, feature));

  if (!args.reference_csv.empty()) {
    std::ifstream ref = open_input(args.reference_csv, "reference csv");
    for (HistogramSeries& s : reference_histograms(read_reference_csv(ref)))
      series.push_back(std::move(s));
  }

  std::ofstream out = open_output(args.output);
  write_density_tsv(out, series, args.seed);
  if (!out) throw DataError("write to '" + args.output + "' failed");
  std::cout << "wrote " << series.size() << " series\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient word-order typology from dependency treebanks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ExtractArgs extract_args;
  CLI::App* extract = app.add_subcommand(
      "extract", "Count word-order constructions per treebank");
  extract->add_option("treebank_dir", extract_args.treebank_dir,
                      "Directory scanned recursively for .conllu files")
      ->required();
  extract->add_option("-o,--output", extract_args.output, "Dataset CSV path")
      ->required();
  extract->add_option("--alias", extract_args.alias_file,
                      "Two-column language-code alias file");
  extract->add_option("--features", extract_args.features_file,
                      "Extra feature definitions (key=value blocks)");
  extract->add_flag("--strict-deprel", extract_args.strict_deprel,
                    "Match deprels exactly instead of on the base relation");
  extract->add_flag("--strict", extract_args.strict,
                    "Exit nonzero when any input file fails");
  extract->add_option("--seed", extract_args.seed,
                      "Seed recorded in the output stamp");

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Train and score regression predictors per feature");
  evaluate->add_option("dataset_csv", evaluate_args.dataset_csv,
                       "Dataset CSV from extract")
      ->required();
  evaluate->add_option("--vectors", evaluate_args.vectors_file,
                       "Language vector file")
      ->required();
  evaluate->add_option("-o,--output", evaluate_args.output, "Report TSV path")
      ->required();
  evaluate->add_option("--source-label", evaluate_args.source_label,
                       "Vector source label (default: file stem)");
  evaluate->add_option("--alias", evaluate_args.alias_file,
                       "Two-column language-code alias file");
  evaluate->add_option("--seed", evaluate_args.seed,
                       "Seed for treebank selection and the train/test split");
  evaluate->add_option("--train-fraction", evaluate_args.train_fraction,
                       "Training fraction of the joined rows")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
  evaluate->add_flag("--standardize", evaluate_args.standardize,
                     "Standardize vector columns on training statistics");
  evaluate->add_option("--ridge", evaluate_args.ridge,
                       "L2 strength for the linear model (0 = minimum-norm)");
  evaluate->add_option("--logistic-lambda", evaluate_args.logistic_lambda,
                       "L2 strength for the logistic model");
  evaluate->add_option("--logistic-max-iter", evaluate_args.logistic_max_iter,
                       "Logistic iteration cap");
  evaluate->add_option("--logistic-tol", evaluate_args.logistic_tol,
                       "Logistic gradient max-norm tolerance");
  evaluate->add_flag("--score-against-discrete",
                     evaluate_args.score_against_discrete,
                     "Also score logistic predictions against discretized "
                     "test labels");

  DensityArgs density_args;
  CLI::App* density_cmd = app.add_subcommand(
      "density", "Histogram series of proportions per feature");
  density_cmd->add_option("dataset_csv", density_args.dataset_csv,
                          "Dataset CSV from extract")
      ->required();
  density_cmd->add_option("-o,--output", density_args.output,
                          "Density TSV path")
      ->required();
  density_cmd->add_option("--reference", density_args.reference_csv,
                          "Categorical reference CSV (feature,language,value)");
  density_cmd->add_option("--seed", density_args.seed,
                          "Seed recorded in the output stamp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (extract->parsed()) return run_extract(extract_args);
    if (evaluate->parsed()) return run_evaluate(evaluate_args);
    if (density_cmd->parsed()) return run_density(density_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
