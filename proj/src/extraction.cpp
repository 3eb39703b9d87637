#include "wordorder/extraction.hpp"

#include <stdexcept>

#include "wordorder/common.hpp"

namespace wordorder {

namespace {

FeatureSpec head_dependent_spec(std::string name,
                                std::optional<std::string> dep_upos,
                                std::optional<std::string> dep_deprel,
                                std::optional<std::string> head_upos,
                                Orientation orientation) {
  FeatureSpec spec;
  spec.name = std::move(name);
  spec.mode = PairMode::kHeadDependent;
  spec.dependent_upos = std::move(dep_upos);
  spec.dependent_deprel = std::move(dep_deprel);
  spec.head_upos = std::move(head_upos);
  spec.orientation = orientation;
  return spec;
}

bool deprel_matches(const std::string& deprel, const std::string& wanted,
                    bool strict) {
  if (strict) return deprel == wanted;
  return base_deprel(deprel) == wanted;
}

void validate_spec(const FeatureSpec& spec) {
  if (spec.name.empty()) throw ConfigError("feature spec without a name");
  if (spec.mode == PairMode::kHeadDependent) {
    if (!spec.dependent_upos && !spec.dependent_deprel)
      throw ConfigError("feature '" + spec.name +
                        "': head-dependent mode needs dependent_upos or "
                        "dependent_deprel");
  } else {
    if (!spec.dependent_deprel || !spec.second_dependent_deprel ||
        !spec.head_upos)
      throw ConfigError("feature '" + spec.name +
                        "': sibling-pair mode needs both deprels and a head "
                        "upos");
  }
}

}  // namespace

const std::vector<FeatureSpec>& builtin_features() {
  static const std::vector<FeatureSpec> specs = [] {
    std::vector<FeatureSpec> list;
    list.push_back(head_dependent_spec("noun-adjective", "ADJ", "amod", "NOUN",
                                       Orientation::kHeadFirst));
    list.push_back(head_dependent_spec("noun-numeral", "NUM", "nummod", "NOUN",
                                       Orientation::kHeadFirst));
    list.push_back(head_dependent_spec("subject-verb", std::nullopt, "nsubj",
                                       "VERB", Orientation::kDependentFirst));
    list.push_back(head_dependent_spec("object-verb", std::nullopt, "obj",
                                       "VERB", Orientation::kDependentFirst));
    FeatureSpec object_subject;
    object_subject.name = "object-subject";
    object_subject.mode = PairMode::kSiblingPair;
    object_subject.dependent_deprel = "obj";
    object_subject.second_dependent_deprel = "nsubj";
    object_subject.head_upos = "VERB";
    list.push_back(std::move(object_subject));
    return list;
  }();
  return specs;
}

std::vector<FeatureSpec> parse_feature_config(std::istream& in) {
  std::vector<FeatureSpec> specs;
  FeatureSpec current;
  bool open = false;
  std::uint64_t line_number = 0;

  auto close = [&] {
    if (!open) return;
    validate_spec(current);
    if (!is_plain_id(current.name))
      throw ConfigError("feature name '" + current.name +
                        "' contains characters outside [A-Za-z0-9_-]");
    specs.push_back(std::move(current));
    current = FeatureSpec{};
    open = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    std::size_t hash = view.find('#');
    if (hash != std::string_view::npos) view = view.substr(0, hash);
    while (!view.empty() && (view.back() == ' ' || view.back() == '\t'))
      view.remove_suffix(1);
    while (!view.empty() && (view.front() == ' ' || view.front() == '\t'))
      view.remove_prefix(1);
    if (view.empty()) continue;

    std::size_t eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("feature config line " + std::to_string(line_number) +
                        ": expected key=value");
    auto trim = [](std::string_view side) {
      while (!side.empty() && (side.back() == ' ' || side.back() == '\t'))
        side.remove_suffix(1);
      while (!side.empty() && (side.front() == ' ' || side.front() == '\t'))
        side.remove_prefix(1);
      return std::string(side);
    };
    std::string key = trim(view.substr(0, eq));
    std::string value = trim(view.substr(eq + 1));
    if (key == "name") {
      close();
      current.name = value;
      current.mode = PairMode::kHeadDependent;
      open = true;
      continue;
    }
    if (!open)
      throw ConfigError("feature config line " + std::to_string(line_number) +
                        ": '" + key + "' before any name=");
    if (key == "dependent_upos") {
      current.dependent_upos = value;
    } else if (key == "dependent_deprel") {
      current.dependent_deprel = value;
    } else if (key == "head_upos") {
      current.head_upos = value;
    } else if (key == "orientation") {
      if (value == "head-first")
        current.orientation = Orientation::kHeadFirst;
      else if (value == "dependent-first")
        current.orientation = Orientation::kDependentFirst;
      else
        throw ConfigError("feature config line " + std::to_string(line_number) +
                          ": orientation must be head-first or dependent-first");
    } else {
      throw ConfigError("feature config line " + std::to_string(line_number) +
                        ": unknown key '" + key + "'");
    }
  }
  close();
  return specs;
}

OrderCounts count_head_dependent(const Sentence& sentence,
                                 const FeatureSpec& spec,
                                 const ExtractOptions& options) {
  OrderCounts counts;
  const auto& tokens = sentence.tokens;
  for (const Token& token : tokens) {
    if (spec.dependent_upos && token.upos != *spec.dependent_upos) continue;
    if (spec.dependent_deprel &&
        !deprel_matches(token.deprel, *spec.dependent_deprel,
                        options.strict_deprel))
      continue;
    if (token.head == 0 || token.head > tokens.size()) continue;
    const Token& head = tokens[token.head - 1];
    if (spec.head_upos && head.upos != *spec.head_upos) continue;
    if (head.id < token.id)
      ++counts.head_first;
    else
      ++counts.dependent_first;
  }
  return counts;
}

SiblingCounts count_sibling_pair(const Sentence& sentence,
                                 const FeatureSpec& spec,
                                 const ExtractOptions& options) {
  SiblingCounts counts;
  const auto& tokens = sentence.tokens;
  for (const Token& head : tokens) {
    if (spec.head_upos && head.upos != *spec.head_upos) continue;
    for (const Token& first : tokens) {
      if (first.head != head.id) continue;
      if (!deprel_matches(first.deprel, *spec.dependent_deprel,
                          options.strict_deprel))
        continue;
      for (const Token& second : tokens) {
        if (second.head != head.id || second.id == first.id) continue;
        if (!deprel_matches(second.deprel, *spec.second_dependent_deprel,
                            options.strict_deprel))
          continue;
        if (first.id < second.id)
          ++counts.first_first;
        else
          ++counts.second_first;
      }
    }
  }
  return counts;
}

TreebankAccumulator::TreebankAccumulator(std::vector<FeatureSpec> specs,
                                         ExtractOptions options)
    : specs_(std::move(specs)), options_(options), totals_(specs_.size()) {
  for (const FeatureSpec& spec : specs_) validate_spec(spec);
}

void TreebankAccumulator::add(const Sentence& sentence) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const FeatureSpec& spec = specs_[i];
    if (spec.mode == PairMode::kHeadDependent) {
      OrderCounts c = count_head_dependent(sentence, spec, options_);
      if (spec.orientation == Orientation::kHeadFirst) {
        totals_[i].first += c.head_first;
        totals_[i].second += c.dependent_first;
      } else {
        totals_[i].first += c.dependent_first;
        totals_[i].second += c.head_first;
      }
    } else {
      SiblingCounts c = count_sibling_pair(sentence, spec, options_);
      totals_[i].first += c.first_first;
      totals_[i].second += c.second_first;
    }
  }
  ++sentence_count_;
}

TreebankRecord TreebankAccumulator::finish(std::string treebank_id,
                                           std::string language_code) const {
  TreebankRecord record;
  record.treebank_id = std::move(treebank_id);
  record.language_code = std::move(language_code);
  record.sentence_count = sentence_count_;
  record.counts.reserve(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    FeatureCounts fc;
    fc.feature = specs_[i].name;
    fc.count_a = totals_[i].first;
    fc.count_b = totals_[i].second;
    const std::uint64_t total = fc.count_a + fc.count_b;
    if (total > 0)
      fc.proportion = static_cast<double>(fc.count_a) /
                      static_cast<double>(total);
    record.counts.push_back(std::move(fc));
  }
  return record;
}

TreebankRecord extract_treebank(const std::vector<Sentence>& sentences,
                                const std::string& treebank_id,
                                const std::string& language_code,
                                const std::vector<FeatureSpec>& specs,
                                const ExtractOptions& options) {
  TreebankAccumulator acc(specs, options);
  for (const Sentence& sentence : sentences) acc.add(sentence);
  return acc.finish(treebank_id, language_code);
}

}  // namespace wordorder
