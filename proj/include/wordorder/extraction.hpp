#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "wordorder/conllu.hpp"

namespace wordorder {

enum class PairMode {
  kHeadDependent,  // order of a dependent against its own head
  kSiblingPair,    // order of two dependents sharing the same head
};

// Which surface order counts toward count_a.  The convention throughout is
// that count_a counts instances where the first-named element of the feature
// precedes the second: Noun-Adjective counts the noun (the head) first,
// Subject-Verb counts the subject (the dependent) first.
enum class Orientation {
  kHeadFirst,
  kDependentFirst,
};

// Declarative criteria for one word-order feature.  Unset fields are
// unconstrained.  Head-dependent mode needs at least one dependent
// criterion; sibling-pair mode needs both deprels and a head upos.
struct FeatureSpec {
  std::string name;
  PairMode mode = PairMode::kHeadDependent;
  std::optional<std::string> dependent_upos;
  std::optional<std::string> dependent_deprel;
  std::optional<std::string> head_upos;
  std::optional<std::string> second_dependent_deprel;  // sibling-pair only
  Orientation orientation = Orientation::kHeadFirst;
};

// The five built-in features:
//   noun-adjective   ADJ/amod under NOUN        (noun first = count_a)
//   noun-numeral     NUM/nummod under NOUN      (noun first = count_a)
//   subject-verb     nsubj under VERB           (subject first = count_a)
//   object-verb      obj under VERB             (object first = count_a)
//   object-subject   obj vs nsubj under a VERB  (object first = count_a)
const std::vector<FeatureSpec>& builtin_features();

// Parses a line-oriented key=value feature config.  Each "name=" line opens
// a new head-dependent feature; following dependent_upos= / dependent_deprel=
// / head_upos= / orientation= lines fill it in.  '#' comments and blank lines
// are ignored.  Throws ConfigError on unknown keys or invalid specs.
std::vector<FeatureSpec> parse_feature_config(std::istream& in);

struct ExtractOptions {
  // Match deprels exactly instead of on the base relation, so that
  // "nsubj:pass" stops counting as nsubj.
  bool strict_deprel = false;
};

struct OrderCounts {
  std::uint64_t head_first = 0;
  std::uint64_t dependent_first = 0;
};

struct SiblingCounts {
  std::uint64_t first_first = 0;   // dependent_deprel token precedes
  std::uint64_t second_first = 0;  // second_dependent_deprel token precedes
};

// Counts matching (dependent, head) pairs in one sentence, split by which
// element comes first in surface order.  Requires spec.mode == kHeadDependent.
OrderCounts count_head_dependent(const Sentence& sentence,
                                 const FeatureSpec& spec,
                                 const ExtractOptions& options = {});

// Counts ordered (first-deprel, second-deprel) dependent pairs under each
// matching head; all cross-product pairs under the same head are counted.
// Requires spec.mode == kSiblingPair.
SiblingCounts count_sibling_pair(const Sentence& sentence,
                                 const FeatureSpec& spec,
                                 const ExtractOptions& options = {});

struct FeatureCounts {
  std::string feature;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  // count_a / (count_a + count_b); absent when nothing matched.
  std::optional<double> proportion;
};

struct TreebankRecord {
  std::string treebank_id;
  std::string language_code;
  std::vector<FeatureCounts> counts;  // one per feature spec, in spec order
  std::uint64_t sentence_count = 0;
};

// Incremental per-treebank counting; integer sums, so merging partial
// accumulations is associative and order-free.
class TreebankAccumulator {
public:
  explicit TreebankAccumulator(std::vector<FeatureSpec> specs,
                               ExtractOptions options = {});

  void add(const Sentence& sentence);

  TreebankRecord finish(std::string treebank_id,
                        std::string language_code) const;

private:
  std::vector<FeatureSpec> specs_;
  ExtractOptions options_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> totals_;
  std::uint64_t sentence_count_ = 0;
};

// Counts all features over a sentence sequence in one pass.
TreebankRecord extract_treebank(const std::vector<Sentence>& sentences,
                                const std::string& treebank_id,
                                const std::string& language_code,
                                const std::vector<FeatureSpec>& specs = builtin_features(),
                                const ExtractOptions& options = {});

}  // namespace wordorder
