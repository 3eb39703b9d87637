#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wordorder {

// One syntactic word from a CoNLL-U token line.  upos and deprel are kept as
// raw strings; matching against tag sets happens in the extraction layer.
struct Token {
  std::uint64_t id = 0;  // 1-based surface position within the sentence
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string feats;
  std::uint64_t head = 0;  // 0 = root, otherwise the id of the head token
  std::string deprel;
  std::string deps;
  std::string misc;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<std::string> sent_id;
  std::optional<std::string> text;
  // Multiword-range ("i-j") and empty-node ("i.j") lines are recognized and
  // set aside; only their counts are kept.
  std::uint64_t multiword_tokens = 0;
  std::uint64_t empty_nodes = 0;
};

// Malformed token line: wrong field count or non-numeric id/head.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::uint64_t line_number,
             std::uint64_t byte_offset)
      : std::runtime_error(message),
        line_number_(line_number),
        byte_offset_(byte_offset) {}

  std::uint64_t line_number() const { return line_number_; }
  // Offset of the start of the offending line within the stream.
  std::uint64_t byte_offset() const { return byte_offset_; }

private:
  std::uint64_t line_number_;
  std::uint64_t byte_offset_;
};

// Returns the substring before the first ':', or the whole string.
// "nsubj:pass" -> "nsubj".
std::string_view base_deprel(std::string_view deprel);

// Streaming CoNLL-U reader.  Holds no shared state; one instance per stream,
// multiple instances may run concurrently on different streams.
//
// Token lines have exactly 10 TAB-separated fields, "_" meaning empty.
// Comment lines start with '#'; "# sent_id = ..." and "# text = ..." are
// attached to the sentence that follows.  One or more blank lines end a
// sentence.
//
// A malformed token line throws ParseError.  A sentence whose token ids are
// not 1..n in order, or with a head outside 0..n, or with a self-heading
// token, is skipped with a warning and reading continues: treebank
// collections contain sporadic annotation errors and one bad sentence must
// not abort a corpus run.
class TreebankReader {
public:
  using WarningHandler = std::function<void(const std::string&)>;

  struct Stats {
    std::uint64_t sentences = 0;          // yielded
    std::uint64_t sentences_skipped = 0;  // failed validation
    std::uint64_t tokens = 0;             // in yielded sentences
  };

  explicit TreebankReader(std::istream& in, WarningHandler on_warning = {});

  // Fills `out` with the next valid sentence.  Returns false at end of input.
  bool next(Sentence& out);

  const Stats& stats() const { return stats_; }

private:
  bool read_sentence(Sentence& out, bool& valid);
  void fail(const std::string& message) const;

  std::istream& in_;
  WarningHandler on_warning_;
  Stats stats_;
  std::uint64_t line_number_ = 0;
  std::uint64_t offset_ = 0;       // byte offset of the next line to read
  std::uint64_t line_offset_ = 0;  // byte offset of the current line
  bool first_line_ = true;
};

// Reads a whole stream into memory.  Convenience for tests and small files;
// large corpora should iterate TreebankReader directly.
std::vector<Sentence> parse_treebank(std::istream& in,
                                     TreebankReader::WarningHandler on_warning = {});

}  // namespace wordorder
