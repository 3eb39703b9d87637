#include "wordorder/conllu.hpp"

#include <iostream>

#include "wordorder/common.hpp"

namespace wordorder {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// "i-j" with both sides numeric.
bool is_multiword_id(std::string_view s) {
  std::size_t dash = s.find('-');
  if (dash == std::string_view::npos) return false;
  return all_digits(s.substr(0, dash)) && all_digits(s.substr(dash + 1));
}

// "i.j" with both sides numeric.
bool is_empty_node_id(std::string_view s) {
  std::size_t dot = s.find('.');
  if (dot == std::string_view::npos) return false;
  return all_digits(s.substr(0, dot)) && all_digits(s.substr(dot + 1));
}

// "_" denotes an empty field everywhere in the format.
std::string decode_field(std::string_view field) {
  return field == "_" ? std::string() : std::string(field);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Extracts the value of "# key = value" comments; returns nullopt when the
// comment has a different key.
std::optional<std::string> comment_value(std::string_view line,
                                         std::string_view key) {
  std::string_view body = trim(line.substr(1));  // drop '#'
  if (body.substr(0, key.size()) != key) return std::nullopt;
  body.remove_prefix(key.size());
  body = trim(body);
  if (body.empty() || body.front() != '=') return std::nullopt;
  body.remove_prefix(1);
  return std::string(trim(body));
}

}  // namespace

std::string_view base_deprel(std::string_view deprel) {
  std::size_t colon = deprel.find(':');
  if (colon == std::string_view::npos) return deprel;
  return deprel.substr(0, colon);
}

TreebankReader::TreebankReader(std::istream& in, WarningHandler on_warning)
    : in_(in), on_warning_(std::move(on_warning)) {
  if (!on_warning_) {
    on_warning_ = [](const std::string& message) {
      std::cerr << "warning: " << message << '\n';
    };
  }
}

void TreebankReader::fail(const std::string& message) const {
  throw ParseError(message + " (line " + std::to_string(line_number_) + ")",
                   line_number_, line_offset_);
}

bool TreebankReader::next(Sentence& out) {
  bool valid = false;
  while (read_sentence(out, valid)) {
    if (valid) {
      ++stats_.sentences;
      stats_.tokens += out.tokens.size();
      return true;
    }
    ++stats_.sentences_skipped;
  }
  return false;
}

// Reads one blank-line-delimited block.  Returns false when the stream is
// exhausted with no tokens pending; `valid` reports whether the block passed
// sentence-level validation.
bool TreebankReader::read_sentence(Sentence& out, bool& valid) {
  out = Sentence{};
  valid = false;
  bool have_tokens = false;
  std::string failure;

  std::string line;
  while (std::getline(in_, line)) {
    line_offset_ = offset_;
    offset_ += line.size() + 1;
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first_line_) {
      first_line_ = false;
      if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' &&
          line[2] == '\xBF')
        line.erase(0, 3);
    }

    if (line.empty()) {
      if (have_tokens) break;
      // Blank lines between sentences (and stray leading comments with no
      // sentence) are skipped; metadata collected so far is dropped.
      out = Sentence{};
      continue;
    }

    if (line[0] == '#') {
      if (auto v = comment_value(line, "sent_id")) out.sent_id = std::move(v);
      if (auto v = comment_value(line, "text")) out.text = std::move(v);
      continue;
    }

    auto fields = split_on(line, '\t');
    if (fields.size() != 10)
      fail("expected 10 tab-separated fields, got " +
           std::to_string(fields.size()));

    std::string_view id_field = fields[0];
    if (is_multiword_id(id_field)) {
      ++out.multiword_tokens;
      have_tokens = true;  // a range line still marks the block as non-empty
      continue;
    }
    if (is_empty_node_id(id_field)) {
      ++out.empty_nodes;
      have_tokens = true;
      continue;
    }
    auto id = parse_u64(id_field);
    if (!id) fail("non-numeric token id '" + std::string(id_field) + "'");
    auto head = parse_u64(fields[6]);
    if (!head) fail("non-numeric head '" + std::string(fields[6]) + "'");

    Token token;
    token.id = *id;
    token.form = decode_field(fields[1]);
    token.lemma = decode_field(fields[2]);
    token.upos = decode_field(fields[3]);
    token.xpos = decode_field(fields[4]);
    token.feats = decode_field(fields[5]);
    token.head = *head;
    token.deprel = decode_field(fields[7]);
    token.deps = decode_field(fields[8]);
    token.misc = decode_field(fields[9]);
    out.tokens.push_back(std::move(token));
    have_tokens = true;
  }

  if (!have_tokens) return false;
  if (out.tokens.empty()) {
    // Block held only range/empty-node lines; nothing countable to yield.
    on_warning_("skipping block ending at line " + std::to_string(line_number_) +
                ": no syntactic words");
    valid = false;
    return true;
  }

  // Sentence-level validation: ids must be 1..n in order, heads must resolve
  // within the sentence.
  const std::uint64_t n = out.tokens.size();
  for (std::uint64_t i = 0; i < n && failure.empty(); ++i) {
    const Token& token = out.tokens[i];
    if (token.id != i + 1)
      failure = "token ids are not consecutive from 1 (saw " +
                std::to_string(token.id) + " at position " +
                std::to_string(i + 1) + ")";
    else if (token.head > n)
      failure = "head " + std::to_string(token.head) + " of token " +
                std::to_string(token.id) + " does not resolve";
    else if (token.head == token.id)
      failure = "token " + std::to_string(token.id) + " heads itself";
  }

  if (!failure.empty()) {
    std::string where = out.sent_id ? "sentence '" + *out.sent_id + "'"
                                    : "sentence ending at line " +
                                          std::to_string(line_number_);
    on_warning_("skipping " + where + ": " + failure);
    valid = false;
    return true;
  }
  valid = true;
  return true;
}

std::vector<Sentence> parse_treebank(std::istream& in,
                                     TreebankReader::WarningHandler on_warning) {
  TreebankReader reader(in, std::move(on_warning));
  std::vector<Sentence> sentences;
  Sentence sentence;
  while (reader.next(sentence)) sentences.push_back(std::move(sentence));
  return sentences;
}

}  // namespace wordorder
