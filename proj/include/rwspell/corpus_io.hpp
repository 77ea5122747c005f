#pragma once

// The interchange format shared by every stage: one sentence per line,
// tokens separated by single spaces.

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rwspell/error.hpp"

namespace rwspell {

using TokenSeq = std::vector<std::string>;
using Corpus = std::vector<TokenSeq>;

inline TokenSeq split_tokens(std::string_view line) {
  TokenSeq out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (end > pos) out.emplace_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

inline std::string join_tokens(const TokenSeq& toks) {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out += ' ';
    out += toks[i];
  }
  return out;
}

// Empty lines are skipped.
inline Corpus read_corpus(std::istream& in) {
  Corpus c;
  std::string line;
  while (std::getline(in, line)) {
    auto toks = split_tokens(line);
    if (!toks.empty()) c.push_back(std::move(toks));
  }
  return c;
}

inline Corpus read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  return read_corpus(in);
}

inline void write_corpus(std::ostream& out, const Corpus& c) {
  for (const auto& s : c) out << join_tokens(s) << '\n';
}

inline std::size_t token_count(const Corpus& c) {
  std::size_t n = 0;
  for (const auto& s : c) n += s.size();
  return n;
}

}  // namespace rwspell
