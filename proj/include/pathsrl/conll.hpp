// CoNLL-2009 tab-separated sentence I/O.
//
// Columns: ID FORM LEMMA PLEMMA POS PPOS FEAT PFEAT HEAD PHEAD DEPREL
// PDEPREL FILLPRED PRED APRED1..APREDn. `_` means empty in FILLPRED, PRED
// and APRED columns; everything else is stored verbatim. Sentences are
// blank-line separated.
#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pathsrl/errors.hpp"

namespace pathsrl {

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string plemma;
  std::string pos;
  std::string ppos;
  std::string feat;
  std::string pfeat;
  int head = 0;
  int phead = 0;
  std::string deprel;
  std::string pdeprel;
  bool fillpred = false;
  std::string pred;                  // empty = not a predicate
  std::vector<std::string> apreds;   // one entry per predicate; "" = no role

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
  const Token& token(int id) const { return tokens[static_cast<std::size_t>(id - 1)]; }
  Token& token(int id) { return tokens[static_cast<std::size_t>(id - 1)]; }

  // Token ids carrying FILLPRED=Y, in sentence order.
  std::vector<int> predicate_tokens() const {
    std::vector<int> out;
    for (const Token& t : tokens)
      if (t.fillpred) out.push_back(t.id);
    return out;
  }

  bool operator==(const Sentence&) const = default;
};

using Corpus = std::vector<Sentence>;

namespace detail {

inline int parse_int_field(std::string_view field, std::size_t line, const char* what) {
  int value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw CorpusError(line, std::string("non-integer ") + what + " field '" +
                                std::string(field) + "'");
  return value;
}

inline std::string decode_underscore(std::string_view field) {
  return field == "_" ? std::string() : std::string(field);
}

inline std::string encode_underscore(const std::string& value) {
  return value.empty() ? std::string("_") : value;
}

struct RawRow {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// Rejects phead cycles; every token must reach the artificial root 0.
inline void check_predicted_tree(const Sentence& sentence, std::size_t line) {
  const int n = sentence.size();
  std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 open, 2 done
  for (int start = 1; start <= n; ++start) {
    int node = start;
    std::vector<int> trail;
    while (node != 0 && state[static_cast<std::size_t>(node)] == 0) {
      state[static_cast<std::size_t>(node)] = 1;
      trail.push_back(node);
      node = sentence.token(node).phead;
    }
    if (node != 0 && state[static_cast<std::size_t>(node)] == 1)
      throw CorpusError(line, "cycle in predicted heads involving token " +
                                  std::to_string(node));
    for (int t : trail) state[static_cast<std::size_t>(t)] = 2;
  }
}

inline Sentence finalize_sentence(const std::vector<RawRow>& rows) {
  Sentence sentence;
  const std::size_t width = rows.front().fields.size();
  for (const RawRow& row : rows) {
    if (row.fields.size() != width)
      throw CorpusError(row.line, "inconsistent column count (" +
                                      std::to_string(row.fields.size()) + " vs " +
                                      std::to_string(width) + " in block)");
  }
  const int n = static_cast<int>(rows.size());
  int predicates = 0;
  for (int i = 0; i < n; ++i) {
    const auto& f = rows[static_cast<std::size_t>(i)].fields;
    const std::size_t line = rows[static_cast<std::size_t>(i)].line;
    Token tok;
    tok.id = parse_int_field(f[0], line, "ID");
    if (tok.id != i + 1)
      throw CorpusError(line, "token ID " + std::to_string(tok.id) +
                                  " out of order (expected " + std::to_string(i + 1) + ")");
    tok.form = f[1];
    tok.lemma = f[2];
    tok.plemma = f[3];
    tok.pos = f[4];
    tok.ppos = f[5];
    tok.feat = f[6];
    tok.pfeat = f[7];
    tok.head = parse_int_field(f[8], line, "HEAD");
    tok.phead = parse_int_field(f[9], line, "PHEAD");
    tok.deprel = f[10];
    tok.pdeprel = f[11];
    if (f[12] == "Y")
      tok.fillpred = true;
    else if (f[12] == "_")
      tok.fillpred = false;
    else
      throw CorpusError(line, "invalid FILLPRED value '" + f[12] + "'");
    tok.pred = decode_underscore(f[13]);
    if (tok.fillpred != !tok.pred.empty())
      throw CorpusError(line, "FILLPRED and PRED disagree");
    if (tok.fillpred) ++predicates;
    for (std::size_t c = 14; c < f.size(); ++c)
      tok.apreds.push_back(decode_underscore(f[c]));
    sentence.tokens.push_back(std::move(tok));
  }
  for (int i = 0; i < n; ++i) {
    const Token& tok = sentence.tokens[static_cast<std::size_t>(i)];
    const std::size_t line = rows[static_cast<std::size_t>(i)].line;
    if (tok.head < 0 || tok.head > n || tok.head == tok.id)
      throw CorpusError(line, "HEAD out of range");
    if (tok.phead < 0 || tok.phead > n || tok.phead == tok.id)
      throw CorpusError(line, "PHEAD out of range");
    if (static_cast<int>(tok.apreds.size()) != predicates)
      throw CorpusError(line, "APRED width " + std::to_string(tok.apreds.size()) +
                                  " does not match predicate count " +
                                  std::to_string(predicates));
  }
  check_predicted_tree(sentence, rows.front().line);
  return sentence;
}

}  // namespace detail

inline Corpus read_corpus(std::istream& in) {
  Corpus corpus;
  std::vector<detail::RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!rows.empty()) {
      corpus.push_back(detail::finalize_sentence(rows));
      rows.clear();
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.back() == ' ' || line.back() == '\t')
      throw CorpusError(line_no, "trailing whitespace");
    detail::RawRow row;
    row.line = line_no;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      const std::string field = line.substr(start, tab == std::string::npos
                                                       ? std::string::npos
                                                       : tab - start);
      if (field.empty()) throw CorpusError(line_no, "empty column");
      row.fields.push_back(field);
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (row.fields.size() < 14)
      throw CorpusError(line_no, "expected at least 14 columns, got " +
                                     std::to_string(row.fields.size()));
    rows.push_back(std::move(row));
  }
  flush();
  return corpus;
}

inline void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Sentence& sentence : corpus) {
    for (const Token& tok : sentence.tokens) {
      out << tok.id << '\t' << tok.form << '\t' << tok.lemma << '\t' << tok.plemma
          << '\t' << tok.pos << '\t' << tok.ppos << '\t' << tok.feat << '\t'
          << tok.pfeat << '\t' << tok.head << '\t' << tok.phead << '\t' << tok.deprel
          << '\t' << tok.pdeprel << '\t' << (tok.fillpred ? "Y" : "_") << '\t'
          << detail::encode_underscore(tok.pred);
      for (const std::string& apred : tok.apreds)
        out << '\t' << detail::encode_underscore(apred);
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace pathsrl
