#pragma once

// Per-instance features: seven structural counts, n-gram and modal
// booleans, and discourse-marker indicator features.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "argmine/corpus.hpp"
#include "argmine/error.hpp"
#include "argmine/text.hpp"

namespace argmine {

// Which text n-gram, modal and keyword lookups look at. Sentence uses the
// covering sentence for every instance; Component uses the component text
// for argument instances and the sentence for None instances.
enum class LookupScope { Sentence, Component };

enum class VocabScope { FullCorpus, TrainFoldOnly };

inline std::string_view scope_name(LookupScope s) {
  return s == LookupScope::Sentence ? "sentence" : "component";
}
inline std::string_view scope_name(VocabScope s) {
  return s == VocabScope::FullCorpus ? "corpus" : "fold";
}
inline LookupScope parse_lookup_scope(std::string_view s) {
  if (s == "sentence") return LookupScope::Sentence;
  if (s == "component") return LookupScope::Component;
  throw Error("unknown lookup scope '" + std::string(s) + "' (expected sentence|component)");
}
inline VocabScope parse_vocab_scope(std::string_view s) {
  if (s == "corpus") return VocabScope::FullCorpus;
  if (s == "fold") return VocabScope::TrainFoldOnly;
  throw Error("unknown vocabulary scope '" + std::string(s) + "' (expected corpus|fold)");
}

inline const std::string& lookup_text(const Instance& inst, LookupScope scope) {
  if (scope == LookupScope::Component && inst.component_text) return *inst.component_text;
  return inst.covering_sentence;
}

// Structural features

struct StructuralFeatures {
  std::size_t covering_tokens = 0;
  bool fully_contained = false;
  std::size_t component_tokens = 0;
  std::size_t surrounding_tokens = 0;
  std::size_t punctuation = 0;
  double token_ratio = 0.0;
  bool ends_question = false;
};

inline bool ends_with_question(std::string_view sentence) {
  const auto cps = utf8::decode_all(sentence);
  std::size_t i = cps.size();
  while (i > 0 && (is_space(cps[i - 1]) || detail::is_closing(cps[i - 1]))) --i;
  return i > 0 && cps[i - 1] == U'?';
}

inline StructuralFeatures structural_features(const Instance& inst) {
  StructuralFeatures f;
  const auto covering = tokenize(inst.covering_sentence);
  f.covering_tokens = covering.size();
  f.punctuation = covering.punctuation_count;
  f.ends_question = ends_with_question(inst.covering_sentence);
  if (inst.is_argument() && inst.component_text) {
    // A component token is always a piece of a distinct covering token, so
    // the subtraction cannot underflow.
    f.component_tokens = tokenize(*inst.component_text).size();
    f.surrounding_tokens = f.covering_tokens - f.component_tokens;
    f.fully_contained = f.component_tokens == f.covering_tokens;
    if (f.covering_tokens > 0) {
      f.token_ratio = static_cast<double>(f.component_tokens) / static_cast<double>(f.covering_tokens);
    }
  } else {
    f.surrounding_tokens = f.covering_tokens;
  }
  return f;
}

// Word lists

namespace detail {

// Lines of a UTF-8 list file, trimmed, skipping blanks and '#' comments.
inline std::vector<std::string> read_list_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

}  // namespace detail

class ModalList {
 public:
  ModalList() = default;
  explicit ModalList(std::span<const std::string> words) {
    for (const auto& w : words) words_.insert(to_lower(w));
  }

  static ModalList defaults() {
    static const std::vector<std::string> kModals = {
        "can", "could", "may", "might", "must", "shall", "should", "will", "would", "ought"};
    return ModalList(kModals);
  }

  static ModalList load(const std::filesystem::path& path) {
    return ModalList(detail::read_list_file(path));
  }

  bool contains(std::string_view lowered_token) const {
    return words_.count(std::string(lowered_token)) > 0;
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Ordered discourse-marker phrases. Each phrase is stored as its lowercase
// token sequence, normalized through the same tokenizer that is applied to
// sentences, so "as a result," and "as a result" are the same keyword.
class IndicatorLexicon {
 public:
  IndicatorLexicon() = default;
  explicit IndicatorLexicon(std::span<const std::string> phrases) {
    for (const auto& p : phrases) add(p);
  }

  static IndicatorLexicon load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
      throw Error("indicator lexicon not found: " + path.string());
    }
    return IndicatorLexicon(detail::read_list_file(path));
  }

  // Returns false for duplicates and phrases without any word token.
  bool add(std::string_view phrase) {
    auto tokens = lowercase_tokens(tokenize(phrase).tokens);
    if (tokens.empty()) return false;
    std::string key = join(tokens);
    if (index_.count(key)) return false;
    const auto idx = keywords_.size();
    index_.emplace(key, idx);
    by_first_[tokens.front()].push_back(idx);
    keywords_.push_back(std::move(key));
    tokens_.push_back(std::move(tokens));
    return true;
  }

  std::size_t size() const { return keywords_.size(); }
  const std::vector<std::string>& keywords() const { return keywords_; }
  const std::vector<std::string>& tokens(std::size_t k) const { return tokens_[k]; }

  // Keyword indices whose first token is `lowered`.
  std::span<const std::size_t> starting_with(const std::string& lowered) const {
    const auto it = by_first_.find(lowered);
    if (it == by_first_.end()) return {};
    return it->second;
  }

 private:
  static std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out.push_back(' ');
      out += t;
    }
    return out;
  }

  std::vector<std::string> keywords_;
  std::vector<std::vector<std::string>> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
};

// N-gram vocabulary

class Vocabulary {
 public:
  explicit Vocabulary(VocabScope scope = VocabScope::FullCorpus) : scope_(scope) {}

  VocabScope scope() const { return scope_; }

  // Adds every n-gram of the token sequence; existing entries keep their index.
  void add_tokens(std::span<const std::string> tokens) {
    for (int n = 1; n <= 3; ++n) {
      auto& order = orders_[static_cast<std::size_t>(n - 1)];
      for (auto& g : ngrams(tokens, n)) {
        if (order.index.emplace(g, order.grams.size()).second) order.grams.push_back(std::move(g));
      }
    }
  }

  // Grams of order 1..3 in first-occurrence order.
  const std::vector<std::string>& grams(int n) const { return order(n).grams; }
  std::size_t size(int n) const { return order(n).grams.size(); }
  std::size_t size() const { return size(1) + size(2) + size(3); }

  std::optional<std::size_t> find(int n, const std::string& gram) const {
    const auto& o = order(n);
    const auto it = o.index.find(gram);
    if (it == o.index.end()) return std::nullopt;
    return it->second;
  }

 private:
  struct Order {
    std::vector<std::string> grams;
    std::unordered_map<std::string, std::size_t> index;
  };

  const Order& order(int n) const {
    if (n < 1 || n > 3) throw Error("ngram order must be 1, 2 or 3");
    return orders_[static_cast<std::size_t>(n - 1)];
  }

  VocabScope scope_;
  std::array<Order, 3> orders_;
};

inline Vocabulary build_vocabulary(std::span<const Instance> instances, VocabScope scope,
                                   LookupScope lookup = LookupScope::Sentence) {
  if (instances.empty()) throw Error("cannot build a vocabulary from zero instances");
  Vocabulary vocab(scope);
  for (const auto& inst : instances) vocab.add_tokens(tokenize(lookup_text(inst, lookup)).tokens);
  return vocab;
}

// Lexical features

struct LexicalFeatures {
  // Sorted vocabulary indices of the n-grams present, per order.
  std::array<std::vector<std::size_t>, 3> present;
  bool modal = false;
};

inline LexicalFeatures lexical_features(const Instance& inst, const Vocabulary& vocab,
                                        const ModalList& modals = ModalList::defaults(),
                                        LookupScope lookup = LookupScope::Sentence) {
  const auto tokens = tokenize(lookup_text(inst, lookup)).tokens;
  LexicalFeatures f;
  for (int n = 1; n <= 3; ++n) {
    auto& hits = f.present[static_cast<std::size_t>(n - 1)];
    for (const auto& g : ngrams(tokens, n)) {
      if (const auto idx = vocab.find(n, g)) hits.push_back(*idx);
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  }
  f.modal = std::any_of(tokens.begin(), tokens.end(),
                        [&](const std::string& t) { return modals.contains(to_lower(t)); });
  return f;
}

// Indicator features

struct IndicatorFeatures {
  std::size_t count = 0;
  // Sorted lexicon indices of the keywords present.
  std::vector<std::size_t> present;
};

// Counts keyword occurrences on token boundaries. Occurrences of one keyword
// are taken greedily left to right without overlapping each other; distinct
// keywords may overlap ("on the other hand" also contains "other hand").
inline IndicatorFeatures indicator_features(const Instance& inst, const IndicatorLexicon& lex,
                                            LookupScope lookup = LookupScope::Sentence) {
  const auto tokens = lowercase_tokens(tokenize(lookup_text(inst, lookup)).tokens);
  IndicatorFeatures f;
  std::unordered_map<std::size_t, std::size_t> next_free;  // keyword -> first usable position
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto k : lex.starting_with(tokens[i])) {
      const auto& phrase = lex.tokens(k);
      if (i + phrase.size() > tokens.size()) continue;
      if (const auto it = next_free.find(k); it != next_free.end() && i < it->second) continue;
      if (!std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        continue;
      }
      ++f.count;
      next_free[k] = i + phrase.size();
      f.present.push_back(k);
    }
  }
  std::sort(f.present.begin(), f.present.end());
  f.present.erase(std::unique(f.present.begin(), f.present.end()), f.present.end());
  return f;
}

}  // namespace argmine
