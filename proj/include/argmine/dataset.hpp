#pragma once

// Sparse labeled feature matrix with a canonical column order, and its
// CSV / ARFF / JSON serializations.
//
// Column order: 7 structural columns, unigram, bigram and trigram booleans,
// the modal boolean, then (only with indicators enabled) the indicator count
// followed by one boolean per lexicon keyword. The class label is kept out of
// the columns and written last by every exporter.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "argmine/corpus.hpp"
#include "argmine/error.hpp"
#include "argmine/features.hpp"
#include "json.hpp"

namespace argmine {

enum class ColumnFamily { Structural, Unigram, Bigram, Trigram, Modal, IndicatorCount, Indicator, Unknown };
enum class ColumnType { Count, Boolean, Real };

inline constexpr std::size_t kStructuralColumns = 7;

inline constexpr std::array<std::string_view, kStructuralColumns> kStructuralNames = {
    "covering_tokens", "fully_contained",   "component_tokens", "surrounding_tokens",
    "punctuation",     "token_ratio",       "ends_question"};

inline constexpr std::array<ColumnType, kStructuralColumns> kStructuralTypes = {
    ColumnType::Count, ColumnType::Boolean, ColumnType::Count, ColumnType::Count,
    ColumnType::Count, ColumnType::Real,    ColumnType::Boolean};

inline std::string_view family_name(ColumnFamily f) {
  switch (f) {
    case ColumnFamily::Structural: return "structural";
    case ColumnFamily::Unigram: return "unigram";
    case ColumnFamily::Bigram: return "bigram";
    case ColumnFamily::Trigram: return "trigram";
    case ColumnFamily::Modal: return "modal";
    case ColumnFamily::IndicatorCount: return "indicator_count";
    case ColumnFamily::Indicator: return "indicator";
    case ColumnFamily::Unknown: break;
  }
  return "unknown";
}

inline ColumnFamily parse_family(std::string_view s) {
  for (auto f : {ColumnFamily::Structural, ColumnFamily::Unigram, ColumnFamily::Bigram,
                 ColumnFamily::Trigram, ColumnFamily::Modal, ColumnFamily::IndicatorCount,
                 ColumnFamily::Indicator}) {
    if (family_name(f) == s) return f;
  }
  return ColumnFamily::Unknown;
}

inline std::string_view type_name(ColumnType t) {
  switch (t) {
    case ColumnType::Count: return "count";
    case ColumnType::Boolean: return "boolean";
    case ColumnType::Real: return "real";
  }
  return "real";
}

inline ColumnType parse_type(std::string_view s) {
  if (s == "count") return ColumnType::Count;
  if (s == "boolean") return ColumnType::Boolean;
  if (s == "real") return ColumnType::Real;
  throw Error("unknown column type '" + std::string(s) + "'");
}

inline bool is_ngram_family(ColumnFamily f) {
  return f == ColumnFamily::Unigram || f == ColumnFamily::Bigram || f == ColumnFamily::Trigram;
}

struct Column {
  std::string name;
  ColumnFamily family = ColumnFamily::Unknown;
  ColumnType type = ColumnType::Real;

  friend bool operator==(const Column&, const Column&) = default;
};

namespace detail {

inline constexpr std::array<std::pair<std::string_view, ColumnFamily>, 4> kPrefixes = {{
    {"uni:", ColumnFamily::Unigram},
    {"bi:", ColumnFamily::Bigram},
    {"tri:", ColumnFamily::Trigram},
    {"kw:", ColumnFamily::Indicator},
}};

}  // namespace detail

// Recovers the descriptor of a column from its canonical name.
inline Column column_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kStructuralColumns; ++i) {
    if (name == kStructuralNames[i]) return {std::string(name), ColumnFamily::Structural, kStructuralTypes[i]};
  }
  if (name == "modal") return {"modal", ColumnFamily::Modal, ColumnType::Boolean};
  if (name == "indicator_count") return {"indicator_count", ColumnFamily::IndicatorCount, ColumnType::Count};
  for (const auto& [prefix, family] : detail::kPrefixes) {
    if (name.substr(0, prefix.size()) == prefix) return {std::string(name), family, ColumnType::Boolean};
  }
  return {std::string(name), ColumnFamily::Unknown, ColumnType::Real};
}

struct Entry {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Sparse row: entries sorted by index, no explicit zeros.
struct FeatureVector {
  std::vector<Entry> entries;
  InstanceLabel label = InstanceLabel::None;

  std::vector<double> dense(std::size_t dim) const {
    std::vector<double> out(dim, 0.0);
    for (const auto& e : entries) out.at(e.index) = e.value;
    return out;
  }

  double at(std::uint32_t index) const {
    const auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                     [](const Entry& e, std::uint32_t i) { return e.index < i; });
    return (it != entries.end() && it->index == index) ? it->value : 0.0;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Dataset {
  std::vector<Column> schema;
  std::vector<FeatureVector> rows;
  VocabScope vocab_scope = VocabScope::FullCorpus;

  std::size_t dim() const { return schema.size(); }

  std::array<std::size_t, kNumClasses> class_counts() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (const auto& r : rows) ++counts[static_cast<std::size_t>(label_index(r.label))];
    return counts;
  }

  std::vector<InstanceLabel> labels() const {
    std::vector<InstanceLabel> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.label);
    return out;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Rounds to 6 significant digits, the precision every exporter writes, so
// that export followed by import is exact.
inline double quantize(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

// Throws unless every row matches the schema.
inline void validate(const Dataset& ds) {
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    const auto& row = ds.rows[r];
    auto fail = [&](const std::string& why) {
      return Error("row " + std::to_string(r + 1) + ": " + why);
    };
    std::optional<std::uint32_t> prev;
    for (const auto& e : row.entries) {
      if (e.index >= ds.dim()) throw fail("column index " + std::to_string(e.index) + " out of range");
      if (prev && e.index <= *prev) throw fail("entries not strictly increasing");
      prev = e.index;
      if (e.value == 0.0) throw fail("explicit zero entry");
      if (std::isnan(e.value)) throw fail("NaN value");
      const auto type = ds.schema[e.index].type;
      if (type == ColumnType::Boolean && e.value != 1.0) throw fail("boolean column holds " + std::to_string(e.value));
      if (type == ColumnType::Count && (e.value < 0 || e.value != std::floor(e.value))) {
        throw fail("count column holds " + std::to_string(e.value));
      }
    }
    label_from_index(label_index(row.label));
  }
}

// Assembly

struct AssembleOptions {
  bool indicator = true;
  LookupScope lookup = LookupScope::Sentence;
  ModalList modals = ModalList::defaults();
};

inline std::vector<Column> build_schema(const Vocabulary& vocab, const IndicatorLexicon* lexicon,
                                        bool indicator) {
  std::vector<Column> schema;
  schema.reserve(kStructuralColumns + vocab.size() + 2 + (lexicon ? lexicon->size() : 0));
  for (std::size_t i = 0; i < kStructuralColumns; ++i) {
    schema.push_back({std::string(kStructuralNames[i]), ColumnFamily::Structural, kStructuralTypes[i]});
  }
  constexpr std::array<std::pair<std::string_view, ColumnFamily>, 3> orders = {{
      {"uni:", ColumnFamily::Unigram}, {"bi:", ColumnFamily::Bigram}, {"tri:", ColumnFamily::Trigram}}};
  for (int n = 1; n <= 3; ++n) {
    const auto& [prefix, family] = orders[static_cast<std::size_t>(n - 1)];
    for (const auto& g : vocab.grams(n)) schema.push_back({std::string(prefix) + g, family, ColumnType::Boolean});
  }
  schema.push_back({"modal", ColumnFamily::Modal, ColumnType::Boolean});
  if (indicator) {
    if (!lexicon) throw Error("indicator features requested without a lexicon");
    schema.push_back({"indicator_count", ColumnFamily::IndicatorCount, ColumnType::Count});
    for (const auto& k : lexicon->keywords()) schema.push_back({"kw:" + k, ColumnFamily::Indicator, ColumnType::Boolean});
  }
  return schema;
}

inline FeatureVector featurize(const Instance& inst, const Vocabulary& vocab,
                               const IndicatorLexicon* lexicon, const AssembleOptions& options) {
  FeatureVector row;
  row.label = inst.label;
  auto put = [&](std::size_t index, double value) {
    if (value != 0.0) row.entries.push_back({static_cast<std::uint32_t>(index), value});
  };
  const auto s = structural_features(inst);
  put(0, static_cast<double>(s.covering_tokens));
  put(1, s.fully_contained ? 1.0 : 0.0);
  put(2, static_cast<double>(s.component_tokens));
  put(3, static_cast<double>(s.surrounding_tokens));
  put(4, static_cast<double>(s.punctuation));
  put(5, quantize(s.token_ratio));
  put(6, s.ends_question ? 1.0 : 0.0);

  const auto lex = lexical_features(inst, vocab, options.modals, options.lookup);
  std::size_t base = kStructuralColumns;
  for (int n = 1; n <= 3; ++n) {
    for (const auto idx : lex.present[static_cast<std::size_t>(n - 1)]) put(base + idx, 1.0);
    base += vocab.size(n);
  }
  put(base, lex.modal ? 1.0 : 0.0);
  ++base;
  if (options.indicator) {
    if (!lexicon) throw Error("indicator features requested without a lexicon");
    const auto ind = indicator_features(inst, *lexicon, options.lookup);
    put(base, static_cast<double>(ind.count));
    ++base;
    for (const auto k : ind.present) put(base + k, 1.0);
  }
  return row;
}

inline Dataset assemble(const Corpus& corpus, const Vocabulary& vocab, const IndicatorLexicon* lexicon,
                        const AssembleOptions& options = {}) {
  const std::unordered_set<std::string> known(corpus.essay_ids.begin(), corpus.essay_ids.end());
  Dataset ds;
  ds.vocab_scope = vocab.scope();
  ds.schema = build_schema(vocab, lexicon, options.indicator);
  ds.rows.reserve(corpus.instances.size());
  for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
    const auto& inst = corpus.instances[i];
    if (!known.count(inst.essay_id)) {
      throw Error("instance " + std::to_string(i + 1) + " references unknown essay '" + inst.essay_id + "'");
    }
    ds.rows.push_back(featurize(inst, vocab, lexicon, options));
  }
  return ds;
}

// Serialization

enum class Format { Csv, Arff, Json };

inline Format format_from_string(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "arff") return Format::Arff;
  if (s == "json") return Format::Json;
  throw Error("unknown format '" + std::string(s) + "' (expected csv|arff|json)");
}

inline Format format_from_path(const std::filesystem::path& p) {
  auto ext = to_lower(p.extension().string());
  if (!ext.empty()) ext.erase(0, 1);
  return format_from_string(ext);
}

inline std::filesystem::path schema_sidecar(const std::filesystem::path& csv) {
  return csv.string() + ".schema.json";
}

namespace detail {

inline std::string format_value(double v, ColumnType type) {
  char buf[32];
  if (type != ColumnType::Real || v == std::floor(v)) {
    if (std::fabs(v) < 9e15) {
      std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
      return buf;
    }
  }
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline double parse_number(std::string_view s, std::size_t row, std::size_t column) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v)) {
    throw Error("row " + std::to_string(row) + ", column " + std::to_string(column) +
                ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline InstanceLabel parse_label(std::string_view s, std::size_t row) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  if (s.size() == 1 && s[0] >= '0' && s[0] <= '3') return label_from_index(s[0] - '0');
  throw Error("row " + std::to_string(row) + ": invalid class label '" + std::string(s) + "'");
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

inline void write_dense_values(std::ostream& out, const Dataset& ds, const FeatureVector& row) {
  std::size_t next = 0;
  for (std::size_t c = 0; c < ds.dim(); ++c) {
    double v = 0.0;
    if (next < row.entries.size() && row.entries[next].index == c) v = row.entries[next++].value;
    if (v == 0.0) out << '0';
    else out << format_value(v, ds.schema[c].type);
    out << ',';
  }
  out << label_index(row.label) << '\n';
}

inline nlohmann::ordered_json schema_json(const Dataset& ds) {
  auto cols = nlohmann::ordered_json::array();
  for (const auto& c : ds.schema) {
    cols.push_back({{"name", c.name}, {"family", family_name(c.family)}, {"type", type_name(c.type)}});
  }
  return cols;
}

inline std::vector<Column> schema_from_json(const nlohmann::json& cols) {
  std::vector<Column> schema;
  for (const auto& c : cols) {
    schema.push_back({c.at("name").get<std::string>(), parse_family(c.at("family").get<std::string>()),
                      parse_type(c.at("type").get<std::string>())});
  }
  return schema;
}

// Quotes an ARFF attribute name unless it is a plain identifier.
inline std::string arff_name(std::string_view name) {
  const bool plain = !name.empty() && std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_';
  });
  if (plain) return std::string(name);
  std::string out = "'";
  for (char ch : name) {
    if (ch == '\'' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  out.push_back('\'');
  return out;
}

// Reads a possibly quoted ARFF token from the front of `s`, consuming it.
inline std::string take_arff_name(std::string_view& s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  if (s.empty()) throw Error("missing attribute name");
  std::string out;
  if (s.front() == '\'' || s.front() == '"') {
    const char quote = s.front();
    std::size_t i = 1;
    for (; i < s.size() && s[i] != quote; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out.push_back(s[i]);
    }
    if (i >= s.size()) throw Error("unterminated quoted attribute name");
    s.remove_prefix(i + 1);
  } else {
    std::size_t i = 0;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    out = std::string(s.substr(0, i));
    s.remove_prefix(i);
  }
  return out;
}

}  // namespace detail

struct ExportOptions {
  bool sparse_arff = false;
};

inline void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  for (std::size_t c = 0; c < ds.dim(); ++c) out << 'f' << c << ',';
  out << "label\n";
  for (const auto& row : ds.rows) detail::write_dense_values(out, ds, row);
  if (!out) throw Error("write failed: " + path.string());

  nlohmann::ordered_json side;
  side["format"] = "argmine-csv-schema";
  side["version"] = 1;
  side["vocab_scope"] = scope_name(ds.vocab_scope);
  side["columns"] = detail::schema_json(ds);
  auto sout = detail::open_out(schema_sidecar(path));
  sout << side.dump(1) << '\n';
}

inline void write_arff(const Dataset& ds, const std::filesystem::path& path, bool sparse = false) {
  auto out = detail::open_out(path);
  out << "% argmine dataset\n% vocab_scope: " << scope_name(ds.vocab_scope) << "\n";
  out << "@relation argmine\n\n";
  for (const auto& c : ds.schema) out << "@attribute " << detail::arff_name(c.name) << " numeric\n";
  out << "@attribute class {0,1,2,3}\n\n@data\n";
  for (const auto& row : ds.rows) {
    if (!sparse) {
      detail::write_dense_values(out, ds, row);
      continue;
    }
    out << '{';
    for (const auto& e : row.entries) out << e.index << ' ' << detail::format_value(e.value, ds.schema[e.index].type) << ',';
    out << ds.dim() << ' ' << label_index(row.label) << "}\n";
  }
  if (!out) throw Error("write failed: " + path.string());
}

inline nlohmann::ordered_json to_json(const Dataset& ds) {
  nlohmann::ordered_json j;
  j["format"] = "argmine-dataset";
  j["version"] = 1;
  j["vocab_scope"] = scope_name(ds.vocab_scope);
  j["columns"] = detail::schema_json(ds);
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : ds.rows) {
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : r.entries) entries.push_back({e.index, e.value});
    rows.push_back({{"label", label_index(r.label)}, {"entries", std::move(entries)}});
  }
  return j;
}

inline void write_json(const Dataset& ds, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << to_json(ds).dump() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

inline void export_dataset(const Dataset& ds, Format format, const std::filesystem::path& path,
                           const ExportOptions& options = {}) {
  switch (format) {
    case Format::Csv: return write_csv(ds, path);
    case Format::Arff: return write_arff(ds, path, options.sparse_arff);
    case Format::Json: return write_json(ds, path);
  }
}

namespace detail {

// Appends one dense row, validating values against the schema.
inline FeatureVector dense_row(std::string_view line, const std::vector<Column>& schema, std::size_t rowno) {
  const auto cells = split(line, ',');
  if (cells.size() != schema.size() + 1) {
    throw Error("row " + std::to_string(rowno) + ": expected " + std::to_string(schema.size() + 1) +
                " values, found " + std::to_string(cells.size()));
  }
  FeatureVector fv;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    const double v = parse_number(cells[c], rowno, c);
    if (v != 0.0) fv.entries.push_back({static_cast<std::uint32_t>(c), v});
  }
  fv.label = parse_label(cells.back(), rowno);
  return fv;
}

}  // namespace detail

inline Dataset read_csv(const std::filesystem::path& path) {
  std::istringstream in(detail::read_file(path));
  std::string header;
  if (!std::getline(in, header)) throw Error(path.string() + ": empty CSV file");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto names = detail::split(header, ',');
  if (names.empty() || names.back() != "label") throw Error(path.string() + ": header must end with 'label'");
  Dataset ds;
  for (std::size_t c = 0; c + 1 < names.size(); ++c) {
    if (names[c] != "f" + std::to_string(c)) {
      throw Error(path.string() + ": header column " + std::to_string(c) + " should be f" + std::to_string(c));
    }
  }
  const auto side = schema_sidecar(path);
  if (std::filesystem::exists(side)) {
    try {
      const auto j = nlohmann::json::parse(detail::read_file(side));
      ds.schema = detail::schema_from_json(j.at("columns"));
      ds.vocab_scope = parse_vocab_scope(j.at("vocab_scope").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(side.string() + ": " + e.what());
    }
    if (ds.schema.size() + 1 != names.size()) {
      throw Error(path.string() + ": schema mismatch, sidecar has " + std::to_string(ds.schema.size()) +
                  " columns but header has " + std::to_string(names.size() - 1));
    }
  } else {
    for (std::size_t c = 0; c + 1 < names.size(); ++c) ds.schema.push_back({std::string(names[c]), ColumnFamily::Unknown, ColumnType::Real});
  }
  std::size_t rowno = 0;
  for (std::string line; std::getline(in, line);) {
    ++rowno;
    if (line.empty() || line == "\r") continue;
    ds.rows.push_back(detail::dense_row(line, ds.schema, rowno));
  }
  try {
    validate(ds);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return ds;
}

inline Dataset read_arff(const std::filesystem::path& path) {
  std::istringstream in(detail::read_file(path));
  Dataset ds;
  bool in_data = false;
  bool have_class = false;
  std::size_t lineno = 0;
  std::size_t rowno = 0;
  auto fail = [&](const std::string& why) {
    return Error(path.string() + ":" + std::to_string(lineno) + ": " + why);
  };
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '%') {
      constexpr std::string_view tag = "% vocab_scope: ";
      if (line.substr(0, tag.size()) == tag) ds.vocab_scope = parse_vocab_scope(line.substr(tag.size()));
      continue;
    }
    if (!in_data) {
      const auto lower = to_lower(line.substr(0, std::min<std::size_t>(line.size(), 10)));
      if (lower.rfind("@relation", 0) == 0) continue;
      if (lower.rfind("@data", 0) == 0) {
        if (!have_class) throw fail("missing class attribute");
        in_data = true;
        continue;
      }
      if (lower.rfind("@attribute", 0) != 0) throw fail("unexpected header line");
      if (have_class) throw fail("the class attribute must be the last attribute");
      std::string_view rest = line.substr(10);
      std::string name;
      try {
        name = detail::take_arff_name(rest);
      } catch (const Error& e) {
        throw fail(e.what());
      }
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
      if (name == "class") {
        std::string spec(rest);
        spec.erase(std::remove(spec.begin(), spec.end(), ' '), spec.end());
        if (spec != "{0,1,2,3}") throw fail("class attribute must be nominal {0,1,2,3}");
        have_class = true;
        continue;
      }
      if (to_lower(rest) != "numeric" && to_lower(rest) != "real" && to_lower(rest) != "integer") {
        throw fail("attribute '" + name + "' must be numeric");
      }
      ds.schema.push_back(column_from_name(name));
      continue;
    }
    ++rowno;
    if (line.front() == '{') {
      if (line.back() != '}') throw fail("unterminated sparse row");
      FeatureVector fv;
      bool have_label = false;
      const auto body = line.substr(1, line.size() - 2);
      for (auto cell : detail::split(body, ',')) {
        while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
        if (cell.empty()) continue;
        const auto sp = cell.find(' ');
        if (sp == std::string_view::npos) throw fail("sparse entry needs '<index> <value>'");
        const auto idx = detail::parse_offset(cell.substr(0, sp));
        if (!idx || *idx > ds.dim()) throw fail("bad sparse index");
        if (*idx == ds.dim()) {
          fv.label = detail::parse_label(cell.substr(sp + 1), rowno);
          have_label = true;
          continue;
        }
        const double v = detail::parse_number(cell.substr(sp + 1), rowno, *idx);
        if (v != 0.0) fv.entries.push_back({static_cast<std::uint32_t>(*idx), v});
      }
      // Omitted nominal values default to the first declared value.
      if (!have_label) fv.label = InstanceLabel::MajorClaim;
      ds.rows.push_back(std::move(fv));
    } else {
      ds.rows.push_back(detail::dense_row(line, ds.schema, rowno));
    }
  }
  if (!in_data) throw Error(path.string() + ": missing @data section");
  try {
    validate(ds);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return ds;
}

inline Dataset read_json(const std::filesystem::path& path) {
  try {
    const auto j = nlohmann::json::parse(detail::read_file(path));
    if (j.value("format", "") != "argmine-dataset") throw Error(path.string() + ": not a dataset file");
    Dataset ds;
    ds.vocab_scope = parse_vocab_scope(j.at("vocab_scope").get<std::string>());
    ds.schema = detail::schema_from_json(j.at("columns"));
    for (const auto& r : j.at("rows")) {
      FeatureVector fv;
      fv.label = label_from_index(r.at("label").get<int>());
      for (const auto& e : r.at("entries")) fv.entries.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<double>()});
      ds.rows.push_back(std::move(fv));
    }
    validate(ds);
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline Dataset import_dataset(const std::filesystem::path& path, Format format) {
  switch (format) {
    case Format::Csv: return read_csv(path);
    case Format::Arff: return read_arff(path);
    case Format::Json: return read_json(path);
  }
  throw Error("unknown format");
}

inline Dataset import_dataset(const std::filesystem::path& path) {
  return import_dataset(path, format_from_path(path));
}

}  // namespace argmine
