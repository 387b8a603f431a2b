#pragma once

// Corpus ingestion: standoff annotation parsing, sentence segmentation and
// construction of labeled instances (one per component, one per bare
// sentence).

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "argmine/error.hpp"
#include "argmine/text.hpp"
#include "json.hpp"

namespace argmine {

enum class ComponentLabel { MajorClaim = 0, Claim = 1, Premise = 2 };

// Class attribute values. The numeric values are part of every file format.
enum class InstanceLabel : int { MajorClaim = 0, Claim = 1, Premise = 2, None = 3 };

inline constexpr int kNumClasses = 4;

inline InstanceLabel to_instance_label(ComponentLabel l) {
  return static_cast<InstanceLabel>(static_cast<int>(l));
}

inline int label_index(InstanceLabel l) { return static_cast<int>(l); }

inline InstanceLabel label_from_index(int i) {
  if (i < 0 || i >= kNumClasses) throw Error("label out of range: " + std::to_string(i));
  return static_cast<InstanceLabel>(i);
}

inline std::string_view label_name(InstanceLabel l) {
  static constexpr std::array<std::string_view, kNumClasses> names = {
      "MajorClaim", "Claim", "Premise", "None"};
  return names[static_cast<std::size_t>(label_index(l))];
}

inline std::optional<ComponentLabel> parse_component_type(std::string_view s) {
  if (s == "MajorClaim") return ComponentLabel::MajorClaim;
  if (s == "Claim") return ComponentLabel::Claim;
  if (s == "Premise") return ComponentLabel::Premise;
  return std::nullopt;
}

struct Essay {
  std::string id;
  std::string text;
};

// Offsets count Unicode code points, as in BRAT files. `line` is the 1-based
// line of the annotation file the span came from.
struct ComponentSpan {
  ComponentLabel label;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::size_t line = 0;
};

// Byte offsets into the essay text; `end` is exclusive.
struct Sentence {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
};

struct Instance {
  std::string essay_id;
  InstanceLabel label = InstanceLabel::None;
  std::optional<std::string> component_text;
  // Byte offset of component_text inside covering_sentence.
  std::size_t component_offset = 0;
  std::string covering_sentence;

  bool is_argument() const { return label != InstanceLabel::None; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

using DebugSink = std::function<void(std::string_view)>;

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

inline std::optional<std::size_t> parse_offset(std::string_view s) {
  std::size_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) return std::nullopt;
  return v;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// Parses a BRAT standoff file. Only text-bound lines whose type is a
// component label are returned; relations, attributes, notes and other
// entity types are skipped.
inline std::vector<ComponentSpan> parse_annotations(std::string_view raw,
                                                    const DebugSink& debug = {}) {
  std::vector<ComponentSpan> spans;
  const auto lines = detail::split(raw, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    const std::size_t lineno = i + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() != 'T') {
      if (debug) debug("line " + std::to_string(lineno) + ": skipping non-component annotation");
      continue;
    }
    auto malformed = [&](std::string_view why) {
      return Error("annotation line " + std::to_string(lineno) + ": " + std::string(why));
    };
    const auto fields = detail::split(line, '\t');
    if (fields.size() < 3) throw malformed("expected 3 tab-separated fields");
    const auto head = detail::split(fields[1], ' ');
    if (head.empty() || head[0].empty()) throw malformed("missing annotation type");
    const auto type = parse_component_type(head[0]);
    if (!type) {
      if (debug) debug("line " + std::to_string(lineno) + ": skipping type " + std::string(head[0]));
      continue;
    }
    if (head.size() != 3) throw malformed("expected '<Type> <start> <end>'");
    const auto start = detail::parse_offset(head[1]);
    const auto end = detail::parse_offset(head[2]);
    if (!start || !end) throw malformed("offsets must be non-negative integers");
    if (*start >= *end) throw malformed("empty or inverted span");
    // The surface may itself contain tabs; keep everything after the second tab.
    const auto surface_pos = fields[0].size() + 1 + fields[1].size() + 1;
    spans.push_back({*type, *start, *end, std::string(line.substr(surface_pos)), lineno});
  }
  std::stable_sort(spans.begin(), spans.end(),
                   [](const ComponentSpan& a, const ComponentSpan& b) { return a.start < b.start; });
  return spans;
}

struct ByteRange {
  std::size_t start = 0;
  std::size_t end = 0;
};

// Checks spans against the essay text and converts their code point offsets
// into byte offsets. `spans` must be sorted by start.
inline std::vector<ByteRange> validate_spans(const Essay& essay,
                                             std::span<const ComponentSpan> spans) {
  std::vector<std::size_t> offsets;
  const auto cps = utf8::decode_all(essay.text, &offsets);
  std::vector<ByteRange> out;
  out.reserve(spans.size());
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    const auto where = essay.id + ".ann line " + std::to_string(s.line) + ": ";
    if (!(s.start < s.end) || s.end > cps.size()) {
      throw Error(where + "span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                  ") lies outside the essay text (" + std::to_string(cps.size()) + " chars)");
    }
    if (i > 0 && s.start < previous_end) throw Error(where + "span overlaps the previous span");
    previous_end = s.end;
    ByteRange r{offsets[s.start], offsets[s.end]};
    if (std::string_view(essay.text).substr(r.start, r.end - r.start) != s.surface) {
      throw Error(where + "surface text does not match the essay at the given offsets");
    }
    out.push_back(r);
  }
  return out;
}

// Tokens such as "e.g." or "mr." after which a period does not end a
// sentence. Entries are compared lowercased.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::span<const std::string> entries) {
    for (const auto& e : entries) add(e);
  }

  static AbbreviationList defaults() {
    static const std::vector<std::string> kDefault = {
        "e.g.", "i.e.", "etc.", "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "vs.",
        "cf.", "viz.", "approx.", "no.", "jr.", "sr.", "u.s.", "u.k."};
    return AbbreviationList(kDefault);
  }

  // One entry per line; blank lines and '#' comments are ignored.
  static AbbreviationList load(const std::filesystem::path& path) {
    AbbreviationList list;
    std::istringstream in(detail::read_file(path));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t");
      list.add(line.substr(first, last - first + 1));
    }
    return list;
  }

  void add(std::string_view entry) { entries_.insert(to_lower(entry)); }
  bool contains(std::string_view word) const { return entries_.count(to_lower(word)) > 0; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

namespace detail {

inline bool is_terminator(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == 0x2026;
}

inline bool is_closing(char32_t c) {
  return c == U')' || c == U']' || c == U'"' || c == U'\'' || c == 0x2019 || c == 0x201D;
}

inline bool is_opening(char32_t c) {
  return c == U'(' || c == U'[' || c == U'"' || c == U'\'' || c == 0x2018 || c == 0x201C;
}

}  // namespace detail

// Rule-based splitter. A sentence ends at a line break, or after a run of
// '.', '!', '?' or '…' (plus closing quotes/brackets) that is followed by
// whitespace and then an uppercase letter (optionally behind an opening quote
// or bracket) or the end of the text. A single '.' closing a guarded
// abbreviation never ends a sentence.
inline std::vector<Sentence> segment_sentences(std::string_view text,
                                               const AbbreviationList& abbreviations =
                                                   AbbreviationList::defaults()) {
  std::vector<std::size_t> off;
  const auto cps = utf8::decode_all(text, &off);
  const std::size_t n = cps.size();
  std::vector<Sentence> out;

  std::optional<std::size_t> begin;  // code point index of current sentence start
  auto close = [&](std::size_t end_cp) {
    if (!begin) return;
    std::size_t e = end_cp;
    while (e > *begin && is_space(cps[e - 1])) --e;
    if (e > *begin) {
      out.push_back({off[*begin], off[e], std::string(text.substr(off[*begin], off[e] - off[*begin]))});
    }
    begin.reset();
  };

  for (std::size_t i = 0; i < n; ++i) {
    const char32_t c = cps[i];
    if (c == U'\n' || c == 0x2028 || c == 0x2029) {
      close(i);
      continue;
    }
    if (!begin) {
      if (!is_space(c)) begin = i;
      else continue;
    }
    if (!detail::is_terminator(c)) continue;

    std::size_t j = i;
    while (j < n && detail::is_terminator(cps[j])) ++j;
    const bool single_period = (j == i + 1 && c == U'.');
    while (j < n && detail::is_closing(cps[j])) ++j;
    if (j < n && !is_space(cps[j])) {
      i = j - 1;
      continue;
    }
    std::size_t k = j;
    while (k < n && is_space(cps[k]) && cps[k] != U'\n') ++k;
    bool boundary = (k == n || cps[k] == U'\n');
    if (!boundary) {
      std::size_t m = k;
      while (m < n && detail::is_opening(cps[m])) ++m;
      boundary = m < n && is_upper(cps[m]);
    }
    if (boundary && single_period) {
      std::size_t w = i;
      while (w > *begin && !is_space(cps[w - 1])) --w;
      while (w < i && detail::is_opening(cps[w])) ++w;
      const auto word = text.substr(off[w], off[i + 1] - off[w]);
      if (abbreviations.contains(word)) boundary = false;
    }
    if (boundary) close(j);
    i = j - 1;
  }
  close(n);
  return out;
}

// Builds the instance list of one essay in document order. Each component
// becomes one instance whose covering sentence is the sentence holding the
// component's first character; sentences without any component become None
// instances. Sentences that a component straddles are merged so that the
// component stays inside its covering sentence.
inline std::vector<Instance> build_instances(const Essay& essay,
                                             std::span<const ComponentSpan> spans,
                                             const AbbreviationList& abbreviations =
                                                 AbbreviationList::defaults()) {
  const auto ranges = validate_spans(essay, spans);
  auto sentences = segment_sentences(essay.text, abbreviations);

  auto find_sentence = [&](std::size_t byte) -> std::optional<std::size_t> {
    const auto it = std::upper_bound(sentences.begin(), sentences.end(), byte,
                                     [](std::size_t b, const Sentence& s) { return b < s.start; });
    if (it == sentences.begin()) return std::nullopt;
    const auto idx = static_cast<std::size_t>(std::distance(sentences.begin(), it)) - 1;
    if (byte >= sentences[idx].end) return std::nullopt;
    return idx;
  };

  auto corrupt = [&](std::size_t i) {
    return Error(essay.id + ".ann line " + std::to_string(spans[i].line) +
                 ": span start lies outside every sentence (corrupt offsets)");
  };

  std::vector<bool> join_next(sentences.size(), false);
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto first = find_sentence(ranges[i].start);
    if (!first) throw corrupt(i);
    std::size_t last = *first;
    while (last + 1 < sentences.size() && sentences[last + 1].start < ranges[i].end) ++last;
    for (std::size_t s = *first; s < last; ++s) join_next[s] = true;
  }
  if (std::find(join_next.begin(), join_next.end(), true) != join_next.end()) {
    std::vector<Sentence> merged;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      if (s > 0 && join_next[s - 1]) {
        merged.back().end = sentences[s].end;
      } else {
        merged.push_back(sentences[s]);
      }
    }
    for (auto& m : merged) m.text = essay.text.substr(m.start, m.end - m.start);
    sentences = std::move(merged);
  }

  std::vector<Instance> out;
  std::size_t next_span = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& sentence = sentences[s];
    bool any = false;
    while (next_span < ranges.size() && ranges[next_span].start < sentence.end) {
      const auto& r = ranges[next_span];
      if (r.start < sentence.start) throw corrupt(next_span);
      Instance inst;
      inst.essay_id = essay.id;
      inst.label = to_instance_label(spans[next_span].label);
      inst.component_text = essay.text.substr(r.start, r.end - r.start);
      inst.component_offset = r.start - sentence.start;
      inst.covering_sentence = sentence.text;
      out.push_back(std::move(inst));
      any = true;
      ++next_span;
    }
    if (!any) {
      Instance inst;
      inst.essay_id = essay.id;
      inst.label = InstanceLabel::None;
      inst.covering_sentence = sentence.text;
      out.push_back(std::move(inst));
    }
  }
  if (next_span < ranges.size()) throw corrupt(next_span);
  return out;
}

// All instances of a corpus plus the essay ids they may reference.
struct Corpus {
  std::vector<std::string> essay_ids;
  std::vector<Instance> instances;

  std::array<std::size_t, kNumClasses> class_counts() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (const auto& inst : instances) ++counts[static_cast<std::size_t>(label_index(inst.label))];
    return counts;
  }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Reads `<dir>/<id>.txt` + `<dir>/<id>.ann` pairs in lexicographic id order.
// Per-file problems are collected and reported together.
inline Corpus load_corpus(const std::filesystem::path& dir,
                          const AbbreviationList& abbreviations = AbbreviationList::defaults(),
                          const DebugSink& debug = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("corpus directory does not exist: " + dir.string());
  std::vector<fs::path> texts;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") texts.push_back(entry.path());
  }
  std::sort(texts.begin(), texts.end());
  if (texts.empty()) throw Error("no essays found in " + dir.string());

  Corpus corpus;
  std::vector<std::string> problems;
  for (const auto& txt : texts) {
    const auto id = txt.stem().string();
    auto ann = txt;
    ann.replace_extension(".ann");
    try {
      if (!fs::exists(ann)) throw Error(id + ": missing annotation file " + ann.filename().string());
      Essay essay{id, detail::read_file(txt)};
      if (essay.text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(id + ": essay text is empty");
      }
      const auto spans = parse_annotations(detail::read_file(ann), [&](std::string_view msg) {
        if (debug) debug(id + ".ann " + std::string(msg));
      });
      auto instances = build_instances(essay, spans, abbreviations);
      corpus.essay_ids.push_back(id);
      std::move(instances.begin(), instances.end(), std::back_inserter(corpus.instances));
    } catch (const Error& e) {
      std::string msg = e.what();
      if (msg.rfind(id, 0) != 0) msg = id + ": " + msg;
      problems.push_back(std::move(msg));
    }
  }
  if (!problems.empty()) {
    std::string all = std::to_string(problems.size()) + " essay(s) failed to load:";
    for (const auto& p : problems) all += "\n  " + p;
    throw Error(all);
  }
  return corpus;
}

inline nlohmann::ordered_json stats_json(const Corpus& corpus) {
  const auto counts = corpus.class_counts();
  nlohmann::ordered_json j;
  j["essays"] = corpus.essay_ids.size();
  j["instances"] = corpus.instances.size();
  for (int k = 0; k < kNumClasses; ++k) {
    j["per_label"][std::string(label_name(label_from_index(k)))] = counts[static_cast<std::size_t>(k)];
  }
  return j;
}

inline nlohmann::ordered_json to_json(const Corpus& corpus) {
  nlohmann::ordered_json j;
  j["format"] = "argmine-instances";
  j["version"] = 1;
  j["stats"] = stats_json(corpus);
  j["essays"] = corpus.essay_ids;
  auto& arr = j["instances"] = nlohmann::ordered_json::array();
  for (const auto& inst : corpus.instances) {
    nlohmann::ordered_json e;
    e["essay_id"] = inst.essay_id;
    e["label"] = label_index(inst.label);
    if (inst.component_text) {
      e["component_text"] = *inst.component_text;
      e["component_offset"] = inst.component_offset;
    } else {
      e["component_text"] = nullptr;
    }
    e["covering_sentence"] = inst.covering_sentence;
    arr.push_back(std::move(e));
  }
  return j;
}

inline Corpus corpus_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "argmine-instances") throw Error("not an instances file");
    Corpus corpus;
    corpus.essay_ids = j.at("essays").get<std::vector<std::string>>();
    const std::set<std::string> known(corpus.essay_ids.begin(), corpus.essay_ids.end());
    std::size_t row = 0;
    for (const auto& e : j.at("instances")) {
      ++row;
      auto fail = [&](const std::string& why) {
        return Error("instance " + std::to_string(row) + ": " + why);
      };
      Instance inst;
      inst.essay_id = e.at("essay_id").get<std::string>();
      if (!known.count(inst.essay_id)) throw fail("unknown essay " + inst.essay_id);
      inst.label = label_from_index(e.at("label").get<int>());
      inst.covering_sentence = e.at("covering_sentence").get<std::string>();
      const auto& comp = e.at("component_text");
      if (comp.is_null() != (inst.label == InstanceLabel::None)) {
        throw fail("component_text must be null exactly for None instances");
      }
      if (!comp.is_null()) {
        inst.component_text = comp.get<std::string>();
        inst.component_offset = e.at("component_offset").get<std::size_t>();
        if (inst.covering_sentence.compare(inst.component_offset, inst.component_text->size(),
                                           *inst.component_text) != 0) {
          throw fail("component_text is not found at component_offset");
        }
      }
      corpus.instances.push_back(std::move(inst));
    }
    return corpus;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed instances file: ") + e.what());
  }
}

inline void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(corpus).dump(1) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

inline Corpus read_corpus(const std::filesystem::path& path) {
  const auto raw = detail::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return corpus_from_json(j);
}

}  // namespace argmine
