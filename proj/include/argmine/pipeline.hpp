#pragma once

// The three pipeline stages behind the argmine command line: ingest a
// corpus into an instance file, extract a feature matrix, cross-validate.
// Each stage reads and writes files only; human-readable summaries go to
// the stream passed in.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "argmine/corpus.hpp"
#include "argmine/dataset.hpp"
#include "argmine/evaluation.hpp"
#include "argmine/features.hpp"
#include "argmine/svm.hpp"
#include "json.hpp"

namespace argmine {

struct IngestConfig {
  std::filesystem::path corpus_dir;
  std::optional<std::filesystem::path> abbrev_file;
  std::filesystem::path out;
  bool verbose = false;
};

struct ExtractConfig {
  std::filesystem::path instances;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> modal_list;
  bool indicator = true;
  LookupScope lookup = LookupScope::Sentence;
  VocabScope vocab_scope = VocabScope::FullCorpus;
  Format format = Format::Arff;
  bool sparse_arff = false;
  std::filesystem::path out;
};

struct CvConfig {
  std::filesystem::path features;
  std::optional<std::filesystem::path> features_b;
  bool ablation = false;
  int folds = 10;
  std::uint64_t seed = 42;
  bool stratified = true;
  Hyperparams svm;
  std::filesystem::path report;
  bool timing = true;
  std::optional<std::filesystem::path> model_out;
};

struct ExtractSummary {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::size_t dim_without_indicator = 0;
  std::optional<std::size_t> dim_with_indicator;
};

inline Corpus cmd_ingest(const IngestConfig& cfg, std::ostream& log, std::ostream& diag) {
  const auto abbreviations = cfg.abbrev_file ? AbbreviationList::load(*cfg.abbrev_file) : AbbreviationList::defaults();
  DebugSink debug;
  if (cfg.verbose) debug = [&](std::string_view msg) { diag << "debug: " << msg << '\n'; };
  auto corpus = load_corpus(cfg.corpus_dir, abbreviations, debug);
  write_corpus(cfg.out, corpus);
  const auto counts = corpus.class_counts();
  log << corpus.essay_ids.size() << " essays, " << corpus.instances.size() << " instances:";
  for (int k = 0; k < kNumClasses; ++k) {
    log << ' ' << label_name(label_from_index(k)) << '=' << counts[static_cast<std::size_t>(k)];
  }
  log << '\n';
  return corpus;
}

inline ExtractSummary cmd_extract(const ExtractConfig& cfg, std::ostream& log) {
  const auto corpus = read_corpus(cfg.instances);
  if (corpus.instances.empty()) throw Error(cfg.instances.string() + ": no instances");
  std::optional<IndicatorLexicon> lexicon;
  if (cfg.lexicon) lexicon = IndicatorLexicon::load(*cfg.lexicon);
  if (cfg.indicator && !lexicon) throw Error("indicator features are on but no --indicator-lexicon was given");

  AssembleOptions options;
  options.indicator = cfg.indicator;
  options.lookup = cfg.lookup;
  if (cfg.modal_list) options.modals = ModalList::load(*cfg.modal_list);

  const auto vocab = build_vocabulary(corpus.instances, cfg.vocab_scope, cfg.lookup);
  const auto ds = assemble(corpus, vocab, lexicon ? &*lexicon : nullptr, options);
  export_dataset(ds, cfg.format, cfg.out, {cfg.sparse_arff});

  ExtractSummary s;
  s.rows = ds.rows.size();
  s.dim = ds.dim();
  s.dim_without_indicator = kStructuralColumns + vocab.size() + 1;
  if (lexicon) s.dim_with_indicator = s.dim_without_indicator + lexicon->size() + 1;
  log << s.rows << " rows, " << s.dim << " feature columns (structural " << kStructuralColumns << ", unigram "
      << vocab.size(1) << ", bigram " << vocab.size(2) << ", trigram " << vocab.size(3) << ", modal 1";
  if (cfg.indicator) log << ", indicator " << lexicon->size() + 1;
  log << ")\n";
  log << "dims without indicator: " << s.dim_without_indicator << '\n';
  if (s.dim_with_indicator) log << "dims with indicator: " << *s.dim_with_indicator << '\n';
  return s;
}

namespace detail {

inline nlohmann::ordered_json cv_config_json(const CvConfig& cfg) {
  nlohmann::ordered_json j;
  j["features"] = cfg.features.string();
  if (cfg.features_b) j["features_b"] = cfg.features_b->string();
  j["ablation"] = cfg.ablation;
  j["folds"] = cfg.folds;
  j["seed"] = cfg.seed;
  j["stratified"] = cfg.stratified;
  j["svm"] = hyperparams_json(cfg.svm);
  return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace detail

// Returns the report JSON that was written.
inline nlohmann::ordered_json cmd_cv(const CvConfig& cfg, std::ostream& log) {
  if (cfg.ablation != cfg.features_b.has_value()) {
    throw Error("--ablation and --features-b must be given together");
  }
  Hyperparams hp = cfg.svm;
  hp.seed = cfg.seed;
  const auto config = detail::cv_config_json(cfg);
  const auto data = import_dataset(cfg.features);

  nlohmann::ordered_json report;
  if (cfg.ablation) {
    const auto other = import_dataset(*cfg.features_b);
    auto result = ablation_compare(data, other, hp, cfg.folds, cfg.seed, cfg.stratified);
    result.with_indicator.config["run"] = config;
    result.without_indicator.config["run"] = config;
    report = to_json(result, cfg.timing);
    log << render_text(result, cfg.timing);
  } else {
    const auto labels = data.labels();
    const auto plan = cfg.stratified ? stratified_folds(labels, cfg.folds, cfg.seed)
                                     : plain_folds(labels.size(), cfg.folds, cfg.seed);
    auto result = cross_validate(data, hp, plan);
    result.config["run"] = config;
    report = to_json(result, cfg.timing);
    log << render_text(result, cfg.features.filename().string(), cfg.timing);
  }
  detail::write_text_file(cfg.report, report.dump(2) + "\n");
  if (cfg.model_out) save_model(train(data, hp), *cfg.model_out);
  return report;
}

}  // namespace argmine
