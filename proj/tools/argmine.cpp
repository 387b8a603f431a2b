// argmine: ingest -> extract -> cv over an annotated essay corpus.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "argmine/argmine.hpp"

namespace {

template <typename T>
std::optional<T> opt_if(bool present, const T& value) {
  return present ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Argument component classification: corpus ingestion, feature extraction, cross-validation"};
  app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Build labeled instances from <id>.txt + <id>.ann pairs");
  argmine::IngestConfig ingest_cfg;
  std::string abbrev_file;
  ingest->add_option("--corpus", ingest_cfg.corpus_dir, "Corpus directory")->required();
  ingest->add_option("--abbrev-file", abbrev_file, "Abbreviation guard list, one entry per line");
  ingest->add_option("--out", ingest_cfg.out, "Instances file to write (JSON)")->required();
  ingest->add_flag("--verbose", ingest_cfg.verbose, "Report skipped annotation lines on stderr");

  // extract
  auto* extract = app.add_subcommand("extract", "Compute the feature matrix of an instances file");
  argmine::ExtractConfig extract_cfg;
  std::string lexicon, modal_list, lookup = "sentence", vocab_scope = "corpus", format = "arff";
  bool no_indicator = false;
  extract->add_option("--instances", extract_cfg.instances, "Instances file from 'ingest'")->required();
  extract->add_option("--indicator-lexicon", lexicon, "Discourse-marker lexicon, one phrase per line");
  extract->add_flag("--no-indicator", no_indicator, "Leave out the indicator feature families");
  extract->add_option("--modal-list", modal_list, "Replace the built-in modal verb list");
  extract->add_option("--lookup-scope", lookup, "Text used for n-gram/modal/keyword lookup")
      ->check(CLI::IsMember({"sentence", "component"}));
  extract->add_option("--vocab-scope", vocab_scope, "corpus: one vocabulary; fold: rebuilt per training fold")
      ->check(CLI::IsMember({"corpus", "fold"}));
  extract->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "arff", "json"}));
  extract->add_flag("--sparse-arff", extract_cfg.sparse_arff, "Write ARFF rows in sparse form");
  extract->add_option("--out", extract_cfg.out, "Dataset file to write")->required();

  // cv
  auto* cv = app.add_subcommand("cv", "Cross-validate the one-vs-rest linear SVM");
  argmine::CvConfig cv_cfg;
  std::string features_b, model_out;
  bool no_normalize = false, unstratified = false, no_timing = false;
  cv->add_option("--features", cv_cfg.features, "Dataset file (.csv, .arff or .json)")->required();
  cv->add_option("--features-b", features_b, "Second dataset for --ablation (without indicators)");
  cv->add_flag("--ablation", cv_cfg.ablation, "Compare --features (with) against --features-b (without)");
  cv->add_option("--folds", cv_cfg.folds, "Number of folds")->capture_default_str();
  cv->add_option("--seed", cv_cfg.seed, "Seed for fold assignment and training order")->capture_default_str();
  cv->add_option("--c", cv_cfg.svm.c, "SVM regularization trade-off C")->capture_default_str();
  cv->add_option("--tolerance", cv_cfg.svm.tolerance, "Stop when no dual variable moves more than this")
      ->capture_default_str();
  cv->add_option("--max-iter", cv_cfg.svm.max_iter, "Maximum coordinate-descent sweeps")->capture_default_str();
  cv->add_flag("--no-normalize", no_normalize, "Disable min-max scaling");
  cv->add_flag("--unstratified", unstratified, "Use plain shuffled folds");
  cv->add_flag("--no-timing", no_timing, "Omit wall-clock times so reports are byte-identical across runs");
  cv->add_option("--model-out", model_out, "Also train on all rows and save the model (JSON)");
  cv->add_option("--report", cv_cfg.report, "JSON report to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      ingest_cfg.abbrev_file = opt_if<std::filesystem::path>(!abbrev_file.empty(), abbrev_file);
      argmine::cmd_ingest(ingest_cfg, std::cout, std::cerr);
    } else if (*extract) {
      extract_cfg.lexicon = opt_if<std::filesystem::path>(!lexicon.empty(), lexicon);
      extract_cfg.modal_list = opt_if<std::filesystem::path>(!modal_list.empty(), modal_list);
      extract_cfg.indicator = !no_indicator;
      extract_cfg.lookup = argmine::parse_lookup_scope(lookup);
      extract_cfg.vocab_scope = argmine::parse_vocab_scope(vocab_scope);
      extract_cfg.format = argmine::format_from_string(format);
      argmine::cmd_extract(extract_cfg, std::cout);
    } else if (*cv) {
      cv_cfg.features_b = opt_if<std::filesystem::path>(!features_b.empty(), features_b);
      cv_cfg.model_out = opt_if<std::filesystem::path>(!model_out.empty(), model_out);
      cv_cfg.svm.normalize = !no_normalize;
      cv_cfg.stratified = !unstratified;
      cv_cfg.timing = !no_timing;
      argmine::cmd_cv(cv_cfg, std::cout);
    }
  } catch (const argmine::Error& e) {
    std::cerr << "argmine: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "argmine: unexpected error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
