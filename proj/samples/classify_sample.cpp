// Library walk-through on the bundled two-essay corpus: ingest, featurize,
// train the one-vs-rest SVM and print a prediction per instance.

#include <cstdio>
#include <string>

#include "argmine/argmine.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path corpus_dir = argc > 1 ? argv[1] : ARGMINE_SAMPLES_DIR "/corpus";
  const std::filesystem::path lexicon_path = argc > 2 ? argv[2] : ARGMINE_DATA_DIR "/indicator_lexicon.txt";
  try {
    const auto corpus = argmine::load_corpus(corpus_dir);
    const auto lexicon = argmine::IndicatorLexicon::load(lexicon_path);
    const auto vocab = argmine::build_vocabulary(corpus.instances, argmine::VocabScope::FullCorpus);
    const auto data = argmine::assemble(corpus, vocab, &lexicon);
    std::printf("%zu instances, %zu feature columns\n", data.rows.size(), data.dim());

    const auto model = argmine::train(data, argmine::Hyperparams{});
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      const auto& inst = corpus.instances[i];
      const auto predicted = argmine::predict(model, data.rows[i]);
      correct += predicted == inst.label;
      std::string text = inst.component_text ? *inst.component_text : inst.covering_sentence;
      if (text.size() > 60) {
        std::size_t cut = 57;
        while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
        text = text.substr(0, cut) + "...";
      }
      std::printf("%-11s -> %-11s %s\n", std::string(argmine::label_name(inst.label)).c_str(),
                  std::string(argmine::label_name(predicted)).c_str(), text.c_str());
    }
    std::printf("training accuracy: %s%%\n", argmine::format_percent(correct, data.rows.size()).c_str());
  } catch (const argmine::Error& e) {
    std::fprintf(stderr, "classify_sample: %s\n", e.what());
    return 1;
  }
  return 0;
}
