#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "argmine/dataset.hpp"
#include "argmine/features.hpp"
#include "oracles.hpp"

namespace argmine {
namespace {

const std::filesystem::path kSamples = ARGMINE_SAMPLES_DIR;
const std::filesystem::path kData = ARGMINE_DATA_DIR;

const Corpus& sample_corpus() {
  static const Corpus c = load_corpus(kSamples / "corpus");
  return c;
}

const Instance& find_instance(std::string_view component_prefix) {
  for (const auto& inst : sample_corpus().instances) {
    const std::string& text = inst.component_text ? *inst.component_text : inst.covering_sentence;
    if (text.rfind(component_prefix, 0) == 0) return inst;
  }
  throw std::runtime_error("no instance starting with " + std::string(component_prefix));
}

Instance argument(std::string sentence, std::string component, InstanceLabel label = InstanceLabel::Claim) {
  Instance inst;
  inst.essay_id = "t";
  inst.label = label;
  inst.component_offset = sentence.find(component);
  inst.component_text = std::move(component);
  inst.covering_sentence = std::move(sentence);
  return inst;
}

Instance bare(std::string sentence) {
  Instance inst;
  inst.essay_id = "t";
  inst.covering_sentence = std::move(sentence);
  return inst;
}

TEST(StructuralFeatures, CoveringTokensSixteen) {
  EXPECT_EQ(structural_features(find_instance("the print media has failed")).covering_tokens, 16u);
}

TEST(StructuralFeatures, ComponentTokensTwentyOne) {
  EXPECT_EQ(structural_features(find_instance("The number of people reading")).component_tokens, 21u);
}

TEST(StructuralFeatures, SurroundingTokensSixteen) {
  const auto f = structural_features(find_instance("newspapers have lost"));
  EXPECT_EQ(f.surrounding_tokens, 16u);
  EXPECT_EQ(f.component_tokens + f.surrounding_tokens, f.covering_tokens);
}

TEST(StructuralFeatures, PunctuationThree) {
  const auto& inst = find_instance("Contrary to the past");
  EXPECT_EQ(structural_features(argument(*inst.component_text, *inst.component_text)).punctuation, 3u);
  // The covering sentence adds its final period.
  EXPECT_EQ(structural_features(inst).punctuation, 4u);
}

TEST(StructuralFeatures, WholeSentencePremiseRatioOne) {
  const auto f = structural_features(find_instance("The internet has been"));
  EXPECT_EQ(f.component_tokens, 19u);
  EXPECT_EQ(f.token_ratio, 1.0);
  EXPECT_TRUE(f.fully_contained);
}

TEST(StructuralFeatures, QuestionSentence) {
  const auto& inst = find_instance("The question arises");
  EXPECT_EQ(inst.label, InstanceLabel::None);
  EXPECT_TRUE(structural_features(inst).ends_question);
}

TEST(StructuralFeatures, RatioThreeQuarters) {
  std::string sentence, component;
  for (int i = 0; i < 20; ++i) sentence += (i ? " w" : "w") + std::to_string(i);
  for (int i = 0; i < 15; ++i) component += (i ? " w" : "w") + std::to_string(i);
  const auto f = structural_features(argument(sentence, component));
  EXPECT_EQ(f.covering_tokens, 20u);
  EXPECT_EQ(f.component_tokens, 15u);
  EXPECT_EQ(f.token_ratio, 0.75);
  EXPECT_FALSE(f.fully_contained);
}

TEST(StructuralFeatures, NoneInstance) {
  const auto f = structural_features(bare("Just a plain sentence, nothing more."));
  EXPECT_EQ(f.component_tokens, 0u);
  EXPECT_EQ(f.surrounding_tokens, f.covering_tokens);
  EXPECT_EQ(f.token_ratio, 0.0);
  EXPECT_FALSE(f.fully_contained);
  EXPECT_EQ(f.punctuation, 2u);
}

TEST(StructuralFeatures, QuestionDetection) {
  EXPECT_TRUE(ends_with_question("Is it?"));
  EXPECT_TRUE(ends_with_question("Is it?”  "));
  EXPECT_TRUE(ends_with_question("(Really?)"));
  EXPECT_FALSE(ends_with_question("Is it? No."));
  EXPECT_FALSE(ends_with_question(""));
}

TEST(StructuralFeatures, InvariantsOverSampleCorpus) {
  for (const auto& inst : sample_corpus().instances) {
    const auto f = structural_features(inst);
    EXPECT_GE(f.token_ratio, 0.0);
    EXPECT_LE(f.token_ratio, 1.0);
    if (inst.is_argument()) {
      EXPECT_EQ(f.component_tokens + f.surrounding_tokens, f.covering_tokens);
      EXPECT_EQ(f.fully_contained, f.component_tokens == f.covering_tokens);
    } else {
      EXPECT_EQ(f.surrounding_tokens, f.covering_tokens);
      EXPECT_FALSE(f.fully_contained);
    }
  }
}

TEST(Vocabulary, TwoInstances) {
  const std::vector<Instance> inst = {bare("a b"), bare("b c")};
  const auto v = build_vocabulary(inst, VocabScope::FullCorpus);
  EXPECT_EQ(v.grams(1), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(v.grams(2), (std::vector<std::string>{"a b", "b c"}));
  EXPECT_TRUE(v.grams(3).empty());
}

TEST(Vocabulary, Deduplicates) {
  const std::vector<Instance> inst = {bare("x x x")};
  const auto v = build_vocabulary(inst, VocabScope::FullCorpus);
  EXPECT_EQ(v.grams(1), (std::vector<std::string>{"x"}));
  EXPECT_EQ(v.grams(2), (std::vector<std::string>{"x x"}));
  EXPECT_EQ(v.grams(3), (std::vector<std::string>{"x x x"}));
}

TEST(Vocabulary, EmptyInstanceListIsAnError) {
  EXPECT_THROW(build_vocabulary(std::vector<Instance>{}, VocabScope::FullCorpus), Error);
}

TEST(Vocabulary, MatchesSetUnionOracle) {
  const std::vector<std::string> pool = {"the", "A", "cat", "sat", "however", "mat", "on", "close-downs", "don't"};
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Instance> inst;
    std::vector<std::vector<std::string>> words;
    for (int s = 0; s < 3; ++s) {
      const auto sent = oracle::random_sentence(rng, pool, 0, 9);
      inst.push_back(bare(sent.text));
      words.push_back(sent.words);
    }
    const auto v = build_vocabulary(inst, VocabScope::FullCorpus);
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto expected = oracle::ngram_union(words, n);
      const auto& got = v.grams(static_cast<int>(n));
      EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), expected);
      EXPECT_EQ(got.size(), expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(v.find(static_cast<int>(n), got[i]), i);
    }
  }
}

TEST(Vocabulary, LookupScopeSelectsText) {
  const std::vector<Instance> inst = {argument("Hence we agree", "we agree")};
  EXPECT_EQ(build_vocabulary(inst, VocabScope::FullCorpus, LookupScope::Sentence).size(1), 3u);
  EXPECT_EQ(build_vocabulary(inst, VocabScope::FullCorpus, LookupScope::Component).size(1), 2u);
}

TEST(LexicalFeatures, ModalWill) {
  const auto& inst = find_instance("Newspapers' production");
  const std::vector<Instance> one = {inst};
  EXPECT_TRUE(lexical_features(inst, build_vocabulary(one, VocabScope::FullCorpus)).modal);
}

TEST(LexicalFeatures, ModalCaseInsensitiveAndWholeToken) {
  const std::vector<Instance> inst = {bare("Should we?"), bare("willing people"), bare("no modal here")};
  const auto v = build_vocabulary(inst, VocabScope::FullCorpus);
  EXPECT_TRUE(lexical_features(inst[0], v).modal);
  EXPECT_FALSE(lexical_features(inst[1], v).modal);
  EXPECT_FALSE(lexical_features(inst[2], v).modal);
}

TEST(LexicalFeatures, TextIsExactlyOneBigram) {
  const std::vector<Instance> corpus = {bare("a b c d"), bare("the end of it")};
  const auto v = build_vocabulary(corpus, VocabScope::FullCorpus);
  const auto f = lexical_features(bare("b c"), v);
  ASSERT_EQ(f.present[1].size(), 1u);
  EXPECT_EQ(v.grams(2)[f.present[1][0]], "b c");
  EXPECT_TRUE(f.present[2].empty());
}

// Brute-force check of every vocabulary entry against the token sequence.
TEST(LexicalFeatures, MatchesNaiveOracle) {
  const std::vector<std::string> pool = {"the", "print", "Media", "will", "fail", "in", "conclusion", "so", "we", "x"};
  std::mt19937_64 rng(29);
  std::vector<Instance> corpus;
  for (int i = 0; i < 6; ++i) corpus.push_back(bare(oracle::random_sentence(rng, pool, 4, 8).text));
  const auto full = build_vocabulary(corpus, VocabScope::FullCorpus);
  // Restrict to a 50-entry vocabulary drawn from the full one.
  Vocabulary v;
  std::vector<std::vector<std::string>> entries;
  for (int n = 1; n <= 3 && entries.size() < 50; ++n) {
    for (const auto& g : full.grams(n)) {
      if (entries.size() == 50) break;
      v.add_tokens(oracle::words_of(g));
      entries.push_back(oracle::words_of(g));
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = oracle::random_sentence(rng, pool, 10, 10);
    std::vector<std::string> lowered;
    for (const auto& w : s.words) lowered.push_back(oracle::lower(w));
    const auto f = lexical_features(bare(s.text), v);
    for (int n = 1; n <= 3; ++n) {
      const auto& present = f.present[static_cast<std::size_t>(n - 1)];
      for (std::size_t i = 0; i < v.size(n); ++i) {
        const bool expected = oracle::contains_run(lowered, oracle::words_of(v.grams(n)[i]));
        const bool got = std::binary_search(present.begin(), present.end(), i);
        EXPECT_EQ(got, expected) << s.text << " / " << v.grams(n)[i];
      }
    }
    EXPECT_EQ(f.modal, std::find(lowered.begin(), lowered.end(), "will") != lowered.end());
  }
}

TEST(IndicatorLexicon, NormalizesAndDeduplicates) {
  IndicatorLexicon lex;
  EXPECT_TRUE(lex.add("As a result,"));
  EXPECT_FALSE(lex.add("as a result"));
  EXPECT_FALSE(lex.add(" , "));
  EXPECT_TRUE(lex.add("However"));
  EXPECT_EQ(lex.keywords(), (std::vector<std::string>{"as a result", "however"}));
}

TEST(IndicatorLexicon, ShippedFileIsCleanAndHasNamedPhrases) {
  const auto lex = IndicatorLexicon::load(kData / "indicator_lexicon.txt");
  const auto raw_count = detail::read_list_file(kData / "indicator_lexicon.txt").size();
  EXPECT_EQ(lex.size(), raw_count) << "lexicon file holds duplicates";
  for (const auto* k : {"actually", "by comparison", "either", "in this way", "in conclusion"}) {
    EXPECT_NE(std::find(lex.keywords().begin(), lex.keywords().end(), k), lex.keywords().end()) << k;
  }
}

TEST(IndicatorLexicon, MissingFileIsAnError) {
  EXPECT_THROW(IndicatorLexicon::load("/nonexistent/lexicon.txt"), Error);
}

TEST(IndicatorFeatures, InConclusion) {
  const IndicatorLexicon lex(std::vector<std::string>{"however", "in conclusion"});
  const auto f = indicator_features(bare("In conclusion, I believe uniforms should be mandatory."), lex);
  EXPECT_GE(f.count, 1u);
  EXPECT_EQ(f.present, (std::vector<std::size_t>{1}));
}

TEST(IndicatorFeatures, NoKeywords) {
  const IndicatorLexicon lex(std::vector<std::string>{"however", "in conclusion"});
  const auto f = indicator_features(bare("Plain words only."), lex);
  EXPECT_EQ(f.count, 0u);
  EXPECT_TRUE(f.present.empty());
}

TEST(IndicatorFeatures, RepeatedKeyword) {
  const IndicatorLexicon lex(std::vector<std::string>{"actually"});
  const auto f = indicator_features(bare("actually, actually"), lex);
  EXPECT_EQ(f.count, 2u);
  EXPECT_EQ(f.present, (std::vector<std::size_t>{0}));
}

TEST(IndicatorFeatures, SelfOverlapGreedyDistinctKeywordsOverlap) {
  const IndicatorLexicon lex(std::vector<std::string>{"x x", "on the other hand", "other hand"});
  EXPECT_EQ(indicator_features(bare("x x x"), lex).count, 1u);
  EXPECT_EQ(indicator_features(bare("x x x x"), lex).count, 2u);
  const auto f = indicator_features(bare("On the other hand, yes."), lex);
  EXPECT_EQ(f.count, 2u);
  EXPECT_EQ(f.present, (std::vector<std::size_t>{1, 2}));
}

TEST(IndicatorFeatures, TokenBoundaries) {
  const IndicatorLexicon lex(std::vector<std::string>{"so"});
  EXPECT_EQ(indicator_features(bare("also some"), lex).count, 0u);
  EXPECT_EQ(indicator_features(bare("So, (so)"), lex).count, 2u);
}

// Fixed 50-phrase lexicon and randomized sentences built from its words.
std::vector<std::string> fifty_phrases() {
  const std::vector<std::string> words = {"however", "hence", "in", "conclusion", "as", "a", "result", "because", "so", "thus"};
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> w(0, words.size() - 1);
  std::uniform_int_distribution<int> len(1, 3);
  while (out.size() < 50) {
    std::string p;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) p += (i ? " " : "") + words[w(rng)];
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

TEST(IndicatorFeatures, MatchesNaivePhraseScanOracle) {
  const auto phrases = fifty_phrases();
  const IndicatorLexicon lex(phrases);
  ASSERT_EQ(lex.size(), 50u);
  const std::vector<std::string> pool = {"However", "hence", "in", "conclusion", "as", "a", "result", "because", "so",
                                         "thus", "we", "agree"};
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = oracle::random_sentence(rng, pool, 1, 14);
    std::vector<std::string> lowered;
    for (const auto& t : s.words) lowered.push_back(oracle::lower(t));
    std::size_t expected_count = 0;
    std::vector<std::size_t> expected_present;
    for (std::size_t k = 0; k < phrases.size(); ++k) {
      const auto c = oracle::count_runs(lowered, oracle::words_of(phrases[k]));
      expected_count += c;
      if (c) expected_present.push_back(k);
    }
    const auto f = indicator_features(bare(s.text), lex);
    EXPECT_EQ(f.count, expected_count) << s.text;
    EXPECT_EQ(f.present, expected_present) << s.text;
    EXPECT_GE(f.count, f.present.size());
    EXPECT_EQ(f.count == 0, f.present.empty());
  }
}

TEST(Dimensionality, IndicatorAddsLexiconPlusOne) {
  const auto lex = IndicatorLexicon::load(kData / "indicator_lexicon.txt");
  const auto vocab = build_vocabulary(sample_corpus().instances, VocabScope::FullCorpus);
  AssembleOptions with, without;
  without.indicator = false;
  const auto a = assemble(sample_corpus(), vocab, &lex, with);
  const auto b = assemble(sample_corpus(), vocab, &lex, without);
  EXPECT_EQ(a.dim() - b.dim(), lex.size() + 1);
  EXPECT_EQ(b.dim(), kStructuralColumns + vocab.size() + 1);
}

TEST(Dimensionality, RandomCorporaAndLexicons) {
  const std::vector<std::string> pool = {"the", "print", "media", "however", "in", "conclusion", "so", "we"};
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    Corpus c;
    c.essay_ids = {"t"};
    std::uniform_int_distribution<int> n_inst(1, 8);
    for (int i = n_inst(rng); i > 0; --i) c.instances.push_back(bare(oracle::random_sentence(rng, pool, 1, 10).text));
    std::vector<std::string> phrases;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> n_kw(0, 12);
    for (int i = n_kw(rng); i > 0; --i) phrases.push_back(pool[pick(rng)] + (i % 2 ? " " + pool[pick(rng)] : ""));
    const IndicatorLexicon lex(phrases);
    const auto vocab = build_vocabulary(c.instances, VocabScope::FullCorpus);
    AssembleOptions without;
    without.indicator = false;
    EXPECT_EQ(assemble(c, vocab, &lex).dim(), assemble(c, vocab, &lex, without).dim() + lex.size() + 1);
  }
}

TEST(Assembly, NoPhantomVocabularyColumns) {
  const auto lex = IndicatorLexicon::load(kData / "indicator_lexicon.txt");
  const auto vocab = build_vocabulary(sample_corpus().instances, VocabScope::FullCorpus);
  const auto ds = assemble(sample_corpus(), vocab, &lex);
  validate(ds);
  std::vector<bool> used(ds.dim(), false);
  for (const auto& r : ds.rows) {
    for (const auto& e : r.entries) used[e.index] = true;
  }
  for (std::size_t c = 0; c < ds.dim(); ++c) {
    if (is_ngram_family(ds.schema[c].family)) {
      EXPECT_TRUE(used[c]) << ds.schema[c].name;
    }
  }
}

TEST(Assembly, UnknownEssayIsAnError) {
  Corpus c = sample_corpus();
  c.instances[0].essay_id = "ghost";
  const auto vocab = build_vocabulary(c.instances, VocabScope::FullCorpus);
  AssembleOptions without;
  without.indicator = false;
  EXPECT_THROW(assemble(c, vocab, nullptr, without), Error);
}

TEST(Assembly, IndicatorWithoutLexiconIsAnError) {
  const auto vocab = build_vocabulary(sample_corpus().instances, VocabScope::FullCorpus);
  EXPECT_THROW(assemble(sample_corpus(), vocab, nullptr), Error);
}

}  // namespace
}  // namespace argmine
