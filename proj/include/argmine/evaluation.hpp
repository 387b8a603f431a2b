#pragma once

// Stratified k-fold cross-validation, confusion matrices and the paired
// with/without-indicator comparison.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <future>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "argmine/corpus.hpp"
#include "argmine/dataset.hpp"
#include "argmine/error.hpp"
#include "argmine/features.hpp"
#include "argmine/svm.hpp"
#include "json.hpp"

namespace argmine {

struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  bool stratified = true;
  std::vector<int> assignments;  // fold of each row

  std::vector<std::size_t> test_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (assignments[i] == fold) out.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> train_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (assignments[i] != fold) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

namespace detail {

inline void check_fold_args(std::size_t rows, int k) {
  if (k < 2) throw Error("number of folds must be at least 2, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > rows) {
    throw Error("cannot split " + std::to_string(rows) + " rows into " + std::to_string(k) + " folds");
  }
}

}  // namespace detail

// Rows are shuffled with the seed, grouped by class (stable), then dealt to
// folds round-robin. The deal continues across class boundaries, so fold
// sizes differ by at most one and every class is spread within +-1 of its
// exact share.
inline FoldPlan stratified_folds(std::span<const InstanceLabel> labels, int k, std::uint64_t seed) {
  detail::check_fold_args(labels.size(), k);
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  detail::shuffle_indices(order, rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return label_index(labels[a]) < label_index(labels[b]);
  });
  FoldPlan plan{k, seed, true, std::vector<int>(labels.size(), 0)};
  for (std::size_t pos = 0; pos < order.size(); ++pos) plan.assignments[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
  return plan;
}

inline FoldPlan plain_folds(std::size_t rows, int k, std::uint64_t seed) {
  detail::check_fold_args(rows, k);
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  detail::shuffle_indices(order, rng);
  FoldPlan plan{k, seed, false, std::vector<int>(rows, 0)};
  for (std::size_t pos = 0; pos < order.size(); ++pos) plan.assignments[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
  return plan;
}

struct ConfusionMatrix {
  // counts[actual][predicted]
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  void add(InstanceLabel actual, InstanceLabel predicted) {
    ++counts[static_cast<std::size_t>(label_index(actual))][static_cast<std::size_t>(label_index(predicted))];
  }

  std::size_t trace() const {
    std::size_t t = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) t += counts[k][k];
    return t;
  }

  std::size_t row_sum(std::size_t actual) const {
    return std::accumulate(counts[actual].begin(), counts[actual].end(), std::size_t{0});
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) t += row_sum(k);
    return t;
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    for (std::size_t a = 0; a < kNumClasses; ++a) {
      for (std::size_t p = 0; p < kNumClasses; ++p) counts[a][p] += o.counts[a][p];
    }
    return *this;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Percentage with four decimals and trailing zeros dropped, computed in
// integer arithmetic: 1110/1532 -> "72.4543", 1109/1532 -> "72.389".
inline std::string format_percent(std::size_t correct, std::size_t total) {
  if (total == 0) return "0";
  const unsigned long long scaled =
      (static_cast<unsigned long long>(correct) * 2000000ULL + total) / (2ULL * total);
  std::string frac = std::to_string(scaled % 10000);
  frac.insert(0, 4 - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = std::to_string(scaled / 10000);
  if (!frac.empty()) out += "." + frac;
  return out;
}

struct FoldResult {
  int fold = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct EvalReport {
  std::size_t correct = 0;
  std::size_t total = 0;
  ConfusionMatrix matrix;
  std::vector<FoldResult> per_fold;
  int folds = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();

  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
  std::string accuracy_percent() const { return format_percent(correct, total); }
};

namespace detail {

inline Dataset subset(const Dataset& ds, std::span<const std::size_t> rows) {
  Dataset out;
  out.schema = ds.schema;
  out.vocab_scope = ds.vocab_scope;
  out.rows.reserve(rows.size());
  for (const auto r : rows) out.rows.push_back(ds.rows[r]);
  return out;
}

// Drops n-gram columns that no training row uses: exactly the columns a
// vocabulary built from the training instances alone would not contain.
inline void restrict_to_train_vocabulary(Dataset& train, Dataset& test) {
  std::vector<bool> used(train.dim(), false);
  for (const auto& r : train.rows) {
    for (const auto& e : r.entries) used[e.index] = true;
  }
  std::vector<std::int64_t> remap(train.dim(), -1);
  std::vector<Column> schema;
  for (std::size_t c = 0; c < train.dim(); ++c) {
    if (is_ngram_family(train.schema[c].family) && !used[c]) continue;
    remap[c] = static_cast<std::int64_t>(schema.size());
    schema.push_back(train.schema[c]);
  }
  auto project = [&](Dataset& ds) {
    for (auto& r : ds.rows) {
      std::vector<Entry> kept;
      kept.reserve(r.entries.size());
      for (const auto& e : r.entries) {
        if (remap[e.index] >= 0) kept.push_back({static_cast<std::uint32_t>(remap[e.index]), e.value});
      }
      r.entries = std::move(kept);
    }
    ds.schema = schema;
  };
  project(train);
  project(test);
}

// Trains on `train` and tallies predictions on `test` into `matrix`.
inline FoldResult evaluate_fold(const Dataset& train_set, const Dataset& test_set, const Hyperparams& hp,
                                int fold, ConfusionMatrix& matrix) {
  const auto model = train(train_set, hp);
  FoldResult res{fold, 0, test_set.rows.size()};
  for (const auto& row : test_set.rows) {
    const auto predicted = predict(model, row);
    matrix.add(row.label, predicted);
    if (predicted == row.label) ++res.correct;
  }
  return res;
}

struct FoldOutcome {
  FoldResult result;
  ConfusionMatrix matrix;
};

// Runs fold jobs on up to hardware_concurrency threads and reduces them in
// fold order, so the result does not depend on scheduling.
template <typename Job>
EvalReport run_folds(const FoldPlan& plan, Job job, bool parallel) {
  std::vector<FoldOutcome> outcomes(static_cast<std::size_t>(plan.k));
  if (parallel) {
    const auto width = std::max(1u, std::thread::hardware_concurrency());
    for (int start = 0; start < plan.k; start += static_cast<int>(width)) {
      std::vector<std::future<FoldOutcome>> jobs;
      for (int f = start; f < std::min(plan.k, start + static_cast<int>(width)); ++f) {
        jobs.push_back(std::async(std::launch::async, job, f));
      }
      for (std::size_t j = 0; j < jobs.size(); ++j) outcomes[static_cast<std::size_t>(start) + j] = jobs[j].get();
    }
  } else {
    for (int f = 0; f < plan.k; ++f) outcomes[static_cast<std::size_t>(f)] = job(f);
  }
  EvalReport report;
  report.folds = plan.k;
  report.seed = plan.seed;
  for (const auto& o : outcomes) {
    report.matrix += o.matrix;
    report.per_fold.push_back(o.result);
  }
  report.correct = report.matrix.trace();
  report.total = report.matrix.total();
  return report;
}

inline void check_plan(const FoldPlan& plan, std::size_t rows) {
  if (plan.assignments.size() != rows) {
    throw Error("fold plan covers " + std::to_string(plan.assignments.size()) + " rows, dataset has " +
                std::to_string(rows));
  }
  for (const int f : plan.assignments) {
    if (f < 0 || f >= plan.k) throw Error("fold plan assigns a row to fold " + std::to_string(f));
  }
}

inline nlohmann::ordered_json hyperparams_json(const Hyperparams& hp) {
  return {{"c", hp.c}, {"max_iter", hp.max_iter}, {"tolerance", hp.tolerance},
          {"normalize", hp.normalize}, {"bias", hp.bias}};
}

}  // namespace detail

// k-fold cross-validation over a fixed feature matrix. Normalization is fit
// on the training folds only. When the dataset was built with a
// TrainFoldOnly vocabulary, n-gram columns absent from the training folds
// are dropped per fold.
inline EvalReport cross_validate(const Dataset& data, const Hyperparams& hp, const FoldPlan& plan) {
  detail::check_plan(plan, data.rows.size());
  const auto begin = std::chrono::steady_clock::now();
  Hyperparams inner = hp;
  inner.parallel = false;
  auto job = [&](int fold) {
    const auto train_idx = plan.train_rows(fold);
    const auto test_idx = plan.test_rows(fold);
    auto train_set = detail::subset(data, train_idx);
    auto test_set = detail::subset(data, test_idx);
    if (data.vocab_scope == VocabScope::TrainFoldOnly) detail::restrict_to_train_vocabulary(train_set, test_set);
    detail::FoldOutcome out;
    out.result = detail::evaluate_fold(train_set, test_set, inner, fold, out.matrix);
    return out;
  };
  auto report = detail::run_folds(plan, job, hp.parallel);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  report.config["svm"] = detail::hyperparams_json(hp);
  report.config["stratified"] = plan.stratified;
  report.config["vocab_scope"] = scope_name(data.vocab_scope);
  report.config["dim"] = data.dim();
  return report;
}

// Cross-validation from instances, rebuilding the n-gram vocabulary from the
// training instances of every fold. This is the literal form of the
// TrainFoldOnly protocol; cross_validate on a TrainFoldOnly dataset is the
// column-masking shortcut of the same thing.
inline EvalReport cross_validate_instances(const Corpus& corpus, const IndicatorLexicon* lexicon,
                                           const AssembleOptions& options, const Hyperparams& hp,
                                           const FoldPlan& plan) {
  detail::check_plan(plan, corpus.instances.size());
  const auto begin = std::chrono::steady_clock::now();
  Hyperparams inner = hp;
  inner.parallel = false;
  auto job = [&](int fold) {
    Corpus train_c{corpus.essay_ids, {}};
    Corpus test_c{corpus.essay_ids, {}};
    for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
      (plan.assignments[i] == fold ? test_c : train_c).instances.push_back(corpus.instances[i]);
    }
    const auto vocab = build_vocabulary(train_c.instances, VocabScope::TrainFoldOnly, options.lookup);
    const auto train_set = assemble(train_c, vocab, lexicon, options);
    const auto test_set = assemble(test_c, vocab, lexicon, options);
    detail::FoldOutcome out;
    out.result = detail::evaluate_fold(train_set, test_set, inner, fold, out.matrix);
    return out;
  };
  auto report = detail::run_folds(plan, job, hp.parallel);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  report.config["svm"] = detail::hyperparams_json(hp);
  report.config["stratified"] = plan.stratified;
  report.config["vocab_scope"] = "fold";
  return report;
}

struct AblationReport {
  EvalReport with_indicator;
  EvalReport without_indicator;

  // In accuracy fraction; multiply by 100 for percentage points.
  double delta() const { return with_indicator.accuracy() - without_indicator.accuracy(); }
};

inline AblationReport ablation_compare(const Dataset& with_indicator, const Dataset& without_indicator,
                                       const Hyperparams& hp, int k, std::uint64_t seed,
                                       bool stratified = true) {
  if (with_indicator.rows.size() != without_indicator.rows.size()) {
    throw Error("ablation datasets differ in row count: " + std::to_string(with_indicator.rows.size()) +
                " vs " + std::to_string(without_indicator.rows.size()));
  }
  const auto labels = with_indicator.labels();
  if (labels != without_indicator.labels()) throw Error("ablation datasets disagree on row labels");
  const auto plan = stratified ? stratified_folds(labels, k, seed) : plain_folds(labels.size(), k, seed);
  return {cross_validate(with_indicator, hp, plan), cross_validate(without_indicator, hp, plan)};
}

// Reporting

inline nlohmann::ordered_json to_json(const EvalReport& r, bool include_timing = true) {
  nlohmann::ordered_json j;
  j["config"] = r.config;
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["accuracy"] = r.accuracy();
  j["accuracy_percent"] = r.accuracy_percent();
  j["correct"] = r.correct;
  j["total"] = r.total;
  auto confusion = nlohmann::ordered_json::array();
  for (const auto& row : r.matrix.counts) confusion.push_back(row);
  j["confusion"] = std::move(confusion);
  auto folds = nlohmann::ordered_json::array();
  for (const auto& f : r.per_fold) {
    folds.push_back({{"fold", f.fold}, {"correct", f.correct}, {"total", f.total}, {"accuracy", f.accuracy()}});
  }
  j["per_fold"] = std::move(folds);
  if (include_timing) j["wall_time_s"] = r.wall_time_s;
  else j["wall_time_s"] = nullptr;
  return j;
}

inline nlohmann::ordered_json to_json(const AblationReport& a, bool include_timing = true) {
  nlohmann::ordered_json j;
  j["with_indicator"] = to_json(a.with_indicator, include_timing);
  j["without_indicator"] = to_json(a.without_indicator, include_timing);
  j["accuracy_delta"] = a.delta();
  j["accuracy_delta_points"] = 100.0 * a.delta();
  return j;
}

inline std::string render_confusion(const ConfusionMatrix& m) {
  static constexpr std::array<const char*, kNumClasses> names = {"Major Claim", "Claim", "Premise", "None"};
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-22s%s\n", "", "Predicted");
  out += line;
  std::snprintf(line, sizeof line, "%-22s%12s%12s%12s%12s\n", "", names[0], names[1], names[2], names[3]);
  out += line;
  for (std::size_t a = 0; a < kNumClasses; ++a) {
    std::snprintf(line, sizeof line, "%-8s%-14s%12zu%12zu%12zu%12zu\n", a == 0 ? "Actual" : "", names[a],
                  m.counts[a][0], m.counts[a][1], m.counts[a][2], m.counts[a][3]);
    out += line;
  }
  return out;
}

inline std::string render_text(const EvalReport& r, const std::string& title, bool include_timing = true) {
  std::string out = title + "\n";
  out += std::to_string(r.folds) + "-fold cross validation: " + r.accuracy_percent() + "% (" +
         std::to_string(r.correct) + " of " + std::to_string(r.total) + " correctly classified)";
  if (include_timing) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  time: %.2f s", r.wall_time_s);
    out += buf;
  }
  out += "\n\n" + render_confusion(r.matrix);
  return out;
}

inline std::string render_text(const AblationReport& a, bool include_timing = true) {
  std::string out = render_text(a.without_indicator, "Without indicator features", include_timing);
  out += "\n" + render_text(a.with_indicator, "With indicator features", include_timing);
  char buf[96];
  std::snprintf(buf, sizeof buf, "\nAccuracy delta (with - without): %+.4f points\n", 100.0 * a.delta());
  out += buf;
  return out;
}

}  // namespace argmine
