#pragma once

// One-vs-rest linear SVM trained by dual coordinate descent on the
// L2-regularized hinge loss:
//
//   min_w  1/2 |w|^2 + C sum_i max(0, 1 - y_i w.x_i)
//
// The bias is learned as the weight of a constant extra feature, so it is
// regularized like every other weight. The dual is
//
//   max_a  sum_i a_i - 1/2 |sum_i a_i y_i x_i|^2   s.t. 0 <= a_i <= C
//
// and each coordinate step maximizes it exactly along one a_i, so the dual
// objective never decreases.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "argmine/dataset.hpp"
#include "argmine/error.hpp"
#include "json.hpp"

namespace argmine {

struct Hyperparams {
  double c = 1.0;
  int max_iter = 1000;
  double tolerance = 1e-3;
  std::uint64_t seed = 42;
  bool normalize = true;
  // Value of the constant feature that carries the bias.
  double bias = 1.0;
  bool parallel = true;

  void check() const {
    if (!(c > 0)) throw Error("hyperparameter c must be positive");
    if (!(tolerance > 0)) throw Error("hyperparameter tolerance must be positive");
    if (max_iter < 1) throw Error("hyperparameter max_iter must be at least 1");
    if (!(bias >= 0)) throw Error("hyperparameter bias must be non-negative");
  }
};

// Per-column min-max scaling fitted on training rows.
struct Normalizer {
  std::vector<double> min;
  std::vector<double> max;

  static Normalizer fit(std::span<const FeatureVector> rows, std::size_t dim) {
    Normalizer n;
    n.min.assign(dim, 0.0);
    n.max.assign(dim, 0.0);
    if (rows.empty()) {
      n.finalize();
      return n;
    }
    // Implicit zeros take part, so track which columns are present in every row.
    std::vector<std::size_t> present(dim, 0);
    std::vector<bool> seen(dim, false);
    for (const auto& r : rows) {
      for (const auto& e : r.entries) {
        if (!seen[e.index]) {
          n.min[e.index] = n.max[e.index] = e.value;
          seen[e.index] = true;
        } else {
          n.min[e.index] = std::min(n.min[e.index], e.value);
          n.max[e.index] = std::max(n.max[e.index], e.value);
        }
        ++present[e.index];
      }
    }
    for (std::size_t c = 0; c < dim; ++c) {
      if (present[c] < rows.size()) {
        n.min[c] = std::min(n.min[c], 0.0);
        n.max[c] = std::max(n.max[c], 0.0);
      }
    }
    n.finalize();
    return n;
  }

  std::size_t dim() const { return min.size(); }

  // Caches the columns whose zero maps to a non-zero value. Call after
  // filling min/max by hand.
  void finalize() {
    offset_columns_.clear();
    for (std::size_t c = 0; c < dim(); ++c) {
      if (max[c] != min[c] && min[c] != 0.0) offset_columns_.push_back(static_cast<std::uint32_t>(c));
    }
    finalized_ = true;
  }

  // (v - min) / (max - min); constant columns map to 0. Values outside the
  // training range are not clamped.
  double scale(std::size_t c, double v) const {
    const double range = max[c] - min[c];
    if (range == 0.0) return 0.0;
    return (v - min[c]) / range;
  }

  FeatureVector apply(const FeatureVector& row) const {
    if (!finalized_) {
      Normalizer copy = *this;
      copy.finalize();
      return copy.apply(row);
    }
    FeatureVector out;
    out.label = row.label;
    out.entries.reserve(row.entries.size() + offset_columns_.size());
    auto push = [&](std::uint32_t c, double v) {
      const double s = scale(c, v);
      if (s != 0.0) out.entries.push_back({c, s});
    };
    // Merge the explicit entries with columns whose zero maps to non-zero.
    std::size_t k = 0;
    for (const auto& e : row.entries) {
      while (k < offset_columns_.size() && offset_columns_[k] < e.index) push(offset_columns_[k++], 0.0);
      if (k < offset_columns_.size() && offset_columns_[k] == e.index) ++k;
      push(e.index, e.value);
    }
    while (k < offset_columns_.size()) push(offset_columns_[k++], 0.0);
    return out;
  }

  friend bool operator==(const Normalizer& a, const Normalizer& b) {
    return a.min == b.min && a.max == b.max;
  }

 private:
  std::vector<std::uint32_t> offset_columns_;
  bool finalized_ = false;
};

struct Model {
  std::size_t dim = 0;
  // weights[k] scores class k against the rest.
  std::array<std::vector<double>, kNumClasses> weights;
  std::array<double, kNumClasses> biases{};
  std::optional<Normalizer> normalizer;

  std::array<double, kNumClasses> scores(const FeatureVector& x) const {
    const FeatureVector* row = &x;
    FeatureVector scaled;
    if (normalizer) {
      scaled = normalizer->apply(x);
      row = &scaled;
    }
    std::array<double, kNumClasses> s = biases;
    for (const auto& e : row->entries) {
      if (e.index >= dim) throw Error("feature index " + std::to_string(e.index) + " exceeds model dimension " + std::to_string(dim));
      for (std::size_t k = 0; k < kNumClasses; ++k) s[k] += weights[k][e.index] * e.value;
    }
    return s;
  }

  friend bool operator==(const Model&, const Model&) = default;
};

// Highest score wins; exact ties go to the lowest class index.
inline InstanceLabel argmax_label(const std::array<double, kNumClasses>& scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumClasses; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return label_from_index(static_cast<int>(best));
}

inline InstanceLabel predict(const Model& model, const FeatureVector& x) {
  return argmax_label(model.scores(x));
}

// Per-class record of one training run.
struct BinaryTrace {
  std::vector<double> dual_objective;  // after each sweep
  int sweeps = 0;
  bool converged = false;
};

struct TrainTrace {
  std::array<BinaryTrace, kNumClasses> classes;
};

namespace detail {

// Seeded Fisher-Yates on raw mt19937_64 output, so the schedule does not
// depend on the standard library's distribution implementations.
inline void shuffle_indices(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = 0;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(v[i - 1], v[static_cast<std::size_t>(r % bound)]);
  }
}

struct BinarySolution {
  std::vector<double> w;
  double b = 0.0;  // weight of the bias feature, already multiplied by its value
  BinaryTrace trace;
};

inline BinarySolution solve_binary(std::span<const FeatureVector> rows, std::span<const double> y,
                                   std::size_t dim, const Hyperparams& hp, std::uint64_t seed) {
  const std::size_t n = rows.size();
  std::vector<double> w(dim, 0.0);
  double wb = 0.0;  // weight of the bias feature
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double q = hp.bias * hp.bias;
    for (const auto& e : rows[i].entries) q += e.value * e.value;
    qii[i] = q;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);

  BinarySolution sol;
  for (int sweep = 0; sweep < hp.max_iter; ++sweep) {
    shuffle_indices(order, rng);
    double max_step = 0.0;
    for (const auto i : order) {
      if (qii[i] <= 0.0) continue;
      double margin = wb * hp.bias;
      for (const auto& e : rows[i].entries) margin += w[e.index] * e.value;
      const double g = y[i] * margin - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == hp.c) pg = std::max(g, 0.0);
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qii[i], 0.0, hp.c);
      const double delta = (alpha[i] - old) * y[i];
      if (delta == 0.0) continue;
      for (const auto& e : rows[i].entries) w[e.index] += delta * e.value;
      wb += delta * hp.bias;
      max_step = std::max(max_step, std::fabs(alpha[i] - old));
    }
    double norm2 = wb * wb;
    for (const double v : w) norm2 += v * v;
    const double dual = std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * norm2;
    sol.trace.dual_objective.push_back(dual);
    sol.trace.sweeps = sweep + 1;
    if (max_step < hp.tolerance) {
      sol.trace.converged = true;
      break;
    }
  }
  sol.w = std::move(w);
  sol.b = wb * hp.bias;
  return sol;
}

}  // namespace detail

// Primal objective of one binary problem for a given weight vector and
// (already scaled) bias. Used by tests and diagnostics.
inline double primal_objective(std::span<const FeatureVector> rows, std::span<const double> y,
                               std::span<const double> w, double b, double c, double bias_feature = 1.0) {
  double norm2 = 0.0;
  for (const double v : w) norm2 += v * v;
  if (bias_feature > 0) norm2 += (b / bias_feature) * (b / bias_feature);
  double loss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double m = b;
    for (const auto& e : rows[i].entries) m += w[e.index] * e.value;
    loss += std::max(0.0, 1.0 - y[i] * m);
  }
  return 0.5 * norm2 + c * loss;
}

inline Model train(const Dataset& data, const Hyperparams& hp, TrainTrace* trace = nullptr) {
  hp.check();
  if (data.dim() < 1) throw Error("cannot train on a dataset without columns");
  const auto counts = data.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
    throw Error("training needs at least two distinct labels");
  }
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    for (const auto& e : data.rows[r].entries) {
      if (std::isnan(e.value)) throw Error("NaN feature value in training row " + std::to_string(r + 1));
      if (e.index >= data.dim()) throw Error("training row " + std::to_string(r + 1) + " exceeds the schema");
    }
  }

  Model model;
  model.dim = data.dim();
  std::vector<FeatureVector> scaled;
  std::span<const FeatureVector> rows = data.rows;
  if (hp.normalize) {
    model.normalizer = Normalizer::fit(data.rows, data.dim());
    scaled.reserve(data.rows.size());
    for (const auto& r : data.rows) scaled.push_back(model.normalizer->apply(r));
    rows = scaled;
  }

  std::array<std::vector<double>, kNumClasses> targets;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    targets[k].reserve(rows.size());
    for (const auto& r : rows) targets[k].push_back(static_cast<std::size_t>(label_index(r.label)) == k ? 1.0 : -1.0);
  }
  auto solve = [&](std::size_t k) {
    return detail::solve_binary(rows, targets[k], model.dim, hp, hp.seed + k);
  };
  std::array<detail::BinarySolution, kNumClasses> solutions;
  if (hp.parallel) {
    std::array<std::future<detail::BinarySolution>, kNumClasses> jobs;
    for (std::size_t k = 0; k < kNumClasses; ++k) jobs[k] = std::async(std::launch::async, solve, k);
    for (std::size_t k = 0; k < kNumClasses; ++k) solutions[k] = jobs[k].get();
  } else {
    for (std::size_t k = 0; k < kNumClasses; ++k) solutions[k] = solve(k);
  }
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    model.weights[k] = std::move(solutions[k].w);
    model.biases[k] = solutions[k].b;
    if (trace) trace->classes[k] = std::move(solutions[k].trace);
  }
  return model;
}

// Model files

inline nlohmann::ordered_json to_json(const Model& m) {
  nlohmann::ordered_json j;
  j["format"] = "argmine-model";
  j["schema_version"] = 1;
  j["dim"] = m.dim;
  j["classes"] = {0, 1, 2, 3};
  auto& ws = j["weights"] = nlohmann::ordered_json::array();
  for (const auto& w : m.weights) {
    auto sparse = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != 0.0) sparse.push_back({i, w[i]});
    }
    ws.push_back(std::move(sparse));
  }
  j["biases"] = m.biases;
  if (m.normalizer) {
    j["normalization"] = {{"min", m.normalizer->min}, {"max", m.normalizer->max}};
  } else {
    j["normalization"] = nullptr;
  }
  return j;
}

inline Model model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "argmine-model") throw Error("not a model file");
    if (j.at("schema_version").get<int>() != 1) throw Error("unsupported model schema version");
    Model m;
    m.dim = j.at("dim").get<std::size_t>();
    const auto& ws = j.at("weights");
    if (ws.size() != kNumClasses) throw Error("model must have 4 weight vectors");
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      m.weights[k].assign(m.dim, 0.0);
      for (const auto& e : ws[k]) {
        const auto idx = e.at(0).get<std::size_t>();
        if (idx >= m.dim) throw Error("weight index out of range");
        m.weights[k][idx] = e.at(1).get<double>();
      }
    }
    m.biases = j.at("biases").get<std::array<double, kNumClasses>>();
    const auto& norm = j.at("normalization");
    if (!norm.is_null()) {
      Normalizer n;
      n.min = norm.at("min").get<std::vector<double>>();
      n.max = norm.at("max").get<std::vector<double>>();
      if (n.min.size() != m.dim || n.max.size() != m.dim) throw Error("normalization size mismatch");
      n.finalize();
      m.normalizer = std::move(n);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  }
}

inline void save_model(const Model& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(m).dump() << '\n';
}

inline Model load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(nlohmann::json::parse(detail::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace argmine
