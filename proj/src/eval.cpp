#include "radaug/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "json.hpp"
#include "parallel.hpp"
#include "radaug/errors.hpp"
#include "radaug/seed.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace radaug {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void check_fit_input(std::span<const Image> images, std::span<const std::size_t> labels,
                     std::size_t num_classes) {
  if (images.empty()) throw EvaluationError("cannot fit a model on zero images");
  if (images.size() != labels.size()) {
    throw EvaluationError("fit: image and label counts differ");
  }
  if (num_classes == 0) throw EvaluationError("fit: zero classes");
  for (std::size_t label : labels) {
    if (label >= num_classes) throw EvaluationError("fit: label out of range");
  }
}

void check_preds(std::span<const ProbVector> preds, std::size_t c) {
  if (preds.empty()) throw EvaluationError("empty test set");
  for (const ProbVector& p : preds) {
    if (c >= p.size()) throw EvaluationError("class index outside the probability vector");
  }
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::size_t argmax(std::span<const double> p) {
  if (p.empty()) throw EvaluationError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best;
}

std::vector<double> image_features(const Image& img, std::int64_t side) {
  const Image small = resize_nearest(img, side, side);
  std::vector<double> f(small.size());
  std::transform(small.pixels().begin(), small.pixels().end(), f.begin(),
                 [](std::uint8_t v) { return static_cast<double>(v) / 255.0; });
  return f;
}

NearestCentroidModel::NearestCentroidModel(std::int64_t feature_side, double temperature)
    : side_(feature_side), temperature_(temperature) {
  if (feature_side < 1) throw ParameterError("feature side must be >= 1");
  if (!(temperature > 0.0)) throw ParameterError("temperature must be > 0");
}

void NearestCentroidModel::fit(std::span<const Image> images, std::span<const std::size_t> labels,
                               std::size_t num_classes) {
  check_fit_input(images, labels, num_classes);
  const auto dim = static_cast<std::size_t>(side_ * side_);
  std::vector<std::vector<double>> sums(num_classes, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::vector<double> f = image_features(images[i], side_);
    auto& sum = sums[labels[i]];
    for (std::size_t d = 0; d < dim; ++d) sum[d] += f[d];
    ++counts[labels[i]];
  }
  centroids_.assign(num_classes, {});
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) continue;
    centroids_[c] = std::move(sums[c]);
    for (double& v : centroids_[c]) v /= static_cast<double>(counts[c]);
  }
}

ProbVector NearestCentroidModel::predict_proba(const Image& img) const {
  if (centroids_.empty()) throw EvaluationError("model used before fit");
  const std::vector<double> f = image_features(img, side_);
  std::vector<double> logits(centroids_.size(), -INFINITY);
  double peak = -INFINITY;
  for (std::size_t c = 0; c < centroids_.size(); ++c) {
    if (centroids_[c].empty()) continue;
    logits[c] = -std::sqrt(squared_distance(f, centroids_[c])) / temperature_;
    peak = std::max(peak, logits[c]);
  }
  ProbVector p(centroids_.size(), 0.0);
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (centroids_[c].empty()) continue;
    p[c] = std::exp(logits[c] - peak);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return p;
}

KnnModel::KnnModel(std::size_t k, std::int64_t feature_side) : k_(k), side_(feature_side) {
  if (k == 0) throw ParameterError("k must be >= 1");
  if (feature_side < 1) throw ParameterError("feature side must be >= 1");
}

void KnnModel::fit(std::span<const Image> images, std::span<const std::size_t> labels,
                   std::size_t num_classes) {
  check_fit_input(images, labels, num_classes);
  classes_ = num_classes;
  features_.clear();
  features_.reserve(images.size());
  for (const Image& img : images) features_.push_back(image_features(img, side_));
  labels_.assign(labels.begin(), labels.end());
}

ProbVector KnnModel::predict_proba(const Image& img) const {
  if (features_.empty()) throw EvaluationError("model used before fit");
  const std::vector<double> f = image_features(img, side_);
  std::vector<std::pair<double, std::size_t>> scored(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    scored[i] = {squared_distance(f, features_[i]), labels_[i]};
  }
  const std::size_t k = std::min(k_, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
  ProbVector p(classes_, 0.0);
  for (std::size_t i = 0; i < k; ++i) p[scored[i].second] += 1.0;
  for (double& v : p) v /= static_cast<double>(k);
  return p;
}

std::unique_ptr<ProbModel> ModelConfig::make() const {
  if (kind == Kind::kKnn) return std::make_unique<KnnModel>(k, feature_side);
  return std::make_unique<NearestCentroidModel>(feature_side, temperature);
}

std::string_view to_string(ModelConfig::Kind kind) {
  return kind == ModelConfig::Kind::kKnn ? "knn" : "centroid";
}

ModelConfig::Kind parse_model_kind(std::string_view text) {
  if (text == "centroid") return ModelConfig::Kind::kNearestCentroid;
  if (text == "knn") return ModelConfig::Kind::kKnn;
  throw ParameterError("unknown model '" + std::string(text) + "' (expected centroid|knn)");
}

double accuracy_per_class(std::span<const ProbVector> preds, std::span<const std::size_t> labels,
                          std::size_t c) {
  check_preds(preds, c);
  if (preds.size() != labels.size()) throw EvaluationError("prediction and label counts differ");
  std::size_t support = 0;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < preds.size(); ++s) {
    if (labels[s] >= preds[s].size()) throw EvaluationError("label out of range");
    if (labels[s] != c) continue;
    ++support;
    if (argmax(preds[s]) == c) ++hits;
  }
  if (support == 0) {
    throw EvaluationError("no test samples for class " + std::to_string(c));
  }
  return static_cast<double>(hits) / static_cast<double>(support);
}

double confidence_per_class(std::span<const ProbVector> preds, std::size_t c) {
  check_preds(preds, c);
  double sum = 0.0;
  for (const ProbVector& p : preds) sum += p[c];
  return sum / static_cast<double>(preds.size());
}

double overall_accuracy(std::span<const ProbVector> preds, std::span<const std::size_t> labels) {
  if (preds.empty()) throw EvaluationError("empty test set");
  if (preds.size() != labels.size()) throw EvaluationError("prediction and label counts differ");
  std::size_t hits = 0;
  for (std::size_t s = 0; s < preds.size(); ++s) {
    if (argmax(preds[s]) == labels[s]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double overall_from_per_class(std::span<const double> accuracy,
                              std::span<const std::size_t> support) {
  if (accuracy.size() != support.size()) throw EvaluationError("accuracy/support size mismatch");
  std::int64_t hits = 0;
  std::size_t total = 0;
  for (std::size_t c = 0; c < accuracy.size(); ++c) {
    hits += std::llround(accuracy[c] * static_cast<double>(support[c]));
    total += support[c];
  }
  if (total == 0) throw EvaluationError("empty test set");
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::size_t majority_vote(std::span<const std::size_t> labels) {
  if (labels.empty()) throw ParameterError("majority vote over an empty label set");
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t l : labels) ++counts[l];
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

VoteResult vote_labels(const Image& img, std::span<const Pole> poles, const RadialParams& params,
                       const ProbModel& model) {
  if (poles.empty()) throw ParameterError("vote_labels needs at least one pole");
  const RadialKernel kernel(params);
  VoteResult result;
  result.labels.reserve(poles.size());
  Image buffer(params.rays, params.radii);
  for (const Pole& pole : poles) {
    kernel.apply_into(img, pole, buffer);
    result.labels.push_back(argmax(model.predict_proba(buffer)));
  }
  result.winner = majority_vote(result.labels);
  return result;
}

ProbVector vote_distribution(const VoteResult& vote, std::size_t num_classes) {
  ProbVector p(num_classes, 0.0);
  for (std::size_t l : vote.labels) p.at(l) += 1.0;
  for (double& v : p) v /= static_cast<double>(vote.labels.size());
  return p;
}

EvalReport make_report(std::vector<std::string> classes, std::span<const ProbVector> preds,
                       std::span<const std::size_t> labels) {
  EvalReport rep;
  rep.classes = std::move(classes);
  const std::size_t n = rep.classes.size();
  rep.support.assign(n, 0);
  rep.correct.assign(n, 0);
  for (std::size_t s = 0; s < labels.size() && s < preds.size(); ++s) {
    if (labels[s] >= n) throw EvaluationError("label out of range");
    ++rep.support[labels[s]];
    if (argmax(preds[s]) == labels[s]) ++rep.correct[labels[s]];
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (rep.support[c] == 0) {
      throw EvaluationError("class '" + rep.classes[c] + "' has no test samples");
    }
    rep.accuracy.push_back(accuracy_per_class(preds, labels, c));
    rep.confidence.push_back(confidence_per_class(preds, c));
  }
  rep.macro_accuracy =
      std::accumulate(rep.accuracy.begin(), rep.accuracy.end(), 0.0) / static_cast<double>(n);
  rep.macro_confidence =
      std::accumulate(rep.confidence.begin(), rep.confidence.end(), 0.0) / static_cast<double>(n);
  rep.overall_accuracy = overall_accuracy(preds, labels);
  rep.total = preds.size();
  return rep;
}

EvalReport run_experiment(const DatasetManifest& train, const fs::path& train_root,
                          const LabeledDataset& test, const ExperimentConfig& config) {
  if (train.classes != test.classes) {
    throw ConfigurationError("train classes and test classes differ");
  }
  if (train.records.empty()) throw ConfigurationError("training manifest has no records");
  if (test.items.empty()) throw ConfigurationError("test dataset has no items");
  const TransformKind kind = train.records.front().kind();
  for (const ManifestRecord& r : train.records) {
    if (r.kind() != kind) throw ConfigurationError("training manifest mixes transform kinds");
  }
  if (kind == TransformKind::kRadial && config.poles_per_image == 0) {
    throw ConfigurationError("radial pipeline needs at least one test pole");
  }

  std::vector<Image> train_images(train.records.size(), Image(1, 1));
  std::vector<std::size_t> train_labels(train.records.size());
  detail::parallel_for(train.records.size(), config.workers, [&](std::size_t i) {
    const ManifestRecord& r = train.records[i];
    train_images[i] = read_image(r.output.is_absolute() ? r.output : train_root / r.output);
    train_labels[i] = r.class_index;
  });
  std::unique_ptr<ProbModel> model = config.model.make();
  model->fit(train_images, train_labels, train.classes.size());
  train_images.clear();

  // Test-time grid follows the training grid when every record shares one.
  std::optional<RadialParams> shared_grid;
  FillMode fill = FillMode::kZero;
  if (kind == TransformKind::kRadial) {
    const RadialParams first = std::get<RadialSpec>(train.records.front().transform).params;
    fill = first.fill;
    shared_grid = first;
    for (const ManifestRecord& r : train.records) {
      if (std::get<RadialSpec>(r.transform).params != first) {
        shared_grid.reset();
        break;
      }
    }
  }

  std::vector<ProbVector> preds(test.items.size());
  std::vector<std::size_t> labels(test.items.size());
  detail::parallel_for(test.items.size(), config.workers, [&](std::size_t i) {
    const Image img = read_image(test.items[i].path);
    labels[i] = test.items[i].class_index;
    if (kind != TransformKind::kRadial) {
      preds[i] = model->predict_proba(img);
      return;
    }
    std::vector<Pole> poles(config.poles_per_image);
    for (std::size_t t = 0; t < poles.size(); ++t) {
      poles[t] = pick_pole(derive_item_seed(config.seed, i, t), img.rows(), img.cols());
    }
    const RadialParams params = shared_grid.value_or(RadialParams::for_image(img, fill));
    preds[i] = vote_distribution(vote_labels(img, poles, params, *model), train.classes.size());
  });

  EvalReport rep = make_report(train.classes, preds, labels);
  rep.pipeline = std::string(to_string(kind));
  rep.seed = config.seed;
  return rep;
}

std::string format_report(const EvalReport& report) {
  ojson header;
  header["format"] = "radaug-report";
  header["version"] = 1;
  header["pipeline"] = report.pipeline;
  header["seed"] = report.seed;
  header["classes"] = report.classes;
  std::string out = header.dump() + "\n";
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    ojson j;
    j["class"] = report.classes[c];
    j["accuracy"] = report.accuracy[c];
    j["confidence"] = report.confidence[c];
    j["correct"] = report.correct[c];
    j["support"] = report.support[c];
    out += j.dump() + "\n";
  }
  ojson summary;
  summary["macro_accuracy"] = report.macro_accuracy;
  summary["macro_confidence"] = report.macro_confidence;
  summary["overall_accuracy"] = report.overall_accuracy;
  summary["total"] = report.total;
  out += summary.dump() + "\n";
  return out;
}

void write_report(const EvalReport& report, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot open " + path.string() + " for writing");
  out << format_report(report);
  out.close();
  if (!out) throw WriteError("failed writing " + path.string());
}

std::string format_report_table(const EvalReport& report) {
  std::size_t width = 8;
  for (const std::string& c : report.classes) width = std::max(width, c.size() + 2);
  std::string out = pad("class", width) + pad("acc%", 10) + pad("conf%", 10) + "n\n";
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    out += pad(report.classes[c], width) + pad(percent(report.accuracy[c]), 10) +
           pad(percent(report.confidence[c]), 10) + std::to_string(report.support[c]) + "\n";
  }
  out += pad("mean", width) + pad(percent(report.macro_accuracy), 10) +
         pad(percent(report.macro_confidence), 10) + std::to_string(report.total) + "\n";
  out += "overall accuracy " + percent(report.overall_accuracy) + "%\n";
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::string format_aggregate_table(std::span<const EvalReport> reports) {
  if (reports.empty()) return {};
  std::vector<std::string> pipelines;
  for (const EvalReport& r : reports) {
    if (std::find(pipelines.begin(), pipelines.end(), r.pipeline) == pipelines.end()) {
      pipelines.push_back(r.pipeline);
    }
  }
  const std::vector<std::string>& classes = reports.front().classes;
  std::size_t width = 8;
  for (const std::string& c : classes) width = std::max(width, c.size() + 2);
  constexpr std::size_t kCell = 17;

  auto cell = [](std::span<const double> v) {
    const MeanStd ms = mean_std(v);
    return percent(ms.mean) + "±" + percent(ms.std);
  };

  std::string out = pad("", width);
  for (const std::string& p : pipelines) {
    out += pad(p + " acc%", kCell + 1) + pad(p + " conf%", kCell + 1);
  }
  out += "\n";
  // One extra row for the macro means.
  for (std::size_t c = 0; c <= classes.size(); ++c) {
    out += pad(c < classes.size() ? classes[c] : "mean", width);
    for (const std::string& p : pipelines) {
      std::vector<double> acc;
      std::vector<double> conf;
      for (const EvalReport& r : reports) {
        if (r.pipeline != p) continue;
        acc.push_back(c < classes.size() ? r.accuracy[c] : r.macro_accuracy);
        conf.push_back(c < classes.size() ? r.confidence[c] : r.macro_confidence);
      }
      // "±" is two bytes in UTF-8; pad by display width.
      out += pad(cell(acc), kCell + 2) + pad(cell(conf), kCell + 2);
    }
    out += "\n";
  }
  out += "runs per pipeline: " + std::to_string(reports.size() / pipelines.size()) + "\n";
  return out;
}

}  // namespace radaug
