#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "radaug/image.hpp"
#include "radaug/io.hpp"
#include "radaug/manifest.hpp"
#include "radaug/radial.hpp"

namespace radaug {

using ProbVector = std::vector<double>;

/// Index of the largest entry; ties go to the smallest index. Throws
/// EvaluationError on an empty vector.
std::size_t argmax(std::span<const double> p);

/// Nearest-neighbour downscale to side x side, scaled to [0, 1].
std::vector<double> image_features(const Image& img, std::int64_t side);

/// Any classifier producing a probability vector over C classes.
class ProbModel {
 public:
  virtual ~ProbModel() = default;

  /// labels[i] < num_classes. Throws EvaluationError on empty input.
  virtual void fit(std::span<const Image> images, std::span<const std::size_t> labels,
                   std::size_t num_classes) = 0;
  /// Length num_classes(), non-negative, sums to 1.
  virtual ProbVector predict_proba(const Image& img) const = 0;
  virtual std::size_t num_classes() const noexcept = 0;
};

/// Per-class mean feature vector; p_c proportional to exp(-dist_c / temperature).
/// Classes without training images get probability 0.
class NearestCentroidModel final : public ProbModel {
 public:
  explicit NearestCentroidModel(std::int64_t feature_side = 16, double temperature = 1.0);

  void fit(std::span<const Image> images, std::span<const std::size_t> labels,
           std::size_t num_classes) override;
  ProbVector predict_proba(const Image& img) const override;
  std::size_t num_classes() const noexcept override { return centroids_.size(); }

 private:
  std::int64_t side_;
  double temperature_;
  std::vector<std::vector<double>> centroids_;  // empty for classes without samples
};

/// k nearest training images by Euclidean distance; p_c = votes_c / k.
/// Distance ties order by label, so results do not depend on training order.
class KnnModel final : public ProbModel {
 public:
  explicit KnnModel(std::size_t k = 5, std::int64_t feature_side = 16);

  void fit(std::span<const Image> images, std::span<const std::size_t> labels,
           std::size_t num_classes) override;
  ProbVector predict_proba(const Image& img) const override;
  std::size_t num_classes() const noexcept override { return classes_; }

 private:
  std::size_t k_;
  std::int64_t side_;
  std::size_t classes_ = 0;
  std::vector<std::vector<double>> features_;
  std::vector<std::size_t> labels_;
};

struct ModelConfig {
  enum class Kind { kNearestCentroid, kKnn };

  Kind kind = Kind::kNearestCentroid;
  std::size_t k = 5;
  double temperature = 1.0;
  std::int64_t feature_side = 16;

  std::unique_ptr<ProbModel> make() const;
};

std::string_view to_string(ModelConfig::Kind kind);
ModelConfig::Kind parse_model_kind(std::string_view text);

/// Fraction of the class-c samples (labels == c) whose argmax is c.
/// Throws EvaluationError for mismatched lengths, invalid labels or when no
/// sample carries label c.
double accuracy_per_class(std::span<const ProbVector> preds, std::span<const std::size_t> labels,
                          std::size_t c);

/// Mean of p_{s,c} over every sample. Throws EvaluationError when empty.
double confidence_per_class(std::span<const ProbVector> preds, std::size_t c);

/// Fraction of samples whose argmax equals the label.
double overall_accuracy(std::span<const ProbVector> preds, std::span<const std::size_t> labels);

/// Re-aggregates per-class accuracies weighted by support. Counts are
/// recovered with llround(acc * support), so the result matches
/// overall_accuracy() bit for bit.
double overall_from_per_class(std::span<const double> accuracy, std::span<const std::size_t> support);

/// Most frequent label; ties go to the smallest label. Throws ParameterError
/// when empty.
std::size_t majority_vote(std::span<const std::size_t> labels);

struct VoteResult {
  std::vector<std::size_t> labels;  // argmax per pole, in pole order
  std::size_t winner = 0;
};

/// Classifies the radial transform of img at every pole and takes the
/// majority label. Throws ParameterError for an empty pole list or a pole
/// outside img.
VoteResult vote_labels(const Image& img, std::span<const Pole> poles, const RadialParams& params,
                       const ProbModel& model);

/// Vote fractions of a VoteResult as a probability vector.
ProbVector vote_distribution(const VoteResult& vote, std::size_t num_classes);

struct EvalReport {
  std::string pipeline;  // identity | radial | affine
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  std::vector<double> accuracy;    // per class
  std::vector<double> confidence;  // per class
  std::vector<std::size_t> correct;
  std::vector<std::size_t> support;
  double macro_accuracy = 0.0;
  double macro_confidence = 0.0;
  double overall_accuracy = 0.0;
  std::size_t total = 0;
};

/// Builds every metric from per-sample predictions.
EvalReport make_report(std::vector<std::string> classes, std::span<const ProbVector> preds,
                       std::span<const std::size_t> labels);

struct ExperimentConfig {
  ModelConfig model;
  std::size_t poles_per_image = 32;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Trains on the manifest's outputs (resolved against train_root) and scores
/// the test set. Radial manifests classify by pole voting with poles
/// pick_pole(derive_item_seed(seed, test_index, t)); other pipelines classify
/// the test image directly. Throws ConfigurationError when the class lists
/// differ or the manifest mixes transform kinds.
EvalReport run_experiment(const DatasetManifest& train, const std::filesystem::path& train_root,
                          const LabeledDataset& test, const ExperimentConfig& config);

/// Line-delimited JSON: header, one line per class, one summary line.
std::string format_report(const EvalReport& report);
void write_report(const EvalReport& report, const std::filesystem::path& path);

/// Plain-text table of per-class and macro metrics in percent.
std::string format_report_table(const EvalReport& report);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

/// "mean±std" table across repeated runs of the same pipeline(s). Columns
/// are grouped by pipeline in first-seen order.
std::string format_aggregate_table(std::span<const EvalReport> reports);

}  // namespace radaug
