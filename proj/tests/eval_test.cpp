#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "radaug/errors.hpp"
#include "radaug/eval.hpp"
#include "radaug/expander.hpp"
#include "radaug/seed.hpp"
#include "radaug/synth.hpp"
#include "temp_dir.hpp"

namespace radaug {
namespace {

using testing::TempDir;

TEST(ArgmaxTest, TiesGoToSmallestIndex) {
  EXPECT_EQ(argmax(std::vector<double>{0.2, 0.5, 0.3}), 1u);
  EXPECT_EQ(argmax(std::vector<double>{0.4, 0.4, 0.2}), 0u);
  EXPECT_EQ(argmax(std::vector<double>{0.1, 0.45, 0.45}), 1u);
  EXPECT_THROW(argmax(std::vector<double>{}), EvaluationError);
}

TEST(MetricsTest, WorkedExample) {
  // Two classes, four samples.
  const std::vector<ProbVector> preds{{0.9, 0.1}, {0.4, 0.6}, {0.3, 0.7}, {0.8, 0.2}};
  const std::vector<std::size_t> labels{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(accuracy_per_class(preds, labels, 0), 0.5);
  EXPECT_DOUBLE_EQ(accuracy_per_class(preds, labels, 1), 0.5);
  EXPECT_DOUBLE_EQ(confidence_per_class(preds, 0), (0.9 + 0.4 + 0.3 + 0.8) / 4);
  EXPECT_DOUBLE_EQ(confidence_per_class(preds, 1), (0.1 + 0.6 + 0.7 + 0.2) / 4);
  EXPECT_DOUBLE_EQ(overall_accuracy(preds, labels), 0.5);
}

TEST(MetricsTest, PerfectAndEmptyClass) {
  const std::vector<ProbVector> preds{{1, 0, 0}, {0, 1, 0}, {0, 1, 0}};
  const std::vector<std::size_t> labels{0, 1, 1};
  EXPECT_EQ(accuracy_per_class(preds, labels, 0), 1.0);
  EXPECT_EQ(accuracy_per_class(preds, labels, 1), 1.0);
  EXPECT_THROW(accuracy_per_class(preds, labels, 2), EvaluationError);
  EXPECT_THROW(make_report({"a", "b", "c"}, preds, labels), EvaluationError);
  EXPECT_THROW(accuracy_per_class(preds, std::vector<std::size_t>{0, 1}, 0), EvaluationError);
  EXPECT_THROW(confidence_per_class(std::vector<ProbVector>{}, 0), EvaluationError);
}

TEST(MetricsTest, ConfidencesSumToOneAndOverallReaggregates) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t classes = 2 + rng.below(6);
    const std::size_t n = classes + rng.below(300);
    std::vector<ProbVector> preds(n, ProbVector(classes));
    std::vector<std::size_t> labels(n);
    for (std::size_t s = 0; s < n; ++s) {
      double total = 0.0;
      for (double& p : preds[s]) total += (p = rng.unit());
      for (double& p : preds[s]) p /= total;
      labels[s] = s < classes ? s : rng.below(classes);
    }
    std::vector<std::string> names(classes, "c");
    const EvalReport rep = make_report(names, preds, labels);
    double sum = 0.0;
    for (double k : rep.confidence) sum += k;
    ASSERT_NEAR(sum, 1.0, 1e-12);
    ASSERT_EQ(overall_from_per_class(rep.accuracy, rep.support), rep.overall_accuracy);
    std::size_t total = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      ASSERT_EQ(rep.accuracy[c],
                static_cast<double>(rep.correct[c]) / static_cast<double>(rep.support[c]));
      total += rep.support[c];
    }
    ASSERT_EQ(total, n);
  }
}

TEST(MajorityVoteTest, Examples) {
  EXPECT_EQ(majority_vote(std::vector<std::size_t>{2, 1, 1, 2}), 1u);
  EXPECT_EQ(majority_vote(std::vector<std::size_t>{3}), 3u);
  EXPECT_EQ(majority_vote(std::vector<std::size_t>{0, 2, 2}), 2u);
  EXPECT_EQ(majority_vote(std::vector<std::size_t>{5, 4, 3}), 3u);
  EXPECT_THROW(majority_vote(std::vector<std::size_t>{}), ParameterError);
}

TEST(MajorityVoteTest, MatchesBruteForceAndIgnoresOrder) {
  SplitMix64 rng(11);
  std::mt19937_64 shuffler(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::size_t> labels(1 + rng.below(40));
    const std::size_t classes = 1 + rng.below(6);
    for (auto& l : labels) l = rng.below(classes);
    const std::size_t expected = oracle::brute_majority(labels);
    ASSERT_EQ(majority_vote(labels), expected);
    std::shuffle(labels.begin(), labels.end(), shuffler);
    ASSERT_EQ(majority_vote(labels), expected);
  }
}

std::vector<Image> shapes(std::size_t per_class, std::uint64_t seed, std::vector<std::size_t>* labels) {
  std::vector<Image> out;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < per_class; ++i) {
      out.push_back(synth::render_shape(static_cast<synth::Shape>(k), 16, derive_item_seed(seed, k, i)));
      labels->push_back(k);
    }
  }
  return out;
}

TEST(ModelTest, KnnMemorisesTrainingSet) {
  std::vector<std::size_t> labels;
  const auto images = shapes(10, 1, &labels);
  KnnModel knn(1, 16);
  knn.fit(images, labels, 3);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ProbVector p = knn.predict_proba(images[i]);
    ASSERT_EQ(p.size(), 3u);
    ASSERT_EQ(p[labels[i]], 1.0);
  }
}

TEST(ModelTest, ProbabilitiesAreDistributions) {
  std::vector<std::size_t> labels;
  const auto images = shapes(8, 2, &labels);
  std::vector<std::size_t> test_labels;
  const auto test = shapes(4, 99, &test_labels);
  NearestCentroidModel centroid(8, 0.5);
  KnnModel knn(5, 8);
  centroid.fit(images, labels, 4);  // class 3 has no samples
  knn.fit(images, labels, 4);
  for (const Image& img : test) {
    for (const ProbModel* m : {static_cast<const ProbModel*>(&centroid),
                               static_cast<const ProbModel*>(&knn)}) {
      const ProbVector p = m->predict_proba(img);
      ASSERT_EQ(p.size(), 4u);
      double sum = 0.0;
      for (double v : p) {
        ASSERT_GE(v, 0.0);
        sum += v;
      }
      ASSERT_NEAR(sum, 1.0, 1e-12);
      ASSERT_EQ(p[3], 0.0);
    }
  }
}

TEST(ModelTest, KnnIgnoresTrainingOrder) {
  std::vector<std::size_t> labels;
  auto images = shapes(6, 3, &labels);
  KnnModel a(4, 8);
  a.fit(images, labels, 3);
  std::reverse(images.begin(), images.end());
  std::reverse(labels.begin(), labels.end());
  KnnModel b(4, 8);
  b.fit(images, labels, 3);
  std::vector<std::size_t> test_labels;
  for (const Image& img : shapes(5, 50, &test_labels)) {
    ASSERT_EQ(a.predict_proba(img), b.predict_proba(img));
  }
}

TEST(ModelTest, Errors) {
  EXPECT_THROW(KnnModel(0), ParameterError);
  EXPECT_THROW(NearestCentroidModel(16, 0.0), ParameterError);
  KnnModel knn;
  EXPECT_THROW(knn.predict_proba(Image(4, 4)), EvaluationError);
  EXPECT_THROW(knn.fit(std::vector<Image>{}, std::vector<std::size_t>{}, 2), EvaluationError);
  EXPECT_THROW(knn.fit(std::vector<Image>{Image(2, 2)}, std::vector<std::size_t>{2}, 2),
               EvaluationError);
  EXPECT_EQ(parse_model_kind("knn"), ModelConfig::Kind::kKnn);
  EXPECT_THROW(parse_model_kind("svm"), ParameterError);
}

TEST(VoteLabelsTest, PermutingPolesKeepsWinner) {
  std::vector<std::size_t> labels;
  const auto images = shapes(6, 4, &labels);
  NearestCentroidModel model(8);
  std::vector<Image> radial;
  for (std::size_t i = 0; i < images.size(); ++i) {
    radial.push_back(radial_transform(images[i], pick_pole(i, 16, 16), RadialParams{16, 16}).image);
  }
  model.fit(radial, labels, 3);
  std::mt19937_64 shuffler(8);
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::vector<Pole> poles;
    for (std::uint64_t t = 0; t < 9; ++t) poles.push_back(pick_pole(derive_item_seed(1, i, t), 16, 16));
    const VoteResult v = vote_labels(images[i], poles, RadialParams{16, 16}, model);
    ASSERT_EQ(v.labels.size(), 9u);
    ASSERT_EQ(v.winner, oracle::brute_majority(v.labels));
    std::shuffle(poles.begin(), poles.end(), shuffler);
    ASSERT_EQ(vote_labels(images[i], poles, RadialParams{16, 16}, model).winner, v.winner);
    const ProbVector dist = vote_distribution(v, 3);
    ASSERT_EQ(argmax(dist), v.winner);
  }
  EXPECT_THROW(vote_labels(images[0], std::vector<Pole>{}, RadialParams{16, 16}, model),
               ParameterError);
  EXPECT_THROW(vote_labels(images[0], std::vector<Pole>{Pole{16, 0}}, RadialParams{16, 16}, model),
               ParameterError);
}

TEST(ExperimentTest, ClassMismatchIsConfigurationError) {
  TempDir train_src("ev_tr");
  TempDir train_out("ev_out");
  TempDir test("ev_te");
  synth::write_shapes_dataset(train_src.path(), 2, 12, 1);
  synth::write_shapes_dataset(test.path(), 2, 12, 2);
  std::filesystem::remove_all(test / "triangle");
  ExpansionPlan plan;
  plan.kind = TransformKind::kRadial;
  plan.per_image = 2;
  plan.output_root = train_out.path();
  const DatasetManifest m = expand(load_dataset(train_src.path()), plan);
  EXPECT_THROW(run_experiment(m, train_out.path(), load_dataset(test.path()), ExperimentConfig{}),
               ConfigurationError);
}

TEST(ExperimentTest, RadialPipelineIsDeterministic) {
  TempDir train_src("ev_tr");
  TempDir train_out("ev_out");
  TempDir test("ev_te");
  synth::write_shapes_dataset(train_src.path(), 4, 16, 1);
  synth::write_shapes_dataset(test.path(), 5, 16, 2);
  ExpansionPlan plan;
  plan.kind = TransformKind::kRadial;
  plan.per_image = 4;
  plan.output_root = train_out.path();
  const DatasetManifest m = expand(load_dataset(train_src.path()), plan);
  ExperimentConfig cfg;
  cfg.poles_per_image = 7;
  cfg.seed = 3;
  const EvalReport a = run_experiment(m, train_out.path(), load_dataset(test.path()), cfg);
  cfg.workers = 4;
  const EvalReport b = run_experiment(m, train_out.path(), load_dataset(test.path()), cfg);
  EXPECT_EQ(format_report(a), format_report(b));
  EXPECT_EQ(a.pipeline, "radial");
  EXPECT_EQ(a.total, 15u);
  EXPECT_EQ(a.support, (std::vector<std::size_t>{5, 5, 5}));
  // Vote fractions are multiples of 1/7.
  double sum = 0.0;
  for (double k : a.confidence) sum += k;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(ReportTest, FormatsAndAggregates) {
  EvalReport r;
  r.pipeline = "radial";
  r.seed = 4;
  r.classes = {"a", "b"};
  r.accuracy = {0.5, 1.0};
  r.confidence = {0.25, 0.75};
  r.correct = {1, 2};
  r.support = {2, 2};
  r.macro_accuracy = 0.75;
  r.macro_confidence = 0.5;
  r.overall_accuracy = 0.75;
  r.total = 4;
  EXPECT_EQ(format_report(r),
            "{\"format\":\"radaug-report\",\"version\":1,\"pipeline\":\"radial\",\"seed\":4,"
            "\"classes\":[\"a\",\"b\"]}\n"
            "{\"class\":\"a\",\"accuracy\":0.5,\"confidence\":0.25,\"correct\":1,\"support\":2}\n"
            "{\"class\":\"b\",\"accuracy\":1.0,\"confidence\":0.75,\"correct\":2,\"support\":2}\n"
            "{\"macro_accuracy\":0.75,\"macro_confidence\":0.5,\"overall_accuracy\":0.75,"
            "\"total\":4}\n");
  const std::string table = format_report_table(r);
  EXPECT_NE(table.find("50.00"), std::string::npos);
  EXPECT_NE(table.find("overall accuracy 75.00%"), std::string::npos);

  EvalReport r2 = r;
  r2.accuracy = {1.0, 1.0};
  r2.macro_accuracy = 1.0;
  const std::vector<EvalReport> runs{r, r2};
  const std::string agg = format_aggregate_table(runs);
  EXPECT_NE(agg.find("75.00±35.36"), std::string::npos) << agg;
  EXPECT_NE(agg.find("runs per pipeline: 2"), std::string::npos);

  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MeanStd ms = mean_std(v);
  EXPECT_DOUBLE_EQ(ms.mean, 2.5);
  EXPECT_DOUBLE_EQ(ms.std, std::sqrt(5.0 / 3.0));
  EXPECT_EQ(mean_std(std::vector<double>{7.0}).std, 0.0);
}

}  // namespace
}  // namespace radaug
