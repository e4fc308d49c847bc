#include <gtest/gtest.h>

#include <regex>

#include "radaug/errors.hpp"
#include "radaug/expander.hpp"
#include "radaug/seed.hpp"
#include "radaug/synth.hpp"
#include "temp_dir.hpp"

namespace radaug {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Fixture {
  TempDir src{"exp_src"};
  TempDir out{"exp_out"};
  LabeledDataset dataset;

  explicit Fixture(std::int64_t per_class = 4, std::int64_t side = 12) {
    synth::write_shapes_dataset(src.path(), per_class, side, 7);
    dataset = load_dataset(src.path());
  }
};

ExpansionPlan plan_for(const fs::path& root, TransformKind kind, std::int64_t per_image,
                       int workers = 1) {
  ExpansionPlan p;
  p.kind = kind;
  p.per_image = per_image;
  p.master_seed = 42;
  p.output_root = root;
  p.workers = workers;
  return p;
}

TEST(ExpandTest, RadialCountsAndLayout) {
  Fixture f;
  const DatasetManifest m = expand(f.dataset, plan_for(f.out.path(), TransformKind::kRadial, 5));
  ASSERT_EQ(m.records.size(), 12u * 5u);
  EXPECT_EQ(m.classes, synth::shape_class_names());
  const LabeledDataset produced = load_dataset(f.out.path());
  EXPECT_EQ(produced.class_counts(), (std::vector<std::size_t>{20, 20, 20}));
  EXPECT_TRUE(fs::exists(f.out / "manifest.jsonl"));
  EXPECT_EQ(read_manifest(f.out / "manifest.jsonl"), m);
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    const ManifestRecord& r = m.records[i];
    EXPECT_EQ(r.source_index, i / 5);
    EXPECT_EQ(r.aug_index, i % 5);
    EXPECT_EQ(r.kind(), TransformKind::kRadial);
    EXPECT_EQ(read_image(f.out / r.output).rows(), 12);
  }
  EXPECT_TRUE(verify_replay(m, f.out.path()).empty());
}

TEST(ExpandTest, IdentityCopiesSources) {
  Fixture f;
  const DatasetManifest m = expand(f.dataset, plan_for(f.out.path(), TransformKind::kIdentity, 1));
  ASSERT_EQ(m.records.size(), f.dataset.items.size());
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    EXPECT_EQ(read_file_bytes(f.out / m.records[i].output),
              read_file_bytes(f.dataset.items[i].path));
  }
}

TEST(ExpandTest, AffinePreservesSizeAndReplays) {
  Fixture f(2, 20);
  const DatasetManifest m = expand(f.dataset, plan_for(f.out.path(), TransformKind::kAffine, 3));
  ASSERT_EQ(m.records.size(), 18u);
  for (const ManifestRecord& r : m.records) {
    const Image img = read_image(f.out / r.output);
    EXPECT_EQ(img.rows(), 20);
    EXPECT_EQ(img.cols(), 20);
  }
  EXPECT_TRUE(verify_replay(m, f.out.path()).empty());
}

TEST(ExpandTest, DeterministicAcrossRunsAndWorkers) {
  Fixture f;
  TempDir a("exp_a");
  TempDir b("exp_b");
  const auto ma = expand(f.dataset, plan_for(a.path(), TransformKind::kRadial, 6, 1));
  const auto mb = expand(f.dataset, plan_for(b.path(), TransformKind::kRadial, 6, 8));
  EXPECT_EQ(ma, mb);
  EXPECT_EQ(tree_hash(a.path()), tree_hash(b.path()));
  const auto again = expand(f.dataset, plan_for(a.path(), TransformKind::kRadial, 6, 3));
  EXPECT_EQ(again, ma);
  EXPECT_EQ(tree_hash(a.path()), tree_hash(b.path()));

  ExpansionPlan other = plan_for(f.out.path(), TransformKind::kRadial, 6);
  other.master_seed = 43;
  expand(f.dataset, other);
  EXPECT_NE(tree_hash(f.out.path()), tree_hash(a.path()));
}

TEST(ExpandTest, GridOverride) {
  Fixture f(1, 10);
  ExpansionPlan p = plan_for(f.out.path(), TransformKind::kRadial, 2);
  p.rays = 7;
  p.radii = 15;
  const DatasetManifest m = expand(f.dataset, p);
  for (const ManifestRecord& r : m.records) {
    const Image img = read_image(f.out / r.output);
    EXPECT_EQ(img.rows(), 7);
    EXPECT_EQ(img.cols(), 15);
  }
}

TEST(OutputNameTest, Format) {
  const TransformSpec radial = RadialSpec{Pole{1, 2}, RadialParams{8, 8}};
  const std::string name = output_file_name("0003", radial, 7, 100);
  EXPECT_TRUE(std::regex_match(name, std::regex("0003__radial07_[0-9a-f]{8}\\.pgm"))) << name;
  EXPECT_EQ(output_file_name("a", std::monostate{}, 0, 1).substr(0, 12), "a__identity0");
  EXPECT_EQ(output_file_name("a", radial, 5, 1000).substr(0, 13), "a__radial005_");
  EXPECT_NE(output_file_name("a", radial, 0, 1),
            output_file_name("a", RadialSpec{Pole{2, 1}, RadialParams{8, 8}}, 0, 1));
}

TEST(PlanItemTest, SeedsDependOnSourceAndIndex) {
  ExpansionPlan p = plan_for("unused", TransformKind::kRadial, 10);
  const Image img(30, 30);
  const TransformSpec a = plan_item(p, img, 0, 0);
  EXPECT_EQ(a, plan_item(p, img, 0, 0));
  EXPECT_EQ(std::get<RadialSpec>(a).pole, pick_pole(derive_item_seed(42, 0, 0), 30, 30));
  EXPECT_EQ(std::get<RadialSpec>(a).params, (RadialParams{30, 30, FillMode::kZero}));
}

TEST(ExpandTest, Errors) {
  Fixture f(1);
  EXPECT_THROW(expand(f.dataset, plan_for(f.out.path(), TransformKind::kIdentity, 2)),
               ParameterError);
  EXPECT_THROW(expand(f.dataset, plan_for(f.out.path(), TransformKind::kRadial, 0)), ParameterError);
  EXPECT_THROW(expand(f.dataset, plan_for(f.out.path(), TransformKind::kRadial, 1, 0)),
               ParameterError);

  LabeledDataset dup = f.dataset;
  dup.items.push_back(DatasetItem{0, f.src / "elsewhere" / "0000.png"});
  EXPECT_THROW(expand(dup, plan_for(f.out.path(), TransformKind::kRadial, 1)), ExpansionError);

  LabeledDataset broken = f.dataset;
  broken.items.push_back(DatasetItem{1, f.src / "missing.pgm"});
  try {
    expand(broken, plan_for(f.out.path(), TransformKind::kRadial, 1, 4));
    FAIL();
  } catch (const ExpansionError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.pgm"), std::string::npos);
  }
}

}  // namespace
}  // namespace radaug
