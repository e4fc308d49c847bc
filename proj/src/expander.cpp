#include "radaug/expander.hpp"

#include <cstdio>
#include <set>
#include <system_error>

#include "parallel.hpp"
#include "radaug/errors.hpp"
#include "radaug/seed.hpp"

namespace fs = std::filesystem;

namespace radaug {

void ExpansionPlan::validate() const {
  if (per_image < 1) throw ParameterError("per_image must be >= 1");
  if (kind == TransformKind::kIdentity && per_image != 1) {
    throw ParameterError("identity expansion requires per_image == 1");
  }
  if ((rays && *rays < 1) || (radii && *radii < 1)) {
    throw ParameterError("radial rays/radii overrides must be >= 1");
  }
  if (kind == TransformKind::kAffine) affine_ranges.validate();
  if (workers < 1) throw ParameterError("workers must be >= 1");
}

TransformSpec plan_item(const ExpansionPlan& plan, const Image& source, std::uint64_t source_index,
                        std::uint64_t aug_index) {
  const std::uint64_t seed = derive_item_seed(plan.master_seed, source_index, aug_index);
  switch (plan.kind) {
    case TransformKind::kIdentity:
      return std::monostate{};
    case TransformKind::kRadial: {
      RadialSpec r;
      r.pole = pick_pole(seed, source.rows(), source.cols());
      r.params = RadialParams{plan.rays.value_or(source.rows()), plan.radii.value_or(source.cols()),
                              plan.fill};
      return r;
    }
    case TransformKind::kAffine:
      return AffineSpec{
          draw_params(AffineSampler{plan.affine_ranges, seed}, 0, source.rows(), source.cols()),
          plan.fill};
  }
  throw ParameterError("unknown transform kind");
}

std::string output_file_name(const std::string& source_stem, const TransformSpec& spec,
                             std::uint64_t aug_index, std::int64_t per_image) {
  int width = 1;
  for (std::int64_t n = per_image - 1; n >= 10; n /= 10) ++width;
  char index[32];
  std::snprintf(index, sizeof(index), "%0*llu", width,
                static_cast<unsigned long long>(aug_index));
  char digest[16];
  std::snprintf(digest, sizeof(digest), "%08x",
                static_cast<unsigned>(fnv1a64(transform_params_text(spec)) & 0xFFFFFFFFu));
  return source_stem + "__" + std::string(to_string(kind_of(spec))) + index + "_" + digest + ".pgm";
}

DatasetManifest expand(const LabeledDataset& dataset, const ExpansionPlan& plan) {
  plan.validate();
  if (dataset.items.empty()) throw ExpansionError("dataset has no items");

  std::error_code ec;
  fs::create_directories(plan.output_root, ec);
  if (ec || !fs::is_directory(plan.output_root)) {
    throw ExpansionError("cannot create output root " + plan.output_root.string() + ": " +
                         ec.message());
  }
  for (const std::string& cls : dataset.classes) {
    fs::create_directories(plan.output_root / cls, ec);
    if (ec) {
      throw ExpansionError("cannot create class directory " + (plan.output_root / cls).string() +
                           ": " + ec.message());
    }
  }

  std::set<std::pair<std::size_t, std::string>> stems;
  for (const DatasetItem& item : dataset.items) {
    if (item.class_index >= dataset.classes.size()) {
      throw ExpansionError("item " + item.path.string() + " has an invalid class index");
    }
    if (!stems.emplace(item.class_index, item.path.stem().string()).second) {
      throw ExpansionError("item " + item.path.string() +
                           " shares its file stem with another image of the same class");
    }
  }

  const auto per_image = static_cast<std::size_t>(plan.per_image);
  DatasetManifest manifest;
  manifest.classes = dataset.classes;
  manifest.records.resize(dataset.items.size() * per_image);

  detail::parallel_for(dataset.items.size(), plan.workers, [&](std::size_t s) {
    const DatasetItem& item = dataset.items[s];
    try {
      const Image source = read_image(item.path);
      const std::string& cls = dataset.classes[item.class_index];
      for (std::size_t a = 0; a < per_image; ++a) {
        ManifestRecord& rec = manifest.records[s * per_image + a];
        rec.source = item.path;
        rec.class_index = item.class_index;
        rec.transform = plan_item(plan, source, s, a);
        rec.master_seed = plan.master_seed;
        rec.item_seed = derive_item_seed(plan.master_seed, s, a);
        rec.source_index = s;
        rec.aug_index = a;
        rec.output = fs::path(cls) / output_file_name(item.path.stem().string(), rec.transform, a,
                                                      plan.per_image);
        write_image(apply_transform(rec.transform, source), plan.output_root / rec.output);
      }
    } catch (const Error& e) {
      throw ExpansionError("item " + item.path.string() + ": " + e.what());
    }
  });

  try {
    write_manifest(manifest, plan.output_root / kManifestFileName);
  } catch (const WriteError& e) {
    throw ExpansionError(e.what());
  }
  return manifest;
}

}  // namespace radaug
