#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "radaug/affine.hpp"
#include "radaug/io.hpp"
#include "radaug/manifest.hpp"

namespace radaug {

/// How to build an augmented training set from a labelled dataset.
struct ExpansionPlan {
  TransformKind kind = TransformKind::kIdentity;
  std::int64_t per_image = 1;
  std::uint64_t master_seed = 0;

  // Radial grid; unset means rays = source rows, radii = source cols.
  std::optional<std::int64_t> rays;
  std::optional<std::int64_t> radii;
  FillMode fill = FillMode::kZero;

  AffineRanges affine_ranges;

  std::filesystem::path output_root;
  int workers = 1;

  /// Throws ParameterError: per_image < 1, identity with per_image != 1,
  /// non-positive grid overrides, bad affine ranges, workers < 1.
  void validate() const;
};

/// Transform applied to augmentation `aug_index` of source `source_index`.
/// Randomness comes only from derive_item_seed(master_seed, source, aug).
TransformSpec plan_item(const ExpansionPlan& plan, const Image& source, std::uint64_t source_index,
                        std::uint64_t aug_index);

/// File name "<stem>__<kind><index>_<digest>.pgm" with a zero-padded index
/// and an 8-hex-digit digest of the params text.
std::string output_file_name(const std::string& source_stem, const TransformSpec& spec,
                             std::uint64_t aug_index, std::int64_t per_image);

/// Writes items x per_image images under plan.output_root/<class>/ plus
/// plan.output_root/manifest.jsonl. Record order is (source index,
/// augmentation index) whatever the worker count. Throws ExpansionError
/// naming the failing item.
DatasetManifest expand(const LabeledDataset& dataset, const ExpansionPlan& plan);

}  // namespace radaug
