#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "radaug/affine.hpp"
#include "radaug/image.hpp"
#include "radaug/radial.hpp"

namespace radaug {

enum class TransformKind : std::uint8_t { kIdentity, kRadial, kAffine };

std::string_view to_string(TransformKind kind);
/// Parses "identity" / "radial" / "affine"; throws ParameterError otherwise.
TransformKind parse_transform_kind(std::string_view text);

struct RadialSpec {
  Pole pole;
  RadialParams params;

  friend bool operator==(const RadialSpec&, const RadialSpec&) = default;
};

struct AffineSpec {
  AffineParams params;
  FillMode fill = FillMode::kZero;

  friend bool operator==(const AffineSpec&, const AffineSpec&) = default;
};

/// monostate is the identity transform.
using TransformSpec = std::variant<std::monostate, RadialSpec, AffineSpec>;

TransformKind kind_of(const TransformSpec& spec) noexcept;

/// Applies a recorded transform to its source image.
Image apply_transform(const TransformSpec& spec, const Image& source);

/// One augmented image. `output` is relative to the manifest's directory.
struct ManifestRecord {
  std::filesystem::path source;
  std::size_t class_index = 0;
  TransformSpec transform;
  std::uint64_t master_seed = 0;
  std::uint64_t item_seed = 0;
  std::uint64_t source_index = 0;
  std::uint64_t aug_index = 0;
  std::filesystem::path output;

  TransformKind kind() const noexcept { return kind_of(transform); }

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct DatasetManifest {
  std::vector<std::string> classes;
  std::vector<ManifestRecord> records;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

inline constexpr int kManifestVersion = 1;
inline constexpr std::string_view kManifestFileName = "manifest.jsonl";

/// Canonical params text of a transform, as stored in the manifest.
std::string transform_params_text(const TransformSpec& spec);

/// JSON Lines: a header {"format","version","classes"} followed by one
/// object per record with a fixed key order.
std::string format_manifest(const DatasetManifest& m);
/// Throws ParseError carrying the offending line number.
DatasetManifest parse_manifest(std::string_view text);

void write_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Re-runs a record on its source file.
Image replay_record(const ManifestRecord& record);

/// Indices of records whose replay does not reproduce the stored file
/// (relative outputs resolve against `root`) byte for byte.
std::vector<std::size_t> verify_replay(const DatasetManifest& m, const std::filesystem::path& root);

}  // namespace radaug
