#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "radaug/image.hpp"

namespace radaug {

/// Reads an 8-bit grayscale image. Binary PGM (P5, maxval 255) and 8-bit
/// grayscale PNG are accepted; anything else raises DecodeError.
Image read_image(const std::filesystem::path& path);

/// Decodes a P5 buffer. Header comments are tolerated on input.
Image decode_pgm(std::span<const std::uint8_t> bytes);

/// Canonical P5: "P5\n<cols> <rows>\n255\n" followed by the raster.
std::vector<std::uint8_t> encode_pgm(const Image& img);

/// Writes PNG when the extension is ".png" (case-insensitive), canonical P5
/// otherwise. Throws WriteError on I/O failure.
void write_image(const Image& img, const std::filesystem::path& path);

/// Raw file contents; throws DecodeError(kMissingFile) when unreadable.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

/// True for the extensions read_image understands (.pgm, .png).
bool is_image_path(const std::filesystem::path& path);

struct DatasetItem {
  std::size_t class_index = 0;
  std::filesystem::path path;

  friend bool operator==(const DatasetItem&, const DatasetItem&) = default;
};

/// Class names come from the sub-directory names under the root.
struct LabeledDataset {
  std::vector<std::string> classes;  // lexicographic
  std::vector<DatasetItem> items;    // sorted by path

  /// Number of items per class, indexed like `classes`.
  std::vector<std::size_t> class_counts() const;
};

/// Loads root/<class>/<image>. Hidden entries and non-image files are
/// skipped. Throws LoadError for a missing/empty root, a class directory
/// without images, or a directory that cannot be listed.
LabeledDataset load_dataset(const std::filesystem::path& root);

/// Order-sensitive 64-bit FNV-1a digest over every regular file below root
/// (relative path, then contents), files visited in sorted path order.
std::uint64_t tree_hash(const std::filesystem::path& root);

/// FNV-1a 64 of a byte string.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

}  // namespace radaug
