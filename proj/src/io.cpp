#include "radaug/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "radaug/errors.hpp"

namespace fs = std::filesystem;

namespace radaug {

namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

bool is_hidden(const fs::path& path) {
  const std::string name = path.filename().string();
  return !name.empty() && name.front() == '.';
}

// Minimal cursor over a PGM header: whitespace and '#' comments between
// tokens, decimal fields.
class HeaderCursor {
 public:
  explicit HeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t position() const noexcept { return pos_; }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::uint64_t read_uint(const char* field) {
    skip_separators();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw DecodeError(DecodeErrorKind::kMalformedHeader, std::string("PGM ") + field +
                                                               " is not a decimal number");
    }
    std::uint64_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFULL) {
        throw DecodeError(DecodeErrorKind::kMalformedHeader, std::string("PGM ") + field +
                                                                 " out of range");
      }
      ++pos_;
    }
    return value;
  }

  /// Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw DecodeError(DecodeErrorKind::kMalformedHeader,
                        "PGM header must end with a whitespace byte");
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Image decode_png(std::span<const std::uint8_t> bytes) {
  // IHDR sits right after the signature: length(4) type(4) width(4) height(4)
  // depth(1) colour type(1).
  if (bytes.size() < 33 || std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) {
    throw DecodeError(DecodeErrorKind::kMalformedHeader, "PNG without a leading IHDR chunk");
  }
  const std::uint8_t depth = bytes[24];
  const std::uint8_t colour = bytes[25];
  if (colour != PNG_COLOR_TYPE_GRAY) {
    throw DecodeError(DecodeErrorKind::kUnsupportedFormat,
                      "PNG colour type " + std::to_string(colour) + " is not grayscale");
  }
  if (depth != 8) {
    throw DecodeError(DecodeErrorKind::kUnsupportedDepth,
                      "PNG bit depth " + std::to_string(depth) + " (only 8 is supported)");
  }

  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError(DecodeErrorKind::kMalformedHeader, "PNG: " + msg);
  }
  image.format = PNG_FORMAT_GRAY;
  const auto rows = static_cast<std::int64_t>(image.height);
  const auto cols = static_cast<std::int64_t>(image.width);
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError(DecodeErrorKind::kTruncatedData, "PNG: " + msg);
  }
  return Image(rows, cols, std::move(pixels));
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.cols());
  image.height = static_cast<png_uint_32>(img.rows());
  image.format = PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels().data(), 0, nullptr)) {
    throw WriteError(std::string("PNG encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels().data(), 0, nullptr)) {
    throw WriteError(std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError(DecodeErrorKind::kMissingFile, path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

Image decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw DecodeError(DecodeErrorKind::kUnsupportedFormat, "not a PNM stream");
  }
  if (bytes[1] != '5') {
    throw DecodeError(DecodeErrorKind::kUnsupportedFormat,
                      std::string("PNM variant P") + static_cast<char>(bytes[1]) +
                          " (only binary P5 is supported)");
  }
  HeaderCursor cur(bytes.subspan(2));
  const std::uint64_t cols = cur.read_uint("width");
  const std::uint64_t rows = cur.read_uint("height");
  const std::uint64_t maxval = cur.read_uint("maxval");
  cur.expect_single_space();
  if (rows == 0 || cols == 0) {
    throw DecodeError(DecodeErrorKind::kMalformedHeader, "PGM with zero width or height");
  }
  if (maxval == 0 || maxval > 65535) {
    throw DecodeError(DecodeErrorKind::kMalformedHeader,
                      "PGM maxval " + std::to_string(maxval) + " out of range");
  }
  if (maxval != 255) {
    throw DecodeError(DecodeErrorKind::kUnsupportedDepth,
                      "PGM maxval " + std::to_string(maxval) + " (only 255 is supported)");
  }
  const std::size_t offset = 2 + cur.position();
  const std::uint64_t area = rows * cols;
  if (bytes.size() - offset < area) {
    throw DecodeError(DecodeErrorKind::kTruncatedData,
                      "PGM raster has " + std::to_string(bytes.size() - offset) +
                          " bytes, expected " + std::to_string(area));
  }
  const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(offset);
  return Image(static_cast<std::int64_t>(rows), static_cast<std::int64_t>(cols),
               std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(area)));
}

std::vector<std::uint8_t> encode_pgm(const Image& img) {
  const std::string header =
      "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + img.size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

Image read_image(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  try {
    if (bytes.size() >= kPngSignature.size() &&
        std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
      return decode_png(bytes);
    }
    return decode_pgm(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(e.kind(), path.string() + ": " + e.detail());
  }
}

void write_image(const Image& img, const fs::path& path) {
  const std::vector<std::uint8_t> bytes =
      lower_extension(path) == ".png" ? encode_png(img) : encode_pgm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw WriteError("failed writing " + path.string());
}

bool is_image_path(const fs::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".pgm" || ext == ".png";
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(classes.size(), 0);
  for (const DatasetItem& item : items) ++counts.at(item.class_index);
  return counts;
}

LabeledDataset load_dataset(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw LoadError("dataset root " + root.string() + " is not a directory");
  }

  LabeledDataset ds;
  try {
    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_directory() && !is_hidden(entry.path())) class_dirs.push_back(entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    if (class_dirs.empty()) {
      throw LoadError("dataset root " + root.string() + " has no class directories");
    }

    for (const fs::path& dir : class_dirs) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && !is_hidden(entry.path()) && is_image_path(entry.path())) {
          files.push_back(entry.path());
        }
      }
      if (files.empty()) throw LoadError("class directory " + dir.string() + " has no images");
      std::sort(files.begin(), files.end());
      const std::size_t index = ds.classes.size();
      ds.classes.push_back(dir.filename().string());
      for (fs::path& f : files) ds.items.push_back(DatasetItem{index, std::move(f)});
    }
  } catch (const fs::filesystem_error& e) {
    throw LoadError(std::string("cannot list dataset: ") + e.what());
  }
  return ds;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis) noexcept {
  return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()),
                 basis);
}

std::uint64_t tree_hash(const fs::path& root) {
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files.emplace_back(fs::relative(entry.path(), root).generic_string(), entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [rel, path] : files) {
    h = fnv1a64(rel, h);
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    const std::string size = std::string(1, '\0') + std::to_string(bytes.size()) + '\0';
    h = fnv1a64(size, h);
    h = fnv1a64(bytes, h);
  }
  return h;
}

}  // namespace radaug
