#include "radaug/manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "radaug/errors.hpp"
#include "radaug/io.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace radaug {

namespace {

constexpr std::string_view kFormatName = "radaug-manifest";

ojson params_json(const TransformSpec& spec) {
  ojson j = ojson::object();
  if (const auto* r = std::get_if<RadialSpec>(&spec)) {
    j["u"] = r->pole.u;
    j["v"] = r->pole.v;
    j["rays"] = r->params.rays;
    j["radii"] = r->params.radii;
    j["fill"] = to_string(r->params.fill);
  } else if (const auto* a = std::get_if<AffineSpec>(&spec)) {
    const AffineParams& p = a->params;
    j["rotation"] = p.rotation;
    j["scale_x"] = p.scale_x;
    j["scale_y"] = p.scale_y;
    j["shear_x"] = p.shear_x;
    j["shear_y"] = p.shear_y;
    j["translate_r"] = p.translate_r;
    j["translate_c"] = p.translate_c;
    j["center_r"] = p.center_r;
    j["center_c"] = p.center_c;
    j["fill"] = to_string(a->fill);
  }
  return j;
}

TransformSpec spec_from_json(TransformKind kind, const ojson& j) {
  switch (kind) {
    case TransformKind::kIdentity:
      if (!j.is_object() || !j.empty()) throw ParameterError("identity takes no params");
      return std::monostate{};
    case TransformKind::kRadial: {
      RadialSpec r;
      r.pole = Pole{j.at("u").get<std::int64_t>(), j.at("v").get<std::int64_t>()};
      r.params.rays = j.at("rays").get<std::int64_t>();
      r.params.radii = j.at("radii").get<std::int64_t>();
      r.params.fill = parse_fill_mode(j.at("fill").get<std::string>());
      return r;
    }
    case TransformKind::kAffine: {
      AffineSpec a;
      AffineParams& p = a.params;
      p.rotation = j.at("rotation").get<double>();
      p.scale_x = j.at("scale_x").get<double>();
      p.scale_y = j.at("scale_y").get<double>();
      p.shear_x = j.at("shear_x").get<double>();
      p.shear_y = j.at("shear_y").get<double>();
      p.translate_r = j.at("translate_r").get<double>();
      p.translate_c = j.at("translate_c").get<double>();
      p.center_r = j.at("center_r").get<double>();
      p.center_c = j.at("center_c").get<double>();
      a.fill = parse_fill_mode(j.at("fill").get<std::string>());
      return a;
    }
  }
  throw ParameterError("unknown transform kind");
}

ojson record_json(const ManifestRecord& r) {
  ojson j;
  j["source"] = r.source.generic_string();
  j["class"] = r.class_index;
  j["kind"] = to_string(r.kind());
  j["params"] = params_json(r.transform);
  j["master_seed"] = r.master_seed;
  j["item_seed"] = r.item_seed;
  j["source_index"] = r.source_index;
  j["aug_index"] = r.aug_index;
  j["output"] = r.output.generic_string();
  return j;
}

}  // namespace

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kIdentity:
      return "identity";
    case TransformKind::kRadial:
      return "radial";
    case TransformKind::kAffine:
      return "affine";
  }
  return "unknown";
}

TransformKind parse_transform_kind(std::string_view text) {
  if (text == "identity") return TransformKind::kIdentity;
  if (text == "radial") return TransformKind::kRadial;
  if (text == "affine") return TransformKind::kAffine;
  throw ParameterError("unknown transform kind '" + std::string(text) +
                       "' (expected identity|radial|affine)");
}

TransformKind kind_of(const TransformSpec& spec) noexcept {
  if (std::holds_alternative<RadialSpec>(spec)) return TransformKind::kRadial;
  if (std::holds_alternative<AffineSpec>(spec)) return TransformKind::kAffine;
  return TransformKind::kIdentity;
}

Image apply_transform(const TransformSpec& spec, const Image& source) {
  if (const auto* r = std::get_if<RadialSpec>(&spec)) {
    return radial_transform(source, r->pole, r->params).image;
  }
  if (const auto* a = std::get_if<AffineSpec>(&spec)) {
    return affine_transform(source, a->params, a->fill);
  }
  return source;
}

std::string transform_params_text(const TransformSpec& spec) { return params_json(spec).dump(); }

std::string format_manifest(const DatasetManifest& m) {
  ojson header;
  header["format"] = kFormatName;
  header["version"] = kManifestVersion;
  header["classes"] = m.classes;
  std::string out = header.dump();
  out += '\n';
  for (const ManifestRecord& r : m.records) {
    out += record_json(r).dump();
    out += '\n';
  }
  return out;
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest m;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) throw ParseError(line_no, "empty line");

    try {
      const ojson j = ojson::parse(line);
      if (!have_header) {
        if (j.at("format").get<std::string>() != kFormatName) {
          throw ParseError(line_no, "not a manifest header");
        }
        const int version = j.at("version").get<int>();
        if (version != kManifestVersion) {
          throw ParseError(line_no, "unsupported manifest version " + std::to_string(version));
        }
        m.classes = j.at("classes").get<std::vector<std::string>>();
        have_header = true;
        continue;
      }
      ManifestRecord r;
      r.source = fs::path(j.at("source").get<std::string>());
      r.class_index = j.at("class").get<std::size_t>();
      const TransformKind kind = parse_transform_kind(j.at("kind").get<std::string>());
      r.transform = spec_from_json(kind, j.at("params"));
      r.master_seed = j.at("master_seed").get<std::uint64_t>();
      r.item_seed = j.at("item_seed").get<std::uint64_t>();
      r.source_index = j.at("source_index").get<std::uint64_t>();
      r.aug_index = j.at("aug_index").get<std::uint64_t>();
      r.output = fs::path(j.at("output").get<std::string>());
      if (r.class_index >= m.classes.size()) {
        throw ParseError(line_no, "class index " + std::to_string(r.class_index) +
                                      " out of range");
      }
      m.records.push_back(std::move(r));
    } catch (const ParseError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(1, "missing manifest header");
  return m;
}

void write_manifest(const DatasetManifest& m, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot open " + path.string() + " for writing");
  const std::string text = format_manifest(m);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw WriteError("failed writing " + path.string());
}

DatasetManifest read_manifest(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  return parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

Image replay_record(const ManifestRecord& record) {
  return apply_transform(record.transform, read_image(record.source));
}

std::vector<std::size_t> verify_replay(const DatasetManifest& m, const fs::path& root) {
  std::vector<std::size_t> mismatched;
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    const ManifestRecord& r = m.records[i];
    const fs::path output = r.output.is_absolute() ? r.output : root / r.output;
    bool same = false;
    try {
      const Image replayed = replay_record(r);
      // PNG bytes depend on the codec build; only P5 is compared byte-wise.
      same = output.extension() == ".pgm" ? encode_pgm(replayed) == read_file_bytes(output)
                                          : replayed == read_image(output);
    } catch (const Error&) {
      same = false;
    }
    if (!same) mismatched.push_back(i);
  }
  return mismatched;
}

}  // namespace radaug
