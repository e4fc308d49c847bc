// radaug: radial-transform augmentation toolkit.
//
//   radaug transform --kind radial --input x.pgm --pole 170,50 --out y.pgm
//   radaug expand --kind radial --in-dir data/train --out-dir out/d3 --seed 42
//   radaug montage a.pgm b.pgm --out grid.pgm
//   radaug eval --train-manifest out/d3/manifest.jsonl --test-dir data/test
//
// Exit codes: 0 success, 2 usage or validation error, 3 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "radaug/affine.hpp"
#include "radaug/errors.hpp"
#include "radaug/eval.hpp"
#include "radaug/expander.hpp"
#include "radaug/io.hpp"
#include "radaug/radial.hpp"
#include "radaug/seed.hpp"

namespace fs = std::filesystem;
using namespace radaug;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kIo = 3;

constexpr double kDegToRad = std::numbers::pi / 180.0;

/// Error raised for invalid flag values after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<Pole> parse_pole(const std::string& text) {
  if (text == "random") return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--pole expects u,v or random");
  try {
    std::size_t used_u = 0;
    std::size_t used_v = 0;
    const std::string us = text.substr(0, comma);
    const std::string vs = text.substr(comma + 1);
    const long long u = std::stoll(us, &used_u);
    const long long v = std::stoll(vs, &used_v);
    if (used_u != us.size() || used_v != vs.size()) throw UsageError("bad --pole");
    return Pole{u, v};
  } catch (const std::logic_error&) {
    throw UsageError("--pole expects integers u,v, got '" + text + "'");
  }
}

/// "diag" selects diagonal_radii(); empty means the default (source cols).
std::int64_t resolve_radii(const std::string& flag, const Image& img) {
  if (flag.empty()) return img.cols();
  if (flag == "diag") return diagonal_radii(img);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(flag, &used);
    if (used != flag.size() || v < 1) throw std::invalid_argument(flag);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("--radii expects a positive integer or 'diag', got '" + flag + "'");
  }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const std::uint64_t lo = std::stoull(text.substr(0, dots));
      const std::uint64_t hi = std::stoull(text.substr(dots + 2));
      if (hi < lo || hi - lo >= 100000) throw UsageError("bad --seeds range '" + text + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      return seeds;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
  } catch (const std::logic_error&) {
    throw UsageError("--seeds expects a..b or a,b,c; got '" + text + "'");
  }
  if (seeds.empty()) throw UsageError("--seeds is empty");
  return seeds;
}

std::string describe(const AffineParams& p) {
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "rotation=%.17g scale_x=%.17g scale_y=%.17g shear_x=%.17g shear_y=%.17g "
                "translate_r=%.17g translate_c=%.17g center_r=%.17g center_c=%.17g",
                p.rotation, p.scale_x, p.scale_y, p.shear_x, p.shear_y, p.translate_r,
                p.translate_c, p.center_r, p.center_c);
  return buf;
}

char hex_digit(unsigned v) { return "0123456789abcdef"[v & 0xF]; }

std::string hex64(std::uint64_t v) {
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = hex_digit(static_cast<unsigned>(v));
  return s;
}

// Maps library errors to exit codes. Validation problems are usage errors,
// everything touching files is an I/O error.
int report_error(const std::exception& e, int code) {
  std::cerr << "radaug: error: " << e.what() << "\n";
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    return report_error(e, kUsage);
  } catch (const ParameterError& e) {
    return report_error(e, kUsage);
  } catch (const ConfigurationError& e) {
    return report_error(e, kUsage);
  } catch (const LoadError& e) {
    return report_error(e, kUsage);
  } catch (const ParseError& e) {
    return report_error(e, kUsage);
  } catch (const EvaluationError& e) {
    return report_error(e, kUsage);
  } catch (const Error& e) {
    return report_error(e, kIo);
  } catch (const fs::filesystem_error& e) {
    return report_error(e, kIo);
  }
}

// ---------------------------------------------------------------- transform

struct AffineFlags {
  std::optional<double> rotation_deg;
  std::optional<double> scale_x;
  std::optional<double> scale_y;
  std::optional<double> shear_x;
  std::optional<double> shear_y;
  std::optional<double> translate_r;
  std::optional<double> translate_c;

  bool any() const {
    return rotation_deg || scale_x || scale_y || shear_x || shear_y || translate_r || translate_c;
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--rotation-deg", rotation_deg, "Affine rotation in degrees");
    cmd->add_option("--scale-x", scale_x, "Affine scale along rows");
    cmd->add_option("--scale-y", scale_y, "Affine scale along columns");
    cmd->add_option("--shear-x", shear_x, "Affine shear (row += shear_x * col)");
    cmd->add_option("--shear-y", shear_y, "Affine shear (col += shear_y * row)");
    cmd->add_option("--translate-r", translate_r, "Affine translation in rows");
    cmd->add_option("--translate-c", translate_c, "Affine translation in columns");
  }

  /// Explicit fields over identity, or a seeded draw when no field is set.
  AffineParams resolve(const Image& img, std::uint64_t seed, const AffineRanges& ranges) const {
    if (!any()) return draw_params(AffineSampler{ranges, seed}, 0, img.rows(), img.cols());
    AffineParams p = AffineParams::identity_for(img.rows(), img.cols());
    p.rotation = rotation_deg.value_or(0.0) * kDegToRad;
    p.scale_x = scale_x.value_or(1.0);
    p.scale_y = scale_y.value_or(1.0);
    p.shear_x = shear_x.value_or(0.0);
    p.shear_y = shear_y.value_or(0.0);
    p.translate_r = translate_r.value_or(0.0);
    p.translate_c = translate_c.value_or(0.0);
    return p;
  }
};

struct TransformOptions {
  std::string kind = "radial";
  fs::path input;
  fs::path output;
  std::string pole = "random";
  std::uint64_t seed = 0;
  std::optional<std::int64_t> rays;
  std::string radii;
  std::string fill = "zero";
  AffineFlags affine;
};

int run_transform(const TransformOptions& o) {
  return guarded([&] {
    const TransformKind kind = parse_transform_kind(o.kind);
    if (kind == TransformKind::kIdentity) throw UsageError("--kind must be radial or affine");
    const FillMode fill = parse_fill_mode(o.fill);
    const std::optional<Pole> explicit_pole = parse_pole(o.pole);
    const Image img = read_image(o.input);

    std::cout << "resolved: command=transform kind=" << o.kind << " input=" << o.input.string()
              << " out=" << o.output.string() << " size=" << img.rows() << "x" << img.cols()
              << " fill=" << o.fill << " seed=" << o.seed << "\n";

    Image result = img;
    if (kind == TransformKind::kRadial) {
      const Pole pole = explicit_pole.value_or(pick_pole(o.seed, img.rows(), img.cols()));
      const RadialParams params{o.rays.value_or(img.rows()), resolve_radii(o.radii, img), fill};
      std::cout << "resolved: pole=" << pole.u << "," << pole.v
                << (explicit_pole ? "" : " (random)") << " rays=" << params.rays
                << " radii=" << params.radii << "\n";
      result = radial_transform(img, pole, params).image;
    } else {
      const AffineParams p = o.affine.resolve(img, o.seed, AffineRanges{});
      std::cout << "resolved: affine " << describe(p) << (o.affine.any() ? "" : " (random)")
                << "\n";
      result = affine_transform(img, p, fill);
    }
    write_image(result, o.output);
    std::cout << "wrote " << o.output.string() << " (" << result.rows() << "x" << result.cols()
              << ")\n";
    return kOk;
  });
}

// ------------------------------------------------------------------- expand

struct RangeFlags {
  double rotation_max_deg = 30.0;
  double scale_min = 0.8;
  double scale_max = 1.2;
  double shear_max = 0.2;
  double translate_max = 0.1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--rotation-max-deg", rotation_max_deg, "Affine rotation range +/- degrees")
        ->capture_default_str();
    cmd->add_option("--scale-min", scale_min, "Affine minimum scale")->capture_default_str();
    cmd->add_option("--scale-max", scale_max, "Affine maximum scale")->capture_default_str();
    cmd->add_option("--shear-max", shear_max, "Affine shear range +/-")->capture_default_str();
    cmd->add_option("--translate-max", translate_max,
                    "Affine translation range +/- as a fraction of the image extent")
        ->capture_default_str();
  }

  AffineRanges resolve() const {
    AffineRanges r;
    r.rotation_min = -rotation_max_deg * kDegToRad;
    r.rotation_max = rotation_max_deg * kDegToRad;
    r.scale_min = scale_min;
    r.scale_max = scale_max;
    r.shear_min = -shear_max;
    r.shear_max = shear_max;
    r.translate_min = -translate_max;
    r.translate_max = translate_max;
    r.validate();
    return r;
  }
};

struct ExpandOptions {
  std::string kind;
  fs::path in_dir;
  fs::path out_dir;
  std::optional<std::int64_t> per_image;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> rays;
  std::optional<std::int64_t> radii;
  std::string fill = "zero";
  int workers = 1;
  RangeFlags ranges;
};

int run_expand(const ExpandOptions& o) {
  return guarded([&] {
    ExpansionPlan plan;
    plan.kind = parse_transform_kind(o.kind);
    plan.per_image = o.per_image.value_or(plan.kind == TransformKind::kIdentity ? 1 : 100);
    plan.master_seed = o.seed;
    plan.rays = o.rays;
    plan.radii = o.radii;
    plan.fill = parse_fill_mode(o.fill);
    plan.affine_ranges = o.ranges.resolve();
    plan.output_root = o.out_dir;
    plan.workers = o.workers;
    plan.validate();

    const LabeledDataset ds = load_dataset(o.in_dir);
    std::cout << "resolved: command=expand kind=" << o.kind << " in_dir=" << o.in_dir.string()
              << " out_dir=" << o.out_dir.string() << " per_image=" << plan.per_image
              << " seed=" << plan.master_seed << " fill=" << o.fill
              << " rays=" << (o.rays ? std::to_string(*o.rays) : "source-rows")
              << " radii=" << (o.radii ? std::to_string(*o.radii) : "source-cols")
              << " workers=" << plan.workers << "\n";
    if (plan.kind == TransformKind::kAffine) {
      std::cout << "resolved: affine_ranges rotation=+/-" << o.ranges.rotation_max_deg
                << "deg scale=[" << o.ranges.scale_min << "," << o.ranges.scale_max
                << "] shear=+/-" << o.ranges.shear_max << " translate=+/-"
                << o.ranges.translate_max << "\n";
    }

    const DatasetManifest m = expand(ds, plan);
    std::vector<std::size_t> per_class(m.classes.size(), 0);
    for (const ManifestRecord& r : m.records) ++per_class[r.class_index];
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
      std::cout << "class " << m.classes[c] << ": " << per_class[c] << "\n";
    }
    std::cout << "records: " << m.records.size() << "\n";
    std::cout << "manifest: " << (o.out_dir / kManifestFileName).string() << "\n";
    std::cout << "tree hash: " << hex64(tree_hash(o.out_dir)) << "\n";
    return kOk;
  });
}

// ------------------------------------------------------------------ montage

struct MontageOptions {
  std::vector<fs::path> inputs;
  fs::path output;
  std::int64_t cell = 64;
  std::uint64_t seed = 0;
  std::string pole = "random";
  std::string fill = "zero";
};

int run_montage(const MontageOptions& o) {
  return guarded([&] {
    if (o.inputs.empty()) throw UsageError("montage needs at least one input");
    if (o.cell < 1) throw UsageError("--cell must be >= 1");
    const FillMode fill = parse_fill_mode(o.fill);
    const std::optional<Pole> explicit_pole = parse_pole(o.pole);
    std::cout << "resolved: command=montage inputs=" << o.inputs.size() << " cell=" << o.cell
              << " seed=" << o.seed << " pole=" << o.pole << " fill=" << o.fill << "\n";

    const auto n = static_cast<std::int64_t>(o.inputs.size());
    Image grid(3 * o.cell, n * o.cell);
    auto paste = [&](const Image& cell_img, std::int64_t row, std::int64_t col) {
      const Image small = resize_nearest(cell_img, o.cell, o.cell);
      for (std::int64_t r = 0; r < o.cell; ++r) {
        for (std::int64_t c = 0; c < o.cell; ++c) {
          grid(row * o.cell + r, col * o.cell + c) = small(r, c);
        }
      }
    };

    for (std::int64_t i = 0; i < n; ++i) {
      const fs::path& path = o.inputs[static_cast<std::size_t>(i)];
      const Image img = read_image(path);
      // Same randomness as `transform --seed` so cells can be reproduced.
      const AffineParams ap = draw_params(AffineSampler{AffineRanges{}, o.seed}, 0, img.rows(),
                                          img.cols());
      const Pole pole = explicit_pole.value_or(pick_pole(o.seed, img.rows(), img.cols()));
      std::cout << "resolved: " << path.string() << " pole=" << pole.u << "," << pole.v
                << " affine " << describe(ap) << "\n";
      paste(img, 0, i);
      paste(affine_transform(img, ap, fill), 1, i);
      paste(radial_transform(img, pole, RadialParams::for_image(img, fill)).image, 2, i);
    }
    write_image(grid, o.output);
    std::cout << "wrote " << o.output.string() << " (" << grid.rows() << "x" << grid.cols()
              << ")\n";
    return kOk;
  });
}

// --------------------------------------------------------------------- eval

struct EvalOptions {
  fs::path train_manifest;
  fs::path test_dir;
  std::string model = "centroid";
  std::size_t k = 5;
  double temperature = 1.0;
  std::int64_t feature_side = 16;
  std::size_t poles = 32;
  std::uint64_t seed = 0;
  std::string seeds;
  fs::path report;
  int workers = 1;
};

int run_eval(const EvalOptions& o) {
  // Everything up to the experiment itself is input validation.
  DatasetManifest train;
  LabeledDataset test;
  ExperimentConfig config;
  std::vector<std::uint64_t> seeds;
  const int setup = guarded([&] {
    config.model.kind = parse_model_kind(o.model);
    config.model.k = o.k;
    config.model.temperature = o.temperature;
    config.model.feature_side = o.feature_side;
    config.model.make();
    config.poles_per_image = o.poles;
    config.workers = o.workers;
    if (o.workers < 1) throw UsageError("--workers must be >= 1");
    seeds = o.seeds.empty() ? std::vector<std::uint64_t>{o.seed} : parse_seed_list(o.seeds);
    try {
      train = read_manifest(o.train_manifest);
    } catch (const DecodeError& e) {
      throw UsageError(e.what());
    }
    test = load_dataset(o.test_dir);
    if (train.classes != test.classes) {
      throw ConfigurationError("train classes and test classes differ");
    }
    return kOk;
  });
  if (setup != kOk) return setup;

  return guarded([&] {
    std::cout << "resolved: command=eval train_manifest=" << o.train_manifest.string()
              << " test_dir=" << o.test_dir.string() << " model=" << o.model << " k=" << o.k
              << " temperature=" << o.temperature << " feature_side=" << o.feature_side
              << " poles=" << o.poles << " workers=" << o.workers << " seeds=";
    for (std::size_t i = 0; i < seeds.size(); ++i) std::cout << (i ? "," : "") << seeds[i];
    std::cout << "\n";

    const fs::path train_root = o.train_manifest.parent_path();
    std::vector<EvalReport> reports;
    std::string structured;
    for (std::uint64_t seed : seeds) {
      config.seed = seed;
      EvalReport rep = run_experiment(train, train_root, test, config);
      std::cout << "\nseed " << seed << " (" << rep.pipeline << ")\n" << format_report_table(rep);
      structured += format_report(rep);
      reports.push_back(std::move(rep));
    }
    if (reports.size() > 1) {
      std::vector<double> acc;
      std::vector<double> conf;
      for (const EvalReport& r : reports) {
        acc.push_back(r.macro_accuracy);
        conf.push_back(r.macro_confidence);
      }
      const MeanStd a = mean_std(acc);
      const MeanStd c = mean_std(conf);
      char line[160];
      std::snprintf(line, sizeof(line),
                    "aggregate over %zu seeds: accuracy %.2f±%.2f%% confidence %.2f±%.2f%%\n",
                    reports.size(), 100 * a.mean, 100 * a.std, 100 * c.mean, 100 * c.std);
      std::cout << "\n" << format_aggregate_table(reports) << line;
    }
    if (!o.report.empty()) {
      std::ofstream out(o.report, std::ios::binary | std::ios::trunc);
      out << structured;
      out.close();
      if (!out) throw WriteError("cannot write report " + o.report.string());
      std::cout << "report: " << o.report.string() << "\n";
    }
    return kOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial-transform image augmentation toolkit"};
  app.require_subcommand(1);

  TransformOptions topt;
  auto* transform = app.add_subcommand("transform", "Transform a single image");
  transform->add_option("--kind", topt.kind, "radial | affine")->capture_default_str();
  transform->add_option("--input", topt.input, "Input image (PGM P5 or 8-bit gray PNG)")
      ->required();
  transform->add_option("--out", topt.output, "Output image (.pgm or .png)")->required();
  transform->add_option("--pole", topt.pole, "Pole as u,v (row,col) or 'random'")
      ->capture_default_str();
  transform->add_option("--seed", topt.seed, "Seed for random pole / affine draw")
      ->capture_default_str();
  transform->add_option("--rays", topt.rays, "Ray count (default: source rows)");
  transform->add_option("--radii", topt.radii,
                        "Radius count, or 'diag' for the image diagonal (default: source cols)");
  transform->add_option("--fill", topt.fill, "zero | clamp")->capture_default_str();
  topt.affine.add_to(transform);

  ExpandOptions eopt;
  auto* expand_cmd = app.add_subcommand("expand", "Build an augmented training set");
  expand_cmd->add_option("--kind", eopt.kind, "identity | radial | affine")->required();
  expand_cmd->add_option("--in-dir", eopt.in_dir, "Dataset root (one directory per class)")
      ->required();
  expand_cmd->add_option("--out-dir", eopt.out_dir, "Output root")->required();
  expand_cmd->add_option("--per-image", eopt.per_image,
                         "Augmentations per original (default 100; identity: 1)");
  expand_cmd->add_option("--seed", eopt.seed, "Master seed")->capture_default_str();
  expand_cmd->add_option("--rays", eopt.rays, "Radial ray count (default: source rows)");
  expand_cmd->add_option("--radii", eopt.radii, "Radial radius count (default: source cols)");
  expand_cmd->add_option("--fill", eopt.fill, "zero | clamp")->capture_default_str();
  expand_cmd->add_option("--workers", eopt.workers, "Worker threads")->capture_default_str();
  eopt.ranges.add_to(expand_cmd);

  MontageOptions mopt;
  auto* montage = app.add_subcommand("montage", "Grid of originals, affine and radial rows");
  montage->add_option("inputs", mopt.inputs, "Input images")->required();
  montage->add_option("--out", mopt.output, "Output image")->required();
  montage->add_option("--cell", mopt.cell, "Cell size in pixels")->capture_default_str();
  montage->add_option("--seed", mopt.seed, "Seed for poles and affine draws")
      ->capture_default_str();
  montage->add_option("--pole", mopt.pole, "Pole as u,v or 'random'")->capture_default_str();
  montage->add_option("--fill", mopt.fill, "zero | clamp")->capture_default_str();

  EvalOptions vopt;
  auto* eval = app.add_subcommand("eval", "Train a stand-in classifier and score a test set");
  eval->add_option("--train-manifest", vopt.train_manifest, "Manifest written by expand")
      ->required();
  eval->add_option("--test-dir", vopt.test_dir, "Test dataset root")->required();
  eval->add_option("--model", vopt.model, "centroid | knn")->capture_default_str();
  eval->add_option("--k", vopt.k, "Neighbours for knn")->capture_default_str();
  eval->add_option("--temperature", vopt.temperature, "Centroid softmax temperature")
      ->capture_default_str();
  eval->add_option("--feature-side", vopt.feature_side, "Feature grid side")
      ->capture_default_str();
  eval->add_option("--poles", vopt.poles, "Test-time poles per image (radial pipelines)")
      ->capture_default_str();
  eval->add_option("--seed", vopt.seed, "Seed for test-time poles")->capture_default_str();
  eval->add_option("--seeds", vopt.seeds, "Seed list a..b or a,b,c (overrides --seed)");
  eval->add_option("--report", vopt.report, "Write the structured report here");
  eval->add_option("--workers", vopt.workers, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (transform->parsed()) return run_transform(topt);
  if (expand_cmd->parsed()) return run_expand(eopt);
  if (montage->parsed()) return run_montage(mopt);
  return run_eval(vopt);
}
