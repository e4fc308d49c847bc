#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>
#include <string>

#include "radaug/affine.hpp"
#include "radaug/errors.hpp"
#include "radaug/eval.hpp"
#include "radaug/expander.hpp"
#include "radaug/io.hpp"
#include "radaug/radial.hpp"
#include "radaug/seed.hpp"

namespace py = pybind11;
using namespace radaug;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Image to_image(const U8Array& a) {
  if (a.ndim() != 2) throw ParameterError("expected a 2-D uint8 array");
  Image img(a.shape(0), a.shape(1));
  std::memcpy(img.pixels().data(), a.data(), img.size());
  return img;
}

U8Array to_array(const Image& img) {
  U8Array out({img.rows(), img.cols()});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.size());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial-transform image augmentation";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
  py::register_exception<AddressingError>(m, "AddressingError", error.ptr());
  py::register_exception<DecodeError>(m, "DecodeError", error.ptr());
  py::register_exception<LoadError>(m, "LoadError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ExpansionError>(m, "ExpansionError", error.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", error.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", error.ptr());

  m.def(
      "radial_transform",
      [](const U8Array& img, std::pair<std::int64_t, std::int64_t> pole,
         std::optional<std::int64_t> rays, std::optional<std::int64_t> radii,
         const std::string& fill) {
        const Image src = to_image(img);
        const RadialParams params{rays.value_or(src.rows()), radii.value_or(src.cols()),
                                  parse_fill_mode(fill)};
        return to_array(radial_transform(src, Pole{pole.first, pole.second}, params).image);
      },
      py::arg("image"), py::arg("pole"), py::arg("rays") = py::none(),
      py::arg("radii") = py::none(), py::arg("fill") = "zero",
      "Radial transform about pole (row, col). Output is rays x radii.");

  m.def("diagonal_radii", [](const U8Array& img) { return diagonal_radii(to_image(img)); });

  m.def(
      "affine_transform",
      [](const U8Array& img, double rotation, double scale_x, double scale_y, double shear_x,
         double shear_y, double translate_r, double translate_c, const std::string& fill) {
        const Image src = to_image(img);
        AffineParams p = AffineParams::identity_for(src.rows(), src.cols());
        p.rotation = rotation;
        p.scale_x = scale_x;
        p.scale_y = scale_y;
        p.shear_x = shear_x;
        p.shear_y = shear_y;
        p.translate_r = translate_r;
        p.translate_c = translate_c;
        return to_array(affine_transform(src, p, parse_fill_mode(fill)));
      },
      py::arg("image"), py::arg("rotation") = 0.0, py::arg("scale_x") = 1.0,
      py::arg("scale_y") = 1.0, py::arg("shear_x") = 0.0, py::arg("shear_y") = 0.0,
      py::arg("translate_r") = 0.0, py::arg("translate_c") = 0.0, py::arg("fill") = "zero",
      "Affine warp about the image centre; rotation in radians.");

  m.def("derive_item_seed", &derive_item_seed, py::arg("master"), py::arg("source"),
        py::arg("augmentation"));
  m.def(
      "pick_pole",
      [](std::uint64_t seed, std::int64_t rows, std::int64_t cols) {
        const Pole p = pick_pole(seed, rows, cols);
        return std::make_pair(p.u, p.v);
      },
      py::arg("seed"), py::arg("rows"), py::arg("cols"));

  m.def(
      "read_image", [](const std::filesystem::path& path) { return to_array(read_image(path)); },
      py::arg("path"));
  m.def(
      "write_image",
      [](const U8Array& img, const std::filesystem::path& path) { write_image(to_image(img), path); },
      py::arg("image"), py::arg("path"));
  m.def("tree_hash", &tree_hash, py::arg("root"));

  m.def(
      "expand",
      [](const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
         const std::string& kind, std::int64_t per_image, std::uint64_t seed, int workers) {
        ExpansionPlan plan;
        plan.kind = parse_transform_kind(kind);
        plan.per_image = per_image;
        plan.master_seed = seed;
        plan.output_root = out_dir;
        plan.workers = workers;
        py::gil_scoped_release release;
        return expand(load_dataset(in_dir), plan).records.size();
      },
      py::arg("in_dir"), py::arg("out_dir"), py::arg("kind") = "radial", py::arg("per_image") = 100,
      py::arg("seed") = 0, py::arg("workers") = 1,
      "Writes an augmented dataset plus manifest.jsonl; returns the record count.");

  m.def(
      "majority_vote",
      [](const std::vector<std::size_t>& labels) { return majority_vote(labels); },
      py::arg("labels"));
}
