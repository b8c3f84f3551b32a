// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "seqiqa/checkpoint.hpp"
#include "seqiqa/errors.hpp"
#include "seqiqa/feature_backend.hpp"
#include "seqiqa/metrics.hpp"
#include "seqiqa/multires.hpp"
#include "seqiqa/patch_sampler.hpp"
#include "seqiqa/pipeline.hpp"
#include "seqiqa/si_ordering.hpp"
#include "seqiqa/synth.hpp"

namespace py = pybind11;
using namespace seqiqa;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

ImageBuffer to_image(const U8Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw ValidationError("image must have shape (H, W) or (H, W, C)");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  return ImageBuffer(w, h, c, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

py::dict sequence_dict(const FeatureSequence& seq) {
  py::array_t<double> values({seq.size(), seq.dim});
  auto v = values.mutable_unchecked<2>();
  py::list si, groups, sources;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& fv = seq.vectors[i];
    for (std::size_t d = 0; d < seq.dim; ++d) v(i, d) = fv.values[d];
    si.append(fv.si);
    groups.append(std::string(to_string(fv.scale_group)));
    sources.append(fv.source_index);
  }
  py::dict out;
  out["image_id"] = seq.image_id;
  out["dim"] = seq.dim;
  out["values"] = values;
  out["si"] = si;
  out["groups"] = groups;
  out["source_index"] = sources;
  return out;
}

py::dict metrics_dict(const Metrics& m) {
  py::dict out;
  out["scc"] = m.scc ? py::cast(*m.scc) : py::none();
  out["pcc"] = m.pcc ? py::cast(*m.pcc) : py::none();
  out["rmse"] = m.rmse;
  out["degenerate"] = m.degenerate;
  return out;
}

double predict_sequence(const Model& model, FeatureSequence seq) {
  if (!model.config.value("use_low_scale", true)) seq = seq.filtered(ScaleGroup::High);
  return unscale_mos(model.predict(SequenceInput::from(seq)));
}

}  // namespace

PYBIND11_MODULE(_seqiqa, m) {
  m.doc() = "Patch-sequence image quality prediction";

  // Exception types live as long as the interpreter.
  static PyObject* error = py::exception<Error>(m, "Error").release().ptr();
  static PyObject* validation_error =
      py::exception<ValidationError>(m, "ValidationError", error).release().ptr();
  static PyObject* format_error = py::exception<FormatError>(m, "FormatError", error).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const FormatError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(format_error)(e.what());
      exc.attr("offset") = e.offset();
      PyErr_SetObject(format_error, exc.ptr());
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def(
      "compute_grid",
      [](int width, int height, int patch_size) {
        const PatchGrid g = compute_grid(width, height, patch_size);
        py::list positions;
        for (const auto& p : g.positions) positions.append(py::make_tuple(p.x, p.y));
        py::dict out;
        out["cols"] = g.cols;
        out["rows"] = g.rows;
        out["stride_x"] = g.stride_x;
        out["stride_y"] = g.stride_y;
        out["positions"] = positions;
        return out;
      },
      py::arg("width"), py::arg("height"), py::arg("patch_size") = 224);

  m.def(
      "spatial_activity", [](const U8Array& image) { return spatial_activity(to_image(image)); },
      py::arg("image"), "Population std of the Sobel magnitude over the interior of the luma.");
  m.def(
      "stat_features", [](const U8Array& image) { return stat_features(to_image(image)); },
      py::arg("image"));
  m.def("stat_feature_dim", [] { return kStatFeatureDim; });

  m.def(
      "build_sequence",
      [](const U8Array& image, const std::string& image_id, int patch_size, bool low_scale,
         const std::string& ordering, std::uint64_t order_seed) {
        MultiresConfig cfg;
        cfg.patch_size = patch_size;
        cfg.enable_low_scale = low_scale;
        cfg.ordering = parse_ordering(ordering);
        cfg.order_seed = order_seed;
        StatFeatureBackend backend;
        return sequence_dict(build_sequence(to_image(image), image_id, cfg, backend));
      },
      py::arg("image"), py::arg("image_id") = "image", py::arg("patch_size") = 224,
      py::arg("low_scale") = true, py::arg("ordering") = "asc-si", py::arg("order_seed") = 0);

  m.def(
      "read_feature_file",
      [](const std::filesystem::path& path) { return sequence_dict(read_feature_file(path)); },
      py::arg("path"));

  m.def("synth_mos", &synth_mos, py::arg("noise_sigma"), py::arg("blur_radius"));

  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
      py::arg("x"), py::arg("y"));
  m.def(
      "spearman",
      [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); },
      py::arg("x"), py::arg("y"));
  m.def(
      "compute_metrics",
      [](const std::vector<double>& pred, const std::vector<double>& target) {
        return metrics_dict(compute_metrics(pred, target));
      },
      py::arg("pred_unit"), py::arg("target_unit"), "Inputs on the 0-1 scale; RMSE on 0-100.");

  py::class_<Model>(m, "Model")
      .def_static("load", &load_checkpoint, py::arg("path"))
      .def("save", [](const Model& self, const std::filesystem::path& p) { save_checkpoint(self, p); },
           py::arg("path"))
      .def_property_readonly("kind", [](const Model& self) { return std::string(to_string(self.kind())); })
      .def_property_readonly("input_dim", &Model::input_dim)
      .def_readonly("seed", &Model::seed)
      .def_property_readonly("config", [](const Model& self) { return self.config.dump(); })
      .def(
          "predict_file",
          [](const Model& self, const std::filesystem::path& p) {
            return predict_sequence(self, read_feature_file(p));
          },
          py::arg("path"), "Predicted MOS (0-100) for an FSEQ file.")
      .def(
          "predict_image",
          [](const Model& self, const U8Array& image, int patch_size) {
            MultiresConfig cfg;
            cfg.patch_size = patch_size;
            StatFeatureBackend backend;
            return predict_sequence(self, build_sequence(to_image(image), "image", cfg, backend));
          },
          py::arg("image"), py::arg("patch_size") = 224,
          "Predicted MOS (0-100) using on-the-fly statistical features.");
}
