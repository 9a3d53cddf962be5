// Copyright 2026 The RBlur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Images cross the boundary as float32 numpy arrays shaped
// (H, W) for one channel or (C, H, W) for one or three channels.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <memory>

#include "rblur/acuity.h"
#include "rblur/certify.h"
#include "rblur/errors.h"
#include "rblur/fixation.h"
#include "rblur/foveate.h"
#include "rblur/geometry.h"
#include "rblur/random.h"

namespace py = pybind11;

namespace rblur {
namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

constexpr std::uint64_t kImageNoiseDomain = 0;
constexpr std::uint64_t kScanpathDomain = 3;

Image to_image(const FloatArray& a) {
  if (a.ndim() != 2 && a.ndim() != 3) {
    throw InputError("image array must be (H, W) or (C, H, W)");
  }
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(0)) : 1;
  const int h = static_cast<int>(a.shape(a.ndim() - 2));
  const int w = static_cast<int>(a.shape(a.ndim() - 1));
  std::vector<float> samples(a.data(), a.data() + a.size());
  return Image(c, h, w, std::move(samples));
}

py::array_t<float> to_array(const Image& img, bool flat) {
  std::vector<py::ssize_t> shape;
  if (!flat) shape.push_back(img.channels());
  shape.push_back(img.height());
  shape.push_back(img.width());
  py::array_t<float> out(shape);
  std::memcpy(out.mutable_data(), img.samples().data(),
              img.samples().size() * sizeof(float));
  return out;
}

FixationPoint to_fixation(const std::pair<int, int>& xy) { return {xy.first, xy.second}; }

// Adapts a Python callable mapping a (C, H, W) array to class scores.
class PyClassifier : public Classifier {
 public:
  PyClassifier(py::function fn, int num_classes) : fn_(std::move(fn)), classes_(num_classes) {
    if (num_classes < 1) throw ConfigError("num_classes must be >= 1");
  }
  int num_classes() const override { return classes_; }
  std::vector<double> scores(const Image& img) const override {
    py::gil_scoped_acquire gil;
    auto s = fn_(to_array(img, false)).cast<std::vector<double>>();
    if (static_cast<int>(s.size()) != classes_) {
      throw InputError("classifier returned the wrong number of scores");
    }
    return s;
  }

 private:
  py::function fn_;
  int classes_;
};

py::dict table_dict(const AcuityTable& t) {
  auto vec = [](const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
  };
  py::dict d;
  d["color_acuity"] = vec(t.color().acuity);
  d["gray_acuity"] = vec(t.gray().acuity);
  d["sigma_color"] = vec(t.color().sigma);
  d["sigma_gray"] = vec(t.gray().sigma);
  d["color_raw"] = vec(t.color().raw);
  d["gray_raw"] = vec(t.gray().raw);
  d["color_bins"] = t.color().bins.size();
  d["gray_bins"] = t.gray().bins.size();
  d["max_sigma_color"] = t.color().max_sigma();
  d["max_sigma_gray"] = t.gray().max_sigma();
  d["in_focus_width"] = t.in_focus_width();
  d["viewing_distance"] = t.viewing_distance();
  return d;
}

}  // namespace
}  // namespace rblur

PYBIND11_MODULE(_core, m) {
  using namespace rblur;
  m.doc() = "Foveated image transform, acuity tables, scanpaths and certification";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  py::class_<RBlurConfig>(m, "Config")
      .def(py::init<>())
      .def_property(
          "sigma_color", [](const RBlurConfig& c) { return c.acuity.sigma_color; },
          [](RBlurConfig& c, double v) { c.acuity.sigma_color = v; })
      .def_property(
          "sigma_rod", [](const RBlurConfig& c) { return c.acuity.sigma_rod; },
          [](RBlurConfig& c, double v) { c.acuity.sigma_rod = v; })
      .def_property(
          "acuity_alpha", [](const RBlurConfig& c) { return c.acuity.alpha; },
          [](RBlurConfig& c, double v) { c.acuity.alpha = v; })
      .def_property(
          "p_max", [](const RBlurConfig& c) { return c.acuity.p_max; },
          [](RBlurConfig& c, double v) { c.acuity.p_max = v; })
      .def_property(
          "beta", [](const RBlurConfig& c) { return c.acuity.beta; },
          [](RBlurConfig& c, double v) { c.acuity.beta = v; })
      .def_property(
          "envelope", [](const RBlurConfig& c) { return to_string(c.acuity.norm); },
          [](RBlurConfig& c, const std::string& v) { c.acuity.norm = parse_envelope_norm(v); })
      .def_readwrite("field_width", &RBlurConfig::field_width)
      .def_readwrite("noise_scale", &RBlurConfig::noise_scale)
      .def_readwrite("viewing_distance", &RBlurConfig::viewing_distance)
      .def_readwrite("bins", &RBlurConfig::bin_count)
      .def_readwrite("merge_threshold", &RBlurConfig::merge_threshold)
      .def_readwrite("seed", &RBlurConfig::seed)
      .def("validate", &RBlurConfig::validate);

  py::class_<Foveator>(m, "Foveator")
      .def(py::init<const RBlurConfig&>(), py::arg("config") = RBlurConfig{})
      .def_property_readonly("config", &Foveator::config)
      .def("table", [](const Foveator& f) { return table_dict(f.table()); })
      .def(
          "foveate",
          [](const Foveator& f, const FloatArray& img, std::pair<int, int> fixation) {
            const Image out = f.foveate(to_image(img), to_fixation(fixation));
            return to_array(out, img.ndim() == 2);
          },
          py::arg("image"), py::arg("fixation"),
          "Blur and blend an image that already carries its noise.")
      .def(
          "apply",
          [](const Foveator& f, const FloatArray& img, std::pair<int, int> fixation,
             std::uint64_t index) {
            Rng rng = derive_stream(f.config().seed, index, kImageNoiseDomain);
            const Image out = f.apply(to_image(img), to_fixation(fixation), rng);
            return to_array(out, img.ndim() == 2);
          },
          py::arg("image"), py::arg("fixation"), py::arg("index") = 0,
          "Noise (stream chosen by config.seed and index), then foveate.");

  m.def(
      "acuity_table",
      [](const RBlurConfig& c) {
        c.validate();
        return table_dict(apply_viewing_distance(
            build_acuity_table(VisualField(c.field_width), c.acuity, c.bin_count,
                               c.merge_threshold),
            c.viewing_distance));
      },
      py::arg("config") = RBlurConfig{});

  m.def(
      "eccentricity_map",
      [](std::pair<int, int> fixation, int field_width, int height, int width) {
        const VisualField field(field_width);
        if (height <= 0) height = field_width;
        if (width <= 0) width = field_width;
        const EccentricityMap e = eccentricity_map(to_fixation(fixation), field, height, width);
        py::array_t<int> out({height, width});
        std::memcpy(out.mutable_data(), e.distances().data(),
                    e.distances().size() * sizeof(int));
        return out;
      },
      py::arg("fixation"), py::arg("field_width"), py::arg("height") = 0,
      py::arg("width") = 0, "L-infinity pixel distances from the fixation.");

  m.def(
      "gaussian_blur",
      [](const FloatArray& img, double sigma) {
        return to_array(gaussian_blur_fixed(to_image(img), sigma), img.ndim() == 2);
      },
      py::arg("image"), py::arg("sigma"));

  m.def(
      "sample_scanpath",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& heatmap,
         int n, double mask_sigma, std::uint64_t seed, bool argmax) {
        if (heatmap.ndim() != 2) throw InputError("heatmap must be 2-D");
        const int h = static_cast<int>(heatmap.shape(0));
        const int w = static_cast<int>(heatmap.shape(1));
        Heatmap map(h, w, std::vector<double>(heatmap.data(), heatmap.data() + heatmap.size()));
        if (mask_sigma <= 0.0) mask_sigma = default_mask_sigma(w);
        Rng rng = derive_stream(seed, 0, kScanpathDomain);
        std::vector<std::pair<int, int>> out;
        for (const FixationPoint& p :
             sample_scanpath(map, n, mask_sigma, rng,
                             argmax ? SamplingMode::kArgmax : SamplingMode::kMultinomial)) {
          out.emplace_back(p.x, p.y);
        }
        return out;
      },
      py::arg("heatmap"), py::arg("n") = 5, py::arg("mask_sigma") = 0.0, py::arg("seed") = 0,
      py::arg("argmax") = false, "List of (x, y) fixations.");

  m.def("clopper_pearson_lower", &clopper_pearson_lower, py::arg("k"), py::arg("n"),
        py::arg("alpha"));
  m.def("std_normal_quantile", &std_normal_quantile, py::arg("p"));
  m.def("std_normal_cdf", &std_normal_cdf, py::arg("z"));

  m.def(
      "certify",
      [](py::function scores, int num_classes, const FloatArray& img, double sigma, long n0,
         long n, double alpha, std::uint64_t seed) {
        const PyClassifier clf(std::move(scores), num_classes);
        CertifyParams p;
        p.sigma = sigma;
        p.n0 = n0;
        p.n = n;
        p.alpha = alpha;
        const Image x = to_image(img);
        CertificationResult r;
        {
          // Sampling may run off the calling thread; scores() retakes the GIL.
          py::gil_scoped_release release;
          r = certify(clf, x, p, seed);
        }
        py::dict d;
        d["abstained"] = r.abstained;
        d["predicted_class"] = r.predicted_class;
        d["radius"] = r.radius;
        d["p_lower"] = r.p_lower;
        d["candidate_class"] = r.candidate_class;
        d["candidate_count"] = r.candidate_count;
        return d;
      },
      py::arg("scores"), py::arg("num_classes"), py::arg("image"), py::arg("sigma") = 0.125,
      py::arg("n0") = 100, py::arg("n") = 100000, py::arg("alpha") = 0.001,
      py::arg("seed") = 0,
      "Randomized-smoothing certificate for a Python scoring function.");
}
