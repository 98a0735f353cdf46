#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <stdexcept>

#include "cmpdet/evalbench.hpp"
#include "cmpdet/pipeline.hpp"
#include "cmpdet/rings.hpp"
#include "cmpdet/spectral.hpp"
#include "cmpdet/synth.hpp"

namespace py = pybind11;
using namespace cmpdet;

namespace {

using GrayArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const GrayArray& arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D uint8 array");
  GrayImage img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
  std::memcpy(img.data.data(), arr.data(), img.data.size());
  return img;
}

py::array_t<std::uint8_t> from_image(int width, int height,
                                     const std::vector<std::uint8_t>& data) {
  py::array_t<std::uint8_t> arr({height, width});
  std::memcpy(arr.mutable_data(), data.data(), data.size());
  return arr;
}

PipelineParams make_params(int window, int offset, int delta_th, int d_th,
                           int cd_th, int nms_radius, int threads) {
  PipelineParams p;
  p.window = window;
  p.offset = offset;
  p.detector.delta_th = delta_th;
  p.detector.d_th = d_th;
  p.detector.cd_th = cd_th;
  p.detector.nms_radius = nms_radius;
  p.threads = threads;
  if (!p.valid()) throw std::invalid_argument("invalid pipeline parameters");
  return p;
}

DeformMode parse_mode(const std::string& name) {
  if (name == "none") return DeformMode::none;
  if (name == "press") return DeformMode::press;
  if (name == "shear") return DeformMode::shear;
  if (name == "twist") return DeformMode::twist;
  throw std::invalid_argument("unknown deform mode: " + name);
}

RingSignal parse_signal(const std::string& bits) {
  return signal_from_string(bits);
}

py::dict corner_dict(const Corner& c) {
  py::dict d;
  d["x"] = c.x;
  d["y"] = c.y;
  d["response"] = c.response;
  d["method"] = refine_method_name(c.method);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Checkerboard-style corner detector for deformable marker patterns";

  m.def(
      "detect_corners",
      [](const GrayArray& image, int window, int offset, int delta_th,
         int d_th, int cd_th, int nms_radius, int threads) {
        DetectResult r = detect_corners(
            to_image(image), make_params(window, offset, delta_th, d_th,
                                         cd_th, nms_radius, threads));
        py::list out;
        for (const Corner& c : r.corners) out.append(corner_dict(c));
        return out;
      },
      py::arg("image"), py::arg("window") = 31, py::arg("offset") = 0,
      py::arg("delta_th") = 5, py::arg("d_th") = 5, py::arg("cd_th") = 4,
      py::arg("nms_radius") = 3, py::arg("threads") = 1,
      "Run the full detection pipeline on a 2-D uint8 image; returns a list "
      "of {x, y, response, method} dicts sorted by (y, x).");

  m.def(
      "adaptive_threshold",
      [](const GrayArray& image, int window, int offset) {
        GrayImage img = to_image(image);
        BinaryImage bin = adaptive_threshold(img, window, offset);
        return from_image(bin.width, bin.height, bin.data);
      },
      py::arg("image"), py::arg("window") = 31, py::arg("offset") = 0,
      "Mean threshold over a sliding window; black = 0, white = 255.");

  m.def(
      "generate",
      [](int grid, int cell_px, const std::string& deform, double amplitude,
         double center_u, double center_v, double radius, double corrosion,
         double noise, double ramp, std::uint64_t seed, int width,
         int height) {
        SynthConfig cfg;
        cfg.grid = grid;
        cfg.cell_px = cell_px;
        cfg.deform.mode = parse_mode(deform);
        cfg.deform.amplitude = amplitude;
        cfg.deform.center_u = center_u;
        cfg.deform.center_v = center_v;
        cfg.deform.radius = radius;
        cfg.corrosion_radius = corrosion;
        cfg.noise_sigma = noise;
        cfg.illumination_ramp = ramp;
        cfg.seed = seed;
        cfg.width = width;
        cfg.height = height;
        SynthResult r = generate(cfg);
        py::list truth;
        for (const TruthCorner& c : r.truth.corners) {
          py::dict d;
          d["x"] = c.x;
          d["y"] = c.y;
          d["i"] = c.i;
          d["j"] = c.j;
          truth.append(d);
        }
        return py::make_tuple(
            from_image(r.image.width, r.image.height, r.image.data), truth);
      },
      py::arg("grid") = 20, py::arg("cell_px") = 16,
      py::arg("deform") = "none", py::arg("amplitude") = 0.0,
      py::arg("center_u") = 0.5, py::arg("center_v") = 0.5,
      py::arg("radius") = 0.25, py::arg("corrosion") = 0.0,
      py::arg("noise") = 0.0, py::arg("ramp") = 0.0, py::arg("seed") = 1,
      py::arg("width") = 0, py::arg("height") = 0,
      "Render a synthetic checkerboard frame; returns (image, truth) where "
      "truth is a list of {x, y, i, j} ground-truth corners.");

  m.def(
      "match_corners",
      [](const py::list& detected, const py::list& truth, double tol) {
        std::vector<Corner> det;
        for (const auto& item : detected) {
          py::dict d = item.cast<py::dict>();
          Corner c;
          c.x = d["x"].cast<double>();
          c.y = d["y"].cast<double>();
          det.push_back(c);
        }
        GroundTruth gt;
        for (const auto& item : truth) {
          py::dict d = item.cast<py::dict>();
          gt.corners.push_back({d["x"].cast<double>(), d["y"].cast<double>(),
                                0, 0});
        }
        MatchResult m = match(det, gt, tol);
        py::dict out;
        out["tp"] = m.tp;
        out["fp"] = m.fp;
        out["fn"] = m.fn;
        out["pairs"] = m.pairs;
        return out;
      },
      py::arg("detected"), py::arg("truth"), py::arg("tolerance"),
      "Greedy nearest-neighbor matching of detections against truth.");

  m.def(
      "dft_amplitude",
      [](const std::string& bits, int k) {
        return dft_amplitude(parse_signal(bits), k);
      },
      py::arg("bits"), py::arg("k"),
      "|F(k)| of a 16-character '0'/'1' ring signal string.");

  m.def(
      "intra_response",
      [](const std::string& bits) {
        IntraResponse r = intra_response(parse_signal(bits));
        py::dict d;
        d["amp1"] = r.amp1;
        d["amp2"] = r.amp2;
        d["amp3"] = r.amp3;
        d["delta12"] = r.delta12;
        d["delta23"] = r.delta23;
        d["corner_like"] = r.corner_like();
        return d;
      },
      py::arg("bits"),
      "Spectral amplitudes at 1..3 cycles/rev and the corner criterion.");

  m.def(
      "circular_xcorr",
      [](const std::string& a, const std::string& b) {
        auto r = circular_xcorr(parse_signal(a), parse_signal(b));
        return std::vector<double>(r.begin(), r.end());
      },
      py::arg("a"), py::arg("b"),
      "Normalized circular cross-correlation (16 shifts) of two signals.");

  m.def(
      "inter_response",
      [](const std::string& a, const std::string& b) {
        InterResponse r = inter_response(parse_signal(a), parse_signal(b));
        return py::make_tuple(r.delta_a, r.delta_phi);
      },
      py::arg("a"), py::arg("b"),
      "Peak correlation and |peak phase| in degrees between two signals.");

  m.def(
      "continuous_amplitude",
      [](double tau1, double tau2, double alpha, int omega) {
        return continuous_amplitude({tau1, tau2, alpha}, omega);
      },
      py::arg("tau1"), py::arg("tau2"), py::arg("alpha"), py::arg("omega"),
      "Analytic |F(omega)| of the two-sector continuous corner model.");
}
