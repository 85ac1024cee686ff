#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drs/certify.hpp"
#include "drs/classifier.hpp"
#include "drs/data_io.hpp"
#include "drs/deform.hpp"
#include "drs/image.hpp"
#include "drs/report.hpp"
#include "drs/smoothing.hpp"

namespace py = pybind11;
using namespace drs;

namespace {

SmoothingDist make_dist(const std::string& kind, double param) {
  if (kind == "uniform") return Uniform{param};
  if (kind == "gaussian") return Gaussian{param};
  throw std::invalid_argument("dist must be 'uniform' or 'gaussian'");
}

}  // namespace

PYBIND11_MODULE(_drs, m) {
  m.doc() = "Deformation-smoothed classification and certification";

  py::class_<Image>(m, "Image")
      .def(py::init<int, int, int>(), py::arg("width"), py::arg("height"), py::arg("channels"))
      .def(py::init<int, int, int, std::vector<double>>(), py::arg("width"), py::arg("height"),
           py::arg("channels"), py::arg("pixels"))
      .def_property_readonly("width", &Image::width)
      .def_property_readonly("height", &Image::height)
      .def_property_readonly("channels", &Image::channels)
      .def_property_readonly("pixels",
                             [](const Image& im) { return im.pixels(); });

  py::class_<VectorField>(m, "VectorField")
      .def(py::init<int, int>(), py::arg("width"), py::arg("height"))
      .def_readonly("width", &VectorField::width)
      .def_readonly("height", &VectorField::height)
      .def_readwrite("u", &VectorField::u)
      .def_readwrite("v", &VectorField::v)
      .def("norm_l1", &VectorField::norm_l1)
      .def("norm_l2", &VectorField::norm_l2);

  py::class_<CoordinateField>(m, "CoordinateField")
      .def_readonly("width", &CoordinateField::width)
      .def_readonly("height", &CoordinateField::height)
      .def_readonly("x", &CoordinateField::x)
      .def_readonly("y", &CoordinateField::y);

  m.def("normalized_grid", &normalized_grid, py::arg("width"), py::arg("height"));
  m.def("bilinear_sample", &bilinear_sample, py::arg("image"), py::arg("px"), py::arg("py"));
  m.def("warp", &warp, py::arg("image"), py::arg("field"));

  m.def("field_translation", &field_translation);
  m.def("field_rotation", &field_rotation);
  m.def("field_scaling", &field_scaling);
  m.def("field_affine", &field_affine);
  m.def("field_dct", &field_dct);
  m.def("dct2_forward", &dct2_forward);
  m.def("dct2_inverse", &dct2_inverse);

  m.def("affine_shear_rotation", [](double s, double theta) {
    const Affine a = compose_shear_rotation(s, theta);
    return std::vector<double>{a.a, a.b, a.c, a.d, a.e, a.f};
  });
  m.def("affine_rot_scale_trans", [](double theta, double alpha, double tu, double tv) {
    const Affine a = compose_rot_scale_trans(theta, alpha, tu, tv);
    return std::vector<double>{a.a, a.b, a.c, a.d, a.e, a.f};
  });

  m.def("std_normal_quantile", &std_normal_quantile);
  m.def("std_normal_cdf", &std_normal_cdf);
  m.def("clopper_pearson_lower", &clopper_pearson_lower);
  m.def("radius_uniform", &radius_uniform);
  m.def("radius_gaussian", &radius_gaussian);

  m.def(
      "max_composite_shear_rotation",
      [](std::pair<double, double> s, std::pair<double, double> theta, int resolution) {
        return max_composite_lhs(ShearRotation{}, s, theta, resolution);
      },
      py::arg("s_range"), py::arg("theta_range"), py::arg("resolution") = 201);
  m.def(
      "max_composite_rot_scale_trans",
      [](std::pair<double, double> theta, std::pair<double, double> alpha,
         std::pair<double, double> tsq, int resolution) {
        return max_composite_lhs(RotScaleTrans{}, theta, alpha, tsq, resolution);
      },
      py::arg("theta_range"), py::arg("alpha_range"), py::arg("tsq_range"),
      py::arg("resolution") = 201);

  py::class_<LinearSoftmaxModel>(m, "LinearSoftmaxModel")
      .def_readonly("class_count", &LinearSoftmaxModel::class_count);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("images", &Dataset::images)
      .def_readonly("labels", &Dataset::labels)
      .def_readonly("class_count", &Dataset::class_count);

  m.def("synth_shapes", &synth_shapes, py::arg("count_per_class"), py::arg("size"),
        py::arg("seed"));
  m.def("load_idx", &load_idx);
  m.def("save_idx", &save_idx);
  m.def("save_model", &save_model);
  m.def("load_model", &load_model);

  m.def(
      "train",
      [](const Dataset& ds, const std::string& family, const std::string& dist_kind,
         double dist_param, int epochs, double lr, std::uint64_t seed) {
        double acc = 0.0;
        LinearSoftmaxModel model = train(ds, parse_family(family),
                                         make_dist(dist_kind, dist_param),
                                         TrainConfig{epochs, lr, seed}, &acc);
        return py::make_tuple(model, acc);
      },
      py::arg("dataset"), py::arg("family"), py::arg("dist"), py::arg("dist_param"),
      py::arg("epochs") = 20, py::arg("lr") = 0.05, py::arg("seed") = 0);

  m.def("predict",
        [](const LinearSoftmaxModel& model, const Image& image) { return predict(model, image); });

  py::class_<CertificationResult>(m, "CertificationResult")
      .def_readonly("verdict", &CertificationResult::verdict)
      .def_readonly("pA_lower", &CertificationResult::pA_lower)
      .def_readonly("radius", &CertificationResult::radius)
      .def_readonly("samples_used", &CertificationResult::samples_used)
      .def_property_readonly("norm_kind", [](const CertificationResult& r) {
        return r.norm_kind == NormKind::L1 ? "l1" : "l2";
      });

  m.def(
      "certify",
      [](const LinearSoftmaxModel& model, const Image& image, const std::string& family,
         const std::string& dist_kind, double dist_param, int n0, int n, double alpha,
         std::uint64_t seed) {
        CertifyConfig cfg;
        cfg.n0 = n0;
        cfg.n = n;
        cfg.alpha = alpha;
        cfg.dist = make_dist(dist_kind, dist_param);
        cfg.family = parse_family(family);
        cfg.seed = seed;
        return certify_parametric(make_predictor(model), image, cfg);
      },
      py::arg("model"), py::arg("image"), py::arg("family"), py::arg("dist"),
      py::arg("dist_param"), py::arg("n0") = 100, py::arg("n") = 10000,
      py::arg("alpha") = 0.001, py::arg("seed") = 0);

  m.def(
      "smoothed_score_quadrature",
      [](const LinearSoftmaxModel& model, const Image& image, const std::string& family,
         const std::string& dist_kind, double dist_param, int nodes, double center, bool soft) {
        return smoothed_score_quadrature(make_predictor(model), image, parse_family(family),
                                         make_dist(dist_kind, dist_param), nodes, center, soft);
      },
      py::arg("model"), py::arg("image"), py::arg("family"), py::arg("dist"),
      py::arg("dist_param"), py::arg("nodes") = 2001, py::arg("center") = 0.0,
      py::arg("soft") = false);

  m.def(
      "empirical_attack",
      [](const LinearSoftmaxModel& model, const Image& image, const std::string& family,
         const std::string& dist_kind, double dist_param, double radius, int budget,
         std::uint64_t seed) {
        return empirical_attack(make_predictor(model), image, parse_family(family),
                                make_dist(dist_kind, dist_param), radius, budget, seed);
      },
      py::arg("model"), py::arg("image"), py::arg("family"), py::arg("dist"),
      py::arg("dist_param"), py::arg("radius"), py::arg("budget") = 2001, py::arg("seed") = 0);

  m.def("run_cli",
        [](const std::vector<std::string>& args) { return run_cli(args); });
}
