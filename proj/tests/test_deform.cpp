#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "drs/deform.hpp"
#include "drs/image.hpp"
#include "drs/smoothing.hpp"

using namespace drs;
using std::numbers::pi;

namespace {

double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    m = std::max(m, std::abs(a.u[i] - b.u[i]));
    m = std::max(m, std::abs(a.v[i] - b.v[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("translation field is constant") {
  const CoordinateField grid = normalized_grid(6, 5);
  const VectorField zero = field_translation(0.0, 0.0, grid);
  CHECK(zero.norm_l2() == 0.0);
  const VectorField f = field_translation(0.5, -0.25, grid);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    CHECK(f.u[i] == 0.5);
    CHECK(f.v[i] == -0.25);
  }
  // ||field||_2 = sqrt(W*H) * ||t||_2
  CHECK(f.norm_l2() ==
        doctest::Approx(std::sqrt(30.0) * std::sqrt(0.5 * 0.5 + 0.25 * 0.25)).epsilon(1e-12));
}

TEST_CASE("rotation field closed form") {
  const CoordinateField grid = normalized_grid(3, 3);
  CHECK(field_rotation(0.0, grid).norm_l2() == 0.0);

  // theta = pi/2 at (n,m) = (1,0): pixel (row 1, col 2).
  const VectorField q = field_rotation(pi / 2, grid);
  const std::size_t i = 1 * 3 + 2;
  CHECK(q.u[i] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(q.v[i] == doctest::Approx(1.0).epsilon(1e-12));

  // theta = pi at (n,m) = (0,1): pixel (row 2, col 1).
  const VectorField h = field_rotation(pi, grid);
  const std::size_t j = 2 * 3 + 1;
  CHECK(h.u[j] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(h.v[j] == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("rotation mirror symmetry between theta and -theta") {
  const int N = 7;
  const CoordinateField grid = normalized_grid(N, N);
  const double theta = 0.83;
  const VectorField fp = field_rotation(theta, grid);
  const VectorField fm = field_rotation(-theta, grid);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * N + c;
      const std::size_t mi = static_cast<std::size_t>(N - 1 - r) * N + c;  // m -> -m
      CHECK(fm.u[i] == doctest::Approx(fp.u[mi]).epsilon(1e-12));
      CHECK(fm.v[i] == doctest::Approx(-fp.v[mi]).epsilon(1e-12));
    }
}

TEST_CASE("scaling field closed form") {
  const CoordinateField grid = normalized_grid(5, 5);
  CHECK(field_scaling(1.0, grid).norm_l2() == 0.0);
  const VectorField f = field_scaling(1.2, grid);
  // (n,m) = (0.5,-0.5): pixel (row 1, col 3).
  const std::size_t i = 1 * 5 + 3;
  CHECK(f.u[i] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(f.v[i] == doctest::Approx(-0.1).epsilon(1e-12));
  // Center is a fixed point.
  const VectorField g = field_scaling(0.8, grid);
  CHECK(g.u[2 * 5 + 2] == 0.0);
  CHECK(g.v[2 * 5 + 2] == 0.0);
  CHECK_THROWS_AS(field_scaling(0.0, grid), std::invalid_argument);
  CHECK_THROWS_AS(field_scaling(-0.5, grid), std::invalid_argument);
}

TEST_CASE("affine specializations match dedicated generators") {
  const CoordinateField grid = normalized_grid(9, 8);
  CHECK(field_affine(0, 0, 0, 0, 0, 0, grid).norm_l2() == 0.0);

  const double theta = 0.42;
  const VectorField rot = field_rotation(theta, grid);
  const VectorField rot_aff = field_affine(std::cos(theta) - 1, -std::sin(theta),
                                           std::sin(theta), std::cos(theta) - 1, 0, 0, grid);
  CHECK(max_abs_diff(rot, rot_aff) <= 1e-12);

  const VectorField sc = field_scaling(1.3, grid);
  const VectorField sc_aff = field_affine(0.3, 0, 0, 0.3, 0, 0, grid);
  CHECK(max_abs_diff(sc, sc_aff) <= 1e-12);

  const VectorField tr = field_translation(0.7, -0.2, grid);
  const VectorField tr_aff = field_affine(0, 0, 0, 0, 0.7, -0.2, grid);
  CHECK(max_abs_diff(tr, tr_aff) == 0.0);
}

TEST_CASE("affine and dct fields are linear in their parameters") {
  const CoordinateField grid = normalized_grid(8, 8);
  const double mul = 2.75;
  const RandomStream s(41, 0);
  const double a = s.u01(0), b = s.u01(1), c = s.u01(2), d = s.u01(3), e = s.u01(4),
               f = s.u01(5);
  const VectorField base = field_affine(a, b, c, d, e, f, grid);
  const VectorField scaled =
      field_affine(mul * a, mul * b, mul * c, mul * d, mul * e, mul * f, grid);
  for (std::size_t i = 0; i < base.u.size(); ++i) {
    CHECK(scaled.u[i] == doctest::Approx(mul * base.u[i]).epsilon(1e-12));
    CHECK(scaled.v[i] == doctest::Approx(mul * base.v[i]).epsilon(1e-12));
  }

  std::vector<double> coeffs(8);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = s.u01(10 + i) - 0.5;
  std::vector<double> coeffs2(coeffs);
  for (double& x : coeffs2) x *= mul;
  const VectorField dct = field_dct(coeffs, 2, grid);
  const VectorField dct2 = field_dct(coeffs2, 2, grid);
  for (std::size_t i = 0; i < dct.u.size(); ++i) {
    CHECK(dct2.u[i] == doctest::Approx(mul * dct.u[i]).epsilon(1e-12));
    CHECK(dct2.v[i] == doctest::Approx(mul * dct.v[i]).epsilon(1e-12));
  }
}

TEST_CASE("dct dc coefficient gives a constant field") {
  const int W = 6, H = 4;
  const CoordinateField grid = normalized_grid(W, H);
  std::vector<double> coeffs(8, 0.0);
  coeffs[0] = 3.0;  // u-block (0,0)
  const VectorField f = field_dct(coeffs, 2, grid);
  const double expected = 3.0 / std::sqrt(static_cast<double>(W) * H);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    CHECK(f.u[i] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(f.v[i] == 0.0);
  }
}

TEST_CASE("dct zero coefficients and shape errors") {
  const CoordinateField grid = normalized_grid(8, 8);
  CHECK(field_dct(std::vector<double>(8, 0.0), 2, grid).norm_l2() == 0.0);
  CHECK_THROWS_AS(field_dct(std::vector<double>(7, 0.0), 2, grid), std::invalid_argument);
  CHECK_THROWS_AS(field_dct(std::vector<double>(2 * 9 * 9, 0.0), 9, grid),
                  std::invalid_argument);
}

TEST_CASE("dct forward-inverse roundtrip on random full-size arrays") {
  const int W = 12, H = 9;
  std::vector<double> plane(static_cast<std::size_t>(W) * H);
  const RandomStream s(7, 0);
  for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = 2.0 * s.u01(i) - 1.0;
  const std::vector<double> back = dct2_inverse(dct2_forward(plane, W, H), W, H);
  for (std::size_t i = 0; i < plane.size(); ++i)
    CHECK(back[i] == doctest::Approx(plane[i]).epsilon(1e-9));
}

TEST_CASE("truncated synthesis agrees with the full inverse transform") {
  const int W = 8, H = 8, k = 2;
  const RandomStream s(13, 0);
  std::vector<double> coeffs(2 * k * k);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = s.u01(i) - 0.5;
  const CoordinateField grid = normalized_grid(W, H);
  const VectorField f = field_dct(coeffs, k, grid);

  std::vector<double> full_u(static_cast<std::size_t>(W) * H, 0.0);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q)
      full_u[static_cast<std::size_t>(p) * W + q] = coeffs[static_cast<std::size_t>(p) * k + q];
  const std::vector<double> synth = dct2_inverse(full_u, W, H);
  for (std::size_t i = 0; i < synth.size(); ++i)
    CHECK(f.u[i] == doctest::Approx(synth[i]).epsilon(1e-9));
}

TEST_CASE("shear-rotation composition parameters and norm") {
  const Affine zero = compose_shear_rotation(0.0, 0.0);
  CHECK(affine_param_norm(zero) == 0.0);

  // Closed-form norm identity over randomized parameters.
  for (int trial = 0; trial < 50; ++trial) {
    const RandomStream s(101, trial);
    const double sh = s.u01(0) - 0.5;
    const double th = 2.0 * (s.u01(1) - 0.5) * pi;
    const Affine a = compose_shear_rotation(sh, th);
    const double closed =
        std::sqrt(sh * sh - 2.0 * sh * std::sin(th) - 4.0 * std::cos(th) + 4.0);
    CHECK(affine_param_norm(a) == doctest::Approx(closed).epsilon(1e-12));
  }

  // s = 0: norm reduces to sqrt(4 - 4 cos theta) = 2 sqrt(2) |sin(theta/2)|.
  for (double th : {0.1, 0.9, 2.5, -1.7}) {
    const Affine a = compose_shear_rotation(0.0, th);
    CHECK(affine_param_norm(a) ==
          doctest::Approx(2.0 * std::sqrt(2.0) * std::abs(std::sin(th / 2))).epsilon(1e-12));
  }

  // Paper operating point.
  const Affine p = compose_shear_rotation(0.02, -2.0 * pi / 180.0);
  CHECK(affine_param_norm(p) == doctest::Approx(0.0651).epsilon(2e-3));
}

TEST_CASE("rotation-scale-translation composition parameters and norm") {
  CHECK(affine_param_norm(compose_rot_scale_trans(0.0, 1.0, 0.0, 0.0)) == 0.0);
  CHECK(affine_param_norm(compose_rot_scale_trans(0.0, 1.0, 0.3, 0.4)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(compose_rot_scale_trans(0.0, -1.0, 0.0, 0.0), std::invalid_argument);

  for (int trial = 0; trial < 50; ++trial) {
    const RandomStream s(103, trial);
    const double th = 2.0 * (s.u01(0) - 0.5) * pi;
    const double al = 0.2 + 1.6 * s.u01(1);
    const double tu = s.u01(2) - 0.5, tv = s.u01(3) - 0.5;
    const Affine a = compose_rot_scale_trans(th, al, tu, tv);
    const double closed = std::sqrt(2.0 + 2.0 * al * al - 4.0 * al * std::cos(th) +
                                    tu * tu + tv * tv);
    CHECK(affine_param_norm(a) == doctest::Approx(closed).epsilon(1e-12));
  }

  // Paper operating point: theta=10 deg, alpha=1.2, ||t||^2=0.1.
  const Affine p = compose_rot_scale_trans(10.0 * pi / 180.0, 1.2, std::sqrt(0.1), 0.0);
  CHECK(affine_param_norm(p) == doctest::Approx(0.503).epsilon(2e-3));
}

TEST_CASE("field_from_spec dispatch") {
  const CoordinateField grid = normalized_grid(6, 6);
  CHECK(field_from_spec(Translation{0, 0}, grid).norm_l2() == 0.0);
  CHECK(field_from_spec(Dct{2, std::vector<double>(8, 0.0)}, grid).norm_l2() == 0.0);

  const VectorField via_spec = field_from_spec(Rotation{0.3}, grid);
  CHECK(max_abs_diff(via_spec, field_rotation(0.3, grid)) == 0.0);

  VectorField raw(6, 6);
  raw.u[3] = 0.25;
  const VectorField passed = field_from_spec(RawField{raw}, grid);
  CHECK(passed.u[3] == 0.25);
  CHECK_THROWS_AS(field_from_spec(RawField{VectorField(5, 6)}, grid), std::invalid_argument);
}

TEST_CASE("vector field binary roundtrip") {
  VectorField f(4, 3);
  const RandomStream s(19, 0);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    f.u[i] = s.u01(2 * i) - 0.5;
    f.v[i] = s.u01(2 * i + 1) - 0.5;
  }
  const std::string path = "test_field.drsvf";
  save_vector_field(f, path);
  const VectorField g = load_vector_field(path);
  CHECK(g.width == 4);
  CHECK(g.height == 3);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    CHECK(g.u[i] == f.u[i]);
    CHECK(g.v[i] == f.v[i]);
  }
  std::remove(path.c_str());
}
