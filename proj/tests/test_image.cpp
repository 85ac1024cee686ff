#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdint>

#include "drs/deform.hpp"
#include "drs/image.hpp"
#include "drs/smoothing.hpp"

using namespace drs;

TEST_CASE("normalized grid corners and center") {
  const CoordinateField g2 = normalized_grid(2, 2);
  CHECK(g2.px(0, 0) == -1.0);
  CHECK(g2.py(0, 0) == -1.0);
  CHECK(g2.px(0, 1) == 1.0);
  CHECK(g2.py(1, 0) == 1.0);
  CHECK(g2.px(1, 1) == 1.0);
  CHECK(g2.py(1, 1) == 1.0);

  const CoordinateField g3 = normalized_grid(3, 3);
  CHECK(g3.px(1, 1) == 0.0);
  CHECK(g3.py(1, 1) == 0.0);

  // Pixel (col 1, row 0) on a 28x28 grid.
  const CoordinateField g28 = normalized_grid(28, 28);
  CHECK(g28.px(0, 1) == doctest::Approx(-1.0 + 2.0 / 27.0).epsilon(1e-12));
  CHECK(g28.py(0, 1) == -1.0);
}

TEST_CASE("normalized grid degenerate axis and errors") {
  const CoordinateField g = normalized_grid(1, 5);
  CHECK(g.px(0, 0) == 0.0);
  CHECK_THROWS_AS(normalized_grid(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(normalized_grid(4, 0), std::invalid_argument);
}

TEST_CASE("bilinear sampling reproduces pixel centers") {
  Image im(5, 4, 1);
  const RandomStream s(11, 0);
  for (std::size_t i = 0; i < im.size(); ++i) im.pixels()[i] = s.u01(i);
  const CoordinateField grid = normalized_grid(5, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 5; ++c)
      CHECK(bilinear_sample(im, grid.px(r, c), grid.py(r, c))[0] == im.at(0, r, c));
}

TEST_CASE("bilinear sampling blends the 4 neighbors") {
  // 2x2 checkerboard {0,1;0,1}; the grid center averages all 4.
  const Image im(2, 2, 1, {0.0, 1.0, 0.0, 1.0});
  CHECK(bilinear_sample(im, 0.0, 0.0)[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bilinear sampling outside the frame is zero") {
  const Image im(4, 4, 1, std::vector<double>(16, 1.0));
  // Beyond one texel outside the border every neighbor is out of frame.
  const double texel = 2.0 / 3.0;
  CHECK(bilinear_sample(im, -1.0 - 1.5 * texel, 0.0)[0] == 0.0);
  CHECK(bilinear_sample(im, 0.0, 1.0 + 1.5 * texel)[0] == 0.0);
  CHECK(bilinear_sample(im, 100.0, 100.0)[0] == 0.0);
}

TEST_CASE("bilinear sampling rejects non-finite points") {
  const Image im(2, 2, 1);
  CHECK_THROWS_AS(bilinear_sample(im, std::nan(""), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(bilinear_sample(im, 0.0, INFINITY), std::invalid_argument);
}

TEST_CASE("warp with zero field is the identity, bit for bit") {
  Image im(7, 7, 1);
  const RandomStream s(3, 0);
  for (std::size_t i = 0; i < im.size(); ++i) im.pixels()[i] = s.u01(i);
  const Image out = warp(im, VectorField(7, 7));
  for (std::size_t i = 0; i < im.size(); ++i) CHECK(out.pixels()[i] == im.pixels()[i]);
}

TEST_CASE("constant field of one texel shifts the image left") {
  const int W = 6, H = 4;
  Image im(W, H, 1);
  const RandomStream s(5, 0);
  for (std::size_t i = 0; i < im.size(); ++i) im.pixels()[i] = s.u01(i);
  const CoordinateField grid = normalized_grid(W, H);
  const VectorField field = field_translation(2.0 / (W - 1), 0.0, grid);
  const Image out = warp(im, field);
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W - 1; ++c) CHECK(out.at(0, r, c) == im.at(0, r, c + 1));
    CHECK(out.at(0, r, W - 1) == 0.0);  // zero column enters on the right
  }
}

TEST_CASE("field pushing everything off-frame yields black") {
  Image im(5, 5, 1);
  for (double& p : im.pixels()) p = 1.0;
  const CoordinateField grid = normalized_grid(5, 5);
  const Image out = warp(im, field_translation(10.0, 10.0, grid));
  for (double p : out.pixels()) CHECK(p == 0.0);
}

TEST_CASE("warp rejects mismatched field shapes") {
  const Image im(4, 4, 1);
  CHECK_THROWS_AS(warp(im, VectorField(3, 4)), std::invalid_argument);
}

TEST_CASE("warp is linear in the image") {
  const int W = 6, H = 6;
  Image x1(W, H, 1), x2(W, H, 1);
  const RandomStream s(17, 0);
  for (std::size_t i = 0; i < x1.size(); ++i) {
    x1.pixels()[i] = s.u01(2 * i);
    x2.pixels()[i] = s.u01(2 * i + 1);
  }
  const CoordinateField grid = normalized_grid(W, H);
  const VectorField psi = field_rotation(0.3, grid);
  const double a = 0.37, b = 0.55;
  Image mix(W, H, 1);
  for (std::size_t i = 0; i < mix.size(); ++i)
    mix.pixels()[i] = a * x1.pixels()[i] + b * x2.pixels()[i];
  const Image wm = warp(mix, psi), w1 = warp(x1, psi), w2 = warp(x2, psi);
  for (std::size_t i = 0; i < mix.size(); ++i)
    CHECK(wm.pixels()[i] == doctest::Approx(a * w1.pixels()[i] + b * w2.pixels()[i]).epsilon(1e-12));
}

TEST_CASE("warp outputs stay inside [0,1]") {
  Image im(8, 8, 1);
  const RandomStream s(23, 0);
  for (std::size_t i = 0; i < im.size(); ++i) im.pixels()[i] = s.u01(i);
  const CoordinateField grid = normalized_grid(8, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomStream t(29, trial);
    const Image out = warp(im, field_affine(t.u01(0) - 0.5, t.u01(1) - 0.5, t.u01(2) - 0.5,
                                            t.u01(3) - 0.5, t.u01(4) - 0.5, t.u01(5) - 0.5,
                                            grid));
    for (double p : out.pixels()) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("sampling along a horizontal edge interpolates convexly") {
  Image im(5, 5, 1);
  const RandomStream s(31, 0);
  for (std::size_t i = 0; i < im.size(); ++i) im.pixels()[i] = s.u01(i);
  const CoordinateField grid = normalized_grid(5, 5);
  const int r = 2;
  for (int c = 0; c + 1 < 5; ++c) {
    for (double w : {0.1, 0.25, 0.5, 0.9}) {
      const double px = (1.0 - w) * grid.px(r, c) + w * grid.px(r, c + 1);
      const double expected = (1.0 - w) * im.at(0, r, c) + w * im.at(0, r, c + 1);
      CHECK(bilinear_sample(im, px, grid.py(r, c))[0] ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("image invariants are enforced") {
  CHECK_THROWS_AS(Image(2, 2, 1, {0.0, 1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Image(2, 2, 1, {0.0, 1.0, 0.5, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(Image(2, 2, 2), std::invalid_argument);
}
