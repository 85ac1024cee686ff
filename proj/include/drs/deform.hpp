#ifndef DRS_DEFORM_HPP
#define DRS_DEFORM_HPP

#include <string>
#include <variant>
#include <vector>

#include "drs/image.hpp"

namespace drs {

// Per-pixel displacement in normalized units, row-major.
struct VectorField {
  int width = 0;
  int height = 0;
  std::vector<double> u;  // size width*height
  std::vector<double> v;

  VectorField() = default;
  VectorField(int w, int h)
      : width(w), height(h),
        u(static_cast<std::size_t>(w) * h, 0.0),
        v(static_cast<std::size_t>(w) * h, 0.0) {}

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  double norm_l1() const;
  double norm_l2() const;
};

struct Translation { double tu = 0.0; double tv = 0.0; };
struct Rotation { double theta = 0.0; };
struct Scaling { double alpha = 1.0; };
struct Affine { double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0; };
struct ShearRotation { double s = 0.0; double theta = 0.0; };
struct RotScaleTrans { double theta = 0.0; double alpha = 1.0; double tu = 0.0; double tv = 0.0; };
struct Dct {
  int k = 0;
  std::vector<double> coeffs;  // 2*k*k, u-block then v-block, row-major over the window
};
struct RawField { VectorField field; };

using DeformSpec = std::variant<Translation, Rotation, Scaling, Affine,
                                ShearRotation, RotScaleTrans, Dct, RawField>;

VectorField field_translation(double tu, double tv, const CoordinateField& grid);
VectorField field_rotation(double theta, const CoordinateField& grid);
VectorField field_scaling(double alpha, const CoordinateField& grid);
// Scaling by (alpha - 1) directly; no positivity requirement (smoothing may
// sample any delta).
VectorField field_scale_delta(double delta, const CoordinateField& grid);
VectorField field_affine(double a, double b, double c, double d, double e, double f,
                         const CoordinateField& grid);
VectorField field_dct(const std::vector<double>& coeffs, int k, const CoordinateField& grid);

// Affine parameters of shear(s) followed by rotation(theta).
Affine compose_shear_rotation(double s, double theta);
// Affine parameters of rotation(theta), scaling(alpha), translation(tu,tv).
Affine compose_rot_scale_trans(double theta, double alpha, double tu, double tv);

double affine_param_norm(const Affine& a);

VectorField field_from_spec(const DeformSpec& spec, const CoordinateField& grid);

// Orthonormal DCT-II (forward) / DCT-III (inverse) over a full grid, used as
// the roundtrip oracle for the truncated synthesis.
std::vector<double> dct2_forward(const std::vector<double>& plane, int width, int height);
std::vector<double> dct2_inverse(const std::vector<double>& coeffs, int width, int height);

// Flat little-endian binary: magic "DRSVF1", W, H as u32, u-plane, v-plane (f64).
void save_vector_field(const VectorField& field, const std::string& path);
VectorField load_vector_field(const std::string& path);

}  // namespace drs

#endif
