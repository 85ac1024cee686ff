#include "drs/deform.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace drs {

double VectorField::norm_l1() const {
  double s = 0.0;
  for (double x : u) s += std::abs(x);
  for (double x : v) s += std::abs(x);
  return s;
}

double VectorField::norm_l2() const {
  double s = 0.0;
  for (double x : u) s += x * x;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

VectorField zero_field(const CoordinateField& grid) {
  return VectorField(grid.width, grid.height);
}

}  // namespace

VectorField field_translation(double tu, double tv, const CoordinateField& grid) {
  require_finite(tu, "field_translation");
  require_finite(tv, "field_translation");
  VectorField f = zero_field(grid);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    f.u[i] = tu;
    f.v[i] = tv;
  }
  return f;
}

VectorField field_rotation(double theta, const CoordinateField& grid) {
  require_finite(theta, "field_rotation");
  const double c = std::cos(theta) - 1.0;
  const double s = std::sin(theta);
  VectorField f = zero_field(grid);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    const double n = grid.x[i];
    const double m = grid.y[i];
    f.u[i] = n * c - m * s;
    f.v[i] = n * s + m * c;
  }
  return f;
}

VectorField field_scale_delta(double delta, const CoordinateField& grid) {
  require_finite(delta, "field_scale_delta");
  VectorField f = zero_field(grid);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    f.u[i] = delta * grid.x[i];
    f.v[i] = delta * grid.y[i];
  }
  return f;
}

VectorField field_scaling(double alpha, const CoordinateField& grid) {
  if (!(alpha > 0.0)) throw std::invalid_argument("field_scaling: alpha must be > 0");
  return field_scale_delta(alpha - 1.0, grid);
}

VectorField field_affine(double a, double b, double c, double d, double e, double f,
                         const CoordinateField& grid) {
  for (double x : {a, b, c, d, e, f}) require_finite(x, "field_affine");
  VectorField out = zero_field(grid);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    const double n = grid.x[i];
    const double m = grid.y[i];
    out.u[i] = a * n + b * m + e;
    out.v[i] = c * n + d * m + f;
  }
  return out;
}

namespace {

// Orthonormal DCT scale factor for frequency f over length n.
double dct_scale(int f, int n) {
  return std::sqrt((f == 0 ? 1.0 : 2.0) / n);
}

double dct_basis(int f, int i, int n) {
  return dct_scale(f, n) * std::cos(std::numbers::pi * f * (i + 0.5) / n);
}

}  // namespace

VectorField field_dct(const std::vector<double>& coeffs, int k, const CoordinateField& grid) {
  if (k < 1 || k > std::min(grid.width, grid.height))
    throw std::invalid_argument("field_dct: window size out of range");
  if (coeffs.size() != static_cast<std::size_t>(2) * k * k)
    throw std::invalid_argument("field_dct: expected 2*k*k coefficients");
  VectorField f = zero_field(grid);
  const int W = grid.width, H = grid.height;
  // Direct truncated synthesis; k is tiny in practice.
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * W + c;
      double u = 0.0, v = 0.0;
      for (int p = 0; p < k; ++p) {
        const double br = dct_basis(p, r, H);
        for (int q = 0; q < k; ++q) {
          const double b = br * dct_basis(q, c, W);
          u += coeffs[static_cast<std::size_t>(p) * k + q] * b;
          v += coeffs[static_cast<std::size_t>(k) * k + p * k + q] * b;
        }
      }
      f.u[i] = u;
      f.v[i] = v;
    }
  }
  return f;
}

Affine compose_shear_rotation(double s, double theta) {
  require_finite(s, "compose_shear_rotation");
  require_finite(theta, "compose_shear_rotation");
  const double ct = std::cos(theta), st = std::sin(theta);
  return Affine{ct - 1.0, s * ct - st, st, s * st + ct - 1.0, 0.0, 0.0};
}

Affine compose_rot_scale_trans(double theta, double alpha, double tu, double tv) {
  if (!(alpha > 0.0)) throw std::invalid_argument("compose_rot_scale_trans: alpha must be > 0");
  require_finite(theta, "compose_rot_scale_trans");
  const double ct = std::cos(theta), st = std::sin(theta);
  return Affine{alpha * ct - 1.0, -alpha * st, alpha * st, alpha * ct - 1.0, tu, tv};
}

double affine_param_norm(const Affine& p) {
  return std::sqrt(p.a * p.a + p.b * p.b + p.c * p.c + p.d * p.d + p.e * p.e + p.f * p.f);
}

VectorField field_from_spec(const DeformSpec& spec, const CoordinateField& grid) {
  struct Visitor {
    const CoordinateField& grid;
    VectorField operator()(const Translation& t) { return field_translation(t.tu, t.tv, grid); }
    VectorField operator()(const Rotation& r) { return field_rotation(r.theta, grid); }
    VectorField operator()(const Scaling& s) { return field_scaling(s.alpha, grid); }
    VectorField operator()(const Affine& a) {
      return field_affine(a.a, a.b, a.c, a.d, a.e, a.f, grid);
    }
    VectorField operator()(const ShearRotation& sr) {
      const Affine a = compose_shear_rotation(sr.s, sr.theta);
      return field_affine(a.a, a.b, a.c, a.d, a.e, a.f, grid);
    }
    VectorField operator()(const RotScaleTrans& rst) {
      const Affine a = compose_rot_scale_trans(rst.theta, rst.alpha, rst.tu, rst.tv);
      return field_affine(a.a, a.b, a.c, a.d, a.e, a.f, grid);
    }
    VectorField operator()(const Dct& d) { return field_dct(d.coeffs, d.k, grid); }
    VectorField operator()(const RawField& r) {
      if (r.field.width != grid.width || r.field.height != grid.height)
        throw std::invalid_argument("field_from_spec: raw field shape mismatch");
      return r.field;
    }
  };
  return std::visit(Visitor{grid}, spec);
}

namespace {

// 1-D orthonormal DCT-II along one axis of a row-major plane.
void dct1d(const double* in, double* out, int n, int count, int stride, int jump) {
  for (int j = 0; j < count; ++j) {
    const double* src = in + static_cast<std::ptrdiff_t>(j) * jump;
    double* dst = out + static_cast<std::ptrdiff_t>(j) * jump;
    for (int f = 0; f < n; ++f) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += src[static_cast<std::ptrdiff_t>(i) * stride] * dct_basis(f, i, n);
      dst[static_cast<std::ptrdiff_t>(f) * stride] = acc;
    }
  }
}

void idct1d(const double* in, double* out, int n, int count, int stride, int jump) {
  for (int j = 0; j < count; ++j) {
    const double* src = in + static_cast<std::ptrdiff_t>(j) * jump;
    double* dst = out + static_cast<std::ptrdiff_t>(j) * jump;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int f = 0; f < n; ++f) acc += src[static_cast<std::ptrdiff_t>(f) * stride] * dct_basis(f, i, n);
      dst[static_cast<std::ptrdiff_t>(i) * stride] = acc;
    }
  }
}

}  // namespace

std::vector<double> dct2_forward(const std::vector<double>& plane, int width, int height) {
  if (plane.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("dct2_forward: shape mismatch");
  std::vector<double> tmp(plane.size()), out(plane.size());
  dct1d(plane.data(), tmp.data(), width, height, 1, width);     // rows
  dct1d(tmp.data(), out.data(), height, width, width, 1);       // columns
  return out;
}

std::vector<double> dct2_inverse(const std::vector<double>& coeffs, int width, int height) {
  if (coeffs.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("dct2_inverse: shape mismatch");
  std::vector<double> tmp(coeffs.size()), out(coeffs.size());
  idct1d(coeffs.data(), tmp.data(), height, width, width, 1);   // columns
  idct1d(tmp.data(), out.data(), width, height, 1, width);      // rows
  return out;
}

namespace {

constexpr char kFieldMagic[6] = {'D', 'R', 'S', 'V', 'F', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(bits >> (8 * i));
  out.write(b, 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_vector_field(const VectorField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_vector_field: cannot open " + path);
  out.write(kFieldMagic, sizeof(kFieldMagic));
  put_u32(out, static_cast<std::uint32_t>(field.width));
  put_u32(out, static_cast<std::uint32_t>(field.height));
  for (double x : field.u) put_f64(out, x);
  for (double x : field.v) put_f64(out, x);
}

VectorField load_vector_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_vector_field: cannot open " + path);
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, kFieldMagic, 6) != 0)
    throw std::runtime_error("load_vector_field: bad magic in " + path);
  const int width = static_cast<int>(get_u32(in));
  const int height = static_cast<int>(get_u32(in));
  VectorField f(width, height);
  for (double& x : f.u) x = get_f64(in);
  for (double& x : f.v) x = get_f64(in);
  if (!in) throw std::runtime_error("load_vector_field: truncated file " + path);
  return f;
}

}  // namespace drs
