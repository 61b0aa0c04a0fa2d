#include "dctfuse/color.hpp"

#include <cmath>
#include <stdexcept>

namespace dctfuse {

const ColorMatrix& ColorMatrix::yuv() {
  static const ColorMatrix matrix = [] {
    const double r3 = 1.0 / std::sqrt(3.0);
    const double r2 = std::sqrt(2.0) / 2.0;
    const double r6 = 1.0 / std::sqrt(6.0);
    return ColorMatrix{{{{r3, r3, r3}, {r2, 0.0, -r2}, {r6, -2.0 * r6, r6}}}};
  }();
  return matrix;
}

std::array<double, 3> ColorMatrix::apply(const std::array<double, 3>& v) const {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  }
  return out;
}

std::array<double, 3> ColorMatrix::apply_transpose(
    const std::array<double, 3>& v) const {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = m[0][i] * v[0] + m[1][i] * v[1] + m[2][i] * v[2];
  }
  return out;
}

namespace {

template <bool Forward>
Image convert(const Image& img) {
  if (img.channels() != 3) {
    throw std::invalid_argument("color conversion needs a 3-channel image");
  }
  const auto& matrix = ColorMatrix::yuv();
  Image out(img.width(), img.height(), 3);
  const auto a = img.plane(0);
  const auto b = img.plane(1);
  const auto c = img.plane(2);
  auto o0 = out.plane(0);
  auto o1 = out.plane(1);
  auto o2 = out.plane(2);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    const std::array<double, 3> px{a[i], b[i], c[i]};
    const auto r = Forward ? matrix.apply(px) : matrix.apply_transpose(px);
    o0[i] = r[0];
    o1[i] = r[1];
    o2[i] = r[2];
  }
  return out;
}

}  // namespace

Image rgb_to_yuv(const Image& img) { return convert<true>(img); }

Image yuv_to_rgb(const Image& img) { return convert<false>(img); }

}  // namespace dctfuse
