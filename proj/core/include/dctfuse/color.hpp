#pragma once

#include <array>

#include "dctfuse/image.hpp"

namespace dctfuse {

/// Orthonormal luma/chroma basis. Rows are Y, U, V; Y = (R+G+B)/sqrt(3), so a
/// white pixel maps to Y = sqrt(3). Because the rows are orthonormal the
/// inverse is the transpose and white noise keeps its standard deviation.
struct ColorMatrix {
  std::array<std::array<double, 3>, 3> m;

  static const ColorMatrix& yuv();

  std::array<double, 3> apply(const std::array<double, 3>& rgb) const;
  std::array<double, 3> apply_transpose(const std::array<double, 3>& yuv) const;
};

/// Factor mapping the Y channel range [0, sqrt(3)] back to [0, 1].
inline constexpr double kLumaToUnit = 0.57735026918962576451;  // 1/sqrt(3)

/// Per-pixel RGB -> (Y, U, V). U and V are signed and stored unshifted.
Image rgb_to_yuv(const Image& img);

/// Per-pixel (Y, U, V) -> RGB via the transpose.
Image yuv_to_rgb(const Image& img);

}  // namespace dctfuse
