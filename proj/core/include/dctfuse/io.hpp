#pragma once

#include <cstdint>
#include <filesystem>

#include "dctfuse/image.hpp"

namespace dctfuse {

/// Reads an 8- or 16-bit grayscale or RGB PNG (palette and low bit depths are
/// expanded, alpha is dropped) into [0,1] values. Throws std::runtime_error
/// naming the path on failure.
Image load_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG, clamping to [0,1] and rounding half up.
void save_png(const Image& img, const std::filesystem::path& path);

/// Adds i.i.d. Gaussian noise of standard deviation sigma_8bit / 255 to every
/// sample. No clamping. Reproducible for a given seed.
Image add_gaussian_noise(const Image& img, double sigma_8bit, std::uint64_t seed);

/// 10 log10(1 / MSE) over all channels for [0,1] images; +infinity when the
/// images are identical.
double psnr(const Image& a, const Image& b);

}  // namespace dctfuse
