#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dctfuse/io.hpp"

namespace dctfuse {

Image add_gaussian_noise(const Image& img, double sigma_8bit, std::uint64_t seed) {
  if (!(sigma_8bit >= 0.0)) {
    throw std::invalid_argument("noise sigma must be non-negative");
  }
  Image out = img;
  if (sigma_8bit == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma_8bit / 255.0);
  for (double& v : out.data()) v += noise(rng);
  return out;
}

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("psnr needs images of identical shape");
  }
  const auto da = a.data();
  const auto db = b.data();
  double sse = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = da[i] - db[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(da.size());
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace dctfuse
