#include "dctfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dctfuse {

void FusionParams::validate() const {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (!(threshold >= 0.0)) throw std::invalid_argument("T must be non-negative");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (!(sigma_local > 0.0) || !(sigma_global > 0.0)) {
    throw std::invalid_argument("sigma_l and sigma_g must be positive");
  }
  if (block < 1 || block > 32) {
    throw std::invalid_argument("block size must be in [1, 32]");
  }
}

DctPatch hard_threshold(const DctPatch& coeffs, double sigma, double T) {
  DctPatch out = coeffs;
  const double thr = T * sigma;
  for (std::size_t i = 1; i < out.coeffs.size(); ++i) {
    if (std::abs(out.coeffs[i]) < thr) out.coeffs[i] = 0.0;
  }
  return out;
}

namespace {

// x^p for x in [0, 1]. Small integer exponents avoid std::pow in the hot loop.
double unit_power(double x, double p, int int_p) {
  if (int_p > 0) {
    double r = 1.0;
    double base = x;
    for (int e = int_p; e > 0; e >>= 1) {
      if (e & 1) r *= base;
      base *= base;
    }
    return r;
  }
  return std::pow(x, p);
}

int integer_exponent(double p) {
  return (p == std::floor(p) && p >= 1.0 && p <= 64.0) ? static_cast<int>(p) : 0;
}

void check_stack(std::span<const DctPatch> dcts, const DctPatch& out) {
  if (dcts.empty()) throw std::invalid_argument("fusion needs at least one patch");
  const auto& first = dcts.front();
  for (const auto& d : dcts) {
    if (d.size != first.size || d.coeffs.size() != first.coeffs.size()) {
      throw std::invalid_argument("fused patches must share one size");
    }
    if (!(d.origin == first.origin)) {
      throw std::invalid_argument("fused patches must share one origin");
    }
  }
  if (out.coeffs.size() != first.coeffs.size()) {
    throw std::invalid_argument("fusion output has the wrong size");
  }
}

// Scratch reused across calls on the same thread; K is small.
struct Scratch {
  std::vector<double> values;
  std::vector<double> mags;
  std::vector<double> weights;

  void resize(std::size_t k) {
    values.resize(k);
    mags.resize(k);
    weights.resize(k);
  }
};

Scratch& scratch(std::size_t k) {
  thread_local Scratch s;
  s.resize(k);
  return s;
}

// Fuses frequency index i with magnitude weights at the given threshold.
double fuse_frequency(std::span<const DctPatch> dcts, std::size_t i, double p,
                      double threshold, Scratch& s) {
  const std::size_t k = dcts.size();
  for (std::size_t n = 0; n < k; ++n) {
    s.values[n] = dcts[n].coeffs[i];
    s.mags[n] = std::abs(s.values[n]);
  }
  magnitude_weights(s.mags, p, threshold, s.weights);
  double acc = 0.0;
  for (std::size_t n = 0; n < k; ++n) acc += s.weights[n] * s.values[n];
  return acc;
}

}  // namespace

void magnitude_weights(std::span<const double> magnitudes, double p,
                       double threshold, std::span<double> out) {
  if (out.size() != magnitudes.size()) {
    throw std::invalid_argument("weight output size mismatch");
  }
  double peak = 0.0;
  for (double m : magnitudes) {
    if (!(m < threshold)) peak = std::max(peak, m);
  }
  if (peak == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  // Normalizing by the peak keeps |c|^p away from underflow and overflow.
  const int int_p = integer_exponent(p);
  double total = 0.0;
  for (std::size_t n = 0; n < magnitudes.size(); ++n) {
    const double m = magnitudes[n];
    out[n] = m < threshold ? 0.0 : unit_power(m / peak, p, int_p);
    total += out[n];
  }
  for (double& w : out) w /= total;
}

std::vector<double> ac_weights(std::span<const double> magnitudes, double p,
                               double sigma, double T) {
  std::vector<double> out(magnitudes.size());
  magnitude_weights(magnitudes, p, T * sigma, out);
  return out;
}

void dc_weights_luma(std::span<const double> patch_means,
                     const ExposureContext& ctx, double sigma_local,
                     double sigma_global, std::span<double> out) {
  const std::size_t k = patch_means.size();
  if (ctx.image_means.size() != k || out.size() != k) {
    throw std::invalid_argument(
        "exposure context has " + std::to_string(ctx.image_means.size()) +
        " image means for " + std::to_string(k) + " patches");
  }
  const double inv_l = 1.0 / (sigma_local * sigma_local);
  const double inv_g = 1.0 / (sigma_global * sigma_global);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < k; ++n) {
    const double dl = patch_means[n] - 0.5;
    const double dg = ctx.image_means[n] - 0.5;
    out[n] = -dl * dl * inv_l - dg * dg * inv_g;
    peak = std::max(peak, out[n]);
  }
  // Evaluated relative to the largest exponent so the weights never all
  // underflow; the shift cancels in the normalization.
  double total = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    out[n] = std::exp(out[n] - peak);
    total += out[n];
  }
  for (double& w : out) w /= total;
}

std::vector<double> dc_weights_luma(std::span<const double> patch_means,
                                    const ExposureContext& ctx,
                                    double sigma_local, double sigma_global) {
  std::vector<double> out(patch_means.size());
  dc_weights_luma(patch_means, ctx, sigma_local, sigma_global, out);
  return out;
}

void fuse_patch_luma(std::span<const DctPatch> dcts, const ExposureContext& ctx,
                     const FusionParams& params, DctPatch& out) {
  check_stack(dcts, out);
  const std::size_t k = dcts.size();
  if (ctx.image_means.size() != k) {
    throw std::invalid_argument("exposure context does not match patch count");
  }
  Scratch& s = scratch(k);
  const double thr = params.threshold * params.sigma;
  const std::size_t n = out.coeffs.size();
  for (std::size_t i = 1; i < n; ++i) {
    out.coeffs[i] = fuse_frequency(dcts, i, params.p, thr, s);
  }

  // DC = b * mean for the orthonormal transform.
  const double to_mean = ctx.luma_scale / dcts.front().size;
  for (std::size_t m = 0; m < k; ++m) {
    s.mags[m] = dcts[m].coeffs[0] * to_mean;
  }
  dc_weights_luma(s.mags, ctx, params.sigma_local, params.sigma_global, s.weights);
  double dc = 0.0;
  for (std::size_t m = 0; m < k; ++m) dc += s.weights[m] * dcts[m].coeffs[0];
  out.coeffs[0] = dc;
  out.origin = dcts.front().origin;
  out.size = dcts.front().size;
}

DctPatch fuse_patch_luma(std::span<const DctPatch> dcts,
                         const ExposureContext& ctx, const FusionParams& params) {
  if (dcts.empty()) throw std::invalid_argument("fusion needs at least one patch");
  DctPatch out(dcts.front().origin, dcts.front().size);
  fuse_patch_luma(dcts, ctx, params, out);
  return out;
}

void fuse_patch_chroma(std::span<const DctPatch> dcts, const FusionParams& params,
                       DctPatch& out) {
  check_stack(dcts, out);
  Scratch& s = scratch(dcts.size());
  const double thr = params.threshold * params.sigma;
  out.coeffs[0] = fuse_frequency(dcts, 0, params.p, 0.0, s);
  for (std::size_t i = 1; i < out.coeffs.size(); ++i) {
    out.coeffs[i] = fuse_frequency(dcts, i, params.p, thr, s);
  }
  out.origin = dcts.front().origin;
  out.size = dcts.front().size;
}

DctPatch fuse_patch_chroma(std::span<const DctPatch> dcts,
                           const FusionParams& params) {
  if (dcts.empty()) throw std::invalid_argument("fusion needs at least one patch");
  DctPatch out(dcts.front().origin, dcts.front().size);
  fuse_patch_chroma(dcts, params, out);
  return out;
}

}  // namespace dctfuse
