#pragma once

#include <span>
#include <vector>

#include "dctfuse/color.hpp"
#include "dctfuse/image.hpp"

namespace dctfuse {

/// Tunables of the DCT-domain fusion rule. `sigma` is the noise standard
/// deviation in [0,1] intensity units; zero disables hard thresholding.
struct FusionParams {
  double p = 7.0;
  double threshold = 2.7;
  double sigma = 0.0;
  double sigma_local = 0.2;
  double sigma_global = 0.2;
  int block = 8;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Per-exposure global statistics used by the DC (mean) weighting.
struct ExposureContext {
  /// mu_k: mean luma of each exposure in [0,1].
  std::vector<double> image_means;
  /// Maps the fused luma channel back to [0,1] intensity: 1/sqrt(3) for the
  /// Y of the orthonormal color transform, 1 for grayscale input.
  double luma_scale = kLumaToUnit;
};

/// Zeroes every AC coefficient with |c| < T * sigma. The DC term is kept.
DctPatch hard_threshold(const DctPatch& coeffs, double sigma, double T);

/// Magnitude-power weights |c_k|^p / sum_n |c_n|^p at one frequency, after
/// zeroing magnitudes below `threshold`. All-zero input yields all-zero
/// weights. `out` must have magnitudes.size() entries.
void magnitude_weights(std::span<const double> magnitudes, double p,
                       double threshold, std::span<double> out);

/// AC weights for one frequency with the hard threshold T * sigma folded in.
std::vector<double> ac_weights(std::span<const double> magnitudes, double p,
                               double sigma, double T);

/// Exposedness weights for luma DC terms: a local term on the patch mean and
/// a global term on the image mean, both Gaussian around mid-gray 0.5,
/// normalized to sum to one.
void dc_weights_luma(std::span<const double> patch_means,
                     const ExposureContext& ctx, double sigma_local,
                     double sigma_global, std::span<double> out);
std::vector<double> dc_weights_luma(std::span<const double> patch_means,
                                    const ExposureContext& ctx,
                                    double sigma_local, double sigma_global);

/// Fuses K co-located luma DCT patches: AC terms by thresholded magnitude
/// weights applied to the signed coefficients, DC by exposedness weights.
void fuse_patch_luma(std::span<const DctPatch> dcts, const ExposureContext& ctx,
                     const FusionParams& params, DctPatch& out);
DctPatch fuse_patch_luma(std::span<const DctPatch> dcts,
                         const ExposureContext& ctx, const FusionParams& params);

/// Fuses K co-located chroma DCT patches: every frequency, DC included, by
/// magnitude weights. Only AC magnitudes are thresholded.
void fuse_patch_chroma(std::span<const DctPatch> dcts, const FusionParams& params,
                       DctPatch& out);
DctPatch fuse_patch_chroma(std::span<const DctPatch> dcts,
                           const FusionParams& params);

}  // namespace dctfuse
