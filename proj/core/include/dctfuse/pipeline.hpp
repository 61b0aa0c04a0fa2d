#pragma once

#include <functional>
#include <optional>
#include <span>

#include "dctfuse/collaborative.hpp"
#include "dctfuse/fusion.hpp"
#include "dctfuse/image.hpp"

namespace dctfuse {

enum class Mode {
  FuseOnly,  ///< DCT fusion, optionally with hard thresholding at sigma.
  Joint,     ///< Collaborative denoising feeding the fusion in the DCT domain.
};

/// One fused patch, reported to an observer before the inverse transform.
struct FusionEvent {
  Position position;
  int channel;
  /// The K per-exposure DCT patches that were fused (denoised in joint mode).
  std::span<const DctPatch> inputs;
  const DctPatch& fused;
  /// AC threshold T * sigma applied inside the fusion.
  double threshold;
  /// True for the reference patch of a joint-mode group (always true in
  /// fuse-only mode).
  bool is_reference;
};

using FusionObserver = std::function<void(const FusionEvent&)>;

struct PipelineConfig {
  FusionParams fusion;
  MatchParams match;
  int step = 2;
  Mode mode = Mode::FuseOnly;
  /// Forces a single worker; results are then bit-reproducible.
  bool deterministic = false;
  /// Worker count; 0 picks std::thread::hardware_concurrency().
  int threads = 0;
  /// Joint mode only: noise level of the fusion-stage threshold. Defaults to
  /// fusion.sigma when unset.
  std::optional<double> fusion_sigma;
  /// Called for every fused patch. Setting an observer forces sequential
  /// execution.
  FusionObserver observer;

  /// Throws std::invalid_argument when the parameters are inconsistent.
  void validate() const;
};

/// mu_k: mean luma of each exposure in [0,1]. For RGB input this is the mean
/// of (R+G+B)/3, i.e. the Y channel rescaled by 1/sqrt(3).
ExposureContext compute_exposure_context(const ExposureSequence& seq);

/// DCT-domain exposure fusion of registered RGB or grayscale images. RGB is
/// fused in the orthonormal YUV space and converted back. Output is clamped
/// to [0,1].
Image fuse_sequence(const ExposureSequence& seq, const PipelineConfig& cfg);

/// Joint collaborative denoising and fusion. Requires fusion.sigma > 0.
///
/// For every reference origin the k nearest 3D blocks are found on luma;
/// each exposure's group is filtered in the DCT domain and the denoised
/// coefficients go straight into the fusion. Each fused patch is inverted
/// and averaged in at its own matched position.
Image denoise_and_fuse(const ExposureSequence& seq, const PipelineConfig& cfg);

/// Dispatches on cfg.mode.
Image process(const ExposureSequence& seq, const PipelineConfig& cfg);

}  // namespace dctfuse
