#pragma once

#include <array>
#include <string>
#include <string_view>

#include "dctfuse/pipeline.hpp"

namespace dctfuse {

/// Operation counts of the joint denoise-and-fuse algorithm with exhaustive
/// block matching and naive (matrix-product) transforms.
struct CostReport {
  struct Term {
    std::string_view label;
    double ops_per_pixel;
  };

  /// In order: 2D DCTs of the search window, 3D block matching, 1D stack
  /// DCTs, fusion, inverse 2D DCTs of fused patches, aggregation.
  std::array<Term, 6> terms;
  double ops_per_pixel = 0.0;
  double pixels = 0.0;
  /// ops_per_pixel * pixels, i.e. one reference per pixel.
  double total_ops = 0.0;
  /// total_ops / step^2 for a reference grid with stride `step`.
  double step_adjusted_ops = 0.0;
};

/// Cost of one b x b 2D DCT computed separably as two matrix products.
double dct2_cost(int block);
/// Cost of one length-k 1D DCT as a matrix-vector product.
double dct1_cost(int length);

CostReport estimate_cost(const PipelineConfig& cfg, int width, int height,
                         int exposures);

/// Plain-text report, one labeled line per term.
std::string format_cost_report(const CostReport& report);

}  // namespace dctfuse
