#pragma once

#include <span>
#include <vector>

#include "dctfuse/dct.hpp"
#include "dctfuse/image.hpp"

namespace dctfuse {

/// Block-matching parameters. The search window is search_window x
/// search_window candidate origins centered on the reference.
struct MatchParams {
  int search_window = 39;
  int group_size = 16;
  int block = 8;

  void validate() const;
};

struct BlockMatch {
  Position position;
  double distance = 0.0;
};

/// Similar patches of one exposure, in the 2D-DCT domain. members[0] is the
/// reference position.
struct PatchGroup {
  int exposure = 0;
  std::vector<DctPatch> members;
};

/// Cross-exposure block distance: the sum over exposures of the Euclidean
/// norm of the b x b patch difference. Uses channel 0 of every image.
double block_distance_3d(const ExposureSequence& luma, Position a, Position b,
                         int block);

/// Exhaustive k-nearest 3D block search inside a clipped window.
///
/// Holds pointers into the sequence passed at construction, which must
/// outlive the matcher. Not thread-safe; use one matcher per worker.
class BlockMatcher {
 public:
  BlockMatcher(const ExposureSequence& luma, const MatchParams& params);

  /// Up to group_size matches: the reference first, then ascending distance
  /// with ties broken by raster order (smaller y, then smaller x).
  void find(Position ref, std::vector<BlockMatch>& out);
  std::vector<BlockMatch> find(Position ref);

 private:
  double distance(Position a, Position b);

  std::vector<const double*> planes_;
  int width_;
  int height_;
  MatchParams params_;
  std::vector<double> norms_;
  std::vector<BlockMatch> candidates_;
};

std::vector<BlockMatch> find_similar_blocks(const ExposureSequence& luma,
                                            Position ref,
                                            const MatchParams& params);

/// In-place collaborative hard thresholding of one exposure's group. For each
/// 2D frequency the coefficient stack is 1D-DCT transformed along the group,
/// coefficients below T * sigma are zeroed, and the stack is transformed
/// back. The stack-DC of the spatial-DC stack is never thresholded. The plan
/// length must equal members.size().
void collaborative_filter(std::span<DctPatch> members, double sigma, double T,
                          const Dct1Plan& plan);

PatchGroup collaborative_filter_group(const PatchGroup& group, double sigma,
                                      double T, const Dct1Plan& plan);

}  // namespace dctfuse
