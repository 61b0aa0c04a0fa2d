#include "dctfuse/collaborative.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dctfuse {

void MatchParams::validate() const {
  if (search_window < 1 || search_window % 2 == 0) {
    throw std::invalid_argument("search window must be a positive odd size");
  }
  if (group_size < 1) throw std::invalid_argument("group size must be >= 1");
  if (block < 1) throw std::invalid_argument("block size must be >= 1");
}

namespace {

bool valid_origin(Position p, int block, int width, int height) {
  return p.x >= 0 && p.y >= 0 && p.x + block <= width && p.y + block <= height;
}

// Per-column partial sums keep the inner loop free of a serial reduction.
template <int B>
double patch_norm_fixed(const double* plane, int stride, Position a, Position b) {
  double acc[B] = {};
  for (int r = 0; r < B; ++r) {
    const double* pa = plane + static_cast<std::size_t>(a.y + r) * stride + a.x;
    const double* pb = plane + static_cast<std::size_t>(b.y + r) * stride + b.x;
    for (int c = 0; c < B; ++c) {
      const double d = pa[c] - pb[c];
      acc[c] += d * d;
    }
  }
  double ss = 0.0;
  for (int c = 0; c < B; ++c) ss += acc[c];
  return std::sqrt(ss);
}

double patch_norm(const double* plane, int stride, Position a, Position b,
                  int block) {
  switch (block) {
    case 4: return patch_norm_fixed<4>(plane, stride, a, b);
    case 8: return patch_norm_fixed<8>(plane, stride, a, b);
    case 16: return patch_norm_fixed<16>(plane, stride, a, b);
    default: break;
  }
  double ss = 0.0;
  for (int r = 0; r < block; ++r) {
    const double* pa = plane + static_cast<std::size_t>(a.y + r) * stride + a.x;
    const double* pb = plane + static_cast<std::size_t>(b.y + r) * stride + b.x;
    for (int c = 0; c < block; ++c) {
      const double d = pa[c] - pb[c];
      ss += d * d;
    }
  }
  return std::sqrt(ss);
}

// Summing the per-exposure norms in ascending order makes the distance
// independent of the order of the exposures.
double sorted_sum(std::span<double> norms) {
  std::sort(norms.begin(), norms.end());
  double total = 0.0;
  for (double n : norms) total += n;
  return total;
}

bool raster_less(const BlockMatch& a, const BlockMatch& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.position.y != b.position.y) return a.position.y < b.position.y;
  return a.position.x < b.position.x;
}

}  // namespace

double block_distance_3d(const ExposureSequence& luma, Position a, Position b,
                         int block) {
  const int w = luma.width();
  const int h = luma.height();
  if (!valid_origin(a, block, w, h) || !valid_origin(b, block, w, h)) {
    throw std::out_of_range("patch exceeds image bounds");
  }
  std::vector<double> norms;
  norms.reserve(luma.size());
  for (const auto& img : luma) {
    norms.push_back(patch_norm(img.plane(0).data(), w, a, b, block));
  }
  return sorted_sum(norms);
}

BlockMatcher::BlockMatcher(const ExposureSequence& luma, const MatchParams& params)
    : width_(luma.width()), height_(luma.height()), params_(params) {
  params_.validate();
  if (params_.block > width_ || params_.block > height_) {
    throw std::invalid_argument("image is smaller than the block size");
  }
  for (const auto& img : luma) planes_.push_back(img.plane(0).data());
  norms_.resize(planes_.size());
  const std::size_t side = static_cast<std::size_t>(params_.search_window);
  candidates_.reserve(side * side);
}

double BlockMatcher::distance(Position a, Position b) {
  for (std::size_t i = 0; i < planes_.size(); ++i) {
    norms_[i] = patch_norm(planes_[i], width_, a, b, params_.block);
  }
  return sorted_sum(norms_);
}

void BlockMatcher::find(Position ref, std::vector<BlockMatch>& out) {
  const int b = params_.block;
  if (!valid_origin(ref, b, width_, height_)) {
    throw std::out_of_range("reference patch exceeds image bounds");
  }
  const int half = params_.search_window / 2;
  const int x0 = std::max(0, ref.x - half);
  const int x1 = std::min(width_ - b, ref.x + half);
  const int y0 = std::max(0, ref.y - half);
  const int y1 = std::min(height_ - b, ref.y + half);

  candidates_.clear();
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (x == ref.x && y == ref.y) continue;
      const Position p{x, y};
      candidates_.push_back({p, distance(ref, p)});
    }
  }

  const std::size_t want = std::min<std::size_t>(
      static_cast<std::size_t>(params_.group_size) - 1, candidates_.size());
  std::partial_sort(candidates_.begin(),
                    candidates_.begin() + static_cast<std::ptrdiff_t>(want),
                    candidates_.end(), raster_less);

  out.clear();
  out.push_back({ref, 0.0});
  out.insert(out.end(), candidates_.begin(),
             candidates_.begin() + static_cast<std::ptrdiff_t>(want));
}

std::vector<BlockMatch> BlockMatcher::find(Position ref) {
  std::vector<BlockMatch> out;
  find(ref, out);
  return out;
}

std::vector<BlockMatch> find_similar_blocks(const ExposureSequence& luma,
                                            Position ref,
                                            const MatchParams& params) {
  BlockMatcher matcher(luma, params);
  return matcher.find(ref);
}

void collaborative_filter(std::span<DctPatch> members, double sigma, double T,
                          const Dct1Plan& plan) {
  const std::size_t k = members.size();
  if (k == 0) throw std::invalid_argument("empty patch group");
  if (static_cast<std::size_t>(plan.size()) != k) {
    throw std::invalid_argument("1D plan length " + std::to_string(plan.size()) +
                                " does not match group size " +
                                std::to_string(k));
  }
  const std::size_t n = members.front().coeffs.size();
  for (const auto& m : members) {
    if (m.coeffs.size() != n) {
      throw std::invalid_argument("group members must share one size");
    }
  }

  // spectrum(u, i) = sum_j A(u, j) * coeff_j(i): the 1D transform of every
  // frequency stack at once, row by row so the inner loops vectorize.
  const auto basis = plan.basis();
  const double thr = T * sigma;
  thread_local std::vector<double> spectrum;
  spectrum.assign(k * n, 0.0);
  for (std::size_t u = 0; u < k; ++u) {
    double* row = spectrum.data() + u * n;
    for (std::size_t j = 0; j < k; ++j) {
      const double w = basis[u * k + j];
      const double* src = members[j].coeffs.data();
      for (std::size_t i = 0; i < n; ++i) row[i] += w * src[i];
    }
  }
  for (std::size_t idx = 1; idx < k * n; ++idx) {
    if (std::abs(spectrum[idx]) < thr) spectrum[idx] = 0.0;
  }
  for (std::size_t j = 0; j < k; ++j) {
    double* dst = members[j].coeffs.data();
    std::fill_n(dst, n, 0.0);
    for (std::size_t u = 0; u < k; ++u) {
      const double w = basis[u * k + j];
      const double* row = spectrum.data() + u * n;
      for (std::size_t i = 0; i < n; ++i) dst[i] += w * row[i];
    }
  }
}

PatchGroup collaborative_filter_group(const PatchGroup& group, double sigma,
                                      double T, const Dct1Plan& plan) {
  PatchGroup out = group;
  collaborative_filter(out.members, sigma, T, plan);
  return out;
}

}  // namespace dctfuse
