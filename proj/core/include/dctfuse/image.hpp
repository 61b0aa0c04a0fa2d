#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dctfuse {

/// Top-left pixel coordinate of a block.
struct Position {
  int x = 0;
  int y = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Planar raster of real-valued pixels, nominally in [0,1].
///
/// Channel c occupies the contiguous range [c * width * height, (c + 1) *
/// width * height) of data(), stored row-major. Only 1 (gray) and 3 (RGB or
/// YUV) channel images are supported.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  std::size_t plane_size() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<double> plane(int channel);
  std::span<const double> plane(int channel) const;

  double& at(int x, int y, int channel) {
    return data_[static_cast<std::size_t>(channel) * plane_size() +
                 static_cast<std::size_t>(y) * width_ + x];
  }
  double at(int x, int y, int channel) const {
    return data_[static_cast<std::size_t>(channel) * plane_size() +
                 static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// K registered images of identical shape, ordered by exposure.
class ExposureSequence {
 public:
  explicit ExposureSequence(std::vector<Image> images);

  std::size_t size() const { return images_.size(); }
  const Image& operator[](std::size_t k) const { return images_[k]; }
  auto begin() const { return images_.begin(); }
  auto end() const { return images_.end(); }

  int width() const { return images_.front().width(); }
  int height() const { return images_.front().height(); }
  int channels() const { return images_.front().channels(); }

 private:
  std::vector<Image> images_;
};

/// b x b block of spatial values, row-major.
struct Patch {
  Position origin;
  int size = 0;
  std::vector<double> values;
};

/// Orthonormal 2D-DCT coefficients of a Patch. coeffs[u * size + v] holds the
/// frequency (u, v) where u is vertical; coeffs[0] is the DC term.
struct DctPatch {
  Position origin;
  int size = 0;
  std::vector<double> coeffs;

  DctPatch() = default;
  DctPatch(Position origin_, int size_)
      : origin(origin_),
        size(size_),
        coeffs(static_cast<std::size_t>(size_) * size_, 0.0) {}

  double dc() const { return coeffs.front(); }
};

/// Copies a b x b block out of one channel. Throws std::out_of_range with
/// "patch exceeds image bounds" when the block does not fit.
Patch extract_patch(const Image& img, int channel, Position origin, int block);

/// Unchecked hot-path variant of extract_patch writing into `out` (b*b).
void read_block(const Image& img, int channel, Position origin, int block,
                std::span<double> out);

/// Reference origins of a sliding b x b window moved by `step` pixels, with
/// the last row and column snapped to the image border. Row-major, no
/// duplicates, and every pixel is covered by at least one block.
std::vector<Position> reference_grid(int width, int height, int block, int step);

/// Overlap-averaging buffer: per-channel per-pixel running sums and hit counts.
class Accumulator {
 public:
  Accumulator(int width, int height, int channels);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  void accumulate(const Patch& patch, int channel);
  void accumulate(Position origin, int block, std::span<const double> values,
                  int channel);

  /// Elementwise sum of sums and counts, for per-worker buffers.
  void merge(const Accumulator& other);

  /// Per-pixel sum / count. No clamping. Throws std::runtime_error naming
  /// the first uncovered coordinate.
  Image finalize() const;

  std::span<const std::uint32_t> counts() const { return count_; }

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<double> sum_;
  std::vector<std::uint32_t> count_;
};

}  // namespace dctfuse
