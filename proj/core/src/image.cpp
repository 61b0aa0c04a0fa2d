#include "dctfuse/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dctfuse {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("image must have 1 or 3 channels, got " +
                                std::to_string(channels));
  }
  data_.assign(plane_size() * static_cast<std::size_t>(channels), fill);
}

std::span<double> Image::plane(int channel) {
  return std::span<double>(data_).subspan(
      static_cast<std::size_t>(channel) * plane_size(), plane_size());
}

std::span<const double> Image::plane(int channel) const {
  return std::span<const double>(data_).subspan(
      static_cast<std::size_t>(channel) * plane_size(), plane_size());
}

ExposureSequence::ExposureSequence(std::vector<Image> images)
    : images_(std::move(images)) {
  if (images_.empty()) {
    throw std::invalid_argument("exposure sequence needs at least one image");
  }
  for (std::size_t k = 1; k < images_.size(); ++k) {
    if (!images_[k].same_shape(images_[0])) {
      throw std::invalid_argument(
          "exposure " + std::to_string(k) +
          " does not match the shape of exposure 0 (inputs must be registered)");
    }
  }
}

Patch extract_patch(const Image& img, int channel, Position origin, int block) {
  if (channel < 0 || channel >= img.channels()) {
    throw std::out_of_range("channel index out of range");
  }
  if (block <= 0 || origin.x < 0 || origin.y < 0 ||
      origin.x + block > img.width() || origin.y + block > img.height()) {
    throw std::out_of_range("patch exceeds image bounds");
  }
  Patch patch{origin, block,
              std::vector<double>(static_cast<std::size_t>(block) * block)};
  read_block(img, channel, origin, block, patch.values);
  return patch;
}

void read_block(const Image& img, int channel, Position origin, int block,
                std::span<double> out) {
  const auto plane = img.plane(channel);
  const std::size_t stride = static_cast<std::size_t>(img.width());
  for (int r = 0; r < block; ++r) {
    const double* src =
        plane.data() + (static_cast<std::size_t>(origin.y) + r) * stride + origin.x;
    std::copy_n(src, block, out.data() + static_cast<std::size_t>(r) * block);
  }
}

namespace {

std::vector<int> axis_positions(int extent, int block, int step) {
  std::vector<int> positions;
  const int last = extent - block;
  for (int p = 0; p < last; p += step) {
    positions.push_back(p);
  }
  positions.push_back(last);
  return positions;
}

}  // namespace

std::vector<Position> reference_grid(int width, int height, int block, int step) {
  if (block <= 0 || block > width || block > height) {
    throw std::invalid_argument("image is smaller than the block size");
  }
  if (step < 1 || step > block) {
    throw std::invalid_argument("grid step must satisfy 1 <= step <= block");
  }
  const auto xs = axis_positions(width, block, step);
  const auto ys = axis_positions(height, block, step);
  std::vector<Position> grid;
  grid.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) {
      grid.push_back({x, y});
    }
  }
  return grid;
}

Accumulator::Accumulator(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw std::invalid_argument("accumulator dimensions must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  sum_.assign(n, 0.0);
  count_.assign(n, 0);
}

void Accumulator::accumulate(const Patch& patch, int channel) {
  if (patch.values.size() != static_cast<std::size_t>(patch.size) * patch.size) {
    throw std::invalid_argument("patch value count does not match its size");
  }
  if (channel < 0 || channel >= channels_ || patch.origin.x < 0 ||
      patch.origin.y < 0 || patch.origin.x + patch.size > width_ ||
      patch.origin.y + patch.size > height_) {
    throw std::out_of_range("patch exceeds image bounds");
  }
  accumulate(patch.origin, patch.size, patch.values, channel);
}

void Accumulator::accumulate(Position origin, int block,
                             std::span<const double> values, int channel) {
  const std::size_t plane = static_cast<std::size_t>(width_) * height_;
  double* sum = sum_.data() + static_cast<std::size_t>(channel) * plane;
  std::uint32_t* count = count_.data() + static_cast<std::size_t>(channel) * plane;
  for (int r = 0; r < block; ++r) {
    const std::size_t row =
        (static_cast<std::size_t>(origin.y) + r) * width_ + origin.x;
    const double* src = values.data() + static_cast<std::size_t>(r) * block;
    for (int c = 0; c < block; ++c) {
      sum[row + c] += src[c];
      ++count[row + c];
    }
  }
}

void Accumulator::merge(const Accumulator& other) {
  if (other.width_ != width_ || other.height_ != height_ ||
      other.channels_ != channels_) {
    throw std::invalid_argument("cannot merge accumulators of different shape");
  }
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    sum_[i] += other.sum_[i];
    count_[i] += other.count_[i];
  }
}

Image Accumulator::finalize() const {
  Image out(width_, height_, channels_);
  auto data = out.data();
  const std::size_t plane = static_cast<std::size_t>(width_) * height_;
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    if (count_[i] == 0) {
      const std::size_t pixel = i % plane;
      throw std::runtime_error(
          "uncovered pixels: first at (" + std::to_string(pixel % width_) + ", " +
          std::to_string(pixel / width_) + ") channel " +
          std::to_string(i / plane));
    }
    data[i] = sum_[i] / count_[i];
  }
  return out;
}

}  // namespace dctfuse
