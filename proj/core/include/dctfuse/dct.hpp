#pragma once

#include <span>
#include <vector>

#include "dctfuse/image.hpp"

namespace dctfuse {

/// Orthonormal DCT-II basis of length n: row u holds c(u) cos(pi (2j+1) u / 2n)
/// with c(0) = sqrt(1/n) and c(u>0) = sqrt(2/n).
std::vector<double> dct_basis(int n);

/// Separable orthonormal 2D DCT for b x b blocks (b <= kMaxBlock).
class Dct2Plan {
 public:
  static constexpr int kMaxBlock = 32;

  explicit Dct2Plan(int block);

  int size() const { return size_; }
  std::span<const double> basis() const { return basis_; }

  // `in` and `out` hold size()*size() row-major values and may alias.
  void forward(std::span<const double> in, std::span<double> out) const;
  void inverse(std::span<const double> in, std::span<double> out) const;

 private:
  int size_;
  std::vector<double> basis_;
  std::vector<double> transposed_;
};

/// Orthonormal 1D DCT of length k, used along a stack of grouped patches.
class Dct1Plan {
 public:
  explicit Dct1Plan(int length);

  int size() const { return size_; }
  std::span<const double> basis() const { return basis_; }

  // `in` and `out` must not alias.
  void forward(std::span<const double> in, std::span<double> out) const;
  void inverse(std::span<const double> in, std::span<double> out) const;

 private:
  int size_;
  std::vector<double> basis_;
};

DctPatch dct2_forward(const Patch& patch, const Dct2Plan& plan);
Patch dct2_inverse(const DctPatch& dct, const Dct2Plan& plan);

std::vector<double> dct1_forward(std::span<const double> values,
                                 const Dct1Plan& plan);
std::vector<double> dct1_inverse(std::span<const double> coeffs,
                                 const Dct1Plan& plan);

}  // namespace dctfuse
