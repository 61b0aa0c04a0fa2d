#include "dctfuse/dct.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dctfuse {

std::vector<double> dct_basis(int n) {
  std::vector<double> basis(static_cast<std::size_t>(n) * n);
  const double dc_scale = std::sqrt(1.0 / n);
  const double ac_scale = std::sqrt(2.0 / n);
  for (int u = 0; u < n; ++u) {
    const double scale = u == 0 ? dc_scale : ac_scale;
    for (int j = 0; j < n; ++j) {
      basis[static_cast<std::size_t>(u) * n + j] =
          scale * std::cos(std::numbers::pi * (2.0 * j + 1.0) * u / (2.0 * n));
    }
  }
  return basis;
}

Dct2Plan::Dct2Plan(int block) : size_(block) {
  if (block < 1 || block > kMaxBlock) {
    throw std::invalid_argument("2D DCT block size must be in [1, " +
                                std::to_string(kMaxBlock) + "]");
  }
  basis_ = dct_basis(block);
  transposed_.resize(basis_.size());
  for (int u = 0; u < block; ++u) {
    for (int j = 0; j < block; ++j) {
      transposed_[static_cast<std::size_t>(j) * block + u] =
          basis_[static_cast<std::size_t>(u) * block + j];
    }
  }
}

namespace {

void check_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(want) + " values, got " +
                                std::to_string(got));
  }
}

// out = A * X * A^T (forward) or A^T * X * A (inverse). `a` is the basis and
// `at` its transpose. Every inner loop is elementwise so it vectorizes.
template <int N>
void separable_fixed(const double* a, const double* at, const double* in,
                     double* out) {
  double tmp[N * N];
  for (int u = 0; u < N; ++u) {
    double* row = tmp + u * N;
    for (int c = 0; c < N; ++c) row[c] = 0.0;
    for (int j = 0; j < N; ++j) {
      const double w = a[u * N + j];
      const double* src = in + j * N;
      for (int c = 0; c < N; ++c) row[c] += w * src[c];
    }
  }
  for (int r = 0; r < N; ++r) {
    double acc[N] = {};
    const double* src = tmp + r * N;
    for (int j = 0; j < N; ++j) {
      const double w = src[j];
      const double* basis_row = at + j * N;
      for (int v = 0; v < N; ++v) acc[v] += w * basis_row[v];
    }
    for (int v = 0; v < N; ++v) out[r * N + v] = acc[v];
  }
}

void separable_any(const double* a, const double* at, int n, const double* in,
                   double* out) {
  std::array<double, Dct2Plan::kMaxBlock * Dct2Plan::kMaxBlock> tmp;
  std::array<double, Dct2Plan::kMaxBlock> acc;
  for (int u = 0; u < n; ++u) {
    double* row = tmp.data() + u * n;
    for (int c = 0; c < n; ++c) row[c] = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = a[u * n + j];
      const double* src = in + j * n;
      for (int c = 0; c < n; ++c) row[c] += w * src[c];
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int v = 0; v < n; ++v) acc[v] = 0.0;
    const double* src = tmp.data() + r * n;
    for (int j = 0; j < n; ++j) {
      const double w = src[j];
      const double* basis_row = at + j * n;
      for (int v = 0; v < n; ++v) acc[v] += w * basis_row[v];
    }
    for (int v = 0; v < n; ++v) out[r * n + v] = acc[v];
  }
}

void separable(const double* a, const double* at, int n, const double* in,
               double* out) {
  switch (n) {
    case 4: return separable_fixed<4>(a, at, in, out);
    case 8: return separable_fixed<8>(a, at, in, out);
    case 16: return separable_fixed<16>(a, at, in, out);
    default: return separable_any(a, at, n, in, out);
  }
}

}  // namespace

void Dct2Plan::forward(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(size_) * size_;
  check_len(in.size(), n, "dct2 forward input");
  check_len(out.size(), n, "dct2 forward output");
  separable(basis_.data(), transposed_.data(), size_, in.data(), out.data());
}

void Dct2Plan::inverse(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(size_) * size_;
  check_len(in.size(), n, "dct2 inverse input");
  check_len(out.size(), n, "dct2 inverse output");
  separable(transposed_.data(), basis_.data(), size_, in.data(), out.data());
}

Dct1Plan::Dct1Plan(int length) : size_(length) {
  if (length < 1) {
    throw std::invalid_argument("1D DCT length must be positive");
  }
  basis_ = dct_basis(length);
}

void Dct1Plan::forward(std::span<const double> in, std::span<double> out) const {
  check_len(in.size(), static_cast<std::size_t>(size_), "dct1 forward input");
  check_len(out.size(), static_cast<std::size_t>(size_), "dct1 forward output");
  const int n = size_;
  for (int u = 0; u < n; ++u) {
    const double* row = basis_.data() + static_cast<std::size_t>(u) * n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[j] * in[j];
    out[u] = acc;
  }
}

void Dct1Plan::inverse(std::span<const double> in, std::span<double> out) const {
  check_len(in.size(), static_cast<std::size_t>(size_), "dct1 inverse input");
  check_len(out.size(), static_cast<std::size_t>(size_), "dct1 inverse output");
  const int n = size_;
  for (int j = 0; j < n; ++j) out[j] = 0.0;
  for (int u = 0; u < n; ++u) {
    const double* row = basis_.data() + static_cast<std::size_t>(u) * n;
    const double c = in[u];
    for (int j = 0; j < n; ++j) out[j] += row[j] * c;
  }
}

DctPatch dct2_forward(const Patch& patch, const Dct2Plan& plan) {
  if (patch.size != plan.size()) {
    throw std::invalid_argument("patch size does not match the DCT plan");
  }
  DctPatch out(patch.origin, patch.size);
  plan.forward(patch.values, out.coeffs);
  return out;
}

Patch dct2_inverse(const DctPatch& dct, const Dct2Plan& plan) {
  if (dct.size != plan.size()) {
    throw std::invalid_argument("patch size does not match the DCT plan");
  }
  Patch out{dct.origin, dct.size, std::vector<double>(dct.coeffs.size())};
  plan.inverse(dct.coeffs, out.values);
  return out;
}

std::vector<double> dct1_forward(std::span<const double> values,
                                 const Dct1Plan& plan) {
  std::vector<double> out(values.size());
  plan.forward(values, out);
  return out;
}

std::vector<double> dct1_inverse(std::span<const double> coeffs,
                                 const Dct1Plan& plan) {
  std::vector<double> out(coeffs.size());
  plan.inverse(coeffs, out);
  return out;
}

}  // namespace dctfuse
