#pragma once

// Data-parallel inner loops used by the dense linear algebra. Every kernel has
// a scalar reference version; vectorised variants are picked once at startup
// based on what the CPU reports. Setting RAIL_FORCE_SCALAR=1 in the
// environment pins the scalar set.

#include <cstddef>
#include <span>

namespace rail::kernels {

struct KernelSet {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = a .* x
  void (*hadamard)(const double* a, const double* x, double* out, std::size_t n);
  // (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double c, double s, double* x, double* y, std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*abs_sum)(const double* x, std::size_t n);
  // sum |x - y|
  double (*abs_diff_sum)(const double* x, const double* y, std::size_t n);
};

const KernelSet& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelSet* avx2_kernels();

/// The set selected at startup.
const KernelSet& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void hadamard(std::span<const double> a, std::span<const double> x, std::span<double> out) {
  active().hadamard(a.data(), x.data(), out.data(), a.size());
}
inline void rotate(double c, double s, std::span<double> x, std::span<double> y) {
  active().rotate(c, s, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double abs_sum(std::span<const double> x) { return active().abs_sum(x.data(), x.size()); }
inline double abs_diff_sum(std::span<const double> x, std::span<const double> y) {
  return active().abs_diff_sum(x.data(), y.data(), x.size());
}

}  // namespace rail::kernels
