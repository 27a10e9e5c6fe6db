#pragma once

// Inner loops shared by the quadrature, convolution and marginalization code.
// Each kernel has a scalar reference implementation plus an AVX2+FMA variant
// on x86-64 or a NEON variant on AArch64, chosen at runtime. The variants differ only in summation
// order; tests/test_simd.cpp holds them to the scalar results.

#include <cstddef>
#include <string_view>

namespace entroframe::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

struct Kernels {
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// Valid-mode correlation: out[i] = sum_{j < k} kernel[j] * x[i + j] for
  /// i < n_out. x must hold n_out + k - 1 values.
  void (*correlate)(const double* x, const double* kernel, std::size_t k, double* out,
                    std::size_t n_out);

  /// sum_i w[i] * g[i]^2 / f[i], skipping entries with f[i] <= floor.
  double (*score_sum)(const double* w, const double* g, const double* f, std::size_t n,
                      double floor);

  /// sum_{k < count} w[k] * B(x0 + k dx, y0 + k dy) where B is the bilinear
  /// interpolant of the row-major nx-by-ny table `values` (x fastest) in index
  /// coordinates. Samples should lie in [0, nx-1] x [0, ny-1]; cell indices are
  /// clamped so round-off at the edges stays in bounds.
  double (*bilinear_line)(const double* values, std::size_t nx, std::size_t ny, double x0,
                          double y0, double dx, double dy, const double* w, std::size_t count);

  /// As bilinear_line with the 4x4 tensor Lagrange interpolant (cells clamped
  /// to [1, n-3] so the stencil stays in bounds).
  double (*bicubic_line)(const double* values, std::size_t nx, std::size_t ny, double x0,
                         double y0, double dx, double dy, const double* w, std::size_t count);
};

/// Kernels for the active ISA.
const Kernels& kernels();

/// Kernels for a specific ISA; throws if it is not available on this CPU.
const Kernels& kernels_for(Isa isa);

bool isa_available(Isa isa) noexcept;

/// The ISA used by kernels(). Defaults to the best available, unless the
/// ENTROFRAME_SIMD environment variable is set to "scalar".
Isa active_isa() noexcept;

/// Overrides the active ISA (tests and the CLI use this).
void set_active_isa(Isa isa);

namespace detail {
const Kernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_kernels();
#endif
#if defined(__aarch64__)
const Kernels& neon_kernels();
#endif
}  // namespace detail

}  // namespace entroframe::simd
