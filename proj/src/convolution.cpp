#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>

#include "entroframe/density.hpp"
#include "entroframe/error.hpp"
#include "entroframe/simd/kernels.hpp"

namespace entroframe {

namespace {

// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  return std::unique_ptr<T[], FftwFree>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

std::vector<double> direct(std::span<const double> f, std::span<const double> g, double step) {
  const std::size_t nf = f.size(), ng = g.size(), n = nf + ng - 1;
  std::vector<double> padded(nf + 2 * (ng - 1), 0.0);
  std::copy(f.begin(), f.end(), padded.begin() + static_cast<std::ptrdiff_t>(ng - 1));
  std::vector<double> reversed(g.rbegin(), g.rend());
  std::vector<double> out(n);
  simd::kernels().correlate(padded.data(), reversed.data(), ng, out.data(), n);
  for (double& v : out) v *= step;
  return out;
}

std::vector<double> via_fft(std::span<const double> f, std::span<const double> g, double step) {
  const std::size_t n = f.size() + g.size() - 1;
  std::size_t m = 1;
  while (m < n) m <<= 1;
  const std::size_t nc = m / 2 + 1;
  auto a = fftw_buffer<double>(m);
  auto b = fftw_buffer<double>(m);
  auto fa = fftw_buffer<fftw_complex>(nc);
  auto fb = fftw_buffer<fftw_complex>(nc);
  std::fill(a.get(), a.get() + m, 0.0);
  std::fill(b.get(), b.get() + m, 0.0);
  std::copy(f.begin(), f.end(), a.get());
  std::copy(g.begin(), g.end(), b.get());

  fftw_plan pa, pb, back;
  {
    std::lock_guard lock(plan_mutex());
    const int im = static_cast<int>(m);
    pa = fftw_plan_dft_r2c_1d(im, a.get(), fa.get(), FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(im, b.get(), fb.get(), FFTW_ESTIMATE);
    back = fftw_plan_dft_c2r_1d(im, fa.get(), a.get(), FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < nc; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  fftw_execute(back);
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(back);
  }
  std::vector<double> out(a.get(), a.get() + n);
  const double scale = step / static_cast<double>(m);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace

std::vector<double> convolve_samples(std::span<const double> f, std::span<const double> g,
                                     double step, ConvolutionMethod method) {
  if (f.empty() || g.empty()) throw Error(ErrorKind::InvalidArgument, "empty convolution operand");
  if (method == ConvolutionMethod::Direct) return direct(f, g, step);
  auto out = via_fft(f, g, step);
  // Round-off leaves tiny negatives where the true convolution vanishes.
  const bool nonneg = std::all_of(f.begin(), f.end(), [](double v) { return v >= 0.0; }) &&
                      std::all_of(g.begin(), g.end(), [](double v) { return v >= 0.0; });
  if (nonneg) {
    for (double& v : out) v = std::max(v, 0.0);
  }
  return out;
}

}  // namespace entroframe
