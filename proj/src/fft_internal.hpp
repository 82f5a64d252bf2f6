#pragma once

#include <fftw3.h>

#include <complex>
#include <memory>

// Shared FFTW plumbing for the solver internals. Plans are created with
// FFTW_ESTIMATE only, so plan selection (and therefore output bits) do not
// depend on runtime timing. The "aligned" plans require fftw_malloc'd
// buffers; the "unaligned" plans are safe for Eigen-owned storage.
// fftw_execute_dft_* on distinct arrays is thread-safe.
namespace hydro::detail {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double[], FftwFree>;
using CplxBuf = std::unique_ptr<std::complex<double>[], FftwFree>;

inline RealBuf alloc_real(std::size_t count) { return RealBuf(fftw_alloc_real(count)); }
inline CplxBuf alloc_cplx(std::size_t count) {
  return CplxBuf(reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(count)));
}

struct Plans {
  fftw_plan fwd = nullptr;  // r2c, x1 axis halved
  fftw_plan inv = nullptr;  // c2r, destroys its complex input
};

const Plans& aligned_plans(int n);
const Plans& unaligned_plans(int n);

inline fftw_complex* fc(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace hydro::detail
