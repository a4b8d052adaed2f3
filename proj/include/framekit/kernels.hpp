#pragma once

// Dense inner-loop kernels over interleaved complex<double> storage.
//
// Every routine exists as a portable scalar reference and, on x86-64 builds
// with FRAMEKIT_HAVE_AVX2, as an AVX2/FMA variant. The variant used by the
// rest of the library is chosen once at first use from the running CPU; set
// FRAMEKIT_KERNELS=scalar in the environment to force the reference path.

#include <complex>
#include <cstddef>
#include <span>

namespace framekit::kernels {

using Scalar = std::complex<double>;

struct KernelTable {
  const char* name;
  // sum_k conj(x[k]) * y[k]
  Scalar (*dotc)(const Scalar* x, const Scalar* y, std::size_t n);
  // sum_k |x[k]|^2
  double (*norm_sq)(const Scalar* x, std::size_t n);
  // y += alpha * x
  void (*axpy)(Scalar alpha, const Scalar* x, Scalar* y, std::size_t n);
  // (x, y) <- (a x + b y, c x + d y), elementwise
  void (*rotate)(Scalar* x, Scalar* y, std::size_t n, Scalar a, Scalar b, Scalar c,
                 Scalar d);
  // y = alpha * x
  void (*scale)(Scalar alpha, const Scalar* x, Scalar* y, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// The table selected for this process.
const KernelTable& active();

bool cpu_supports_avx2_fma();

inline Scalar dotc(std::span<const Scalar> x, std::span<const Scalar> y) {
  return active().dotc(x.data(), y.data(), x.size());
}

inline double norm_sq(std::span<const Scalar> x) { return active().norm_sq(x.data(), x.size()); }

inline void axpy(Scalar alpha, std::span<const Scalar> x, std::span<Scalar> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void rotate(std::span<Scalar> x, std::span<Scalar> y, Scalar a, Scalar b, Scalar c, Scalar d) {
  active().rotate(x.data(), y.data(), x.size(), a, b, c, d);
}

}  // namespace framekit::kernels
