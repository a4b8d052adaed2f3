// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after cpu_supports_avx2_fma() returned true.

#include <immintrin.h>

#include "framekit/kernels.hpp"

namespace framekit::kernels {
namespace {

// Two complex values per register: [re0, im0, re1, im1].
inline __m256d load2(const Scalar* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(Scalar* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// alpha * v for a broadcast complex alpha.
inline __m256d cmul(__m256d alpha_re, __m256d alpha_im, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(alpha_re, v, _mm256_mul_pd(alpha_im, swapped));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

Scalar dotc_avx2(const Scalar* x, const Scalar* y, std::size_t n) {
  __m256d same = _mm256_setzero_pd();   // [xr*yr, xi*yi]
  __m256d cross = _mm256_setzero_pd();  // [xr*yi, xi*yr]
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = load2(x + k);
    const __m256d yv = load2(y + k);
    same = _mm256_fmadd_pd(xv, yv, same);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
  }
  double re = hsum(same);
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  double im = hsum(_mm256_mul_pd(cross, sign));
  for (; k < n; ++k) {
    re += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    im += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
  }
  return {re, im};
}

double norm_sq_avx2(const Scalar* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = load2(x + k);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  return s;
}

void axpy_avx2(Scalar alpha, const Scalar* x, Scalar* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) store2(y + k, _mm256_add_pd(load2(y + k), cmul(ar, ai, load2(x + k))));
  for (; k < n; ++k) {
    y[k] += Scalar{alpha.real() * x[k].real() - alpha.imag() * x[k].imag(),
                   alpha.real() * x[k].imag() + alpha.imag() * x[k].real()};
  }
}

void rotate_avx2(Scalar* x, Scalar* y, std::size_t n, Scalar a, Scalar b, Scalar c, Scalar d) {
  const __m256d are = _mm256_set1_pd(a.real()), aim = _mm256_set1_pd(a.imag());
  const __m256d bre = _mm256_set1_pd(b.real()), bim = _mm256_set1_pd(b.imag());
  const __m256d cre = _mm256_set1_pd(c.real()), cim = _mm256_set1_pd(c.imag());
  const __m256d dre = _mm256_set1_pd(d.real()), dim = _mm256_set1_pd(d.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = load2(x + k);
    const __m256d yv = load2(y + k);
    store2(x + k, _mm256_add_pd(cmul(are, aim, xv), cmul(bre, bim, yv)));
    store2(y + k, _mm256_add_pd(cmul(cre, cim, xv), cmul(dre, dim, yv)));
  }
  auto mul = [](Scalar p, Scalar q) {
    return Scalar{p.real() * q.real() - p.imag() * q.imag(), p.real() * q.imag() + p.imag() * q.real()};
  };
  for (; k < n; ++k) {
    const Scalar xk = x[k];
    const Scalar yk = y[k];
    x[k] = mul(a, xk) + mul(b, yk);
    y[k] = mul(c, xk) + mul(d, yk);
  }
}

void scale_avx2(Scalar alpha, const Scalar* x, Scalar* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) store2(y + k, cmul(ar, ai, load2(x + k)));
  for (; k < n; ++k) {
    y[k] = Scalar{alpha.real() * x[k].real() - alpha.imag() * x[k].imag(),
                  alpha.real() * x[k].imag() + alpha.imag() * x[k].real()};
  }
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2", dotc_avx2, norm_sq_avx2, axpy_avx2, rotate_avx2, scale_avx2};
  return table;
}

}  // namespace framekit::kernels
