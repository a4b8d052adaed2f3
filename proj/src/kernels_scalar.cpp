#include "framekit/kernels.hpp"

namespace framekit::kernels {
namespace {

// Complex products are spelled out on the real and imaginary parts so the
// rounding sequence matches the vector variants term by term (no NaN/inf
// recovery branches from the library operator*).
inline Scalar mul(Scalar a, Scalar b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

Scalar dotc_scalar(const Scalar* x, const Scalar* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    re += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    im += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
  }
  return {re, im};
}

double norm_sq_scalar(const Scalar* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  return acc;
}

void axpy_scalar(Scalar alpha, const Scalar* x, Scalar* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += mul(alpha, x[k]);
}

void rotate_scalar(Scalar* x, Scalar* y, std::size_t n, Scalar a, Scalar b, Scalar c, Scalar d) {
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar xk = x[k];
    const Scalar yk = y[k];
    x[k] = mul(a, xk) + mul(b, yk);
    y[k] = mul(c, xk) + mul(d, yk);
  }
}

void scale_scalar(Scalar alpha, const Scalar* x, Scalar* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] = mul(alpha, x[k]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", dotc_scalar, norm_sq_scalar, axpy_scalar, rotate_scalar,
                                 scale_scalar};
  return table;
}

}  // namespace framekit::kernels
