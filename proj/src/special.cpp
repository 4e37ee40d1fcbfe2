#include "elscat/special.hpp"

#include <cmath>
#include <stdexcept>

namespace elscat {

namespace {

int miller_start_order(int order_max, double mag) {
  int base = std::max(order_max, static_cast<int>(std::ceil(mag)));
  return base + 16 + static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(base) + 1.0)));
}

}  // namespace

BesselJY bessel_jy_seq(double x, int order_max) {
  if (!(x > 0.0)) throw std::invalid_argument("bessel_jy_seq: argument must be positive");
  if (order_max < 1) order_max = 1;
  BesselJY out;
  out.j.resize(order_max + 1);
  out.y.resize(order_max + 1);

  // J: backward from exact seeds at the top; stable in the decaying direction
  // and neutral through the oscillatory range.
  out.j[order_max] = std::cyl_bessel_j(order_max, x);
  if (order_max >= 1) {
    double above = std::cyl_bessel_j(order_max + 1, x);
    double cur = out.j[order_max];
    for (int k = order_max; k >= 1; --k) {
      double below = (2.0 * k / x) * cur - above;
      above = cur;
      cur = below;
      out.j[k - 1] = cur;
    }
  }

  // Y: forward recurrence rides the dominant solution.
  out.y[0] = std::cyl_neumann(0, x);
  out.y[1] = std::cyl_neumann(1, x);
  for (int k = 1; k < order_max; ++k) {
    out.y[k + 1] = (2.0 * k / x) * out.y[k] - out.y[k - 1];
    if (!std::isfinite(out.y[k + 1]))
      throw std::overflow_error("bessel_jy_seq: Y overflow; use ratio sequences at this order");
  }
  return out;
}

std::vector<Complex> bessel_j_seq(Complex z, int order_max) {
  if (order_max < 1) order_max = 1;
  double mag = std::abs(z);
  if (mag == 0.0) {
    std::vector<Complex> out(order_max + 1, Complex(0.0, 0.0));
    out[0] = 1.0;
    return out;
  }
  const int start = miller_start_order(order_max, mag);
  std::vector<Complex> f(start + 2, Complex(0.0, 0.0));
  f[start + 1] = 0.0;
  f[start] = 1e-280;  // arbitrary small seed, fixed by normalization
  for (int k = start; k >= 1; --k) f[k - 1] = (2.0 * k / z) * f[k] - f[k + 1];

  // Normalization target e^{sigma i z} with sigma chosen so the sum is
  // dominated by its largest terms (no cancellation for lossy arguments):
  //   e^{-iz} = J_0 + 2 sum_m (-i)^m J_m   (use +iz when Im z < 0)
  const double sigma = (z.imag() >= 0.0) ? -1.0 : 1.0;
  Complex phase(0.0, sigma);  // (sigma*i)^1
  Complex sum = f[0];
  Complex p = 1.0;
  for (int m = 1; m <= start; ++m) {
    p *= phase;
    sum += 2.0 * p * f[m];
  }
  Complex target = std::exp(Complex(0.0, sigma) * z);
  Complex scale = target / sum;

  std::vector<Complex> out(order_max + 1);
  for (int k = 0; k <= order_max; ++k) {
    out[k] = scale * f[k];
    if (!std::isfinite(out[k].real()) || !std::isfinite(out[k].imag()))
      throw std::overflow_error("bessel_j_seq: overflow in Miller recurrence");
  }
  return out;
}

std::vector<Complex> hankel1_seq(double x, int order_max) {
  BesselJY jy = bessel_jy_seq(x, order_max);
  std::vector<Complex> h(order_max + 1);
  for (int k = 0; k <= order_max; ++k) h[k] = Complex(jy.j[k], jy.y[k]);
  return h;
}

std::vector<Complex> hankel1_prev_ratio_seq(double x, int order_max) {
  if (!(x > 0.0)) throw std::invalid_argument("hankel1_prev_ratio_seq: argument must be positive");
  if (order_max < 1) order_max = 1;
  Complex h0(std::cyl_bessel_j(0, x), std::cyl_neumann(0, x));
  Complex h1(std::cyl_bessel_j(1, x), std::cyl_neumann(1, x));
  std::vector<Complex> ratio(order_max + 1);
  ratio[0] = Complex(0.0, 0.0);  // unused
  ratio[1] = h0 / h1;
  // H_{k+1} = (2k/x) H_k - H_{k-1}  =>  H_k/H_{k+1} = 1/(2k/x - H_{k-1}/H_k)
  for (int k = 1; k < order_max; ++k)
    ratio[k + 1] = 1.0 / (2.0 * k / x - ratio[k]);
  return ratio;
}

}  // namespace elscat
