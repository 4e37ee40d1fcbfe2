#ifndef ELSCAT_SPECIAL_HPP
#define ELSCAT_SPECIAL_HPP

#include <vector>

#include "elscat/types.hpp"

namespace elscat {

// Cylinder-function sequences for integer orders 0..K.
//
// Real arguments: J by backward recurrence from exact top-order seeds,
// Y by forward recurrence from Y0, Y1 (the dominant direction).
// Complex arguments: J by Miller's backward recurrence, normalized against
// e^{-iz} (or e^{+iz} for Im z < 0) so the normalizing sum is carried by
// its largest terms.
struct BesselJY {
  std::vector<double> j;  // J_0..J_K
  std::vector<double> y;  // Y_0..Y_K
};

BesselJY bessel_jy_seq(double x, int order_max);

std::vector<Complex> bessel_j_seq(Complex z, int order_max);

// H^{(1)}_k = J_k + i Y_k for k = 0..K.
std::vector<Complex> hankel1_seq(double x, int order_max);

// Derivative from the sequence: C'_k = C_{k-1} - (k/z) C_k, C'_0 = -C_1.
template <typename Scalar, typename Z>
Scalar cyl_derivative(const std::vector<Scalar>& c, int k, Z z) {
  if (k == 0) return -c[1];
  return c[k - 1] - (static_cast<double>(k) / z) * c[k];
}

// Ratio sequences for overflow-free high-order work:
// ratio[k] = H^{(1)}_{k-1}(x) / H^{(1)}_k(x), k = 1..K.
std::vector<Complex> hankel1_prev_ratio_seq(double x, int order_max);

// log-derivative H'_k / H_k from the ratio sequence.
inline Complex hankel1_logderiv(const std::vector<Complex>& prev_ratio, int k, double x) {
  if (k == 0) return -1.0 / prev_ratio[1];  // H'_0 = -H_1
  return prev_ratio[k] - static_cast<double>(k) / x;
}

}  // namespace elscat

#endif  // ELSCAT_SPECIAL_HPP
