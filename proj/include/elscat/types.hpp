#ifndef ELSCAT_TYPES_HPP
#define ELSCAT_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numbers>

namespace elscat {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CVec2 = Eigen::Vector2cd;
using CMat2 = Eigen::Matrix2cd;
using CVecX = Eigen::VectorXcd;
using VecX = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex iu{0.0, 1.0};

// Mesh regions of the scattering scene: obstacle D, the inhomogeneous
// annulus Omega\D, and the homogeneous shell B_r\Omega.
enum class Region : std::uint8_t { D = 0, Annulus = 1, Shell = 2 };
inline constexpr int region_count = 3;

// Tagged boundary curves.
enum class BoundaryTag : std::uint8_t { ObstacleD = 0, MediumOmega = 1, TruncationBr = 2 };

const char* to_string(Region r);
const char* to_string(BoundaryTag t);

// Compensated (Kahan) accumulator, used wherever long sums feed reported
// norms so results do not depend on accumulation chunking.
class KahanSum {
public:
  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace elscat

#endif  // ELSCAT_TYPES_HPP
