#pragma once

// Reference implementations that share no code with the library.

#include <array>
#include <cmath>

namespace oracle {

using M3 = std::array<double, 9>;

inline M3 mul(const M3& a, const M3& b) {
  M3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[3 * i + j] += a[3 * i + k] * b[3 * k + j];
  return c;
}

// sum_{k<30} W^k / k! with W = [w]x.
inline M3 exp_series(double wx, double wy, double wz) {
  const M3 w{0, -wz, wy, wz, 0, -wx, -wy, wx, 0};
  M3 sum{1, 0, 0, 0, 1, 0, 0, 0, 1};
  M3 term = sum;
  for (int k = 1; k < 30; ++k) {
    term = mul(term, w);
    for (double& t : term) t /= k;
    for (int i = 0; i < 9; ++i) sum[i] += term[i];
  }
  return sum;
}

inline double eq23_wx(double phi, double s) {
  const double c = std::cos(phi), sn = std::sin(phi);
  return s * (c * sn - sn * sn * sn);
}

inline double eq23_wy(double phi, double s) {
  const double c = std::cos(phi);
  return s * c * c * std::sin(-phi);
}

}  // namespace oracle
