#include "lieswarm/so3.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lieswarm/errors.hpp"

namespace lieswarm {

double Mat3::determinant() const {
  const auto& a = m_;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

double Mat3::norm() const {
  double s = 0.0;
  for (double v : m_) s += v * v;
  return std::sqrt(s);
}

bool Mat3::finite() const {
  return std::all_of(m_.begin(), m_.end(), [](double v) { return std::isfinite(v); });
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

Mat3 operator*(const Mat3& a, double s) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) * s;
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
          a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
          a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

double Rotation::orthogonality_error() const {
  return (m_.transposed() * m_ - Mat3::identity()).norm();
}

double Rotation::determinant_error() const { return std::abs(m_.determinant() - 1.0); }

Mat3 hat(const Vec3& w) {
  return Mat3({0.0, -w.z, w.y,
               w.z, 0.0, -w.x,
               -w.y, w.x, 0.0});
}

Vec3 vee(const Mat3& m, double tol) {
  const double asym = std::max({std::abs(m(0, 0)), std::abs(m(1, 1)), std::abs(m(2, 2)),
                                std::abs(m(2, 1) + m(1, 2)), std::abs(m(0, 2) + m(2, 0)),
                                std::abs(m(1, 0) + m(0, 1))});
  if (!(asym <= tol)) {
    throw NotSkew("matrix is not skew-symmetric (deviation " + std::to_string(asym) + ")");
  }
  // Average the mirrored entries so vee(m) is the vee of skew(m).
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
}

Rotation exp_so3(const Vec3& w) {
  const double theta2 = w.dot(w);
  const double theta = std::sqrt(theta2);
  double a;  // sin(theta) / theta
  double b;  // (1 - cos(theta)) / theta^2
  if (theta < 1e-6) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 omega = hat(w);
  return Rotation(Mat3::identity() + omega * a + (omega * omega) * b);
}

Vec3 apply(const Rotation& r, const Vec3& v) { return r.matrix() * v; }

Rotation transpose(const Rotation& r) { return Rotation(r.matrix().transposed()); }

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

std::ostream& operator<<(std::ostream& os, const Mat3& m) {
  os << '[';
  for (int i = 0; i < 3; ++i) {
    os << (i ? "; " : "") << m(i, 0) << ", " << m(i, 1) << ", " << m(i, 2);
  }
  return os << ']';
}

}  // namespace lieswarm
