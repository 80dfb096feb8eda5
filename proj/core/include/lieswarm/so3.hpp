#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

namespace lieswarm {

/// Plain 3-vector. Used for positions (m), velocities (m/s) and angular
/// velocity vectors (rad/s) alike.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) {
    return {a.x / s, a.y / s, a.z / s};
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  [[nodiscard]] constexpr double dot(const Vec3& o) const {
    return x * o.x + y * o.y + z * o.z;
  }
  [[nodiscard]] constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  [[nodiscard]] double norm() const { return std::sqrt(dot(*this)); }
  [[nodiscard]] bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

/// Row-major 3x3 matrix.
class Mat3 {
 public:
  constexpr Mat3() = default;
  constexpr explicit Mat3(const std::array<double, 9>& rows) : m_(rows) {}

  static constexpr Mat3 identity() {
    return Mat3({1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0});
  }
  static constexpr Mat3 zero() { return Mat3(); }

  constexpr double operator()(int r, int c) const { return m_[3 * r + c]; }
  constexpr double& operator()(int r, int c) { return m_[3 * r + c]; }

  [[nodiscard]] constexpr Mat3 transposed() const {
    return Mat3({m_[0], m_[3], m_[6], m_[1], m_[4], m_[7], m_[2], m_[5], m_[8]});
  }
  [[nodiscard]] constexpr double trace() const { return m_[0] + m_[4] + m_[8]; }
  [[nodiscard]] double determinant() const;
  /// Frobenius norm.
  [[nodiscard]] double norm() const;
  [[nodiscard]] bool finite() const;

  friend Mat3 operator+(const Mat3& a, const Mat3& b);
  friend Mat3 operator-(const Mat3& a, const Mat3& b);
  friend Mat3 operator*(const Mat3& a, const Mat3& b);
  friend Mat3 operator*(const Mat3& a, double s);
  friend Mat3 operator*(double s, const Mat3& a) { return a * s; }
  friend Vec3 operator*(const Mat3& a, const Vec3& v);
  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;

  [[nodiscard]] constexpr const std::array<double, 9>& data() const { return m_; }

 private:
  std::array<double, 9> m_{};
};

/// Element of SO(3). Only constructible through the exponential map,
/// composition, transposition or identity, so the orthogonality invariant
/// holds up to floating-point rounding.
class Rotation {
 public:
  constexpr Rotation() : m_(Mat3::identity()) {}

  [[nodiscard]] constexpr const Mat3& matrix() const { return m_; }

  friend Rotation operator*(const Rotation& a, const Rotation& b) {
    return Rotation(a.m_ * b.m_);
  }

  /// ||R^T R - I||_F
  [[nodiscard]] double orthogonality_error() const;
  /// |det R - 1|
  [[nodiscard]] double determinant_error() const;

 private:
  constexpr explicit Rotation(const Mat3& m) : m_(m) {}
  friend Rotation exp_so3(const Vec3& w);
  friend Rotation transpose(const Rotation& r);

  Mat3 m_;
};

/// Skew-symmetric matrix of w, so that hat(w) * v == w.cross(v).
Mat3 hat(const Vec3& w);

/// Inverse of hat. Throws NotSkew when m deviates from skew-symmetry by
/// more than `tol` in any entry pair.
Vec3 vee(const Mat3& m, double tol = 1e-9);

/// Exponential map so(3) -> SO(3) via the Rodrigues closed form. Below
/// ||w|| = 1e-6 the coefficients use their second-order Taylor expansions.
Rotation exp_so3(const Vec3& w);

Vec3 apply(const Rotation& r, const Vec3& v);
Rotation transpose(const Rotation& r);

std::ostream& operator<<(std::ostream& os, const Vec3& v);
std::ostream& operator<<(std::ostream& os, const Mat3& m);

}  // namespace lieswarm
