#pragma once

#include <cmath>
#include <ostream>

#include <Eigen/Core>

namespace qkq {

// q = w + x i + y j + z k
template <typename Scalar>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  Quaternion() = default;
  Quaternion(Scalar w_, Scalar x_ = Scalar(0), Scalar y_ = Scalar(0), Scalar z_ = Scalar(0))
      : w(w_), x(x_), y(y_), z(z_) {}

  template <typename Other>
  explicit Quaternion(const Quaternion<Other>& o) : w(o.w), x(o.x), y(o.y), z(o.z) {}

  static Quaternion I() { return {Scalar(0), Scalar(1), Scalar(0), Scalar(0)}; }
  static Quaternion J() { return {Scalar(0), Scalar(0), Scalar(1), Scalar(0)}; }
  static Quaternion K() { return {Scalar(0), Scalar(0), Scalar(0), Scalar(1)}; }

  // q = z + w j with z = a0 + a1 i, w = b0 + b1 i
  static Quaternion from_zw(Scalar a0, Scalar a1, Scalar b0, Scalar b1) { return {a0, a1, b0, b1}; }

  Eigen::Matrix<Scalar, 4, 1> coeffs() const { return {w, x, y, z}; }
  Eigen::Matrix<Scalar, 3, 1> vec() const { return {x, y, z}; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  Scalar norm2() const { return w * w + x * x + y * y + z * z; }
  Quaternion inverse() const {
    Scalar n = norm2();
    return {w / n, -x / n, -y / n, -z / n};
  }

  Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
};

template <typename S>
Quaternion<S> operator+(Quaternion<S> a, const Quaternion<S>& b) { return a += b; }
template <typename S>
Quaternion<S> operator-(Quaternion<S> a, const Quaternion<S>& b) { return a -= b; }
template <typename S>
Quaternion<S> operator-(const Quaternion<S>& a) { return {-a.w, -a.x, -a.y, -a.z}; }

template <typename S>
Quaternion<S> operator*(const Quaternion<S>& a, const Quaternion<S>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

template <typename S, typename T>
Quaternion<S> operator*(const T& s, const Quaternion<S>& q) {
  return {S(s) * q.w, S(s) * q.x, S(s) * q.y, S(s) * q.z};
}
template <typename S, typename T>
Quaternion<S> operator*(const Quaternion<S>& q, const T& s) { return s * q; }

template <typename S>
Quaternion<S> conj(const Quaternion<S>& q) { return q.conj(); }

template <typename S>
S norm2(const Quaternion<S>& q) { return q.norm2(); }

template <typename S>
S abs(const Quaternion<S>& q) {
  using std::sqrt;
  return sqrt(q.norm2());
}

// Re(conj(a) b), the Euclidean inner product on R^4
template <typename S>
S dot(const Quaternion<S>& a, const Quaternion<S>& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename S>
Quaternion<S> exp_i(S theta) {
  using std::cos;
  using std::sin;
  return {cos(theta), sin(theta), S(0), S(0)};
}

template <typename S>
std::ostream& operator<<(std::ostream& os, const Quaternion<S>& q) {
  return os << "(" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ")";
}

using Quat = Quaternion<double>;
using ImQuaternion = Eigen::Vector3d;

inline ImQuaternion im(const Quat& q) { return {q.x, q.y, q.z}; }
inline Quat from_im(const ImQuaternion& v) { return {0.0, v.x(), v.y(), v.z()}; }

}  // namespace qkq
