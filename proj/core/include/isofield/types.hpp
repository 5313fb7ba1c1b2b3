#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace isofield {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Mat3 = Eigen::Matrix3d;

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Eigen::Vector3d to_eigen(const Vec3& v) { return {v[0], v[1], v[2]}; }
inline Vec3 from_eigen(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

// Dense 3x3x3x3 tensor, row-major in (i,j,k,l).
class Tensor4 {
public:
    Tensor4() { a_.fill(0.0); }
    double& operator()(int i, int j, int k, int l) { return a_[((i * 3 + j) * 3 + k) * 3 + l]; }
    double operator()(int i, int j, int k, int l) const { return a_[((i * 3 + j) * 3 + k) * 3 + l]; }
    const std::array<double, 81>& data() const { return a_; }
    std::array<double, 81>& data() { return a_; }

    Tensor4& operator+=(const Tensor4& o) {
        for (int n = 0; n < 81; ++n) a_[n] += o.a_[n];
        return *this;
    }
    Tensor4 operator*(double s) const {
        Tensor4 t = *this;
        for (double& x : t.a_) x *= s;
        return t;
    }
    Tensor4 operator+(const Tensor4& o) const {
        Tensor4 t = *this;
        t += o;
        return t;
    }
    Tensor4 operator-(const Tensor4& o) const { return *this + o * -1.0; }
    double max_abs() const {
        double m = 0.0;
        for (double x : a_) m = std::max(m, std::abs(x));
        return m;
    }

    // T'_{ijkl} = R_ia R_jb R_kc R_ld T_abcd
    Tensor4 rotated(const Mat3& R) const;

private:
    std::array<double, 81> a_;
};

}  // namespace isofield
