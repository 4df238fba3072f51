#pragma once

#include <cmath>
#include <cstddef>

#include "nk/errors.hpp"
#include "nk/scalar.hpp"

namespace nk {

template <class S>
struct Imaginary;

/// Quaternion over the scalar backend S, components in the basis {1, i, j, k}.
template <class S>
struct Quaternion {
    S w{}, x{}, y{}, z{};

    Quaternion() = default;
    Quaternion(S w_, S x_, S y_, S z_) : w(w_), x(x_), y(y_), z(z_) {}

    static Quaternion one() { return {S(1), S(0), S(0), S(0)}; }
    static Quaternion i() { return {S(0), S(1), S(0), S(0)}; }
    static Quaternion j() { return {S(0), S(0), S(1), S(0)}; }
    static Quaternion k() { return {S(0), S(0), S(0), S(1)}; }

    Quaternion operator-() const { return {-w, -x, -y, -z}; }
    friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
        return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
        return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Quaternion operator*(const S& c, const Quaternion& q) {
        return {c * q.w, c * q.x, c * q.y, c * q.z};
    }

    // Hamilton product
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }

    Quaternion conjugate() const { return {w, -x, -y, -z}; }
    S norm_sq() const { return w * w + x * x + y * y + z * z; }
    bool is_zero() const {
        return scalar_traits<S>::is_zero(w) && scalar_traits<S>::is_zero(x) &&
               scalar_traits<S>::is_zero(y) && scalar_traits<S>::is_zero(z);
    }

    Quaternion inverse() const {
        if (is_zero()) throw Error("quaternion inverse: zero quaternion");
        S n = norm_sq();
        return {w / n, -x / n, -y / n, -z / n};
    }

    Imaginary<S> imag() const { return {x, y, z}; }
};

using QuaternionD = Quaternion<double>;

template <class S>
Quaternion<S> mul(const Quaternion<S>& a, const Quaternion<S>& b) {
    return a * b;
}

template <class S>
Quaternion<S> inverse(const Quaternion<S>& q) {
    return q.inverse();
}

/// Purely imaginary quaternion x*i + y*j + z*k; the Lie algebra of S3.
template <class S>
struct Imaginary {
    S x{}, y{}, z{};

    Imaginary() = default;
    Imaginary(S x_, S y_, S z_) : x(x_), y(y_), z(z_) {}

    Imaginary operator-() const { return {-x, -y, -z}; }
    friend Imaginary operator+(const Imaginary& a, const Imaginary& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Imaginary operator-(const Imaginary& a, const Imaginary& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Imaginary operator*(const S& c, const Imaginary& v) {
        return {c * v.x, c * v.y, c * v.z};
    }

    Quaternion<S> as_quaternion() const { return {S(0), x, y, z}; }
    bool is_zero() const {
        return scalar_traits<S>::is_zero(x) && scalar_traits<S>::is_zero(y) &&
               scalar_traits<S>::is_zero(z);
    }
};

using ImaginaryD = Imaginary<double>;

template <class S>
S dot(const Imaginary<S>& a, const Imaginary<S>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class S>
Imaginary<S> cross(const Imaginary<S>& a, const Imaginary<S>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// [a,b] = ab - ba; for imaginary quaternions this is 2 a x b.
template <class S>
Imaginary<S> commutator(const Imaginary<S>& a, const Imaginary<S>& b) {
    return S(2) * cross(a, b);
}

inline double norm(const ImaginaryD& v) { return std::sqrt(dot(v, v)); }
inline double norm(const QuaternionD& q) { return std::sqrt(q.norm_sq()); }

/// Unit quaternion, a point of S3. Exact backend requires |q|^2 == 1 exactly;
/// the float backend accepts |q| within 1e-9 of 1 and renormalizes.
template <class S>
class UnitQuaternion {
public:
    UnitQuaternion() : q_(Quaternion<S>::one()) {}

    static UnitQuaternion from(const Quaternion<S>& q) {
        if constexpr (scalar_traits<S>::exact) {
            if (!(q.norm_sq() == S(1))) throw Error("UnitQuaternion: |q|^2 != 1 (exact backend)");
            return UnitQuaternion(q);
        } else {
            double n = std::sqrt(static_cast<double>(q.norm_sq()));
            if (std::fabs(n - 1.0) > 1e-9) throw Error("UnitQuaternion: |q| - 1 exceeds 1e-9");
            double inv = 1.0 / n;
            return UnitQuaternion(Quaternion<S>{q.w * inv, q.x * inv, q.y * inv, q.z * inv});
        }
    }

    const Quaternion<S>& value() const { return q_; }
    UnitQuaternion inverse() const { return UnitQuaternion(q_.conjugate()); }

    friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
        return from(a.q_ * b.q_);
    }

private:
    explicit UnitQuaternion(const Quaternion<S>& q) : q_(q) {}
    Quaternion<S> q_;
};

using UnitQuaternionD = UnitQuaternion<double>;

/// exp of an imaginary quaternion: cos|v| + sin|v| v/|v|, with exp(0) = 1.
inline UnitQuaternionD exp_im(const ImaginaryD& v) {
    double r2 = dot(v, v);
    double r = std::sqrt(r2);
    double c, sinc;
    if (r < 1e-8) {
        c = 1.0 - r2 / 2.0;
        sinc = 1.0 - r2 / 6.0;
    } else {
        c = std::cos(r);
        sinc = std::sin(r) / r;
    }
    return UnitQuaternionD::from({c, sinc * v.x, sinc * v.y, sinc * v.z});
}

/// Directional derivative of exp_im at v along w:
///   d/dt exp(v + t w)|_0 = -sinc(r)<v,w>  +  sinc(r) w + D(r)<v,w> v,
/// with r = |v| and D(r) = (cos r - sinc r)/r^2 (-1/3 at r = 0).
inline QuaternionD dexp_im(const ImaginaryD& v, const ImaginaryD& w) {
    double r2 = dot(v, v);
    double r = std::sqrt(r2);
    double sinc, D;
    if (r < 1e-4) {
        sinc = 1.0 - r2 / 6.0 + r2 * r2 / 120.0;
        D = -1.0 / 3.0 + r2 / 30.0 - r2 * r2 / 840.0;
    } else {
        sinc = std::sin(r) / r;
        D = (std::cos(r) - sinc) / r2;
    }
    double vw = dot(v, w);
    ImaginaryD im = sinc * w + (D * vw) * v;
    return {-sinc * vw, im.x, im.y, im.z};
}

}  // namespace nk
