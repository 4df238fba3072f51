#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nk {

using BigRational = boost::multiprecision::cpp_rational;

/// Element of the field Q(sqrt3): r + s*sqrt(3) with exact rational r, s.
///
/// This is the exact scalar backend. All structure tensors of the ambient
/// geometry (g, J, P, the connection, G, the curvature) have coefficients in
/// this field, so every polynomial identity among them can be certified with
/// zero residual. Transcendental charts (exp) exist only for doubles.
class ExactK3 {
public:
    ExactK3() = default;
    ExactK3(long long n) : r_(n) {}  // NOLINT: implicit by design, mirrors double
    ExactK3(BigRational r) : r_(std::move(r)) {}
    ExactK3(BigRational r, BigRational s) : r_(std::move(r)), s_(std::move(s)) {}

    static ExactK3 fraction(long long num, long long den) {
        if (den == 0) throw std::domain_error("ExactK3: zero denominator");
        return ExactK3(BigRational(num, den));
    }
    static ExactK3 sqrt3() { return ExactK3(BigRational(0), BigRational(1)); }

    const BigRational& rational_part() const { return r_; }
    const BigRational& sqrt3_part() const { return s_; }

    bool is_zero() const { return r_ == 0 && s_ == 0; }

    ExactK3 operator-() const { return ExactK3(-r_, -s_); }
    ExactK3& operator+=(const ExactK3& o) { r_ += o.r_; s_ += o.s_; return *this; }
    ExactK3& operator-=(const ExactK3& o) { r_ -= o.r_; s_ -= o.s_; return *this; }
    ExactK3& operator*=(const ExactK3& o) {
        // (r + s v3)(r' + s' v3) = rr' + 3 ss' + (rs' + sr') v3
        BigRational r = r_ * o.r_ + 3 * (s_ * o.s_);
        BigRational s = r_ * o.s_ + s_ * o.r_;
        r_ = std::move(r);
        s_ = std::move(s);
        return *this;
    }
    ExactK3& operator/=(const ExactK3& o) {
        // multiply by the conjugate; r'^2 - 3 s'^2 = 0 only for r' = s' = 0
        BigRational d = o.r_ * o.r_ - 3 * (o.s_ * o.s_);
        if (d == 0) throw std::domain_error("ExactK3: division by zero");
        BigRational r = (r_ * o.r_ - 3 * (s_ * o.s_)) / d;
        BigRational s = (s_ * o.r_ - r_ * o.s_) / d;
        r_ = std::move(r);
        s_ = std::move(s);
        return *this;
    }

    friend ExactK3 operator+(ExactK3 a, const ExactK3& b) { return a += b; }
    friend ExactK3 operator-(ExactK3 a, const ExactK3& b) { return a -= b; }
    friend ExactK3 operator*(ExactK3 a, const ExactK3& b) { return a *= b; }
    friend ExactK3 operator/(ExactK3 a, const ExactK3& b) { return a /= b; }
    friend bool operator==(const ExactK3& a, const ExactK3& b) {
        return a.r_ == b.r_ && a.s_ == b.s_;
    }
    friend bool operator!=(const ExactK3& a, const ExactK3& b) { return !(a == b); }

    double to_double() const {
        return static_cast<double>(r_) + static_cast<double>(s_) * 1.7320508075688772935;
    }

    std::string str() const {
        std::string out = r_.str();
        if (s_ != 0) out += " + (" + s_.str() + ")*sqrt3";
        return out;
    }

private:
    BigRational r_{0};
    BigRational s_{0};
};

/// Backend glue used by the scalar-generic geometry templates.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double fraction(long long num, long long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double sqrt3() { return 1.7320508075688772935; }
    static bool is_zero(double x) { return x == 0.0; }
    static double abs(double x) { return std::fabs(x); }
};

template <>
struct scalar_traits<ExactK3> {
    static constexpr bool exact = true;
    static ExactK3 fraction(long long num, long long den) { return ExactK3::fraction(num, den); }
    static ExactK3 sqrt3() { return ExactK3::sqrt3(); }
    static bool is_zero(const ExactK3& x) { return x.is_zero(); }
};

}  // namespace nk
