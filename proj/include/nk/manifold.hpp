#pragma once

#include <utility>

#include "nk/errors.hpp"
#include "nk/quaternion.hpp"

namespace nk {

/// A point (p,q) of S3 x S3.
template <class S>
struct ManifoldPoint {
    UnitQuaternion<S> p, q;

    static ManifoldPoint origin() { return {UnitQuaternion<S>(), UnitQuaternion<S>()}; }
};

using ManifoldPointD = ManifoldPoint<double>;

template <class S>
bool same_point(const ManifoldPoint<S>& a, const ManifoldPoint<S>& b) {
    Quaternion<S> dp = a.p.value() - b.p.value();
    Quaternion<S> dq = a.q.value() - b.q.value();
    if constexpr (scalar_traits<S>::exact) {
        return dp.is_zero() && dq.is_zero();
    } else {
        return static_cast<double>(dp.norm_sq()) < 1e-18 &&
               static_cast<double>(dq.norm_sq()) < 1e-18;
    }
}

/// Left-translated ("Lie") coordinates of a tangent vector: the pair
/// (alpha, beta) = (p^-1 U, q^-1 V) of imaginary quaternions. The metric, J,
/// P, the connection and the curvature are all constant in these coordinates,
/// which is what makes exact certification of the structure identities work.
template <class S>
struct LieVec {
    Imaginary<S> a, b;

    LieVec() = default;
    LieVec(Imaginary<S> a_, Imaginary<S> b_) : a(a_), b(b_) {}

    S comp(int i) const {
        switch (i) {
            case 0: return a.x;
            case 1: return a.y;
            case 2: return a.z;
            case 3: return b.x;
            case 4: return b.y;
            default: return b.z;
        }
    }
    static LieVec basis(int i) {
        LieVec v;
        S* slots[6] = {&v.a.x, &v.a.y, &v.a.z, &v.b.x, &v.b.y, &v.b.z};
        *slots[i] = S(1);
        return v;
    }

    LieVec operator-() const { return {-a, -b}; }
    friend LieVec operator+(const LieVec& u, const LieVec& v) { return {u.a + v.a, u.b + v.b}; }
    friend LieVec operator-(const LieVec& u, const LieVec& v) { return {u.a - v.a, u.b - v.b}; }
    friend LieVec operator*(const S& c, const LieVec& v) { return {c * v.a, c * v.b}; }

    bool is_zero() const { return a.is_zero() && b.is_zero(); }
};

using LieVecD = LieVec<double>;

/// Hermitian metric in Lie coordinates:
///   g = (4/3)(<a,a'> + <b,b'>) - (2/3)(<a,b'> + <a',b>).
template <class S>
S metric_g(const LieVec<S>& u, const LieVec<S>& v) {
    using T = scalar_traits<S>;
    return T::fraction(4, 3) * (dot(u.a, v.a) + dot(u.b, v.b)) -
           T::fraction(2, 3) * (dot(u.a, v.b) + dot(v.a, u.b));
}

/// The product (round x round) metric, used only to cross-check that g equals
/// (1/2)(<Z,Z'> + <JZ,JZ'>).
template <class S>
S product_metric(const LieVec<S>& u, const LieVec<S>& v) {
    return dot(u.a, v.a) + dot(u.b, v.b);
}

/// Almost complex structure: (a,b) -> (2b - a, b - 2a)/sqrt3.
template <class S>
LieVec<S> apply_J(const LieVec<S>& v) {
    S c = S(1) / scalar_traits<S>::sqrt3();
    return {c * (S(2) * v.b - v.a), c * (v.b - S(2) * v.a)};
}

/// Almost product structure: (a,b) -> (b,a).
template <class S>
LieVec<S> apply_P(const LieVec<S>& v) {
    return {v.b, v.a};
}

/// Bracket of left-invariant fields: componentwise quaternion commutator.
template <class S>
LieVec<S> lie_bracket(const LieVec<S>& u, const LieVec<S>& v) {
    return {commutator(u.a, v.a), commutator(u.b, v.b)};
}

/// Tangent vector at a base point, stored in Lie coordinates.
template <class S>
struct TangentVector {
    ManifoldPoint<S> base;
    LieVec<S> v;

    TangentVector() = default;
    TangentVector(ManifoldPoint<S> base_, LieVec<S> v_) : base(std::move(base_)), v(v_) {}

    TangentVector operator-() const { return {base, -v}; }
    friend TangentVector operator*(const S& c, const TangentVector& t) { return {t.base, c * t.v}; }
};

using TangentVectorD = TangentVector<double>;

template <class S>
void require_same_base(const TangentVector<S>& x, const TangentVector<S>& y) {
    if (!same_point(x.base, y.base)) throw BasePointMismatch("tangent vectors at different base points");
}

template <class S>
TangentVector<S> operator+(const TangentVector<S>& x, const TangentVector<S>& y) {
    require_same_base(x, y);
    return {x.base, x.v + y.v};
}

template <class S>
TangentVector<S> operator-(const TangentVector<S>& x, const TangentVector<S>& y) {
    require_same_base(x, y);
    return {x.base, x.v - y.v};
}

template <class S>
S metric_g(const TangentVector<S>& x, const TangentVector<S>& y) {
    require_same_base(x, y);
    return metric_g(x.v, y.v);
}

template <class S>
TangentVector<S> apply_J(const TangentVector<S>& x) {
    return {x.base, apply_J(x.v)};
}

template <class S>
TangentVector<S> apply_P(const TangentVector<S>& x) {
    return {x.base, apply_P(x.v)};
}

/// Lie coordinates of an ambient tangent pair (U,V) at (p,q): (p^-1 U, q^-1 V).
/// Throws TangencyError when either product has a real part (non-tangent input).
template <class S>
TangentVector<S> lie_coords(const ManifoldPoint<S>& pt, const Quaternion<S>& U,
                            const Quaternion<S>& V) {
    Quaternion<S> a = pt.p.inverse().value() * U;
    Quaternion<S> b = pt.q.inverse().value() * V;
    if constexpr (scalar_traits<S>::exact) {
        if (!scalar_traits<S>::is_zero(a.w) || !scalar_traits<S>::is_zero(b.w))
            throw TangencyError("ambient pair is not tangent to S3 x S3");
    } else {
        double scale = 1.0 + std::sqrt(static_cast<double>(U.norm_sq() + V.norm_sq()));
        if (std::fabs(static_cast<double>(a.w)) > 1e-9 * scale ||
            std::fabs(static_cast<double>(b.w)) > 1e-9 * scale)
            throw TangencyError("ambient pair is not tangent to S3 x S3");
    }
    return {pt, {a.imag(), b.imag()}};
}

/// Ambient representative (U,V) = (p*alpha, q*beta) of a tangent vector.
template <class S>
std::pair<Quaternion<S>, Quaternion<S>> from_lie(const TangentVector<S>& t) {
    return {t.base.p.value() * t.v.a.as_quaternion(), t.base.q.value() * t.v.b.as_quaternion()};
}

}  // namespace nk
