#pragma once

#include <array>
#include <functional>
#include <utility>

#include "nk/manifold.hpp"

namespace nk {

/// The Levi-Civita connection of g as a constant bilinear map on Lie
/// coordinates, computed once from the Koszul formula on left-invariant
/// fields (the first-derivative terms drop since g is constant there):
///   2 g(A(x,y), z) = g([x,y],z) - g([y,z],x) + g([z,x],y).
///
/// The 6x6 Gram matrix of g in the basis {(i,0),(j,0),(k,0),(0,i),(0,j),(0,k)}
/// is [[4/3 I, -2/3 I], [-2/3 I, 4/3 I]], whose inverse is [[I, I/2],[I/2, I]];
/// both are hardcoded exactly so the exact backend stays exact.
template <class S>
class ConnectionTensor {
public:
    ConnectionTensor() {
        using T = scalar_traits<S>;
        const S half = T::fraction(1, 2);
        for (int i = 0; i < 6; ++i) {
            LieVec<S> x = LieVec<S>::basis(i);
            for (int j = 0; j < 6; ++j) {
                LieVec<S> y = LieVec<S>::basis(j);
                std::array<S, 6> w{};
                for (int k = 0; k < 6; ++k) {
                    LieVec<S> z = LieVec<S>::basis(k);
                    S twice = metric_g(lie_bracket(x, y), z) - metric_g(lie_bracket(y, z), x) +
                              metric_g(lie_bracket(z, x), y);
                    w[k] = half * twice;
                }
                LieVec<S> c;
                for (int k = 0; k < 3; ++k) {
                    S top = w[k] + half * w[k + 3];
                    S bot = half * w[k] + w[k + 3];
                    c = c + top * LieVec<S>::basis(k) + bot * LieVec<S>::basis(k + 3);
                }
                coef_[i][j] = c;
            }
        }
    }

    LieVec<S> apply(const LieVec<S>& x, const LieVec<S>& y) const {
        LieVec<S> out;
        for (int i = 0; i < 6; ++i) {
            S xi = x.comp(i);
            if (scalar_traits<S>::is_zero(xi)) continue;
            for (int j = 0; j < 6; ++j) {
                S yj = y.comp(j);
                if (scalar_traits<S>::is_zero(yj)) continue;
                out = out + (xi * yj) * coef_[i][j];
            }
        }
        return out;
    }

    static const ConnectionTensor& instance() {
        static const ConnectionTensor tensor;
        return tensor;
    }

private:
    std::array<std::array<LieVec<S>, 6>, 6> coef_;
};

/// nabla_x y on left-invariant fields.
template <class S>
LieVec<S> levi_civita(const LieVec<S>& x, const LieVec<S>& y) {
    return ConnectionTensor<S>::instance().apply(x, y);
}

/// G = nabla J, evaluated as G(x,y) = A(x, Jy) - J A(x,y); J is constant in
/// Lie coordinates so this is exact on left-invariant extensions.
template <class S>
LieVec<S> tensor_G(const LieVec<S>& x, const LieVec<S>& y) {
    return levi_civita(x, apply_J(y)) - apply_J(levi_civita(x, y));
}

/// ((nabla_x P)y, (nabla_x PJ)y), via
///   2 (nabla_x P)y  =  J G(x,Py) + J P G(x,y)
///   2 (nabla_x PJ)y = -G(x,Py) + P G(x,y).
template <class S>
std::pair<LieVec<S>, LieVec<S>> nabla_P(const LieVec<S>& x, const LieVec<S>& y) {
    using T = scalar_traits<S>;
    const S half = T::fraction(1, 2);
    LieVec<S> gxpy = tensor_G(x, apply_P(y));
    LieVec<S> gxy = tensor_G(x, y);
    LieVec<S> dp = half * (apply_J(gxpy) + apply_J(apply_P(gxy)));
    LieVec<S> dpj = half * (-gxpy + apply_P(gxy));
    return {dp, dpj};
}

/// Closed-form curvature tensor of the homogeneous structure:
///   R(X,Y)Z = 5/12 (g(Y,Z)X - g(X,Z)Y)
///           + 1/12 (g(JY,Z)JX - g(JX,Z)JY - 2 g(JX,Y)JZ)
///           + 1/3  (g(PY,Z)PX - g(PX,Z)PY + g(JPY,Z)JPX - g(JPX,Z)JPY).
template <class S>
LieVec<S> curvature(const LieVec<S>& x, const LieVec<S>& y, const LieVec<S>& z) {
    using T = scalar_traits<S>;
    LieVec<S> jx = apply_J(x), jy = apply_J(y);
    LieVec<S> px = apply_P(x), py = apply_P(y);
    LieVec<S> jpx = apply_J(px), jpy = apply_J(py);
    LieVec<S> out = T::fraction(5, 12) * (metric_g(y, z) * x - metric_g(x, z) * y);
    out = out + T::fraction(1, 12) * (metric_g(jy, z) * jx - metric_g(jx, z) * jy -
                                      (S(2) * metric_g(jx, y)) * apply_J(z));
    out = out + T::fraction(1, 3) * (metric_g(py, z) * px - metric_g(px, z) * py +
                                     metric_g(jpy, z) * jpx - metric_g(jpx, z) * jpy);
    return out;
}

/// Curvature composed from the Koszul connection on left-invariant fields:
/// R(x,y)z = A(x,A(y,z)) - A(y,A(x,z)) - A([x,y],z). Used to cross-check the
/// closed form above; their agreement certifies both at once.
template <class S>
LieVec<S> curvature_from_connection(const LieVec<S>& x, const LieVec<S>& y, const LieVec<S>& z) {
    return levi_civita(x, levi_civita(y, z)) - levi_civita(y, levi_civita(x, z)) -
           levi_civita(lie_bracket(x, y), z);
}

// TangentVector wrappers (same-base checked).

template <class S>
TangentVector<S> tensor_G(const TangentVector<S>& x, const TangentVector<S>& y) {
    require_same_base(x, y);
    return {x.base, tensor_G(x.v, y.v)};
}

template <class S>
std::pair<TangentVector<S>, TangentVector<S>> nabla_P(const TangentVector<S>& x,
                                                      const TangentVector<S>& y) {
    require_same_base(x, y);
    auto [dp, dpj] = nabla_P(x.v, y.v);
    return {TangentVector<S>{x.base, dp}, TangentVector<S>{x.base, dpj}};
}

template <class S>
TangentVector<S> curvature(const TangentVector<S>& x, const TangentVector<S>& y,
                           const TangentVector<S>& z) {
    require_same_base(x, y);
    require_same_base(x, z);
    return {x.base, curvature(x.v, y.v, z.v)};
}

// ---------------------------------------------------------------------------
// Structure identity residuals. Each returns the defect of one identity at
// the given Lie vectors; the float backend maxes |.| over random samples and
// the exact backend demands literal zero.

template <class S>
LieVec<S> residual_g_skew(const LieVec<S>& x, const LieVec<S>& y) {
    return tensor_G(x, y) + tensor_G(y, x);
}

/// G(X,JY) + J G(X,Y) = 0 (the J-compatibility of G; forced by J^2 = -id).
template <class S>
LieVec<S> residual_g_jswap(const LieVec<S>& x, const LieVec<S>& y) {
    return tensor_G(x, apply_J(y)) + apply_J(tensor_G(x, y));
}

template <class S>
S residual_g_metric_skew(const LieVec<S>& x, const LieVec<S>& y, const LieVec<S>& z) {
    return metric_g(tensor_G(x, y), z) + metric_g(tensor_G(x, z), y);
}

/// (nabla_X G)(Y,Z) = 1/3 (g(Y,JZ)X + g(X,Z)JY - g(X,Y)JZ), with the closing
/// parenthesis spanning all three terms.
template <class S>
LieVec<S> residual_nabla_G(const LieVec<S>& x, const LieVec<S>& y, const LieVec<S>& z) {
    using T = scalar_traits<S>;
    LieVec<S> lhs = levi_civita(x, tensor_G(y, z)) - tensor_G(levi_civita(x, y), z) -
                    tensor_G(y, levi_civita(x, z));
    LieVec<S> rhs = T::fraction(1, 3) * (metric_g(y, apply_J(z)) * x +
                                         metric_g(x, z) * apply_J(y) -
                                         metric_g(x, y) * apply_J(z));
    return lhs - rhs;
}

template <class S>
LieVec<S> residual_nearly_kahler(const LieVec<S>& x) {
    return tensor_G(x, x);
}

template <class S>
S residual_hermitian(const LieVec<S>& x, const LieVec<S>& y) {
    return metric_g(apply_J(x), apply_J(y)) - metric_g(x, y);
}

/// g = (1/2)(<Z,Z'> + <JZ,JZ'>) against the 4/3, -2/3 closed form.
template <class S>
S residual_metric_form(const LieVec<S>& x, const LieVec<S>& y) {
    using T = scalar_traits<S>;
    S avg = T::fraction(1, 2) * (product_metric(x, y) + product_metric(apply_J(x), apply_J(y)));
    return avg - metric_g(x, y);
}

template <class S>
S residual_P_symmetric(const LieVec<S>& x, const LieVec<S>& y) {
    return metric_g(apply_P(x), y) - metric_g(x, apply_P(y));
}

template <class S>
LieVec<S> residual_P_anticommute(const LieVec<S>& x) {
    return apply_P(apply_J(x)) + apply_J(apply_P(x));
}

template <class S>
LieVec<S> residual_P_involution(const LieVec<S>& x) {
    return apply_P(apply_P(x)) - x;
}

template <class S>
LieVec<S> residual_J_squared(const LieVec<S>& x) {
    return apply_J(apply_J(x)) + x;
}

/// nabla P formula against the direct derivative A(x,P y) - P A(x,y) on
/// left-invariant fields (P constant in Lie coordinates), and likewise for PJ.
template <class S>
LieVec<S> residual_nabla_P_formula(const LieVec<S>& x, const LieVec<S>& y) {
    LieVec<S> direct = levi_civita(x, apply_P(y)) - apply_P(levi_civita(x, y));
    return direct - nabla_P(x, y).first;
}

template <class S>
LieVec<S> residual_nabla_PJ_formula(const LieVec<S>& x, const LieVec<S>& y) {
    LieVec<S> pj_y = apply_P(apply_J(y));
    LieVec<S> direct = levi_civita(x, pj_y) - apply_P(apply_J(levi_civita(x, y)));
    return direct - nabla_P(x, y).second;
}

template <class S>
LieVec<S> residual_torsion(const LieVec<S>& x, const LieVec<S>& y) {
    return levi_civita(x, y) - levi_civita(y, x) - lie_bracket(x, y);
}

template <class S>
S residual_metric_compat(const LieVec<S>& x, const LieVec<S>& y, const LieVec<S>& z) {
    return metric_g(levi_civita(x, y), z) + metric_g(y, levi_civita(x, z));
}

template <class S>
LieVec<S> residual_curvature_match(const LieVec<S>& x, const LieVec<S>& y, const LieVec<S>& z) {
    return curvature(x, y, z) - curvature_from_connection(x, y, z);
}

template <class S>
LieVec<S> residual_first_bianchi(const LieVec<S>& x, const LieVec<S>& y, const LieVec<S>& z) {
    return curvature(x, y, z) + curvature(y, z, x) + curvature(z, x, y);
}

// ---------------------------------------------------------------------------
// Covariant differentiation along curves (float backend only).

/// Covariant derivative of a field along a curve at t0: in Lie coordinates
/// z'(t0) + A(zeta(t0), z(t0)), where zeta is the curve velocity. z' uses
/// Richardson-extrapolated central differences (steps h and h/2); the
/// velocity is differenced the same way and projected back to Im H.
TangentVectorD covariant_derivative_along(
    const std::function<ManifoldPointD(double)>& curve,
    const std::function<TangentVectorD(double)>& field, double t0, double step = 1e-4);

/// Same, with the curve velocity supplied exactly (used where the jacobian of
/// an immersion is available in closed form).
TangentVectorD covariant_derivative_along_known_velocity(
    const LieVecD& velocity, const std::function<TangentVectorD(double)>& field, double t0,
    double step = 1e-4);

}  // namespace nk
