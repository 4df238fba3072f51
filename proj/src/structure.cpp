#include "nk/structure.hpp"

#include <cmath>

namespace nk {

namespace {

// Richardson-extrapolated central difference of a LieVec-valued function:
// (4 D_{h/2} - D_h)/3 kills the h^2 term.
LieVecD fd_derivative(const std::function<LieVecD(double)>& f, double t0, double h) {
    if (!(h > 0) || t0 + h == t0) throw Error("finite-difference step underflow");
    auto central = [&](double step) {
        return (1.0 / (2.0 * step)) * (f(t0 + step) - f(t0 - step));
    };
    LieVecD d1 = central(h);
    LieVecD d2 = central(h / 2.0);
    return (1.0 / 3.0) * (4.0 * d2 - d1);
}

LieVecD curve_velocity(const std::function<ManifoldPointD(double)>& curve, double t0, double h) {
    auto central = [&](double step) {
        ManifoldPointD plus = curve(t0 + step);
        ManifoldPointD minus = curve(t0 - step);
        QuaternionD dp = (1.0 / (2.0 * step)) * (plus.p.value() - minus.p.value());
        QuaternionD dq = (1.0 / (2.0 * step)) * (plus.q.value() - minus.q.value());
        return std::pair<QuaternionD, QuaternionD>{dp, dq};
    };
    auto [dp1, dq1] = central(h);
    auto [dp2, dq2] = central(h / 2.0);
    QuaternionD dp = (-1.0 / 3.0) * dp1 + (4.0 / 3.0) * dp2;
    QuaternionD dq = (-1.0 / 3.0) * dq1 + (4.0 / 3.0) * dq2;
    ManifoldPointD base = curve(t0);
    // project out the radial roundoff before reading Lie coordinates
    QuaternionD a = base.p.inverse().value() * dp;
    QuaternionD b = base.q.inverse().value() * dq;
    return {a.imag(), b.imag()};
}

}  // namespace

TangentVectorD covariant_derivative_along_known_velocity(
    const LieVecD& velocity, const std::function<TangentVectorD(double)>& field, double t0,
    double step) {
    auto lie = [&](double t) { return field(t).v; };
    LieVecD zdot = fd_derivative(lie, t0, step);
    TangentVectorD at0 = field(t0);
    return {at0.base, zdot + levi_civita(velocity, at0.v)};
}

TangentVectorD covariant_derivative_along(const std::function<ManifoldPointD(double)>& curve,
                                          const std::function<TangentVectorD(double)>& field,
                                          double t0, double step) {
    LieVecD zeta = curve_velocity(curve, t0, step);
    return covariant_derivative_along_known_velocity(zeta, field, t0, step);
}

}  // namespace nk
