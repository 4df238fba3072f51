#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nk/immersion.hpp"
#include "nk/structure.hpp"

namespace nk {

using Tensor3 = std::array<std::array<std::array<double, 3>, 3>, 3>;
using Tensor4 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;

/// Chart point with its image, an orthonormal tangent frame and the raw
/// jacobian pushforwards.
struct FramePoint {
    Vec3 chart{0, 0, 0};
    ManifoldPointD image;
    std::array<TangentVectorD, 3> frame;
    std::array<TangentVectorD, 3> jacobian;
};

/// Frame diagonalizing P as P e_i = lambda_i e_i + mu_i J e_i, angles sorted
/// ascending in [0, pi), orientation fixed by sqrt3 J G(e_i,e_j) = eps_ij^k e_k.
struct AdaptedFrame {
    FramePoint at;
    std::array<double, 3> theta{};
    std::array<double, 3> lambda{};
    std::array<double, 3> mu{};
};

struct SecondFundamentalForm {
    Tensor3 h{};  // h_ij^k = g(h(e_i,e_j), J e_k)

    double norm() const;
    double max_symmetry_defect() const;
    double max_trace_defect() const;
};

struct ConnectionCoeffs {
    Tensor3 omega{};  // omega_ij^k = g(nabla_{e_i} e_j, e_k)

    double max_antisymmetry_defect() const;
};

struct IsotropyReport {
    std::optional<double> mu;      // present iff |h(v,v)|^2 constant over samples
    std::optional<double> lambda;  // present iff g((nabla h)(v,v,v),Jv) constant
    double max_deviation = 0.0;
    int samples = 0;
};

struct Lemma1Report {
    double angle_sum = 0.0;         // distance of theta1+theta2+theta3 to pi Z
    double angle_derivative = 0.0;  // max |e_i(theta_j) + h_jj^i|
    double relation3 = 0.0;         // max defect of the cos/sin relation, j != k
};

struct AngleRelationsReport {
    std::array<double, 3> relation{};      // lambda - (1/6)(...) for the cyclic patterns
    std::array<double, 3> product_form{};  // cos(ti - tj) sin(ti + tj - 2 tk)
    double cyclic_sum = 0.0;               // the three bracketed sums add to zero
};

struct CubicMaximum {
    TangentVectorD direction;  // e_1, global maximizer of F(v) = g(h(v,v),Jv)
    double mu1 = 0.0;          // F at the maximizer
    std::array<TangentVectorD, 3> basis;  // diagonalizes h(e_1, .)
    std::array<double, 3> mu_values{};    // h(e_1,e_j) = mu_j J e_j
};

struct Prop42Report {
    double max_residual = 0.0;        // worst frame 5-tuple defect of the identity
    double i_simplified_defect = 0.0; // assembled I vs its angle/h_12^3 reduction
    double rperp_route_mismatch = 0.0;// normal curvature: Gauss route vs Ricci route
    double lambda_used = 0.0;
};

/// Everything the per-point verifications need, computed once: adapted frame,
/// h and omega in it (and in the smooth Gram-Schmidt frame), and nabla h.
struct LagrangianPointData {
    FramePoint gs;
    AdaptedFrame adapted;
    Tensor3 h{};        // adapted frame
    Tensor3 omega{};    // adapted frame
    Tensor3 h_gs{};     // Gram-Schmidt frame
    Tensor4 nabla_h{};  // adapted frame
    bool constant_coefficients = false;  // Eq-(5.5)-style algebraic path taken
};

/// Pushes the chart axes forward and orthonormalizes under g.
/// Throws DegenerateChartError when the jacobian has rank < 3.
FramePoint frame_at(const Immersion& desc, const Vec3& chart_point);

/// max |g(J e_i, e_j)| over the frame; zero iff the point is Lagrangian.
double lagrangian_defect(const FramePoint& fp);
bool check_lagrangian(const FramePoint& fp, double tol);

AdaptedFrame adapted_frame(const FramePoint& fp);

enum class FrameChoice { Adapted, GramSchmidt };

SecondFundamentalForm second_fundamental_form(const Immersion& desc, const Vec3& chart_point,
                                              FrameChoice frame = FrameChoice::Adapted);
ConnectionCoeffs connection_coeffs(const Immersion& desc, const Vec3& chart_point,
                                   FrameChoice frame = FrameChoice::Adapted);

Tensor4 nabla_h(const Immersion& desc, const Vec3& chart_point);

LagrangianPointData analyze_point(const Immersion& desc, const Vec3& chart_point);

IsotropyReport isotropy_mu(const Immersion& desc, const Vec3& chart_point, int n_samples = 512,
                           double tol = 1e-6);
IsotropyReport isotropy_mu(const LagrangianPointData& data, int n_samples = 512,
                           double tol = 1e-6);
IsotropyReport j_isotropy_lambda(const Immersion& desc, const Vec3& chart_point,
                                 int n_samples = 512, double tol = 1e-6);
IsotropyReport j_isotropy_lambda(const LagrangianPointData& data, int n_samples = 512,
                                 double tol = 1e-6);

/// Max defect of the polarized J-isotropy identity over all frame 4-tuples
/// plus a deterministic batch of random tangent 4-tuples.
double polarized_jisotropy_check(const Immersion& desc, const Vec3& chart_point, double lambda);
double polarized_jisotropy_check(const LagrangianPointData& data, double lambda);

Prop42Report prop42_residual(const Immersion& desc, const Vec3& chart_point);
Prop42Report prop42_residual(const LagrangianPointData& data, double lambda);

CubicMaximum maximize_cubic_form(const Immersion& desc, const Vec3& chart_point);
CubicMaximum maximize_cubic_form(const LagrangianPointData& data);

Lemma1Report lemma1_report(const Immersion& desc, const Vec3& chart_point);

double sectional_curvature(const Immersion& desc, const Vec3& chart_point,
                           const TangentVectorD& X, const TangentVectorD& Y);
double sectional_curvature(const LagrangianPointData& data, const TangentVectorD& X,
                           const TangentVectorD& Y);

AngleRelationsReport angle_relations_check(const std::array<double, 3>& theta, double lambda);

/// Deterministic low-discrepancy unit directions: Fibonacci lattice plus the
/// 13 axis/diagonal directions.
std::vector<std::array<double, 3>> unit_sphere_samples(int n);

/// Normal-bundle curvature coefficients g(R_perp(e_i,e_j) J e_k, J e_l), by
/// the Gauss-route identity (route == 0) or the Ricci equation with shape
/// operator commutators (route == 1).
Tensor4 normal_curvature(const LagrangianPointData& data, int route);

/// Tangent curvature g(R(e_i,e_j)e_k, e_l) via the Gauss equation.
Tensor4 tangent_curvature(const LagrangianPointData& data);

namespace detail {
/// nabla h through the general finite-difference path, bypassing the
/// constant-coefficient reduction (exposed so tests can cross-check the two).
Tensor4 nabla_h_fd(const Immersion& desc, const Vec3& chart_point);
}  // namespace detail

}  // namespace nk
