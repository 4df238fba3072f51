#include "nk/lagrangian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "nk/errors.hpp"
#include "nk/rng.hpp"

namespace nk {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kPi = 3.14159265358979323846;

// finite-difference steps (central + Richardson throughout)
constexpr double kFrameStep = 2e-4;   // first derivatives of frame fields
constexpr double kOuterStep = 1e-3;   // derivatives of h/omega coefficient functions
constexpr double kLagrangianTol = 1e-6;
constexpr double kConstantCoeffTol = 1e-7;  // Eq-(5.5) path detection

using Mat3 = Eigen::Matrix3d;

double kron(int i, int j) { return i == j ? 1.0 : 0.0; }

double eps_sym(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0.0;
    return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;  // even permutations of (0,1,2)
}

std::array<TangentVectorD, 3> gram_schmidt(const std::array<TangentVectorD, 3>& cols) {
    std::array<TangentVectorD, 3> out = cols;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < i; ++j) out[i] = out[i] - metric_g(out[i], out[j]) * out[j];
        double n2 = metric_g(out[i], out[i]);
        double scale = 1.0 + std::sqrt(std::max(0.0, metric_g(cols[i], cols[i])));
        if (!(n2 > 0.0) || std::sqrt(n2) < 1e-10 * scale)
            throw DegenerateChartError("immersion jacobian has rank < 3 at this chart point");
        out[i] = (1.0 / std::sqrt(n2)) * out[i];
    }
    return out;
}

double abs_max(const LieVecD& v) {
    double m = 0;
    for (int i = 0; i < 6; ++i) m = std::max(m, std::fabs(v.comp(i)));
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Frames

FramePoint frame_at(const Immersion& desc, const Vec3& chart_point) {
    auto jac = jacobian(desc, chart_point);
    FramePoint fp;
    fp.chart = chart_point;
    fp.image = jac[0].base;
    fp.jacobian = jac;
    fp.frame = gram_schmidt(jac);
    return fp;
}

double lagrangian_defect(const FramePoint& fp) {
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            worst = std::max(worst, std::fabs(metric_g(apply_J(fp.frame[i]), fp.frame[j])));
    return worst;
}

bool check_lagrangian(const FramePoint& fp, double tol) { return lagrangian_defect(fp) <= tol; }

namespace {

double theta_from(double lambda, double mu) {
    double t = 0.5 * std::atan2(mu, lambda);  // (-pi/2, pi/2]
    // representatives live in [0, pi); noise below the clustering scale must
    // not wrap 0 to pi - eps or the sorted order becomes unstable
    if (t < -1e-7)
        t += kPi;
    else if (t < 0)
        t = 0;
    if (t >= kPi) t -= kPi;
    return t;
}

void flip(TangentVectorD& e) { e = -1.0 * e; }

}  // namespace

AdaptedFrame adapted_frame(const FramePoint& fp) {
    // P restricted to TM (+) J TM: P f_i = sum_j T_ji f_j + S_ji J f_j with T, S
    // symmetric and commuting at Lagrangian points.
    Mat3 T, S;
    std::array<TangentVectorD, 3> Pf;
    for (int i = 0; i < 3; ++i) Pf[i] = apply_P(fp.frame[i]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T(i, j) = metric_g(Pf[i], fp.frame[j]);
            S(i, j) = metric_g(Pf[i], apply_J(fp.frame[j]));
        }
    T = 0.5 * (T + T.transpose()).eval();
    S = 0.5 * (S + S.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Mat3> es(T);
    Mat3 V = es.eigenvectors();
    Eigen::Vector3d ev = es.eigenvalues();

    // within eigenvalue clusters of T, diagonalize S restricted to the cluster
    for (int a = 0; a < 3;) {
        int b = a + 1;
        while (b < 3 && ev(b) - ev(a) < 1e-7) ++b;
        if (b - a > 1) {
            Eigen::MatrixXd block =
                V.block(0, a, 3, b - a).transpose() * S * V.block(0, a, 3, b - a);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(block);
            V.block(0, a, 3, b - a) = V.block(0, a, 3, b - a) * es2.eigenvectors();
        }
        a = b;
    }

    std::array<TangentVectorD, 3> e;
    std::array<double, 3> lam{}, mu{}, th{};
    for (int c = 0; c < 3; ++c) {
        TangentVectorD v = V(0, c) * fp.frame[0] + V(1, c) * fp.frame[1] + V(2, c) * fp.frame[2];
        double l = metric_g(apply_P(v), v);
        double m = metric_g(apply_P(v), apply_J(v));
        TangentVectorD defect = apply_P(v) - l * v - m * apply_J(v);
        if (abs_max(defect.v) > 1e-6)
            throw IntegrityError("joint diagonalization of P failed (non-Lagrangian input?)");
        e[c] = v;
        lam[c] = l;
        mu[c] = m;
        th[c] = theta_from(l, m);
    }

    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return th[a] < th[b]; });
    std::array<TangentVectorD, 3> es_sorted{e[order[0]], e[order[1]], e[order[2]]};
    e = es_sorted;

    // orientation: sqrt3 J G(e1,e2) must equal +e3
    auto orientation = [&] {
        return kSqrt3 * metric_g(apply_J(tensor_G(e[0], e[1])), e[2]);
    };
    double c3 = orientation();
    if (std::fabs(std::fabs(c3) - 1.0) > 1e-6)
        throw IntegrityError("sqrt3 J G(e1,e2) is not +-e3; frame is not adapted");
    if (c3 < 0) flip(e[2]);

    // sign canonicalization (even flips keep the orientation)
    auto dominant_negative = [](const TangentVectorD& v) {
        int best = 0;
        for (int i = 1; i < 6; ++i)
            if (std::fabs(v.v.comp(i)) > std::fabs(v.v.comp(best))) best = i;
        return v.v.comp(best) < 0;
    };
    if (dominant_negative(e[0])) {
        flip(e[0]);
        flip(e[1]);
    }
    if (dominant_negative(e[1])) {
        flip(e[1]);
        flip(e[2]);
    }

    AdaptedFrame out;
    out.at = fp;
    out.at.frame = e;
    for (int i = 0; i < 3; ++i) {
        out.lambda[i] = metric_g(apply_P(e[i]), e[i]);
        out.mu[i] = metric_g(apply_P(e[i]), apply_J(e[i]));
        out.theta[i] = theta_from(out.lambda[i], out.mu[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Frame fields and covariant frame derivatives

namespace {

// Smooth adapted frame through a stencil: for each angle cluster of the
// center frame, project the center vectors onto the span of the stencil's
// matching eigenvectors and re-orthonormalize. The cluster spans vary
// smoothly even where individual eigenvectors do not, and the result stays
// adapted (it lies in the same P-eigenspace clusters), so omega and the
// angle relations computed from this field are those of a genuine smoothly
// chosen frame satisfying the alignment conditions.
std::array<TangentVectorD, 3> align_adapted(const AdaptedFrame& center,
                                            const AdaptedFrame& stencil) {
    auto angle_dist = [](double a, double b) { return std::fabs(std::remainder(a - b, kPi)); };

    // center clusters (angles are sorted)
    std::array<int, 3> cluster_of{};
    int n_clusters = 0;
    for (int i = 0; i < 3; ++i) {
        if (i > 0 && angle_dist(center.theta[i], center.theta[i - 1]) < 1e-4)
            cluster_of[i] = cluster_of[i - 1];
        else
            cluster_of[i] = n_clusters++;
    }

    // assign each stencil vector to the nearest center cluster
    std::array<int, 3> assigned{};
    for (int s = 0; s < 3; ++s) {
        int best = 0;
        double best_d = 1e300;
        for (int i = 0; i < 3; ++i) {
            double d = angle_dist(stencil.theta[s], center.theta[i]);
            if (d < best_d) {
                best_d = d;
                best = cluster_of[i];
            }
        }
        assigned[s] = best;
    }

    std::array<TangentVectorD, 3> out;
    for (int c = 0; c < n_clusters; ++c) {
        std::vector<int> members, span;
        for (int i = 0; i < 3; ++i)
            if (cluster_of[i] == c) members.push_back(i);
        for (int s = 0; s < 3; ++s)
            if (assigned[s] == c) span.push_back(s);
        if (span.size() != members.size())
            throw IntegrityError("adapted frame field: angle clusters changed across the stencil");
        for (size_t m = 0; m < members.size(); ++m) {
            int i = members[m];
            LieVecD v;
            for (int s : span)
                v = v + metric_g(center.at.frame[i].v, stencil.at.frame[s].v) *
                            stencil.at.frame[s].v;
            TangentVectorD cand{stencil.at.image, v};
            for (size_t p = 0; p < m; ++p)
                cand = cand - metric_g(cand, out[members[p]]) * out[members[p]];
            double n2 = metric_g(cand, cand);
            if (!(n2 > 1e-8))
                throw IntegrityError("adapted frame field: cluster projection degenerated");
            out[i] = (1.0 / std::sqrt(n2)) * cand;
        }
    }
    return out;
}

struct FrameFieldSpec {
    enum class Kind { GramSchmidt, AdaptedAligned } kind = Kind::GramSchmidt;
    AdaptedFrame ref;  // AdaptedAligned: center frame to follow
};

std::array<TangentVectorD, 3> eval_frame_field(const Immersion& desc, const Vec3& p,
                                               const FrameFieldSpec& spec) {
    FramePoint fp = frame_at(desc, p);
    if (spec.kind == FrameFieldSpec::Kind::GramSchmidt) return fp.frame;
    return align_adapted(spec.ref, adapted_frame(fp));
}

// Chart velocities c_i with push(c_i) = E_i, via the jacobian Gram matrix.
std::array<Eigen::Vector3d, 3> chart_velocities(const FramePoint& fp,
                                                const std::array<TangentVectorD, 3>& E) {
    Mat3 M;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) M(a, b) = metric_g(fp.jacobian[a], fp.jacobian[b]);
    Eigen::LLT<Mat3> llt(M);
    std::array<Eigen::Vector3d, 3> out;
    for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d rhs;
        for (int a = 0; a < 3; ++a) rhs(a) = metric_g(fp.jacobian[a], E[i]);
        out[i] = llt.solve(rhs);
    }
    return out;
}

struct FrameDerivatives {
    std::array<TangentVectorD, 3> E;
    std::array<std::array<TangentVectorD, 3>, 3> D;  // D[i][j] = ambient nabla_{E_i} E_j
};

// Covariant derivatives of a frame field along its own directions: in Lie
// coordinates z_j'(0) + A(zeta_i, z_j(0)), with z_j' from Richardson central
// differences of the field and zeta_i exact from the jacobian.
FrameDerivatives frame_derivatives(const Immersion& desc, const Vec3& center,
                                   const FrameFieldSpec& spec, double step = kFrameStep) {
    FramePoint fp = frame_at(desc, center);
    FrameDerivatives out;
    out.E = eval_frame_field(desc, center, spec);
    auto vel = chart_velocities(fp, out.E);
    for (int i = 0; i < 3; ++i) {
        LieVecD zeta;
        for (int a = 0; a < 3; ++a) zeta = zeta + vel[i](a) * fp.jacobian[a].v;
        auto at = [&](double t) {
            Vec3 p = center;
            for (int a = 0; a < 3; ++a) p[a] += t * vel[i](a);
            return eval_frame_field(desc, p, spec);
        };
        auto fplus = at(step), fminus = at(-step);
        auto fplus2 = at(step / 2), fminus2 = at(-step / 2);
        for (int j = 0; j < 3; ++j) {
            LieVecD d1 = (1.0 / (2.0 * step)) * (fplus[j].v - fminus[j].v);
            LieVecD d2 = (1.0 / step) * (fplus2[j].v - fminus2[j].v);
            LieVecD zdot = (1.0 / 3.0) * (4.0 * d2 - d1);
            out.D[i][j] = TangentVectorD{fp.image, zdot + levi_civita(zeta, out.E[j].v)};
        }
    }
    return out;
}

struct PointTensors {
    Tensor3 h{};
    Tensor3 omega{};
};

PointTensors tensors_from_derivatives(const FrameDerivatives& fd, bool integrity_checks) {
    PointTensors out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                out.h[i][j][k] = metric_g(fd.D[i][j], apply_J(fd.E[k]));
                out.omega[i][j][k] = metric_g(fd.D[i][j], fd.E[k]);
            }
    if (integrity_checks) {
        double sym = 0, trace = 0, anti = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                for (int k = 0; k < 3; ++k) {
                    sym = std::max(sym, std::fabs(out.h[i][j][k] - out.h[j][i][k]));
                    sym = std::max(sym, std::fabs(out.h[i][j][k] - out.h[i][k][j]));
                    anti = std::max(anti, std::fabs(out.omega[i][j][k] + out.omega[i][k][j]));
                }
                double tr = out.h[0][0][j] + out.h[1][1][j] + out.h[2][2][j];
                trace = std::max(trace, std::fabs(tr));
            }
        if (sym > kLagrangianTol)
            throw IntegrityError("second fundamental form lost total symmetry");
        if (trace > kLagrangianTol)
            throw IntegrityError("second fundamental form is not trace-free");
        if (anti > kLagrangianTol)
            throw IntegrityError("induced connection coefficients lost antisymmetry");
    }
    // exact symmetries are imposed after the defect gates above
    Tensor3 hs{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                hs[i][j][k] = (out.h[i][j][k] + out.h[j][i][k] + out.h[i][k][j] +
                               out.h[k][j][i] + out.h[j][k][i] + out.h[k][i][j]) /
                              6.0;
    out.h = hs;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = j; k < 3; ++k) {
                double a = 0.5 * (out.omega[i][j][k] - out.omega[i][k][j]);
                out.omega[i][j][k] = a;
                out.omega[i][k][j] = -a;
            }
    return out;
}

FrameFieldSpec adapted_field_spec(const AdaptedFrame& af) {
    FrameFieldSpec spec;
    spec.kind = FrameFieldSpec::Kind::AdaptedAligned;
    spec.ref = af;
    return spec;
}

}  // namespace

double SecondFundamentalForm::norm() const {
    double s = 0;
    for (const auto& a : h)
        for (const auto& b : a)
            for (double c : b) s += c * c;
    return std::sqrt(s);
}

double SecondFundamentalForm::max_symmetry_defect() const {
    double m = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                m = std::max(m, std::fabs(h[i][j][k] - h[j][i][k]));
                m = std::max(m, std::fabs(h[i][j][k] - h[i][k][j]));
            }
    return m;
}

double SecondFundamentalForm::max_trace_defect() const {
    double m = 0;
    for (int k = 0; k < 3; ++k) m = std::max(m, std::fabs(h[0][0][k] + h[1][1][k] + h[2][2][k]));
    return m;
}

double ConnectionCoeffs::max_antisymmetry_defect() const {
    double m = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                m = std::max(m, std::fabs(omega[i][j][k] + omega[i][k][j]));
    return m;
}

// ---------------------------------------------------------------------------
// analyze_point and the h / omega / nabla h operations

namespace {

LagrangianPointData analyze_point_impl(const Immersion& desc, const Vec3& chart_point) {
    LagrangianPointData data;
    data.gs = frame_at(desc, chart_point);
    if (lagrangian_defect(data.gs) > kLagrangianTol)
        throw IntegrityError("chart point is not Lagrangian within tolerance");
    data.adapted = adapted_frame(data.gs);

    FrameFieldSpec gs_spec;  // GramSchmidt
    FrameDerivatives gs_fd = frame_derivatives(desc, chart_point, gs_spec);
    PointTensors gs_t = tensors_from_derivatives(gs_fd, true);
    data.h_gs = gs_t.h;

    FrameFieldSpec ad_spec = adapted_field_spec(data.adapted);
    FrameDerivatives ad_fd = frame_derivatives(desc, chart_point, ad_spec);
    PointTensors ad_t = tensors_from_derivatives(ad_fd, true);
    data.h = ad_t.h;
    data.omega = ad_t.omega;
    return data;
}

// g((nabla h)(e_i, e_j, e_k), J e_l) with constant h/omega coefficients
// (catalog-style frames): sum_m [ h_jk^m (eps_mi^l / sqrt3 + omega_im^l)
//                                - omega_ij^m h_mk^l - omega_ik^m h_mj^l ].
Tensor4 nabla_h_constant(const Tensor3& h, const Tensor3& omega) {
    Tensor4 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double acc = 0;
                    for (int m = 0; m < 3; ++m) {
                        acc += h[j][k][m] * (eps_sym(m, i, l) / kSqrt3 + omega[i][m][l]);
                        acc -= omega[i][j][m] * h[m][k][l];
                        acc -= omega[i][k][m] * h[m][j][l];
                    }
                    out[i][j][k][l] = acc;
                }
    return out;
}

// General path: central differences of the coefficient functions plus the
// normal-connection and induced-connection corrections,
//   e_i(h_jk^l) + sum_m h_jk^m [ g(G(e_i,e_m), J e_l) + omega_im^l ]
//              - sum_m [ omega_ij^m h_mk^l + omega_ik^m h_mj^l ].
Tensor4 nabla_h_general(const Immersion& desc, const Vec3& center,
                        const LagrangianPointData& data, const FrameFieldSpec& spec) {
    auto vel = chart_velocities(data.gs, data.adapted.at.frame);
    Tensor4 dh{};  // dh[i][j][k][l] = e_i(h_jk^l)
    for (int i = 0; i < 3; ++i) {
        auto coeffs_at = [&](double t) {
            Vec3 p = center;
            for (int a = 0; a < 3; ++a) p[a] += t * vel[i](a);
            FrameDerivatives fd = frame_derivatives(desc, p, spec);
            return tensors_from_derivatives(fd, false).h;
        };
        Tensor3 hp = coeffs_at(kOuterStep), hm = coeffs_at(-kOuterStep);
        Tensor3 hp2 = coeffs_at(kOuterStep / 2), hm2 = coeffs_at(-kOuterStep / 2);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double d1 = (hp[j][k][l] - hm[j][k][l]) / (2 * kOuterStep);
                    double d2 = (hp2[j][k][l] - hm2[j][k][l]) / kOuterStep;
                    dh[i][j][k][l] = (4 * d2 - d1) / 3.0;
                }
    }
    const auto& E = data.adapted.at.frame;
    Tensor4 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double acc = dh[i][j][k][l];
                    for (int m = 0; m < 3; ++m) {
                        double gterm = metric_g(tensor_G(E[i], E[m]), apply_J(E[l]));
                        acc += data.h[j][k][m] * (gterm + data.omega[i][m][l]);
                        acc -= data.omega[i][j][m] * data.h[m][k][l];
                        acc -= data.omega[i][k][m] * data.h[m][j][l];
                    }
                    out[i][j][k][l] = acc;
                }
    return out;
}

void attach_nabla_h(const Immersion& desc, const Vec3& center, LagrangianPointData& data) {
    FrameFieldSpec spec = adapted_field_spec(data.adapted);
    // probe stencil: do h and omega vary along the chart axes?
    double variation = 0;
    for (int a = 0; a < 3; ++a) {
        for (double sgn : {-1.0, 1.0}) {
            Vec3 p = center;
            p[a] += sgn * kOuterStep;
            FrameDerivatives fd = frame_derivatives(desc, p, spec);
            PointTensors t = tensors_from_derivatives(fd, false);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) {
                        variation = std::max(variation,
                                             std::fabs(t.h[i][j][k] - data.h[i][j][k]));
                        variation = std::max(
                            variation, std::fabs(t.omega[i][j][k] - data.omega[i][j][k]));
                    }
        }
    }
    data.constant_coefficients = variation < kConstantCoeffTol;
    data.nabla_h = data.constant_coefficients ? nabla_h_constant(data.h, data.omega)
                                              : nabla_h_general(desc, center, data, spec);
}

}  // namespace

LagrangianPointData analyze_point(const Immersion& desc, const Vec3& chart_point) {
    LagrangianPointData data = analyze_point_impl(desc, chart_point);
    attach_nabla_h(desc, chart_point, data);
    return data;
}

namespace detail {
Tensor4 nabla_h_fd(const Immersion& desc, const Vec3& chart_point) {
    LagrangianPointData data = analyze_point_impl(desc, chart_point);
    FrameFieldSpec spec = adapted_field_spec(data.adapted);
    return nabla_h_general(desc, chart_point, data, spec);
}
}  // namespace detail

SecondFundamentalForm second_fundamental_form(const Immersion& desc, const Vec3& chart_point,
                                              FrameChoice frame) {
    if (frame == FrameChoice::GramSchmidt) {
        FramePoint fp = frame_at(desc, chart_point);
        if (lagrangian_defect(fp) > kLagrangianTol)
            throw IntegrityError("chart point is not Lagrangian within tolerance");
        FrameFieldSpec spec;
        FrameDerivatives fd = frame_derivatives(desc, chart_point, spec);
        return SecondFundamentalForm{tensors_from_derivatives(fd, true).h};
    }
    LagrangianPointData data = analyze_point_impl(desc, chart_point);
    return SecondFundamentalForm{data.h};
}

ConnectionCoeffs connection_coeffs(const Immersion& desc, const Vec3& chart_point,
                                   FrameChoice frame) {
    if (frame == FrameChoice::GramSchmidt) {
        FrameFieldSpec spec;
        FrameDerivatives fd = frame_derivatives(desc, chart_point, spec);
        return ConnectionCoeffs{tensors_from_derivatives(fd, true).omega};
    }
    LagrangianPointData data = analyze_point_impl(desc, chart_point);
    return ConnectionCoeffs{data.omega};
}

Tensor4 nabla_h(const Immersion& desc, const Vec3& chart_point) {
    return analyze_point(desc, chart_point).nabla_h;
}

// ---------------------------------------------------------------------------
// Isotropy functionals

std::vector<std::array<double, 3>> unit_sphere_samples(int n) {
    std::vector<std::array<double, 3>> out;
    out.reserve(n + 13);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        double z = 1.0 - 2.0 * (k + 0.5) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        out.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
    }
    const double s2 = 1.0 / std::sqrt(2.0), s3 = 1.0 / std::sqrt(3.0);
    std::vector<std::array<double, 3>> extra = {
        {1, 0, 0},       {0, 1, 0},       {0, 0, 1},        {s2, s2, 0},
        {s2, -s2, 0},    {s2, 0, s2},     {s2, 0, -s2},     {0, s2, s2},
        {0, s2, -s2},    {s3, s3, s3},    {s3, s3, -s3},    {s3, -s3, s3},
        {s3, -s3, -s3}};
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
}

namespace {

IsotropyReport isotropy_report(const LagrangianPointData& data, int n_samples, double tol,
                               bool want_lambda) {
    auto dirs = unit_sphere_samples(n_samples);
    double lo = 0, hi = 0, sum = 0;
    bool first = true;
    for (const auto& v : dirs) {
        double value = 0;
        if (!want_lambda) {
            for (int k = 0; k < 3; ++k) {
                double c = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) c += v[i] * v[j] * data.h[i][j][k];
                value += c * c;
            }
        } else {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l)
                            value += v[i] * v[j] * v[k] * v[l] * data.nabla_h[i][j][k][l];
        }
        if (first) {
            lo = hi = value;
            first = false;
        }
        lo = std::min(lo, value);
        hi = std::max(hi, value);
        sum += value;
    }
    IsotropyReport rep;
    rep.samples = static_cast<int>(dirs.size());
    rep.max_deviation = hi - lo;
    if (rep.max_deviation <= tol) {
        double mean = sum / rep.samples;
        if (want_lambda)
            rep.lambda = mean;
        else
            rep.mu = std::sqrt(std::max(0.0, mean));
    }
    return rep;
}

}  // namespace

IsotropyReport isotropy_mu(const Immersion& desc, const Vec3& chart_point, int n_samples,
                           double tol) {
    LagrangianPointData data = analyze_point_impl(desc, chart_point);
    return isotropy_report(data, n_samples, tol, false);
}

IsotropyReport isotropy_mu(const LagrangianPointData& data, int n_samples, double tol) {
    return isotropy_report(data, n_samples, tol, false);
}

IsotropyReport j_isotropy_lambda(const Immersion& desc, const Vec3& chart_point, int n_samples,
                                 double tol) {
    return isotropy_report(analyze_point(desc, chart_point), n_samples, tol, true);
}

IsotropyReport j_isotropy_lambda(const LagrangianPointData& data, int n_samples, double tol) {
    return isotropy_report(data, n_samples, tol, true);
}

// ---------------------------------------------------------------------------
// Polarized J-isotropy identity and the Ricci-identity residual

namespace {

// Per-point tensor tables shared by the long identities.
struct PointTables {
    std::array<LieVecD, 3> E, JE, PE, PJE, JPE;
    std::array<std::array<LieVecD, 3>, 3> hvec;   // h(e_i,e_j) as a normal vector
    std::array<std::array<LieVecD, 3>, 3> Gvec;   // G(e_i,e_j)
    std::array<std::array<LieVecD, 3>, 3> DP;     // (nabla_{e_i} P) e_j
    std::array<std::array<LieVecD, 3>, 3> DPJ;    // (nabla_{e_i} PJ) e_j
    Tensor3 h{};
    Tensor4 nh{};
    Tensor4 Rt{};  // tangent curvature, Gauss equation
    Tensor4 Rp{};  // normal curvature on (J e_k, J e_l)
};

PointTables build_tables(const LagrangianPointData& data) {
    PointTables t;
    const auto& E = data.adapted.at.frame;
    for (int i = 0; i < 3; ++i) {
        t.E[i] = E[i].v;
        t.JE[i] = apply_J(t.E[i]);
        t.PE[i] = apply_P(t.E[i]);
        t.PJE[i] = apply_P(t.JE[i]);
        t.JPE[i] = apply_J(t.PE[i]);
    }
    t.h = data.h;
    t.nh = data.nabla_h;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            LieVecD hv;
            for (int k = 0; k < 3; ++k) hv = hv + data.h[i][j][k] * t.JE[k];
            t.hvec[i][j] = hv;
            t.Gvec[i][j] = tensor_G(t.E[i], t.E[j]);
            auto [dp, dpj] = nabla_P(t.E[i], t.E[j]);
            t.DP[i][j] = dp;
            t.DPJ[i][j] = dpj;
        }
    // Gauss equation: R(X,Y,Z,W) = Rt~(X,Y,Z,W) + g(h(X,W),h(Y,Z)) - g(h(X,Z),h(Y,W))
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double amb = metric_g(curvature(t.E[i], t.E[j], t.E[k]), t.E[l]);
                    double corr = 0;
                    for (int m = 0; m < 3; ++m)
                        corr += data.h[i][l][m] * data.h[j][k][m] -
                                data.h[i][k][m] * data.h[j][l][m];
                    t.Rt[i][j][k][l] = amb + corr;
                }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t.Rp[i][j][k][l] = t.Rt[i][j][k][l] -
                                       (kron(i, l) * kron(j, k) - kron(i, k) * kron(j, l)) / 3.0;
    return t;
}

using Coords = std::array<double, 3>;

double eval_eq42(const PointTables& t, const Coords& Y, const Coords& Z, const Coords& W,
                 const Coords& V, double lambda) {
    double acc = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    double w4 = Y[a] * Z[b] * W[c] * V[d];
                    if (w4 == 0) continue;
                    double term = 12.0 * t.nh[a][b][c][d];
                    // cyclic in (Y,Z,W): g(h(.,.), G(.,V))
                    for (int m = 0; m < 3; ++m) {
                        term += 3.0 * (t.h[a][b][m] * metric_g(t.Gvec[c][d], t.JE[m]) +
                                       t.h[b][c][m] * metric_g(t.Gvec[a][d], t.JE[m]) +
                                       t.h[c][a][m] * metric_g(t.Gvec[b][d], t.JE[m]));
                    }
                    // cyclic in (Z,W,V): P / PJ bilinear products
                    auto gP = [&](int r, int s) { return metric_g(t.PE[r], t.E[s]); };
                    auto gPJ = [&](int r, int s) { return metric_g(t.PJE[r], t.E[s]); };
                    term += 2.0 * (gP(a, b) * gPJ(c, d) - gPJ(a, b) * gP(c, d) +
                                   gP(a, c) * gPJ(d, b) - gPJ(a, c) * gP(d, b) +
                                   gP(a, d) * gPJ(b, c) - gPJ(a, d) * gP(b, c));
                    term -= 4.0 * lambda *
                            (kron(a, b) * kron(c, d) + kron(a, c) * kron(d, b) +
                             kron(a, d) * kron(b, c));
                    acc += w4 * term;
                }
    return acc;
}

}  // namespace

double polarized_jisotropy_check(const LagrangianPointData& data, double lambda) {
    PointTables t = build_tables(data);
    double worst = 0;
    auto basis = [](int i) {
        Coords c{0, 0, 0};
        c[i] = 1;
        return c;
    };
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    worst = std::max(
                        worst, std::fabs(eval_eq42(t, basis(a), basis(b), basis(c), basis(d),
                                                   lambda)));
    Rng rng(0x5bd1e995u);
    for (int trial = 0; trial < 20; ++trial) {
        Coords y = rng.unit3(), z = rng.unit3(), w = rng.unit3(), v = rng.unit3();
        worst = std::max(worst, std::fabs(eval_eq42(t, y, z, w, v, lambda)));
    }
    return worst;
}

double polarized_jisotropy_check(const Immersion& desc, const Vec3& chart_point, double lambda) {
    return polarized_jisotropy_check(analyze_point(desc, chart_point), lambda);
}

namespace {

// The I tensor on frame entries, with X(lambda) = Y(lambda) = 0.
double eval_I(const PointTables& t, int x, int y, int z0, int w0, int v0) {
    auto g = [](const LieVecD& a, const LieVecD& b) { return metric_g(a, b); };
    double acc = 0;
    std::array<std::array<int, 3>, 3> cyc = {{{z0, w0, v0}, {w0, v0, z0}, {v0, z0, w0}}};
    for (const auto& zwv : cyc) {
        int z = zwv[0], w = zwv[1], v = zwv[2];
        double s = 0;
        s += g(t.PE[y], t.hvec[x][z]) * g(t.PJE[w], t.E[v]);
        s += g(t.DP[x][y] + apply_P(t.hvec[x][y]), t.E[z]) * g(t.PJE[w], t.E[v]);
        s += g(t.PE[y], t.E[z]) * g(t.PJE[w], t.hvec[x][v]);
        s += g(t.PE[y], t.E[z]) * g(t.DPJ[x][w] + apply_P(apply_J(t.hvec[x][w])), t.E[v]);

        s -= g(t.PE[x], t.hvec[y][z]) * g(t.PJE[w], t.E[v]);
        s -= g(t.DP[y][x] + apply_P(t.hvec[x][y]), t.E[z]) * g(t.PJE[w], t.E[v]);
        s -= g(t.PE[x], t.E[z]) * g(t.PJE[w], t.hvec[y][v]);
        s -= g(t.PE[x], t.E[z]) * g(t.DPJ[y][w] + apply_P(apply_J(t.hvec[y][w])), t.E[v]);

        s -= g(t.PJE[y], t.hvec[x][z]) * g(t.PE[w], t.E[v]);
        s -= g(t.DPJ[x][y] + apply_P(apply_J(t.hvec[x][y])), t.E[z]) * g(t.PE[w], t.E[v]);
        s -= g(t.PJE[y], t.E[z]) * g(t.PE[w], t.hvec[x][v]);
        s -= g(t.PJE[y], t.E[z]) * g(t.DP[x][w] + apply_P(t.hvec[x][w]), t.E[v]);

        s += g(t.PJE[x], t.hvec[y][z]) * g(t.PE[w], t.E[v]);
        s += g(t.DPJ[y][x] + apply_P(apply_J(t.hvec[x][y])), t.E[z]) * g(t.PE[w], t.E[v]);
        s += g(t.PJE[x], t.E[z]) * g(t.PE[w], t.hvec[y][v]);
        s += g(t.PJE[x], t.E[z]) * g(t.DP[y][w] + apply_P(t.hvec[y][w]), t.E[v]);
        acc += s;
    }
    return acc;
}

// Left side of the Ricci-identity consequence at a frame 5-tuple.
double eval_eq49(const PointTables& t, int x, int y, int z, int w, int v) {
    auto g = [](const LieVecD& a, const LieVecD& b) { return metric_g(a, b); };
    double term = 0;
    // 12 g(Rperp(X,Y) h(Z,W) - h(R(X,Y)Z, W) - h(Z, R(X,Y)W), JV)
    double a1 = 0, a2 = 0, a3 = 0;
    for (int k = 0; k < 3; ++k) {
        a1 += t.h[z][w][k] * t.Rp[x][y][k][v];
        a2 += t.Rt[x][y][z][k] * t.h[k][w][v];
        a3 += t.Rt[x][y][w][k] * t.h[z][k][v];
    }
    term += 12.0 * (a1 - a2 - a3);
    // 9 [ g((nabla h)(Y,Z,W), G(X,V)) - g((nabla h)(X,Z,W), G(Y,V)) ]
    double b1 = 0, b2 = 0;
    for (int l = 0; l < 3; ++l) {
        b1 += t.nh[y][z][w][l] * g(t.Gvec[x][v], t.JE[l]);
        b2 += t.nh[x][z][w][l] * g(t.Gvec[y][v], t.JE[l]);
    }
    term += 9.0 * (b1 - b2);
    term += 3.0 * t.h[y][z][w] * kron(x, v) - 3.0 * t.h[x][z][w] * kron(y, v);
    // cyclic over the two-element set (Z,W)
    for (auto [zz, ww] : {std::pair<int, int>{z, w}, std::pair<int, int>{w, z}}) {
        term += t.h[x][zz][v] * kron(y, ww) - t.h[y][zz][v] * kron(x, ww);
        term += g(t.PE[y], t.E[zz]) * g(t.PE[x], t.Gvec[ww][v]) -
                g(t.PE[x], t.E[zz]) * g(t.PE[y], t.Gvec[ww][v]);
        term += g(t.JPE[y], t.E[zz]) * g(t.JPE[x], t.Gvec[ww][v]) -
                g(t.JPE[x], t.E[zz]) * g(t.JPE[y], t.Gvec[ww][v]);
    }
    term += 2.0 * eval_I(t, x, y, z, w, v);
    return term;
}

}  // namespace

Tensor4 tangent_curvature(const LagrangianPointData& data) {
    return build_tables(data).Rt;
}

Tensor4 normal_curvature(const LagrangianPointData& data, int route) {
    PointTables t = build_tables(data);
    if (route == 0) return t.Rp;
    // Ricci equation: g(Rperp(X,Y) JZ, JW) = g(R~(X,Y)JZ, JW) + g([A_JZ, A_JW]X, Y)
    Tensor4 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double amb = metric_g(curvature(t.E[i], t.E[j], t.JE[k]), t.JE[l]);
                    // g([A_{Je_k}, A_{Je_l}] e_i, e_j) with (A_c)_ab = h_ab^c:
                    // apply A_{Je_l} first, then A_{Je_k}
                    double comm = 0;
                    for (int m = 0; m < 3; ++m)
                        comm += t.h[i][m][l] * t.h[m][j][k] - t.h[i][m][k] * t.h[m][j][l];
                    out[i][j][k][l] = amb + comm;
                }
    return out;
}

Prop42Report prop42_residual(const LagrangianPointData& data, double lambda) {
    Prop42Report rep;
    rep.lambda_used = lambda;
    PointTables t = build_tables(data);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z)
                for (int w = 0; w < 3; ++w)
                    for (int v = 0; v < 3; ++v)
                        rep.max_residual = std::max(rep.max_residual,
                                                    std::fabs(eval_eq49(t, x, y, z, w, v)));
    // specialized instance: I(e2,e1,e1,e1,e3) against its angle reduction
    double I_full = eval_I(t, 1, 0, 0, 0, 2);
    const auto& lam = data.adapted.lambda;
    const auto& mu = data.adapted.mu;
    double I_reduced = -(1.0 + 2.0 * (lam[0] * lam[2] + mu[0] * mu[2]) +
                         (lam[0] * lam[1] + mu[0] * mu[1])) *
                           data.h[0][1][2] +
                       (lam[0] * mu[1] - lam[1] * mu[0]) / (2.0 * kSqrt3);
    rep.i_simplified_defect = std::fabs(I_full - I_reduced);
    // normal curvature: Gauss route vs Ricci route
    Tensor4 ricci = normal_curvature(data, 1);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    rep.rperp_route_mismatch = std::max(
                        rep.rperp_route_mismatch, std::fabs(t.Rp[i][j][k][l] - ricci[i][j][k][l]));
    return rep;
}

Prop42Report prop42_residual(const Immersion& desc, const Vec3& chart_point) {
    LagrangianPointData data = analyze_point(desc, chart_point);
    IsotropyReport rep = isotropy_report(data, 128, 1e-6, true);
    if (!rep.lambda)
        throw IntegrityError("point is not J-isotropic: lambda is not available");
    return prop42_residual(data, *rep.lambda);
}

// ---------------------------------------------------------------------------
// Cubic form maximization

CubicMaximum maximize_cubic_form(const LagrangianPointData& data) {
    const Tensor3& h = data.h;
    auto F = [&](const Coords& v) {
        double s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) s += h[i][j][k] * v[i] * v[j] * v[k];
        return s;
    };
    auto grad = [&](const Coords& v) {
        Coords g{0, 0, 0};
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) g[l] += 3.0 * h[i][j][l] * v[i] * v[j];
        return g;
    };
    auto normalize = [](Coords v) {
        double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        return Coords{v[0] / n, v[1] / n, v[2] / n};
    };
    double hmax = 0;
    for (const auto& a : h)
        for (const auto& b : a)
            for (double c : b) hmax = std::max(hmax, std::fabs(c));

    // shifted symmetric power iteration over a grid of starts; the shift makes
    // the sphere map monotone in F
    const double shift = 2.0 * hmax + 1e-3;
    Coords best{1, 0, 0};
    double bestF = -1e300;
    bool converged = false;
    for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy)
            for (int sz = -1; sz <= 1; ++sz) {
                if (sx == 0 && sy == 0 && sz == 0) continue;
                Coords v = normalize({double(sx), double(sy), double(sz)});
                for (int it = 0; it < 2000; ++it) {
                    Coords gr = grad(v);
                    Coords next = normalize(
                        {gr[0] / 3.0 + shift * v[0], gr[1] / 3.0 + shift * v[1],
                         gr[2] / 3.0 + shift * v[2]});
                    double move = std::fabs(next[0] - v[0]) + std::fabs(next[1] - v[1]) +
                                  std::fabs(next[2] - v[2]);
                    v = next;
                    if (move < 1e-14) break;
                }
                Coords gr = grad(v);
                double fv = F(v);
                double crit = 0;
                for (int l = 0; l < 3; ++l) crit += std::pow(gr[l] - 3.0 * fv * v[l], 2);
                crit = std::sqrt(crit);
                if (crit < 1e-8 && fv > bestF) {
                    bestF = fv;
                    best = v;
                    converged = true;
                }
            }
    if (!converged) throw OptimizationError("cubic form ascent did not converge");

    CubicMaximum out;
    const auto& E = data.adapted.at.frame;
    out.mu1 = bestF;
    out.direction = best[0] * E[0] + best[1] * E[1] + best[2] * E[2];

    // basis of Eq-(3.1) type: eigenvectors of the shape operator A_{J e1}
    Mat3 M;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            double s = 0;
            for (int i = 0; i < 3; ++i) s += best[i] * h[i][j][k];
            M(j, k) = s;
        }
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (M + M.transpose()).eval());
    // order so the eigenvector aligned with the maximizer comes first
    std::array<int, 3> order{0, 1, 2};
    Eigen::Vector3d vb(best[0], best[1], best[2]);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::fabs(es.eigenvectors().col(a).dot(vb)) >
               std::fabs(es.eigenvectors().col(b).dot(vb));
    });
    for (int c = 0; c < 3; ++c) {
        Eigen::Vector3d col = es.eigenvectors().col(order[c]);
        if (c == 0 && col.dot(vb) < 0) col = -col;
        out.basis[c] = col(0) * E[0] + col(1) * E[1] + col(2) * E[2];
        out.mu_values[c] = es.eigenvalues()(order[c]);
    }
    return out;
}

CubicMaximum maximize_cubic_form(const Immersion& desc, const Vec3& chart_point) {
    return maximize_cubic_form(analyze_point_impl(desc, chart_point));
}

// ---------------------------------------------------------------------------
// Lemma 1

namespace {

// Sorted P-angles at a chart point, matched mod pi to reference angles.
std::array<double, 3> matched_angles(const Immersion& desc, const Vec3& p,
                                     const std::array<double, 3>& ref, double* worst_dist) {
    AdaptedFrame af = adapted_frame(frame_at(desc, p));
    std::array<double, 3> out{};
    std::array<bool, 3> used{false, false, false};
    for (int j = 0; j < 3; ++j) {
        int best = -1;
        double best_d = 1e300;
        for (int c = 0; c < 3; ++c) {
            if (used[c]) continue;
            double d = std::fabs(std::remainder(af.theta[c] - ref[j], kPi));
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        used[best] = true;
        out[j] = ref[j] + std::remainder(af.theta[best] - ref[j], kPi);
        *worst_dist = std::max(*worst_dist, best_d);
    }
    return out;
}

}  // namespace

Lemma1Report lemma1_report(const Immersion& desc, const Vec3& chart_point) {
    LagrangianPointData data = analyze_point_impl(desc, chart_point);
    const auto& th = data.adapted.theta;
    Lemma1Report rep;
    rep.angle_sum = std::fabs(std::remainder(th[0] + th[1] + th[2], kPi));

    // relation (2): e_i(theta_j) = -h_jj^i, angles differentiated along the
    // frame directions with mod-pi branch matching
    auto vel = chart_velocities(data.gs, data.adapted.at.frame);
    double worst2 = 0;
    for (int i = 0; i < 3; ++i) {
        double step = kOuterStep;
        for (int attempt = 0; attempt < 4; ++attempt) {
            double branch_dist = 0;
            auto angles_at = [&](double t) {
                Vec3 p = chart_point;
                for (int a = 0; a < 3; ++a) p[a] += t * vel[i](a);
                return matched_angles(desc, p, th, &branch_dist);
            };
            auto tp = angles_at(step), tm = angles_at(-step);
            auto tp2 = angles_at(step / 2), tm2 = angles_at(-step / 2);
            if (branch_dist > 0.3) {
                step /= 4;  // angle branch jumped across the stencil
                continue;
            }
            for (int j = 0; j < 3; ++j) {
                double d1 = (tp[j] - tm[j]) / (2 * step);
                double d2 = (tp2[j] - tm2[j]) / step;
                double deriv = (4 * d2 - d1) / 3.0;
                worst2 = std::max(worst2, std::fabs(deriv + data.h[j][j][i]));
            }
            break;
        }
    }
    rep.angle_derivative = worst2;

    double worst3 = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                if (j == k) continue;
                double lhs = data.h[i][j][k] * std::cos(th[j] - th[k]);
                double rhs = (kSqrt3 / 6.0 * eps_sym(i, j, k) - data.omega[i][j][k]) *
                             std::sin(th[j] - th[k]);
                worst3 = std::max(worst3, std::fabs(lhs - rhs));
            }
    rep.relation3 = worst3;
    return rep;
}

// ---------------------------------------------------------------------------
// Sectional curvature and the angle relations

double sectional_curvature(const LagrangianPointData& data, const TangentVectorD& X,
                           const TangentVectorD& Y) {
    const auto& E = data.adapted.at.frame;
    Coords xc{}, yc{};
    for (int i = 0; i < 3; ++i) {
        xc[i] = metric_g(X, E[i]);
        yc[i] = metric_g(Y, E[i]);
    }
    // inputs must lie in the tangent plane of the immersion
    LieVecD xres = X.v, yres = Y.v;
    for (int i = 0; i < 3; ++i) {
        xres = xres - xc[i] * E[i].v;
        yres = yres - yc[i] * E[i].v;
    }
    if (abs_max(xres) > 1e-6 || abs_max(yres) > 1e-6)
        throw Error("sectional_curvature: plane is not tangent to the submanifold");

    double gxx = metric_g(X, X), gyy = metric_g(Y, Y), gxy = metric_g(X, Y);
    double denom = gxx * gyy - gxy * gxy;
    if (denom < 1e-10) throw Error("sectional_curvature: degenerate plane");

    double amb = metric_g(curvature(X.v, Y.v, Y.v), X.v);
    // Gauss: + g(h(X,X),h(Y,Y)) - g(h(X,Y),h(X,Y))
    double hxx_hyy = 0, hxy_hxy = 0;
    for (int k = 0; k < 3; ++k) {
        double hxx = 0, hyy = 0, hxy = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                hxx += xc[i] * xc[j] * data.h[i][j][k];
                hyy += yc[i] * yc[j] * data.h[i][j][k];
                hxy += xc[i] * yc[j] * data.h[i][j][k];
            }
        hxx_hyy += hxx * hyy;
        hxy_hxy += hxy * hxy;
    }
    return (amb + hxx_hyy - hxy_hxy) / denom;
}

double sectional_curvature(const Immersion& desc, const Vec3& chart_point,
                           const TangentVectorD& X, const TangentVectorD& Y) {
    return sectional_curvature(analyze_point_impl(desc, chart_point), X, Y);
}

AngleRelationsReport angle_relations_check(const std::array<double, 3>& theta, double lambda) {
    std::array<double, 3> l{}, m{};
    for (int i = 0; i < 3; ++i) {
        l[i] = std::cos(2 * theta[i]);
        m[i] = std::sin(2 * theta[i]);
    }
    AngleRelationsReport rep;
    std::array<double, 3> bracket{};
    bracket[0] = l[0] * m[1] - l[1] * m[0] + l[0] * m[2] - l[2] * m[0];
    bracket[1] = l[1] * m[2] - l[2] * m[1] + l[1] * m[0] - l[0] * m[1];
    bracket[2] = l[2] * m[0] - l[0] * m[2] + l[2] * m[1] - l[1] * m[2];
    for (int i = 0; i < 3; ++i) rep.relation[i] = lambda - bracket[i] / 6.0;
    rep.product_form[0] = std::cos(theta[2] - theta[1]) * std::sin(theta[2] + theta[1] - 2 * theta[0]);
    rep.product_form[1] = std::cos(theta[0] - theta[2]) * std::sin(theta[0] + theta[2] - 2 * theta[1]);
    rep.product_form[2] = std::cos(theta[1] - theta[0]) * std::sin(theta[1] + theta[0] - 2 * theta[2]);
    rep.cyclic_sum = bracket[0] + bracket[1] + bracket[2];
    return rep;
}

}  // namespace nk
