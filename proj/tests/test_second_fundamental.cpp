#include <doctest.h>

#include <cmath>

#include "nk/lagrangian.hpp"
#include "nk/rng.hpp"
#include "oracles.hpp"

using namespace nk;

namespace {

const double kSqrt3 = std::sqrt(3.0);

Vec3 rand_chart(Rng& rng) {
    return {rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
}

double eps(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0.0;
    return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

}  // namespace

TEST_CASE("totally geodesic members have vanishing h") {
    Rng rng(51);
    for (const char* name : {"f1", "f2", "f3", "f4", "f5", "f6"}) {
        for (int k = 0; k < 6; ++k) {
            SecondFundamentalForm h =
                second_fundamental_form(catalog(name), rand_chart(rng), FrameChoice::GramSchmidt);
            CHECK(h.norm() < 1e-7);
        }
    }
}

TEST_CASE("f7 reproduces h_12^3 = 1/4 and omega = (sqrt3/4) eps") {
    Rng rng(52);
    for (int t = 0; t < 6; ++t) {
        Vec3 pt = rand_chart(rng);
        LagrangianPointData data = analyze_point(catalog("f7"), pt);
        CHECK(std::fabs(data.h[0][1][2] - 0.25) < 1e-9);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    if (i != j && j != k && i != k) continue;
                    CHECK(std::fabs(data.h[i][j][k]) < 1e-9);
                }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    CHECK(std::fabs(data.omega[i][j][k] - kSqrt3 / 4.0 * eps(i, j, k)) < 1e-9);
    }
}

TEST_CASE("f8 reproduces h_12^3 = -1/2 and omega = 0") {
    Rng rng(53);
    for (int t = 0; t < 6; ++t) {
        Vec3 pt = rand_chart(rng);
        LagrangianPointData data = analyze_point(catalog("f8"), pt);
        CHECK(std::fabs(data.h[0][1][2] + 0.5) < 1e-9);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    if (!(i != j && j != k && i != k))
                        CHECK(std::fabs(data.h[i][j][k]) < 1e-9);
                    CHECK(std::fabs(data.omega[i][j][k]) < 1e-9);
                }
    }
}

TEST_CASE("h and omega integrity on the catalog") {
    Rng rng(54);
    for (const auto& name : catalog_names()) {
        Vec3 pt = rand_chart(rng);
        SecondFundamentalForm h = second_fundamental_form(catalog(name), pt);
        CHECK(h.max_symmetry_defect() < 1e-10);
        CHECK(h.max_trace_defect() < 1e-10);
        ConnectionCoeffs w = connection_coeffs(catalog(name), pt);
        CHECK(w.max_antisymmetry_defect() < 1e-10);
    }
}

TEST_CASE("non-Lagrangian inputs are rejected") {
    Immersion skew = parse_immersion(
        "immersion skewed\nvars x y z\nleft = exp(x, y, z)\nright = exp(y, 0 - x, z)\n");
    CHECK(lagrangian_defect(frame_at(skew, {0.05, 0.1, -0.07})) > 1e-2);
    CHECK_THROWS_AS(second_fundamental_form(skew, {0.05, 0.1, -0.07}), IntegrityError);
}

TEST_CASE("nabla h on the catalog: algebraic path, FD path, Codazzi, exchange rule") {
    Rng rng(55);
    Vec3 pt = rand_chart(rng);

    // totally geodesic members: nabla h = 0
    for (const char* name : {"f1", "f3", "f5"}) {
        LagrangianPointData data = analyze_point(catalog(name), pt);
        double worst = 0;
        for (const auto& a : data.nabla_h)
            for (const auto& b : a)
                for (const auto& c : b)
                    for (double v : c) worst = std::max(worst, std::fabs(v));
        CHECK(worst < 1e-8);
    }

    for (const char* name : {"f7", "f8"}) {
        LagrangianPointData data = analyze_point(catalog(name), pt);
        CHECK(data.constant_coefficients);  // Eq-(5.5) reduction engaged

        // frozen value for f7: g((nabla_{e1} h)(e1,e2), Je2) = -1/(8 sqrt3)
        if (std::string(name) == "f7")
            CHECK(data.nabla_h[0][0][1][1] == doctest::Approx(-1.0 / (8 * kSqrt3)).epsilon(1e-9));

        // the general finite-difference path agrees with the reduction
        Tensor4 fd = detail::nabla_h_fd(catalog(name), pt);
        double gap = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        gap = std::max(gap,
                                       std::fabs(fd[i][j][k][l] - data.nabla_h[i][j][k][l]));
        CHECK(gap < 1e-7);

        // Codazzi: (nabla h)(X,Y,Z) - (nabla h)(Y,X,Z) = normal part of R~(X,Y)Z
        const auto& E = data.adapted.at.frame;
        double codazzi = 0, exchange = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                LieVecD hij;
                for (int m = 0; m < 3; ++m) hij = hij + data.h[i][j][m] * apply_J(E[m]).v;
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        double lhs = data.nabla_h[i][j][k][l] - data.nabla_h[j][i][k][l];
                        double rhs =
                            metric_g(curvature(E[i].v, E[j].v, E[k].v), apply_J(E[l]).v);
                        codazzi = std::max(codazzi, std::fabs(lhs - rhs));
                        double ex = data.nabla_h[i][j][k][l] - data.nabla_h[i][j][l][k] -
                                    metric_g(hij, tensor_G(E[l].v, E[k].v));
                        exchange = std::max(exchange, std::fabs(ex));
                    }
            }
        CHECK(codazzi < 1e-6);
        CHECK(exchange < 1e-6);
    }
}

TEST_CASE("nabla P frame values on adapted frames") {
    // with lambda = (1, -1/2, -1/2), mu = (0, sqrt3/2, -sqrt3/2):
    //   g((nabla_{e1}P)e2, e3) = (lambda2 - lambda3)/(2 sqrt3) = 0
    //   g((nabla_{e2}P)e3, e1) = (lambda3 - lambda1)/(2 sqrt3) = -sqrt3/4
    //   g((nabla_{e1}PJ)e2, e3) = (mu2 - mu3)/(2 sqrt3) = 1/2
    //   g((nabla_{e2}PJ)e3, e1) = (mu3 - mu1)/(2 sqrt3) = -1/4
    Rng rng(56);
    for (const char* name : {"f7", "f8"}) {
        AdaptedFrame af = adapted_frame(frame_at(catalog(name), rand_chart(rng)));
        const auto& e = af.at.frame;
        auto dp12 = nabla_P(e[0], e[1]);
        CHECK(std::fabs(metric_g(dp12.first, e[2])) < 1e-10);
        CHECK(metric_g(dp12.second, e[2]) == doctest::Approx(0.5).epsilon(1e-9));
        auto dp23 = nabla_P(e[1], e[2]);
        CHECK(metric_g(dp23.first, e[0]) == doctest::Approx(-kSqrt3 / 4).epsilon(1e-9));
        CHECK(metric_g(dp23.second, e[0]) == doctest::Approx(-0.25).epsilon(1e-9));

        // generic catalog check of the (lambda_j - lambda_k)/(2 sqrt3) pattern
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    if (eps(i, j, k) == 0.0) continue;
                    auto dp = nabla_P(e[i], e[j]);
                    double want_p = eps(i, j, k) * (af.lambda[j] - af.lambda[k]) / (2 * kSqrt3);
                    double want_pj = eps(i, j, k) * (af.mu[j] - af.mu[k]) / (2 * kSqrt3);
                    CHECK(metric_g(dp.first, e[k]) == doctest::Approx(want_p).epsilon(1e-9));
                    CHECK(metric_g(dp.second, e[k]) == doctest::Approx(want_pj).epsilon(1e-9));
                }
    }
}

TEST_CASE("lemma 1 relations") {
    Rng rng(57);
    for (const char* name : {"f7", "f8"}) {
        Lemma1Report rep = lemma1_report(catalog(name), rand_chart(rng));
        CHECK(rep.angle_sum < 1e-8);
        CHECK(rep.angle_derivative < 1e-6);
        CHECK(rep.relation3 < 1e-8);
    }
    // clustered-angle members: constant angles make (1) and (2) exact, and
    // relation (3) constrains omega across the distinct-angle pairs
    for (const auto& name : catalog_names()) {
        Lemma1Report rep = lemma1_report(catalog(name), rand_chart(rng));
        CHECK(rep.angle_sum < 1e-7);
        CHECK(rep.angle_derivative < 1e-5);
        CHECK(rep.relation3 < 1e-6);
    }
    // the diagonal: constant angle triple makes relation (1) exact
    Lemma1Report diag = lemma1_report(catalog("f3"), rand_chart(rng));
    CHECK(diag.angle_sum < 1e-9);

    // frozen spot check for f7 relation (3) at (i,j,k) = (3,1,2)/1-indexed:
    // h_12^3 cos(t2-t3) = 1/8 must balance (sqrt3/6 - sqrt3/4) sin(t2-t3)
    LagrangianPointData data = analyze_point(catalog("f7"), rand_chart(rng));
    double lhs = data.h[2][0][1] * std::cos(data.adapted.theta[0] - data.adapted.theta[1]);
    (void)lhs;  // the relation itself is covered by lemma1_report above
    CHECK(data.h[0][1][2] * std::cos(data.adapted.theta[1] - data.adapted.theta[2]) ==
          doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("intrinsic curvature oracle matches the Gauss equation") {
    Rng rng(58);
    for (const char* name : {"f7", "f8", "f1"}) {
        Vec3 pt = rand_chart(rng);
        const Immersion& desc = catalog(name);
        Tensor4 oracleR = oracle::intrinsic_curvature_fd(desc, pt);

        // Gauss-equation curvature in the same (Gram-Schmidt) frame
        FramePoint fp = frame_at(desc, pt);
        SecondFundamentalForm h = second_fundamental_form(desc, pt, FrameChoice::GramSchmidt);
        double worst = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        double amb = metric_g(
                            curvature(fp.frame[i].v, fp.frame[j].v, fp.frame[k].v),
                            fp.frame[l].v);
                        double corr = 0;
                        for (int m = 0; m < 3; ++m)
                            corr += h.h[i][l][m] * h.h[j][k][m] - h.h[i][k][m] * h.h[j][l][m];
                        worst = std::max(worst, std::fabs(oracleR[i][j][k][l] - (amb + corr)));
                    }
        CHECK(worst < 1e-6);
    }
}
