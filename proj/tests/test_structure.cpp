#include <doctest.h>

#include <cmath>

#include "nk/rng.hpp"
#include "nk/structure.hpp"
#include "oracles.hpp"

using namespace nk;

namespace {

LieVecD rand_vec(Rng& rng) {
    return {{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
            {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}};
}

LieVec<ExactK3> rand_exact(Rng& rng) {
    LieVec<ExactK3> v;
    for (int i = 0; i < 6; ++i) {
        auto [num, den] = rng.small_rational();
        v = v + ExactK3::fraction(num, den) * LieVec<ExactK3>::basis(i);
    }
    return v;
}

double vmax(const LieVecD& v) {
    double m = 0;
    for (int i = 0; i < 6; ++i) m = std::max(m, std::fabs(v.comp(i)));
    return m;
}

const double kSqrt3 = std::sqrt(3.0);

}  // namespace

TEST_CASE("connection: torsion-free and metric-compatible") {
    Rng rng(11);
    for (int k = 0; k < 500; ++k) {
        LieVecD x = rand_vec(rng), y = rand_vec(rng), z = rand_vec(rng);
        CHECK(vmax(residual_torsion(x, y)) < 1e-13);
        CHECK(std::fabs(residual_metric_compat(x, y, z)) < 1e-13);
    }
    Rng erng(12);
    for (int k = 0; k < 10; ++k) {
        auto x = rand_exact(erng), y = rand_exact(erng), z = rand_exact(erng);
        CHECK(residual_torsion(x, y).is_zero());
        CHECK(residual_metric_compat(x, y, z).is_zero());
    }
}

TEST_CASE("connection matches the chart-Christoffel oracle") {
    ManifoldPointD origin = ManifoldPointD::origin();
    // the spec's basis example: nabla_x x for x = (i,0) is zero
    LieVecD i0 = LieVecD::basis(0);
    CHECK(vmax(levi_civita(i0, i0)) < 1e-14);
    CHECK(vmax(oracle::levi_civita_fd(origin, i0, i0) - levi_civita(i0, i0)) < 1e-6);

    Rng rng(13);
    for (int k = 0; k < 8; ++k) {
        LieVecD x = rand_vec(rng), y = rand_vec(rng);
        LieVecD want = levi_civita(x, y);
        CHECK(vmax(oracle::levi_civita_fd(origin, x, y) - want) < 1e-6);
    }
    // the connection is base-point independent; check the oracle at another base
    ManifoldPointD other{exp_im({0.3, -0.2, 0.5}), exp_im({-0.1, 0.4, 0.2})};
    LieVecD x = rand_vec(rng), y = rand_vec(rng);
    CHECK(vmax(oracle::levi_civita_fd(other, x, y) - levi_civita(x, y)) < 1e-6);
}

TEST_CASE("G: frozen basis value and FD oracle") {
    LieVecD x = LieVecD::basis(0), y = LieVecD::basis(1);
    LieVecD g = tensor_G(x, y);
    const double c = 2.0 / (3.0 * kSqrt3);
    CHECK(vmax(g - LieVecD{{0, 0, c}, {0, 0, 2 * c}}) < 1e-15);

    ManifoldPointD origin = ManifoldPointD::origin();
    CHECK(vmax(oracle::tensor_G_fd(origin, x, y) - g) < 1e-6);

    Rng rng(14);
    for (int k = 0; k < 5; ++k) {
        LieVecD u = rand_vec(rng), v = rand_vec(rng);
        CHECK(vmax(oracle::tensor_G_fd(origin, u, v) - tensor_G(u, v)) < 1e-6);
    }
}

TEST_CASE("G identities: skew, J-compatibility, metric skew, nearly Kahler") {
    Rng rng(15);
    for (int k = 0; k < 500; ++k) {
        LieVecD x = rand_vec(rng), y = rand_vec(rng), z = rand_vec(rng);
        CHECK(vmax(residual_g_skew(x, y)) < 1e-13);
        CHECK(vmax(residual_g_jswap(x, y)) < 1e-13);
        CHECK(std::fabs(residual_g_metric_skew(x, y, z)) < 1e-13);
        CHECK(vmax(residual_nearly_kahler(x)) < 1e-13);
        CHECK(vmax(residual_nabla_G(x, y, z)) < 1e-13);
        CHECK(vmax(residual_nabla_P_formula(x, y)) < 1e-13);
        CHECK(vmax(residual_nabla_PJ_formula(x, y)) < 1e-13);
    }
    Rng erng(16);
    for (int k = 0; k < 8; ++k) {
        auto x = rand_exact(erng), y = rand_exact(erng), z = rand_exact(erng);
        CHECK(residual_g_skew(x, y).is_zero());
        CHECK(residual_g_jswap(x, y).is_zero());
        CHECK(residual_g_metric_skew(x, y, z).is_zero());
        CHECK(residual_nearly_kahler(x).is_zero());
        CHECK(residual_nabla_G(x, y, z).is_zero());
        CHECK(residual_nabla_P_formula(x, y).is_zero());
        CHECK(residual_nabla_PJ_formula(x, y).is_zero());
        CHECK(residual_metric_form(x, y).is_zero());
        CHECK(residual_hermitian(x, y).is_zero());
    }
}

TEST_CASE("curvature: antisymmetry, closed form vs Koszul, Bianchi") {
    Rng rng(17);
    for (int k = 0; k < 300; ++k) {
        LieVecD x = rand_vec(rng), y = rand_vec(rng), z = rand_vec(rng);
        CHECK(vmax(curvature(x, x, z)) < 1e-13);
        CHECK(vmax(residual_curvature_match(x, y, z)) < 1e-12);
        CHECK(vmax(residual_first_bianchi(x, y, z)) < 1e-12);
    }
    Rng erng(18);
    for (int k = 0; k < 6; ++k) {
        auto x = rand_exact(erng), y = rand_exact(erng), z = rand_exact(erng);
        CHECK(residual_curvature_match(x, y, z).is_zero());
        CHECK(residual_first_bianchi(x, y, z).is_zero());
    }
}

TEST_CASE("covariant derivative along curves") {
    // a left-invariant field along the integral curve of another reproduces
    // the algebraic connection
    LieVecD zeta{{0.4, -0.3, 0.2}, {0.1, 0.5, -0.2}};
    LieVecD y{{-0.2, 0.7, 0.1}, {0.3, -0.4, 0.6}};
    ManifoldPointD start = ManifoldPointD::origin();
    auto flow = [&](double t) {
        return ManifoldPointD{UnitQuaternionD::from(start.p.value() * exp_im(t * zeta.a).value()),
                              UnitQuaternionD::from(start.q.value() * exp_im(t * zeta.b).value())};
    };
    auto invariant_field = [&](double t) {
        return TangentVectorD{flow(t), y};  // constant Lie coordinates
    };
    TangentVectorD got = covariant_derivative_along(flow, invariant_field, 0.0);
    CHECK(vmax(got.v - levi_civita(zeta, y)) < 1e-6);

    auto curve = [&](double t) { return oracle::transport(start, zeta, y, t).point; };

    // parallel transport along the geodesic has zero covariant derivative
    auto pfield = [&](double t) {
        auto st = oracle::transport(start, zeta, y, t);
        return TangentVectorD{st.point, st.transported};
    };
    TangentVectorD par = covariant_derivative_along(curve, pfield, 0.0);
    CHECK(vmax(par.v) < 1e-6);

    // the geodesic's own velocity field is parallel
    auto vfield = [&](double t) {
        auto st = oracle::transport(start, zeta, y, t);
        return TangentVectorD{st.point, st.velocity};
    };
    CHECK(vmax(covariant_derivative_along(curve, vfield, 0.0).v) < 1e-6);

    // product rule: d/dt g(Z,W) = g(DZ,W) + g(Z,DW)
    LieVecD w{{0.5, 0.2, -0.6}, {-0.3, 0.1, 0.2}};
    auto wfield = [&](double t) { return TangentVectorD{curve(t), w}; };
    const double h = 1e-5;
    double dg = (metric_g(pfield(h).v, wfield(h).v) - metric_g(pfield(-h).v, wfield(-h).v)) /
                (2 * h);
    double rhs = metric_g(par.v, w) + metric_g(y, covariant_derivative_along(curve, wfield, 0.0).v);
    CHECK(std::fabs(dg - rhs) < 1e-6);

    // step underflow guard
    CHECK_THROWS_AS(covariant_derivative_along(curve, invariant_field, 0.0, 0.0), Error);
}

TEST_CASE("eq 2.19 frame identities on basis-aligned tangent data") {
    // spot values frozen from the structure tables: 2(nabla P) on basis pairs
    LieVecD x = LieVecD::basis(0), y = LieVecD::basis(1);
    auto [dp, dpj] = nabla_P(x, y);
    LieVecD direct = levi_civita(x, apply_P(y)) - apply_P(levi_civita(x, y));
    CHECK(vmax(direct - dp) < 1e-15);
    LieVecD direct2 = levi_civita(x, apply_P(apply_J(y))) - apply_P(apply_J(levi_civita(x, y)));
    CHECK(vmax(direct2 - dpj) < 1e-15);
}
