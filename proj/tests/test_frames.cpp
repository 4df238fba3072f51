#include <doctest.h>

#include <cmath>

#include "nk/lagrangian.hpp"
#include "nk/rng.hpp"

using namespace nk;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 rand_chart(Rng& rng) {
    return {rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
}

double angle_dist(double a, double b) { return std::fabs(std::remainder(a - b, kPi)); }

}  // namespace

TEST_CASE("frame_at: orthonormality, spans, degeneracy") {
    // f1 at origin: jacobian spans the right-factor directions
    FramePoint f1 = frame_at(catalog("f1"), {0, 0, 0});
    for (int k = 0; k < 3; ++k) {
        CHECK(std::fabs(f1.jacobian[k].v.a.x) + std::fabs(f1.jacobian[k].v.a.y) +
                  std::fabs(f1.jacobian[k].v.a.z) <
              1e-15);
    }
    // f7 at origin has rank 3
    CHECK_NOTHROW(frame_at(catalog("f7"), {0, 0, 0}));

    // Gram matrix of the returned frame is the identity
    Rng rng(41);
    for (const auto& name : catalog_names()) {
        FramePoint fp = frame_at(catalog(name), rand_chart(rng));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::fabs(metric_g(fp.frame[i], fp.frame[j]) - (i == j ? 1.0 : 0.0)) <
                      1e-12);
    }

    // a constant map is degenerate
    Immersion constant = parse_immersion(
        "immersion point\nvars x y z\nleft = const(1,0,0,0)\nright = const(0,1,0,0)\n");
    CHECK_THROWS_AS(frame_at(constant, {0, 0, 0}), DegenerateChartError);
}

TEST_CASE("check_lagrangian on the catalog and on a J-rotated frame") {
    Rng rng(42);
    // the diagonal is Lagrangian
    for (int k = 0; k < 20; ++k)
        CHECK(check_lagrangian(frame_at(catalog("f3"), rand_chart(rng)), 1e-10));
    for (int k = 0; k < 50; ++k)
        CHECK(check_lagrangian(frame_at(catalog("f7"), rand_chart(rng)), 1e-10));

    // replacing a frame vector by J of another makes the test fail:
    // g(J(Je1), e1) = -g(e1,e1) != 0
    FramePoint fp = frame_at(catalog("f2"), {0.1, 0.05, -0.2});
    FramePoint rotated = fp;
    rotated.frame[1] = apply_J(fp.frame[0]);
    rotated.frame[2] = fp.frame[1];
    CHECK_FALSE(check_lagrangian(rotated, 1e-6));
    CHECK(lagrangian_defect(rotated) > 0.5);
}

TEST_CASE("adapted frame: catalog angles") {
    Rng rng(43);

    // f7 and f8: 2 theta = (0, 2pi/3, 4pi/3)
    for (const char* name : {"f7", "f8"}) {
        for (int k = 0; k < 10; ++k) {
            AdaptedFrame af = adapted_frame(frame_at(catalog(name), rand_chart(rng)));
            CHECK(angle_dist(af.theta[0], 0.0) < 1e-9);
            CHECK(angle_dist(af.theta[1], kPi / 3) < 1e-9);
            CHECK(angle_dist(af.theta[2], 2 * kPi / 3) < 1e-9);
        }
    }

    // diagonal: P is the identity on the tangent space, all angles equal 0
    for (int k = 0; k < 10; ++k) {
        AdaptedFrame af = adapted_frame(frame_at(catalog("f3"), rand_chart(rng)));
        for (int i = 0; i < 3; ++i) {
            CHECK(af.lambda[i] == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(angle_dist(af.theta[i], 0.0) < 1e-7);
        }
    }
    // f1: P e = -1/2 e + (sqrt3/2) J e, all angles pi/3
    // f2: the mirror image, all angles 2pi/3
    for (int k = 0; k < 10; ++k) {
        AdaptedFrame a1 = adapted_frame(frame_at(catalog("f1"), rand_chart(rng)));
        AdaptedFrame a2 = adapted_frame(frame_at(catalog("f2"), rand_chart(rng)));
        for (int i = 0; i < 3; ++i) {
            CHECK(angle_dist(a1.theta[i], kPi / 3) < 1e-9);
            CHECK(angle_dist(a2.theta[i], 2 * kPi / 3) < 1e-9);
        }
    }
    // f4: angles (0, pi/2, pi/2)
    AdaptedFrame a4 = adapted_frame(frame_at(catalog("f4"), {0.07, -0.12, 0.3}));
    CHECK(angle_dist(a4.theta[0], 0.0) < 1e-9);
    CHECK(angle_dist(a4.theta[1], kPi / 2) < 1e-9);
    CHECK(angle_dist(a4.theta[2], kPi / 2) < 1e-9);
}

TEST_CASE("adapted frame: invariants") {
    Rng rng(44);
    const double s3 = std::sqrt(3.0);
    for (const auto& name : catalog_names()) {
        AdaptedFrame af = adapted_frame(frame_at(catalog(name), rand_chart(rng)));
        const auto& e = af.at.frame;
        for (int i = 0; i < 3; ++i) {
            // P e_i = lambda_i e_i + mu_i J e_i and lambda^2 + mu^2 = 1
            TangentVectorD defect =
                apply_P(e[i]) - af.lambda[i] * e[i] - af.mu[i] * apply_J(e[i]);
            CHECK(std::sqrt(std::max(0.0, metric_g(defect, defect))) < 1e-8);
            CHECK(std::fabs(af.lambda[i] * af.lambda[i] + af.mu[i] * af.mu[i] - 1.0) < 1e-8);
        }
        // theta sorted in [0, pi), sum a multiple of pi
        CHECK(af.theta[0] <= af.theta[1] + 1e-12);
        CHECK(af.theta[1] <= af.theta[2] + 1e-12);
        CHECK(angle_dist(af.theta[0] + af.theta[1] + af.theta[2], 0.0) < 1e-8);
        // orientation: sqrt3 J G(e_i,e_j) = eps_ij^k e_k
        double worst = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                TangentVectorD lhs = s3 * apply_J(tensor_G(e[i], e[j]));
                LieVecD want;
                for (int k = 0; k < 3; ++k) {
                    double eps = 0;
                    if (i != j && j != k && i != k) eps = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
                    want = want + eps * e[k].v;
                }
                for (int c = 0; c < 6; ++c)
                    worst = std::max(worst, std::fabs(lhs.v.comp(c) - want.comp(c)));
            }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("adapted frame is idempotent") {
    Rng rng(45);
    for (const char* name : {"f7", "f8", "f3"}) {
        FramePoint fp = frame_at(catalog(name), rand_chart(rng));
        AdaptedFrame once = adapted_frame(fp);
        AdaptedFrame twice = adapted_frame(once.at);
        for (int i = 0; i < 3; ++i) {
            CHECK(angle_dist(once.theta[i], twice.theta[i]) < 1e-9);
            double overlap = std::fabs(metric_g(once.at.frame[i], twice.at.frame[i]));
            CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("two equal angles occur exactly on the totally geodesic members") {
    // empirical form of the angle dichotomy: f1..f6 have a repeated angle
    // mod pi, f7/f8 have three distinct angles
    Rng rng(46);
    auto min_gap = [&](const char* name) {
        AdaptedFrame af = adapted_frame(frame_at(catalog(name), rand_chart(rng)));
        double g01 = angle_dist(af.theta[0], af.theta[1]);
        double g12 = angle_dist(af.theta[1], af.theta[2]);
        double g02 = angle_dist(af.theta[0], af.theta[2]);
        return std::min({g01, g12, g02});
    };
    for (const char* name : {"f1", "f2", "f3", "f4", "f5", "f6"}) CHECK(min_gap(name) < 1e-7);
    for (const char* name : {"f7", "f8"}) CHECK(min_gap(name) > 0.5);
}
