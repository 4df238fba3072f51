#include <doctest.h>

#include <cmath>

#include "nk/quaternion.hpp"
#include "nk/rng.hpp"

using namespace nk;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double qdist(const QuaternionD& a, const QuaternionD& b) {
    return std::sqrt((a - b).norm_sq());
}
}  // namespace

TEST_CASE("hamilton product basics") {
    CHECK(qdist(QuaternionD::i() * QuaternionD::j(), QuaternionD::k()) == 0.0);
    CHECK(qdist(QuaternionD::j() * QuaternionD::k(), QuaternionD::i()) == 0.0);
    CHECK(qdist(QuaternionD::k() * QuaternionD::i(), QuaternionD::j()) == 0.0);
    CHECK(qdist(QuaternionD::i() * QuaternionD::i(), -QuaternionD::one()) == 0.0);

    QuaternionD q{kInvSqrt2, kInvSqrt2, 0, 0};  // (1 + i)/sqrt2
    CHECK(qdist(q * q.inverse(), QuaternionD::one()) < 1e-15);
    CHECK(qdist(q * q, QuaternionD::i()) < 1e-15);
}

TEST_CASE("inverse examples and errors") {
    CHECK(qdist(QuaternionD::i().inverse(), -QuaternionD::i()) == 0.0);
    CHECK(qdist(QuaternionD::one().inverse(), QuaternionD::one()) == 0.0);
    QuaternionD twoj{0, 0, 2, 0};
    CHECK(qdist(twoj.inverse(), QuaternionD{0, 0, -0.5, 0}) == 0.0);
    CHECK_THROWS_AS(QuaternionD{}.inverse(), Error);
}

TEST_CASE("norm is multiplicative and inverse is an involution") {
    Rng rng(101);
    for (int t = 0; t < 1000; ++t) {
        QuaternionD a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                      rng.uniform(-2, 2)};
        QuaternionD b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                      rng.uniform(-2, 2)};
        double lhs = norm(a * b);
        double rhs = norm(a) * norm(b);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1 + rhs));
        if (!a.is_zero()) CHECK(qdist(a.inverse().inverse(), a) < 1e-12 * (1 + norm(a)));
    }
}

TEST_CASE("exact backend: algebra over Q(sqrt3)") {
    using Q = Quaternion<ExactK3>;
    Q i = Q::i(), j = Q::j(), k = Q::k();
    CHECK((i * j - k).is_zero());
    CHECK((j * i + k).is_zero());
    // (3/5, 4/5, 0, 0) is an exact unit quaternion
    Q u{ExactK3::fraction(3, 5), ExactK3::fraction(4, 5), ExactK3(0), ExactK3(0)};
    CHECK(u.norm_sq() == ExactK3(1));
    CHECK((u * u.inverse() - Q::one()).is_zero());
    // sqrt3 arithmetic: (1 + sqrt3)(1 - sqrt3) = -2
    ExactK3 a = ExactK3(1) + ExactK3::sqrt3();
    ExactK3 b = ExactK3(1) - ExactK3::sqrt3();
    CHECK(a * b == ExactK3(-2));
    CHECK((a / a) == ExactK3(1));
}

TEST_CASE("exp of imaginary quaternions") {
    CHECK(qdist(exp_im({0, 0, 0}).value(), QuaternionD::one()) == 0.0);
    const double half_pi = std::acos(0.0);
    CHECK(qdist(exp_im({half_pi, 0, 0}).value(), QuaternionD::i()) < 1e-15);
    CHECK(qdist(exp_im({2 * half_pi, 0, 0}).value(), -QuaternionD::one()) < 1e-15);

    // one-parameter group property along a fixed axis
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        auto u = rng.unit3();
        ImaginaryD v{u[0], u[1], u[2]};
        double s = rng.uniform(-2, 2), r = rng.uniform(-2, 2);
        QuaternionD lhs = exp_im(s * v).value() * exp_im(r * v).value();
        QuaternionD rhs = exp_im((s + r) * v).value();
        CHECK(qdist(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("dexp agrees with finite differences of exp") {
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        ImaginaryD v{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        ImaginaryD w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double h = 1e-6;
        QuaternionD fd = (1.0 / (2 * h)) * (exp_im(v + h * w).value() - exp_im(v - h * w).value());
        CHECK(qdist(dexp_im(v, w), fd) < 1e-8);
    }
    // small-radius branch
    ImaginaryD v{1e-6, -2e-6, 5e-7}, w{0.3, -0.4, 0.1};
    const double h = 1e-6;
    QuaternionD fd = (1.0 / (2 * h)) * (exp_im(v + h * w).value() - exp_im(v - h * w).value());
    CHECK(qdist(dexp_im(v, w), fd) < 1e-9);
}

TEST_CASE("unit quaternion construction policy") {
    QuaternionD nearly{1.0 + 5e-10, 0, 0, 0};
    UnitQuaternionD u = UnitQuaternionD::from(nearly);
    CHECK(std::fabs(norm(u.value()) - 1.0) < 1e-15);
    QuaternionD off{1.0 + 1e-6, 0, 0, 0};
    CHECK_THROWS_AS(UnitQuaternionD::from(off), Error);
    // exact backend: no renormalization, exact norm required
    using QE = Quaternion<ExactK3>;
    QE good{ExactK3::fraction(3, 5), ExactK3::fraction(4, 5), ExactK3(0), ExactK3(0)};
    CHECK_NOTHROW(UnitQuaternion<ExactK3>::from(good));
    QE bad{ExactK3::fraction(3, 5), ExactK3::fraction(4, 5), ExactK3::fraction(1, 100),
           ExactK3(0)};
    CHECK_THROWS_AS(UnitQuaternion<ExactK3>::from(bad), Error);
}
