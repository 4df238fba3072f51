#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nk/manifold.hpp"
#include "nk/scalar.hpp"

namespace nk {

using Vec3 = std::array<double, 3>;

/// Exact scalar literal: a polynomial in pi with coefficients in Q(sqrt3).
/// The tokens sqrt3 and pi stay symbolic through constant folding, so chart
/// coefficients like sqrt3/2 or pi/4 are stored exactly and converted to
/// double once at evaluation time.
class ExactLit {
public:
    ExactLit() = default;
    explicit ExactLit(ExactK3 c) : coef_{std::move(c)} { trim(); }
    static ExactLit pi() {
        ExactLit l;
        l.coef_ = {ExactK3(0), ExactK3(1)};
        return l;
    }

    bool is_zero() const { return coef_.empty(); }
    ExactLit operator-() const;
    friend ExactLit operator+(const ExactLit& a, const ExactLit& b);
    friend ExactLit operator-(const ExactLit& a, const ExactLit& b);
    friend ExactLit operator*(const ExactLit& a, const ExactLit& b);
    /// Division by a pi-free literal; anything else is rejected upstream.
    friend ExactLit operator/(const ExactLit& a, const ExactLit& b);
    friend bool operator==(const ExactLit& a, const ExactLit& b);

    double to_double() const;
    /// Renders the literal in the surface grammar (e.g. "sqrt3 * 1/2 + pi * 2").
    std::string str() const;
    const std::vector<ExactK3>& coefficients() const { return coef_; }

private:
    void trim();
    std::vector<ExactK3> coef_;  // coef_[d] multiplies pi^d
};

/// Affine scalar expression c0 + c1 x + c2 y + c3 z with exact coefficients.
struct ScalarAffine {
    std::array<ExactLit, 4> coef;
    std::array<double, 4> cached{0, 0, 0, 0};

    void finalize() {
        for (int i = 0; i < 4; ++i) cached[i] = coef[i].to_double();
    }
    double eval(const Vec3& p) const {
        return cached[0] + cached[1] * p[0] + cached[2] * p[1] + cached[3] * p[2];
    }
    /// Gradient with respect to the chart variables (constant).
    std::array<double, 3> gradient() const { return {cached[1], cached[2], cached[3]}; }
    bool is_constant() const {
        return coef[1].is_zero() && coef[2].is_zero() && coef[3].is_zero();
    }
};

/// One node of the quaternion expression DAG.
struct QNode {
    enum class Kind { Const, Ref, Exp, Mul, Inv };
    Kind kind = Kind::Const;
    std::array<ExactLit, 4> literal;     // Const
    std::array<double, 4> literal_cached{1, 0, 0, 0};
    int target = -1;                     // Ref: node id of the binding
    std::array<ScalarAffine, 3> arg;     // Exp
    int lhs = -1, rhs = -1;              // Mul (lhs,rhs) / Inv (lhs)
};

/// A parsed immersion R^3 -> S3 x S3 built from quaternion exponentials,
/// products, inverses and unit constants.
struct Immersion {
    std::string name;
    std::array<std::string, 3> vars{"x", "y", "z"};
    std::vector<std::pair<std::string, int>> bindings;
    int left = -1, right = -1;
    std::vector<QNode> nodes;  // children always precede parents
};

/// Parses the textual format; throws ParseError with line/column on failure.
Immersion parse_immersion(std::string_view text);

/// Canonical re-rendering; parse(print(d)) evaluates identically to d.
std::string print_immersion(const Immersion& desc);

/// Evaluates the two components at a chart point; the pair is unit to 1e-12.
ManifoldPointD evaluate(const Immersion& desc, const Vec3& chart_point);

/// Ambient derivative pairs (dU_k, dV_k) of the chart axes, by forward-mode
/// differentiation through the expression DAG (exact product/inverse rules and
/// the closed-form differential of exp along affine arguments).
std::array<std::pair<QuaternionD, QuaternionD>, 3> jacobian_ambient(const Immersion& desc,
                                                                    const Vec3& chart_point);

/// Jacobian columns as tangent vectors in Lie coordinates.
std::array<TangentVectorD, 3> jacobian(const Immersion& desc, const Vec3& chart_point);

/// The eight catalog immersions, keyed "f1".."f8"; throws ConfigError on
/// unknown names. Descriptors are parsed once and cached.
const Immersion& catalog(const std::string& name);
const std::vector<std::string>& catalog_names();

}  // namespace nk
