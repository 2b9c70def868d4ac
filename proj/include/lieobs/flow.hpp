#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "lieobs/conditions.hpp"
#include "lieobs/group.hpp"
#include "lieobs/matrix2.hpp"
#include "lieobs/scalar_basis.hpp"
#include "lieobs/setdesc.hpp"
#include "lieobs/tolerances.hpp"

namespace lieobs {

struct SingularConjugator : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Data of a linear vector field X(t, v) = (0, dstar * v + Lambda_t * xi).
struct FieldSpec {
    Mat2 dstar{};
    Vec2 xi{};
};

// Lambda_t = integral of rho_u over [0, t], assembled from the exact basis
// decomposition so the same coefficients drive both evaluation and the
// symbolic condition pipeline.
inline Mat2 lambda_of(const GroupClass& cls, double t) {
    auto basis = FunctionBasis::for_class(cls);
    auto m = lambda_decomposition(cls);
    Mat2 out = Mat2::zero();
    for (int j = 0; j < basis.n; ++j) out = out + basis.eval_slot(j, t) * m[j];
    return out;
}

// F_s = integral of exp(u * dstar) over [0, s].
inline Mat2 f_of(const FieldSpec& field, double s) { return integral_expm(field.dstar, s); }

// Closed-form flow: phi_s(t, v) = (t, e^{s dstar} v + F_s Lambda_t xi).
inline GroupElement flow(const GroupClass& cls, const FieldSpec& field, double s,
                         const GroupElement& g) {
    Mat2 es = expm(s * field.dstar);
    Mat2 fs = f_of(field, s);
    return {g.t, es * g.v + fs * (lambda_of(cls, g.t) * field.xi)};
}

inline GroupElement vector_field_eval(const GroupClass& cls, const FieldSpec& field,
                                      const GroupElement& g) {
    return {0.0, field.dstar * g.v + lambda_of(cls, g.t) * field.xi};
}

// Scalar combination (Lambda_t * xi) . e_row over the class basis.
inline ScalarCombo lambda_xi_row(const GroupClass& cls, Vec2 xi, int row) {
    auto m = lambda_decomposition(cls);
    ScalarCombo c{};
    for (int j = 0; j < 3; ++j) {
        Vec2 mx = m[j] * xi;
        c[j] = (row == 0) ? mx.x : mx.y;
    }
    return c;
}

// Zero set of the field: dstar * v + Lambda_t * xi = 0 row by row. Invertible
// dstar gives the closed-form graph v(t) = -dstar^{-1} Lambda_t xi; the
// singular cases fall out of the same elimination.
inline SetDescriptor zeros_of_field(const GroupClass& cls, const FieldSpec& field,
                                    std::array<double, 2> window, const Tolerances& tol) {
    std::vector<LinearCondition> conds;
    conds.push_back({{field.dstar.a, field.dstar.b}, lambda_xi_row(cls, field.xi, 0)});
    conds.push_back({{field.dstar.c, field.dstar.d}, lambda_xi_row(cls, field.xi, 1)});
    return solve_conditions(cls, conds, window, tol);
}

struct CompatibilityReport {
    bool compatible = false;  // flow maps are automorphisms of the group
    double residual = 0.0;    // |dstar theta - theta dstar|
};

inline CompatibilityReport is_derivation_compatible(const GroupClass& cls,
                                                    const FieldSpec& field) {
    Mat2 th = theta(cls);
    Mat2 comm = field.dstar * th - th * field.dstar;
    CompatibilityReport rep;
    rep.residual = norm_inf(comm);
    double scale = std::max(1.0, norm_inf(field.dstar) * norm_inf(th));
    rep.compatible = rep.residual <= 1e-12 * scale;
    return rep;
}

enum class DstarKind { RealDiagonalizable, JordanBlock, ComplexPair };

inline const char* to_string(DstarKind k) {
    switch (k) {
        case DstarKind::RealDiagonalizable: return "RealDiagonalizable";
        case DstarKind::JordanBlock: return "JordanBlock";
        case DstarKind::ComplexPair: return "ComplexPair";
    }
    return "?";
}

// Conjugacy class of dstar over the reals, with a conjugator onto the
// canonical representative: diag(p1, p2), [[p1, 1], [0, p1]], or
// [[p1, -p2], [p2, p1]] with p2 > 0. dstar = conjugator * canonical * inv.
struct DstarClass {
    DstarKind kind = DstarKind::RealDiagonalizable;
    double p1 = 0.0, p2 = 0.0;
    double discriminant = 0.0;  // (a - d)^2 + 4bc
    Mat2 conjugator = Mat2::identity();
};

inline DstarClass classify_dstar(Mat2 d, const Tolerances& tol) {
    DstarClass out;
    double delta = (d.a - d.d) * (d.a - d.d) + 4.0 * d.b * d.c;
    out.discriminant = delta;
    double mean = 0.5 * (d.a + d.d);
    double scale = std::max(1.0, norm_inf(d));
    double band = tol.dstar_boundary * scale * scale;

    if (std::abs(delta) <= band) {
        Mat2 n = d - mean * Mat2::identity();
        if (norm_inf(n) <= tol.dstar_boundary * scale) {
            out.kind = DstarKind::RealDiagonalizable;  // scalar matrix
            out.p1 = out.p2 = mean;
            return out;
        }
        out.kind = DstarKind::JordanBlock;
        out.p1 = out.p2 = mean;
        // Columns (n u, u) with u the coordinate direction n moves most.
        Vec2 u = (std::hypot(n.a, n.c) >= std::hypot(n.b, n.d)) ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        Vec2 nu = n * u;
        out.conjugator = {nu.x, u.x, nu.y, u.y};
        return out;
    }
    if (delta > 0.0) {
        double root = std::sqrt(delta) / 2.0;
        out.kind = DstarKind::RealDiagonalizable;
        out.p1 = mean + root;
        out.p2 = mean - root;
        auto eigvec = [&](double lam) {
            Vec2 v1{d.b, lam - d.a}, v2{lam - d.d, d.c};
            Vec2 v = (norm2(v1) >= norm2(v2)) ? v1 : v2;
            return (1.0 / norm2(v)) * v;
        };
        Vec2 e1 = eigvec(out.p1), e2 = eigvec(out.p2);
        out.conjugator = {e1.x, e2.x, e1.y, e2.y};
        return out;
    }
    out.kind = DstarKind::ComplexPair;
    out.p1 = mean;
    out.p2 = std::sqrt(-delta) / 2.0;
    // Eigenvector w = u + iv for p1 + i p2; columns (v, u) conjugate onto the
    // canonical rotation-scaling block.
    Vec2 u{d.b, mean - d.a};
    Vec2 v{0.0, out.p2};
    out.conjugator = {v.x, u.x, v.y, u.y};
    return out;
}

// Transported field data (P dstar P^{-1}, P xi). This matches the pushforward
// of the flow under (t, v) -> (t, P v) exactly when P commutes with theta;
// the observability checks use it together with transported kernel
// functionals, which is where the transport is meaningful in general.
inline FieldSpec conjugate_field(const FieldSpec& field, Mat2 p, const Tolerances& tol) {
    double scale = std::max(1.0, norm_inf(p));
    if (std::abs(det(p)) <= tol.singular_conjugator * scale * scale)
        throw SingularConjugator("conjugate_field: conjugator is numerically singular");
    Mat2 pinv = inverse(p);
    return {p * field.dstar * pinv, p * field.xi};
}

// Fixed-step RK4 on the v-component (t is constant along the flow); reference
// integrator for validating the closed-form flow.
inline GroupElement flow_rk4(const GroupClass& cls, const FieldSpec& field, double s,
                             const GroupElement& g, double step) {
    Vec2 drift = lambda_of(cls, g.t) * field.xi;
    auto rhs = [&](Vec2 v) { return field.dstar * v + drift; };
    int n = std::max(1, (int)std::ceil(std::abs(s) / step));
    double h = s / n;
    Vec2 v = g.v;
    for (int i = 0; i < n; ++i) {
        Vec2 k1 = rhs(v);
        Vec2 k2 = rhs(v + 0.5 * h * k1);
        Vec2 k3 = rhs(v + 0.5 * h * k2);
        Vec2 k4 = rhs(v + h * k3);
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return {g.t, v};
}

}  // namespace lieobs
