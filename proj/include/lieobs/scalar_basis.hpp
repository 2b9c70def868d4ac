#pragma once

#include <array>
#include <cmath>
#include <string>

#include "lieobs/group.hpp"
#include "lieobs/matrix2.hpp"

namespace lieobs {

// Every scalar condition produced by the decision pipeline has the shape
// r . v + f(t) = 0 where f lives in a small class-dependent span of
// functions vanishing at t = 0:
//
//   slot 0           t                        (all classes)
//   R2               e^t - 1
//   R3               e^t - 1,  t e^t - (e^t - 1)
//   R3Lambda         e^t - 1,  e^{lambda t} - 1    (lambda = 1 collapses to one slot)
//   R3PrimeLambda    e^{lambda t} cos t - 1,  e^{lambda t} sin t
//   E                cos t - 1,  sin t
//
// The span is closed under everything the pipeline does (kernel functionals,
// the integral Lambda_t, rank-2 elimination), which is what makes exact
// root-set decisions possible.

// Shape certificate for a basis slot, used to prove that a combination has
// root set exactly {0} without any numeric search.
enum class Monotone { Increasing, Decreasing, NonNegValley, None };

struct FunctionBasis {
    GroupClass cls;
    int n = 2;  // number of slots including slot 0

    static FunctionBasis for_class(const GroupClass& g) {
        FunctionBasis b;
        b.cls = g;
        switch (g.kind) {
            case GroupKind::R2: b.n = 2; break;
            case GroupKind::R3Lambda: b.n = (g.lambda == 1.0) ? 2 : 3; break;
            default: b.n = 3; break;
        }
        return b;
    }

    double eval_slot(int j, double t) const {
        if (j == 0) return t;
        switch (cls.kind) {
            case GroupKind::R2:
                return std::expm1(t);
            case GroupKind::R3:
                return j == 1 ? std::expm1(t) : t * std::exp(t) - std::expm1(t);
            case GroupKind::R3Lambda:
                return j == 1 ? std::expm1(t) : std::expm1(cls.lambda * t);
            case GroupKind::R3PrimeLambda: {
                double e = std::exp(cls.lambda * t);
                return j == 1 ? e * std::cos(t) - 1.0 : e * std::sin(t);
            }
            case GroupKind::E:
                return j == 1 ? std::cos(t) - 1.0 : std::sin(t);
        }
        return 0.0;
    }

    Monotone cert(int j) const {
        if (j == 0) return Monotone::Increasing;
        switch (cls.kind) {
            case GroupKind::R2:
                return Monotone::Increasing;
            case GroupKind::R3:
                // t e^t - (e^t - 1) has derivative t e^t: strictly positive
                // away from its only zero at t = 0.
                return j == 1 ? Monotone::Increasing : Monotone::NonNegValley;
            case GroupKind::R3Lambda:
                if (j == 1) return Monotone::Increasing;
                return cls.lambda > 0.0 ? Monotone::Increasing : Monotone::Decreasing;
            default:
                return Monotone::None;  // oscillatory slots
        }
    }

    std::string label(int j) const {
        if (j == 0) return "t";
        switch (cls.kind) {
            case GroupKind::R2: return "e^t-1";
            case GroupKind::R3: return j == 1 ? "e^t-1" : "t*e^t-(e^t-1)";
            case GroupKind::R3Lambda: return j == 1 ? "e^t-1" : "e^(lambda*t)-1";
            case GroupKind::R3PrimeLambda:
                return j == 1 ? "e^(lambda*t)*cos(t)-1" : "e^(lambda*t)*sin(t)";
            case GroupKind::E: return j == 1 ? "cos(t)-1" : "sin(t)";
        }
        return "?";
    }
};

// Coefficients over the basis slots; unused slots stay zero.
using ScalarCombo = std::array<double, 3>;

inline double combo_eval(const FunctionBasis& b, const ScalarCombo& c, double t) {
    double s = 0.0;
    for (int j = 0; j < b.n; ++j)
        if (c[j] != 0.0) s += c[j] * b.eval_slot(j, t);
    return s;
}

inline double combo_scale(const ScalarCombo& c) {
    return std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
}

inline bool combo_is_zero(const ScalarCombo& c, double scale, double rel_tol) {
    double cutoff = rel_tol * std::max(scale, 1e-30);
    return std::abs(c[0]) <= cutoff && std::abs(c[1]) <= cutoff && std::abs(c[2]) <= cutoff;
}

// True when the combination provably vanishes only at t = 0 on all of R:
// either every live slot is monotone in a direction consistent with its
// coefficient sign (a same-direction sum of strictly monotone functions each
// vanishing at 0), or the single live slot is a nonnegative valley. Trig
// slots never certify.
inline bool combo_root_set_is_origin(const FunctionBasis& b, const ScalarCombo& c,
                                     double scale, double rel_tol) {
    double cutoff = rel_tol * std::max(scale, 1e-30);
    int live = 0, valley = 0;
    int sign = 0;
    bool monotone_ok = true;
    for (int j = 0; j < b.n; ++j) {
        if (std::abs(c[j]) <= cutoff) continue;
        ++live;
        Monotone m = b.cert(j);
        if (m == Monotone::None) return false;
        if (m == Monotone::NonNegValley) {
            ++valley;
            continue;
        }
        int s = (c[j] > 0.0) ? 1 : -1;
        if (m == Monotone::Decreasing) s = -s;
        if (sign == 0) sign = s;
        else if (sign != s) monotone_ok = false;
    }
    if (live == 0) return false;  // identically zero, caller's case
    if (valley == 0) return monotone_ok;
    if (live == valley) return true;  // same-sign check unnecessary: one valley slot per class
    return false;
}

// Decomposition Lambda_t = sum_j f_j(t) * M_j over the basis slots; this is
// the exact integral of rho over [0, t] written in closed form.
inline std::array<Mat2, 3> lambda_decomposition(const GroupClass& g) {
    std::array<Mat2, 3> m{};
    switch (g.kind) {
        case GroupKind::R2:
            m[0] = Mat2::diag(1.0, 0.0);
            m[1] = Mat2::diag(0.0, 1.0);
            break;
        case GroupKind::R3:
            m[1] = Mat2::identity();
            m[2] = {0.0, 1.0, 0.0, 0.0};
            break;
        case GroupKind::R3Lambda:
            if (g.lambda == 1.0) {
                m[1] = Mat2::identity();
            } else {
                m[1] = Mat2::diag(1.0, 0.0);
                m[2] = Mat2::diag(0.0, 1.0 / g.lambda);
            }
            break;
        case GroupKind::R3PrimeLambda: {
            // 1/zeta with zeta = lambda + i, as a real 2x2 pair.
            double den = g.lambda * g.lambda + 1.0;
            m[1] = {g.lambda / den, 1.0 / den, -1.0 / den, g.lambda / den};
            m[2] = {1.0 / den, -g.lambda / den, g.lambda / den, 1.0 / den};
            break;
        }
        case GroupKind::E:
            m[1] = {0.0, 1.0, -1.0, 0.0};
            m[2] = Mat2::identity();
            break;
    }
    return m;
}

}  // namespace lieobs
