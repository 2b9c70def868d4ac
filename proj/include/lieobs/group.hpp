#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "lieobs/matrix2.hpp"

namespace lieobs {

// The five simply connected solvable non-nilpotent 3-dimensional Lie groups,
// realized as semidirect products R x_rho R^2 with rho_t = exp(t * theta).
// R3Lambda carries a parameter |lambda| in (0, 1]; R3PrimeLambda carries
// lambda != 0. The other three kinds take no parameter.
enum class GroupKind { R2, R3, R3Lambda, R3PrimeLambda, E };

inline const char* to_string(GroupKind k) {
    switch (k) {
        case GroupKind::R2: return "R2";
        case GroupKind::R3: return "R3";
        case GroupKind::R3Lambda: return "R3Lambda";
        case GroupKind::R3PrimeLambda: return "R3PrimeLambda";
        case GroupKind::E: return "E";
    }
    return "?";
}

inline GroupKind group_kind_from_string(const std::string& s) {
    if (s == "R2") return GroupKind::R2;
    if (s == "R3") return GroupKind::R3;
    if (s == "R3Lambda") return GroupKind::R3Lambda;
    if (s == "R3PrimeLambda") return GroupKind::R3PrimeLambda;
    if (s == "E") return GroupKind::E;
    throw std::invalid_argument("unknown group kind: " + s);
}

struct GroupClass {
    GroupKind kind = GroupKind::R2;
    double lambda = 1.0;  // meaningful for R3Lambda and R3PrimeLambda only

    void validate() const {
        if (kind == GroupKind::R3Lambda) {
            double a = std::abs(lambda);
            if (!(a > 0.0) || a > 1.0)
                throw std::invalid_argument("R3Lambda requires |lambda| in (0, 1]");
        } else if (kind == GroupKind::R3PrimeLambda) {
            if (lambda == 0.0)
                throw std::invalid_argument("R3PrimeLambda requires lambda != 0");
        }
    }

    bool has_lambda() const {
        return kind == GroupKind::R3Lambda || kind == GroupKind::R3PrimeLambda;
    }
};

// Generator of the rho action on R^2.
inline Mat2 theta(const GroupClass& g) {
    switch (g.kind) {
        case GroupKind::R2: return {0.0, 0.0, 0.0, 1.0};
        case GroupKind::R3: return {1.0, 1.0, 0.0, 1.0};
        case GroupKind::R3Lambda: return {1.0, 0.0, 0.0, g.lambda};
        case GroupKind::R3PrimeLambda: return {g.lambda, -1.0, 1.0, g.lambda};
        case GroupKind::E: return {0.0, -1.0, 1.0, 0.0};
    }
    return {};
}

// rho_t = exp(t * theta), in closed form per class rather than through the
// generic exponential; the generic route is kept as a test oracle.
inline Mat2 rho(const GroupClass& g, double t) {
    switch (g.kind) {
        case GroupKind::R2:
            return Mat2::diag(1.0, std::exp(t));
        case GroupKind::R3: {
            double e = std::exp(t);
            return {e, t * e, 0.0, e};
        }
        case GroupKind::R3Lambda:
            return Mat2::diag(std::exp(t), std::exp(g.lambda * t));
        case GroupKind::R3PrimeLambda: {
            double e = std::exp(g.lambda * t);
            return {e * std::cos(t), -e * std::sin(t), e * std::sin(t), e * std::cos(t)};
        }
        case GroupKind::E:
            return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
    }
    return {};
}

struct GroupElement {
    double t = 0.0;
    Vec2 v{};

    static GroupElement identity() { return {}; }
};

inline GroupElement multiply(const GroupClass& g, const GroupElement& a, const GroupElement& b) {
    return {a.t + b.t, a.v + rho(g, a.t) * b.v};
}

inline GroupElement inverse(const GroupClass& g, const GroupElement& a) {
    return {-a.t, -(rho(g, -a.t) * a.v)};
}

inline double distance_inf(const GroupElement& a, const GroupElement& b) {
    return std::max(std::abs(a.t - b.t), norm_inf(a.v - b.v));
}

}  // namespace lieobs
