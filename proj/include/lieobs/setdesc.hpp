#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lieobs/group.hpp"
#include "lieobs/scalar_basis.hpp"

namespace lieobs {

// Flat 3-vector over the (t, x, y) coordinates of a group element; only used
// for set geometry, group arithmetic stays on GroupElement.
struct Vec3 {
    double t = 0.0, x = 0.0, y = 0.0;
};

inline Vec3 to_vec3(const GroupElement& g) { return {g.t, g.v.x, g.v.y}; }
inline GroupElement to_element(const Vec3& p) { return {p.t, {p.x, p.y}}; }
inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.t + b.t, a.x + b.x, a.y + b.y}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.t - b.t, a.x - b.x, a.y - b.y}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.t, s * a.x, s * a.y}; }
inline double dot(Vec3 a, Vec3 b) { return a.t * b.t + a.x * b.x + a.y * b.y; }
inline double norm2(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) {
    double n = norm2(a);
    return n > 0.0 ? (1.0 / n) * a : a;
}

// One scalar equation r . v + f(t) = 0 with f a combination over the class
// basis. Everything the pipeline needs to decide (kernel membership along
// the flow, fixed points) stacks into lists of these.
struct LinearCondition {
    Vec2 r{};
    ScalarCombo f{};
};

enum class SetKind { Trivial, DiscreteList, Line, Plane, Curve, FullGroup, NumericOnly };

inline const char* to_string(SetKind k) {
    switch (k) {
        case SetKind::Trivial: return "Trivial";
        case SetKind::DiscreteList: return "DiscreteList";
        case SetKind::Line: return "Line";
        case SetKind::Plane: return "Plane";
        case SetKind::Curve: return "Curve";
        case SetKind::FullGroup: return "FullGroup";
        case SetKind::NumericOnly: return "NumericOnly";
    }
    return "?";
}

struct SetDescriptor {
    SetKind kind = SetKind::Trivial;
    GroupClass cls;

    // Trivial / DiscreteList members; NumericOnly retained samples.
    std::vector<GroupElement> points;

    struct LineComp {
        Vec3 base{}, dir{};  // dir normalized
    };
    struct PlaneComp {
        Vec3 base{}, d1{}, d2{};  // d1, d2 orthonormal
    };
    std::vector<LineComp> lines;
    std::vector<PlaneComp> planes;

    // Curve: the graph t -> (t, vx(t), vy(t)) with vx, vy over the class basis.
    bool has_curve = false;
    ScalarCombo curve_x{}, curve_y{};

    // Set when any part of the answer came from a windowed numeric search
    // instead of an exact certificate.
    bool window_limited = false;
    std::array<double, 2> window{-10.0, 10.0};

    std::string note;

    // Defining equations, populated when the set was produced analytically;
    // they give exact membership tests independent of the geometry above.
    std::vector<LinearCondition> conditions;
};

inline bool is_discrete(const SetDescriptor& s, double identity_cluster) {
    switch (s.kind) {
        case SetKind::Trivial:
        case SetKind::DiscreteList:
            return true;
        case SetKind::NumericOnly: {
            GroupElement e;
            for (const auto& p : s.points)
                if (distance_inf(p, e) > identity_cluster) return false;
            return true;
        }
        default:
            return false;
    }
}

// Geometric distance from a group element to the described set. For
// NumericOnly this degrades to distance-to-samples and is only meaningful
// for reporting.
inline double set_distance(const SetDescriptor& s, const GroupElement& g) {
    double best = std::numeric_limits<double>::infinity();
    Vec3 p = to_vec3(g);
    for (const auto& q : s.points) best = std::min(best, norm2(p - to_vec3(q)));
    for (const auto& l : s.lines) {
        Vec3 w = p - l.base;
        Vec3 proj = w - dot(w, l.dir) * l.dir;
        best = std::min(best, norm2(proj));
    }
    for (const auto& pl : s.planes) {
        Vec3 w = p - pl.base;
        Vec3 res = w - dot(w, pl.d1) * pl.d1 - dot(w, pl.d2) * pl.d2;
        best = std::min(best, norm2(res));
    }
    if (s.has_curve) {
        auto basis = FunctionBasis::for_class(s.cls);
        double dx = g.v.x - combo_eval(basis, s.curve_x, g.t);
        double dy = g.v.y - combo_eval(basis, s.curve_y, g.t);
        best = std::min(best, std::hypot(dx, dy));
    }
    if (s.kind == SetKind::FullGroup) best = 0.0;
    return best;
}

// Largest residual of the defining equations at g; exact membership test for
// analytically produced sets.
inline double condition_residual(const FunctionBasis& basis,
                                 const std::vector<LinearCondition>& conds,
                                 const GroupElement& g) {
    double worst = 0.0;
    for (const auto& c : conds)
        worst = std::max(worst, std::abs(dot(c.r, g.v) + combo_eval(basis, c.f, g.t)));
    return worst;
}

// Representative members for reporting and cross-checks.
inline std::vector<GroupElement> sample_points(const SetDescriptor& s, int per_component) {
    std::vector<GroupElement> out;
    auto push = [&out](Vec3 p) { out.push_back(to_element(p)); };
    switch (s.kind) {
        case SetKind::Trivial:
        case SetKind::DiscreteList:
        case SetKind::NumericOnly:
            out = s.points;
            break;
        case SetKind::Line:
            for (const auto& l : s.lines)
                for (int k = 0; k < per_component; ++k) {
                    double u = -2.0 + 4.0 * k / std::max(1, per_component - 1);
                    push(l.base + u * l.dir);
                }
            break;
        case SetKind::Plane:
            for (const auto& pl : s.planes) {
                int side = std::max(2, (int)std::lround(std::sqrt((double)per_component)));
                for (int i = 0; i < side; ++i)
                    for (int j = 0; j < side; ++j) {
                        double u = -2.0 + 4.0 * i / (side - 1);
                        double w = -2.0 + 4.0 * j / (side - 1);
                        push(pl.base + u * pl.d1 + w * pl.d2);
                    }
            }
            break;
        case SetKind::Curve: {
            auto basis = FunctionBasis::for_class(s.cls);
            for (int k = 0; k < per_component; ++k) {
                double t = s.window[0] + (s.window[1] - s.window[0]) * k /
                                             std::max(1, per_component - 1);
                push({t, combo_eval(basis, s.curve_x, t), combo_eval(basis, s.curve_y, t)});
            }
            break;
        }
        case SetKind::FullGroup:
            for (double t : {-1.0, 0.0, 1.0})
                for (double x : {-1.0, 0.0, 1.0})
                    for (double y : {-1.0, 0.0, 1.0}) push({t, x, y});
            break;
    }
    return out;
}

}  // namespace lieobs
