#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lieobs/scalar_basis.hpp"
#include "lieobs/setdesc.hpp"
#include "lieobs/tolerances.hpp"

namespace lieobs {

// Solver for stacked conditions r . v + f(t) = 0. This is the single engine
// behind the indistinguishability set, the fixed-point set, and their
// intersections with kernels: rank analysis on the v-rows eliminates v,
// leftover scalar equations are decided exactly when the basis certificates
// allow it and by a windowed search otherwise.

namespace detail {

struct RootSet {
    std::vector<double> roots;
    bool exact = false;  // proven equal to {0} on all of R, not just the window
};

inline double basis_magnitude(const FunctionBasis& b, double t) {
    double m = 1.0;
    for (int j = 0; j < b.n; ++j) m = std::max(m, std::abs(b.eval_slot(j, t)));
    return m;
}

inline double bisect_root(const FunctionBasis& b, const ScalarCombo& c, double lo, double hi,
                          double flo) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = combo_eval(b, c, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// All roots of the combination inside the window, by dense sampling plus
// bisection. t = 0 is always a root by construction of the basis and is
// injected explicitly so grids that miss the node cannot lose it.
inline std::vector<double> combo_roots_windowed(const FunctionBasis& b, const ScalarCombo& c,
                                                std::array<double, 2> window) {
    const int kNodes = 2048;
    const double lo = window[0], hi = window[1];
    std::vector<double> roots;
    if (lo <= 0.0 && 0.0 <= hi) roots.push_back(0.0);

    double scale = std::max(combo_scale(c), 1e-30);
    double prev_t = lo, prev_v = combo_eval(b, c, lo);
    for (int i = 1; i <= kNodes; ++i) {
        double t = lo + (hi - lo) * i / kNodes;
        double v = combo_eval(b, c, t);
        double node_tol = 1e-13 * scale * basis_magnitude(b, t);
        if (std::abs(v) <= node_tol) {
            roots.push_back(t);
        } else if (std::abs(prev_v) > 1e-13 * scale * basis_magnitude(b, prev_t) &&
                   (prev_v > 0.0) != (v > 0.0)) {
            roots.push_back(bisect_root(b, c, prev_t, t, prev_v));
        }
        prev_t = t;
        prev_v = v;
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> dedup;
    for (double r : roots) {
        if (dedup.empty() || std::abs(r - dedup.back()) > 1e-9 * std::max(1.0, std::abs(r)))
            dedup.push_back(r);
    }
    return dedup;
}

inline RootSet common_roots(const FunctionBasis& b, const std::vector<ScalarCombo>& combos,
                            std::array<double, 2> window, const Tolerances& tol) {
    RootSet rs;
    for (const auto& c : combos) {
        if (combo_root_set_is_origin(b, c, combo_scale(c), tol.symbolic_zero)) {
            // The other combinations also vanish at 0, so the intersection
            // is exactly {0} with no search needed.
            rs.roots = {0.0};
            rs.exact = true;
            return rs;
        }
    }
    rs.exact = false;
    rs.roots = combo_roots_windowed(b, combos.front(), window);
    for (size_t k = 1; k < combos.size() && !rs.roots.empty(); ++k) {
        const auto& c = combos[k];
        double cs = std::max(combo_scale(c), 1e-30);
        std::vector<double> kept;
        for (double r : rs.roots)
            if (std::abs(combo_eval(b, c, r)) <= tol.root_filter * cs * basis_magnitude(b, r))
                kept.push_back(r);
        rs.roots = std::move(kept);
    }
    return rs;
}

inline ScalarCombo combo_add_scaled(const ScalarCombo& a, double s, const ScalarCombo& b) {
    return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
}

inline ScalarCombo combo_scaled(double s, const ScalarCombo& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

}  // namespace detail

inline SetDescriptor solve_conditions(const GroupClass& cls,
                                      const std::vector<LinearCondition>& raw,
                                      std::array<double, 2> window, const Tolerances& tol) {
    using namespace detail;
    FunctionBasis basis = FunctionBasis::for_class(cls);

    SetDescriptor out;
    out.cls = cls;
    out.window = window;

    // Normalize and split into v-rows and pure scalar equations in t.
    std::vector<LinearCondition> vc;
    std::vector<ScalarCombo> tc;
    for (const auto& c : raw) {
        double s = std::max(norm_inf(c.r), combo_scale(c.f));
        if (s < 1e-14) continue;  // 0 = 0
        LinearCondition n{(1.0 / s) * c.r, combo_scaled(1.0 / s, c.f)};
        if (norm_inf(n.r) <= tol.symbolic_zero) {
            if (!combo_is_zero(n.f, 1.0, tol.symbolic_zero)) tc.push_back(n.f);
        } else {
            vc.push_back(n);
        }
        out.conditions.push_back(n);
    }

    if (vc.empty() && tc.empty()) {
        out.kind = SetKind::FullGroup;
        return out;
    }

    // Rank of the v-rows, via the best 2x2 minor.
    int pi = -1, pj = -1;
    double best_det = 0.0;
    for (size_t i = 0; i < vc.size(); ++i)
        for (size_t j = i + 1; j < vc.size(); ++j) {
            double d = std::abs(vc[i].r.x * vc[j].r.y - vc[i].r.y * vc[j].r.x);
            if (d > best_det) {
                best_det = d;
                pi = (int)i;
                pj = (int)j;
            }
        }
    int rank = 0;
    if (!vc.empty()) rank = (best_det > tol.rank) ? 2 : 1;

    auto classify_points = [&](const RootSet& rs) {
        out.window_limited = !rs.exact;
        if (out.points.size() == 1 && rs.exact && distance_inf(out.points[0], {}) == 0.0) {
            out.kind = SetKind::Trivial;
            out.note = "exact";
        } else {
            out.kind = SetKind::DiscreteList;
            if (!rs.exact) out.note = "roots located inside the t-window only";
        }
    };

    if (!tc.empty()) {
        // t is pinned to the common roots of the scalar equations; each
        // admissible t gives a plain linear system for v.
        RootSet rs = common_roots(basis, tc, window, tol);
        if (rank == 2) {
            Mat2 m{vc[pi].r.x, vc[pi].r.y, vc[pj].r.x, vc[pj].r.y};
            Mat2 minv = inverse(m);
            for (double t : rs.roots) {
                Vec2 rhs{-combo_eval(basis, vc[pi].f, t), -combo_eval(basis, vc[pj].f, t)};
                Vec2 v = minv * rhs;
                bool ok = true;
                for (size_t k = 0; k < vc.size(); ++k) {
                    if ((int)k == pi || (int)k == pj) continue;
                    double res = dot(vc[k].r, v) + combo_eval(basis, vc[k].f, t);
                    if (std::abs(res) > tol.root_filter * basis_magnitude(basis, t) *
                                            std::max(1.0, norm_inf(v)))
                        ok = false;
                }
                if (ok) out.points.push_back({t, v});
            }
            classify_points(rs);
        } else if (rank == 1) {
            size_t p = 0;
            for (size_t k = 1; k < vc.size(); ++k)
                if (norm2(vc[k].r) > norm2(vc[p].r)) p = k;
            Vec2 rp = vc[p].r;
            double rr = dot(rp, rp);
            Vec2 n{-rp.y, rp.x};
            n = (1.0 / norm2(n)) * n;
            out.window_limited = !rs.exact;
            for (double t : rs.roots) {
                bool ok = true;
                for (size_t k = 0; k < vc.size(); ++k) {
                    if (k == p) continue;
                    double kappa = dot(vc[k].r, rp) / rr;
                    double res = combo_eval(basis, vc[k].f, t) -
                                 kappa * combo_eval(basis, vc[p].f, t);
                    if (std::abs(res) > tol.root_filter * basis_magnitude(basis, t)) ok = false;
                }
                if (!ok) continue;
                Vec2 vp = (-combo_eval(basis, vc[p].f, t) / rr) * rp;
                out.lines.push_back({{t, vp.x, vp.y}, {0.0, n.x, n.y}});
            }
            out.kind = SetKind::Line;
            if (!rs.exact) out.note = "roots located inside the t-window only";
        } else {
            out.window_limited = !rs.exact;
            for (double t : rs.roots)
                out.planes.push_back({{t, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
            out.kind = SetKind::Plane;
            if (!rs.exact) out.note = "roots located inside the t-window only";
        }
        return out;
    }

    // No pure scalar equations: v is eliminated symbolically and the
    // leftover equations stay inside the basis span.
    if (rank == 2) {
        Mat2 m{vc[pi].r.x, vc[pi].r.y, vc[pj].r.x, vc[pj].r.y};
        double dt = det(m);
        // v(t) = -M^{-1} (f_i, f_j), componentwise over the basis.
        ScalarCombo vx = combo_add_scaled(combo_scaled(-m.d / dt, vc[pi].f), m.b / dt, vc[pj].f);
        ScalarCombo vy = combo_add_scaled(combo_scaled(m.c / dt, vc[pi].f), -m.a / dt, vc[pj].f);

        std::vector<ScalarCombo> residuals;
        for (size_t k = 0; k < vc.size(); ++k) {
            if ((int)k == pi || (int)k == pj) continue;
            ScalarCombo g = combo_add_scaled(
                combo_add_scaled(vc[k].f, vc[k].r.x, vx), vc[k].r.y, vy);
            double gs = std::abs(vc[k].r.x) * combo_scale(vx) +
                        std::abs(vc[k].r.y) * combo_scale(vy) + combo_scale(vc[k].f);
            if (!combo_is_zero(g, std::max(gs, 1.0), tol.symbolic_zero)) residuals.push_back(g);
        }

        if (residuals.empty()) {
            double csx = combo_scale(vx), csy = combo_scale(vy);
            double cutoff = tol.symbolic_zero * std::max({csx, csy, 1.0});
            bool trans = std::abs(vx[1]) > cutoff || std::abs(vx[2]) > cutoff ||
                         std::abs(vy[1]) > cutoff || std::abs(vy[2]) > cutoff;
            if (!trans) {
                // v(t) is linear in t: a straight line through the identity.
                Vec3 dir = normalized({1.0, vx[0], vy[0]});
                out.lines.push_back({{0.0, 0.0, 0.0}, dir});
                out.kind = SetKind::Line;
                out.note = "exact";
            } else {
                out.kind = SetKind::Curve;
                out.has_curve = true;
                out.curve_x = vx;
                out.curve_y = vy;
                out.note = "graph of v(t) in closed form";
            }
            return out;
        }

        RootSet rs = common_roots(basis, residuals, window, tol);
        for (double t : rs.roots)
            out.points.push_back({t, {combo_eval(basis, vx, t), combo_eval(basis, vy, t)}});
        classify_points(rs);
        return out;
    }

    // rank == 1: one independent direction in v.
    size_t p = 0;
    for (size_t k = 1; k < vc.size(); ++k)
        if (norm2(vc[k].r) > norm2(vc[p].r)) p = k;
    Vec2 rp = vc[p].r;
    double rr = dot(rp, rp);
    Vec2 n{-rp.y, rp.x};
    n = (1.0 / norm2(n)) * n;
    ScalarCombo vpx = combo_scaled(-rp.x / rr, vc[p].f);
    ScalarCombo vpy = combo_scaled(-rp.y / rr, vc[p].f);

    std::vector<ScalarCombo> residuals;
    for (size_t k = 0; k < vc.size(); ++k) {
        if (k == p) continue;
        double kappa = dot(vc[k].r, rp) / rr;
        ScalarCombo g = combo_add_scaled(vc[k].f, -kappa, vc[p].f);
        double gs = combo_scale(vc[k].f) + std::abs(kappa) * combo_scale(vc[p].f);
        if (!combo_is_zero(g, std::max(gs, 1.0), tol.symbolic_zero)) residuals.push_back(g);
    }

    if (residuals.empty()) {
        double cs = combo_scale(vc[p].f);
        double cutoff = tol.symbolic_zero * std::max(cs, 1.0);
        bool trans = std::abs(vc[p].f[1]) > cutoff || std::abs(vc[p].f[2]) > cutoff;
        if (!trans) {
            // Fibers v_p(t) + span(n) over every t: a plane through the identity.
            Vec3 d1{0.0, n.x, n.y};
            Vec3 d2 = normalized({1.0, vpx[0], vpy[0]});
            d2 = normalized(d2 - dot(d2, d1) * d1);
            out.planes.push_back({{0.0, 0.0, 0.0}, d1, d2});
            out.kind = SetKind::Plane;
            out.note = "exact";
        } else {
            // Ruled non-flat surface; report samples only. Not reachable from
            // the catalogued kernels, kept for completeness.
            out.kind = SetKind::NumericOnly;
            out.window_limited = true;
            out.note = "ruled surface, sampled";
            for (int i = 0; i <= 20; ++i) {
                double t = window[0] + (window[1] - window[0]) * i / 20.0;
                Vec2 vp{combo_eval(basis, vpx, t), combo_eval(basis, vpy, t)};
                for (double alpha : {-1.0, 0.0, 1.0})
                    out.points.push_back({t, vp + alpha * n});
            }
        }
        return out;
    }

    RootSet rs = common_roots(basis, residuals, window, tol);
    out.window_limited = !rs.exact;
    for (double t : rs.roots) {
        Vec2 vp{combo_eval(basis, vpx, t), combo_eval(basis, vpy, t)};
        out.lines.push_back({{t, vp.x, vp.y}, {0.0, n.x, n.y}});
    }
    out.kind = SetKind::Line;
    if (!rs.exact) out.note = "roots located inside the t-window only";
    return out;
}

}  // namespace lieobs
