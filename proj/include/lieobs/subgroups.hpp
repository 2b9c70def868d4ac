#pragma once

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieobs/group.hpp"
#include "lieobs/setdesc.hpp"
#include "lieobs/tolerances.hpp"

namespace lieobs {

struct UnknownTarget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonCanonicalHom : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class SubgroupId { G1, G2, G3, G4, G5, G6 };

inline const char* to_string(SubgroupId s) {
    switch (s) {
        case SubgroupId::G1: return "G1";
        case SubgroupId::G2: return "G2";
        case SubgroupId::G3: return "G3";
        case SubgroupId::G4: return "G4";
        case SubgroupId::G5: return "G5";
        case SubgroupId::G6: return "G6";
    }
    return "?";
}

inline SubgroupId subgroup_id_from_string(const std::string& s) {
    for (SubgroupId id : {SubgroupId::G1, SubgroupId::G2, SubgroupId::G3, SubgroupId::G4,
                          SubgroupId::G5, SubgroupId::G6})
        if (s == to_string(id)) return id;
    throw UnknownTarget("unknown subgroup id: " + s);
}

struct SubgroupInfo {
    SubgroupId id;
    std::string definition;  // the subset of R x_rho R^2
    std::string iso;         // isomorphism type: R, R^2, or Aff2(R)
};

// Connected closed subgroups up to the obvious identifications; the
// one-parameter rho-invariant axes differ per class, which is why the lists
// differ in shape.
inline std::vector<SubgroupInfo> subgroup_catalog(const GroupClass& g) {
    switch (g.kind) {
        case GroupKind::R2:
            return {{SubgroupId::G1, "R x_rho (R x {0})", "R^2"},
                    {SubgroupId::G2, "R x_rho ({0} x R)", "Aff2(R)"},
                    {SubgroupId::G3, "{0} x R^2", "R^2"},
                    {SubgroupId::G4, "{0} x ({0} x R)", "R"},
                    {SubgroupId::G5, "{0} x (R x {0})", "R"},
                    {SubgroupId::G6, "R x {(0,0)}", "R"}};
        case GroupKind::R3:
            return {{SubgroupId::G1, "R x_rho (R x {0})", "Aff2(R)"},
                    {SubgroupId::G2, "{0} x R^2", "R^2"},
                    {SubgroupId::G3, "{0} x ({0} x R)", "R"},
                    {SubgroupId::G4, "{0} x (R x {0})", "R"},
                    {SubgroupId::G5, "R x {(0,0)}", "R"}};
        case GroupKind::R3Lambda:
            return {{SubgroupId::G1, "{0} x R^2", "R^2"},
                    {SubgroupId::G2, "R x_rho (R x {0})", "Aff2(R)"},
                    {SubgroupId::G3, "R x_rho ({0} x R)", "Aff2(R)"},
                    {SubgroupId::G4, "R x {(0,0)}", "R"},
                    {SubgroupId::G5, "{0} x (R x {0})", "R"},
                    {SubgroupId::G6, "{0} x ({0} x R)", "R"}};
        default:
            return {{SubgroupId::G1, "{0} x R^2", "R^2"},
                    {SubgroupId::G2, "R x {(0,0)}", "R"}};
    }
}

// A family of homomorphisms G -> target. Each member is determined by up to
// two rows: linear functionals over (t, x, y) feeding one output coordinate
// each. Entries are either pinned by the group laws or free parameters.
struct HomFamily {
    SubgroupId target;
    int alpha_out = 0;  // output coordinate (0 = t, 1 = x, 2 = y) fed by the alpha row
    int beta_out = -1;  // second output coordinate, -1 when the target is 1-dimensional
    std::array<double, 3> alpha_fixed{};  // values of pinned entries
    std::array<bool, 3> alpha_free{};     // which entries are free
    std::array<double, 3> beta_fixed{};
    std::array<bool, 3> beta_free{};

    std::vector<std::string> free_names() const {
        std::vector<std::string> names;
        static const char* an[3] = {"alpha1", "alpha2", "alpha3"};
        static const char* bn[3] = {"beta1", "beta2", "beta3"};
        for (int i = 0; i < 3; ++i)
            if (alpha_free[i]) names.push_back(an[i]);
        if (beta_out >= 0)
            for (int i = 0; i < 3; ++i)
                if (beta_free[i]) names.push_back(bn[i]);
        return names;
    }
};

inline std::vector<HomFamily> canonical_homomorphisms(const GroupClass& g) {
    auto fam = [](SubgroupId id, int aout, std::array<double, 3> afix, std::array<bool, 3> afree,
                  int bout = -1, std::array<double, 3> bfix = {},
                  std::array<bool, 3> bfree = {}) {
        HomFamily f;
        f.target = id;
        f.alpha_out = aout;
        f.beta_out = bout;
        f.alpha_fixed = afix;
        f.alpha_free = afree;
        f.beta_fixed = bfix;
        f.beta_free = bfree;
        return f;
    };
    const std::array<bool, 3> TX{true, true, false};  // t and x coefficients free
    const std::array<bool, 3> T{true, false, false};
    const std::array<bool, 3> X{false, true, false};
    const std::array<bool, 3> Y{false, false, true};
    const std::array<bool, 3> NONE{};
    switch (g.kind) {
        case GroupKind::R2:
            return {fam(SubgroupId::G1, 0, {}, TX, 1, {}, TX),
                    fam(SubgroupId::G2, 0, {1.0, 0.0, 0.0}, NONE, 2, {}, Y),
                    fam(SubgroupId::G3, 1, {}, TX, 2, {}, TX),
                    fam(SubgroupId::G4, 2, {}, TX),
                    fam(SubgroupId::G5, 1, {}, TX),
                    fam(SubgroupId::G6, 0, {}, TX)};
        case GroupKind::R3:
            return {fam(SubgroupId::G1, 0, {1.0, 0.0, 0.0}, NONE, 1, {}, Y),
                    fam(SubgroupId::G2, 1, {}, T, 2, {}, T),
                    fam(SubgroupId::G3, 2, {}, T),
                    fam(SubgroupId::G4, 1, {}, T),
                    fam(SubgroupId::G5, 0, {}, T)};
        case GroupKind::R3Lambda:
            return {fam(SubgroupId::G1, 1, {}, T, 2, {}, T),
                    fam(SubgroupId::G2, 0, {1.0, 0.0, 0.0}, NONE, 1, {}, X),
                    // The t-output is pinned to t / lambda: the x-part of the
                    // target evolves under e^{lambda t'}, so matching the
                    // ambient e^t twist forces the reciprocal slope.
                    fam(SubgroupId::G3, 0, {1.0 / g.lambda, 0.0, 0.0}, NONE, 2, {}, X),
                    fam(SubgroupId::G4, 0, {}, T),
                    fam(SubgroupId::G5, 1, {}, T),
                    fam(SubgroupId::G6, 2, {}, T)};
        default:
            return {fam(SubgroupId::G1, 1, {}, T, 2, {}, T),
                    fam(SubgroupId::G2, 0, {}, T)};
    }
}

struct HomSpec {
    GroupClass cls;
    SubgroupId target = SubgroupId::G1;
    bool zero_map = false;
    int alpha_out = 0, beta_out = -1;
    std::array<double, 3> alpha{};  // actual row over (t, x, y)
    std::array<double, 3> beta{};
};

inline const HomFamily& family_for(const GroupClass& cls, SubgroupId target) {
    static thread_local std::vector<HomFamily> cache;
    cache = canonical_homomorphisms(cls);
    for (const auto& f : cache)
        if (f.target == target) return f;
    throw UnknownTarget(std::string("no subgroup ") + to_string(target) + " in class " +
                        to_string(cls.kind));
}

namespace detail {

// Shared by the canonical constructor and the unchecked one used for audits.
inline HomSpec build_hom(const GroupClass& cls, SubgroupId target,
                         const std::map<std::string, double>& coeffs, bool enforce) {
    cls.validate();
    const HomFamily f = family_for(cls, target);
    HomSpec h;
    h.cls = cls;
    h.target = target;
    h.alpha_out = f.alpha_out;
    h.beta_out = f.beta_out;
    h.alpha = f.alpha_fixed;
    h.beta = f.beta_fixed;
    static const char* an[3] = {"alpha1", "alpha2", "alpha3"};
    static const char* bn[3] = {"beta1", "beta2", "beta3"};
    for (const auto& [name, value] : coeffs) {
        bool placed = false;
        for (int i = 0; i < 3; ++i) {
            if (name == an[i]) {
                if (enforce && !f.alpha_free[i] && value != f.alpha_fixed[i])
                    throw NonCanonicalHom("coefficient " + name + " is pinned to a fixed value");
                h.alpha[i] = value;
                placed = true;
            } else if (name == bn[i]) {
                if (f.beta_out < 0)
                    throw NonCanonicalHom("target " + std::string(to_string(target)) +
                                          " has a single output row, no " + name);
                if (enforce && !f.beta_free[i] && value != f.beta_fixed[i])
                    throw NonCanonicalHom("coefficient " + name + " is pinned to a fixed value");
                h.beta[i] = value;
                placed = true;
            }
        }
        if (!placed) throw std::invalid_argument("unknown homomorphism coefficient: " + name);
    }
    return h;
}

}  // namespace detail

inline HomSpec make_hom(const GroupClass& cls, SubgroupId target,
                        const std::map<std::string, double>& coeffs) {
    return detail::build_hom(cls, target, coeffs, true);
}

// Arbitrary rows on the family's output slots, for audit paths that need to
// exercise non-homomorphisms.
inline HomSpec make_hom_unchecked(const GroupClass& cls, SubgroupId target,
                                  const std::map<std::string, double>& coeffs) {
    return detail::build_hom(cls, target, coeffs, false);
}

inline HomSpec zero_hom(const GroupClass& cls, SubgroupId target) {
    HomSpec h = detail::build_hom(cls, target, {}, false);
    h.zero_map = true;
    h.alpha = {};
    h.beta = {};
    return h;
}

inline bool is_canonical(const HomSpec& h) {
    if (h.zero_map) return true;
    const HomFamily f = family_for(h.cls, h.target);
    for (int i = 0; i < 3; ++i) {
        if (!f.alpha_free[i] && h.alpha[i] != f.alpha_fixed[i]) return false;
        if (f.beta_out >= 0 && !f.beta_free[i] && h.beta[i] != f.beta_fixed[i]) return false;
    }
    return true;
}

inline GroupElement hom_apply(const HomSpec& h, const GroupElement& g) {
    GroupElement out;
    if (h.zero_map) return out;
    std::array<double, 3> in{g.t, g.v.x, g.v.y};
    auto put = [&out](int slot, double value) {
        if (slot == 0) out.t = value;
        else if (slot == 1) out.v.x = value;
        else out.v.y = value;
    };
    double a = h.alpha[0] * in[0] + h.alpha[1] * in[1] + h.alpha[2] * in[2];
    put(h.alpha_out, a);
    if (h.beta_out >= 0) {
        double b = h.beta[0] * in[0] + h.beta[1] * in[1] + h.beta[2] * in[2];
        put(h.beta_out, b);
    }
    return out;
}

struct HomValidation {
    double max_residual = 0.0;
    int samples = 0;
    bool pass = false;
};

// Seeded audit of h(g1 g2) = h(g1) h(g2); independent of how the family
// tables above were derived.
inline HomValidation hom_validate(const HomSpec& h, int samples = 200, unsigned seed = 12345) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    HomValidation rep;
    rep.samples = samples;
    for (int i = 0; i < samples; ++i) {
        GroupElement g1{u(rng), {u(rng), u(rng)}};
        GroupElement g2{u(rng), {u(rng), u(rng)}};
        GroupElement lhs = hom_apply(h, multiply(h.cls, g1, g2));
        GroupElement rhs = multiply(h.cls, hom_apply(h, g1), hom_apply(h, g2));
        double scale = std::max({1.0, std::abs(lhs.t), norm_inf(lhs.v), norm_inf(rhs.v)});
        rep.max_residual = std::max(rep.max_residual, distance_inf(lhs, rhs) / scale);
    }
    rep.pass = rep.max_residual <= 1e-9;
    return rep;
}

enum class KernelKind { FullGroup, PlaneT0, PlaneX0, PlaneTilted, LineYAxis, LineXAxis };

inline const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::FullGroup: return "FullGroup";
        case KernelKind::PlaneT0: return "PlaneT0";
        case KernelKind::PlaneX0: return "PlaneX0";
        case KernelKind::PlaneTilted: return "PlaneTilted";
        case KernelKind::LineYAxis: return "LineYAxis";
        case KernelKind::LineXAxis: return "LineXAxis";
    }
    return "?";
}

// One defining equation p * t + q . v = 0.
struct KernelFunctional {
    double p = 0.0;
    Vec2 q{};
};

struct KernelDescriptor {
    KernelKind kind = KernelKind::FullGroup;
    double tilt = 0.0;  // PlaneTilted: the c in t = c x
    std::vector<KernelFunctional> functionals;
    std::string note;
};

inline KernelDescriptor kernel_of(const HomSpec& h, const Tolerances& tol = {}) {
    KernelDescriptor k;
    if (h.zero_map) {
        k.kind = KernelKind::FullGroup;
        return k;
    }
    if (!is_canonical(h))
        throw NonCanonicalHom("kernel_of requires a canonical homomorphism");

    auto nrm = [](const std::array<double, 3>& r) {
        return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    };
    std::array<double, 3> a = h.alpha, b = h.beta;
    double na = nrm(a), nb = h.beta_out >= 0 ? nrm(b) : 0.0;

    if (na <= tol.symbolic_zero && nb <= tol.symbolic_zero) {
        k.kind = KernelKind::FullGroup;
        k.note = "all rows vanish";
        return k;
    }

    // Cross product measures independence of the two rows.
    double cx = 0.0;
    if (na > 0.0 && nb > 0.0) {
        double c0 = a[1] * b[2] - a[2] * b[1];
        double c1 = a[2] * b[0] - a[0] * b[2];
        double c2 = a[0] * b[1] - a[1] * b[0];
        cx = std::sqrt(c0 * c0 + c1 * c1 + c2 * c2);
    }

    if (cx > tol.rank * std::max(na * nb, 1e-30)) {
        // Two independent functionals: a line. Which line depends on the
        // coordinate their span annihilates.
        bool kills_y = std::abs(a[2]) <= tol.symbolic_zero * na &&
                       std::abs(b[2]) <= tol.symbolic_zero * nb;
        bool kills_x = std::abs(a[1]) <= tol.symbolic_zero * na &&
                       std::abs(b[1]) <= tol.symbolic_zero * nb;
        if (kills_y) {
            k.kind = KernelKind::LineYAxis;
            k.functionals = {{1.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}};
        } else if (kills_x) {
            k.kind = KernelKind::LineXAxis;
            k.functionals = {{1.0, {0.0, 0.0}}, {0.0, {0.0, 1.0}}};
        } else {
            throw NonCanonicalHom("independent rows outside the catalogued spans");
        }
        return k;
    }

    // Dependent rows: a single generating functional; prefer the alpha row.
    bool use_alpha = na >= tol.symbolic_zero * std::max(1.0, nb);
    std::array<double, 3> r = use_alpha ? a : b;
    if (na > 0.0 && nb > 0.0)
        k.note = "redundant proportional row folded into the generator";
    else if (!use_alpha)
        k.note = "first row vanishes; second row generates the kernel";
    double nr = nrm(r);
    r = {r[0] / nr, r[1] / nr, r[2] / nr};
    if (std::abs(r[2]) > tol.symbolic_zero)
        throw NonCanonicalHom("kernel generator involves the y coordinate");

    bool has_t = std::abs(r[0]) > tol.symbolic_zero;
    bool has_x = std::abs(r[1]) > tol.symbolic_zero;
    k.functionals = {{r[0], {r[1], 0.0}}};
    if (has_t && !has_x) {
        k.kind = KernelKind::PlaneT0;
        k.functionals = {{1.0, {0.0, 0.0}}};
    } else if (!has_t && has_x) {
        k.kind = KernelKind::PlaneX0;
        k.functionals = {{0.0, {1.0, 0.0}}};
    } else {
        k.kind = KernelKind::PlaneTilted;
        k.tilt = -r[1] / r[0];
    }
    return k;
}

// Orthonormal basis of the common null space of the functionals; the
// coordinate chart the samplers walk on.
inline std::vector<Vec3> kernel_null_basis(const std::vector<KernelFunctional>& fns,
                                           double rank_tol = 1e-10) {
    std::vector<Vec3> rows;
    for (const auto& f : fns) {
        Vec3 r{f.p, f.q.x, f.q.y};
        for (const auto& prev : rows) r = r - dot(r, prev) * prev;
        if (norm2(r) > rank_tol) rows.push_back(normalized(r));
    }
    std::vector<Vec3> basis;
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const auto& ax : axes) {
        Vec3 r = ax;
        for (const auto& row : rows) r = r - dot(r, row) * row;
        for (const auto& prev : basis) r = r - dot(r, prev) * prev;
        if (norm2(r) > rank_tol) basis.push_back(normalized(r));
    }
    return basis;
}

inline double kernel_residual(const KernelDescriptor& k, const GroupElement& g) {
    double worst = 0.0;
    for (const auto& f : k.functionals)
        worst = std::max(worst, std::abs(f.p * g.t + dot(f.q, g.v)));
    return worst;
}

}  // namespace lieobs
