#pragma once

#include <cstdlib>
#include <string>

namespace lieobs {

// Numeric thresholds used across the decision pipeline. Every field can be
// overridden by the environment (LIEOBS_TOL_<NAME>, uppercased field name)
// and by the CLI config; defaults are chosen so the acceptance tolerances
// in the test suite hold with margin.
struct Tolerances {
    double kernel_membership = 1e-12;  // |L(g)| for membership in a kernel
    double flow_membership = 1e-7;     // numeric oracle: distance from K along the flow
    double identity_cluster = 1e-5;    // numeric oracle: radius of the identity cluster
    double dstar_boundary = 1e-9;      // discriminant band treated as a repeated eigenvalue
    double symbolic_zero = 1e-10;      // relative cutoff for a vanishing basis coefficient
    double root_filter = 1e-8;         // residual cutoff when intersecting root sets
    double rank = 1e-10;               // relative cutoff for rank decisions on condition rows
    double singular_conjugator = 1e-12;  // |det P| below this rejects a conjugator

    static Tolerances from_env() {
        Tolerances t;
        auto grab = [](const char* name, double& slot) {
            if (const char* s = std::getenv(name)) {
                char* end = nullptr;
                double v = std::strtod(s, &end);
                if (end != s && v > 0.0) slot = v;
            }
        };
        grab("LIEOBS_TOL_KERNEL_MEMBERSHIP", t.kernel_membership);
        grab("LIEOBS_TOL_FLOW_MEMBERSHIP", t.flow_membership);
        grab("LIEOBS_TOL_IDENTITY_CLUSTER", t.identity_cluster);
        grab("LIEOBS_TOL_DSTAR_BOUNDARY", t.dstar_boundary);
        grab("LIEOBS_TOL_SYMBOLIC_ZERO", t.symbolic_zero);
        grab("LIEOBS_TOL_ROOT_FILTER", t.root_filter);
        grab("LIEOBS_TOL_RANK", t.rank);
        grab("LIEOBS_TOL_SINGULAR_CONJUGATOR", t.singular_conjugator);
        return t;
    }
};

}  // namespace lieobs
