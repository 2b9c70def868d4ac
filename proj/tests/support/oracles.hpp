#pragma once

// Test-side reference implementations, kept deliberately different from the
// library's closed forms: plain series and quadrature here, trig/hyperbolic
// closed forms there. Agreement between the two routes is what the suites
// assert.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "lieobs/group.hpp"
#include "lieobs/matrix2.hpp"

namespace oracles {

using lieobs::GroupClass;
using lieobs::GroupKind;
using lieobs::Mat2;
using lieobs::Vec2;

// Taylor series with scaling and squaring; no eigenstructure involved.
inline Mat2 series_expm(Mat2 m) {
    double norm = lieobs::norm_inf(m);
    int squarings = 0;
    while (norm > 0.5 && squarings < 60) {
        m = 0.5 * m;
        norm *= 0.5;
        ++squarings;
    }
    Mat2 sum = Mat2::identity();
    Mat2 term = Mat2::identity();
    for (int k = 1; k <= 30; ++k) {
        term = (1.0 / k) * (term * m);
        sum = sum + term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

// Truncated series for the integral of exp(u d) over [0, s]:
// sum_{j>=1} s^j d^{j-1} / j!. Converges fast only while |s d| is small.
inline Mat2 series_integral_expm_plain(Mat2 d, double s, int terms = 40) {
    Mat2 sum = Mat2::zero();
    Mat2 term = s * Mat2::identity();  // j = 1 term
    sum = sum + term;
    for (int j = 2; j <= terms; ++j) {
        term = (s / j) * (term * d);
        sum = sum + term;
    }
    return sum;
}

// Wide-range variant: halve the interval until the plain series converges,
// then rebuild with the doubling identity F(2u) = F(u) + exp(u d) F(u).
inline Mat2 series_integral_expm(Mat2 d, double s) {
    int k = 0;
    double norm = lieobs::norm_inf(d) * std::abs(s);
    while (norm > 0.25 && k < 60) {
        norm *= 0.5;
        ++k;
    }
    double u = std::ldexp(s, -k);
    Mat2 f = series_integral_expm_plain(d, u, 30);
    Mat2 e = series_expm(u * d);
    for (int i = 0; i < k; ++i) {
        f = f + e * f;
        e = e * e;
    }
    return f;
}

// Composite Simpson quadrature of a matrix-valued integrand over [0, t].
inline Mat2 simpson_matrix(const std::function<Mat2(double)>& f, double t, int panels = 10000) {
    if (t == 0.0) return Mat2::zero();
    double h = t / (2.0 * panels);
    Mat2 acc = f(0.0) + f(t);
    for (int i = 1; i < 2 * panels; ++i) {
        double w = (i % 2 == 1) ? 4.0 : 2.0;
        acc = acc + w * f(i * h);
    }
    return (h / 3.0) * acc;
}

// Hand-rolled rank via row elimination with partial pivoting; backs the
// Euclidean observability checks without going through the library's path.
inline int elimination_rank(std::vector<std::vector<double>> m, double tol = 1e-9) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t pivot = rank;
        for (size_t r = rank + 1; r < rows; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (std::abs(m[pivot][col]) < tol) continue;
        std::swap(m[rank], m[pivot]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            double f = m[r][col] / m[rank][col];
            for (size_t cc = col; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
        }
        ++rank;
    }
    return (int)rank;
}

inline std::vector<GroupClass> all_classes() {
    return {{GroupKind::R2, 0.0},
            {GroupKind::R3, 0.0},
            {GroupKind::R3Lambda, 0.5},
            {GroupKind::R3Lambda, 1.0},
            {GroupKind::R3Lambda, -0.7},
            {GroupKind::R3PrimeLambda, 0.5},
            {GroupKind::R3PrimeLambda, -1.2},
            {GroupKind::E, 0.0}};
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    Vec2 vec(double r = 2.0) { return {uniform(-r, r), uniform(-r, r)}; }
    Mat2 mat(double r = 2.0) {
        return {uniform(-r, r), uniform(-r, r), uniform(-r, r), uniform(-r, r)};
    }
    lieobs::GroupElement element(double r = 2.0) { return {uniform(-r, r), vec(r)}; }
};

}  // namespace oracles
