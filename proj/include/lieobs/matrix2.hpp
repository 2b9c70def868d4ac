#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace lieobs {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double& operator[](int i) { return i == 0 ? x : y; }
    double operator[](int i) const { return i == 0 ? x : y; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm_inf(Vec2 a) { return std::max(std::abs(a.x), std::abs(a.y)); }
inline double norm2(Vec2 a) { return std::hypot(a.x, a.y); }

// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }
};

inline Mat2 operator+(Mat2 m, Mat2 n) { return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d}; }
inline Mat2 operator-(Mat2 m, Mat2 n) { return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d}; }
inline Mat2 operator*(double s, Mat2 m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline Mat2 operator*(Mat2 m, Mat2 n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline Vec2 operator*(Mat2 m, Vec2 v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }

// Row vector times matrix, i.e. (v^T M)^T.
inline Vec2 left_mul(Vec2 v, Mat2 m) { return {v.x * m.a + v.y * m.c, v.x * m.b + v.y * m.d}; }

inline double det(Mat2 m) { return m.a * m.d - m.b * m.c; }
inline double trace(Mat2 m) { return m.a + m.d; }
inline double norm_inf(Mat2 m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)), std::max(std::abs(m.c), std::abs(m.d)));
}
inline Mat2 transpose(Mat2 m) { return {m.a, m.c, m.b, m.d}; }

inline Mat2 inverse(Mat2 m) {
    double dt = det(m);
    if (std::abs(dt) < 1e-300)
        throw std::domain_error("matrix2: inverse of singular matrix");
    double s = 1.0 / dt;
    return {s * m.d, -s * m.b, -s * m.c, s * m.a};
}

inline Vec2 solve2(Mat2 m, Vec2 rhs) { return inverse(m) * rhs; }

// sinh(w)/w continued through w = 0; accepts w^2 so the caller never takes
// a square root of a negative discriminant.
inline double sinhc_from_sq(double w2) {
    if (std::abs(w2) < 1e-12) {
        // sinh(w)/w = 1 + w^2/6 + w^4/120 + ...
        return 1.0 + w2 / 6.0 + w2 * w2 / 120.0;
    }
    if (w2 > 0.0) {
        double w = std::sqrt(w2);
        return std::sinh(w) / w;
    }
    double w = std::sqrt(-w2);
    return std::sin(w) / w;  // sinh(iw)/(iw) = sin(w)/w
}

inline double cosh_from_sq(double w2) {
    if (std::abs(w2) < 1e-12)
        return 1.0 + w2 / 2.0 + w2 * w2 / 24.0;
    return w2 > 0.0 ? std::cosh(std::sqrt(w2)) : std::cos(std::sqrt(-w2));
}

// Closed-form exp(M) for 2x2 M. Writing M = m I + N with m = tr(M)/2 and
// N trace free, N^2 = -det(N) I, so exp(M) = e^m (cosh(w) I + sinh(w)/w N)
// with w^2 = -det(N) = ((a-d)^2 + 4bc)/4. The w -> 0 limits are handled by
// the series forms above, so repeated eigenvalues need no special casing.
inline Mat2 expm(Mat2 m) {
    double mean = 0.5 * trace(m);
    Mat2 n = m - mean * Mat2::identity();
    double w2 = -det(n);
    double em = std::exp(mean);
    double ch = cosh_from_sq(w2);
    double sh = sinhc_from_sq(w2);
    return em * (ch * Mat2::identity() + sh * n);
}

// F(s, M) = integral of exp(u M) du over [0, s]. Same trace-free splitting:
// with M = m I + N, e^{uM} = e^{um}(cosh(uw) I + sinh(uw)/w N) integrates in
// closed form; near-degenerate denominators fall back to a scaled series on
// the augmented 4x4 block matrix [[M, I], [0, 0]], whose exponential carries
// F in the top-right block.
namespace detail {

// Series exponential of the augmented block [[sM, sI],[0,0]] restricted to
// the top-right 2x2 block. Uses scaling and squaring on the full 4x4.
inline Mat2 integral_expm_series(Mat2 m, double s) {
    std::array<std::array<double, 4>, 4> A{};
    const Mat2 sm = s * m;
    A[0][0] = sm.a; A[0][1] = sm.b; A[1][0] = sm.c; A[1][1] = sm.d;
    A[0][2] = s; A[1][3] = s;

    double norm = 0.0;
    for (auto& row : A) {
        double r = 0.0;
        for (double v : row) r += std::abs(v);
        norm = std::max(norm, r);
    }
    int squarings = 0;
    while (norm > 0.5 && squarings < 60) {
        for (auto& row : A)
            for (double& v : row) v *= 0.5;
        norm *= 0.5;
        ++squarings;
    }

    auto matmul = [](const std::array<std::array<double, 4>, 4>& p,
                     const std::array<std::array<double, 4>, 4>& q) {
        std::array<std::array<double, 4>, 4> r{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                double pik = p[i][k];
                if (pik == 0.0) continue;
                for (int j = 0; j < 4; ++j) r[i][j] += pik * q[k][j];
            }
        return r;
    };

    std::array<std::array<double, 4>, 4> result{}, term{};
    for (int i = 0; i < 4; ++i) result[i][i] = term[i][i] = 1.0;
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, A);
        double inv = 1.0 / k;
        for (auto& row : term)
            for (double& v : row) v *= inv;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) result[i][j] += term[i][j];
    }
    for (int k = 0; k < squarings; ++k) result = matmul(result, result);
    return {result[0][2], result[0][3], result[1][2], result[1][3]};
}

}  // namespace detail

inline Mat2 integral_expm(Mat2 m, double s) {
    double mean = 0.5 * trace(m);
    Mat2 n = m - mean * Mat2::identity();
    double w2 = -det(n);

    // int e^{um} cosh(uw) du and int e^{um} sinh(uw)/w du over [0, s] have
    // denominators m^2 - w^2; route anything close to that degeneracy (and
    // the m ~ 0, w ~ 0 corner) through the series form.
    double scale = 1.0 + std::abs(mean) + std::sqrt(std::abs(w2));
    if (std::abs(mean * mean - w2) < 1e-6 * scale * scale)
        return detail::integral_expm_series(m, s);

    double denom = mean * mean - w2;
    double ems = std::exp(mean * s);
    double ch = cosh_from_sq(w2 * s * s);
    double sh_s = s * sinhc_from_sq(w2 * s * s);  // sinh(ws)/w
    double ic = (ems * (mean * ch - w2 * sh_s) - mean) / denom;  // int e^{um} cosh(uw)
    double is = (ems * (mean * sh_s - ch) + 1.0) / denom;        // int e^{um} sinh(uw)/w
    return ic * Mat2::identity() + is * n;
}

}  // namespace lieobs
