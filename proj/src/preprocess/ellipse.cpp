#include <array>
#include <cmath>
#include <vector>

#include "coatflow/core/error.hpp"
#include "coatflow/preprocess/preprocess.hpp"

namespace coatflow {

bool Ellipse::contains(double x, double y) const {
    double c = std::cos(theta), s = std::sin(theta);
    double u = (x - cx) * c + (y - cy) * s;
    double v = -(x - cx) * s + (y - cy) * c;
    return (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
}

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

Mat3 mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            r[i][j] = s;
        }
    return r;
}

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 inverse3(const Mat3& m, double det) {
    Mat3 r;
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return r;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

// Real roots of x^3 + a x^2 + b x + c = 0.
std::vector<double> cubic_real_roots(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    std::vector<double> roots;
    if (disc > 1e-30) {
        double sq = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + sq);
        double v = std::cbrt(-q / 2.0 - sq);
        roots.push_back(u + v + shift);
    } else if (std::abs(p) < 1e-30) {
        roots.push_back(shift); // triple root
    } else {
        double r = std::sqrt(-p * p * p / 27.0);
        double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
        double m = 2.0 * std::sqrt(-p / 3.0);
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos((phi + 2.0 * 3.14159265358979323846 * k) / 3.0) + shift);
    }
    return roots;
}

// Converts conic Ax^2 + Bxy + Cy^2 + Dx + Ey + F = 0 to center/axes/angle.
Ellipse conic_to_ellipse(double A, double B, double C, double D, double E, double F) {
    double det = 4.0 * A * C - B * B;
    if (det <= 0.0) throw NumericError("fit_ellipse: conic is not an ellipse");
    double cx = (B * E - 2.0 * C * D) / det;
    double cy = (B * D - 2.0 * A * E) / det;
    double mu = A * cx * cx + B * cx * cy + C * cy * cy + D * cx + E * cy + F;
    // Normalize so the quadratic form is positive definite.
    if (A + C < 0.0) {
        A = -A; B = -B; C = -C; mu = -mu;
    }
    if (!(-mu > 0.0)) throw NumericError("fit_ellipse: degenerate conic");
    double half = std::sqrt((A - C) * (A - C) / 4.0 + B * B / 4.0);
    double lmin = (A + C) / 2.0 - half;
    double lmax = (A + C) / 2.0 + half;
    if (lmin <= 0.0) throw NumericError("fit_ellipse: conic is not an ellipse");
    double a = std::sqrt(-mu / lmin);
    double b = std::sqrt(-mu / lmax);
    double vx, vy; // eigenvector of the smaller eigenvalue = major axis
    if (std::abs(B) > 1e-12 * (std::abs(A) + std::abs(C))) {
        vx = B / 2.0;
        vy = lmin - A;
    } else if (A <= C) {
        vx = 1.0;
        vy = 0.0;
    } else {
        vx = 0.0;
        vy = 1.0;
    }
    double theta = std::atan2(vy, vx);
    const double pi = 3.14159265358979323846;
    while (theta < 0.0) theta += pi;
    while (theta >= pi) theta -= pi;
    return {cx, cy, a, b, theta};
}

} // namespace

Ellipse fit_ellipse(const std::vector<PointD>& points) {
    const std::size_t n = points.size();
    if (n < 5) throw InvalidArgument("fit_ellipse: need at least 5 points");

    // Condition the data: center and scale to O(1).
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double scale = 0.0;
    for (const auto& p : points) scale += std::abs(p.x - mx) + std::abs(p.y - my);
    scale /= (2.0 * static_cast<double>(n));
    if (scale < 1e-12) throw NumericError("fit_ellipse: degenerate point set");

    // Scatter matrices of the quadratic (D1) and linear (D2) monomials.
    Mat3 s1{}, s2{}, s3{};
    for (const auto& p : points) {
        double x = (p.x - mx) / scale;
        double y = (p.y - my) / scale;
        double q[3] = {x * x, x * y, y * y};
        double l[3] = {x, y, 1.0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                s1[i][j] += q[i] * q[j];
                s2[i][j] += q[i] * l[j];
                s3[i][j] += l[i] * l[j];
            }
    }
    double d3 = det3(s3);
    if (std::abs(d3) < 1e-9 * static_cast<double>(n) * static_cast<double>(n) *
                           static_cast<double>(n))
        throw NumericError("fit_ellipse: degenerate point set (collinear)");

    // T = -inv(S3) * S2^T ; M = C^-1 (S1 + S2 T)
    Mat3 s3inv = inverse3(s3, d3);
    Mat3 s2t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s2t[i][j] = s2[j][i];
    Mat3 t = mul(s3inv, s2t);
    for (auto& row : t)
        for (auto& v : row) v = -v;
    Mat3 m0 = mul(s2, t);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m0[i][j] += s1[i][j];
    Mat3 m;
    for (int j = 0; j < 3; ++j) {
        m[0][j] = m0[2][j] / 2.0;
        m[1][j] = -m0[1][j];
        m[2][j] = m0[0][j] / 2.0;
    }

    // Eigenvector of M satisfying the ellipse constraint 4ac - b^2 > 0.
    double tr = m[0][0] + m[1][1] + m[2][2];
    double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    auto eigs = cubic_real_roots(-tr, m2, -det3(m));

    Vec3 best{};
    bool found = false;
    for (double lam : eigs) {
        Vec3 r0 = {m[0][0] - lam, m[0][1], m[0][2]};
        Vec3 r1 = {m[1][0], m[1][1] - lam, m[1][2]};
        Vec3 r2 = {m[2][0], m[2][1], m[2][2] - lam};
        Vec3 c01 = cross(r0, r1), c02 = cross(r0, r2), c12 = cross(r1, r2);
        Vec3 v = c01;
        if (norm2(c02) > norm2(v)) v = c02;
        if (norm2(c12) > norm2(v)) v = c12;
        if (norm2(v) < 1e-24) continue;
        if (4.0 * v[0] * v[2] - v[1] * v[1] > 0.0) {
            best = v;
            found = true;
            break;
        }
    }
    if (!found) throw NumericError("fit_ellipse: conic is not an ellipse");

    Vec3 a2 = {t[0][0] * best[0] + t[0][1] * best[1] + t[0][2] * best[2],
               t[1][0] * best[0] + t[1][1] * best[1] + t[1][2] * best[2],
               t[2][0] * best[0] + t[2][1] * best[1] + t[2][2] * best[2]};

    // Undo the conditioning transform on the conic coefficients.
    double A = best[0], B = best[1], C = best[2];
    double D = a2[0], E = a2[1], F = a2[2];
    double D2 = -2.0 * A * mx - B * my + D * scale;
    double E2 = -B * mx - 2.0 * C * my + E * scale;
    double F2 = A * mx * mx + B * mx * my + C * my * my - D * scale * mx - E * scale * my +
                F * scale * scale;
    return conic_to_ellipse(A, B, C, D2, E2, F2);
}

Ellipse fit_ellipse(const std::vector<PointI>& points) {
    std::vector<PointD> pd;
    pd.reserve(points.size());
    for (auto p : points) pd.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    return fit_ellipse(pd);
}

} // namespace coatflow
