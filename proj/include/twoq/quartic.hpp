#pragma once

// Characteristic quartic of rho * rho~ for canonical-form states, and a
// closed-form (radical) solver for its depressed form. The solver follows
// the principal-branch construction whose root pairing is
//   x1 = P - sqrt(-b/P + Q)/2,  x2 = P + sqrt(-b/P + Q)/2,
//   x3 = -P - sqrt(b/P + Q)/2,  x4 = -P + sqrt(b/P + Q)/2,
// so x2 >= x1 and x4 >= x3 always hold. Root clusters of multiplicity >= 3
// drive the radical intermediates to 0/0 and get dedicated branches.

#include <cmath>
#include <utility>

#include "twoq/states.hpp"

namespace twoq {

/// Coefficients of det(lambda I - rho rho~) = lambda^4 + f1 lambda^3
/// + f2 lambda^2 + f3 lambda + f4.
struct QuarticSpec {
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    double f4 = 0.0;
};

/// x = lambda - delta/4 eliminates the cubic term; delta = -f1 >= 0.
struct DepressedQuartic {
    double delta = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Everything the radical construction produces, roots included, so each
/// stage can be inspected against its defining relation.
struct FerrariIntermediates {
    double R = 0.0;
    double T = 0.0;
    cplx S = 0.0;
    double P = 0.0;
    double Q = 0.0;
    std::array<double, 4> x{};  // x1, x2, x3, x4 in the pairing above
    const char* branch = "main";  // "main", "triple", "quadruple", "biquadratic"
};

/// Closed-form characteristic coefficients in the canonical parameters.
/// f4 is the squared determinant; f1 is nonpositive for any valid state.
inline QuarticSpec coeffs_from_canonical(const CanonicalParams& p) {
    const double r = p.r, s = p.s, t = p.t;
    const double u = p.u, v = p.v, w = p.w, q = p.q;
    const double eta = 1.0 - r - s - t;
    const double u2 = u * u, v2 = v * v, w2 = w * w, q2 = q * q;

    QuarticSpec f;
    f.f1 = -2.0 * (r * eta + s * t + u2 + v2);

    f.f2 = -r * r * r * r - 2.0 * r * r * r * eta + s * s * t * t + 2.0 * u2 * v2 +
           2.0 * s * t * (2.0 * u2 - v2) + (u2 + v2) * (u2 + v2) +
           r * r * (1.0 + (s - t) * (s - t) - 2.0 * (s + t) + 2.0 * (u2 - 2.0 * v2)) -
           2.0 * r *
               (q2 * s - s * (u2 - 2.0 * v2) + (1.0 - t) * (u2 - 2.0 * v2 - 2.0 * s * t) +
                t * (2.0 * s * s + w2)) +
           4.0 * q * r * w *
               (2.0 * u * std::cos(p.tau1 - p.tau2 - p.tau3) - v * std::cos(p.tau2 - p.tau3));

    f.f3 = 2.0 * (-s * t * u2 * u2 - v2 * v2 * (u2 + r * eta) +
                  r * s * (s * t + r * eta) * (q2 - t * eta) -
                  s * u2 * (r * q2 + t * (s * t - 2.0 * r * eta)) -
                  r * w2 * (2.0 * r * q2 + t * (u2 + v2 - s * t - r * eta)) -
                  v2 * (r * s * q2 + (u2 - r * eta) * (u2 - r * eta) -
                        2.0 * s * t * (u2 + r * eta)) +
                  4.0 * r * u *
                      (t * v * w2 * std::cos(p.tau1 - 2.0 * p.tau2) +
                       q * (s * v * q * std::cos(p.tau1 - 2.0 * p.tau3) -
                            (s * t + v2) * w * std::cos(p.tau1 - p.tau2 - p.tau3))) -
                  2.0 * r * v * w * q * (s * t + u2 - v2 - r * eta) *
                      std::cos(p.tau2 - p.tau3));

    const double det = canonical_det(p);
    f.f4 = det * det;
    return f;
}

/// Depression via the expanded closed form.
inline DepressedQuartic depress(const QuarticSpec& f) {
    DepressedQuartic d;
    d.delta = -f.f1;
    const double dd = d.delta;
    d.a = f.f2 - 0.375 * dd * dd;
    d.b = f.f3 - 0.125 * dd * (dd * dd - 4.0 * f.f2);
    d.c = f.f4 - dd * (3.0 * dd * dd * dd - 16.0 * dd * f.f2 - 64.0 * f.f3) / 256.0;
    return d;
}

/// Same depression as a Taylor shift lambda = x + delta/4, kept as an
/// independent evaluation path for cross-checks.
inline DepressedQuartic depress_shifted(const QuarticSpec& f) {
    DepressedQuartic d;
    d.delta = -f.f1;
    const double h = d.delta / 4.0;
    d.a = f.f2 + 3.0 * f.f1 * h + 6.0 * h * h;
    d.b = f.f3 + 2.0 * f.f2 * h + 3.0 * f.f1 * h * h + 4.0 * h * h * h;
    d.c = f.f4 + f.f3 * h + f.f2 * h * h + f.f1 * h * h * h + h * h * h * h;
    return d;
}

inline double ferrari_auto_tol(const DepressedQuartic& d) {
    return 1e-8 * (1.0 + d.delta + std::abs(d.a) + std::cbrt(std::abs(d.b)) +
                   std::pow(std::abs(d.c), 0.25));
}

namespace detail {

inline double depressed_eval(const DepressedQuartic& d, double x) {
    return ((x * x + d.a) * x + d.b) * x + d.c;
}

// One guarded Newton step; kept only when the residual drops.
inline double polish_root(const DepressedQuartic& d, double x) {
    const double px = depressed_eval(d, x);
    const double dpx = (4.0 * x * x + 2.0 * d.a) * x + d.b;
    if (std::abs(dpx) < 1e-300) return x;
    const double xn = x - px / dpx;
    return std::abs(depressed_eval(d, xn)) < std::abs(px) ? xn : x;
}

} // namespace detail

/// Roots of x^4 + a x^2 + b x + c by radicals, principal branches
/// throughout. Intended for quartics with an all-real root set; imaginary
/// parts that fail to cancel raise ComplexResidual.
inline FerrariIntermediates ferrari_solve(const DepressedQuartic& d, double tol = -1.0) {
    if (tol <= 0.0) tol = ferrari_auto_tol(d);
    const double a = d.a, b = d.b, c = d.c;

    FerrariIntermediates out;

    // Coefficient magnitude expressed as a root scale.
    const double m = std::max(
        {std::sqrt(std::abs(a)), std::cbrt(std::abs(b)), std::pow(std::abs(c), 0.25)});

    if (m <= 1e-12 * (1.0 + d.delta)) {
        out.x = {0.0, 0.0, 0.0, 0.0};
        out.branch = "quadruple";
        return out;
    }

    const double R = a * a + 12.0 * c;
    const double T = 2.0 * a * a * a + 27.0 * b * b - 72.0 * a * c;
    const cplx S = T + std::sqrt(cplx(T * T - 4.0 * R * R * R, 0.0));
    out.R = R;
    out.T = T;
    out.S = S;

    const double m2 = m * m;
    const double m6 = m2 * m2 * m2;
    if (std::abs(S) <= 1e-12 * m6) {
        // Triple cluster {g, g, g, -3g}: R and T vanish identically there,
        // so g is recovered from b = 8 g^3 and checked against a and c.
        // One Newton step tightens cbrt's last ulp, which otherwise leaks
        // into the root spread.
        double g = std::cbrt(b) / 2.0;
        const double dslope = 24.0 * g * g;
        if (dslope > 1e-300) g -= (8.0 * g * g * g - b) / dslope;
        if (std::abs(a + 6.0 * g * g) > 1e-6 * m2 ||
            std::abs(c + 3.0 * g * g * g * g) > 1e-6 * m2 * m2) {
            std::ostringstream os;
            os << "ferrari_solve: radical intermediates vanished but coefficients do not "
                  "match a triple cluster (a residual "
               << std::abs(a + 6.0 * g * g) << ", c residual "
               << std::abs(c + 3.0 * g * g * g * g) << ")";
            throw DegeneratePivot(os.str());
        }
        out.P = std::abs(g);
        out.Q = 8.0 * g * g;
        if (g >= 0.0)
            out.x = {g, g, -3.0 * g, g};
        else
            out.x = {g, -3.0 * g, g, g};
        out.branch = "triple";
        return out;
    }

    constexpr double cbrt2 = 1.2599210498948731647672106072782;  // 2^(1/3)
    constexpr double cbrt4 = 1.5874010519681994747517056392723;  // 4^(1/3)
    const cplx s3 = std::pow(S, 1.0 / 3.0);

    const cplx inner_p = -4.0 * a + 2.0 * cbrt2 * R / s3 + cbrt4 * s3;
    if (std::abs(inner_p.imag()) > tol * (1.0 + std::abs(inner_p))) {
        std::ostringstream os;
        os << "ferrari_solve: imaginary residual " << inner_p.imag()
           << " in the P radicand failed to cancel";
        throw ComplexResidual(os.str());
    }
    if (inner_p.real() < -tol * (1.0 + std::abs(a))) {
        std::ostringstream os;
        os << "ferrari_solve: P radicand " << inner_p.real() << " negative";
        throw ComplexResidual(os.str());
    }
    constexpr double inv_2sqrt6 = 0.20412414523193150818310700622549;  // 1/(2 sqrt 6)
    const double P = inv_2sqrt6 * std::sqrt(std::max(0.0, inner_p.real()));

    const cplx inner_q = (-4.0 * a - cbrt2 * R / s3 - s3 / cbrt2) / 3.0;
    if (std::abs(inner_q.imag()) > tol * (1.0 + std::abs(inner_q))) {
        std::ostringstream os;
        os << "ferrari_solve: imaginary residual " << inner_q.imag()
           << " in Q failed to cancel";
        throw ComplexResidual(os.str());
    }
    const double Q = inner_q.real();
    out.P = P;
    out.Q = Q;

    if (P < 1e-9 * (1.0 + std::abs(a) + d.delta)) {
        if (std::abs(b) > 1e-12 * std::pow(1.0 + std::abs(a), 1.5)) {
            std::ostringstream os;
            os << "ferrari_solve: pivot P = " << P << " too small against b = " << b;
            throw DegeneratePivot(os.str());
        }
        // Symmetric root set: x^4 + a x^2 + c, quadratic in x^2.
        const double disc = a * a - 4.0 * c;
        if (disc < -tol * (1.0 + a * a)) {
            std::ostringstream os;
            os << "ferrari_solve: biquadratic discriminant " << disc << " negative";
            throw ComplexResidual(os.str());
        }
        const double sq = std::sqrt(std::max(0.0, disc));
        const double zp = std::max(0.0, 0.5 * (-a + sq));
        const double zm = std::max(0.0, 0.5 * (-a - sq));
        const double xp = std::sqrt(zp);
        const double xm = std::sqrt(zm);
        out.x = {-xp, xp, -xm, xm};
        out.branch = "biquadratic";
        for (double& r : out.x) r = detail::polish_root(d, r);
        if (out.x[1] < out.x[0]) std::swap(out.x[0], out.x[1]);
        if (out.x[3] < out.x[2]) std::swap(out.x[2], out.x[3]);
        return out;
    }

    auto pair_offset = [&](double arg, const char* side) {
        if (arg < -tol * (1.0 + std::abs(Q) + std::abs(b) / P)) {
            std::ostringstream os;
            os << "ferrari_solve: " << side << " pair discriminant " << arg << " negative";
            throw ComplexResidual(os.str());
        }
        return 0.5 * std::sqrt(std::max(0.0, arg));
    };
    const double off12 = pair_offset(-b / P + Q, "x1/x2");
    const double off34 = pair_offset(b / P + Q, "x3/x4");
    out.x = {P - off12, P + off12, -P - off34, -P + off34};
    for (double& r : out.x) r = detail::polish_root(d, r);
    // polish can cross a near-degenerate pair; restore x2 >= x1, x4 >= x3
    if (out.x[1] < out.x[0]) std::swap(out.x[0], out.x[1]);
    if (out.x[3] < out.x[2]) std::swap(out.x[2], out.x[3]);
    return out;
}

/// Absolute residuals of the four symmetric-function relations
/// {sum xi, sum xi xj - a, sum xi xj xk + b, prod xi - c}.
inline std::array<double, 4> vieta_check(const DepressedQuartic& d,
                                         const FerrariIntermediates& f) {
    const auto& x = f.x;
    const double e1 = x[0] + x[1] + x[2] + x[3];
    const double e2 = x[0] * x[1] + x[0] * x[2] + x[0] * x[3] + x[1] * x[2] + x[1] * x[3] +
                      x[2] * x[3];
    const double e3 = x[0] * x[1] * x[2] + x[0] * x[1] * x[3] + x[0] * x[2] * x[3] +
                      x[1] * x[2] * x[3];
    const double e4 = x[0] * x[1] * x[2] * x[3];
    return {std::abs(e1), std::abs(e2 - d.a), std::abs(e3 + d.b), std::abs(e4 - d.c)};
}

/// Largest vieta_check entry over the coefficient scale 1 + |a| + |b| + |c|.
inline double vieta_residual(const DepressedQuartic& d, const FerrariIntermediates& f) {
    const auto r = vieta_check(d, f);
    const double scale = 1.0 + std::abs(d.a) + std::abs(d.b) + std::abs(d.c);
    return std::max({r[0], r[1], r[2], r[3]}) / scale;
}

/// Both sides of the closed-form identity
/// (delta/4)^4 + a (delta/4)^2 - b (delta/4) + c = det(rho)^2,
/// evaluated independently: the left from the depressed coefficients, the
/// right from the cofactor determinant of the assembled matrix.
inline std::pair<double, double> det_identity_check(const CanonicalParams& p) {
    const DepressedQuartic d = depress(coeffs_from_canonical(p));
    const double h = d.delta / 4.0;
    const double lhs = ((h * h + d.a) * h - d.b) * h + d.c;
    const double det = det4(canonical_matrix(p)).real();
    return {lhs, det * det};
}

} // namespace twoq
