#pragma once

// Concurrence along two independent routes: a dense eigensolver applied to
// rho * rho~ (the oracle), and the radical solution of the characteristic
// quartic in canonical parameters. Entanglement of formation sits on top.

#include "twoq/quartic.hpp"

namespace twoq {

/// rho~ = (sy x sy) conj(rho) (sy x sy)
inline Mat4 spin_flip(const Mat4& rho) {
    const Mat4 yy = kron(sigma_y(), sigma_y());
    return yy * conjugate(rho) * yy;
}

struct ConcurrenceResult {
    double C = 0.0;
    std::array<double, 4> lambdas{};  // descending eigenvalues of rho rho~
    const char* path = "";            // "oracle" or "ferrari"
    const char* branch_note = "";     // ferrari only: "x2" or "x4" carried the max
};

namespace detail {

inline double concurrence_from_sqrts(const std::array<double, 4>& lam) {
    const double s0 = std::sqrt(lam[0]), s1 = std::sqrt(lam[1]), s2 = std::sqrt(lam[2]),
                 s3 = std::sqrt(lam[3]);
    return std::max(0.0, s0 - s1 - s2 - s3);
}

} // namespace detail

/// Concurrence via the general (non-symmetric) eigensolver on rho rho~.
/// rho rho~ is similar to a PSD product, so its spectrum is real
/// nonnegative; roundoff dips below -1e-10 are an error, not noise.
inline ConcurrenceResult concurrence_oracle(const DensityMatrix& rho, double tol = 1e-7) {
    const Mat4 m = rho.mat() * spin_flip(rho.mat());
    std::array<double, 4> lam = general_eig4_real(m, tol);
    for (double& v : lam) {
        if (v < 0.0) {
            if (v < -1e-10) {
                std::ostringstream os;
                os << "concurrence_oracle: eigenvalue " << v << " below -1e-10";
                throw NegativeEigenvalue(os.str());
            }
            v = 0.0;
        }
    }
    ConcurrenceResult out;
    out.lambdas = lam;
    out.C = detail::concurrence_from_sqrts(lam);
    out.path = "oracle";
    return out;
}

/// Concurrence via the radical root formulas; lambda_i = x_i + delta/4.
inline ConcurrenceResult concurrence_ferrari(const CanonicalParams& p, double tol = -1.0) {
    const QuarticSpec f = coeffs_from_canonical(p);
    const DepressedQuartic d = depress(f);
    const FerrariIntermediates fr = ferrari_solve(d, tol);
    const double h = d.delta / 4.0;

    ConcurrenceResult out;
    out.branch_note = fr.x[1] >= fr.x[3] ? "x2" : "x4";
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        double v = fr.x[static_cast<size_t>(i)] + h;
        if (v < 0.0) {
            if (v < -1e-10) {
                std::ostringstream os;
                os << "concurrence_ferrari: eigenvalue " << v << " below -1e-10";
                throw NegativeEigenvalue(os.str());
            }
            v = 0.0;
        }
        lam[static_cast<size_t>(i)] = v;
    }
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    out.lambdas = lam;
    out.C = detail::concurrence_from_sqrts(lam);
    out.path = "ferrari";
    return out;
}

/// The paired-radical concurrence expression: square roots of the quartic
/// roots are combined pairwise, sqrt(A) - sqrt(B) = sqrt(A + B - 2
/// sqrt(AB)), with the pair holding the largest root carrying the minus
/// sign. Returned unclamped; concurrence is its positive part.
inline double concurrence_from_pairs(const DepressedQuartic& d, const FerrariIntermediates& fr) {
    const double h = d.delta / 4.0;
    auto lam = [&](int i) { return std::max(0.0, fr.x[static_cast<size_t>(i)] + h); };
    const double l1 = lam(0), l2 = lam(1), l3 = lam(2), l4 = lam(3);
    auto diff = [](double p, double q) {
        return std::sqrt(std::max(0.0, p + q - 2.0 * std::sqrt(p * q)));
    };
    auto sum = [](double p, double q) {
        return std::sqrt(p + q + 2.0 * std::sqrt(p * q));
    };
    if (fr.x[1] >= fr.x[3]) return diff(l1, l2) - sum(l3, l4);
    return diff(l3, l4) - sum(l1, l2);
}

/// Determinant-based separability scalar in canonical parameters; the
/// partially transposed state has determinant -D.
inline double d_criterion(const CanonicalParams& p) {
    const double eta = 1.0 - p.r - p.s - p.t;
    return p.r * p.s * p.q * p.q + p.r * p.t * p.w * p.w +
           (p.s * p.t - p.u * p.u) * (p.v * p.v - p.r * eta) -
           2.0 * p.r * p.u * p.w * p.q * std::cos(p.tau1 - p.tau2 - p.tau3);
}

/// Entanglement of formation as a function of concurrence:
/// h((1 + sqrt(1 - C^2)) / 2) with h the binary entropy. The complementary
/// probability is evaluated as C^2 / (2 (1 + y)) to avoid cancellation at
/// small C.
inline double eof(double C) {
    if (!(C >= -1e-12 && C <= 1.0 + 1e-12)) {
        std::ostringstream os;
        os << "eof: concurrence " << C << " outside [0, 1]";
        throw OutOfRange(os.str());
    }
    C = std::min(1.0, std::max(0.0, C));
    if (C == 0.0) return 0.0;
    if (C == 1.0) return 1.0;
    const double y = std::sqrt((1.0 - C) * (1.0 + C));
    const double x = 0.5 * (1.0 + y);
    const double omx = C * C / (2.0 * (1.0 + y));
    return -x * std::log2(x) - omx * std::log2(omx);
}

} // namespace twoq
