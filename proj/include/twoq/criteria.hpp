#pragma once

// Partial transposition and the determinant form of the positivity test:
// a two-qubit state is inseparable exactly when det of the partial
// transpose is negative, and at most one transposed eigenvalue can dip
// below zero.

#include "twoq/entanglement.hpp"
#include "twoq/states.hpp"

namespace twoq {

/// Transpose the second factor: entry ((a,b),(a',b')) <- ((a,b'),(a',b)).
inline Mat4 partial_transpose_b(const Mat4& m) {
    Mat4 r;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                    r(2 * a + b, 2 * ap + bp) = m(2 * a + bp, 2 * ap + b);
    return r;
}

inline Mat4 partial_transpose_a(const Mat4& m) {
    Mat4 r;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                    r(2 * a + b, 2 * ap + bp) = m(2 * ap + b, 2 * a + bp);
    return r;
}

struct PTSpectrum {
    std::array<double, 4> etas{};   // descending
    double det_pt = 0.0;            // direct cofactor determinant, not an eta product
    int n_pos = 0;
    int n_zero = 0;
    int n_neg = 0;
    double negativity = 0.0;        // sum of |eta| over negative etas
};

inline PTSpectrum pt_spectrum(const DensityMatrix& rho, double zero_tol = 1e-9) {
    const Mat4 pt = partial_transpose_b(rho.mat());
    PTSpectrum out;
    out.etas = hermitian_eig(pt).values;
    out.det_pt = det4(pt).real();
    for (double e : out.etas) {
        if (e > zero_tol)
            ++out.n_pos;
        else if (e < -zero_tol) {
            ++out.n_neg;
            out.negativity += -e;
        } else
            ++out.n_zero;
    }
    return out;
}

/// Transposed-state eigenvalues of a pure state with concurrence C, in the
/// fixed order {C/2, -C/2, (1+y)/2, (1-y)/2} with y = sqrt(1 - C^2).
inline std::array<double, 4> pure_pt_eigen(double C) {
    const double y = std::sqrt(std::max(0.0, (1.0 - C) * (1.0 + C)));
    return {0.5 * C, -0.5 * C, 0.5 * (1.0 + y), 0.5 * (1.0 - y)};
}

enum class Verdict { separable, inseparable, boundary };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::separable: return "separable";
        case Verdict::inseparable: return "inseparable";
        case Verdict::boundary: return "boundary";
    }
    return "unknown";
}

/// The two routes vote: the determinant decides, the concurrence must not
/// contradict it. A clear determinant contradicted by the concurrence is an
/// error by construction, never a silent verdict; a determinant inside the
/// dead band is a boundary call regardless of C, since weakly entangled
/// states push det_pt below double resolution long before C does.
inline Verdict verdict(double det_pt, double C, double eps_sep = 1e-10, double eps_c = 1e-8) {
    if (det_pt < -eps_sep) {
        if (C < eps_c / 10.0) {
            std::ostringstream os;
            os << "verdict: det_pt = " << det_pt << " signals inseparable but C = " << C;
            throw CriteriaDisagreement(os.str());
        }
        return Verdict::inseparable;
    }
    if (det_pt > eps_sep) {
        if (C > eps_c) {
            std::ostringstream os;
            os << "verdict: det_pt = " << det_pt << " signals separable but C = " << C;
            throw CriteriaDisagreement(os.str());
        }
        return Verdict::separable;
    }
    return Verdict::boundary;
}

/// Verdict plus the numbers it was decided on.
struct VerdictEvidence {
    Verdict v = Verdict::boundary;
    double det_pt = 0.0;
    double C = 0.0;
    bool agreement = false;  // sign(det_pt < 0) vs (C > eps_c)
};

/// Convenience form: run both routes on the state itself.
inline VerdictEvidence verdict(const DensityMatrix& rho, double eps_sep = 1e-10,
                               double eps_c = 1e-8) {
    VerdictEvidence ev;
    ev.det_pt = pt_spectrum(rho).det_pt;
    ev.C = concurrence_oracle(rho).C;
    ev.agreement = (ev.det_pt < 0.0) == (ev.C > eps_c);
    ev.v = verdict(ev.det_pt, ev.C, eps_sep, eps_c);
    return ev;
}

/// Loose two-sided agreement used for campaign counting (no exception).
inline bool criteria_agree(double det_pt, double C, double eps_c = 1e-8) {
    return (det_pt < 0.0) == (C > eps_c);
}

} // namespace twoq
