#pragma once

// Two-qubit state types: validated density matrices, the pure-state and
// canonical-form parameterizations, local-unitary canonicalization, and
// the seeded random ensembles used by the verification harness.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "twoq/matcore.hpp"

namespace twoq {

inline double wrap_angle(double x) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    if (y >= two_pi) y = 0.0;
    return y;
}

/// Validated 4x4 density matrix in the product basis |00>,|01>,|10>,|11>.
/// Construction goes through validate(), which symmetrizes and enforces
/// unit trace and positive semidefiniteness.
class DensityMatrix {
public:
    static DensityMatrix validate(const Mat4& m) {
        if (!all_finite(m)) throw InvalidParams("density matrix: non-finite entry");
        const double nrm = std::max(fro_norm(m), 1e-300);
        const double herm = hermiticity_residual(m);
        if (herm > 1e-12 * nrm) {
            std::ostringstream os;
            os << "density matrix: hermiticity residual " << herm << " exceeds 1e-12 * " << nrm;
            throw NotHermitian(os.str());
        }
        Mat4 sym = symmetrize(m);
        const cplx tr = trace(sym);
        if (std::abs(tr.real() - 1.0) > 1e-12 || std::abs(tr.imag()) > 1e-12) {
            std::ostringstream os;
            os << "density matrix: trace " << tr.real() << " deviates from 1 by " << std::abs(tr.real() - 1.0);
            throw TraceNotOne(os.str());
        }
        const auto spec = hermitian_eig(sym);
        if (spec.values[3] < -1e-10) {
            std::ostringstream os;
            os << "density matrix: eigenvalue " << spec.values[3] << " below -1e-10";
            throw NotPSD(os.str());
        }
        return DensityMatrix(sym);
    }

    const Mat4& mat() const { return m_; }

private:
    explicit DensityMatrix(const Mat4& m) : m_(m) {}
    Mat4 m_;
};

/// Pure-state parameters: ket (a, b e^{i t1}, c e^{i t2}, d e^{i t3}) with
/// a, b, c >= 0, d = sqrt(1 - a^2 - b^2 - c^2), global phase fixed so the
/// first non-negligible amplitude is real positive.
struct PureParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;
};

/// Parameters of the canonical form reachable by local unitaries: diagonal
/// (r, s, t, 1-r-s-t), zeros at (0,1) and (0,2), entry (1,2) real v >= 0,
/// and phased magnitudes u, w, q at (0,3), (1,3), (2,3).
struct CanonicalParams {
    double r = 0.0;
    double s = 0.0;
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    double q = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double tau3 = 0.0;
};

struct ConvexComboParams {
    double p = 0.0;   // weight of |00><00|
    PureParams psi;   // entangled pure component
};

struct LocalUnitary {
    Mat2 ua = Mat2::identity();
    Mat2 ub = Mat2::identity();
};

inline void check_pure_params(const PureParams& p) {
    if (!(p.a >= 0.0 && p.b >= 0.0 && p.c >= 0.0))
        throw InvalidParams("pure params: negative amplitude");
    const double ssum = p.a * p.a + p.b * p.b + p.c * p.c;
    if (ssum > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "pure params: a^2+b^2+c^2 = " << ssum << " exceeds 1";
        throw InvalidParams(os.str());
    }
}

inline Ket4 ket_from_params(const PureParams& p) {
    check_pure_params(p);
    const double d2 = std::max(0.0, 1.0 - p.a * p.a - p.b * p.b - p.c * p.c);
    const double d = std::sqrt(d2);
    return {cplx(p.a, 0.0), p.b * std::polar(1.0, p.theta1), p.c * std::polar(1.0, p.theta2),
            d * std::polar(1.0, p.theta3)};
}

/// Inverse of ket_from_params up to global phase: the reference phase comes
/// from the first amplitude with modulus above 1e-12.
inline PureParams pure_params_from_ket(const Ket4& k) {
    double phi0 = 0.0;
    for (const cplx& z : k) {
        if (std::abs(z) > 1e-12) {
            phi0 = std::arg(z);
            break;
        }
    }
    auto rel = [&](const cplx& z) { return std::abs(z) > 0.0 ? wrap_angle(std::arg(z) - phi0) : 0.0; };
    PureParams p;
    p.a = std::abs(k[0]);
    p.b = std::abs(k[1]);
    p.c = std::abs(k[2]);
    p.theta1 = rel(k[1]);
    p.theta2 = rel(k[2]);
    p.theta3 = rel(k[3]);
    return p;
}

/// Concurrence of the parameterized pure state,
/// C = 2 sqrt(a^2 d^2 + b^2 c^2 - 2 a b c d cos(t1 + t2 - t3)).
inline double pure_concurrence(const PureParams& p) {
    check_pure_params(p);
    const double d2 = std::max(0.0, 1.0 - p.a * p.a - p.b * p.b - p.c * p.c);
    const double d = std::sqrt(d2);
    const double bracket = p.a * p.a * d2 + p.b * p.b * p.c * p.c -
                           2.0 * p.a * p.b * p.c * d * std::cos(p.theta1 + p.theta2 - p.theta3);
    if (bracket < -1e-14) {
        std::ostringstream os;
        os << "pure_concurrence: radicand " << bracket << " below -1e-14";
        throw NegativeRadicand(os.str());
    }
    return std::min(1.0, 2.0 * std::sqrt(std::max(0.0, bracket)));
}

/// Reduced state of qubit A, rho_A = tr_B |k><k|.
inline Mat2 reduced_a(const Ket4& k) {
    Mat2 r;
    r(0, 0) = std::norm(k[0]) + std::norm(k[1]);
    r(0, 1) = k[0] * std::conj(k[2]) + k[1] * std::conj(k[3]);
    r(1, 0) = std::conj(r(0, 1));
    r(1, 1) = std::norm(k[2]) + std::norm(k[3]);
    return r;
}

inline void check_canonical_params(const CanonicalParams& p) {
    auto nonneg = [](double x, const char* name) {
        if (x < -1e-12) {
            std::ostringstream os;
            os << "canonical params: " << name << " = " << x << " negative";
            throw InvalidParams(os.str());
        }
    };
    nonneg(p.r, "r");
    nonneg(p.s, "s");
    nonneg(p.t, "t");
    nonneg(p.u, "u");
    nonneg(p.v, "v");
    nonneg(p.w, "w");
    nonneg(p.q, "q");
    if (p.r + p.s + p.t > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "canonical params: r+s+t = " << p.r + p.s + p.t << " exceeds 1";
        throw InvalidParams(os.str());
    }
}

/// The canonical matrix itself, without the PSD gate.
inline Mat4 canonical_matrix(const CanonicalParams& p) {
    Mat4 m;
    m(0, 0) = p.r;
    m(1, 1) = p.s;
    m(2, 2) = p.t;
    m(3, 3) = 1.0 - p.r - p.s - p.t;
    m(0, 3) = p.u * std::polar(1.0, p.tau1);
    m(3, 0) = std::conj(m(0, 3));
    m(1, 2) = p.v;
    m(2, 1) = p.v;
    m(1, 3) = p.w * std::polar(1.0, p.tau2);
    m(3, 1) = std::conj(m(1, 3));
    m(2, 3) = p.q * std::polar(1.0, p.tau3);
    m(3, 2) = std::conj(m(2, 3));
    return m;
}

/// Assemble and gate: the sign constraints on the parameters do not imply
/// positivity, so the spectrum is checked explicitly.
inline DensityMatrix assemble_canonical(const CanonicalParams& p) {
    check_canonical_params(p);
    const Mat4 m = canonical_matrix(p);
    const auto spec = hermitian_eig(m);
    if (spec.values[3] < -1e-10) {
        std::ostringstream os;
        os << "assemble_canonical: eigenvalue " << spec.values[3] << " below -1e-10";
        throw NotPSD(os.str());
    }
    return DensityMatrix::validate(m);
}

/// The canonical state conjugated by a product unitary.
inline DensityMatrix assemble_canonical(const CanonicalParams& p, const LocalUnitary& lu) {
    const Mat4 big = kron(lu.ua, lu.ub);
    return DensityMatrix::validate(big * assemble_canonical(p).mat() * adjoint(big));
}

/// Closed-form determinant of the canonical matrix.
inline double canonical_det(const CanonicalParams& p) {
    const double eta = 1.0 - p.r - p.s - p.t;
    return -p.r * p.s * p.q * p.q - p.r * p.t * p.w * p.w +
           (p.r * eta - p.u * p.u) * (p.s * p.t - p.v * p.v) +
           2.0 * p.r * p.v * p.w * p.q * std::cos(p.tau2 - p.tau3);
}

struct CanonicalizeResult {
    CanonicalParams params;
    LocalUnitary lu;
    double residual = 0.0;
};

namespace detail {

// u with u X u^dagger diagonal for X = [[alpha, beta], [conj(beta), gamma]];
// first column leads with the real positive cosine.
inline Mat2 diagonalizer(double alpha, cplx beta, double gamma) {
    const auto rot = make_jacobi_rotation(alpha, beta, gamma);
    Mat2 u;
    u(0, 0) = rot.c;
    u(0, 1) = -rot.s;
    u(1, 0) = std::conj(rot.s);
    u(1, 1) = rot.c;
    return u;
}

inline void apply_on_a(Mat4& w, const Mat2& u) {
    const Mat4 k = kron(u, Mat2::identity());
    w = k * w * adjoint(k);
}

inline void apply_on_b(Mat4& w, const Mat2& u) {
    const Mat4 k = kron(Mat2::identity(), u);
    w = k * w * adjoint(k);
}

// Top eigenvector of [[m00, m01], [conj(m01), m11]], phase-fixed so the
// largest-modulus component is real positive.
inline std::array<cplx, 2> top_eigvec2(double m00, cplx m01, double m11) {
    const double rad = std::sqrt(0.25 * (m00 - m11) * (m00 - m11) + std::norm(m01));
    const double mu = 0.5 * (m00 + m11) + rad;
    std::array<cplx, 2> v1{m01, mu - m00};
    std::array<cplx, 2> v2{mu - m11, std::conj(m01)};
    const double n1 = std::sqrt(std::norm(v1[0]) + std::norm(v1[1]));
    const double n2 = std::sqrt(std::norm(v2[0]) + std::norm(v2[1]));
    std::array<cplx, 2> v{1.0, 0.0};
    if (std::max(n1, n2) > 1e-150) {
        v = n1 >= n2 ? v1 : v2;
        const double n = std::max(n1, n2);
        v[0] /= n;
        v[1] /= n;
    } else if (m11 > m00) {
        v = {0.0, 1.0};
    }
    const int big = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
    if (std::abs(v[big]) > 0.0) {
        const cplx ph = std::conj(v[big]) / std::abs(v[big]);
        v[0] *= ph;
        v[1] *= ph;
    }
    return v;
}

// rho compressed against beta on the B side: M(a,a') = <a beta|rho|a' beta>
inline void compress_b(const Mat4& rho, const std::array<cplx, 2>& be, double& m00, cplx& m01,
                       double& m11) {
    cplx d0 = 0.0, d1 = 0.0, off = 0.0;
    for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) {
            const cplx f = std::conj(be[static_cast<size_t>(b)]) * be[static_cast<size_t>(bp)];
            d0 += f * rho(b, bp);
            d1 += f * rho(2 + b, 2 + bp);
            off += f * rho(b, 2 + bp);
        }
    m00 = d0.real();
    m01 = off;
    m11 = d1.real();
}

inline void compress_a(const Mat4& rho, const std::array<cplx, 2>& al, double& m00, cplx& m01,
                       double& m11) {
    cplx d0 = 0.0, d1 = 0.0, off = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) {
            const cplx f = std::conj(al[static_cast<size_t>(a)]) * al[static_cast<size_t>(ap)];
            d0 += f * rho(2 * a, 2 * ap);
            d1 += f * rho(2 * a + 1, 2 * ap + 1);
            off += f * rho(2 * a, 2 * ap + 1);
        }
    m00 = d0.real();
    m01 = off;
    m11 = d1.real();
}

// Unitary whose first row is v^dagger (so it maps v to e0).
inline Mat2 row_unitary(const std::array<cplx, 2>& v) {
    Mat2 u;
    u(0, 0) = std::conj(v[0]);
    u(0, 1) = std::conj(v[1]);
    u(1, 0) = -v[1];
    u(1, 1) = v[0];
    return u;
}

} // namespace detail

/// Drive the state to the canonical form. Primary route: alternating SU(2)
/// rotations, a B-side rotation diagonalizing the upper-left 2x2 block
/// (zeroing entry (0,1)) and an A-side rotation diagonalizing the block on
/// rows/cols {0,2} (zeroing (0,2)), swept until both stay zero. The two
/// targets interact through the rest of the matrix and the alternation has
/// no monotone quantity, so it can cycle; when it does, a fallback
/// maximizes <alpha beta|rho|alpha beta> over product vectors by
/// alternating exact 2x2 eigenvector steps. At any critical point of that
/// overlap both target entries vanish, and each half-step is an exact
/// maximization, so the ascent cannot cycle. A final phase twist on A
/// makes entry (1,2) real nonnegative.
inline CanonicalizeResult canonicalize(const DensityMatrix& rho, double tol = 1e-9) {
    Mat4 w = rho.mat();
    Mat2 ua = Mat2::identity();
    Mat2 ub = Mat2::identity();
    const double scale = std::max(max_abs(w), 1e-300);
    const double floor = 1e-15 * scale;

    const auto alternate = [&]() {
        constexpr int max_sweeps = 64;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            if (std::abs(w(0, 1)) <= floor && std::abs(w(0, 2)) <= floor) break;
            if (std::abs(w(0, 1)) > floor) {
                const Mat2 u = detail::diagonalizer(w(0, 0).real(), w(0, 1), w(1, 1).real());
                detail::apply_on_b(w, u);
                ub = u * ub;
            }
            if (std::abs(w(0, 2)) > floor) {
                const Mat2 u = detail::diagonalizer(w(0, 0).real(), w(0, 2), w(2, 2).real());
                detail::apply_on_a(w, u);
                ua = u * ua;
            }
        }
    };
    alternate();

    if (std::abs(w(0, 1)) > floor || std::abs(w(0, 2)) > floor) {
        std::array<cplx, 2> al{1.0, 0.0};
        std::array<cplx, 2> be{1.0, 0.0};
        double m00, m11;
        cplx m01;
        for (int it = 0; it < 512; ++it) {
            detail::compress_b(rho.mat(), be, m00, m01, m11);
            al = detail::top_eigvec2(m00, m01, m11);
            detail::compress_a(rho.mat(), al, m00, m01, m11);
            be = detail::top_eigvec2(m00, m01, m11);
            // residuals of the two target entries in the rotated frame;
            // <perp| with perp = (-conj(x1), conj(x0)) contributes
            // coefficients (-x1, x0) against M x
            detail::compress_b(rho.mat(), be, m00, m01, m11);
            const cplx r02 = -al[1] * (m00 * al[0] + m01 * al[1]) +
                             al[0] * (std::conj(m01) * al[0] + m11 * al[1]);
            detail::compress_a(rho.mat(), al, m00, m01, m11);
            const cplx r01 = -be[1] * (m00 * be[0] + m01 * be[1]) +
                             be[0] * (std::conj(m01) * be[0] + m11 * be[1]);
            if (std::max(std::abs(r01), std::abs(r02)) <= floor) break;
        }
        ua = detail::row_unitary(al);
        ub = detail::row_unitary(be);
        const Mat4 k = kron(ua, ub);
        w = k * rho.mat() * adjoint(k);
        // the ascent's tail is linear; one more alternation pass from
        // inside the basin contracts the leftover to roundoff
        alternate();
    }

    if (std::abs(w(1, 2)) > floor) {
        Mat2 ph = Mat2::identity();
        ph(1, 1) = std::polar(1.0, std::arg(w(1, 2)));
        detail::apply_on_a(w, ph);
        ua = ph * ua;
    }

    CanonicalParams p;
    p.r = std::max(0.0, w(0, 0).real());
    p.s = std::max(0.0, w(1, 1).real());
    p.t = std::max(0.0, w(2, 2).real());
    p.u = std::abs(w(0, 3));
    p.tau1 = p.u > floor ? wrap_angle(std::arg(w(0, 3))) : 0.0;
    p.v = std::max(0.0, w(1, 2).real());
    p.w = std::abs(w(1, 3));
    p.tau2 = p.w > floor ? wrap_angle(std::arg(w(1, 3))) : 0.0;
    p.q = std::abs(w(2, 3));
    p.tau3 = p.q > floor ? wrap_angle(std::arg(w(2, 3))) : 0.0;
    if (p.r + p.s + p.t > 1.0) {
        const double shrink = 1.0 / (p.r + p.s + p.t);
        if (shrink > 1.0 - 1e-11) {
            p.r *= shrink;
            p.s *= shrink;
            p.t *= shrink;
        }
    }

    const Mat4 target = canonical_matrix(p);
    const Mat4 fresh = kron(ua, ub) * rho.mat() * adjoint(kron(ua, ub));
    const double residual = max_abs(fresh - target);
    if (!(residual <= tol)) {
        std::ostringstream os;
        os << "canonicalize: residual " << residual << " exceeds tol " << tol;
        throw CanonicalizationResidual(os.str());
    }

    CanonicalizeResult out;
    out.params = p;
    out.lu = LocalUnitary{ua, ub};
    out.residual = residual;
    return out;
}

/// rho = p |00><00| + (1-p) |psi><psi|
inline DensityMatrix convex_combo(const ConvexComboParams& cp) {
    if (!(cp.p >= 0.0 && cp.p <= 1.0)) throw InvalidParams("convex combo: p outside [0,1]");
    const Ket4 psi = ket_from_params(cp.psi);
    Mat4 m = outer(psi);
    for (size_t i = 0; i < 16; ++i) m.e[i] *= (1.0 - cp.p);
    m(0, 0) += cp.p;
    return DensityMatrix::validate(m);
}

/// Scalars X, Y with spec(rho rho~) = {X + sqrt(Y)/2, X - sqrt(Y)/2, 0, 0}
/// for the convex family above.
inline std::pair<double, double> convex_xy(const ConvexComboParams& cp) {
    const double C = pure_concurrence(cp.psi);
    const double d2 =
        std::max(0.0, 1.0 - cp.psi.a * cp.psi.a - cp.psi.b * cp.psi.b - cp.psi.c * cp.psi.c);
    const double om = 1.0 - cp.p;
    const double X = 0.5 * om * (om * C * C + 2.0 * cp.p * d2);
    const double Y = om * om * om * C * C * (om * C * C + 4.0 * cp.p * d2);
    return {X, Y};
}

// ----- seeded ensembles -------------------------------------------------

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for draw `index` of a campaign with master seed `seed`; every draw
/// gets an independent engine so parallel evaluation order cannot matter.
inline uint64_t draw_seed(uint64_t seed, uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index * 0x9E3779B97F4A7C15ull + 0x51ED2701ull));
}

/// Deterministic per-draw generator. Gaussians come from an explicit
/// Box-Muller transform so the byte stream is fixed by the seed alone,
/// independent of standard-library distribution internals.
class DrawRng {
public:
    explicit DrawRng(uint64_t s) : eng_(s) {}

    double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(two_pi * u2);
        have_ = true;
        return r * std::cos(two_pi * u2);
    }

    cplx cnormal() { return {normal(), normal()}; }

private:
    std::mt19937_64 eng_;
    bool have_ = false;
    double cached_ = 0.0;
};

enum class Ensemble {
    ginibre_rank_1,
    ginibre_rank_2,
    ginibre_rank_3,
    ginibre_rank_4,
    haar_pure,
    canonical_uniform,
    convex_combo,
    x_state,
};

inline Ensemble parse_ensemble(const std::string& name) {
    if (name == "ginibre-rank-1") return Ensemble::ginibre_rank_1;
    if (name == "ginibre-rank-2") return Ensemble::ginibre_rank_2;
    if (name == "ginibre-rank-3") return Ensemble::ginibre_rank_3;
    if (name == "ginibre-rank-4") return Ensemble::ginibre_rank_4;
    if (name == "haar-pure") return Ensemble::haar_pure;
    if (name == "canonical-uniform") return Ensemble::canonical_uniform;
    if (name == "convex-combo") return Ensemble::convex_combo;
    if (name == "x-state") return Ensemble::x_state;
    throw InvalidParams("unknown ensemble: " + name);
}

inline std::string ensemble_name(Ensemble e) {
    switch (e) {
        case Ensemble::ginibre_rank_1: return "ginibre-rank-1";
        case Ensemble::ginibre_rank_2: return "ginibre-rank-2";
        case Ensemble::ginibre_rank_3: return "ginibre-rank-3";
        case Ensemble::ginibre_rank_4: return "ginibre-rank-4";
        case Ensemble::haar_pure: return "haar-pure";
        case Ensemble::canonical_uniform: return "canonical-uniform";
        case Ensemble::convex_combo: return "convex-combo";
        case Ensemble::x_state: return "x-state";
    }
    throw InvalidParams("unknown ensemble enum");
}

/// G G^dagger / tr(G G^dagger) for a 4 x k complex Gaussian G.
inline Mat4 ginibre_matrix(DrawRng& rng, int rank) {
    std::array<std::array<cplx, 4>, 4> g{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < rank; ++j) g[static_cast<size_t>(i)][static_cast<size_t>(j)] = rng.cnormal();
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < rank; ++k)
                s += g[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                     std::conj(g[static_cast<size_t>(j)][static_cast<size_t>(k)]);
            m(i, j) = s;
        }
    const double tr = trace(m).real();
    for (size_t i = 0; i < 16; ++i) m.e[i] /= tr;
    return m;
}

inline Ket4 haar_ket(DrawRng& rng) {
    for (;;) {
        Ket4 k{rng.cnormal(), rng.cnormal(), rng.cnormal(), rng.cnormal()};
        const double n = ket_norm(k);
        if (n > 1e-6) {
            for (cplx& z : k) z /= n;
            return k;
        }
    }
}

/// Haar-distributed SU(2) element.
inline Mat2 haar_su2(DrawRng& rng) {
    for (;;) {
        const cplx a = rng.cnormal();
        const cplx b = rng.cnormal();
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        if (n <= 1e-6) continue;
        Mat2 u;
        u(0, 0) = a / n;
        u(0, 1) = -std::conj(b) / n;
        u(1, 0) = b / n;
        u(1, 1) = std::conj(a) / n;
        return u;
    }
}

inline CanonicalParams sample_canonical_uniform(DrawRng& rng, int cap = 100000) {
    for (int attempt = 0; attempt < cap; ++attempt) {
        const double g1 = rng.uniform(), g2 = rng.uniform(), g3 = rng.uniform(), g4 = rng.uniform();
        const double denom = g1 + g2 + g3 + g4;
        CanonicalParams p;
        p.r = g1 / denom;
        p.s = g2 / denom;
        p.t = g3 / denom;
        p.u = rng.uniform(0.0, 0.5);
        p.v = rng.uniform(0.0, 0.5);
        p.w = rng.uniform(0.0, 0.5);
        p.q = rng.uniform(0.0, 0.5);
        p.tau1 = rng.uniform(0.0, 6.283185307179586);
        p.tau2 = rng.uniform(0.0, 6.283185307179586);
        p.tau3 = rng.uniform(0.0, 6.283185307179586);
        const auto spec = hermitian_eig(canonical_matrix(p));
        if (spec.values[3] >= -1e-10) return p;
    }
    throw RejectionExhausted("canonical-uniform: PSD rejection cap hit");
}

inline ConvexComboParams sample_convex_combo(DrawRng& rng, int cap = 100000) {
    ConvexComboParams cp;
    cp.p = rng.uniform();
    for (int attempt = 0; attempt < cap; ++attempt) {
        const PureParams psi = pure_params_from_ket(haar_ket(rng));
        if (pure_concurrence(psi) > 0.05) {
            cp.psi = psi;
            return cp;
        }
    }
    throw RejectionExhausted("convex-combo: concurrence rejection cap hit");
}

/// Ginibre draw with every entry off the diagonal and anti-diagonal zeroed.
/// Both surviving 2x2 blocks are principal submatrices of a PSD matrix, so
/// positivity and the trace survive the masking.
inline Mat4 xstate_matrix(DrawRng& rng) {
    Mat4 m = ginibre_matrix(rng, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j && i + j != 3) m(i, j) = 0.0;
    return m;
}

/// One draw of an ensemble plus whatever side structure the ensemble
/// provides for free (parameters, the underlying ket).
struct Draw {
    DensityMatrix state;
    std::optional<CanonicalParams> params;
    std::optional<Ket4> ket;
    std::optional<ConvexComboParams> convex;
};

inline Draw sample_draw(Ensemble e, DrawRng& rng) {
    switch (e) {
        case Ensemble::ginibre_rank_1:
        case Ensemble::ginibre_rank_2:
        case Ensemble::ginibre_rank_3:
        case Ensemble::ginibre_rank_4: {
            const int rank = 1 + static_cast<int>(e) - static_cast<int>(Ensemble::ginibre_rank_1);
            return Draw{DensityMatrix::validate(ginibre_matrix(rng, rank)), {}, {}, {}};
        }
        case Ensemble::haar_pure: {
            const Ket4 k = haar_ket(rng);
            return Draw{DensityMatrix::validate(outer(k)), {}, k, {}};
        }
        case Ensemble::canonical_uniform: {
            const CanonicalParams p = sample_canonical_uniform(rng);
            return Draw{DensityMatrix::validate(canonical_matrix(p)), p, {}, {}};
        }
        case Ensemble::convex_combo: {
            const ConvexComboParams cp = sample_convex_combo(rng);
            return Draw{convex_combo(cp), {}, {}, cp};
        }
        case Ensemble::x_state:
            return Draw{DensityMatrix::validate(xstate_matrix(rng)), {}, {}, {}};
    }
    throw InvalidParams("sample_draw: unknown ensemble");
}

inline DensityMatrix random_state(Ensemble e, uint64_t seed) {
    DrawRng rng(seed);
    return sample_draw(e, rng).state;
}

inline DensityMatrix random_state(const std::string& ensemble, uint64_t seed) {
    return random_state(parse_ensemble(ensemble), seed);
}

} // namespace twoq
