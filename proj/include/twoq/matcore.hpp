#pragma once

// Dense complex 2x2 / 4x4 kernel used throughout the library.
// Deliberately dependency-free: the eigensolvers below serve as the
// brute-force oracles against which the closed-form code paths are
// checked, so they must not share machinery with those paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "twoq/errors.hpp"

namespace twoq {

using cplx = std::complex<double>;

/// Row-major complex 2x2 matrix.
struct Mat2 {
    std::array<cplx, 4> e{};

    cplx& operator()(int i, int j) { return e[static_cast<size_t>(2 * i + j)]; }
    const cplx& operator()(int i, int j) const { return e[static_cast<size_t>(2 * i + j)]; }

    static Mat2 identity() {
        Mat2 m;
        m(0, 0) = 1.0;
        m(1, 1) = 1.0;
        return m;
    }
};

/// Row-major complex 4x4 matrix.
struct Mat4 {
    std::array<cplx, 16> e{};

    cplx& operator()(int i, int j) { return e[static_cast<size_t>(4 * i + j)]; }
    const cplx& operator()(int i, int j) const { return e[static_cast<size_t>(4 * i + j)]; }

    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }
};

using Ket4 = std::array<cplx, 4>;

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (size_t i = 0; i < 4; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

inline Mat4 operator+(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (size_t i = 0; i < 16; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

inline Mat4 operator-(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (size_t i = 0; i < 16; ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
}

inline Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

inline Mat4 operator*(cplx s, const Mat4& a) {
    Mat4 r;
    for (size_t i = 0; i < 16; ++i) r.e[i] = s * a.e[i];
    return r;
}

inline Mat2 adjoint(const Mat2& m) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

inline Mat4 adjoint(const Mat4& m) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

inline Mat4 transpose(const Mat4& m) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = m(j, i);
    return r;
}

/// Entrywise complex conjugate (not the adjoint).
inline Mat4 conjugate(const Mat4& m) {
    Mat4 r;
    for (size_t i = 0; i < 16; ++i) r.e[i] = std::conj(m.e[i]);
    return r;
}

inline cplx trace(const Mat4& m) { return m(0, 0) + m(1, 1) + m(2, 2) + m(3, 3); }

inline double fro_norm(const Mat4& m) {
    double s = 0.0;
    for (const cplx& z : m.e) s += std::norm(z);
    return std::sqrt(s);
}

inline double max_abs(const Mat4& m) {
    double s = 0.0;
    for (const cplx& z : m.e) s = std::max(s, std::abs(z));
    return s;
}

inline bool all_finite(const Mat4& m) {
    for (const cplx& z : m.e)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

inline double hermiticity_residual(const Mat4& m) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += std::norm(m(i, j) - std::conj(m(j, i)));
    return std::sqrt(s);
}

/// (m + m^dagger) / 2
inline Mat4 symmetrize(const Mat4& m) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

inline Mat4 outer(const Ket4& k) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = k[static_cast<size_t>(i)] * std::conj(k[static_cast<size_t>(j)]);
    return r;
}

inline Ket4 mat_vec(const Mat4& m, const Ket4& k) {
    Ket4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[static_cast<size_t>(i)] += m(i, j) * k[static_cast<size_t>(j)];
    return r;
}

inline cplx inner(const Ket4& a, const Ket4& b) {
    cplx s = 0.0;
    for (size_t i = 0; i < 4; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double ket_norm(const Ket4& k) {
    double s = 0.0;
    for (const cplx& z : k) s += std::norm(z);
    return std::sqrt(s);
}

inline Mat2 sigma_x() {
    Mat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline Mat2 sigma_y() {
    Mat2 m;
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}

inline Mat2 sigma_z() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

/// Kronecker product, a on the first (row-major high) factor.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

inline cplx det2(cplx a, cplx b, cplx c, cplx d) { return a * d - b * c; }

/// Determinant by cofactor expansion along the first row. Fixed evaluation
/// order keeps reruns bit-identical.
inline cplx det4(const Mat4& m) {
    auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return m(r0, c0) * det2(m(r1, c1), m(r1, c2), m(r2, c1), m(r2, c2)) -
               m(r0, c1) * det2(m(r1, c0), m(r1, c2), m(r2, c0), m(r2, c2)) +
               m(r0, c2) * det2(m(r1, c0), m(r1, c1), m(r2, c0), m(r2, c1));
    };
    return m(0, 0) * minor3(1, 2, 3, 1, 2, 3) - m(0, 1) * minor3(1, 2, 3, 0, 2, 3) +
           m(0, 2) * minor3(1, 2, 3, 0, 1, 3) - m(0, 3) * minor3(1, 2, 3, 0, 1, 2);
}

/// Eigenvalues (descending) with matching orthonormal eigenvectors,
/// vectors[k] belonging to values[k].
struct HermitianSpectrum {
    std::array<double, 4> values{};
    std::array<Ket4, 4> vectors{};
};

namespace detail {

/// SU(2) rotation [[c, s e^{i phi}], [-s e^{-i phi}, c]] with J^dagger M J
/// diagonal for M = [[alpha, beta], [conj(beta), gamma]]. Inner rotation:
/// c >= cos(pi/4) > 0, so the first column leads with a real positive entry.
struct JacobiRotation {
    double c = 1.0;
    cplx s = 0.0; // s * e^{i phi} folded together
};

inline JacobiRotation make_jacobi_rotation(double alpha, cplx beta, double gamma) {
    JacobiRotation rot;
    const double m = std::abs(beta);
    if (m == 0.0) return rot;
    const cplx phase = beta / m;
    const double tau = (gamma - alpha) / (2.0 * m);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    rot.c = 1.0 / std::sqrt(1.0 + t * t);
    rot.s = (t * rot.c) * phase;
    return rot;
}

} // namespace detail

/// Cyclic Jacobi eigensolver for a Hermitian 4x4. Input must satisfy
/// ||m - m^dagger|| <= 1e-12 * ||m||; the iteration then runs on
/// (m + m^dagger)/2. tol bounds the final off-diagonal mass relative to
/// ||m||_F.
inline HermitianSpectrum hermitian_eig(const Mat4& m, double tol = 1e-13) {
    const double nrm = fro_norm(m);
    const double herm = hermiticity_residual(m);
    if (herm > 1e-12 * std::max(nrm, 1e-300)) {
        std::ostringstream os;
        os << "hermitian_eig: hermiticity residual " << herm << " exceeds 1e-12 * " << nrm;
        throw NotHermitian(os.str());
    }

    Mat4 a = symmetrize(m);
    Mat4 v = Mat4::identity();
    const double stop = std::max(tol, 1e-15) * std::max(nrm, 1e-300);

    constexpr int max_sweeps = 50;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += 2.0 * std::norm(a(p, q));
        if (std::sqrt(off) <= stop) break;

        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(a(p, q)) <= 0.25 * stop) continue;
                const auto rot = detail::make_jacobi_rotation(a(p, p).real(), a(p, q), a(q, q).real());
                // a <- J^dagger a J, v <- v J with J embedded at (p, q)
                for (int k = 0; k < 4; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = rot.c * akp - std::conj(rot.s) * akq;
                    a(k, q) = rot.s * akp + rot.c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = rot.c * apk - rot.s * aqk;
                    a(q, k) = std::conj(rot.s) * apk + rot.c * aqk;
                }
                for (int k = 0; k < 4; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = rot.c * vkp - std::conj(rot.s) * vkq;
                    v(k, q) = rot.s * vkp + rot.c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps) {
        throw NoConvergence("hermitian_eig: jacobi sweeps exhausted");
    }

    std::array<int, 4> idx{0, 1, 2, 3};
    std::array<double, 4> d{};
    for (int i = 0; i < 4; ++i) d[static_cast<size_t>(i)] = a(i, i).real();
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int x, int y) { return d[static_cast<size_t>(x)] > d[static_cast<size_t>(y)]; });

    HermitianSpectrum out;
    for (int k = 0; k < 4; ++k) {
        out.values[static_cast<size_t>(k)] = d[static_cast<size_t>(idx[static_cast<size_t>(k)])];
        for (int r = 0; r < 4; ++r)
            out.vectors[static_cast<size_t>(k)][static_cast<size_t>(r)] = v(r, idx[static_cast<size_t>(k)]);
    }
    return out;
}

namespace detail {

// Complex Givens rotation G with G * (f, g)^T = (r, 0)^T.
struct Givens {
    cplx c00, c01, c10, c11;
};

inline Givens make_givens(cplx f, cplx g) {
    const double r = std::sqrt(std::norm(f) + std::norm(g));
    if (r == 0.0) return {1.0, 0.0, 0.0, 1.0};
    return {std::conj(f) / r, std::conj(g) / r, -g / r, f / r};
}

inline void householder_hessenberg(Mat4& h) {
    for (int k = 0; k < 2; ++k) {
        double xnorm = 0.0;
        for (int i = k + 1; i < 4; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        cplx x0 = h(k + 1, k);
        cplx alpha = (std::abs(x0) == 0.0) ? cplx(-xnorm, 0.0) : -(x0 / std::abs(x0)) * xnorm;
        std::array<cplx, 4> vv{};
        double vnorm2 = 0.0;
        for (int i = k + 1; i < 4; ++i) {
            vv[static_cast<size_t>(i)] = h(i, k) - (i == k + 1 ? alpha : cplx(0.0));
            vnorm2 += std::norm(vv[static_cast<size_t>(i)]);
        }
        if (vnorm2 <= 1e-300) continue;
        // h <- (I - 2 v v^dagger / |v|^2) h (I - 2 v v^dagger / |v|^2)
        for (int j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (int i = k + 1; i < 4; ++i) s += std::conj(vv[static_cast<size_t>(i)]) * h(i, j);
            s *= 2.0 / vnorm2;
            for (int i = k + 1; i < 4; ++i) h(i, j) -= s * vv[static_cast<size_t>(i)];
        }
        for (int i = 0; i < 4; ++i) {
            cplx s = 0.0;
            for (int j = k + 1; j < 4; ++j) s += h(i, j) * vv[static_cast<size_t>(j)];
            s *= 2.0 / vnorm2;
            for (int j = k + 1; j < 4; ++j) h(i, j) -= s * std::conj(vv[static_cast<size_t>(j)]);
        }
    }
}

inline std::array<cplx, 2> eig2(cplx a, cplx b, cplx c, cplx d) {
    const cplx tr = a + d;
    const cplx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

} // namespace detail

/// Eigenvalues of a general (non-Hermitian) 4x4 whose spectrum the caller
/// guarantees to be real, e.g. a product of two PSD matrices. Complex
/// Hessenberg reduction plus shifted QR; raw eigenvalues with |Im| > tol
/// raise SpectrumNotReal, values in [-tol, 0) are clamped to zero, and the
/// result comes back descending.
inline std::array<double, 4> general_eig4_real(const Mat4& m, double tol) {
    Mat4 h = m;
    detail::householder_hessenberg(h);
    const double scale = std::max(fro_norm(m), 1e-300);
    const double defl = 1e-16 * scale;

    std::array<cplx, 4> lam{};
    int hi = 3;
    int iters = 0;
    while (hi >= 0) {
        // peel converged trailing eigenvalues
        if (hi == 0) {
            lam[0] = h(0, 0);
            hi = -1;
            break;
        }
        if (std::abs(h(hi, hi - 1)) <= defl + 1e-14 * (std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi)))) {
            lam[static_cast<size_t>(hi)] = h(hi, hi);
            --hi;
            continue;
        }
        if (hi == 1) {
            const auto p = detail::eig2(h(0, 0), h(0, 1), h(1, 0), h(1, 1));
            lam[0] = p[0];
            lam[1] = p[1];
            hi = -1;
            break;
        }
        if (++iters > 200) throw NoConvergence("general_eig4_real: qr iterations exhausted");

        // shift: eigenvalue of the trailing 2x2 nearest the corner entry
        const auto p = detail::eig2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        cplx mu = (std::abs(p[0] - h(hi, hi)) < std::abs(p[1] - h(hi, hi))) ? p[0] : p[1];
        if (iters % 16 == 0) mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));

        // explicit QR step on the active window [0..hi]
        for (int i = 0; i <= hi; ++i) h(i, i) -= mu;
        std::array<detail::Givens, 3> gs{};
        for (int i = 0; i < hi; ++i) {
            const auto g = detail::make_givens(h(i, i), h(i + 1, i));
            gs[static_cast<size_t>(i)] = g;
            for (int j = i; j <= hi; ++j) {
                const cplx a = h(i, j), b = h(i + 1, j);
                h(i, j) = g.c00 * a + g.c01 * b;
                h(i + 1, j) = g.c10 * a + g.c11 * b;
            }
        }
        for (int i = 0; i < hi; ++i) {
            const auto& g = gs[static_cast<size_t>(i)];
            for (int r = 0; r <= std::min(i + 1, hi); ++r) {
                const cplx a = h(r, i), b = h(r, i + 1);
                h(r, i) = a * std::conj(g.c00) + b * std::conj(g.c01);
                h(r, i + 1) = a * std::conj(g.c10) + b * std::conj(g.c11);
            }
        }
        for (int i = 0; i <= hi; ++i) h(i, i) += mu;
    }

    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) {
        const cplx z = lam[static_cast<size_t>(i)];
        if (std::abs(z.imag()) > tol) {
            std::ostringstream os;
            os << "general_eig4_real: imaginary part " << z.imag() << " exceeds tol " << tol;
            throw SpectrumNotReal(os.str());
        }
        double re = z.real();
        if (re < 0.0 && re >= -tol) re = 0.0;
        out[static_cast<size_t>(i)] = re;
    }
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

} // namespace twoq
