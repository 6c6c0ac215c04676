#include "catch_amalgamated.hpp"

#include "twoq/matcore.hpp"

using namespace twoq;

namespace {

Mat4 diag4(double a, double b, double c, double d) {
    Mat4 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

} // namespace

TEST_CASE("pauli kron blocks") {
    const Mat4 yy = kron(sigma_y(), sigma_y());
    // sigma_y x sigma_y is the anti-diagonal (-1, 1, 1, -1)
    CHECK(yy(0, 3) == cplx(-1.0, 0.0));
    CHECK(yy(1, 2) == cplx(1.0, 0.0));
    CHECK(yy(2, 1) == cplx(1.0, 0.0));
    CHECK(yy(3, 0) == cplx(-1.0, 0.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i + j != 3) CHECK(yy(i, j) == cplx(0.0, 0.0));

    const Mat4 zx = kron(sigma_z(), sigma_x());
    CHECK(zx(0, 1) == cplx(1.0, 0.0));
    CHECK(zx(1, 0) == cplx(1.0, 0.0));
    CHECK(zx(2, 3) == cplx(-1.0, 0.0));
    CHECK(zx(3, 2) == cplx(-1.0, 0.0));
}

TEST_CASE("kron mixes scalars like the definition") {
    Mat2 a, b;
    a(0, 0) = cplx(1, 2);
    a(0, 1) = cplx(0, 1);
    a(1, 0) = 3.0;
    a(1, 1) = cplx(-1, 1);
    b(0, 0) = 2.0;
    b(0, 1) = cplx(0, -1);
    b(1, 0) = 1.0;
    b(1, 1) = 5.0;
    const Mat4 k = kron(a, b);
    CHECK(k(0, 0) == a(0, 0) * b(0, 0));
    CHECK(k(0, 3) == a(0, 1) * b(0, 1));
    CHECK(k(2, 1) == a(1, 0) * b(0, 1));
    CHECK(k(3, 3) == a(1, 1) * b(1, 1));
}

TEST_CASE("det4 matches products on triangular and permuted fixtures") {
    CHECK(det4(diag4(2, 3, 5, 7)).real() == Catch::Approx(210.0).epsilon(1e-15));

    // row-swapped diagonal flips the sign
    Mat4 m;
    m(1, 0) = 1.0;
    m(0, 1) = 1.0;
    m(2, 2) = 4.0;
    m(3, 3) = 3.0;
    CHECK(det4(m).real() == Catch::Approx(-12.0).epsilon(1e-15));

    // det of a dyad-perturbed identity via the matrix determinant lemma:
    // det(I + u e0^T) = 1 + u0
    Mat4 p;
    for (int i = 0; i < 4; ++i) p(i, i) = 1.0;
    p(0, 0) = 1.0 + 0.25;
    p(1, 0) = 0.5;
    p(2, 0) = -0.75;
    p(3, 0) = cplx(0.0, 1.0);
    CHECK(det4(p).real() == Catch::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("det2 and adjoint") {
    Mat2 m;
    m(0, 0) = cplx(1, 1);
    m(0, 1) = cplx(2, 0);
    m(1, 0) = cplx(0, 3);
    m(1, 1) = cplx(1, -1);
    CHECK(std::abs(det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1)) -
                   (cplx(1, 1) * cplx(1, -1) - cplx(2, 0) * cplx(0, 3))) < 1e-15);
    const Mat2 a = adjoint(m);
    CHECK(a(0, 1) == std::conj(m(1, 0)));
    CHECK(a(1, 0) == std::conj(m(0, 1)));
}

TEST_CASE("hermitian_eig recovers a known spectrum with orthonormal vectors") {
    // U diag(0.5, 0.3, 0.15, 0.05) U^dag for a hand-built unitary mix
    Mat4 m = diag4(0.5, 0.3, 0.15, 0.05);
    // rotate in the (0,3) and (1,2) planes
    Mat4 u;
    const double c = std::cos(0.7), s = std::sin(0.7);
    u(0, 0) = c;
    u(0, 3) = cplx(0, -s);
    u(3, 0) = cplx(0, -s);
    u(3, 3) = c;
    const double c2 = std::cos(0.3), s2 = std::sin(0.3);
    u(1, 1) = c2;
    u(1, 2) = s2;
    u(2, 1) = -s2;
    u(2, 2) = c2;
    Mat4 rotated = u * m * adjoint(u);

    const HermitianSpectrum sp = hermitian_eig(rotated);
    CHECK(sp.values[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(sp.values[1] == Catch::Approx(0.3).margin(1e-12));
    CHECK(sp.values[2] == Catch::Approx(0.15).margin(1e-12));
    CHECK(sp.values[3] == Catch::Approx(0.05).margin(1e-12));
    for (int i = 0; i < 4; ++i) {
        // residual || M v - lambda v ||
        Ket4 mv = mat_vec(rotated, sp.vectors[static_cast<size_t>(i)]);
        double res = 0.0;
        for (size_t k = 0; k < 4; ++k)
            res += std::norm(mv[k] - sp.values[i] * sp.vectors[static_cast<size_t>(i)][k]);
        CHECK(std::sqrt(res) < 1e-12);
        for (int j = i + 1; j < 4; ++j)
            CHECK(std::abs(inner(sp.vectors[static_cast<size_t>(i)],
                                 sp.vectors[static_cast<size_t>(j)])) < 1e-12);
    }
}

TEST_CASE("general_eig4_real handles a nonsymmetric matrix with known real spectrum") {
    // S D S^-1 with S lower-triangular of ones: similar to diag(4, 2, 1, 0.5)
    Mat4 d = diag4(4, 2, 1, 0.5);
    Mat4 s, sinv;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) s(i, j) = 1.0;
    // inverse of the all-ones lower triangle is bidiagonal (1, -1)
    for (int i = 0; i < 4; ++i) {
        sinv(i, i) = 1.0;
        if (i > 0) sinv(i, i - 1) = -1.0;
    }
    const Mat4 m = s * d * sinv;
    const auto ev = general_eig4_real(m, 1e-9);
    CHECK(ev[0] == Catch::Approx(4.0).margin(1e-9));
    CHECK(ev[1] == Catch::Approx(2.0).margin(1e-9));
    CHECK(ev[2] == Catch::Approx(1.0).margin(1e-9));
    CHECK(ev[3] == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("general_eig4_real clamps small negatives and rejects complex spectra") {
    const auto ev = general_eig4_real(diag4(1.0, 0.5, 0.0, -1e-12), 1e-9);
    CHECK(ev[3] == 0.0);

    // a 2x2 rotation block embedded in 4x4 has eigenvalues exp(+-i theta)
    Mat4 rot = diag4(1, 1, 0, 0);
    const double c = std::cos(1.0), s = std::sin(1.0);
    rot(2, 2) = c;
    rot(2, 3) = -s;
    rot(3, 2) = s;
    rot(3, 3) = c;
    CHECK_THROWS_AS(general_eig4_real(rot, 1e-9), SpectrumNotReal);
}

TEST_CASE("trace, fro_norm, hermiticity_residual, symmetrize") {
    Mat4 m = diag4(1, 2, 3, 4);
    m(0, 1) = cplx(0, 1);
    CHECK(trace(m).real() == Catch::Approx(10.0));
    CHECK(hermiticity_residual(m) > 0.5);  // (0,1) has no conjugate partner
    const Mat4 h = symmetrize(m);
    CHECK(hermiticity_residual(h) < 1e-15);
    CHECK(h(0, 1) == cplx(0, 0.5));
    CHECK(h(1, 0) == cplx(0, -0.5));
    CHECK(fro_norm(diag4(3, 4, 0, 0)) == Catch::Approx(5.0));
}

TEST_CASE("outer, inner, mat_vec, ket_norm agree with definitions") {
    const Ket4 k{cplx(0.5, 0), cplx(0, 0.5), cplx(-0.5, 0), cplx(0, -0.5)};
    CHECK(ket_norm(k) == Catch::Approx(1.0));
    const Mat4 proj = outer(k);
    CHECK(trace(proj).real() == Catch::Approx(1.0));
    // projector reproduces the ket
    const Ket4 pk = mat_vec(proj, k);
    for (size_t i = 0; i < 4; ++i) CHECK(std::abs(pk[i] - k[i]) < 1e-15);
    CHECK(std::abs(inner(k, k) - cplx(1.0, 0.0)) < 1e-15);
}
