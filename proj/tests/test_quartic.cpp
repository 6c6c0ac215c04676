#include "catch_amalgamated.hpp"

#include "twoq/quartic.hpp"

using namespace twoq;

namespace {

CanonicalParams bell_params() {
    // canonical parameters of the |00>+|11> Bell projector
    CanonicalParams p;
    p.r = 0.5;
    p.u = 0.5;
    return p;
}

CanonicalParams werner_params(double w) {
    CanonicalParams p;
    p.r = 0.5 * w + 0.25 * (1.0 - w);
    p.s = 0.25 * (1.0 - w);
    p.t = 0.25 * (1.0 - w);
    p.u = 0.5 * w;
    return p;
}

std::array<double, 4> sorted_desc(std::array<double, 4> v) {
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

} // namespace

TEST_CASE("characteristic coefficients vanish correctly on the maximally mixed state") {
    CanonicalParams p;
    p.r = p.s = p.t = 0.25;
    const QuarticSpec f = coeffs_from_canonical(p);
    // rho rho~ = I/16: char poly (x - 1/16)^4
    CHECK(f.f1 == Catch::Approx(-0.25).epsilon(1e-14));
    CHECK(f.f2 == Catch::Approx(6.0 / 256.0).epsilon(1e-14));
    CHECK(f.f3 == Catch::Approx(-4.0 / 4096.0).epsilon(1e-14));
    CHECK(f.f4 == Catch::Approx(1.0 / 65536.0).epsilon(1e-14));
}

TEST_CASE("f4 is the squared determinant of the canonical matrix") {
    const CanonicalParams p = werner_params(0.5);
    const QuarticSpec f = coeffs_from_canonical(p);
    const double det = det4(canonical_matrix(p)).real();
    CHECK(f.f4 == Catch::Approx(det * det).margin(1e-16));
}

TEST_CASE("depress removes the cubic term: hand-computed fixture") {
    // x^4 - x^3 + (3/8) x^2 shifts by delta/4 = 1/4 into
    // y^4 + (1/16) y + 3/256
    const QuarticSpec f{-1.0, 3.0 / 8.0, 0.0, 0.0};
    const DepressedQuartic d = depress(f);
    CHECK(d.delta == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(d.a == Catch::Approx(0.0).margin(1e-15));
    CHECK(d.b == Catch::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(d.c == Catch::Approx(3.0 / 256.0).epsilon(1e-15));
}

TEST_CASE("symmetric root set at unit scale stays on the main branch") {
    // roots {2, 1, -1, -2}; the radicals pick the {1,2}/{-1,-2} pairing, P = 3/2
    const DepressedQuartic d{0.0, -5.0, 0.0, 4.0};
    const FerrariIntermediates fr = ferrari_solve(d, 1e-10);
    CHECK(std::string(fr.branch) == "main");
    CHECK(fr.P == Catch::Approx(1.5).margin(1e-12));
    CHECK(fr.x[1] >= fr.x[0]);
    CHECK(fr.x[3] >= fr.x[2]);
    const auto s = sorted_desc(fr.x);
    CHECK(s[0] == Catch::Approx(2.0).margin(1e-12));
    CHECK(s[1] == Catch::Approx(1.0).margin(1e-12));
    CHECK(s[2] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(s[3] == Catch::Approx(-2.0).margin(1e-12));
}

TEST_CASE("ferrari_solve: biquadratic fallback engages when the pivot collapses") {
    // the same quartic shrunk by 1e-10 per root; P scales to 1.5e-10, under the
    // pivot floor, and the odd term is exactly zero
    const double sc = 1e-10;
    const DepressedQuartic d{0.0, -5.0 * sc * sc, 0.0, 4.0 * sc * sc * sc * sc};
    const FerrariIntermediates fr = ferrari_solve(d, 1e-10);
    CHECK(std::string(fr.branch) == "biquadratic");
    // pair ordering invariant: x2 >= x1 and x4 >= x3
    CHECK(fr.x[1] >= fr.x[0]);
    CHECK(fr.x[3] >= fr.x[2]);
    const auto s = sorted_desc(fr.x);
    CHECK(s[0] == Catch::Approx(2.0 * sc).margin(1e-20));
    CHECK(s[1] == Catch::Approx(1.0 * sc).margin(1e-20));
    CHECK(s[2] == Catch::Approx(-1.0 * sc).margin(1e-20));
    CHECK(s[3] == Catch::Approx(-2.0 * sc).margin(1e-20));
}

TEST_CASE("ferrari_solve: quadruple root collapses to zero") {
    const DepressedQuartic d{0.3, 0.0, 0.0, 0.0};
    const FerrariIntermediates fr = ferrari_solve(d, 1e-10);
    CHECK(std::string(fr.branch) == "quadruple");
    for (double x : fr.x) CHECK(x == 0.0);
}

TEST_CASE("ferrari_solve: triple root uses the polished cube-root branch") {
    const double g = 0.3;
    // (x - g)^3 (x + 3g) = x^4 - 6 g^2 x^2 + 8 g^3 x - 3 g^4
    const DepressedQuartic d{0.0, -6.0 * g * g, 8.0 * g * g * g, -3.0 * g * g * g * g};
    const FerrariIntermediates fr = ferrari_solve(d, 1e-10);
    CHECK(std::string(fr.branch) == "triple");
    CHECK(fr.P == Catch::Approx(g).epsilon(1e-12));
    CHECK(fr.Q == Catch::Approx(8.0 * g * g).epsilon(1e-12));
    const auto s = sorted_desc(fr.x);
    CHECK(s[0] == Catch::Approx(g).margin(1e-12));
    CHECK(s[2] == Catch::Approx(g).margin(1e-12));
    CHECK(s[3] == Catch::Approx(-3.0 * g).margin(1e-12));
}

TEST_CASE("ferrari_solve: integer-root fixture has vanishing vieta residuals") {
    // roots {-3, -1, 2, 2}: e2 = -9, e3 = -4, e4 = 12
    const DepressedQuartic d{0.0, -9.0, 4.0, 12.0};
    const FerrariIntermediates fr = ferrari_solve(d, 1e-9);
    REQUIRE(std::string(fr.branch) == "main");
    const auto s = sorted_desc(fr.x);
    CHECK(s[0] == Catch::Approx(2.0).margin(1e-10));
    CHECK(s[1] == Catch::Approx(2.0).margin(1e-10));
    CHECK(s[2] == Catch::Approx(-1.0).margin(1e-10));
    CHECK(s[3] == Catch::Approx(-3.0).margin(1e-10));
    CHECK(vieta_residual(d, fr) < 1e-12);
    // the raw residual vector is unscaled |e_k - coefficient|
    const auto raw = vieta_check(d, fr);
    for (double r : raw) CHECK(r < 1e-10);
}

TEST_CASE("ferrari intermediates satisfy the internal P-Q relation") {
    const CanonicalParams p = werner_params(0.7);
    const DepressedQuartic d = depress(coeffs_from_canonical(p));
    const FerrariIntermediates fr = ferrari_solve(d, -1.0);
    // Q = -4 P^2 - 2a ties the two radical groups together
    CHECK(fr.Q == Catch::Approx(-4.0 * fr.P * fr.P - 2.0 * d.a).margin(1e-12));
    CHECK(fr.x[1] >= fr.x[0]);
    CHECK(fr.x[3] >= fr.x[2]);
}

TEST_CASE("roots shifted back by delta/4 are the rho rho~ eigenvalues (Bell)") {
    const CanonicalParams p = bell_params();
    const DepressedQuartic d = depress(coeffs_from_canonical(p));
    const FerrariIntermediates fr = ferrari_solve(d, -1.0);
    const double shift = 0.25 * d.delta;
    const auto s = sorted_desc(fr.x);
    // Bell: rho rho~ has spectrum (1, 0, 0, 0)
    CHECK(s[0] + shift == Catch::Approx(1.0).margin(1e-9));
    CHECK(s[1] + shift == Catch::Approx(0.0).margin(1e-9));
    CHECK(s[2] + shift == Catch::Approx(0.0).margin(1e-9));
    CHECK(s[3] + shift == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("quartic-determinant identity on fixtures") {
    // evaluating the depressed quartic at delta/4 equals det(rho)^2
    for (double w : {0.0, 0.2, 0.5, 0.9}) {
        const auto [lhs, rhs] = det_identity_check(werner_params(w));
        CHECK(lhs == Catch::Approx(rhs).margin(1e-14 * (1.0 + std::abs(rhs))));
    }
    // maximally mixed: both sides are (1/256)^2
    CanonicalParams mm;
    mm.r = mm.s = mm.t = 0.25;
    const auto [lhs, rhs] = det_identity_check(mm);
    CHECK(lhs == Catch::Approx(1.52587890625e-05).epsilon(1e-12));
    CHECK(rhs == Catch::Approx(1.52587890625e-05).epsilon(1e-12));
}

TEST_CASE("ferrari radicands are nonnegative within tolerance on random canonical draws") {
    DrawRng rng(draw_seed(11, 0));
    for (int i = 0; i < 200; ++i) {
        const CanonicalParams p = sample_canonical_uniform(rng);
        const DepressedQuartic d = depress(coeffs_from_canonical(p));
        const FerrariIntermediates fr = ferrari_solve(d, -1.0);
        CHECK(std::isfinite(fr.P));
        CHECK(fr.P >= 0.0);
        CHECK(fr.x[1] >= fr.x[0]);
        CHECK(fr.x[3] >= fr.x[2]);
        CHECK(vieta_residual(d, fr) < 1e-8);
    }
}
