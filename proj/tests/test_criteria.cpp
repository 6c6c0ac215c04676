#include "catch_amalgamated.hpp"

#include "twoq/criteria.hpp"

using namespace twoq;

namespace {

DensityMatrix bell() {
    Mat4 m;
    m(0, 0) = 0.5;
    m(0, 3) = 0.5;
    m(3, 0) = 0.5;
    m(3, 3) = 0.5;
    return DensityMatrix::validate(m);
}

DensityMatrix werner(double p) {
    Mat4 m;
    const double off = 0.25 * (1.0 - p);
    m(0, 0) = 0.5 * p + off;
    m(1, 1) = off;
    m(2, 2) = off;
    m(3, 3) = 0.5 * p + off;
    m(0, 3) = 0.5 * p;
    m(3, 0) = 0.5 * p;
    return DensityMatrix::validate(m);
}

DensityMatrix maximally_mixed() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 0.25;
    return DensityMatrix::validate(m);
}

} // namespace

TEST_CASE("partial transpose moves the right entries") {
    Mat4 m;
    int v = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = v++;
    const Mat4 ptb = partial_transpose_b(m);
    // B-transpose swaps the column index inside each 2x2 block
    CHECK(ptb(0, 1) == m(1, 0));
    CHECK(ptb(0, 0) == m(0, 0));
    CHECK(ptb(2, 3) == m(3, 2));
    CHECK(ptb(0, 3) == m(1, 2));
    CHECK(ptb(2, 1) == m(3, 0));
    // the two partial transposes compose to the full transpose
    const Mat4 pta = partial_transpose_a(m);
    CHECK(max_abs(pta - transpose(partial_transpose_b(m))) == 0.0);
    CHECK(max_abs(partial_transpose_a(partial_transpose_b(m)) - transpose(m)) == 0.0);
}

TEST_CASE("pt spectra of the closed-form families") {
    const PTSpectrum b = pt_spectrum(bell());
    CHECK(b.etas[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(b.etas[1] == Catch::Approx(0.5).margin(1e-12));
    CHECK(b.etas[2] == Catch::Approx(0.5).margin(1e-12));
    CHECK(b.etas[3] == Catch::Approx(-0.5).margin(1e-12));
    CHECK(b.det_pt == Catch::Approx(-1.0 / 16.0).epsilon(1e-12));
    CHECK(b.n_pos == 3);
    CHECK(b.n_zero == 0);
    CHECK(b.n_neg == 1);
    CHECK(b.negativity == Catch::Approx(0.5).margin(1e-12));

    const PTSpectrum mm = pt_spectrum(maximally_mixed());
    CHECK(mm.det_pt == Catch::Approx(1.0 / 256.0).epsilon(1e-12));
    CHECK(mm.n_neg == 0);
    CHECK(mm.negativity == Catch::Approx(0.0).margin(1e-15));

    // werner: det_pt = (1+p)^3 (1-3p) / 256
    for (double p : {0.2, 0.5, 0.9}) {
        const double expect = std::pow(1.0 + p, 3) * (1.0 - 3.0 * p) / 256.0;
        CHECK(pt_spectrum(werner(p)).det_pt == Catch::Approx(expect).margin(1e-14));
    }
    CHECK(pt_spectrum(werner(0.5)).det_pt == Catch::Approx(-27.0 / 4096.0).epsilon(1e-13));
}

TEST_CASE("det_pt equals the product of pt eigenvalues") {
    DrawRng rng(draw_seed(31, 0));
    for (int i = 0; i < 100; ++i) {
        const Draw d = sample_draw(Ensemble::ginibre_rank_4, rng);
        const PTSpectrum s = pt_spectrum(d.state);
        const double prod = s.etas[0] * s.etas[1] * s.etas[2] * s.etas[3];
        CHECK(s.det_pt == Catch::Approx(prod).margin(1e-13 + 1e-10 * std::abs(prod)));
    }
}

TEST_CASE("pure-state pt eigenvalues in closed form") {
    // order: C/2, -C/2, (1+y)/2, (1-y)/2
    const auto sep = pure_pt_eigen(0.0);
    CHECK(sep[0] == 0.0);
    CHECK(sep[1] == 0.0);
    CHECK(sep[2] == 1.0);
    CHECK(sep[3] == 0.0);

    const auto bellpt = pure_pt_eigen(1.0);
    CHECK(bellpt[0] == Catch::Approx(0.5));
    CHECK(bellpt[1] == Catch::Approx(-0.5));
    CHECK(bellpt[2] == Catch::Approx(0.5));
    CHECK(bellpt[3] == Catch::Approx(0.5));

    const auto mid = pure_pt_eigen(0.6);
    std::array<double, 4> s{mid[0], mid[1], mid[2], mid[3]};
    std::sort(s.begin(), s.end(), std::greater<double>());
    CHECK(s[0] == Catch::Approx(0.9).margin(1e-15));
    CHECK(s[1] == Catch::Approx(0.3).margin(1e-15));
    CHECK(s[2] == Catch::Approx(0.1).margin(1e-15));
    CHECK(s[3] == Catch::Approx(-0.3).margin(1e-15));
}

TEST_CASE("scalar verdict mapping over the three det_pt regions") {
    // clear negative determinant with matching concurrence
    CHECK(verdict(-1e-3, 0.5) == Verdict::inseparable);
    // clear positive determinant with vanishing concurrence
    CHECK(verdict(1e-3, 0.0) == Verdict::separable);
    // inside the band: always boundary, whatever the concurrence says
    CHECK(verdict(0.0, 0.0) == Verdict::boundary);
    CHECK(verdict(5e-11, 0.9) == Verdict::boundary);
    CHECK(verdict(-5e-11, 0.0) == Verdict::boundary);
    // widened band via explicit tolerance
    CHECK(verdict(-1e-4, 0.3, 1e-3, 1e-8) == Verdict::boundary);
}

TEST_CASE("scalar verdict throws on contradictory inputs") {
    // negative determinant but concurrence way below threshold
    CHECK_THROWS_AS(verdict(-1e-3, 0.0), CriteriaDisagreement);
    // positive determinant but solidly entangled concurrence
    CHECK_THROWS_AS(verdict(1e-3, 0.5), CriteriaDisagreement);
}

TEST_CASE("state verdict carries evidence from both routes") {
    const VerdictEvidence b = verdict(bell());
    CHECK(b.v == Verdict::inseparable);
    CHECK(b.det_pt == Catch::Approx(-1.0 / 16.0).epsilon(1e-12));
    CHECK(b.C == Catch::Approx(1.0).margin(1e-10));
    CHECK(b.agreement);

    const VerdictEvidence mm = verdict(maximally_mixed());
    CHECK(mm.v == Verdict::separable);
    CHECK(mm.agreement);

    const VerdictEvidence w = verdict(werner(1.0 / 3.0));
    CHECK(w.v == Verdict::boundary);
}

TEST_CASE("criteria agree across ensembles at default tolerances") {
    DrawRng rng(draw_seed(32, 0));
    for (int i = 0; i < 200; ++i) {
        const Draw d = sample_draw(Ensemble::ginibre_rank_4, rng);
        const VerdictEvidence ev = verdict(d.state);
        CHECK(ev.agreement);
        if (ev.v == Verdict::inseparable) CHECK(ev.det_pt < 0.0);
        if (ev.v == Verdict::separable) CHECK(ev.C <= 1e-8);
    }
}

TEST_CASE("verdict names are stable strings") {
    CHECK(std::string(verdict_name(Verdict::separable)) == "separable");
    CHECK(std::string(verdict_name(Verdict::inseparable)) == "inseparable");
    CHECK(std::string(verdict_name(Verdict::boundary)) == "boundary");
}
