#pragma once

// Seeded verification campaigns over the random ensembles. Every check is
// a per-draw property; a draw's generator is derived from (master seed,
// draw index) alone, so campaigns are order-independent, parallelizable,
// and any failure is reproducible from the pair.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "twoq/criteria.hpp"
#include "twoq/entanglement.hpp"
#include "twoq/quartic.hpp"
#include "twoq/states.hpp"

namespace twoq {

struct CampaignConfig {
    Ensemble ensemble = Ensemble::ginibre_rank_4;
    long trials = 1000;
    uint64_t seed = 0;
    std::map<std::string, double> tolerances;  // overrides for eps_sep, eps_c, ferrari_tol
    std::vector<std::string> checks{"equivalence"};
    int threads = 1;
    bool collect_rows = false;  // keep per-draw scalars for CSV export
};

inline const std::vector<std::string>& registered_checks() {
    static const std::vector<std::string> names{
        "equivalence",    "signature",      "eq24-det",          "eq41-identity",
        "eq45-dpt",       "eq6-eq7-pure",   "eq8-pure-pt",       "eq50-53-convex",
        "weyl",           "vieta",          "ferrari-vs-oracle", "lu-invariance",
        "xstate-verdict", "eof-monotone"};
    return names;
}

inline bool is_registered_check(const std::string& name) {
    const auto& r = registered_checks();
    return std::find(r.begin(), r.end(), name) != r.end();
}

enum class Outcome { pass, fail, boundary };

struct DrawResult {
    Outcome outcome = Outcome::pass;
    double badness = 0.0;  // scaled distance to the tolerance edge; > 1 means over
    std::string note;      // failure detail, empty otherwise
    std::vector<std::string> tags;
};

struct WorstEntry {
    double badness = 0.0;
    uint64_t seed = 0;  // per-draw seed, not the master seed
    long index = -1;
};

struct CheckStats {
    std::string name;
    long pass = 0;
    long fail = 0;
    long boundary = 0;
    bool boundary_excess = false;  // boundary draws exceed 1% of trials
    std::vector<WorstEntry> worst;  // top 5 by badness, ties by draw index
    std::map<std::string, long> tags;
    std::string first_fail;
    long first_fail_index = -1;
};

struct DrawRow {
    long index = -1;
    double C = 0.0;
    double det_pt = 0.0;
    bool has_D = false;
    double D = 0.0;
    std::array<double, 4> etas{};
    std::string verdict;
};

struct CampaignReport {
    std::string ensemble;
    long trials = 0;
    uint64_t seed = 0;
    std::vector<std::string> checks;
    std::map<std::string, double> tolerances;  // effective values, echoed
    std::vector<CheckStats> stats;
    std::vector<DrawRow> rows;  // only when collect_rows was set
    double wall_seconds = 0.0;  // excluded from determinism comparisons

    bool passed() const {
        for (const auto& s : stats)
            if (s.fail > 0 || s.boundary_excess) return false;
        return true;
    }
};

namespace detail {

// Fixed per-check tolerances. Campaign-level eps_sep / eps_c / ferrari_tol
// are configurable; these are part of what the suite asserts.
constexpr double kSigEps = 1e-9;          // signature zero threshold
constexpr double kDetProdRel = 1e-10;     // det_pt vs eta product, relative
constexpr double kDetProdAbs = 1e-13;     // ... and absolute floor
constexpr double kEq24Tol = 1e-12;        // closed-form det vs cofactor det
constexpr double kEq41Tol = 1e-10;        // quartic side vs squared det
constexpr double kEq45Tol = 1e-12;        // det_pt vs -D
constexpr double kPureTol = 1e-10;        // pure-state identity suite
constexpr double kConvexSpecTol = 1e-10;  // convex family spectrum
constexpr double kConvexDetTol = 1e-12;   // convex family det_pt
constexpr double kWeylSlack = 1e-10;
constexpr double kVietaTol = 1e-8;        // scaled symmetric-function residual
constexpr double kRootTol = 1e-9;         // ferrari roots vs oracle, absolute
constexpr double kCTol = 1e-8;            // ferrari C vs oracle C
constexpr double kLuTol = 1e-9;           // local-unitary invariance
constexpr int kEofGrid = 1000;            // monotonicity grid points on [0,1]

// One draw plus lazily computed shared quantities.
struct DrawCase {
    double eps_sep = 1e-10;
    double eps_c = 1e-8;
    double ferrari_tol = -1.0;  // <= 0 means scale-adaptive
    uint64_t seed = 0;
    long index = 0;
    Draw draw;

    // Checks that need randomness beyond the draw get a generator derived
    // from (draw seed, check name), so their stream does not depend on
    // which other checks run in the same campaign.
    DrawRng check_rng(const std::string& check) const {
        uint64_t h = seed;
        for (char ch : check) h = splitmix64(h ^ static_cast<uint64_t>(ch));
        return DrawRng(h);
    }

    std::optional<PTSpectrum> pts_cache{};
    std::optional<ConcurrenceResult> oracle_cache{};
    std::optional<CanonicalParams> params_cache{};
    bool params_failed = false;
    std::string params_error{};

    const PTSpectrum& pts() {
        if (!pts_cache) pts_cache = pt_spectrum(draw.state);
        return *pts_cache;
    }
    const ConcurrenceResult& oracle() {
        if (!oracle_cache) oracle_cache = concurrence_oracle(draw.state);
        return *oracle_cache;
    }
    // Canonical parameters: free on canonical draws, via canonicalize
    // otherwise. nullptr when canonicalization failed loudly.
    const CanonicalParams* params() {
        if (params_cache) return &*params_cache;
        if (params_failed) return nullptr;
        if (draw.params) {
            params_cache = *draw.params;
            return &*params_cache;
        }
        try {
            params_cache = canonicalize(draw.state).params;
            return &*params_cache;
        } catch (const Error& e) {
            params_failed = true;
            params_error = e.what();
            return nullptr;
        }
    }
};

inline DrawResult fail_result(double badness, std::string note) {
    return {Outcome::fail, badness, std::move(note), {}};
}

inline DrawResult check_equivalence(DrawCase& k) {
    const PTSpectrum& p = k.pts();
    const double C = k.oracle().C;
    const double margin = std::min(std::abs(p.det_pt) / k.eps_sep, C / k.eps_c);
    const double base = 1.0 / (1.0 + margin);
    try {
        const Verdict v = verdict(p.det_pt, C, k.eps_sep, k.eps_c);
        if (v == Verdict::boundary) return {Outcome::boundary, base, "", {}};
        if (v == Verdict::inseparable && C <= k.eps_c)
            return {Outcome::boundary, base, "", {}};
        return {Outcome::pass, base, "", {}};
    } catch (const CriteriaDisagreement& e) {
        return fail_result(1e9 + base, e.what());
    }
}

inline DrawResult check_signature(DrawCase& k) {
    const PTSpectrum& p = k.pts();
    if (p.n_neg >= 2) {
        std::ostringstream os;
        os << "signature: " << p.n_neg << " negative transposed eigenvalues";
        return fail_result(1e9, os.str());
    }
    double prod = 1.0;
    double min_abs = 1e300;
    for (double e : p.etas) {
        prod *= e;
        min_abs = std::min(min_abs, std::abs(e));
    }
    const double prod_tol = kDetProdRel * std::abs(p.det_pt) + kDetProdAbs;
    const double prod_diff = std::abs(p.det_pt - prod);
    if (prod_diff > prod_tol) {
        std::ostringstream os;
        os << "signature: det_pt " << p.det_pt << " vs eta product " << prod;
        return fail_result(prod_diff / prod_tol, os.str());
    }
    if (p.det_pt < -kSigEps) {
        if (!(p.n_pos == 3 && p.n_zero == 0 && p.n_neg == 1)) {
            std::ostringstream os;
            os << "signature: det_pt " << p.det_pt << " but signature (" << p.n_pos << ","
               << p.n_zero << "," << p.n_neg << ")";
            return fail_result(1e9, os.str());
        }
        if (min_abs <= kSigEps) {
            std::ostringstream os;
            os << "signature: inseparable state has |eta| = " << min_abs;
            return fail_result(kSigEps / std::max(min_abs, 1e-300), os.str());
        }
    }
    return {Outcome::pass, prod_diff / prod_tol, "", {}};
}

inline DrawResult check_eq24(DrawCase& k) {
    const CanonicalParams* p = k.params();
    if (!p) return fail_result(1e9, "eq24-det: " + k.params_error);
    const double closed = canonical_det(*p);
    const double cof = det4(canonical_matrix(*p)).real();
    const double tol = kEq24Tol * (1.0 + std::abs(cof));
    const double diff = std::abs(closed - cof);
    if (diff > tol) {
        std::ostringstream os;
        os << "eq24-det: closed form " << closed << " vs cofactor " << cof;
        return fail_result(diff / tol, os.str());
    }
    return {Outcome::pass, diff / tol, "", {}};
}

inline DrawResult check_eq41(DrawCase& k) {
    const CanonicalParams* p = k.params();
    if (!p) return fail_result(1e9, "eq41-identity: " + k.params_error);
    const auto [lhs, rhs] = det_identity_check(*p);
    const double tol = kEq41Tol * (1.0 + rhs);
    const double diff = std::abs(lhs - rhs);
    if (diff > tol) {
        std::ostringstream os;
        os << "eq41-identity: quartic side " << lhs << " vs squared det " << rhs;
        return fail_result(diff / tol, os.str());
    }
    return {Outcome::pass, diff / tol, "", {}};
}

inline DrawResult check_eq45(DrawCase& k) {
    const CanonicalParams* p = k.params();
    if (!p) return fail_result(1e9, "eq45-dpt: " + k.params_error);
    const double D = d_criterion(*p);
    const double det_pt = det4(partial_transpose_b(canonical_matrix(*p))).real();
    const double tol = kEq45Tol * (1.0 + std::abs(D));
    const double diff = std::abs(det_pt + D);
    if (diff > tol) {
        std::ostringstream os;
        os << "eq45-dpt: det_pt " << det_pt << " vs -D " << -D;
        return fail_result(diff / tol, os.str());
    }
    return {Outcome::pass, diff / tol, "", {}};
}

inline DrawResult check_pure_identities(DrawCase& k) {
    if (k.draw.ket) {
        const Ket4& psi = *k.draw.ket;
        const double c_amp = 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);

        const Mat4 yy = kron(sigma_y(), sigma_y());
        const Ket4 flipped = mat_vec(yy, Ket4{std::conj(psi[0]), std::conj(psi[1]),
                                              std::conj(psi[2]), std::conj(psi[3])});
        const double c_overlap = std::abs(inner(psi, flipped));

        const double c_params = pure_concurrence(pure_params_from_ket(psi));

        const double y = std::sqrt(std::max(0.0, (1.0 - c_amp) * (1.0 + c_amp)));
        const Mat2 red = reduced_a(psi);
        const double h = 0.5 * (red(0, 0).real() + red(1, 1).real());
        const double rad = std::sqrt(0.25 * (red(0, 0).real() - red(1, 1).real()) *
                                         (red(0, 0).real() - red(1, 1).real()) +
                                     std::norm(red(0, 1)));
        const double worst = std::max(
            {std::abs(c_amp - c_overlap), std::abs(c_amp - c_params),
             std::abs((h + rad) - 0.5 * (1.0 + y)), std::abs((h - rad) - 0.5 * (1.0 - y))});
        if (worst > kPureTol) {
            std::ostringstream os;
            os << "pure identities: worst gap " << worst << " (C_amp " << c_amp
               << ", C_overlap " << c_overlap << ", C_params " << c_params << ")";
            return fail_result(worst / kPureTol, os.str());
        }
        return {Outcome::pass, worst / kPureTol, "", {}};
    }
    if (k.draw.params) {
        const double f1 = coeffs_from_canonical(*k.draw.params).f1;
        if (f1 > 1e-12) {
            std::ostringstream os;
            os << "pure identities: f1 = " << f1 << " positive on a canonical draw";
            return fail_result(f1 / 1e-12, os.str());
        }
        return {Outcome::pass, std::max(0.0, f1) / 1e-12, "", {}};
    }
    return {Outcome::pass, 0.0, "", {}};  // no pure or canonical structure to test
}

inline DrawResult check_pure_pt(DrawCase& k) {
    if (!k.draw.ket) return {Outcome::pass, 0.0, "", {}};
    const Ket4& psi = *k.draw.ket;
    const double c_amp = 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
    auto expected = pure_pt_eigen(c_amp);
    std::sort(expected.begin(), expected.end(), std::greater<double>());
    const auto& actual = k.pts().etas;
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        worst = std::max(worst, std::abs(actual[static_cast<size_t>(i)] -
                                         expected[static_cast<size_t>(i)]));
    if (worst > kPureTol) {
        std::ostringstream os;
        os << "pure pt: worst eigenvalue gap " << worst;
        return fail_result(worst / kPureTol, os.str());
    }
    return {Outcome::pass, worst / kPureTol, "", {}};
}

inline DrawResult check_convex(DrawCase& k) {
    if (!k.draw.convex) return {Outcome::pass, 0.0, "", {}};
    const auto [X, Y] = convex_xy(*k.draw.convex);
    if (X < -1e-12 || Y < -1e-12) {
        std::ostringstream os;
        os << "convex family: X = " << X << ", Y = " << Y << " negative";
        return fail_result(1e9, os.str());
    }
    const double half_sqrt_y = 0.5 * std::sqrt(std::max(0.0, Y));
    std::array<double, 4> expected{X + half_sqrt_y, X - half_sqrt_y, 0.0, 0.0};
    std::sort(expected.begin(), expected.end(), std::greater<double>());

    const Mat4& m = k.draw.state.mat();
    const auto lams = general_eig4_real(m * spin_flip(m), 1e-7);
    double worst_spec = 0.0;
    for (int i = 0; i < 4; ++i)
        worst_spec = std::max(worst_spec, std::abs(lams[static_cast<size_t>(i)] -
                                                   expected[static_cast<size_t>(i)]));

    const double det_pt = k.pts().det_pt;
    const double det_tol = kConvexDetTol * (1.0 + Y / 16.0);
    const double det_diff = std::abs(det_pt + Y / 16.0);

    const double badness = std::max(worst_spec / kConvexSpecTol, det_diff / det_tol);
    if (worst_spec > kConvexSpecTol || det_diff > det_tol) {
        std::ostringstream os;
        os << "convex family: spectrum gap " << worst_spec << ", det_pt " << det_pt
           << " vs -Y/16 " << -Y / 16.0;
        return fail_result(badness, os.str());
    }
    return {Outcome::pass, badness, "", {}};
}

inline DrawResult check_weyl(DrawCase& k) {
    DrawRng rng = k.check_rng("weyl");
    Mat4 x, y;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            x(i, j) = rng.cnormal();
            y(i, j) = rng.cnormal();
        }
    x = symmetrize(x);
    y = symmetrize(y);
    const auto lx = hermitian_eig(x).values;
    const auto ly = hermitian_eig(y).values;
    const auto lz = hermitian_eig(x + y).values;
    double worst = 0.0;  // largest violation, signed positive
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            const double sum = lx[static_cast<size_t>(i - 1)] + ly[static_cast<size_t>(j - 1)];
            if (i + j - 1 <= 4)
                worst = std::max(worst, lz[static_cast<size_t>(i + j - 2)] - sum);
            if (i + j - 4 >= 1)
                worst = std::max(worst, sum - lz[static_cast<size_t>(i + j - 5)]);
        }
    if (worst > kWeylSlack) {
        std::ostringstream os;
        os << "weyl: violation " << worst;
        return fail_result(worst / kWeylSlack, os.str());
    }
    return {Outcome::pass, std::max(0.0, worst) / kWeylSlack, "", {}};
}

inline DrawResult check_vieta(DrawCase& k) {
    const CanonicalParams* p = k.params();
    if (!p) return fail_result(1e9, "vieta: " + k.params_error);
    try {
        const DepressedQuartic d = depress(coeffs_from_canonical(*p));
        const FerrariIntermediates fr = ferrari_solve(d, k.ferrari_tol);
        const double resid = vieta_residual(d, fr);
        if (resid > kVietaTol) {
            std::ostringstream os;
            os << "vieta: scaled residual " << resid;
            return fail_result(resid / kVietaTol, os.str());
        }
        return {Outcome::pass, resid / kVietaTol, "", {}};
    } catch (const Error& e) {
        return fail_result(1e9, std::string("vieta: ") + e.what());
    }
}

inline DrawResult check_ferrari_vs_oracle(DrawCase& k) {
    const CanonicalParams* p = k.params();
    if (!p) return fail_result(1e9, "ferrari-vs-oracle: " + k.params_error);
    try {
        const ConcurrenceResult fer = concurrence_ferrari(*p, k.ferrari_tol);
        const Mat4 m = canonical_matrix(*p);
        const auto oracle = general_eig4_real(m * spin_flip(m), 1e-7);

        double worst_root = 0.0;
        for (int i = 0; i < 4; ++i)
            worst_root = std::max(worst_root, std::abs(fer.lambdas[static_cast<size_t>(i)] -
                                                       oracle[static_cast<size_t>(i)]));
        const DepressedQuartic d = depress(coeffs_from_canonical(*p));
        const double vieta = vieta_residual(d, ferrari_solve(d, k.ferrari_tol));

        const double c_oracle = std::max(
            0.0, std::sqrt(std::max(0.0, oracle[0])) - std::sqrt(std::max(0.0, oracle[1])) -
                     std::sqrt(std::max(0.0, oracle[2])) - std::sqrt(std::max(0.0, oracle[3])));
        const double c_diff = std::abs(fer.C - c_oracle);

        DrawResult out;
        out.tags.push_back(fer.branch_note);
        out.badness = std::max({worst_root / kRootTol, vieta / kVietaTol, c_diff / kCTol});
        if (worst_root > kRootTol || vieta > kVietaTol || c_diff > kCTol) {
            std::ostringstream os;
            os << "ferrari-vs-oracle: root gap " << worst_root << ", vieta " << vieta
               << ", C gap " << c_diff;
            out.outcome = Outcome::fail;
            out.note = os.str();
            return out;
        }
        out.outcome = Outcome::pass;
        return out;
    } catch (const Error& e) {
        return fail_result(1e9, std::string("ferrari-vs-oracle: ") + e.what());
    }
}

inline DrawResult check_lu_invariance(DrawCase& k) {
    DrawRng rng = k.check_rng("lu-invariance");
    const Mat2 ua = haar_su2(rng);
    const Mat2 ub = haar_su2(rng);
    const Mat4 u = kron(ua, ub);
    const DensityMatrix rotated = DensityMatrix::validate(u * k.draw.state.mat() * adjoint(u));

    const double c0 = k.oracle().C;
    const double c1 = concurrence_oracle(rotated).C;
    const double d0 = k.pts().det_pt;
    const double d1 = pt_spectrum(rotated).det_pt;

    const double worst = std::max(std::abs(c0 - c1), std::abs(d0 - d1));
    if (worst > kLuTol) {
        std::ostringstream os;
        os << "lu-invariance: C " << c0 << " -> " << c1 << ", det_pt " << d0 << " -> " << d1;
        return fail_result(worst / kLuTol, os.str());
    }
    return {Outcome::pass, worst / kLuTol, "", {}};
}

inline DrawResult check_xstate_verdict(DrawCase& k) {
    const PTSpectrum& p = k.pts();
    const double C = k.oracle().C;
    const double margin = std::min(p.negativity / k.eps_sep, C / k.eps_c);
    const double base = 1.0 / (1.0 + margin);
    if (p.negativity > k.eps_sep) {
        if (C > k.eps_c) return {Outcome::pass, base, "", {}};
        std::ostringstream os;
        os << "xstate-verdict: negativity " << p.negativity << " but C = " << C;
        return fail_result(1e9 + base, os.str());
    }
    if (C <= k.eps_c) return {Outcome::pass, base, "", {}};
    return {Outcome::boundary, base, "", {}};  // C barely over with negativity in band
}

inline DrawResult check_eof_monotone(DrawCase& k) {
    // Adjacent grid pair selected by draw index; indices >= the grid size
    // wrap, so any campaign of >= kEofGrid trials covers the whole grid.
    const int cell = static_cast<int>(k.index % (kEofGrid - 1));
    const double c0 = static_cast<double>(cell) / (kEofGrid - 1);
    const double c1 = static_cast<double>(cell + 1) / (kEofGrid - 1);
    const double gap = eof(c1) - eof(c0);
    if (!(gap > 0.0)) {
        std::ostringstream os;
        os << "eof-monotone: E(" << c1 << ") - E(" << c0 << ") = " << gap;
        return fail_result(1e9, os.str());
    }
    return {Outcome::pass, 1.0 / (1.0 + gap * kEofGrid), "", {}};
}

inline DrawResult dispatch_check(const std::string& name, DrawCase& k) {
    if (name == "equivalence") return check_equivalence(k);
    if (name == "signature") return check_signature(k);
    if (name == "eq24-det") return check_eq24(k);
    if (name == "eq41-identity") return check_eq41(k);
    if (name == "eq45-dpt") return check_eq45(k);
    if (name == "eq6-eq7-pure") return check_pure_identities(k);
    if (name == "eq8-pure-pt") return check_pure_pt(k);
    if (name == "eq50-53-convex") return check_convex(k);
    if (name == "weyl") return check_weyl(k);
    if (name == "vieta") return check_vieta(k);
    if (name == "ferrari-vs-oracle") return check_ferrari_vs_oracle(k);
    if (name == "lu-invariance") return check_lu_invariance(k);
    if (name == "xstate-verdict") return check_xstate_verdict(k);
    if (name == "eof-monotone") return check_eof_monotone(k);
    throw UnknownCheck("unknown check: " + name);
}

/// A numerical error while evaluating one draw is that draw's loud failure,
/// not the campaign's; only unknown names escape.
inline DrawResult eval_check(const std::string& name, DrawCase& k) {
    if (!is_registered_check(name)) throw UnknownCheck("unknown check: " + name);
    try {
        return dispatch_check(name, k);
    } catch (const Error& e) {
        return fail_result(1e9, name + ": " + e.what());
    }
}

struct CheckAccum {
    long pass = 0;
    long fail = 0;
    long boundary = 0;
    std::vector<WorstEntry> worst;
    std::map<std::string, long> tags;
    std::string first_fail;
    long first_fail_index = -1;
};

inline void push_worst(std::vector<WorstEntry>& worst, const WorstEntry& e) {
    worst.push_back(e);
    std::sort(worst.begin(), worst.end(), [](const WorstEntry& l, const WorstEntry& r) {
        if (l.badness != r.badness) return l.badness > r.badness;
        return l.index < r.index;
    });
    if (worst.size() > 5) worst.resize(5);
}

inline void accumulate(CheckAccum& acc, const DrawResult& r, uint64_t seed, long index) {
    switch (r.outcome) {
        case Outcome::pass: ++acc.pass; break;
        case Outcome::fail: ++acc.fail; break;
        case Outcome::boundary: ++acc.boundary; break;
    }
    if (r.outcome == Outcome::fail &&
        (acc.first_fail_index < 0 || index < acc.first_fail_index)) {
        acc.first_fail_index = index;
        acc.first_fail = r.note;
    }
    for (const auto& t : r.tags) ++acc.tags[t];
    push_worst(acc.worst, {r.badness, seed, index});
}

inline void merge(CheckAccum& into, const CheckAccum& from) {
    into.pass += from.pass;
    into.fail += from.fail;
    into.boundary += from.boundary;
    for (const auto& e : from.worst) push_worst(into.worst, e);
    for (const auto& [t, n] : from.tags) into.tags[t] += n;
    if (from.first_fail_index >= 0 &&
        (into.first_fail_index < 0 || from.first_fail_index < into.first_fail_index)) {
        into.first_fail_index = from.first_fail_index;
        into.first_fail = from.first_fail;
    }
}

} // namespace detail

/// Effective tolerance set: pinned defaults overlaid with the config map.
/// ferrari_tol is present only when explicitly set (default adapts to the
/// coefficient scale per instance).
inline std::map<std::string, double> effective_tolerances(const CampaignConfig& cfg) {
    std::map<std::string, double> out{{"eps_sep", 1e-10}, {"eps_c", 1e-8}};
    for (const auto& [key, value] : cfg.tolerances) {
        if (key != "eps_sep" && key != "eps_c" && key != "ferrari_tol")
            throw InvalidParams("unknown tolerance: " + key);
        if (!(value > 0.0)) {
            std::ostringstream os;
            os << "tolerance " << key << " = " << value << " must be positive";
            throw InvalidParams(os.str());
        }
        out[key] = value;
    }
    return out;
}

inline CampaignReport run_campaign(const CampaignConfig& cfg) {
    if (cfg.trials < 1) throw InvalidParams("run_campaign: trials must be >= 1");
    if (cfg.checks.empty()) throw InvalidParams("run_campaign: no checks requested");
    for (const auto& name : cfg.checks)
        if (!is_registered_check(name)) throw UnknownCheck("unknown check: " + name);

    const auto tols = effective_tolerances(cfg);
    const double eps_sep = tols.at("eps_sep");
    const double eps_c = tols.at("eps_c");
    const double ferrari_tol = tols.count("ferrari_tol") ? tols.at("ferrari_tol") : -1.0;

    const auto t0 = std::chrono::steady_clock::now();
    const size_t ncheck = cfg.checks.size();

    struct Partial {
        std::vector<detail::CheckAccum> acc;
        std::vector<DrawRow> rows;
        std::exception_ptr err;
    };

    auto run_range = [&](long lo, long hi, Partial& out) {
        out.acc.resize(ncheck);
        try {
            for (long index = lo; index < hi; ++index) {
                const uint64_t ds = draw_seed(cfg.seed, static_cast<uint64_t>(index));
                DrawRng rng(ds);
                detail::DrawCase k{.eps_sep = eps_sep,
                                   .eps_c = eps_c,
                                   .ferrari_tol = ferrari_tol,
                                   .seed = ds,
                                   .index = index,
                                   .draw = sample_draw(cfg.ensemble, rng)};
                for (size_t c = 0; c < ncheck; ++c) {
                    const DrawResult r = detail::eval_check(cfg.checks[c], k);
                    detail::accumulate(out.acc[c], r, ds, index);
                }
                if (cfg.collect_rows) {
                    DrawRow row;
                    row.index = index;
                    row.C = k.oracle().C;
                    row.det_pt = k.pts().det_pt;
                    row.etas = k.pts().etas;
                    if (const CanonicalParams* p = k.params()) {
                        row.has_D = true;
                        row.D = d_criterion(*p);
                    }
                    try {
                        row.verdict = verdict_name(verdict(row.det_pt, row.C, eps_sep, eps_c));
                    } catch (const CriteriaDisagreement&) {
                        row.verdict = "disagreement";
                    }
                    out.rows.push_back(std::move(row));
                }
            }
        } catch (...) {
            out.err = std::current_exception();
        }
    };

    const int nthreads = std::max(1, cfg.threads);
    std::vector<Partial> partials(static_cast<size_t>(nthreads));
    if (nthreads == 1) {
        run_range(0, cfg.trials, partials[0]);
    } else {
        const long block = (cfg.trials + nthreads - 1) / nthreads;
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) {
            const long lo = static_cast<long>(t) * block;
            const long hi = std::min(cfg.trials, lo + block);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi, std::ref(partials[static_cast<size_t>(t)]));
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& part : partials)
        if (part.err) std::rethrow_exception(part.err);

    CampaignReport rep;
    rep.ensemble = ensemble_name(cfg.ensemble);
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    rep.checks = cfg.checks;
    rep.tolerances = tols;
    rep.stats.resize(ncheck);
    for (size_t c = 0; c < ncheck; ++c) {
        detail::CheckAccum total;
        for (const auto& part : partials) {
            if (part.acc.empty()) continue;
            detail::merge(total, part.acc[c]);
        }
        CheckStats& s = rep.stats[c];
        s.name = cfg.checks[c];
        s.pass = total.pass;
        s.fail = total.fail;
        s.boundary = total.boundary;
        s.boundary_excess = total.boundary * 100 > cfg.trials;
        s.worst = total.worst;
        s.tags = total.tags;
        s.first_fail = total.first_fail;
        s.first_fail_index = total.first_fail_index;
    }
    if (cfg.collect_rows)
        for (auto& part : partials)
            for (auto& row : part.rows) rep.rows.push_back(std::move(row));
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Every intermediate the pipeline produces for one state, as a document:
/// the matrix, the transposed spectrum, the spectrum oracle, and when a
/// canonical form is reachable the full radical route (coefficients,
/// depressed form, resolvent values, roots) plus the determinant scalar D.
inline nlohmann::json state_trace(const DensityMatrix& rho,
                                  const CanonicalParams* known_params = nullptr) {
    using nlohmann::json;
    json t;

    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j)
            row.push_back({rho.mat()(i, j).real(), rho.mat()(i, j).imag()});
        rows.push_back(std::move(row));
    }
    t["matrix"] = std::move(rows);

    const PTSpectrum pts = pt_spectrum(rho);
    t["pt"] = {{"etas", pts.etas},
               {"det_pt", pts.det_pt},
               {"n_pos", pts.n_pos},
               {"n_zero", pts.n_zero},
               {"n_neg", pts.n_neg},
               {"negativity", pts.negativity}};

    double oracle_c = -1.0;
    try {
        const ConcurrenceResult oc = concurrence_oracle(rho);
        oracle_c = oc.C;
        t["oracle"] = {{"lambdas", oc.lambdas}, {"C", oc.C}};
    } catch (const Error& e) {
        t["oracle"] = nullptr;
        t["notes"]["oracle"] = e.what();
    }

    CanonicalParams params;
    bool have_params = false;
    if (known_params) {
        params = *known_params;
        have_params = true;
    } else {
        try {
            params = canonicalize(rho).params;
            have_params = true;
        } catch (const Error& e) {
            t["canonical"] = nullptr;
            t["notes"]["canonical"] = e.what();
        }
    }
    if (have_params) {
        t["canonical"] = {{"r", params.r},       {"s", params.s},       {"t", params.t},
                          {"u", params.u},       {"v", params.v},       {"w", params.w},
                          {"q", params.q},       {"tau1", params.tau1}, {"tau2", params.tau2},
                          {"tau3", params.tau3}};
        t["D"] = d_criterion(params);
        const QuarticSpec f = coeffs_from_canonical(params);
        t["quartic"] = {{"f1", f.f1}, {"f2", f.f2}, {"f3", f.f3}, {"f4", f.f4}};
        const DepressedQuartic d = depress(f);
        t["depressed"] = {{"delta", d.delta}, {"a", d.a}, {"b", d.b}, {"c", d.c}};
        try {
            const FerrariIntermediates fr = ferrari_solve(d);
            t["ferrari"] = {{"R", fr.R},
                            {"T", fr.T},
                            {"S", {fr.S.real(), fr.S.imag()}},
                            {"P", fr.P},
                            {"Q", fr.Q},
                            {"x", fr.x},
                            {"branch", fr.branch}};
            std::array<double, 4> lams{};
            for (int i = 0; i < 4; ++i)
                lams[static_cast<size_t>(i)] = fr.x[static_cast<size_t>(i)] + d.delta / 4.0;
            t["ferrari"]["lambdas"] = lams;
        } catch (const Error& e) {
            t["ferrari"] = nullptr;
            t["notes"]["ferrari"] = e.what();
        }
    }

    if (oracle_c >= 0.0) {
        try {
            t["verdict"] = verdict_name(verdict(pts.det_pt, oracle_c));
        } catch (const CriteriaDisagreement&) {
            t["verdict"] = "disagreement";
        }
    }
    return t;
}

/// Re-derive draw `index` of the campaign described by `cfg` and emit its
/// full trace. The check name is validated against the registry so stale
/// report references fail loudly.
inline nlohmann::json reproduce(const CampaignConfig& cfg, long index, const std::string& check) {
    if (!is_registered_check(check)) throw UnknownCheck("unknown check: " + check);
    if (index < 0) throw InvalidParams("reproduce: negative draw index");
    const uint64_t ds = draw_seed(cfg.seed, static_cast<uint64_t>(index));
    DrawRng rng(ds);
    const Draw draw = sample_draw(cfg.ensemble, rng);
    nlohmann::json t = state_trace(draw.state, draw.params ? &*draw.params : nullptr);
    t["ensemble"] = ensemble_name(cfg.ensemble);
    t["seed"] = cfg.seed;
    t["draw_seed"] = ds;
    t["index"] = index;
    t["check"] = check;
    return t;
}

} // namespace twoq
