#pragma once

// Document formats: the density-matrix input format, the single-state
// analysis report, campaign reports, and the flat per-draw CSV. All
// structured documents are JSON; doubles survive a round trip exactly.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "twoq/criteria.hpp"
#include "twoq/entanglement.hpp"
#include "twoq/harness.hpp"
#include "twoq/states.hpp"

namespace twoq {

struct LabeledState {
    std::string label;
    DensityMatrix state;
};

/// Parse {"label"?: string, "matrix": 4 rows of 4 entries}, each entry a
/// real number or an [re, im] pair. Malformed entries are reported with
/// their row and column; the matrix itself is then validated as a state.
inline LabeledState parse_state_document(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("input is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("input document: expected a JSON object");
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw ParseError("input document: label must be a string");
        label = j["label"].get<std::string>();
    }
    if (!j.contains("matrix")) throw ParseError("input document: missing \"matrix\"");
    const auto& rows = j["matrix"];
    if (!rows.is_array() || rows.size() != 4)
        throw ParseError("input document: \"matrix\" must be an array of 4 rows");
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
        const auto& row = rows[static_cast<size_t>(r)];
        if (!row.is_array() || row.size() != 4) {
            std::ostringstream os;
            os << "matrix row " << r << ": expected 4 entries";
            throw ParseError(os.str());
        }
        for (int c = 0; c < 4; ++c) {
            const auto& cell = row[static_cast<size_t>(c)];
            if (cell.is_number()) {
                m(r, c) = cplx(cell.get<double>(), 0.0);
            } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                       cell[1].is_number()) {
                m(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
            } else {
                std::ostringstream os;
                os << "matrix entry (" << r << "," << c << "): expected a number or [re, im]";
                throw ParseError(os.str());
            }
        }
    }
    return {std::move(label), DensityMatrix::validate(m)};
}

inline nlohmann::json state_document(const std::string& label, const Mat4& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    nlohmann::json j;
    if (!label.empty()) j["label"] = label;
    j["matrix"] = std::move(rows);
    return j;
}

// ----- single-state analysis --------------------------------------------

struct AnalysisReport {
    std::string label;
    double eps_sep = 1e-10;
    double eps_c = 1e-8;
    double ferrari_tol = -1.0;  // <= 0: scale-adaptive default
    ConcurrenceResult oracle;
    std::optional<ConcurrenceResult> ferrari;
    std::string ferrari_note;  // why the radical path is absent
    std::optional<CanonicalParams> params;
    double canonical_residual = 0.0;
    double D = 0.0;
    std::string canonical_note;  // why the canonical section is absent
    double eof_value = 0.0;
    PTSpectrum pt;
    Verdict v = Verdict::boundary;
    bool agreement = false;
};

/// Full pipeline on one validated state. The spectrum-oracle route and the
/// transposed-spectrum route must succeed (their failure is a pipeline
/// error); the canonical route degrades into a note, since states at the
/// edge of the positivity gate can defeat canonicalization while the
/// verdict is still well defined.
inline AnalysisReport analyze_state(const std::string& label, const DensityMatrix& rho,
                                    double eps_sep = 1e-10, double eps_c = 1e-8,
                                    double ferrari_tol = -1.0) {
    AnalysisReport rep;
    rep.label = label;
    rep.eps_sep = eps_sep;
    rep.eps_c = eps_c;
    rep.ferrari_tol = ferrari_tol;

    rep.oracle = concurrence_oracle(rho);
    rep.pt = pt_spectrum(rho);
    rep.eof_value = eof(rep.oracle.C);

    try {
        const CanonicalizeResult cr = canonicalize(rho);
        rep.params = cr.params;
        rep.canonical_residual = cr.residual;
        rep.D = d_criterion(cr.params);
        try {
            rep.ferrari = concurrence_ferrari(cr.params, ferrari_tol);
        } catch (const Error& e) {
            rep.ferrari_note = e.what();
        }
    } catch (const Error& e) {
        rep.canonical_note = e.what();
    }

    rep.agreement = (rep.pt.det_pt < 0.0) == (rep.oracle.C > eps_c);
    rep.v = verdict(rep.pt.det_pt, rep.oracle.C, eps_sep, eps_c);
    return rep;
}

inline nlohmann::json canonical_params_json(const CanonicalParams& p) {
    return {{"r", p.r}, {"s", p.s}, {"t", p.t}, {"u", p.u},       {"v", p.v},
            {"w", p.w}, {"q", p.q}, {"tau1", p.tau1}, {"tau2", p.tau2}, {"tau3", p.tau3}};
}

inline CanonicalParams canonical_params_from_json(const nlohmann::json& j) {
    CanonicalParams p;
    p.r = j.at("r").get<double>();
    p.s = j.at("s").get<double>();
    p.t = j.at("t").get<double>();
    p.u = j.at("u").get<double>();
    p.v = j.at("v").get<double>();
    p.w = j.at("w").get<double>();
    p.q = j.at("q").get<double>();
    p.tau1 = j.at("tau1").get<double>();
    p.tau2 = j.at("tau2").get<double>();
    p.tau3 = j.at("tau3").get<double>();
    return p;
}

inline nlohmann::json concurrence_json(const ConcurrenceResult& c) {
    return {{"value", c.C},
            {"lambdas", c.lambdas},
            {"path", c.path},
            {"branch_note", c.branch_note}};
}

inline nlohmann::json analysis_to_json(const AnalysisReport& rep) {
    nlohmann::json j;
    j["label"] = rep.label;
    j["tolerances"] = {{"eps_sep", rep.eps_sep}, {"eps_c", rep.eps_c}};
    if (rep.ferrari_tol > 0.0) j["tolerances"]["ferrari_tol"] = rep.ferrari_tol;
    j["concurrence"]["oracle"] = concurrence_json(rep.oracle);
    j["concurrence"]["ferrari"] =
        rep.ferrari ? concurrence_json(*rep.ferrari) : nlohmann::json(nullptr);
    if (rep.params) {
        j["canonical"] = {{"params", canonical_params_json(*rep.params)},
                          {"residual", rep.canonical_residual},
                          {"D", rep.D}};
    } else {
        j["canonical"] = nullptr;
    }
    if (!rep.canonical_note.empty()) j["notes"]["canonical"] = rep.canonical_note;
    if (!rep.ferrari_note.empty()) j["notes"]["ferrari"] = rep.ferrari_note;
    j["eof"] = rep.eof_value;
    j["pt"] = {{"etas", rep.pt.etas},     {"det_pt", rep.pt.det_pt},
               {"n_pos", rep.pt.n_pos},   {"n_zero", rep.pt.n_zero},
               {"n_neg", rep.pt.n_neg},   {"negativity", rep.pt.negativity}};
    j["verdict"] = verdict_name(rep.v);
    j["agreement"] = rep.agreement;
    return j;
}

inline ConcurrenceResult concurrence_from_json(const nlohmann::json& j) {
    ConcurrenceResult c;
    c.C = j.at("value").get<double>();
    c.lambdas = j.at("lambdas").get<std::array<double, 4>>();
    const std::string path = j.at("path").get<std::string>();
    c.path = path == "oracle" ? "oracle" : path == "ferrari" ? "ferrari" : "";
    const std::string note = j.at("branch_note").get<std::string>();
    c.branch_note = note == "x2" ? "x2" : note == "x4" ? "x4" : "";
    return c;
}

/// Inverse of analysis_to_json for the round-trip contract.
inline AnalysisReport analysis_from_json(const nlohmann::json& j) {
    AnalysisReport rep;
    rep.label = j.at("label").get<std::string>();
    rep.eps_sep = j.at("tolerances").at("eps_sep").get<double>();
    rep.eps_c = j.at("tolerances").at("eps_c").get<double>();
    if (j.at("tolerances").contains("ferrari_tol"))
        rep.ferrari_tol = j.at("tolerances").at("ferrari_tol").get<double>();
    rep.oracle = concurrence_from_json(j.at("concurrence").at("oracle"));
    if (!j.at("concurrence").at("ferrari").is_null())
        rep.ferrari = concurrence_from_json(j.at("concurrence").at("ferrari"));
    if (!j.at("canonical").is_null()) {
        rep.params = canonical_params_from_json(j.at("canonical").at("params"));
        rep.canonical_residual = j.at("canonical").at("residual").get<double>();
        rep.D = j.at("canonical").at("D").get<double>();
    }
    if (j.contains("notes")) {
        if (j["notes"].contains("canonical"))
            rep.canonical_note = j["notes"]["canonical"].get<std::string>();
        if (j["notes"].contains("ferrari"))
            rep.ferrari_note = j["notes"]["ferrari"].get<std::string>();
    }
    rep.eof_value = j.at("eof").get<double>();
    const auto& pt = j.at("pt");
    rep.pt.etas = pt.at("etas").get<std::array<double, 4>>();
    rep.pt.det_pt = pt.at("det_pt").get<double>();
    rep.pt.n_pos = pt.at("n_pos").get<int>();
    rep.pt.n_zero = pt.at("n_zero").get<int>();
    rep.pt.n_neg = pt.at("n_neg").get<int>();
    rep.pt.negativity = pt.at("negativity").get<double>();
    const std::string v = j.at("verdict").get<std::string>();
    rep.v = v == "separable"     ? Verdict::separable
            : v == "inseparable" ? Verdict::inseparable
                                 : Verdict::boundary;
    rep.agreement = j.at("agreement").get<bool>();
    return rep;
}

// ----- campaign reports -------------------------------------------------

/// Report body; wall time is carried separately so byte comparisons of the
/// body express the determinism contract directly.
inline nlohmann::json campaign_body_json(const CampaignReport& rep) {
    nlohmann::json j;
    j["config"] = {{"ensemble", rep.ensemble},
                   {"trials", rep.trials},
                   {"seed", rep.seed},
                   {"checks", rep.checks},
                   {"tolerances", rep.tolerances}};
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& s : rep.stats) {
        nlohmann::json sj;
        sj["name"] = s.name;
        sj["pass"] = s.pass;
        sj["fail"] = s.fail;
        sj["boundary"] = s.boundary;
        sj["boundary_excess"] = s.boundary_excess;
        nlohmann::json worst = nlohmann::json::array();
        for (const auto& w : s.worst)
            worst.push_back({{"badness", w.badness}, {"seed", w.seed}, {"index", w.index}});
        sj["worst"] = std::move(worst);
        sj["tags"] = s.tags;
        if (s.first_fail_index >= 0) {
            sj["first_fail"] = {{"index", s.first_fail_index}, {"note", s.first_fail}};
        }
        stats.push_back(std::move(sj));
    }
    j["checks"] = std::move(stats);
    j["passed"] = rep.passed();
    return j;
}

inline nlohmann::json campaign_to_json(const CampaignReport& rep) {
    nlohmann::json j = campaign_body_json(rep);
    j["wall_seconds"] = rep.wall_seconds;
    return j;
}

/// Flat per-draw scalars for external plotting. D is blank on draws where
/// no canonical form was reached.
inline std::string campaign_rows_csv(const CampaignReport& rep) {
    std::ostringstream os;
    os << "index,C,det_pt,D,eta1,eta2,eta3,eta4,verdict\n";
    os.precision(17);
    for (const auto& r : rep.rows) {
        os << r.index << ',' << r.C << ',' << r.det_pt << ',';
        if (r.has_D) os << r.D;
        os << ',' << r.etas[0] << ',' << r.etas[1] << ',' << r.etas[2] << ',' << r.etas[3]
           << ',' << r.verdict << '\n';
    }
    return os.str();
}

// ----- canonicalize documents -------------------------------------------

inline nlohmann::json mat2_json(const Mat2& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 2; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 2; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::json canonicalize_to_json(const std::string& label,
                                           const CanonicalizeResult& cr) {
    nlohmann::json j;
    if (!label.empty()) j["label"] = label;
    j["params"] = canonical_params_json(cr.params);
    j["unitary"] = {{"ua", mat2_json(cr.lu.ua)}, {"ub", mat2_json(cr.lu.ub)}};
    j["residual"] = cr.residual;
    j["D"] = d_criterion(cr.params);
    return j;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << text;
}

} // namespace twoq
