// twoq: two-qubit entanglement analysis.
//
//   twoq analyze      full pipeline on one density-matrix file
//   twoq scan         randomized check campaign over an ensemble
//   twoq canonicalize local-unitary normal form of one state
//
// Exit codes: 0 success, 1 scan found failures, 2 input validation,
// 3 numerical pipeline, 64 usage.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "twoq/twoq.hpp"

namespace {

std::vector<std::string> split_checks(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void emit(const nlohmann::json& j, const std::string& output_path) {
    const std::string text = j.dump(2) + "\n";
    if (!output_path.empty()) twoq::write_text_file(output_path, text);
    std::cout << text;
}

std::optional<twoq::LabeledState> load_state(const std::string& input_path) {
    try {
        return twoq::parse_state_document(twoq::read_text_file(input_path));
    } catch (const twoq::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return std::nullopt;
    }
}

int cmd_analyze(const std::string& input, const std::string& output, double eps_sep,
                double eps_c, double ferrari_tol) {
    const auto ls = load_state(input);
    if (!ls) return 2;
    const std::string label = ls->label.empty() ? input : ls->label;
    try {
        const twoq::AnalysisReport rep =
            twoq::analyze_state(label, ls->state, eps_sep, eps_c, ferrari_tol);
        emit(twoq::analysis_to_json(rep), output);
    } catch (const twoq::Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_canonicalize(const std::string& input, const std::string& output) {
    const auto ls = load_state(input);
    if (!ls) return 2;
    try {
        const twoq::CanonicalizeResult cr = twoq::canonicalize(ls->state);
        emit(twoq::canonicalize_to_json(ls->label, cr), output);
    } catch (const twoq::Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_scan(const std::string& ensemble, long trials, uint64_t seed,
             const std::string& checks_csv, double eps_sep, double eps_c, double ferrari_tol,
             const std::string& output, const std::string& csv_path) {
    // flag validation errors are listed together before bailing out
    std::vector<std::string> flag_errors;
    twoq::CampaignConfig cfg;
    try {
        cfg.ensemble = twoq::parse_ensemble(ensemble);
    } catch (const twoq::Error& e) {
        flag_errors.emplace_back(e.what());
    }
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.checks = split_checks(checks_csv);
    if (cfg.checks.empty()) flag_errors.emplace_back("--checks: no check names given");
    for (const auto& c : cfg.checks)
        if (!twoq::is_registered_check(c)) flag_errors.emplace_back("unknown check: " + c);
    cfg.tolerances["eps_sep"] = eps_sep;
    cfg.tolerances["eps_c"] = eps_c;
    if (ferrari_tol > 0.0) cfg.tolerances["ferrari_tol"] = ferrari_tol;
    cfg.collect_rows = !csv_path.empty();
    if (!flag_errors.empty()) {
        for (const auto& m : flag_errors) std::cerr << "usage error: " << m << "\n";
        return 64;
    }
    try {
        const twoq::CampaignReport rep = twoq::run_campaign(cfg);
        for (const auto& s : rep.stats)
            std::cerr << "check " << s.name << ": pass=" << s.pass << " fail=" << s.fail
                      << " boundary=" << s.boundary
                      << (s.boundary_excess ? " (boundary excess)" : "") << "\n";
        emit(twoq::campaign_to_json(rep), output);
        if (!csv_path.empty()) twoq::write_text_file(csv_path, twoq::campaign_rows_csv(rep));
        return rep.passed() ? 0 : 1;
    } catch (const twoq::Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit entanglement analysis: concurrence, the partial-transpose "
                 "determinant criterion, and randomized cross-checks"};
    app.require_subcommand(1);

    std::string input, output, csv_path;
    std::string ensemble, checks_csv = "equivalence";
    long trials = 1000;
    uint64_t seed = 0;
    double eps_sep = 1e-10, eps_c = 1e-8, ferrari_tol = -1.0;

    const auto add_tolerances = [&](CLI::App* sub) {
        sub->add_option("--eps-sep", eps_sep, "separability band half-width on det_pt")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--eps-c", eps_c, "concurrence threshold for 'entangled'")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--ferrari-tol", ferrari_tol,
                        "quartic residual gate; non-positive means scale-adaptive");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "full pipeline on one state file");
    analyze->add_option("--input", input, "density-matrix JSON file")->required();
    analyze->add_option("--output", output, "also write the report to this file");
    add_tolerances(analyze);

    CLI::App* scan = app.add_subcommand("scan", "randomized check campaign");
    scan->add_option("--ensemble", ensemble,
                     "ginibre-rank-1..4, haar-pure, canonical-uniform, convex-combo, x-state")
        ->required();
    scan->add_option("--trials", trials, "draws per check")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    scan->add_option("--seed", seed, "campaign master seed")->capture_default_str();
    scan->add_option("--checks", checks_csv, "comma-separated check names")
        ->capture_default_str();
    scan->add_option("--output", output, "write the report to this file");
    scan->add_option("--csv", csv_path, "write per-draw scalars to this CSV file");
    add_tolerances(scan);

    CLI::App* canon = app.add_subcommand("canonicalize", "local-unitary normal form");
    canon->add_option("--input", input, "density-matrix JSON file")->required();
    canon->add_option("--output", output, "also write the result to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    if (*analyze) return cmd_analyze(input, output, eps_sep, eps_c, ferrari_tol);
    if (*scan)
        return cmd_scan(ensemble, trials, seed, checks_csv, eps_sep, eps_c, ferrari_tol, output,
                        csv_path);
    return cmd_canonicalize(input, output);
}
