#include "catch_amalgamated.hpp"

#include "twoq/io.hpp"

using namespace twoq;

namespace {

const char* kBellDoc = R"({
  "label": "bell",
  "matrix": [
    [0.5, 0, 0, 0.5],
    [0, 0, 0, 0],
    [0, 0, 0, 0],
    [0.5, 0, 0, 0.5]
  ]
})";

} // namespace

TEST_CASE("state documents parse numbers and [re, im] pairs") {
    const LabeledState ls = parse_state_document(kBellDoc);
    CHECK(ls.label == "bell");
    CHECK(ls.state.mat()(0, 3).real() == 0.5);

    // complex entries as pairs
    const std::string doc = R"({"matrix": [
        [0.5, 0, 0, [0, -0.5]],
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [[0, 0.5], 0, 0, 0.5]]})";
    const LabeledState c = parse_state_document(doc);
    CHECK(c.state.mat()(0, 3) == cplx(0.0, -0.5));
    CHECK(c.state.mat()(3, 0) == cplx(0.0, 0.5));
}

TEST_CASE("parse errors name the offending location") {
    CHECK_THROWS_AS(parse_state_document("not json"), ParseError);
    CHECK_THROWS_AS(parse_state_document("[1,2]"), ParseError);
    CHECK_THROWS_AS(parse_state_document(R"({"matrix": [[1,2],[3,4]]})"), ParseError);

    try {
        parse_state_document(R"({"matrix": [
            [0.5, 0, 0, 0.5],
            [0, "zero", 0, 0],
            [0, 0, 0, 0],
            [0.5, 0, 0, 0.5]]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("(1,1)") != std::string::npos);
    }

    try {
        parse_state_document(R"({"matrix": [
            [0.5, 0, 0, 0.5],
            [0, 0, 0, 0],
            [0, 0, 0],
            [0.5, 0, 0, 0.5]]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
    }
}

TEST_CASE("validation failures propagate from parsed documents") {
    // trace 0.5: parses fine, fails the state gate
    CHECK_THROWS_AS(parse_state_document(R"({"matrix": [
        [0.25, 0, 0, 0],
        [0, 0.25, 0, 0],
        [0, 0, 0, 0],
        [0, 0, 0, 0]]})"),
                    TraceNotOne);
}

TEST_CASE("state documents round-trip exactly") {
    const LabeledState ls = parse_state_document(kBellDoc);
    const nlohmann::json doc = state_document(ls.label, ls.state.mat());
    const LabeledState back = parse_state_document(doc.dump());
    CHECK(back.label == ls.label);
    CHECK(max_abs(back.state.mat() - ls.state.mat()) == 0.0);
}

TEST_CASE("analysis reports round-trip field for field") {
    const LabeledState ls = parse_state_document(kBellDoc);
    const AnalysisReport rep = analyze_state(ls.label, ls.state);
    const nlohmann::json j = analysis_to_json(rep);
    const AnalysisReport back = analysis_from_json(j);
    CHECK(analysis_to_json(back).dump() == j.dump());
    CHECK(back.oracle.C == rep.oracle.C);
    CHECK(back.pt.det_pt == rep.pt.det_pt);
    CHECK(back.eof_value == rep.eof_value);
    CHECK(back.v == rep.v);
    REQUIRE(back.params.has_value());
    CHECK(back.D == rep.D);
}

TEST_CASE("analysis carries both concurrence routes on a canonical-friendly state") {
    const LabeledState ls = parse_state_document(kBellDoc);
    const AnalysisReport rep = analyze_state("bell", ls.state);
    CHECK(rep.oracle.C == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(rep.ferrari.has_value());
    CHECK(rep.ferrari->C == Catch::Approx(1.0).margin(1e-9));
    CHECK(rep.agreement);
    CHECK(rep.v == Verdict::inseparable);
    CHECK(rep.eof_value == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.D == Catch::Approx(1.0 / 16.0).margin(1e-9));
}

TEST_CASE("campaign csv has one row per draw and a fixed header") {
    CampaignConfig cfg;
    cfg.ensemble = Ensemble::ginibre_rank_4;
    cfg.trials = 25;
    cfg.seed = 3;
    cfg.checks = {"equivalence"};
    cfg.collect_rows = true;
    const CampaignReport rep = run_campaign(cfg);
    const std::string csv = campaign_rows_csv(rep);
    REQUIRE(csv.rfind("index,C,det_pt,D,eta1,eta2,eta3,eta4,verdict\n", 0) == 0);
    const long lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 26);
}

TEST_CASE("campaign body json excludes wall time; full json includes it") {
    CampaignConfig cfg;
    cfg.ensemble = Ensemble::haar_pure;
    cfg.trials = 10;
    cfg.seed = 1;
    cfg.checks = {"equivalence"};
    const CampaignReport rep = run_campaign(cfg);
    const nlohmann::json body = campaign_body_json(rep);
    CHECK_FALSE(body.contains("wall_seconds"));
    const nlohmann::json full = campaign_to_json(rep);
    CHECK(full.contains("wall_seconds"));
    CHECK(full.at("config").at("ensemble").get<std::string>() == "haar-pure");
    CHECK(full.at("config").at("tolerances").contains("eps_sep"));
    CHECK(full.at("passed").get<bool>());
}

TEST_CASE("canonicalize documents carry params, unitary, residual, and D") {
    const LabeledState ls = parse_state_document(kBellDoc);
    const CanonicalizeResult cr = canonicalize(ls.state);
    const nlohmann::json j = canonicalize_to_json("bell", cr);
    CHECK(j.at("label").get<std::string>() == "bell");
    CHECK(j.at("residual").get<double>() < 1e-9);
    CHECK(j.at("D").get<double>() == Catch::Approx(1.0 / 16.0).margin(1e-9));
    CHECK(j.at("params").contains("tau3"));
    CHECK(j.at("unitary").at("ua").size() == 2);
}

TEST_CASE("file helpers write and read back") {
    const std::string path = "/tmp/twoq_io_test.json";
    write_text_file(path, "{\"k\": 1}");
    CHECK(read_text_file(path) == "{\"k\": 1}");
    CHECK_THROWS_AS(read_text_file("/nonexistent/dir/file.json"), ParseError);
}
