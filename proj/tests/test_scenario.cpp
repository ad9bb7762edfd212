#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "twistorcm/errors.hpp"
#include "twistorcm/scenario.hpp"

using namespace twistorcm;
using namespace twistorcm::scenario;

TEST_CASE("scenario parsing and validation") {
    const auto spec = parse_scenario(R"({
        "field": "gaussian",
        "alpha": "search",
        "xi": "search",
        "d": 2,
        "height": 3,
        "checks": ["all"]
    })");
    CHECK(spec.field.preset == "gaussian");
    CHECK(spec.d == 2);
    CHECK(spec.height == 3);
    CHECK(spec.checks.size() == 4);

    CHECK_THROWS_AS(parse_scenario(R"({"field": "gaussian", "d": 0, "height": 1})"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"field": "gaussian", "d": 2})"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"field": "gaussian", "d": "1/0", "height": 1})"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"field": "gaussian", "d": 1.5, "height": 1})"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario(R"({"field": "nonsense", "d": 1, "height": 1})"), InvalidInput);
    CHECK_THROWS_AS(parse_scenario("not json"), InvalidInput);

    // rationals as exact strings
    const auto spec2 = parse_scenario(R"({
        "field": {"modulus": [1, 0, 1]},
        "d": 1,
        "classes": [["1/2", 0, 1]],
        "checks": ["picard"]
    })");
    CHECK(spec2.classes.size() == 1);
    CHECK(spec2.classes[0][0] == exactalg::make_rational(1, 2));
    CHECK(spec2.checks.count(Check::Picard) == 1);
    CHECK(spec2.checks.count(Check::Cm) == 0);
}

TEST_CASE("preset moduli") {
    CHECK(preset_modulus("zeta8").degree() == 4);
    CHECK(preset_modulus("eisenstein").degree() == 2);
    for (const auto& name : preset_names()) CHECK(preset_modulus(name).degree() >= 2);
    CHECK_THROWS_AS(preset_modulus("zeta7-typo"), InvalidInput);
}

TEST_CASE("survey runs, exit code contract") {
    const auto spec = parse_scenario(R"({
        "field": "gaussian", "d": 2, "height": 2, "checks": ["all"]
    })");
    RunConfig config;
    const auto result = run_survey(spec, config);
    CHECK(result.exit_code == 0);
    CHECK(result.count_alarms == 0);
    CHECK(result.count_pole == 1);
    CHECK(result.count_generic > 0);
    CHECK(result.count_equator > 0);
    CHECK(result.period_identities_ran);
    CHECK(result.period_identities_pass);
    // all generic rows are CM with matching routes on the rank-2 corpus
    for (const auto& rec : result.records) {
        if (rec.cm_ran) {
            CHECK(rec.cm_verdict);
            CHECK(rec.two_route_equal);
            CHECK(rec.k0_equal);
            CHECK(rec.rho == 1);
            CHECK(rec.rho_geometric == rec.rho);  // rho_s defaults to 1
        }
    }
    // a rejected class is reported in-band and does not flip the exit code
    const auto spec_rej = parse_scenario(R"({
        "field": "gaussian", "d": 2, "classes": [[1, 0, 0], [0, 0, 0]], "checks": ["picard"]
    })");
    const auto r2 = run_survey(spec_rej, config);
    CHECK(r2.exit_code == 0);
    CHECK(r2.count_rejected == 1);
}

TEST_CASE("parallel equivalence and byte determinism") {
    const auto spec = parse_scenario(R"({
        "field": "gaussian", "d": 1, "height": 2, "checks": ["all"], "seed": 7
    })");
    RunConfig serial;
    serial.workers = 1;
    RunConfig parallel;
    parallel.workers = 4;
    const auto a = run_survey(spec, serial);
    const auto b = run_survey(spec, parallel);
    const std::string ja = emit_report(a, ReportFormat::Json, serial);
    const std::string jb = emit_report(b, ReportFormat::Json, parallel);
    CHECK(ja == jb);  // timing fields are excluded by default
    const auto c = run_survey(spec, serial);
    CHECK(emit_report(c, ReportFormat::Json, serial) == ja);
}

TEST_CASE("report formats") {
    const auto spec = parse_scenario(R"({
        "field": "gaussian", "d": 2, "classes": [[1, 0, 1], [1, 0, 0], [0, 0, 1]], "checks": ["all"]
    })");
    RunConfig config;
    const auto result = run_survey(spec, config);

    const std::string json_text = emit_report(result, ReportFormat::Json, config);
    CHECK(json_text.find("\"records\"") != std::string::npos);
    CHECK(json_text.find("\"summary\"") != std::string::npos);
    CHECK(json_text.find("\"fibre_minpoly\"") != std::string::npos);
    CHECK(json_text.find("timing_ms") == std::string::npos);

    const std::string text = emit_report(result, ReportFormat::Text, config);
    CHECK(text.find("generic") != std::string::npos);

    const std::string csv = emit_report(result, ReportFormat::Csv, config);
    // constant column count across rows
    size_t lines = 0, commas = std::string::npos;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const size_t n = static_cast<size_t>(std::count(line.begin(), line.end(), ','));
        if (lines == 0) commas = n;
        CHECK(n == commas);
        ++lines;
    }
    CHECK(lines == 4);  // header + three rows
}

TEST_CASE("explicit alpha and xi are validated") {
    // alpha = i as explicit coordinates, xi = 1
    const auto spec = parse_scenario(R"({
        "field": "gaussian", "alpha": [0, 1], "xi": [1, 0], "d": 2,
        "classes": [[1, 0, 1]], "checks": ["cm"]
    })");
    RunConfig config;
    const auto result = run_survey(spec, config);
    CHECK(result.exit_code == 0);
    // a non-norm-one alpha is rejected by construction
    const auto bad = parse_scenario(R"({
        "field": "gaussian", "alpha": [1, 1], "xi": [1, 0], "d": 2,
        "classes": [[1, 0, 1]], "checks": ["cm"]
    })");
    CHECK_THROWS_AS(run_survey(bad, config), InvalidInput);
}

TEST_CASE("height 0 gives an empty report with exit 0") {
    const auto spec = parse_scenario(R"({"field": "gaussian", "d": 2, "height": 0})");
    RunConfig config;
    const auto result = run_survey(spec, config);
    CHECK(result.records.empty());
    CHECK(result.exit_code == 0);
}

TEST_CASE("describe_preset") {
    const std::string text = describe_preset("zeta5");
    CHECK(text.find("degree: 4") != std::string::npos);
    CHECK(text.find("K0 degree: 2") != std::string::npos);
}
