#ifndef TWISTORCM_SCENARIO_HPP
#define TWISTORCM_SCENARIO_HPP

#include "twistorcm/twistor.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace twistorcm::scenario {

using exactalg::Poly;
using exactalg::QVec;
using exactalg::Rational;

enum class Check { Cm, Picard, Equator, Period };

struct FieldSpec {
    std::optional<std::string> preset;      // gaussian, eisenstein, zeta5, zeta8, zeta12
    std::vector<Rational> modulus;          // coefficients, lowest first
    std::vector<Rational> conjugate;        // optional conjugation image of the generator
};

struct ScenarioSpec {
    FieldSpec field;
    std::optional<QVec> alpha;              // nullopt = search
    std::optional<QVec> xi;                 // nullopt = search
    long d = 1;
    std::vector<QVec> classes;              // explicit classes
    std::optional<long> height;             // and/or height bound
    std::set<Check> checks;                 // expanded from "all"
    int precision_cap = 4096;
    int rho_s = 1;                          // base Picard number for the geometric dictionary
    uint64_t seed = 0;
};

/// Named preset moduli.
Poly preset_modulus(const std::string& name);
std::vector<std::string> preset_names();

/// Parse and validate a scenario from JSON text / from a file.  All numbers
/// must be exact (integers or "p/q" strings); floating point is rejected.
ScenarioSpec parse_scenario(const std::string& json_text);
ScenarioSpec load_scenario(const std::string& path);

struct RunConfig {
    int workers = 1;
    uint64_t seed = 0;           // echoed; every search is deterministic
    bool timings = false;        // include timing fields in JSON output
    std::optional<int> precision_cap_override;
};

/// One row of the survey report.  Check-specific fields are meaningful only
/// when the corresponding *_ran flag is set.
struct FibreRecord {
    QVec cls;
    twistor::Location location = twistor::Location::Generic;
    Rational m, norm;
    bool rejected = false;                  // norm <= 0: reported, not analyzed
    std::string error;                      // per-class construction failure

    int rho = -1;
    int rho_geometric = -1;

    bool cm_ran = false;
    std::vector<Rational> gamma, delta;     // power-basis coordinates in K
    std::vector<int> disc_signs;
    bool disc_totally_negative = false;
    Poly fibre_minpoly;                     // empty unless totally negative
    Rational fibre_disc;                    // disc of the absolute minimal polynomial
    bool solver_cm = false;
    int solver_degree = 0;
    int lt_dim = 0;
    bool two_route_equal = false;
    bool k0_equal = false;
    bool criteria_agree = false;
    bool cm_verdict = false;

    bool equator_ran = false;
    int period_field_degree = 0;
    int imaginary_span_dim = 0;
    int minimal_substructure_dim = 0;
    bool equator_cm = false;

    std::vector<std::string> alarms;
    double timing_ms = 0.0;
};

struct SurveyResult {
    ScenarioSpec spec;
    // structure data
    Poly field_modulus;
    QVec alpha_used, xi_used;
    exactalg::QMat gram;
    int rank = 0;
    int k0_degree = 0;
    std::vector<FibreRecord> records;
    bool period_identities_ran = false;
    bool period_identities_pass = false;
    // summary
    int count_generic = 0, count_equator = 0, count_pole = 0, count_rejected = 0;
    int count_errors = 0, count_alarms = 0;
    int exit_code = 0;
};

SurveyResult run_survey(const ScenarioSpec& spec, const RunConfig& config);

enum class ReportFormat { Json, Text, Csv };
ReportFormat parse_format(const std::string& name);

std::string emit_report(const SurveyResult& result, ReportFormat format,
                        const RunConfig& config);

/// Human-readable description of a preset field (the `fields` subcommand).
std::string describe_preset(const std::string& name);

} // namespace twistorcm::scenario

#endif
