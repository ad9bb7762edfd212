#include "twistorcm/scenario.hpp"

#include "twistorcm/errors.hpp"
#include "twistorcm/periodvalue.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace twistorcm::scenario {

using exactalg::FieldElement;
using exactalg::make_rational;
using exactalg::NumberField;
using exactalg::parse_rational;
using exactalg::PrecisionPolicy;
using exactalg::QMat;
using exactalg::rational_to_string;
using nlohmann::ordered_json;

Poly preset_modulus(const std::string& name) {
    auto ints = [](std::vector<long> c) {
        std::vector<Rational> v;
        for (long x : c) v.emplace_back(x);
        return Poly(std::move(v));
    };
    if (name == "gaussian") return ints({1, 0, 1});
    if (name == "eisenstein") return ints({1, 1, 1});
    if (name == "zeta5") return ints({1, 1, 1, 1, 1});
    if (name == "zeta8") return ints({1, 0, 0, 0, 1});
    if (name == "zeta12") return ints({1, 0, -1, 0, 1});
    throw InvalidInput("unknown field preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"gaussian", "eisenstein", "zeta5", "zeta8", "zeta12"};
}

namespace {

Rational json_to_rational(const ordered_json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InvalidInput("field '" + where + "': numbers must be integers or \"p/q\" strings");
}

std::vector<Rational> json_to_rational_vector(const ordered_json& j, const std::string& where) {
    if (!j.is_array()) throw InvalidInput("field '" + where + "' must be an array");
    std::vector<Rational> out;
    for (const auto& x : j) out.push_back(json_to_rational(x, where));
    return out;
}

} // namespace

ScenarioSpec parse_scenario(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("scenario parse error: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("scenario must be a JSON object");

    ScenarioSpec spec;
    if (!j.contains("field")) throw InvalidInput("scenario is missing 'field'");
    if (j["field"].is_string()) {
        spec.field.preset = j["field"].get<std::string>();
        preset_modulus(*spec.field.preset);  // validate the name
    } else if (j["field"].is_object()) {
        if (!j["field"].contains("modulus")) throw InvalidInput("field object needs 'modulus'");
        spec.field.modulus = json_to_rational_vector(j["field"]["modulus"], "field.modulus");
        if (j["field"].contains("conjugate"))
            spec.field.conjugate = json_to_rational_vector(j["field"]["conjugate"], "field.conjugate");
    } else {
        throw InvalidInput("'field' must be a preset name or an object");
    }

    auto read_element = [&](const char* key) -> std::optional<QVec> {
        if (!j.contains(key) || (j[key].is_string() && j[key] == "search")) return std::nullopt;
        return json_to_rational_vector(j[key], key);
    };
    spec.alpha = read_element("alpha");
    spec.xi = read_element("xi");

    if (!j.contains("d")) throw InvalidInput("scenario is missing 'd'");
    const Rational d = json_to_rational(j["d"], "d");
    if (d <= 0 || d.get_den() != 1) throw InvalidInput("field 'd' must be a positive integer");
    spec.d = static_cast<long>(d.get_num().get_si());

    if (j.contains("classes")) {
        if (!j["classes"].is_array()) throw InvalidInput("'classes' must be an array of vectors");
        for (const auto& c : j["classes"])
            spec.classes.push_back(json_to_rational_vector(c, "classes"));
    }
    if (j.contains("height")) {
        const Rational h = json_to_rational(j["height"], "height");
        if (h < 0 || h.get_den() != 1)
            throw InvalidInput("field 'height' must be a non-negative integer");
        spec.height = static_cast<long>(h.get_num().get_si());
    }
    if (spec.classes.empty() && !spec.height)
        throw InvalidInput("scenario needs explicit 'classes' and/or a 'height' bound");

    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw InvalidInput("'checks' must be an array");
        for (const auto& c : j["checks"]) {
            const std::string name = c.get<std::string>();
            if (name == "all") {
                spec.checks = {Check::Cm, Check::Picard, Check::Equator, Check::Period};
            } else if (name == "cm") spec.checks.insert(Check::Cm);
            else if (name == "picard") spec.checks.insert(Check::Picard);
            else if (name == "equator") spec.checks.insert(Check::Equator);
            else if (name == "period") spec.checks.insert(Check::Period);
            else throw InvalidInput("unknown check: " + name);
        }
    } else {
        spec.checks = {Check::Cm, Check::Picard, Check::Equator, Check::Period};
    }

    if (j.contains("precision_cap")) {
        const Rational p = json_to_rational(j["precision_cap"], "precision_cap");
        if (p < 64 || p.get_den() != 1) throw InvalidInput("'precision_cap' must be an integer >= 64");
        spec.precision_cap = static_cast<int>(p.get_num().get_si());
    }
    if (j.contains("rho_s")) {
        const Rational p = json_to_rational(j["rho_s"], "rho_s");
        if (p < 1 || p.get_den() != 1) throw InvalidInput("'rho_s' must be an integer >= 1");
        spec.rho_s = static_cast<int>(p.get_num().get_si());
    }
    if (j.contains("seed")) spec.seed = j["seed"].get<uint64_t>();
    return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

hodge::CMFieldData make_field(const ScenarioSpec& spec) {
    Poly modulus = spec.field.preset ? preset_modulus(*spec.field.preset)
                                     : Poly(std::vector<Rational>(spec.field.modulus));
    const auto K = NumberField::create(modulus);
    std::optional<FieldElement> conj_image;
    if (!spec.field.conjugate.empty()) {
        if (static_cast<int>(spec.field.conjugate.size()) != K->degree())
            throw InvalidInput("conjugate image needs one coordinate per field degree");
        conj_image = K->from_coords(spec.field.conjugate);
    }
    return hodge::CMFieldData::identify(K, conj_image);
}

FieldElement search_xi(const hodge::CMFieldData& field, const PrecisionPolicy& policy) {
    const auto& basis = field.cm.k0.basis();
    for (long h = 1; h <= 6; ++h) {
        std::vector<long> c(basis.size(), -h);
        while (true) {
            long mx = 0;
            for (long x : c) mx = std::max(mx, std::labs(x));
            if (mx == h) {
                FieldElement cand = field.field->zero();
                for (size_t i = 0; i < basis.size(); ++i) cand = cand + basis[i] * Rational(c[i]);
                if (!cand.is_zero()) {
                    const auto signs = exactalg::certified_signs_at_real_embeddings(
                        field.cm.k0_abs.to_abstract(cand), policy);
                    int pos = 0;
                    for (int s : *signs) pos += (s > 0);
                    if (pos == 1) return cand;
                }
            }
            size_t i = 0;
            while (i < c.size() && c[i] == h) c[i++] = -h;
            if (i == c.size()) break;
            ++c[i];
        }
    }
    throw BudgetExhausted("no trace-form twist with one positive embedding sign found");
}

std::vector<QVec> enumerate_classes(const ScenarioSpec& spec, int rank) {
    std::vector<QVec> out;
    for (const auto& c : spec.classes) {
        if (static_cast<int>(c.size()) != rank + 1)
            throw InvalidInput("explicit class vectors need r+1 coordinates");
        out.push_back(c);
    }
    if (spec.height && *spec.height >= 1) {
        const long h = *spec.height;
        std::vector<long> v(static_cast<size_t>(rank) + 1, -h);
        while (true) {
            long g = 0;
            int first_sign = 0;
            for (long x : v) {
                if (x != 0 && first_sign == 0) first_sign = x > 0 ? 1 : -1;
                g = std::gcd(g, std::labs(x));
            }
            if (g == 1 && first_sign > 0) {
                QVec q;
                for (long x : v) q.emplace_back(x);
                out.push_back(std::move(q));
            }
            size_t pos = 0;
            while (pos < v.size() && v[pos] == h) v[pos++] = -h;
            if (pos == v.size()) break;
            ++v[pos];
        }
    }
    return out;
}

FibreRecord analyze_class(const twistor::TwistorSetup& setup, const ScenarioSpec& spec,
                          const QVec& cls_vec, const PrecisionPolicy& policy) {
    FibreRecord rec;
    rec.cls = cls_vec;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto cls = twistor::classify_class(setup, cls_vec);
        rec.location = cls.location;
        rec.m = cls.m;
        rec.norm = cls.norm;
        if (!cls.admissible()) {
            rec.rejected = true;
            rec.error = "class not positive";
        } else {
            const bool want_picard = spec.checks.count(Check::Picard) > 0;
            const bool want_cm = spec.checks.count(Check::Cm) > 0;
            const bool want_equator = spec.checks.count(Check::Equator) > 0;
            const bool cm_here = want_cm && cls.location == twistor::Location::Generic;
            if ((want_picard || want_cm) && !cm_here) {
                rec.rho = twistor::picard_number_at(setup, cls, policy);
            }
            if (cm_here) {
                const auto v = twistor::verify_fibre_cm(setup, cls, policy);
                rec.rho = v.rho;
                rec.cm_ran = true;
                rec.gamma = v.quad.gamma.coords();
                rec.delta = v.quad.delta.coords();
                rec.disc_signs = v.quad.disc_signs;
                rec.disc_totally_negative = v.quad.totally_negative;
                if (v.quad.totally_negative) {
                    rec.fibre_minpoly = exactalg::minimal_polynomial(v.quad.eta);
                    rec.fibre_disc = exactalg::discriminant(rec.fibre_minpoly);
                }
                rec.solver_cm = v.solver_cm_full_degree;
                rec.solver_degree = v.solver.degree;
                rec.lt_dim = v.solver.lt_dimension;
                rec.two_route_equal = v.two_route_equal;
                rec.k0_equal = v.k0_equal;
                rec.criteria_agree = v.criteria_agree;
                rec.cm_verdict = v.cm_verdict;
                for (const auto& a : v.alarms) rec.alarms.push_back(a);
            }
            if (rec.rho >= 0) {
                rec.rho_geometric = twistor::geometric_picard(rec.rho, spec.rho_s);
                // jump locality expectations
                if (rec.rho >= 2 && cls.location != twistor::Location::Equator)
                    rec.alarms.push_back("excessive Picard jump off the equator");
                if (cls.location == twistor::Location::Generic && rec.rho != 1)
                    rec.alarms.push_back("generic point with rho != 1");
                if (cls.location == twistor::Location::Pole && rec.rho != 1)
                    rec.alarms.push_back("pole with rho != 1");
            }
            if (want_equator && cls.location == twistor::Location::Equator) {
                const auto e = twistor::equator_analysis(setup, cls, policy);
                rec.equator_ran = true;
                rec.period_field_degree = e.period_field_degree;
                rec.imaginary_span_dim = e.imaginary_span_dim;
                rec.minimal_substructure_dim = e.minimal_substructure_dim;
                rec.equator_cm = e.cm_verdict;
                for (const auto& a : e.alarms) rec.alarms.push_back(a);
            }
        }
    } catch (const TheoremViolation& e) {
        rec.alarms.push_back(e.what());
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    rec.timing_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    return rec;
}

bool check_period_identities() {
    using namespace periodvalue;
    const Coset r = Coset::symbol(kSigma), rbar = Coset::symbol(kSigmaBar);
    bool ok = true;
    for (auto n : {Normalization::A1, Normalization::B1, Normalization::C1}) {
        const auto cfs = coefficient_cosets(n);
        ok &= cfs.b == cfs.a * r * rbar.inverse();
        ok &= cfs.a * cfs.b * r * rbar == cfs.c.pow(2);
        ok &= fibre_period_value(n) == cfs.c;
    }
    return ok;
}

} // namespace

SurveyResult run_survey(const ScenarioSpec& spec, const RunConfig& config) {
    PrecisionPolicy policy;
    policy.cap_bits = config.precision_cap_override.value_or(spec.precision_cap);

    SurveyResult result;
    result.spec = spec;

    const auto field = make_field(spec);
    const FieldElement alpha = spec.alpha ? field.field->from_coords(*spec.alpha)
                                          : hodge::norm_one_primitive(field);
    const FieldElement xi =
        spec.xi ? field.field->from_coords(*spec.xi) : search_xi(field, policy);
    auto structure = hodge::build_cm_structure(field, alpha, xi, policy);
    result.field_modulus = field.field->modulus();
    result.alpha_used = alpha.coords();
    result.xi_used = xi.coords();
    result.gram = structure.space.gram();
    result.rank = structure.rank();
    result.k0_degree = field.cm.k0.degree();
    const auto setup = twistor::extend_by_polarization(std::move(structure), spec.d);

    const std::vector<QVec> classes = enumerate_classes(spec, setup.rank());
    result.records.resize(classes.size());
    const int workers = std::max(1, config.workers);
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    auto work = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= classes.size()) break;
            result.records[i] = analyze_class(setup, spec, classes[i], policy);
        }
    };
    if (workers == 1) {
        work();
    } else {
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    if (spec.checks.count(Check::Period)) {
        result.period_identities_ran = true;
        result.period_identities_pass = check_period_identities();
    }

    for (const auto& rec : result.records) {
        switch (rec.location) {
            case twistor::Location::Generic: ++result.count_generic; break;
            case twistor::Location::Equator: ++result.count_equator; break;
            case twistor::Location::Pole: ++result.count_pole; break;
        }
        if (rec.rejected) ++result.count_rejected;
        if (!rec.error.empty() && !rec.rejected) ++result.count_errors;
        result.count_alarms += static_cast<int>(rec.alarms.size());
    }
    if (result.period_identities_ran && !result.period_identities_pass) ++result.count_alarms;
    result.exit_code = result.count_alarms > 0 ? 1 : 0;
    return result;
}

ReportFormat parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "text") return ReportFormat::Text;
    if (name == "csv") return ReportFormat::Csv;
    throw InvalidInput("unknown report format: " + name);
}

namespace {

ordered_json rational_json(const Rational& q) { return rational_to_string(q); }

ordered_json vector_json(const QVec& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& q : v) arr.push_back(rational_json(q));
    return arr;
}

ordered_json poly_json(const Poly& p) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : p.coeffs()) arr.push_back(rational_json(c));
    return arr;
}

std::string check_name(Check c) {
    switch (c) {
        case Check::Cm: return "cm";
        case Check::Picard: return "picard";
        case Check::Equator: return "equator";
        case Check::Period: return "period";
    }
    return "?";
}

ordered_json record_json(const FibreRecord& rec, bool timings) {
    ordered_json j;
    j["class"] = vector_json(rec.cls);
    j["location"] = twistor::location_name(rec.location);
    j["m"] = rational_json(rec.m);
    j["norm"] = rational_json(rec.norm);
    if (rec.rejected) {
        j["rejected"] = true;
        return j;
    }
    if (!rec.error.empty()) {
        j["error"] = rec.error;
        return j;
    }
    if (rec.rho >= 0) {
        j["rho"] = rec.rho;
        j["rho_geometric"] = rec.rho_geometric;
    }
    if (rec.cm_ran) {
        j["gamma"] = vector_json(rec.gamma);
        j["delta"] = vector_json(rec.delta);
        ordered_json signs = ordered_json::array();
        for (int s : rec.disc_signs) signs.push_back(s);
        j["disc_signs"] = signs;
        j["disc_totally_negative"] = rec.disc_totally_negative;
        if (rec.disc_totally_negative) {
            j["fibre_minpoly"] = poly_json(rec.fibre_minpoly);
            j["fibre_disc"] = rational_json(rec.fibre_disc);
        }
        j["solver_cm"] = rec.solver_cm;
        j["solver_degree"] = rec.solver_degree;
        j["lt_dim"] = rec.lt_dim;
        j["two_route_equal"] = rec.two_route_equal;
        j["k0_equal"] = rec.k0_equal;
        j["criteria_agree"] = rec.criteria_agree;
        j["cm_verdict"] = rec.cm_verdict;
    }
    if (rec.equator_ran) {
        j["period_field_degree"] = rec.period_field_degree;
        j["imaginary_span_dim"] = rec.imaginary_span_dim;
        j["minimal_substructure_dim"] = rec.minimal_substructure_dim;
        j["equator_cm"] = rec.equator_cm;
    }
    if (!rec.alarms.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& a : rec.alarms) arr.push_back(a);
        j["alarms"] = arr;
    }
    if (timings) j["timing_ms"] = rec.timing_ms;
    return j;
}

std::string emit_json(const SurveyResult& r, const RunConfig& config) {
    ordered_json j;
    ordered_json spec;
    if (r.spec.field.preset) spec["field"] = *r.spec.field.preset;
    else spec["field_modulus"] = poly_json(Poly(std::vector<Rational>(r.spec.field.modulus)));
    spec["d"] = r.spec.d;
    if (r.spec.height) spec["height"] = *r.spec.height;
    spec["explicit_classes"] = static_cast<int>(r.spec.classes.size());
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.spec.checks) checks.push_back(check_name(c));
    spec["checks"] = checks;
    spec["precision_cap"] = r.spec.precision_cap;
    spec["rho_s"] = r.spec.rho_s;
    spec["seed"] = r.spec.seed;
    j["scenario"] = spec;

    ordered_json st;
    st["modulus"] = poly_json(r.field_modulus);
    st["alpha"] = vector_json(r.alpha_used);
    st["xi"] = vector_json(r.xi_used);
    st["rank"] = r.rank;
    st["k0_degree"] = r.k0_degree;
    ordered_json gram = ordered_json::array();
    for (int i = 0; i < r.gram.rows(); ++i) gram.push_back(vector_json(r.gram.row(i)));
    st["gram"] = gram;
    j["structure"] = st;

    ordered_json records = ordered_json::array();
    for (const auto& rec : r.records) records.push_back(record_json(rec, config.timings));
    j["records"] = records;

    if (r.period_identities_ran) {
        ordered_json pv;
        pv["pass"] = r.period_identities_pass;
        using namespace periodvalue;
        for (auto n : {Normalization::A1, Normalization::B1, Normalization::C1}) {
            const auto cfs = coefficient_cosets(n);
            ordered_json entry;
            entry["a"] = cfs.a.to_string();
            entry["b"] = cfs.b.to_string();
            entry["c"] = cfs.c.to_string();
            entry["fibre_period_value"] = fibre_period_value(n).to_string();
            pv[normalization_name(n)] = entry;
        }
        j["period_identities"] = pv;
    }

    ordered_json summary;
    summary["classes"] = static_cast<int>(r.records.size());
    summary["generic"] = r.count_generic;
    summary["equator"] = r.count_equator;
    summary["pole"] = r.count_pole;
    summary["rejected"] = r.count_rejected;
    summary["errors"] = r.count_errors;
    summary["alarms"] = r.count_alarms;
    summary["exit_code"] = r.exit_code;
    j["summary"] = summary;
    return j.dump(2) + "\n";
}

std::string emit_text(const SurveyResult& r, const RunConfig&) {
    std::ostringstream out;
    out << "structure: modulus " << r.field_modulus.to_string() << ", rank " << r.rank
        << ", d = " << r.spec.d << "\n";
    out << "classes: " << r.records.size() << " (generic " << r.count_generic << ", equator "
        << r.count_equator << ", pole " << r.count_pole << ", rejected " << r.count_rejected
        << ")\n\n";
    for (const auto& rec : r.records) {
        out << "[";
        for (size_t i = 0; i < rec.cls.size(); ++i)
            out << (i ? " " : "") << rational_to_string(rec.cls[i]);
        out << "] " << twistor::location_name(rec.location);
        if (rec.rejected) {
            out << " rejected (norm " << rational_to_string(rec.norm) << ")";
        } else if (!rec.error.empty()) {
            out << " error: " << rec.error;
        } else {
            if (rec.rho >= 0) out << " rho=" << rec.rho;
            if (rec.cm_ran)
                out << " cm=" << (rec.cm_verdict ? "yes" : "no")
                    << " solver_deg=" << rec.solver_degree
                    << " two_route=" << (rec.two_route_equal ? "ok" : "mismatch")
                    << " k0=" << (rec.k0_equal ? "ok" : "mismatch");
            if (rec.equator_ran)
                out << " equator_cm=" << (rec.equator_cm ? "yes" : "no")
                    << " period_deg=" << rec.period_field_degree
                    << " imag_dim=" << rec.imaginary_span_dim;
        }
        for (const auto& a : rec.alarms) out << "\n    ALARM: " << a;
        out << "  (" << rec.timing_ms << " ms)\n";
    }
    if (r.period_identities_ran)
        out << "\nperiod identities: " << (r.period_identities_pass ? "pass" : "FAIL") << "\n";
    out << "\nalarms: " << r.count_alarms << ", exit code " << r.exit_code << "\n";
    return out.str();
}

std::string emit_csv(const SurveyResult& r, const RunConfig&) {
    std::ostringstream out;
    out << "class,location,rho,fibre_disc\n";
    for (const auto& rec : r.records) {
        out << "\"";
        for (size_t i = 0; i < rec.cls.size(); ++i)
            out << (i ? " " : "") << rational_to_string(rec.cls[i]);
        out << "\"," << twistor::location_name(rec.location) << ",";
        if (rec.rho >= 0) out << rec.rho;
        out << ",";
        if (rec.cm_ran && rec.disc_totally_negative) out << rational_to_string(rec.fibre_disc);
        out << "\n";
    }
    return out.str();
}

} // namespace

std::string emit_report(const SurveyResult& result, ReportFormat format, const RunConfig& config) {
    switch (format) {
        case ReportFormat::Json: return emit_json(result, config);
        case ReportFormat::Text: return emit_text(result, config);
        case ReportFormat::Csv: return emit_csv(result, config);
    }
    throw InvalidInput("unknown report format");
}

std::string describe_preset(const std::string& name) {
    const Poly modulus = preset_modulus(name);
    const auto K = NumberField::create(modulus);
    const auto field = hodge::CMFieldData::identify(K);
    std::ostringstream out;
    out << name << ": Q[t]/(" << modulus.to_string("t") << ")\n";
    out << "  degree: " << K->degree() << "\n";
    out << "  conjugation: t -> " << field.conj().apply(K->generator()).to_string() << "\n";
    out << "  K0 degree: " << field.cm.k0.degree() << " with modulus "
        << field.cm.k0_abs.field->modulus().to_string("u") << "\n";
    const FieldElement alpha = hodge::norm_one_primitive(field);
    out << "  norm-one primitive: " << alpha.to_string() << " (minimal polynomial "
        << exactalg::minimal_polynomial(alpha).to_string() << ")\n";
    return out.str();
}

} // namespace twistorcm::scenario
