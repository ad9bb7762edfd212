// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion.  Exit code 0 only when all
// criteria pass.  Never compiled out; all checks are exact unless a criterion
// itself names a numeric tolerance.
#include "twistorcm/errors.hpp"
#include "twistorcm/irreducible.hpp"
#include "twistorcm/periodvalue.hpp"
#include "twistorcm/scenario.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

using namespace twistorcm;
using exactalg::Integer;
using exactalg::make_rational;
using exactalg::Poly;
using exactalg::QMat;
using exactalg::QVec;
using exactalg::Rational;
using scenario::Check;
using scenario::RunConfig;
using scenario::ScenarioSpec;
using scenario::SurveyResult;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
    int id;
    bool pass;
    std::string detail;
};

std::vector<Criterion> results;

void report(int id, bool pass, const std::string& detail) {
    results.push_back({id, pass, detail});
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << detail << "\n"
              << std::flush;
}

// ---------------------------------------------------------------------------
// corpus: 21 CM structures over the preset fields, d in {1, 2, 4}
// ---------------------------------------------------------------------------

struct CorpusEntry {
    std::string name;
    ScenarioSpec spec;
    SurveyResult result;
    int rank = 0;
};

std::vector<CorpusEntry> build_corpus() {
    std::vector<CorpusEntry> corpus;
    const std::vector<std::string> presets = {"gaussian", "eisenstein", "zeta5", "zeta8", "zeta12"};
    const std::vector<long> ds = {1, 2, 4};
    for (const auto& preset : presets) {
        for (long d : ds) {
            ScenarioSpec spec;
            spec.field.preset = preset;
            spec.d = d;
            spec.height = 3;
            spec.checks = {Check::Cm, Check::Picard, Check::Equator, Check::Period};
            corpus.push_back({preset + "-d" + std::to_string(d), spec, {}, 0});
        }
    }
    // rank-2 variants with a different trace-form twist (xi = 2, 3)
    for (const auto& preset : {std::string("gaussian"), std::string("eisenstein")}) {
        for (long d : ds) {
            ScenarioSpec spec;
            spec.field.preset = preset;
            spec.xi = QVec{Rational(preset == "gaussian" ? 2 : 3), Rational(0)};
            spec.d = d;
            spec.height = 3;
            spec.checks = {Check::Cm, Check::Picard, Check::Equator, Check::Period};
            corpus.push_back({preset + "-xi-variant-d" + std::to_string(d), spec, {}, 0});
        }
    }
    return corpus;
}

bool known_transfer_alarm(const std::string& alarm) {
    return alarm.rfind("solver endomorphism field is", 0) == 0 ||
           alarm.rfind("closed-formula field and solver field differ", 0) == 0 ||
           alarm.rfind("maximal totally real subfield differs", 0) == 0 ||
           alarm.rfind("CM criteria disagree", 0) == 0 ||
           alarm.rfind("gamma^2 - 4 delta not totally negative", 0) == 0;
}

// ---------------------------------------------------------------------------
// criterion 7 helpers: independent numeric root finding
// ---------------------------------------------------------------------------

uint64_t rng_state = 0x71c3a5f0d6e4b219ULL;
long rng_next(long lo, long hi) {
    rng_state ^= rng_state << 13;
    rng_state ^= rng_state >> 7;
    rng_state ^= rng_state << 17;
    return lo + static_cast<long>(rng_state % static_cast<uint64_t>(hi - lo + 1));
}

// round a rational to ~bits of precision, to keep Newton heights bounded
Rational round_bits(const Rational& x, int bits) {
    Integer scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    Rational scaled = x * Rational(scale);
    Integer rounded;
    Rational half = scaled + make_rational(1, 2);
    mpz_fdiv_q(rounded.get_mpz_t(), half.get_num().get_mpz_t(), half.get_den().get_mpz_t());
    return make_rational(rounded, scale);
}

// exact-arithmetic Newton polish from a floating seed; the seed comes from an
// independent route (companion-matrix eigenvalues)
std::optional<Rational> newton_polish(const Poly& f, const Poly& df, double seed) {
    Rational x = round_bits(Rational(seed), 64);
    for (int it = 0; it < 64; ++it) {
        const Rational fx = f.eval(x);
        const Rational dfx = df.eval(x);
        if (dfx == 0) return std::nullopt;
        const Rational step = fx / dfx;
        x = round_bits(x - step, 320);
        if (abs(step) < make_rational(1, Integer(1) << 100)) return x;
    }
    return std::nullopt;
}

bool substrate_real_roots() {
    for (int trial = 0; trial < 100; ++trial) {
        // random squarefree polynomial of degree <= 10
        Poly f;
        while (true) {
            const int deg = 1 + static_cast<int>(rng_next(0, 9));
            std::vector<Rational> c;
            for (int i = 0; i <= deg; ++i) c.emplace_back(rng_next(-9, 9));
            if (c.back() == 0) c.back() = 1;
            f = exactalg::squarefree_part(Poly(std::move(c)));
            if (f.degree() >= 1) break;
        }
        const auto cert = exactalg::count_real_roots(f);

        // independent numeric route: companion matrix eigenvalues
        const int n = f.degree();
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            companion(i, n - 1) = -Rational(f.coeff(i) / f.leading()).get_d();
            if (i + 1 < n) companion(i + 1, i) = 1.0;
        }
        const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
        std::vector<Rational> numeric_roots;
        for (int i = 0; i < n; ++i) {
            const std::complex<double> ev = solver.eigenvalues()(i);
            if (std::abs(ev.imag()) > 1e-8 * (1.0 + std::abs(ev))) continue;
            const auto polished = newton_polish(f, f.derivative(), ev.real());
            if (!polished) return false;
            bool duplicate = false;
            for (const auto& other : numeric_roots)
                if (abs(other - *polished) < make_rational(1, Integer(1) << 60)) duplicate = true;
            if (!duplicate) numeric_roots.push_back(*polished);
        }
        if (static_cast<int>(numeric_roots.size()) != cert.count) {
            std::cerr << "  mismatch on " << f.to_string() << ": Sturm " << cert.count
                      << ", numeric " << numeric_roots.size() << "\n";
            return false;
        }
        // refine the isolating intervals below 2^-64 and check containment
        for (const auto& iv : cert.isolating_intervals) {
            const auto refined = exactalg::refine_to_width(cert.polynomial, iv, 64);
            int inside = 0;
            for (const auto& root : numeric_roots)
                if (refined.contains(root)) ++inside;
            if (inside != 1) {
                std::cerr << "  containment failure on " << f.to_string() << "\n";
                return false;
            }
        }
    }
    return true;
}

bool substrate_signatures() {
    // a few symmetric test matrices, 50 random unimodular congruences each
    std::vector<QMat> tests;
    tests.push_back(QMat::identity(3));
    for (int n : {4, 6}) {
        QMat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.at(i, j) = Rational(rng_next(-4, 4));
        tests.push_back(g + g.transpose());
    }
    for (const auto& m : tests) {
        const auto base = exactalg::signature(m);
        for (int t = 0; t < 50; ++t) {
            QMat p = QMat::identity(m.rows());
            for (int step = 0; step < 8; ++step) {
                const int i = static_cast<int>(rng_next(0, m.rows() - 1));
                const int j = static_cast<int>(rng_next(0, m.rows() - 1));
                if (i == j) continue;
                const Rational f(rng_next(-2, 2));
                for (int c = 0; c < m.rows(); ++c) p.at(i, c) += f * p.at(j, c);
            }
            if (!(exactalg::signature(p.transpose() * m * p) == base)) return false;
        }
    }
    return true;
}

// battery samples that are not part of the per-class survey path
bool battery_samples(const CorpusEntry& entry, std::string& detail) {
    const auto spec = entry.spec;
    const auto field_data = [&] {
        auto modulus = scenario::preset_modulus(*spec.field.preset);
        return hodge::CMFieldData::identify(exactalg::NumberField::create(modulus));
    }();
    const auto alpha = spec.alpha ? field_data.field->from_coords(*spec.alpha)
                                  : hodge::norm_one_primitive(field_data);
    exactalg::FieldElement xi =
        spec.xi ? field_data.field->from_coords(*spec.xi) : field_data.field->one();
    hodge::CMHodgeStructure structure = [&] {
        if (spec.xi || field_data.degree() == 2)
            return hodge::build_cm_structure(field_data, alpha, xi);
        // rank-4 presets: deterministic search for a one-positive twist
        const auto& basis = field_data.cm.k0.basis();
        for (long h = 1; h <= 4; ++h) {
            std::vector<long> c(basis.size(), -h);
            while (true) {
                exactalg::FieldElement cand = field_data.field->zero();
                for (size_t i = 0; i < basis.size(); ++i) cand = cand + basis[i] * Rational(c[i]);
                if (!cand.is_zero()) {
                    try {
                        return hodge::build_cm_structure(field_data, alpha, cand);
                    } catch (const SignatureMismatch&) {
                    }
                }
                size_t i = 0;
                while (i < c.size() && c[i] == h) c[i++] = -h;
                if (i == c.size()) break;
                ++c[i];
            }
        }
        throw BudgetExhausted("no twist");
    }();

    // field containment and equality on the base structure
    const auto endo = hodge::endomorphism_field(structure.space, structure.sigma_coords);
    const auto k_period = hodge::period_field(structure.sigma_coords);
    if (!k_period.contains_subspace(endo.scalar_span)) {
        detail = entry.name + ": K_T not contained in k_T on the base structure";
        return false;
    }
    if (!k_period.same_subspace(endo.scalar_span)) {
        detail = entry.name + ": K_T != k_T on the base CM structure";
        return false;
    }
    // base structure: the three criteria agree and say CM
    const auto ev = hodge::is_cm(structure.space, structure.sigma_coords, field_data.conj(), endo);
    if (!ev.verdict) {
        detail = entry.name + ": base structure not CM";
        return false;
    }

    // conjugate-pair symmetry and field containment on sampled fibres
    auto setup = twistor::extend_by_polarization(std::move(structure), spec.d);
    int sampled = 0;
    const int dim = setup.rank() + 1;
    std::vector<long> v(static_cast<size_t>(dim), -1);
    while (sampled < 2) {
        bool done = false;
        QVec q;
        for (long x : v) q.emplace_back(x);
        size_t pos = 0;
        while (pos < v.size() && v[pos] == 1) v[pos++] = -1;
        if (pos == v.size()) done = true;
        else ++v[pos];
        const auto cls = twistor::classify_class(setup, q);
        if (cls.location == twistor::Location::Generic && cls.admissible()) {
            ++sampled;
            const auto pts = twistor::point_from_class(setup, cls);
            // swapped-root fibre: same Gram, conjugated coordinates, and the
            // same endomorphism field
            const auto fibre = twistor::fibre_structure(setup, cls);
            std::vector<exactalg::FieldElement> swapped;
            for (const auto& c : fibre.sigma_coords) swapped.push_back(fibre.ambient.conj.apply(c));
            const auto res1 = hodge::endomorphism_field(fibre.space, fibre.sigma_coords);
            const auto res2 = hodge::endomorphism_field(fibre.space, swapped);
            if (!res1.scalar_span.same_subspace(res2.scalar_span) ||
                res1.degree != res2.degree) {
                detail = entry.name + ": conjugate-pair fibres disagree";
                return false;
            }
            // endomorphism field embeds into the period field
            if (!hodge::period_field(fibre.sigma_coords).contains_subspace(res1.scalar_span)) {
                detail = entry.name + ": K_T' not contained in k_T' on a fibre";
                return false;
            }
        }
        if (done) break;
    }
    return true;
}

} // namespace

int main() {
    std::cout << "acceptance suite: exact verification corpus (presets x d in {1,2,4}, height <= 3)\n";
    const auto corpus_start = Clock::now();

    auto corpus = build_corpus();
    RunConfig config;
    config.workers = 2;
    for (auto& entry : corpus) {
        const auto t0 = Clock::now();
        entry.result = scenario::run_survey(entry.spec, config);
        entry.rank = entry.result.rank;
        std::cout << "  surveyed " << entry.name << ": rank " << entry.rank << ", "
                  << entry.result.records.size() << " classes, " << entry.result.count_alarms
                  << " alarms, " << std::fixed << std::setprecision(1) << seconds_since(t0)
                  << "s\n"
                  << std::flush;
    }
    const double corpus_seconds = seconds_since(corpus_start);

    // ---- criterion 1: CM transfer with K0 persistence on generic fibres ----
    {
        long generic_total = 0, cm_pass = 0, k0_pass = 0, both = 0;
        for (const auto& entry : corpus)
            for (const auto& rec : entry.result.records) {
                if (!rec.cm_ran) continue;
                ++generic_total;
                cm_pass += rec.solver_cm;
                k0_pass += rec.k0_equal;
                both += (rec.solver_cm && rec.k0_equal);
            }
        std::ostringstream d;
        d << "CM transfer on generic fibres: " << both << "/" << generic_total
          << " (solver CM of full degree: " << cm_pass << ", K0 persistence: " << k0_pass
          << "); corpus of " << corpus.size() << " structures in " << std::fixed
          << std::setprecision(1) << corpus_seconds << "s (budget 600s)";
        report(1, both == generic_total && generic_total > 0 && corpus_seconds <= 600.0, d.str());
    }

    // ---- criterion 2: two-route agreement -----------------------------------
    {
        long generic_total = 0, agree = 0;
        for (const auto& entry : corpus)
            for (const auto& rec : entry.result.records) {
                if (!rec.cm_ran) continue;
                ++generic_total;
                agree += (rec.disc_totally_negative && rec.two_route_equal);
            }
        std::ostringstream d;
        d << "closed-formula field vs solver field: " << agree << "/" << generic_total
          << " exact agreements";
        report(2, agree == generic_total && generic_total > 0, d.str());
    }

    // ---- criterion 3: the three CM criteria agree ---------------------------
    {
        long checked = 0, agree = 0;
        for (const auto& entry : corpus)
            for (const auto& rec : entry.result.records) {
                if (rec.cm_ran) {
                    ++checked;
                    agree += rec.criteria_agree;
                }
                if (rec.equator_ran) {
                    ++checked;
                    bool eq_agree = true;
                    for (const auto& a : rec.alarms)
                        if (a.rfind("CM criteria disagree", 0) == 0) eq_agree = false;
                    agree += eq_agree;
                }
            }
        std::ostringstream d;
        d << "criteria agreement on structures and fibres: " << agree << "/" << checked;
        report(3, agree == checked && checked > 0, d.str());
    }

    // ---- criterion 4: equator exclusion -------------------------------------
    {
        long eq_total = 0, eq_pass = 0;
        for (const auto& entry : corpus)
            for (const auto& rec : entry.result.records) {
                if (!rec.equator_ran) continue;
                ++eq_total;
                const bool expected =
                    entry.rank > 2
                        ? (!rec.equator_cm && rec.period_field_degree > 2 &&
                           rec.imaginary_span_dim == entry.rank / 2)
                        : rec.equator_cm;
                eq_pass += expected;
            }
        std::ostringstream d;
        d << "equator fibres: " << eq_pass << "/" << eq_total
          << " match (non-CM with period degree > 2 and imaginary span r/2 for r > 2; CM for r = 2)";
        report(4, eq_pass == eq_total && eq_total > 0, d.str());
    }

    // ---- criterion 5: jump locality ------------------------------------------
    {
        long analyzed = 0, violations = 0, poles = 0;
        for (const auto& entry : corpus)
            for (const auto& rec : entry.result.records) {
                if (rec.rejected || rec.rho < 0) continue;
                ++analyzed;
                if (rec.location == twistor::Location::Pole) {
                    ++poles;
                    violations += (rec.rho != 1);
                } else if (rec.location == twistor::Location::Generic) {
                    violations += (rec.rho != 1);
                } else if (rec.rho >= 2 && rec.location != twistor::Location::Equator) {
                    ++violations;
                }
            }
        std::ostringstream d;
        d << "jump locality over " << analyzed << " admissible classes (" << poles
          << " poles): " << violations << " violations";
        report(5, violations == 0 && analyzed > 0, d.str());
    }

    // ---- criterion 6: period value identities --------------------------------
    {
        bool pass = true;
        for (const auto& entry : corpus) pass &= entry.result.period_identities_pass;
        using namespace periodvalue;
        const Coset r = Coset::symbol(kSigma), rb = Coset::symbol(kSigmaBar);
        for (auto n : {Normalization::A1, Normalization::B1, Normalization::C1}) {
            const auto cfs = coefficient_cosets(n);
            pass &= cfs.b == cfs.a * r * rb.inverse();
            pass &= cfs.a * cfs.b * r * rb == cfs.c.pow(2);
            pass &= fibre_period_value(n) == cfs.c;
        }
        report(6, pass, "coefficient cosets satisfy the ratio and norm relations in all three normalizations");
    }

    // ---- criterion 7: substrate validation -----------------------------------
    {
        const auto t0 = Clock::now();
        const bool roots_ok = substrate_real_roots();
        const bool sig_ok = substrate_signatures();
        const double secs = seconds_since(t0);
        std::ostringstream d;
        d << "Sturm counts vs independent numeric roots (100 random polynomials) "
          << (roots_ok ? "ok" : "FAILED") << "; signature invariance under 50 congruences "
          << (sig_ok ? "ok" : "FAILED") << "; " << std::fixed << std::setprecision(1) << secs
          << "s (budget 60s)";
        report(7, roots_ok && sig_ok && secs <= 60.0, d.str());
    }

    // ---- criterion 8: invariant battery --------------------------------------
    {
        long unexpected = 0, disc_failures = 0, errors = 0;
        for (const auto& entry : corpus)
            for (const auto& rec : entry.result.records) {
                if (!rec.error.empty() && !rec.rejected) ++errors;
                for (const auto& a : rec.alarms) {
                    if (a.rfind("gamma^2 - 4 delta not totally negative", 0) == 0) ++disc_failures;
                    else if (!known_transfer_alarm(a)) ++unexpected;
                }
                if (rec.cm_ran && !rec.disc_totally_negative) {
                    // already counted through the alarm above
                }
            }
        bool samples_ok = true;
        std::string sample_detail;
        for (const auto& entry : corpus) {
            if (!battery_samples(entry, sample_detail)) {
                samples_ok = false;
                break;
            }
        }
        std::ostringstream d;
        d << "exact invariants (nonvanishing, independence, containment, conic, isotropy, "
             "conjugate-pair symmetry): "
          << (unexpected == 0 && errors == 0 && samples_ok ? "no violations" : "violations found")
          << "; totally-negative discriminant certificate: " << disc_failures << " failures";
        if (!samples_ok) d << "; " << sample_detail;
        report(8, unexpected == 0 && errors == 0 && samples_ok && disc_failures == 0, d.str());
    }

    int failed = 0;
    for (const auto& c : results) failed += !c.pass;
    std::cout << "\nacceptance: " << (results.size() - failed) << "/" << results.size()
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
