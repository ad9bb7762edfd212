#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "twistorcm/periodvalue.hpp"

using namespace twistorcm::periodvalue;

namespace {

// deterministic generator of random exponent maps
uint64_t state = 0x2545F4914F6CDD1DULL;
long next_exp() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<long>(state % 7) - 3;
}

Coset random_coset() {
    Coset c;
    const char* names[] = {"r_sigma", "r_sigma_bar", "lambda", "mu", "mu_bar"};
    for (const char* n : names) c = c * Coset::symbol(n, next_exp());
    return c;
}

} // namespace

TEST_CASE("group laws on exponent maps") {
    const Coset r = Coset::symbol(kSigma);
    CHECK((r * r.inverse()).is_identity());
    CHECK(r.conjugate().conjugate() == r);
    for (int t = 0; t < 50; ++t) {
        const Coset a = random_coset(), b = random_coset(), c = random_coset();
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK((a * a.inverse()).is_identity());
        CHECK(a.conjugate().conjugate() == a);
        CHECK((a * b).conjugate() == a.conjugate() * b.conjugate());
    }
    // (sigma.conj sigma) has the coset of r_sigma * r_sigma_bar
    const Coset norm = Coset::symbol(kSigma) * Coset::symbol(kSigmaBar);
    CHECK(norm.conjugate() == norm);
}

TEST_CASE("line rescaling") {
    const Coset r = Coset::symbol(kSigma);
    CHECK(rescale_line(r, ScalarKind::Algebraic) == r);
    CHECK(rescale_line(rescale_line(r, ScalarKind::Algebraic), ScalarKind::Algebraic) == r);
    CHECK(rescale_line(r, ScalarKind::Symbol) == r * Coset::symbol("lambda"));
}

TEST_CASE("fibre period values per normalization") {
    CHECK(fibre_period_value(Normalization::C1).is_identity());
    CHECK(fibre_period_value(Normalization::A1) == Coset::symbol(kSigma));
    CHECK(fibre_period_value(Normalization::B1) == Coset::symbol(kSigmaBar));
}

TEST_CASE("coefficient cosets satisfy both defining relations") {
    const Coset r = Coset::symbol(kSigma);
    const Coset rbar = Coset::symbol(kSigmaBar);
    for (Normalization n : {Normalization::A1, Normalization::B1, Normalization::C1}) {
        const auto [a, b, c] = coefficient_cosets(n);
        // b = a * r_sigma / r_sigma_bar
        CHECK(b == a * r * rbar.inverse());
        // image of the conic: a b (r_sigma r_sigma_bar) = c^2
        CHECK(a * b * r * rbar == c.pow(2));
        // the fibre period value is the c-coset
        CHECK(fibre_period_value(n) == c);
    }
    // conjugating a triple swaps a and b and conjugates c: the a=1 triple
    // becomes the b=1 triple, and the c=1 triple is self-conjugate
    {
        const auto a1 = coefficient_cosets(Normalization::A1);
        const auto b1 = coefficient_cosets(Normalization::B1);
        CHECK(a1.b.conjugate() == b1.a);
        CHECK(a1.a.conjugate() == b1.b);
        CHECK(a1.c.conjugate() == b1.c);
        const auto c1 = coefficient_cosets(Normalization::C1);
        CHECK(c1.b.conjugate() == c1.a);
        CHECK(c1.c.conjugate() == c1.c);
    }
    // a=1 spot value: b = r/rbar, c = r
    const auto a1 = coefficient_cosets(Normalization::A1);
    CHECK(a1.b == r * rbar.inverse());
    CHECK(a1.c == r);
    // b=1: the fibre value is r_sigma_bar
    CHECK(coefficient_cosets(Normalization::B1).c == rbar);
    // c=1: a = 1/r, b = 1/rbar
    const auto c1 = coefficient_cosets(Normalization::C1);
    CHECK(c1.a == r.inverse());
    CHECK(c1.b == rbar.inverse());
}

TEST_CASE("exact-model degeneration: algebraic periods collapse consistently") {
    // with r_sigma algebraic the symbols become identity and all three
    // normalizations give the identity coset
    auto collapse = [](const Coset& c) {
        Coset out;
        for (const auto& [name, e] : c.exponents())
            if (name != kSigma && name != kSigmaBar) out = out * Coset::symbol(name, e);
        return out;
    };
    for (Normalization n : {Normalization::A1, Normalization::B1, Normalization::C1}) {
        CHECK(collapse(fibre_period_value(n)).is_identity());
        const auto [a, b, c] = coefficient_cosets(n);
        CHECK(collapse(a).is_identity());
        CHECK(collapse(b).is_identity());
        CHECK(collapse(c).is_identity());
    }
}
