#include "twistorcm/rational.hpp"

#include "twistorcm/errors.hpp"

#include <cctype>

namespace twistorcm::exactalg {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw InvalidInput("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw InvalidInput("empty rational literal");
    for (char c : text) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            throw InvalidInput("malformed rational literal: " + text);
    }
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Integer(text));
        }
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string::npos)
            throw InvalidInput("malformed rational literal: " + text);
        return make_rational(Integer(num), Integer(den));
    } catch (const std::invalid_argument&) {
        throw InvalidInput("malformed rational literal: " + text);
    }
}

std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Rational(0);
    Integer num_root, den_root;
    if (mpz_perfect_square_p(q.get_num().get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(q.get_den().get_mpz_t()) == 0) return std::nullopt;
    mpz_sqrt(num_root.get_mpz_t(), q.get_num().get_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), q.get_den().get_mpz_t());
    return make_rational(num_root, den_root);
}

Integer common_denominator(const std::vector<Rational>& values) {
    Integer l = 1;
    for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    return l;
}

} // namespace twistorcm::exactalg
