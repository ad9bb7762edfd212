#include "twistorcm/periodvalue.hpp"

#include "twistorcm/errors.hpp"

#include <sstream>

namespace twistorcm::periodvalue {

Coset Coset::symbol(const std::string& name, long exponent) {
    Coset c;
    if (exponent != 0) c.exponents_[name] = exponent;
    return c;
}

Coset Coset::operator*(const Coset& o) const {
    Coset out = *this;
    for (const auto& [name, e] : o.exponents_) {
        const long total = (out.exponents_.count(name) ? out.exponents_[name] : 0) + e;
        if (total == 0) out.exponents_.erase(name);
        else out.exponents_[name] = total;
    }
    return out;
}

Coset Coset::inverse() const {
    Coset out;
    for (const auto& [name, e] : exponents_) out.exponents_[name] = -e;
    return out;
}

Coset Coset::conjugate() const {
    Coset out;
    for (const auto& [name, e] : exponents_) out.exponents_[conjugate_symbol(name)] = e;
    return out;
}

Coset Coset::pow(long e) const {
    Coset out;
    if (e == 0) return out;
    for (const auto& [name, exp] : exponents_) out.exponents_[name] = exp * e;
    return out;
}

std::string Coset::to_string() const {
    if (exponents_.empty()) return "1";
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, e] : exponents_) {
        if (!first) out << " * ";
        out << name;
        if (e != 1) out << "^" << e;
        first = false;
    }
    return out.str();
}

std::string conjugate_symbol(const std::string& name) {
    static const std::string suffix = "_bar";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
        return name.substr(0, name.size() - suffix.size());
    return name + suffix;
}

Coset rescale_line(const Coset& value, ScalarKind kind, const std::string& symbol_name) {
    if (kind == ScalarKind::Algebraic) return value;
    return value * Coset::symbol(symbol_name);
}

const char* normalization_name(Normalization n) {
    switch (n) {
        case Normalization::A1: return "a=1";
        case Normalization::B1: return "b=1";
        case Normalization::C1: return "c=1";
    }
    return "?";
}

Coset fibre_period_value(Normalization n) {
    switch (n) {
        case Normalization::C1: return Coset::identity();
        case Normalization::A1: return Coset::symbol(kSigma);
        case Normalization::B1: return Coset::symbol(kSigmaBar);
    }
    throw InvalidInput("unknown normalization");
}

CoefficientCosets coefficient_cosets(Normalization n) {
    const Coset r = Coset::symbol(kSigma);
    const Coset rbar = Coset::symbol(kSigmaBar);
    switch (n) {
        case Normalization::A1:
            // a = 1, b = r/rbar, c = a r = r
            return {Coset::identity(), r * rbar.inverse(), r};
        case Normalization::B1:
            // b = 1 forces a = rbar/r, c = a r = rbar
            return {rbar * r.inverse(), Coset::identity(), rbar};
        case Normalization::C1:
            // c = 1 forces a r = 1, b = a r/rbar = 1/rbar
            return {r.inverse(), rbar.inverse(), Coset::identity()};
    }
    throw InvalidInput("unknown normalization");
}

} // namespace twistorcm::periodvalue
