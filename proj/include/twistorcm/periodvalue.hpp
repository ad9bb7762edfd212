#ifndef TWISTORCM_PERIODVALUE_HPP
#define TWISTORCM_PERIODVALUE_HPP

#include <map>
#include <string>

namespace twistorcm::periodvalue {

// Formal multiplicative cosets of period values modulo algebraic scalars.
// Each base structure contributes one conjugate symbol pair (r_sigma,
// r_sigma_bar); everything algebraic is the identity coset by definition.
// No preferred fibre normalization exists, so all three are exposed
// symmetrically.

/// Symbol names for the standard conjugate pair.
inline const char* kSigma = "r_sigma";
inline const char* kSigmaBar = "r_sigma_bar";

/// Formal monomial in period symbols: a finite symbol -> exponent map with
/// zero exponents dropped (the canonical form).
class Coset {
public:
    Coset() = default;
    static Coset identity() { return Coset(); }
    static Coset symbol(const std::string& name, long exponent = 1);

    bool is_identity() const { return exponents_.empty(); }
    const std::map<std::string, long>& exponents() const { return exponents_; }

    Coset operator*(const Coset& o) const;
    Coset inverse() const;
    /// Swap each symbol with its conjugate partner (involution on names).
    Coset conjugate() const;
    Coset pow(long e) const;
    bool operator==(const Coset& o) const { return exponents_ == o.exponents_; }
    bool operator!=(const Coset& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    std::map<std::string, long> exponents_;
};

/// Conjugation on symbol names: r_sigma <-> r_sigma_bar; other names get the
/// "_bar" suffix toggled.
std::string conjugate_symbol(const std::string& name);

/// Rescaling the holomorphic line: an algebraic scalar leaves the coset
/// unchanged; a symbolic scalar multiplies by its symbol.
enum class ScalarKind { Algebraic, Symbol };
Coset rescale_line(const Coset& value, ScalarKind kind, const std::string& symbol_name = "lambda");

/// The three coefficient normalizations of a fibre period a sigma +
/// b conj(sigma) + c l.
enum class Normalization { A1, B1, C1 };
const char* normalization_name(Normalization n);

/// Period value coset r_{sigma'} of a generic fibre under a normalization:
/// identity for c = 1, r_sigma for a = 1, r_sigma_bar for b = 1.
Coset fibre_period_value(Normalization n);

struct CoefficientCosets {
    Coset a, b, c;
};

/// Cosets of the three coefficients themselves; they satisfy
/// b = a * r_sigma / r_sigma_bar and a * b * (r_sigma r_sigma_bar) = c^2.
CoefficientCosets coefficient_cosets(Normalization n);

} // namespace twistorcm::periodvalue

#endif
