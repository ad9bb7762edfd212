#ifndef TWISTORCM_IRREDUCIBLE_HPP
#define TWISTORCM_IRREDUCIBLE_HPP

#include "twistorcm/poly.hpp"

#include <optional>

namespace twistorcm::exactalg {

/// All rational roots of f (exact, via the rational root theorem on the
/// primitive integral form).
std::vector<Rational> rational_roots(const Poly& f);

/// Decide irreducibility over Q.  Strategy: rational-root test, then modular
/// irreducibility certificates at several small primes, then a complete
/// bounded factor search (Kronecker interpolation over divisor tuples).
/// Throws InvalidInput on the zero polynomial or constants, Unsupported when
/// the divisor search would need to factor integers beyond desk scale.
bool irreducible_over_rationals(const Poly& f);

/// A nontrivial monic rational factor of f, or nullopt when f is irreducible.
std::optional<Poly> find_rational_factor(const Poly& f);

} // namespace twistorcm::exactalg

#endif
