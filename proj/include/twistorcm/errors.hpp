#ifndef TWISTORCM_ERRORS_HPP
#define TWISTORCM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace twistorcm {

// Caller passed something that violates a documented precondition.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// A quadratic that was supposed to define an extension has a root in the base.
struct NotAFieldExtension : std::runtime_error {
    explicit NotAFieldExtension(const std::string& msg) : std::runtime_error(msg) {}
};

// A constructed bilinear form does not have the required signature.
struct SignatureMismatch : std::runtime_error {
    SignatureMismatch(const std::string& msg, int pos, int neg, int zero)
        : std::runtime_error(msg), positive(pos), negative(neg), null(zero) {}
    int positive, negative, null;
};

// Certified interval refinement hit the configured bit cap without deciding.
struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

// A search with a deterministic budget ran out of candidates.
struct BudgetExhausted : std::runtime_error {
    explicit BudgetExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

// An exact identity that is guaranteed by theory failed to hold.  This is the
// alarm class: it is never a user error, and any instance is reported by the
// survey runner as a verification failure.
struct TheoremViolation : std::logic_error {
    explicit TheoremViolation(const std::string& msg) : std::logic_error(msg) {}
};

// Desk-scale limitation (e.g. a factor search on inputs far beyond the sizes
// this tool targets).
struct Unsupported : std::runtime_error {
    explicit Unsupported(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace twistorcm

#endif
