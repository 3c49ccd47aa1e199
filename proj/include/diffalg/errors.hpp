#pragma once

#include <stdexcept>
#include <string>

namespace diffalg {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Division by the zero element of a field or ring.
struct division_by_zero : error {
    division_by_zero() : error("division by zero") {}
    explicit division_by_zero(const std::string& what) : error(what) {}
};

// Two scalars (or a scalar and a map) belong to incompatible field towers.
struct descriptor_mismatch : error {
    explicit descriptor_mismatch(const std::string& what) : error(what) {}
};

// A polynomial that must be irreducible was found to factor.  `factor`
// carries a printable proper factor when one is known.
struct reducible_error : error {
    std::string factor;
    explicit reducible_error(const std::string& what, std::string factor = {})
        : error(what), factor(std::move(factor)) {}
};

// A polynomial that must be squarefree has a repeated root.
struct not_squarefree_error : error {
    explicit not_squarefree_error(const std::string& what) : error(what) {}
};

// A specialization hit a vanishing denominator.
struct denominator_vanishes : error {
    explicit denominator_vanishes(const std::string& what) : error(what) {}
};

// Singular-point discovery met an irreducible denominator factor of degree
// >= 3; splitting it would need an extension the caller did not sanction.
struct needs_higher_extension : error {
    std::string blocking_factor;
    explicit needs_higher_extension(const std::string& what, std::string factor = {})
        : error(what), blocking_factor(std::move(factor)) {}
};

// A combinatorial size cap was exceeded (e.g. binomial(n, s) too large).
struct cap_exceeded : error {
    explicit cap_exceeded(const std::string& what) : error(what) {}
};

// A parametric curve degenerates (zero discriminant) at a specialization.
struct degenerate_curve : error {
    explicit degenerate_curve(const std::string& what) : error(what) {}
};

// No cyclic vector was found among the deterministic candidates.
struct no_cyclic_vector : error {
    explicit no_cyclic_vector(const std::string& what) : error(what) {}
};

// An operation required a monic object (e.g. companion matrix of an
// operator whose leading coefficient is not invertible as given).
struct not_monic : error {
    explicit not_monic(const std::string& what) : error(what) {}
};

// Parse errors for the expression grammar.
struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

}  // namespace diffalg
