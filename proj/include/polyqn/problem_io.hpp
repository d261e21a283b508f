#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "polyqn/polysys.hpp"

namespace polyqn {

struct ProblemFile {
    std::string name;
    PolySystem system;
    Vector x0;
    std::optional<Vector> x_star;

    /// Exact (bitwise for finite values) structural equality.
    friend bool operator==(const ProblemFile& a, const ProblemFile& b);
};

/// Malformed document: bad syntax, missing field, wrong JSON type.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed document that violates a PolySystem / ProblemFile invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ProblemFile parse_problem(std::string_view text);

/// JSON text, fixed key order, numbers at 17 significant digits.
std::string serialize_problem(const ProblemFile& problem);

ProblemFile load_problem(const std::string& path);
void save_problem(const ProblemFile& problem, const std::string& path);

/// Validates vector lengths and, when x_star is present, that it is a root.
void validate_problem(const ProblemFile& problem);

/// Round-trip-safe "%.17g" formatting shared by every text output.
std::string format_double(double v);

}  // namespace polyqn
