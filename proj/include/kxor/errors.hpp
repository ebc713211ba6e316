#pragma once

#include <stdexcept>
#include <string>

namespace kxor {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// instance / parsing
struct UnsupportedArity : Error { using Error::Error; };
struct InvalidProbability : Error { using Error::Error; };
struct EmptyInstance : Error { using Error::Error; };
struct DuplicateConstraint : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct BadSign : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// resource limits
struct BudgetExceeded : Error { using Error::Error; };
struct DenseTooLarge : Error { using Error::Error; };

// numeric stages
struct NotSymmetric : Error { using Error::Error; };

// misuse of a staged object (double trim, double rescale, ...)
struct InvalidState : Error { using Error::Error; };

} // namespace kxor
