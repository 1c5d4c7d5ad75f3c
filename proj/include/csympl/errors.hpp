#ifndef CSYMPL_ERRORS_HPP
#define CSYMPL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csympl
{

// Raised for inputs that violate an operation's preconditions: shape mismatches,
// non-c-symplectic forms passed where one is required, non-primitive lattice vectors.
class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a postcondition that holds for every valid input fails numerically. This
// indicates a bug or a numerically hopeless instance, never a user error.
class ConsistencyError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

}  // namespace csympl

#endif
