#ifndef DISCOP_ERROR_HPP_
#define DISCOP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace discop {

// Input violates a contract of the operation (bad axioms, infeasible
// extension, mismatched shapes, ties under the reject policy, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A file could not be read, written, or parsed.  Messages name the
// offending line (and column where it is known).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace discop

#endif  // DISCOP_ERROR_HPP_
