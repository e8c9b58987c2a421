#pragma once

#include <stdexcept>
#include <string>

namespace ctk {

// Raised when inputs violate a mathematical precondition (degenerate pairing,
// non-commuting operators, a vector that is not in a lattice, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed serialized input. The message is prefixed with a JSON-pointer-like path.
class SchemaError : public DomainError {
public:
    SchemaError(const std::string& path, const std::string& what)
        : DomainError(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// The residue-field search found no eigensystem on the complementary block.
class NoCongruentEigensystem : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace ctk
