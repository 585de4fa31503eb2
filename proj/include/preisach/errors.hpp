#pragma once

#include <stdexcept>
#include <string>

namespace preisach {

/// File or stream problem (missing file, unreadable path, write failure).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid data or configuration (bad CSV row, out-of-range input, conflicting flags).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver stopped before reaching its tolerance.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace preisach
