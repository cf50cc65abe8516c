#ifndef CHIANG_ERRORS_HPP
#define CHIANG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chiang {

// Thrown by exact arithmetic when a zero denominator or divisor appears.
class DivisionByZero : public std::domain_error {
public:
    explicit DivisionByZero(const std::string& what = "division by zero")
        : std::domain_error(what) {}
};

// Thrown when the open recursion revisits a key that is still being evaluated.
class CyclicDependency : public std::runtime_error {
public:
    explicit CyclicDependency(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when a recursion would divide by a vanishing invariant.
class DivisorZero : public std::runtime_error {
public:
    explicit DivisorZero(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when the closed-sector linear system fails to determine a degree.
class WdvvReconstructionFailure : public std::runtime_error {
public:
    explicit WdvvReconstructionFailure(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown by the cache loader on malformed input.
class CacheFormatError : public std::runtime_error {
public:
    explicit CacheFormatError(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace chiang

#endif  // CHIANG_ERRORS_HPP
