#pragma once

#include <stdexcept>
#include <string>

namespace wmsim {

// Mixing states/operators tagged with different path bases is a caller bug,
// not a data problem, hence logic_error.
class BasisMismatchError : public std::logic_error {
public:
    explicit BasisMismatchError(const std::string& what) : std::logic_error(what) {}
};

// Post-selection orthogonal to the pre-selected state: the weak value has no
// finite value. Sweep engines are expected to skip these points.
class UndefinedWeakValueError : public std::domain_error {
public:
    explicit UndefinedWeakValueError(const std::string& what) : std::domain_error(what) {}
};

// A closed-form expression was evaluated where its denominator (or tan 2θ)
// degenerates.
class SingularPointError : public std::domain_error {
public:
    explicit SingularPointError(const std::string& what) : std::domain_error(what) {}
};

// The post-selected branch carries no probability; conditional port
// probabilities are undefined.
class PostSelectionImpossibleError : public std::domain_error {
public:
    explicit PostSelectionImpossibleError(const std::string& what) : std::domain_error(what) {}
};

class NoOptimumError : public std::domain_error {
public:
    explicit NoOptimumError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace wmsim
