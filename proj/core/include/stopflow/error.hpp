#pragma once

#include <stdexcept>
#include <string>

namespace stopflow {

/// Invalid argument: non-finite input, state outside the strip, |lambda| >= 1, ...
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested object only exists in another parameter regime
/// (e.g. the 2-cycle for beta > -1, the hitting map outside case (e)).
class UnsupportedRegime : public DomainError {
public:
    using DomainError::DomainError;
};

/// A closed-form expression would divide by zero for these parameters.
class SingularParameter : public DomainError {
public:
    using DomainError::DomainError;
};

/// Iteration budget exhausted before the expected event happened.
class Nontermination : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No branch of an implicit piecewise-linear step is consistent.
class ModelInconsistency : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two routes to the same quantity disagree beyond tolerance.
class InternalConsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace stopflow
