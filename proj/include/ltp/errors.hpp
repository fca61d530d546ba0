#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltp {

/// Invalid user-facing configuration (bad keys, bad values, inconsistent T/dt).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A feature combination that is deliberately not provided (e.g. a B3 dual kernel).
class UnsupportedFeature : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Potential exponents outside the admissible range.
class UnsupportedPotential : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation exactly at a non-removable singularity of a kernel.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Non-finite values or a broken numerical invariant.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linearized Jacobian with non-positive determinant.
class StepRejected : public NumericFailure {
public:
    StepRejected(const std::string& what, std::size_t particle)
        : NumericFailure(what), particle_(particle) {}
    std::size_t particle() const noexcept { return particle_; }

private:
    std::size_t particle_;
};

/// A particle left the configured domain or a particle volume collapsed.
/// Not an error for the runner: the run is truncated at `step()`.
class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Two point particles met under a singular potential.
class CollisionError : public std::runtime_error {
public:
    CollisionError(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace ltp
