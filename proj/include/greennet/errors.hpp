#pragma once

#include <stdexcept>
#include <string>

namespace greennet {

// Bad or inconsistent input (negative energies, malformed parameter sets).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A link references a site that does not exist or violates the star topology.
class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario file problems. `field()` holds the dotted path of the offending key.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace greennet
