#pragma once

#include <stdexcept>
#include <string>

namespace gb2kit {

// Iterative routine failed to reach its tolerance (series, root find, optimizer).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or unusable input data (CSV parse, empty sample, missing deflator year).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested a power-law tail exponent for a family without one (GGa, Ga, LN).
class NoPowerTailError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace gb2kit
