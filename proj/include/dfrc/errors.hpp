// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace dfrc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class DegenerateSteering : public Error {
public:
    using Error::Error;
};

/// The communication constraints cannot be met within the power budget.
class Infeasible : public Error {
public:
    using Error::Error;
};

class RankDeficiencyUnrepaired : public Error {
public:
    using Error::Error;
};

class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dfrc
