#pragma once

#include <stdexcept>
#include <string>

namespace fraudts {

/// Base class for all fraudts errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid option or parameter value (bad ratio, bad lag count, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// No transactions available for the requested customer, or empty input.
class NoDataError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (unparseable row, bad header, bad label).
class DataFormatError : public Error {
public:
    using Error::Error;
};

/// Series is constant (or constant after differencing) and the statistic is undefined.
class DegenerateSeriesError : public Error {
public:
    using Error::Error;
};

/// Series too short for the requested operation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Model coefficients violate stationarity/invertibility.
class InvalidModelError : public Error {
public:
    using Error::Error;
};

/// Likelihood maximisation failed to converge.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Training residuals have zero spread; z-scores undefined.
class DegenerateResidualsError : public Error {
public:
    using Error::Error;
};

/// Mismatched vector lengths.
class ShapeError : public Error {
public:
    using Error::Error;
};

} // namespace fraudts
