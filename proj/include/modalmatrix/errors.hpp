#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace modalmatrix {

// Shape disagreement between matrices, datasets or label vectors.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Invalid configuration value or out-of-domain argument.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A bandwidth collapsed to zero (duplicated observations, degenerate query).
class DegenerateBandwidthError : public std::runtime_error {
public:
    explicit DegenerateBandwidthError(const std::string& msg,
                                      std::vector<int> indices = {})
        : std::runtime_error(msg), indices_(std::move(indices)) {}

    const std::vector<int>& indices() const noexcept { return indices_; }

private:
    std::vector<int> indices_;
};

// Metric undefined for the given partition (e.g. silhouette of one cluster).
class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File opened fine but its contents violate the expected format.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite intermediate where the algorithm requires finite weights.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace modalmatrix
