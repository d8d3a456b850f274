#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace rmi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Raised for invalid data, files, or configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a feature's Jacobian Gram determinant is numerically zero or
// negative at some sample (CLI exit code 3).
class DegenerateFeatureError : public std::runtime_error {
public:
    DegenerateFeatureError(const std::string& msg, long sample_index)
        : std::runtime_error(msg + " at sample " + std::to_string(sample_index)),
          sample(sample_index) {}
    long sample;
};

// Raised when optimization fails numerically (non-finite gradients, or too
// many consecutive degenerate steps). CLI exit code 3.
class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

// n_samples x n_dims observable batch.
struct SampleBatch {
    Matrix data;

    long n_samples() const { return data.rows(); }
    long n_dims() const { return data.cols(); }

    void validate() const {
        if (data.rows() < 2) throw ConfigError("SampleBatch needs at least 2 samples");
        if (data.cols() < 1) throw ConfigError("SampleBatch needs at least 1 dimension");
        if (!data.allFinite()) throw ConfigError("SampleBatch contains non-finite entries");
    }
};

}  // namespace rmi
