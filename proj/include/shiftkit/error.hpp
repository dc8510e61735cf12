#pragma once

#include <stdexcept>
#include <string>

namespace shiftkit {

/// Problems with the input data itself (empty corpora, too few tweets, a
/// disconnected graph handed to a solver that needs one component).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyCorpusError : public DataError {
public:
    using DataError::DataError;
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

class DisconnectedGraphError : public DataError {
public:
    using DataError::DataError;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string &what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace shiftkit
