#pragma once

#include <stdexcept>
#include <string>

namespace mllab {

/// Bad user-supplied configuration (population spec, config file, grids).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or schema-incompatible input data (CSV panels, columns).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure could not produce a usable result.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Bayes update wiped out every grid point (noise-free observation
/// incompatible with the prior support).
class DegenerateUpdateError : public NumericalError {
public:
  explicit DegenerateUpdateError(const std::string& what) : NumericalError(what) {}
};

/// Design matrix is rank deficient.
class SingularDesignError : public NumericalError {
public:
  explicit SingularDesignError(const std::string& what) : NumericalError(what) {}
};

/// Too few observations or instruments to identify a GMM model.
class UnderidentifiedError : public NumericalError {
public:
  explicit UnderidentifiedError(const std::string& what) : NumericalError(what) {}
};

/// A test statistic is undefined (e.g. zero variance of differences).
class DegenerateTestError : public NumericalError {
public:
  explicit DegenerateTestError(const std::string& what) : NumericalError(what) {}
};

}  // namespace mllab
