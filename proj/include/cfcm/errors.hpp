#ifndef CFCM_ERRORS_HPP
#define CFCM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cfcm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph construction or an unknown vertex.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// A model operation was called with arguments that violate its contract.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The normalization (equivalently the post-selection success probability) is zero.
class InconsistentModel : public Error {
 public:
  InconsistentModel() : Error("model is inconsistent: no probability mass survives post-selection") {}
};

/// Conditioning event has zero probability.
class ZeroProbabilityCondition : public Error {
 public:
  ZeroProbabilityCondition() : Error("conditioning event has probability zero") {}
};

/// Separation query sets overlap, are empty where forbidden, or name unknown vertices.
class QueryError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfcm

#endif  // CFCM_ERRORS_HPP
