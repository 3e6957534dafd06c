#pragma once

#include <stdexcept>
#include <string>

namespace sgploc {

// File or cell-level failure while reading a fingerprint database.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Linear-algebra failure that survived jitter escalation.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Service-level errors for the node endpoints.
class NotTrainedError : public std::runtime_error {
public:
  explicit NotTrainedError(const std::string& what) : std::runtime_error(what) {}
};

class BadRequestError : public std::runtime_error {
public:
  explicit BadRequestError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgploc
