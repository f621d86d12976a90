#pragma once

#include <stdexcept>
#include <string>

namespace rmfec {

// Caller broke a documented precondition (dimension mismatch, ragged payloads...).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Invalid (r, m) selection.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A packet frame failed validation. Receivers treat the packet as erased.
class MalformedPacket : public std::runtime_error {
 public:
  explicit MalformedPacket(const std::string& what) : std::runtime_error(what) {}
};

// Serialized schedule or block file could not be parsed.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rmfec
