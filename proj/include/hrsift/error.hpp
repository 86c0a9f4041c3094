#pragma once

#include <stdexcept>
#include <string>

namespace hrsift {

// Bad parameters or violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A multiplicative rule produced a negative value.
class InvalidFunction : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// An exclusion set contains 0 mod p or a non-prime modulus.
class InvalidCondition : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A parameter lies outside the range where the statistic is meaningful.
class RangeError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Weighted statistic over a set with zero total mass.
class EmptySetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Memory or wall-clock budget exhausted.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hrsift
