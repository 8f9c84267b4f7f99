#pragma once

#include <stdexcept>
#include <string>

namespace jrex {

// Shape/dimension mismatches between tensors or layers.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Value outside the mathematical domain of an operation (log of a
// non-positive number, dropout rate >= 1, reduction over an empty axis).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Invalid configuration detected at construction/validation time.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Caller violated a documented precondition.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Malformed input file (corpus, embeddings, checkpoint, config).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace jrex
