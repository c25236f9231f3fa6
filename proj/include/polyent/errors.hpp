#pragma once

#include <stdexcept>
#include <string>

namespace polyent {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid graph construction (nonpositive length, disconnected input, ...).
struct ConstructionError : Error {
  using Error::Error;
};

// Point not on the graph, maps on different graphs, wrong kind of domain.
struct DomainError : Error {
  using Error::Error;
};

struct MalformedMapError : Error {
  using Error::Error;
};

struct NotHomeomorphismError : Error {
  using Error::Error;
};

// Piece-count, lap-count, oracle-size and sample-size caps.
struct ResourceError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace polyent
