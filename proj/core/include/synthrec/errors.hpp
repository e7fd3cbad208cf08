#pragma once

#include <stdexcept>
#include <string>

namespace synthrec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments or malformed input data.
struct DataError : Error {
  using Error::Error;
};

// Remote backend could not be reached or the connection failed.
struct TransportError : Error {
  using Error::Error;
};

// Remote backend answered but the payload violates the wire protocol.
struct ProtocolError : Error {
  using Error::Error;
};

// Remote request exceeded its deadline.
struct TimeoutError : TransportError {
  using TransportError::TransportError;
};

}  // namespace synthrec
