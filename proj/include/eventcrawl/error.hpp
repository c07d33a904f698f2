#pragma once

#include <stdexcept>
#include <string>

namespace eventcrawl {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

// Network-level failure (connect, timeout, reset). Never used for HTTP error
// statuses, which come back as ordinary responses.
class TransportError : public Error {
public:
  using Error::Error;
};

}  // namespace eventcrawl
