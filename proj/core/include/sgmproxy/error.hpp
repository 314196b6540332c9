#pragma once

#include <stdexcept>

namespace sgmproxy {

/// Raised for unreadable, malformed or unsupported files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgmproxy
