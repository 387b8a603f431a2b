#pragma once

#include <stdexcept>
#include <string>

namespace argmine {

// Every recoverable failure in the library surfaces as this exception. The
// message is meant for a human reading stderr.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace argmine
