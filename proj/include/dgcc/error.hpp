#pragma once

#include <stdexcept>
#include <string>

namespace dgcc {

// Raised for malformed input, violated preconditions and invalid configuration.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dgcc
