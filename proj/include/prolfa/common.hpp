#pragma once

#include <stdexcept>
#include <string>

namespace prolfa {

inline constexpr const char* kVersion = "1.0.0";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prolfa
