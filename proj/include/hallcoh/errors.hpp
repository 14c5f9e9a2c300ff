#pragma once

#include <stdexcept>
#include <string>

namespace hallcoh {

// An enumeration would exceed a configured cap.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested product or coproduct leaves the strata the engine models exactly.
struct UnsupportedStratum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hallcoh
