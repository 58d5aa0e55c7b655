#pragma once

#include <stdexcept>
#include <string>

namespace semmap {

// Malformed input: bad config ranges, dimension mismatches, parse errors.
// The CLI maps this to exit code 2; everything else to 3.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace semmap
