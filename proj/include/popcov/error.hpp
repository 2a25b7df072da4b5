#pragma once

#include <stdexcept>
#include <string>

namespace popcov {

// Raised for malformed or inconsistent user input (bad files, shape
// mismatches, infeasible requests). The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace popcov
