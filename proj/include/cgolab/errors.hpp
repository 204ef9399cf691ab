#pragma once

#include <stdexcept>
#include <string>

namespace cgolab {

// Misuse of the API (wrong representation, mismatched grids).
struct usage_error : std::logic_error {
    explicit usage_error(const std::string& what) : std::logic_error(what) {}
};

// Invalid parameters or violated preconditions (support, regime gates).
struct parameter_error : std::invalid_argument {
    explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

// Runtime numeric trouble (non-finite symbol, characteristic collision).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed experiment configuration; maps to CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cgolab
