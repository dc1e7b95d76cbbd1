#pragma once

#include <stdexcept>
#include <string>

namespace netcon {

/// Bad user input: files, configs, out-of-contract arguments. CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to converge or produced non-finite values.
/// CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netcon
