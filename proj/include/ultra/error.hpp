#pragma once

#include <stdexcept>
#include <string>

namespace ultra {

// Exit-code classes used by the CLI: usage (1), precondition (2), numeric (3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 3; }
};

class InvalidInput : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
};

class PreconditionError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

class OutOfHorizon : public Error {
public:
    using Error::Error;
};

class Divergence : public Error {
public:
    using Error::Error;
};

class NumericFailure : public Error {
public:
    using Error::Error;
};

}  // namespace ultra
