#pragma once

#include <stdexcept>
#include <string>

namespace hj {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested slope/velocity lies outside the Hamiltonian's declared window.
struct DomainExceeded : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct BoxTooSmall : Error {
    using Error::Error;
};

struct NotQuadratic : Error {
    using Error::Error;
};

struct TargetNotReachable : Error {
    using Error::Error;
};

struct NotMember : Error {
    using Error::Error;
};

struct SupportViolation : Error {
    using Error::Error;
};

struct CflViolation : Error {
    using Error::Error;
};

struct UnsupportedCase : Error {
    using Error::Error;
};

}  // namespace hj
