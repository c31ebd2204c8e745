#pragma once

#include <stdexcept>
#include <string>

namespace gfs {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad range, mismatched
// grid resolution, infeasible inclusion probabilities, ...).
class domain_error : public error {
public:
    using error::error;
};

// Internal consistency failure. Seeing one of these means a bug in the
// library, never bad user input; state may not be trusted afterwards.
class invariant_error : public error {
public:
    using error::error;
};

// File / parse problems surfaced by the I/O layer.
class io_error : public error {
public:
    using error::error;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw domain_error(msg);
}

inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw invariant_error(msg);
}

} // namespace detail
} // namespace gfs
