#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace unseen {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad k, bad coefficient, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An estimator has no value on the given fingerprint (Chao with phi_2 = 0).
class UndefinedEstimate : public Error {
public:
    using Error::Error;
};

/// Malformed external input (CSV rows, config files).
class FormatError : public Error {
public:
    using Error::Error;
};

/// A bound was evaluated outside the hypotheses under which it holds.
class BoundInapplicable : public Error {
public:
    using Error::Error;
};

struct Inapplicable {
    std::string reason;
};

/// Either a bound value or the reason the bound's hypotheses failed.
template <class T>
class BoundResult {
public:
    BoundResult(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
    BoundResult(Inapplicable why) : state_(std::move(why)) {}  // NOLINT(google-explicit-constructor)

    bool applicable() const noexcept { return std::holds_alternative<T>(state_); }
    explicit operator bool() const noexcept { return applicable(); }

    const T& value() const {
        if (!applicable()) throw BoundInapplicable(reason());
        return std::get<T>(state_);
    }
    const T& operator*() const { return value(); }
    const T* operator->() const { return &value(); }

    const std::string& reason() const {
        static const std::string none;
        if (applicable()) return none;
        return std::get<Inapplicable>(state_).reason;
    }

private:
    std::variant<T, Inapplicable> state_;
};

}  // namespace unseen
