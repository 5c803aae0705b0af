#pragma once

#include <stdexcept>
#include <string>

namespace fibercurve {

/// An input violated an operation's documented precondition
/// (composite modulus, wrong congruence class, bound exceeded, ...).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computed quantity disagreed with an independent closed form or oracle.
/// Never caught internally; it always signals a bug or a genuine discrepancy.
class verification_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A configured enumeration or search bound was exceeded.
class bound_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw precondition_error(what);
}

inline void verify(bool cond, const std::string& what) {
    if (!cond) throw verification_error(what);
}

} // namespace detail
} // namespace fibercurve
