#pragma once

#include <stdexcept>
#include <string>

namespace clarr {

// Input errors map to CLI exit code 2, internal inconsistencies to 3.
enum class ErrorClass { input, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string kind, const std::string& what)
        : std::runtime_error(what), cls_(cls), kind_(std::move(kind)) {}

    ErrorClass error_class() const noexcept { return cls_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    ErrorClass cls_;
    std::string kind_;
};

[[noreturn]] inline void fail_input(const std::string& kind, const std::string& what)
{
    throw Error(ErrorClass::input, kind, what);
}

[[noreturn]] inline void fail_internal(const std::string& kind, const std::string& what)
{
    throw Error(ErrorClass::internal, kind, what);
}

} // namespace clarr
