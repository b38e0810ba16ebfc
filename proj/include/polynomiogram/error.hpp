#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polynomiogram {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error
{
public:
    ParseError(std::size_t position, const std::string& message)
        : Error("parse error at offset " + std::to_string(position) + ": " + message),
          position_(position), message_(message)
    {
    }

    std::size_t position() const noexcept { return position_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t position_;
    std::string message_;
};

class EvalError : public Error
{
public:
    using Error::Error;
};

class DomainError : public Error
{
public:
    using Error::Error;
};

class OverflowError : public Error
{
public:
    using Error::Error;
};

class DegenerateInput : public Error
{
public:
    using Error::Error;
};

class DegreeCapExceeded : public Error
{
public:
    using Error::Error;
};

class NoConvergence : public Error
{
public:
    NoConvergence(const std::string& what, std::size_t unconverged)
        : Error(what), unconverged_(unconverged)
    {
    }

    std::size_t unconverged() const noexcept { return unconverged_; }

private:
    std::size_t unconverged_;
};

class DerivativeBreakdown : public Error
{
public:
    using Error::Error;
};

class GeometryMismatch : public Error
{
public:
    using Error::Error;
};

class CardinalityMismatch : public Error
{
public:
    using Error::Error;
};

class UnknownPreset : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

/// Configuration problem; `key()` names the offending dotted key.
class ConfigError : public Error
{
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key))
    {
    }

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace polynomiogram
