#pragma once

#include <stdexcept>
#include <string>

namespace causalfair {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration: roles, column specs, SCM specs, bundle schema.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Bad or unusable data: unreadable files, unparseable cells, empty-after-cleaning.
class DataError : public Error {
public:
    using Error::Error;
};

/// A joint-state enumeration exceeded the configured cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// alpha = 0 combined with a zero-count conditioning cell.
class UnidentifiableCell : public Error {
public:
    using Error::Error;
};

/// A decomposition identity residual breached its bound. Signals an
/// implementation bug, not a data condition.
class IdentityViolation : public Error {
public:
    using Error::Error;
};

class NetworkError : public Error {
public:
    using Error::Error;
};

class MissingCredential : public NetworkError {
public:
    using NetworkError::NetworkError;
};

class HttpStatusError : public NetworkError {
public:
    HttpStatusError(int status, const std::string& msg)
        : NetworkError(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class ConnectFailure : public NetworkError {
public:
    using NetworkError::NetworkError;
};

class RequestTimeout : public NetworkError {
public:
    using NetworkError::NetworkError;
};

} // namespace causalfair
