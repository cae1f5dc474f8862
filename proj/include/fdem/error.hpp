#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document (missing field, wrong type, unknown tag).
class SchemaError : public Error {
public:
    using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> issues);
    [[nodiscard]] const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

class QuadratureError : public Error {
public:
    QuadratureError(std::size_t node, double lambda);
    [[nodiscard]] std::size_t node() const noexcept { return node_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }

private:
    std::size_t node_;
    double lambda_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace fdem
