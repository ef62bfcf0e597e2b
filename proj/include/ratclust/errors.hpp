#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratclust {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A user-supplied function returned a non-finite value.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double x) : Error(what), x_(x) {}
    [[nodiscard]] double x() const noexcept { return x_; }

private:
    double x_;
};

/// Evaluation point coincides (to rounding) with a pole or quadrature node.
class PoleEvaluationError : public Error {
public:
    PoleEvaluationError(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    [[nodiscard]] std::size_t pole_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Least-squares or interpolation system is numerically rank deficient.
class IllPosedError : public Error {
public:
    IllPosedError(const std::string& what, long effective_rank, long columns)
        : Error(what), rank_(effective_rank), columns_(columns) {}
    [[nodiscard]] long effective_rank() const noexcept { return rank_; }
    [[nodiscard]] long columns() const noexcept { return columns_; }

private:
    long rank_;
    long columns_;
};

class BranchCutError : public Error {
public:
    using Error::Error;
};

/// Point lies outside the domain of a solution.
class DomainError : public Error {
public:
    using Error::Error;
};

class BasisConstructionError : public Error {
public:
    BasisConstructionError(const std::string& what, std::size_t corner)
        : Error(what), corner_(corner) {}
    [[nodiscard]] std::size_t corner() const noexcept { return corner_; }

private:
    std::size_t corner_;
};

}  // namespace ratclust
