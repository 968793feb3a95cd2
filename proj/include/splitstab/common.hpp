#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace splitstab
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorKind
{
    DimensionMismatch,
    PointNotInSet,
    QualificationFailure,
    UnsupportedVariant,
    EmptySet,
    LpFailure,
    InfeasibleReference,
    Schema,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Every failure in the library is reported through this type; `kind()` is
/// the machine-readable part, `what()` carries the detail.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::PointNotInSet: return "point-not-in-set";
    case ErrorKind::QualificationFailure: return "qualification-failure";
    case ErrorKind::UnsupportedVariant: return "unsupported-variant";
    case ErrorKind::EmptySet: return "empty-set";
    case ErrorKind::LpFailure: return "lp-failure";
    case ErrorKind::InfeasibleReference: return "infeasible-reference-point";
    case ErrorKind::Schema: return "schema-error";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

inline void require_dim(Eigen::Index got, Eigen::Index expected, const char* what)
{
    if (got != expected)
    {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                      std::to_string(expected) + ", got " +
                                                      std::to_string(got));
    }
}

/// Numerical rank with a threshold relative to the largest singular value.
int numerical_rank(const Matrix& m, double rel_tol = 1e-10);

} // namespace splitstab
