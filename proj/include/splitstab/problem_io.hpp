#pragma once

#include "splitstab/problem.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace splitstab
{

inline constexpr int kProblemFileVersion = 1;

/// Parses a problem file (JSON, see README for the schema). Schema problems
/// throw ErrorKind::Schema with the offending field path, e.g.
/// "C.factors[1].P: expected a matrix"; an infeasible reference point throws
/// ErrorKind::InfeasibleReference with the residual.
ProblemInstance parse_problem(std::string_view text);

/// Reads and parses a file; I/O failures are reported as schema errors.
ProblemInstance load_problem(const std::string& path);

ConstraintSet parse_set(const nlohmann::json& j, const std::string& path);

nlohmann::json set_to_json(const ConstraintSet& set);
nlohmann::json problem_to_json(const ProblemInstance& p);

nlohmann::json vector_to_json(const Vector& v);
nlohmann::json matrix_to_json(const Matrix& m);

} // namespace splitstab
