#pragma once

#include "splitstab/aubin_probe.hpp"
#include "splitstab/certifier.hpp"
#include "splitstab/feasibility.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace splitstab
{

inline constexpr int kReportVersion = 1;

/// JSON text with every floating-point value printed with 17 significant
/// digits, so doubles survive a round trip exactly.
std::string dump_json(const nlohmann::json& j, int indent = 2);

nlohmann::json cone_to_json(const Cone& k);
nlohmann::json verdict_to_json(const ProblemInstance& p, const StabilityVerdict& v);
nlohmann::json solve_to_json(const ProblemInstance& p, const SolveReport& r, double tol);
nlohmann::json probe_to_json(const ModulusEstimate& est, const StabilityVerdict& v, ProbeConsistency label,
                             double threshold);

std::string verdict_text(const ProblemInstance& p, const StabilityVerdict& v);
std::string solve_text(const SolveReport& r);
std::string probe_text(const ModulusEstimate& est, const StabilityVerdict& v, ProbeConsistency label,
                       double threshold);

/// The machine-checkable part of an analyze report.
struct VerdictRecord
{
    Verdict verdict = Verdict::Inconclusive;
    bool condition_holds = false;
    std::optional<Vector> witness;
    /// Classification of each trace cone, in trace order.
    std::vector<std::string> cone_classes;
};

VerdictRecord record_of(const StabilityVerdict& v);
VerdictRecord parse_verdict_report(std::string_view json_text);

Verdict verdict_from_string(const std::string& s);

} // namespace splitstab
