#include "splitstab/report.hpp"

#include "splitstab/problem_io.hpp"
#include "splitstab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace splitstab
{

using nlohmann::json;

namespace
{

void write_number(std::string& out, double v)
{
    if (!std::isfinite(v))
    {
        out += std::isnan(v) ? "null" : (v > 0 ? "\"inf\"" : "\"-inf\"");
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    // Keep floats recognizable as floats.
    if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos)
    {
        out += ".0";
    }
}

void write(std::string& out, const json& j, int indent, int depth)
{
    const auto newline = [&](int d) {
        if (indent > 0)
        {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type())
    {
    case json::value_t::object:
    {
        if (j.empty())
        {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            if (!first)
            {
                out += ',';
            }
            first = false;
            newline(depth + 1);
            out += json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            write(out, it.value(), indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case json::value_t::array:
    {
        if (j.empty())
        {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            if (i > 0)
            {
                out += flat && indent > 0 ? ", " : ",";
            }
            if (!flat)
            {
                newline(depth + 1);
            }
            write(out, j[i], indent, depth + 1);
        }
        if (!flat)
        {
            newline(depth);
        }
        out += ']';
        return;
    }
    case json::value_t::number_float: write_number(out, j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

json optional_vector(const std::optional<Vector>& v)
{
    return v ? vector_to_json(*v) : json(nullptr);
}

std::string format_vector(const Vector& v)
{
    std::ostringstream os;
    os.precision(10);
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        os << (i ? ", " : "") << v(i);
    }
    os << ')';
    return os.str();
}

const char* const kTraceNames[] = {"normal_cone_C", "normal_cone_Q", "preimage_C", "preimage_Q", "intersection"};

std::vector<const Cone*> trace_cones(const VerdictTrace& t)
{
    return {&t.normal_cone_C, &t.normal_cone_Q, &t.preimage_C, &t.preimage_Q, &t.intersection};
}

} // namespace

std::string dump_json(const json& j, int indent)
{
    std::string out;
    write(out, j, indent, 0);
    if (indent > 0)
    {
        out += '\n';
    }
    return out;
}

json cone_to_json(const Cone& k)
{
    const ConeSummary s = classify(k);
    return {{"class", to_string(s.kind)},
            {"description", describe(k)},
            {"direction", optional_vector(s.direction)},
            {"E", matrix_to_json(k.E())},
            {"G", matrix_to_json(k.G())},
            {"L", matrix_to_json(k.L())}};
}

json verdict_to_json(const ProblemInstance& p, const StabilityVerdict& v)
{
    json trace = json::object();
    const auto cones = trace_cones(v.trace);
    for (std::size_t i = 0; i < cones.size(); ++i)
    {
        trace[kTraceNames[i]] = cone_to_json(*cones[i]);
    }
    json point = {{"x", vector_to_json(p.x)}};
    if (p.kind == ProblemKind::Nsep)
    {
        point["y"] = vector_to_json(p.y);
    }
    return {{"report_version", kReportVersion},
            {"command", "analyze"},
            {"kind", to_string(p.kind)},
            {"point", point},
            {"verdict", to_string(v.verdict)},
            {"condition_holds", v.condition_holds},
            {"reference_norm", v.reference_norm},
            {"witness", optional_vector(v.witness)},
            {"trace", trace}};
}

json solve_to_json(const ProblemInstance& p, const SolveReport& r, double tol)
{
    return {{"report_version", kReportVersion},
            {"command", "solve"},
            {"kind", to_string(p.kind)},
            {"point", vector_to_json(r.point)},
            {"residual", r.residual},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"tolerance", tol}};
}

json probe_to_json(const ModulusEstimate& est, const StabilityVerdict& v, ProbeConsistency label,
                   double threshold)
{
    json estimates = json::array();
    for (const auto& e : est.estimates)
    {
        estimates.push_back(e ? json(*e) : json(nullptr));
    }
    return {{"report_version", kReportVersion},
            {"command", "probe"},
            {"rng", kRngName},
            {"seed", est.seed},
            {"radii", est.radii},
            {"estimates", estimates},
            {"sample_counts", est.sample_counts},
            {"discretization_sizes", est.discretization_sizes},
            {"samples_per_radius", est.samples_per_radius},
            {"pool_size", est.pool_size},
            {"blowup_factor", est.blowup_factor ? json(*est.blowup_factor) : json(nullptr)},
            {"blowup_threshold", threshold},
            {"threshold_note", "empirical convention, not a theoretical bound"},
            {"verdict", to_string(v.verdict)},
            {"consistency", to_string(label)},
            {"errors", est.errors}};
}

std::string verdict_text(const ProblemInstance& p, const StabilityVerdict& v)
{
    std::ostringstream os;
    os << "problem: " << to_string(p.kind) << "\n";
    os << "reference: x = " << format_vector(p.x);
    if (p.kind == ProblemKind::Nsep)
    {
        os << ", y = " << format_vector(p.y);
    }
    os << "\n";
    const auto cones = trace_cones(v.trace);
    for (std::size_t i = 0; i < cones.size(); ++i)
    {
        os << "  " << kTraceNames[i] << ": " << describe(*cones[i]) << "\n";
    }
    os << "condition holds: " << (v.condition_holds ? "yes" : "no") << "\n";
    if (v.witness)
    {
        os << "witness: " << format_vector(*v.witness) << "\n";
    }
    if (v.verdict == Verdict::Inconclusive)
    {
        os << "reference point is zero; the condition is only sufficient there\n";
    }
    os << "verdict: " << to_string(v.verdict) << "\n";
    return os.str();
}

std::string solve_text(const SolveReport& r)
{
    std::ostringstream os;
    os << (r.converged ? "converged" : "not converged") << " after " << r.iterations << " iterations\n";
    os << "point: " << format_vector(r.point) << "\n";
    os << "residual: " << r.residual << "\n";
    return os.str();
}

std::string probe_text(const ModulusEstimate& est, const StabilityVerdict& v, ProbeConsistency label,
                       double threshold)
{
    std::ostringstream os;
    os << "rng " << kRngName << ", seed " << est.seed << ", " << est.samples_per_radius
       << " samples per radius, pool " << est.pool_size << "\n";
    for (std::size_t i = 0; i < est.radii.size(); ++i)
    {
        os << "  r = " << est.radii[i] << ": ";
        if (est.estimates[i])
        {
            os << "modulus >= " << *est.estimates[i];
        }
        else
        {
            os << "missing";
        }
        os << " (" << est.sample_counts[i] << " pairs)\n";
    }
    for (const auto& e : est.errors)
    {
        os << "  error: " << e << "\n";
    }
    os << "blowup factor: ";
    if (est.blowup_factor)
    {
        os << *est.blowup_factor;
    }
    else
    {
        os << "n/a";
    }
    os << " (threshold " << threshold << ", an empirical convention)\n";
    os << "certifier verdict: " << to_string(v.verdict) << "\n";
    os << "probe: " << to_string(label) << "\n";
    return os.str();
}

VerdictRecord record_of(const StabilityVerdict& v)
{
    VerdictRecord r{v.verdict, v.condition_holds, v.witness, {}};
    for (const Cone* k : trace_cones(v.trace))
    {
        r.cone_classes.push_back(to_string(classify(*k).kind));
    }
    return r;
}

Verdict verdict_from_string(const std::string& s)
{
    for (const Verdict v : {Verdict::LipschitzLike, Verdict::NotLipschitzLike, Verdict::Inconclusive})
    {
        if (s == to_string(v))
        {
            return v;
        }
    }
    throw Error(ErrorKind::Schema, "verdict: unknown value '" + s + "'");
}

VerdictRecord parse_verdict_report(std::string_view json_text)
{
    json doc;
    try
    {
        doc = json::parse(json_text.begin(), json_text.end());
        VerdictRecord r;
        r.verdict = verdict_from_string(doc.at("verdict").get<std::string>());
        r.condition_holds = doc.at("condition_holds").get<bool>();
        const json& w = doc.at("witness");
        if (!w.is_null())
        {
            const auto vals = w.get<std::vector<double>>();
            r.witness = Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
        }
        for (const char* name : kTraceNames)
        {
            r.cone_classes.push_back(doc.at("trace").at(name).at("class").get<std::string>());
        }
        return r;
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorKind::Schema, std::string("report: ") + e.what());
    }
}

} // namespace splitstab
