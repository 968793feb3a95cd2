#include "splitstab/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace splitstab
{

using nlohmann::json;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void schema(const std::string& path, const std::string& msg)
{
    throw Error(ErrorKind::Schema, (path.empty() ? std::string("<root>") : path) + ": " + msg);
}

std::string child(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

const json& field(const json& obj, const std::string& path, const std::string& key)
{
    const auto it = obj.find(key);
    if (it == obj.end())
    {
        schema(child(path, key), "missing field");
    }
    return *it;
}

// Finite number, or an infinity spelled as a string / null where allowed.
double number(const json& j, const std::string& path, double null_value = std::nan(""))
{
    if (j.is_number())
    {
        return j.get<double>();
    }
    if (j.is_null() && !std::isnan(null_value))
    {
        return null_value;
    }
    if (j.is_string() && !std::isnan(null_value))
    {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "Infinity")
        {
            return kInf;
        }
        if (s == "-inf" || s == "-Infinity")
        {
            return -kInf;
        }
    }
    schema(path, "expected a number");
}

Vector vector(const json& j, const std::string& path, double null_value = std::nan(""))
{
    if (!j.is_array())
    {
        schema(path, "expected an array of numbers");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        v(static_cast<Eigen::Index>(i)) = number(j[i], index(path, i), null_value);
    }
    return v;
}

Matrix matrix(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty())
    {
        schema(path, "expected a nonempty array of rows");
    }
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    for (std::size_t i = 0; i < rows; ++i)
    {
        if (!j[i].is_array())
        {
            schema(index(path, i), "expected a row array");
        }
        if (i == 0)
        {
            cols = j[i].size();
        }
        else if (j[i].size() != cols)
        {
            schema(index(path, i), "ragged matrix: expected " + std::to_string(cols) + " entries");
        }
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
    {
        for (std::size_t k = 0; k < cols; ++k)
        {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                number(j[i][k], index(index(path, i), k));
        }
    }
    return m;
}

// Set-level library errors are re-raised with the field path attached.
template <class F>
auto with_path(const std::string& path, F&& f)
{
    try
    {
        return f();
    }
    catch (const Error& e)
    {
        if (e.kind() == ErrorKind::Schema)
        {
            throw;
        }
        throw Error(e.kind(), path + ": " + e.what());
    }
}

} // namespace

ConstraintSet parse_set(const json& j, const std::string& path)
{
    if (!j.is_object())
    {
        schema(path, "expected a set object");
    }
    const json& type = field(j, path, "type");
    if (!type.is_string())
    {
        schema(child(path, "type"), "expected a string");
    }
    const std::string t = type.get<std::string>();
    if (t == "polyhedron")
    {
        Matrix rows = matrix(field(j, path, "rows"), child(path, "rows"));
        Vector rhs = vector(field(j, path, "rhs"), child(path, "rhs"));
        return with_path(path, [&] { return ConstraintSet::polyhedron(std::move(rows), std::move(rhs)); });
    }
    if (t == "box")
    {
        Vector lo = vector(field(j, path, "lower"), child(path, "lower"), -kInf);
        Vector hi = vector(field(j, path, "upper"), child(path, "upper"), kInf);
        return with_path(path, [&] { return ConstraintSet::box(std::move(lo), std::move(hi)); });
    }
    if (t == "orthant")
    {
        const json& dim = field(j, path, "dim");
        if (!dim.is_number_integer() || dim.get<long long>() < 1)
        {
            schema(child(path, "dim"), "expected a positive integer");
        }
        return ConstraintSet::orthant(static_cast<Eigen::Index>(dim.get<long long>()));
    }
    if (t == "singleton")
    {
        Vector pt = vector(field(j, path, "point"), child(path, "point"));
        return with_path(path, [&] { return ConstraintSet::singleton(std::move(pt)); });
    }
    if (t == "quadratic")
    {
        Matrix P = matrix(field(j, path, "P"), child(path, "P"));
        Vector q = vector(field(j, path, "q"), child(path, "q"));
        const double r = j.contains("r") ? number(j["r"], child(path, "r")) : 0.0;
        const json& theta = field(j, path, "theta");
        if (!theta.is_array() || theta.size() != 2)
        {
            schema(child(path, "theta"), "expected [lo, hi]");
        }
        const double lo = number(theta[0], index(child(path, "theta"), 0), -kInf);
        const double hi = number(theta[1], index(child(path, "theta"), 1), kInf);
        return with_path(path, [&] { return ConstraintSet::quadratic(std::move(P), std::move(q), r, lo, hi); });
    }
    if (t == "product")
    {
        const json& factors = field(j, path, "factors");
        if (!factors.is_array() || factors.empty())
        {
            schema(child(path, "factors"), "expected a nonempty array of sets");
        }
        std::vector<ConstraintSet> fs;
        for (std::size_t i = 0; i < factors.size(); ++i)
        {
            fs.push_back(parse_set(factors[i], index(child(path, "factors"), i)));
        }
        return ConstraintSet::product(std::move(fs));
    }
    schema(child(path, "type"), "unknown set type '" + t + "'");
}

ProblemInstance parse_problem(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorKind::Schema, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
    {
        schema("", "expected a JSON object");
    }
    const json& version = field(doc, "", "version");
    if (!version.is_number_integer() || version.get<long long>() != kProblemFileVersion)
    {
        schema("version", "unsupported version (expected " + std::to_string(kProblemFileVersion) + ")");
    }
    const json& kind = field(doc, "", "kind");
    if (!kind.is_string() || (kind != "nsep" && kind != "nsfp"))
    {
        schema("kind", "expected \"nsep\" or \"nsfp\"");
    }
    Matrix A = matrix(field(doc, "", "A"), "A");
    ConstraintSet C = parse_set(field(doc, "", "C"), "C");
    ConstraintSet Q = parse_set(field(doc, "", "Q"), "Q");
    const json& point = field(doc, "", "point");
    if (!point.is_object())
    {
        schema("point", "expected an object with \"x\" (and \"y\")");
    }
    Vector x = vector(field(point, "point", "x"), "point.x");

    ProblemInstance p;
    if (kind == "nsep")
    {
        Matrix B = matrix(field(doc, "", "B"), "B");
        Vector c = vector(field(doc, "", "c"), "c");
        Vector y = vector(field(point, "point", "y"), "point.y");
        p = ProblemInstance::nsep(std::move(A), std::move(B), std::move(c), std::move(C), std::move(Q),
                                  std::move(x), std::move(y));
    }
    else
    {
        Vector b = vector(field(doc, "", "b"), "b");
        p = ProblemInstance::nsfp(std::move(A), std::move(b), std::move(C), std::move(Q), std::move(x));
    }
    p.check_feasible();
    return p;
}

ProblemInstance load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::Schema, "cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

json vector_to_json(const Vector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        const double x = v(i);
        if (std::isinf(x))
        {
            out.push_back(x > 0 ? "inf" : "-inf");
        }
        else
        {
            out.push_back(x);
        }
    }
    return out;
}

json matrix_to_json(const Matrix& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        out.push_back(vector_to_json(m.row(i).transpose()));
    }
    return out;
}

json set_to_json(const ConstraintSet& set)
{
    const auto bound = [](double v) -> json {
        if (std::isinf(v))
        {
            return nullptr;
        }
        return v;
    };
    return std::visit(
        [&](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Polyhedron>)
            {
                return {{"type", "polyhedron"}, {"rows", matrix_to_json(s.rows)}, {"rhs", vector_to_json(s.rhs)}};
            }
            else if constexpr (std::is_same_v<T, Box>)
            {
                return {{"type", "box"}, {"lower", vector_to_json(s.lower)}, {"upper", vector_to_json(s.upper)}};
            }
            else if constexpr (std::is_same_v<T, Orthant>)
            {
                return {{"type", "orthant"}, {"dim", s.dim}};
            }
            else if constexpr (std::is_same_v<T, Singleton>)
            {
                return {{"type", "singleton"}, {"point", vector_to_json(s.point)}};
            }
            else if constexpr (std::is_same_v<T, QuadraticSublevel>)
            {
                return {{"type", "quadratic"},
                        {"P", matrix_to_json(s.P)},
                        {"q", vector_to_json(s.q)},
                        {"r", s.r},
                        {"theta", json::array({bound(s.theta_lo), bound(s.theta_hi)})}};
            }
            else
            {
                json factors = json::array();
                for (const auto& f : s.factors)
                {
                    factors.push_back(set_to_json(f));
                }
                return {{"type", "product"}, {"factors", factors}};
            }
        },
        set.variant());
}

json problem_to_json(const ProblemInstance& p)
{
    json out = {{"version", kProblemFileVersion}, {"kind", to_string(p.kind)}, {"A", matrix_to_json(p.A)}};
    if (p.kind == ProblemKind::Nsep)
    {
        out["B"] = matrix_to_json(p.B);
        out["c"] = vector_to_json(p.c);
        out["point"] = {{"x", vector_to_json(p.x)}, {"y", vector_to_json(p.y)}};
    }
    else
    {
        out["b"] = vector_to_json(p.b);
        out["point"] = {{"x", vector_to_json(p.x)}};
    }
    out["C"] = set_to_json(p.C);
    out["Q"] = set_to_json(p.Q);
    return out;
}

} // namespace splitstab
