#pragma once
//
// Matrix file formats (json_dense, Matrix Market complex), report documents
// and sweep CSV.
//
// json_dense: {"rows": m, "cols": n, "data": [[re, im], ...]} in row-major order.
// Matrix Market: array or coordinate layout, field complex/real/integer,
// symmetry general/symmetric/hermitian/skew-symmetric; written as complex
// general arrays with 17 significant digits.
//

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "specvar/bounds.hpp"
#include "specvar/harness.hpp"

namespace specvar {

inline constexpr std::string_view kToolVersion = "0.1.0";

using Json = nlohmann::json;

enum class MatrixFormat
{
    json_dense,
    matrix_market_complex,
};

// --- raw text ---------------------------------------------------------------

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_text_file(const std::string& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot write '" + path + "'");
    out << text;
    if (!out)
        throw FormatError("write to '" + path + "' failed");
}

/// 64-bit FNV-1a over raw bytes, as "fnv1a64:<16 hex digits>".
inline std::string fnv1a_digest(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// %.17g: round-trips every finite double.
inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- json_dense ---------------------------------------------------------------

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw FormatError("complex entry must be a [re, im] pair of numbers");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json to_json_dense(const ComplexMatrix& m)
{
    Json data = Json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            data.push_back(complex_to_json(m(i, j)));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix from_json_dense(const Json& j)
{
    if (!j.is_object())
        throw FormatError("json_dense matrix must be an object");
    for (const char* key : {"rows", "cols", "data"})
        if (!j.contains(key))
            throw FormatError(std::string("json_dense matrix lacks \"") + key + "\"");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw FormatError("json_dense rows/cols must be integers");
    const auto rows = j["rows"].get<long long>();
    const auto cols = j["cols"].get<long long>();
    if (rows < 0 || cols < 0)
        throw FormatError("json_dense rows/cols must be non-negative");
    const Json& data = j["data"];
    if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols)
        throw FormatError("json_dense data must hold rows*cols = " + std::to_string(rows * cols) + " entries");
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(data[static_cast<std::size_t>(i * cols + k)]);
    return m;
}

inline ComplexMatrix parse_json_dense(std::string_view text)
{
    Json j;
    try
    {
        j = Json::parse(text);
    }
    catch (const Json::parse_error& e)
    {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    return from_json_dense(j);
}

inline std::string write_json_dense(const ComplexMatrix& m) { return to_json_dense(m).dump() + "\n"; }

// --- Matrix Market ------------------------------------------------------------

namespace detail {

inline std::string lower(std::string s)
{
    for (auto& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

/// Places (i, j, v) and its mirror image implied by `symmetry`.
inline void mm_store(ComplexMatrix& m, Index i, Index j, Complex v, const std::string& symmetry)
{
    m(i, j) = v;
    if (i == j)
        return;
    if (symmetry == "symmetric")
        m(j, i) = v;
    else if (symmetry == "hermitian")
        m(j, i) = std::conj(v);
    else if (symmetry == "skew-symmetric")
        m(j, i) = -v;
}

} // namespace detail

inline ComplexMatrix parse_matrix_market(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string        line;
    if (!std::getline(in, line))
        throw FormatError("empty Matrix Market file");

    std::istringstream header(line);
    std::string        banner, object, layout, field, symmetry;
    header >> banner >> object >> layout >> field >> symmetry;
    if (banner != "%%MatrixMarket")
        throw FormatError("missing %%MatrixMarket banner");
    object   = detail::lower(object);
    layout   = detail::lower(layout);
    field    = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (object != "matrix")
        throw FormatError("unsupported Matrix Market object '" + object + "'");
    if (layout != "array" && layout != "coordinate")
        throw FormatError("unsupported Matrix Market layout '" + layout + "'");
    if (field != "complex" && field != "real" && field != "integer")
        throw FormatError("unsupported Matrix Market field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" && symmetry != "skew-symmetric")
        throw FormatError("unsupported Matrix Market symmetry '" + symmetry + "'");
    if (symmetry == "hermitian" && field != "complex")
        throw FormatError("hermitian symmetry requires the complex field");

    // remaining non-comment tokens
    std::vector<std::string> tokens;
    while (std::getline(in, line))
    {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%')
            continue;
        std::istringstream ls(line);
        for (std::string tok; ls >> tok;)
            tokens.push_back(tok);
    }
    std::size_t pos  = 0;
    auto        next = [&]() -> const std::string& {
        if (pos >= tokens.size())
            throw FormatError("Matrix Market data ends early");
        return tokens[pos++];
    };
    auto as_long = [](const std::string& s) {
        std::size_t used = 0;
        long long   v    = 0;
        try
        {
            v = std::stoll(s, &used);
        }
        catch (const std::exception&)
        {
            throw FormatError("expected an integer, got '" + s + "'");
        }
        if (used != s.size())
            throw FormatError("expected an integer, got '" + s + "'");
        return v;
    };
    // strtod rather than stod: subnormal values set ERANGE but are valid data
    auto as_double = [](const std::string& s) {
        char*        end = nullptr;
        const double v   = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
            throw FormatError("expected a finite number, got '" + s + "'");
        return v;
    };
    auto value = [&]() {
        const double re = as_double(next());
        const double im = field == "complex" ? as_double(next()) : 0.0;
        return Complex(re, im);
    };

    const long long rows = as_long(next());
    const long long cols = as_long(next());
    if (rows < 0 || cols < 0)
        throw FormatError("negative Matrix Market dimensions");
    if (symmetry != "general" && rows != cols)
        throw FormatError("symmetric storage requires a square matrix");
    ComplexMatrix m = ComplexMatrix::Zero(rows, cols);

    if (layout == "array")
    {
        // column-major; symmetric kinds list the lower triangle only
        for (Index j = 0; j < cols; ++j)
        {
            const Index start = symmetry == "general" ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
            for (Index i = start; i < rows; ++i)
                detail::mm_store(m, i, j, value(), symmetry);
        }
    }
    else
    {
        const long long nnz = as_long(next());
        if (nnz < 0)
            throw FormatError("negative Matrix Market entry count");
        for (long long e = 0; e < nnz; ++e)
        {
            const long long i = as_long(next());
            const long long j = as_long(next());
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw FormatError("Matrix Market entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") outside the matrix");
            detail::mm_store(m, i - 1, j - 1, value(), symmetry);
        }
    }
    if (pos != tokens.size())
        throw FormatError("trailing data after Matrix Market entries");
    return m;
}

inline std::string write_matrix_market(const ComplexMatrix& m)
{
    std::string out = "%%MatrixMarket matrix array complex general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            out += format_double(m(i, j).real()) + " " + format_double(m(i, j).imag()) + "\n";
    return out;
}

/// Format from content: a leading '{' is json_dense, a %%MatrixMarket banner is Matrix Market.
inline MatrixFormat detect_matrix_format(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{')
        return MatrixFormat::json_dense;
    if (text.substr(first == std::string_view::npos ? 0 : first).starts_with("%%MatrixMarket"))
        return MatrixFormat::matrix_market_complex;
    throw FormatError("unrecognized matrix format (expected json_dense or Matrix Market)");
}

inline ComplexMatrix parse_matrix(std::string_view text)
{
    return detect_matrix_format(text) == MatrixFormat::json_dense ? parse_json_dense(text)
                                                                  : parse_matrix_market(text);
}

struct LoadedMatrix
{
    ComplexMatrix matrix;
    std::string   path;
    std::string   digest;
};

inline LoadedMatrix load_matrix(const std::string& path)
{
    const std::string text = read_text_file(path);
    try
    {
        return {parse_matrix(text), path, fnv1a_digest(text)};
    }
    catch (const FormatError& e)
    {
        throw FormatError(path + ": " + e.what());
    }
}

// --- report payloads ------------------------------------------------------------

inline Json to_json(const ConstantValue& c)
{
    return Json{{"value", c.value}, {"exact", c.exact}, {"tag", std::string(to_string(c.tag))}};
}

inline Json to_json(const BoundReport& r)
{
    Json j{{"name", r.name},   {"lhs", r.lhs},     {"rhs", r.rhs}, {"constant", to_json(r.constant)},
           {"slack", r.slack}, {"holds", r.holds}, {"tol", r.tol}};
    if (r.exact_mode_rhs)
        j["exact_mode_rhs"] = *r.exact_mode_rhs;
    return j;
}

inline Json to_json(const ChainReport& c)
{
    Json steps = Json::array();
    for (const auto& s : c.steps)
        steps.push_back(to_json(s));
    Json lambdas = Json::array();
    for (const auto& z : c.lambda_set)
        lambdas.push_back(complex_to_json(z));
    return Json{{"steps", std::move(steps)},
                {"lambda_set", std::move(lambdas)},
                {"subspace_dim", c.subspace_dim},
                {"all_hold", c.all_hold()}};
}

inline Json to_json(const TrialConfig& c)
{
    return Json{{"dim", c.dim},
                {"p", c.p},
                {"trials", c.trials},
                {"seed", c.seed},
                {"ensemble", std::string(to_string(c.ensemble))},
                {"perturbation_norm", c.perturbation_norm},
                {"angle_count", c.angle_count},
                {"subset_chains", c.subset_chains},
                {"mode", std::string(to_string(c.mode))}};
}

inline Json to_json(const SweepSummary& s)
{
    Json quant = Json::object();
    for (const auto& [name, q] : s.slack_quantiles)
        quant[name] = Json{{"min", q.min}, {"median", q.median}, {"max", q.max}};
    Json failures = Json::array();
    for (const auto& f : s.failures)
        failures.push_back(Json{{"trial", f.trial}, {"kind", f.kind}, {"message", f.message}});
    Json argmax = nullptr;
    if (s.argmax_trial >= 0)
        argmax = Json{{"trial", s.argmax_trial}, {"a", to_json_dense(s.argmax_a)}, {"b", to_json_dense(s.argmax_b)}};
    return Json{{"config", to_json(s.config)},
                {"max_ratio", s.max_ratio},
                {"argmax_instance", std::move(argmax)},
                {"violations", s.violations},
                {"slack_quantiles", std::move(quant)},
                {"failures", std::move(failures)}};
}

inline Json to_json(const SharpnessResult& r)
{
    Json trace = Json::array();
    for (const auto& t : r.trace)
        trace.push_back(Json{{"restart", t.restart}, {"iteration", t.iteration}, {"best_ratio", t.best_ratio}});
    return Json{{"best_ratio", r.best_ratio},
                {"best_pair", Json{{"a", to_json_dense(r.a)}, {"b", to_json_dense(r.b)}}},
                {"trace", std::move(trace)}};
}

// --- report document --------------------------------------------------------------

struct InputDigest
{
    std::string role;
    std::string path;
    std::string digest;
};

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm           tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Everything except "timestamp" is a deterministic function of the inputs.
inline Json make_report_document(std::string_view check, Json parameters, Json payload,
                                 const std::vector<InputDigest>& inputs = {})
{
    Json in = Json::array();
    for (const auto& d : inputs)
        in.push_back(Json{{"role", d.role}, {"path", d.path}, {"digest", d.digest}});
    return Json{{"tool_version", std::string(kToolVersion)},
                {"check", std::string(check)},
                {"inputs", std::move(in)},
                {"parameters", std::move(parameters)},
                {"payload", std::move(payload)},
                {"timestamp", utc_timestamp()}};
}

// --- CSV ------------------------------------------------------------------------

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline constexpr std::string_view kSweepCsvHeader = "trial,p,dim,check_name,lhs,rhs,slack,holds,ratio";

/// Records in sweep order; CRLF line endings, `holds` empty for record-only rows.
inline std::string sweep_csv(const SweepSummary& s)
{
    std::string out(kSweepCsvHeader);
    out += "\r\n";
    const std::string p   = format_double(s.config.p);
    const std::string dim = std::to_string(s.config.dim);
    for (const auto& r : s.records)
    {
        out += std::to_string(r.trial) + "," + p + "," + dim + "," + csv_field(r.check) + "," + format_double(r.lhs) +
               "," + format_double(r.rhs) + "," + format_double(r.slack) + "," +
               (r.holds ? (*r.holds ? "true" : "false") : "") + "," + format_double(r.ratio) + "\r\n";
    }
    return out;
}

inline std::string sharpness_trace_csv(const SharpnessResult& r)
{
    std::string out = "restart,iteration,best_ratio\r\n";
    for (const auto& t : r.trace)
        out += std::to_string(t.restart) + "," + std::to_string(t.iteration) + "," + format_double(t.best_ratio) + "\r\n";
    return out;
}

} // namespace specvar
