// specvar: spectral-variation bounds for non-selfadjoint perturbations of
// Hermitian matrices.
//
// Exit codes: 0 every verified inequality holds, 2 an inequality is violated,
// 1 usage, parse or numerical error.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specvar/io.hpp"

namespace sv = specvar;

namespace {

constexpr int kExitHolds    = 0;
constexpr int kExitError    = 1;
constexpr int kExitViolated = 2;

void emit(const sv::Json& doc, const std::string& out_path)
{
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        sv::write_text_file(out_path, text);
}

sv::Json bound_parameters(double p, sv::BpMode mode)
{
    return sv::Json{{"p", p}, {"mode", std::string(sv::to_string(mode))}};
}

std::vector<std::size_t> parse_selection(const std::string& text)
{
    std::vector<std::size_t> sel;
    std::stringstream        in(text);
    for (std::string item; std::getline(in, item, ',');)
    {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw sv::ParameterError("empty entry in --select");
        item = item.substr(b, e - b + 1);
        if (item.find_first_not_of("0123456789") != std::string::npos)
            throw sv::ParameterError("--select entry '" + item + "' is not a non-negative integer");
        sel.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    return sel;
}

struct PairInput
{
    sv::LoadedMatrix a;
    sv::LoadedMatrix b;

    std::vector<sv::InputDigest> digests() const
    {
        return {{"a", a.path, a.digest}, {"b", b.path, b.digest}};
    }
};

PairInput load_pair(const std::string& a_path, const std::string& b_path)
{
    PairInput in{sv::load_matrix(a_path), sv::load_matrix(b_path)};
    sv::require_square(in.a.matrix, "A");
    sv::require_square(in.b.matrix, "B");
    sv::require_same_shape(in.a.matrix, in.b.matrix);
    return in;
}

// --- check ------------------------------------------------------------------

struct CheckArgs
{
    std::string a, b, bound, mode = "upper_bound", out;
    double      p      = 2.0;
    int         angles = 128;
};

int cmd_check(const CheckArgs& args)
{
    const auto mode = sv::parse_bp_mode(args.mode);
    const auto in   = load_pair(args.a, args.b);
    const auto& a   = in.a.matrix;
    const auto& b   = in.b.matrix;

    sv::BoundReport r;
    if (args.bound == "corollary")
        r = sv::check_corollary(a, b, args.p, mode);
    else if (args.bound == "main")
        r = sv::check_main_theorem(a, b, args.p, mode);
    else if (args.bound == "kato")
        r = sv::check_kato(a, b, args.p);
    else if (args.bound == "interval")
        r = sv::check_interval_bound(a, b, args.p);
    else if (args.bound == "numrange")
        r = sv::check_numrange_bound(a, b, args.p, args.angles);
    else
        throw sv::ParameterError("unknown bound '" + args.bound + "'");

    auto params = bound_parameters(args.p, mode);
    params["bound"] = args.bound;
    if (args.bound == "numrange")
        params["angles"] = args.angles;
    emit(sv::make_report_document("check." + args.bound, params, sv::to_json(r), in.digests()), args.out);
    return r.holds ? kExitHolds : kExitViolated;
}

// --- chain ------------------------------------------------------------------

struct ChainArgs
{
    std::string a, b, select, mode = "upper_bound", out;
    double      p = 2.0;
};

int cmd_chain(const ChainArgs& args)
{
    const auto mode = sv::parse_bp_mode(args.mode);
    const auto in   = load_pair(args.a, args.b);
    const auto sel  = parse_selection(args.select);

    const sv::ChainReport chain = sv::verify_proof_chain(in.a.matrix, in.b.matrix, args.p, sel, mode);

    auto params      = bound_parameters(args.p, mode);
    params["select"] = sel;
    emit(sv::make_report_document("chain", params, sv::to_json(chain), in.digests()), args.out);
    return chain.all_hold() ? kExitHolds : kExitViolated;
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs
{
    int           dim    = 8;
    double        p      = 2.0;
    int           trials = 100;
    std::uint64_t seed   = 1;
    std::string   ensemble = "gue_plus_ginibre", csv;
};

int cmd_sweep(const SweepArgs& args)
{
    sv::TrialConfig cfg;
    cfg.dim           = args.dim;
    cfg.p             = args.p;
    cfg.trials        = args.trials;
    cfg.seed          = args.seed;
    cfg.ensemble      = sv::parse_ensemble(args.ensemble);
    cfg.subset_chains = std::min(cfg.subset_chains, std::max(args.trials, 0));
    cfg.validate();

    const sv::SweepSummary s   = sv::run_sweep(cfg, sv::sweep_threads_from_env());
    const sv::Json         doc = sv::make_report_document("sweep", sv::to_json(cfg), sv::to_json(s));
    const std::string      csv = sv::sweep_csv(s);
    if (args.csv.empty())
    {
        std::cout << csv;
        std::cerr << doc.dump(2) << "\n";
    }
    else
    {
        sv::write_text_file(args.csv, csv);
        sv::write_text_file(args.csv + ".summary.json", doc.dump(2) + "\n");
    }
    return s.violations == 0 ? kExitHolds : kExitViolated;
}

// --- constants ----------------------------------------------------------------

struct ConstantsArgs
{
    double      p    = 2.0;
    std::string mode = "upper_bound", out;
};

int cmd_constants(const ConstantsArgs& args)
{
    const auto   mode = sv::parse_bp_mode(args.mode);
    const double p    = args.p;
    sv::require_schatten_exponent(p);

    struct Row
    {
        std::string                      name;
        std::optional<sv::ConstantValue> value;
        std::string                      note;
    };
    auto guarded = [&](const std::string& name, auto&& fn) {
        if (!(p > 1.0) || std::isinf(p))
            return Row{name, std::nullopt, "unsupported (p>1 required)"};
        return Row{name, fn(), ""};
    };
    std::vector<Row> rows;
    rows.push_back(guarded("b_p", [&] { return sv::bp(p, mode); }));
    rows.push_back(guarded("Gamma_p", [&] { return sv::gamma_p(p, mode); }));
    rows.push_back({"L_p", sv::lp(p), ""});
    rows.push_back({"M_p", sv::mp(p), ""});
    rows.push_back({"N_p", sv::np_const(p), ""});
    rows.push_back(guarded("C_p", [&] { return sv::cp(p, mode); }));

    sv::Json table = sv::Json::array();
    std::printf("p = %s  mode = %s\n", sv::format_double(p).c_str(), std::string(sv::to_string(mode)).c_str());
    for (const auto& r : rows)
    {
        if (r.value)
        {
            std::printf("%-8s %-24s %s\n", r.name.c_str(), sv::format_double(r.value->value).c_str(),
                        r.value->exact ? "exact" : "bound");
            table.push_back(sv::Json{{"name", r.name},
                                     {"value", r.value->value},
                                     {"exact", r.value->exact},
                                     {"status", "ok"}});
        }
        else
        {
            std::printf("%-8s %s\n", r.name.c_str(), r.note.c_str());
            table.push_back(sv::Json{{"name", r.name}, {"value", nullptr}, {"exact", false}, {"status", r.note}});
        }
    }
    if (!args.out.empty())
        emit(sv::make_report_document("constants", bound_parameters(p, mode), sv::Json{{"rows", table}}), args.out);
    return kExitHolds;
}

// --- sharpness ----------------------------------------------------------------

struct SharpnessArgs
{
    double        p        = 2.0;
    int           dim      = 2;
    int           iters    = 2000;
    int           restarts = 8;
    std::uint64_t seed     = 1;
    std::string   out;
};

int cmd_sharpness(const SharpnessArgs& args)
{
    const sv::SharpnessResult r = sv::sharpness_search(args.p, args.dim, args.iters, args.seed, args.restarts);

    const double ceiling = sv::cp(args.p).value * (1.0 + 1e-6);
    sv::Json     payload = sv::to_json(r);
    payload["ceiling"]   = ceiling;
    if (!args.out.empty())
    {
        const std::string trace_path = args.out + ".trace.csv";
        sv::write_text_file(trace_path, sv::sharpness_trace_csv(r));
        payload["trace_csv"] = trace_path;
    }
    const sv::Json params{{"p", args.p},
                          {"dim", args.dim},
                          {"iters", args.iters},
                          {"restarts", args.restarts},
                          {"seed", args.seed}};
    emit(sv::make_report_document("sharpness", params, std::move(payload)), args.out);
    return r.best_ratio <= ceiling ? kExitHolds : kExitViolated;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral variation bounds for non-selfadjoint perturbations of Hermitian matrices"};
    app.set_version_flag("--version", std::string(sv::kToolVersion));
    app.require_subcommand(1);

    const std::vector<std::string> modes = {"upper_bound", "exact_when_known"};

    CheckArgs check;
    auto*     c = app.add_subcommand("check", "verify one inequality on a matrix pair");
    c->add_option("--a", check.a, "Hermitian matrix A (json_dense or Matrix Market)")->required();
    c->add_option("--b", check.b, "perturbed matrix B")->required();
    c->add_option("--p", check.p, "Schatten exponent")->required();
    c->add_option("--bound", check.bound, "inequality to verify")
        ->required()
        ->check(CLI::IsMember({"corollary", "main", "kato", "interval", "numrange"}));
    c->add_option("--mode", check.mode, "b_p evaluation mode")->check(CLI::IsMember(modes));
    c->add_option("--angles", check.angles, "supporting half-planes for the numerical range");
    c->add_option("--out", check.out, "report path (default stdout)");

    ChainArgs chain;
    auto*     ch = app.add_subcommand("chain", "trace every step of the proof pipeline");
    ch->add_option("--a", chain.a, "Hermitian matrix A")->required();
    ch->add_option("--b", chain.b, "perturbed matrix B")->required();
    ch->add_option("--p", chain.p, "Schatten exponent")->required();
    ch->add_option("--select", chain.select, "0-based indices into the sorted eigenvalues of B (default all)");
    ch->add_option("--mode", chain.mode, "b_p evaluation mode")->check(CLI::IsMember(modes));
    ch->add_option("--out", chain.out, "report path (default stdout)");

    SweepArgs sweep;
    auto*     sw = app.add_subcommand("sweep", "randomized soundness sweep over all checkers");
    sw->add_option("--dim", sweep.dim, "matrix dimension")->required();
    sw->add_option("--p", sweep.p, "Schatten exponent")->required();
    sw->add_option("--trials", sweep.trials, "number of random instances")->required();
    sw->add_option("--seed", sweep.seed, "base seed")->required();
    sw->add_option("--ensemble", sweep.ensemble, "instance ensemble")
        ->check(CLI::IsMember({"gue_plus_ginibre", "hermitian_pair", "sharp_family"}));
    sw->add_option("--csv", sweep.csv, "CSV path; the summary goes to <csv>.summary.json (default stdout/stderr)");

    ConstantsArgs constants;
    auto*         co = app.add_subcommand("constants", "table of the bound constants at p");
    co->add_option("--p", constants.p, "Schatten exponent")->required();
    co->add_option("--mode", constants.mode, "b_p evaluation mode")->check(CLI::IsMember(modes));
    co->add_option("--out", constants.out, "JSON report path");

    SharpnessArgs sharp;
    auto*         sh = app.add_subcommand("sharpness", "simplex search for large variation ratios");
    sh->add_option("--p", sharp.p, "Schatten exponent (> 1)")->required();
    sh->add_option("--dim", sharp.dim, "matrix dimension")->required();
    sh->add_option("--iters", sharp.iters, "iterations per restart")->required();
    sh->add_option("--restarts", sharp.restarts, "random restarts")->required();
    sh->add_option("--seed", sharp.seed, "base seed")->required();
    sh->add_option("--out", sharp.out, "JSON path; the trace goes to <out>.trace.csv (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitHolds : kExitError;
    }

    try
    {
        if (*c)
            return cmd_check(check);
        if (*ch)
            return cmd_chain(chain);
        if (*sw)
            return cmd_sweep(sweep);
        if (*co)
            return cmd_constants(constants);
        if (*sh)
            return cmd_sharpness(sharp);
    }
    catch (const sv::Error& e)
    {
        std::cerr << "specvar: " << e.kind() << ": " << e.what() << "\n";
        return kExitError;
    }
    catch (const std::exception& e)
    {
        std::cerr << "specvar: error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
