#pragma once
//
// Random instances, batch soundness sweeps and the extremal search for
// sharpness witnesses of  sum dist(lambda, sigma(A))^p / ||B - A||_p^p.
//
// Reproducibility: every random draw comes from a generator seeded by
// derive_seed(seed, trial, stream), so results do not depend on how trials
// are scheduled across threads.
//

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "specvar/bounds.hpp"
#include "specvar/nelder_mead.hpp"

namespace specvar {

/// splitmix64 mixing of (seed, trial, stream) into one 64-bit seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ trial) ^ (stream * 0xd1b54a32d192ed03ULL));
}

/// Complex Ginibre matrix: iid entries (x + i y) / sqrt(2), x, y ~ N(0, 1).
inline ComplexMatrix gen_ginibre(Index rows, Index cols, std::uint64_t seed)
{
    std::mt19937_64                  rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix                    g(rows, cols);
    const double                     s = 1.0 / std::sqrt(2.0);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j)         = Complex(re * s, im * s);
        }
    return g;
}

/// GUE-style Hermitian matrix (G + G*) / 2.
inline ComplexMatrix gen_hermitian(Index n, std::uint64_t seed)
{
    if (n < 1)
        throw ParameterError("gen_hermitian: n must be >= 1");
    const ComplexMatrix g = gen_ginibre(n, n, seed);
    return (g + g.adjoint()) * 0.5;
}

namespace detail {

template <typename Draw>
ComplexMatrix normalized_draw(Draw&& draw, std::uint64_t seed, double p, double target_norm)
{
    if (!(target_norm > 0.0) || std::isinf(target_norm))
        throw ParameterError("target norm must be positive and finite");
    for (std::uint64_t s = seed;; ++s)
    {
        const ComplexMatrix k    = draw(s);
        const double        norm = schatten_norm(k, p);
        if (norm > 0.0)
            return k * (target_norm / norm);
    }
}

} // namespace detail

/// Ginibre matrix rescaled to ||K||_p = target_norm.
inline ComplexMatrix gen_perturbation(Index n, std::uint64_t seed, double p, double target_norm)
{
    if (n < 1)
        throw ParameterError("gen_perturbation: n must be >= 1");
    return detail::normalized_draw([n](std::uint64_t s) { return gen_ginibre(n, n, s); }, seed, p, target_norm);
}

/// Hermitian perturbation rescaled to ||H||_p = target_norm.
inline ComplexMatrix gen_hermitian_perturbation(Index n, std::uint64_t seed, double p, double target_norm)
{
    return detail::normalized_draw([n](std::uint64_t s) { return gen_hermitian(n, s); }, seed, p, target_norm);
}

enum class SharpKind
{
    remark1,        // A = [[0,1],[1,0]], B = [[0,1],[0,0]]
    main1_family,   // A = [[0,1],[1,0]], B = [[ib,1],[0,ib]]
};

inline std::pair<ComplexMatrix, ComplexMatrix> sharp_pair(SharpKind kind, double b = 1.0)
{
    ComplexMatrix a(2, 2);
    a << 0.0, 1.0, 1.0, 0.0;
    ComplexMatrix bm(2, 2);
    if (kind == SharpKind::remark1)
    {
        bm << 0.0, 1.0, 0.0, 0.0;
        return {a, bm};
    }
    if (!(b > 0.0))
        throw ParameterError("main1_family needs b > 0");
    bm << Complex(0.0, b), 1.0, 0.0, Complex(0.0, b);
    return {a, bm};
}

/// sum dist(lambda, sigma(A))^p / ||B - A||_p^p
inline double ratio(const ComplexMatrix& a, const ComplexMatrix& b, double p)
{
    detail::require_variation_args(a, b, p);
    const double k = schatten_norm(b - a, p);
    if (!(k > 1e-12))
        throw DegenerateError("ratio undefined: ||B - A||_p vanishes");
    return spectral_variation(a, b, p) / std::pow(k, p);
}

enum class Ensemble
{
    gue_plus_ginibre,
    hermitian_pair,
    sharp_family,
};

inline std::string_view to_string(Ensemble e)
{
    switch (e)
    {
        case Ensemble::gue_plus_ginibre: return "gue_plus_ginibre";
        case Ensemble::hermitian_pair:   return "hermitian_pair";
        case Ensemble::sharp_family:     return "sharp_family";
    }
    return "?";
}

inline Ensemble parse_ensemble(std::string_view s)
{
    if (s == "gue_plus_ginibre")
        return Ensemble::gue_plus_ginibre;
    if (s == "hermitian_pair")
        return Ensemble::hermitian_pair;
    if (s == "sharp_family")
        return Ensemble::sharp_family;
    throw ParameterError("unknown ensemble '" + std::string(s) + "'");
}

struct TrialConfig
{
    int           dim               = 8;
    double        p                 = 2.0;
    int           trials            = 100;
    std::uint64_t seed              = 1;
    Ensemble      ensemble          = Ensemble::gue_plus_ginibre;
    double        perturbation_norm = 1.0;
    int           angle_count       = 128;
    /// the first `subset_chains` trials also run the proof chain on a random proper subset
    int           subset_chains     = 100;
    BpMode        mode              = BpMode::upper_bound;

    void validate() const
    {
        if (dim < 2)
            throw ParameterError("dim must be >= 2");
        if (trials < 1)
            throw ParameterError("trials must be >= 1");
        if (!(p >= 1.0) || std::isinf(p))
            throw ParameterError("p must be finite and >= 1");
        if (!(perturbation_norm > 0.0))
            throw ParameterError("perturbation_norm must be positive");
        if (angle_count < 8)
            throw ParameterError("angle_count must be >= 8");
        if (subset_chains < 0)
            throw ParameterError("subset_chains must be >= 0");
    }
};

/// One row of sweep output.  `holds` is empty for record-only rows (p = 1 ratio).
struct CheckRecord
{
    int                 trial = 0;
    std::string         check;
    double              lhs   = 0.0;
    double              rhs   = 0.0;
    double              slack = 0.0;
    std::optional<bool> holds;
    double              ratio = 0.0;
};

struct SlackQuantiles
{
    double min    = 0.0;
    double median = 0.0;
    double max    = 0.0;
};

struct TrialFailure
{
    int         trial = 0;
    std::string kind;
    std::string message;
};

struct SweepSummary
{
    TrialConfig                           config;
    double                                max_ratio = 0.0;
    int                                   argmax_trial = -1;
    ComplexMatrix                         argmax_a;
    ComplexMatrix                         argmax_b;
    int                                   violations = 0;
    std::map<std::string, SlackQuantiles> slack_quantiles;
    std::vector<TrialFailure>             failures;
    std::vector<CheckRecord>              records;
};

namespace detail {

struct TrialOutcome
{
    ComplexMatrix               a;
    ComplexMatrix               b;
    double                      ratio = 0.0;
    std::vector<CheckRecord>    records;
    std::optional<TrialFailure> failure;
};

inline std::pair<ComplexMatrix, ComplexMatrix> draw_instance(const TrialConfig& cfg, int trial)
{
    const auto   t = static_cast<std::uint64_t>(trial);
    const Index  n = cfg.dim;
    switch (cfg.ensemble)
    {
        case Ensemble::gue_plus_ginibre:
        {
            ComplexMatrix a = gen_hermitian(n, derive_seed(cfg.seed, t, 0));
            ComplexMatrix k = gen_perturbation(n, derive_seed(cfg.seed, t, 1), cfg.p, cfg.perturbation_norm);
            return {a, a + k};
        }
        case Ensemble::hermitian_pair:
        {
            ComplexMatrix a = gen_hermitian(n, derive_seed(cfg.seed, t, 0));
            ComplexMatrix h =
                gen_hermitian_perturbation(n, derive_seed(cfg.seed, t, 1), cfg.p, cfg.perturbation_norm);
            return {a, a + h};
        }
        case Ensemble::sharp_family:
        {
            static constexpr double kFamily[] = {0.25, 0.5, 1.0, 2.0, 4.0};
            if (trial == 0)
                return sharp_pair(SharpKind::remark1);
            return sharp_pair(SharpKind::main1_family, kFamily[(trial - 1) % 5]);
        }
    }
    throw ParameterError("unknown ensemble");
}

inline std::vector<std::size_t> random_proper_subset(Index n, std::uint64_t seed)
{
    std::mt19937_64                    rng(seed);
    std::uniform_int_distribution<int> size_dist(1, static_cast<int>(n) - 1);
    std::vector<std::size_t>           all = full_selection(n);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(size_dist(rng)));
    std::sort(all.begin(), all.end());
    return all;
}

inline TrialOutcome run_trial(const TrialConfig& cfg, int trial)
{
    TrialOutcome out;
    const double p          = cfg.p;
    const bool   theorem_ok = p > 1.0;
    auto         add        = [&](const BoundReport& r, std::string name) {
        out.records.push_back({trial, std::move(name), r.lhs, r.rhs, r.slack, r.holds, 0.0});
    };
    try
    {
        std::tie(out.a, out.b) = draw_instance(cfg, trial);
        const ComplexMatrix& a = out.a;
        const ComplexMatrix& b = out.b;
        const ComplexMatrix  k = b - a;
        const Index          n = a.rows();

        const double variation = spectral_variation(a, b, p);
        const double k_pow     = schatten_pow(k, p);
        out.ratio              = variation / k_pow;

        if (theorem_ok)
        {
            add(check_corollary(a, b, p, cfg.mode), "corollary");
            add(check_main_theorem(a, b, p, cfg.mode), "main_theorem");
        }
        else
        {
            // p = 1 is exploratory: the ratio is recorded without a verdict
            out.records.push_back({trial, "ratio", variation, k_pow, k_pow - variation, std::nullopt, 0.0});
        }
        if (is_hermitian(b))
            add(check_kato(a, b, p), "kato");
        add(check_interval_bound(a, b, p), "interval_bound");
        add(check_numrange_bound(a, b, p, cfg.angle_count), "numrange_bound");

        if (n >= 2)
        {
            const auto [lower, upper] = check_block_norms(k, n / 2, p);
            add(lower, "block_norms_lower");
            add(upper, "block_norms_upper");
        }
        add(check_diag_split(k, p), "diag_split");
        const ComplexMatrix other = gen_ginibre(n, n, derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), 2));
        add(check_clarkson(k, other, p), "clarkson");
        add(check_re_im(k, p), "re_im");

        if (theorem_ok)
        {
            add(check_macaev(strictly_upper_part(other), p, cfg.mode), "macaev");

            const ChainReport chain = verify_proof_chain(a, b, p, {}, cfg.mode);
            for (const auto& s : chain.steps)
                add(s, s.name);

            if (trial < cfg.subset_chains && n >= 2)
            {
                const auto sel = random_proper_subset(n, derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), 3));
                const ChainReport sub = verify_proof_chain(a, b, p, sel, cfg.mode);
                for (const auto& s : sub.steps)
                    add(s, "subset_" + s.name);
            }
        }
    }
    catch (const Error& e)
    {
        out.failure = TrialFailure{trial, e.kind(), e.what()};
    }
    for (auto& r : out.records)
        r.ratio = out.ratio;
    return out;
}

inline SlackQuantiles quantiles(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    SlackQuantiles q;
    q.min    = v.front();
    q.max    = v.back();
    q.median = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    return q;
}

} // namespace detail

/// Worker count: hardware concurrency, capped by SPECTRAL_VAR_THREADS when that
/// holds a positive integer.
inline unsigned sweep_threads_from_env()
{
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPECTRAL_VAR_THREADS"))
    {
        char*      end = nullptr;
        const long v   = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            threads = std::min<unsigned long>(threads, static_cast<unsigned long>(v));
    }
    return threads;
}

/// Runs every applicable checker on `config.trials` random instances.
/// `keep_records` = false drops per-check rows after aggregation.
inline SweepSummary run_sweep(const TrialConfig& config, unsigned threads = 1, bool keep_records = true)
{
    config.validate();
    std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(config.trials));

    std::atomic<int> next{0};
    auto             worker = [&] {
        for (int t = next++; t < config.trials; t = next++)
            outcomes[static_cast<std::size_t>(t)] = detail::run_trial(config, t);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(config.trials)));
    if (threads == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    SweepSummary                                 s;
    s.config = config;
    std::map<std::string, std::vector<double>> slacks;
    for (std::size_t t = 0; t < outcomes.size(); ++t)
    {
        auto& o = outcomes[t];
        if (o.failure)
        {
            s.failures.push_back(*o.failure);
            continue;
        }
        if (s.argmax_trial < 0 || o.ratio > s.max_ratio)
        {
            s.max_ratio    = o.ratio;
            s.argmax_trial = static_cast<int>(t);
            s.argmax_a     = o.a;
            s.argmax_b     = o.b;
        }
        for (auto& r : o.records)
        {
            if (r.holds.has_value() && !*r.holds)
                ++s.violations;
            if (r.holds.has_value())
                slacks[r.check].push_back(r.slack);
            if (keep_records)
                s.records.push_back(std::move(r));
        }
    }
    for (auto& [name, v] : slacks)
        s.slack_quantiles[name] = detail::quantiles(std::move(v));
    return s;
}

struct TracePoint
{
    int    restart    = 0;
    int    iteration  = 0;
    double best_ratio = 0.0;
};

struct SharpnessResult
{
    double                  best_ratio = 0.0;
    ComplexMatrix           a;
    ComplexMatrix           b;
    std::vector<TracePoint> trace;
};

/// Real parameterization of (A Hermitian, K): n^2 reals for A (diagonal, then
/// complex upper entries), then 2 n^2 reals for B = A + K in Schur
/// coordinates B = U T U*: the n complex eigenvalues, the n(n-1)/2 complex
/// strictly upper entries of T, and n(n-1)/2 complex entries of a skew-Hermitian
/// S with U = (I - S)^{-1} (I + S).  Eigenvalues of B are coordinates, so
/// eigenvalue collisions do not produce square-root cusps in the objective.
inline std::size_t sharpness_parameter_count(Index n)
{
    return static_cast<std::size_t>(n * n + 2 * n * n);
}

/// Decodes a parameter vector into (A, B), rescaled jointly so ||B - A||_p = 1
/// whenever B != A (the ratio is invariant under joint scaling).
inline std::pair<ComplexMatrix, ComplexMatrix> decode_sharpness_point(const Eigen::VectorXd& x, Index n, double p)
{
    if (x.size() != static_cast<Index>(sharpness_parameter_count(n)))
        throw DimensionError("sharpness parameter vector has length " + std::to_string(x.size()) + ", expected " +
                             std::to_string(sharpness_parameter_count(n)));
    Index c    = 0;
    auto  next = [&]() {
        const Complex z(x[c], x[c + 1]);
        c += 2;
        return z;
    };

    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        a(i, i) = x[c++];
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
        {
            a(i, j) = next();
            a(j, i) = std::conj(a(i, j));
        }

    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        t(i, i) = next();
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            t(i, j) = next();

    ComplexMatrix skew = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
        {
            skew(i, j) = next();
            skew(j, i) = -std::conj(skew(i, j));
        }
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix u  = (id - skew).partialPivLu().solve(id + skew);

    ComplexMatrix b    = u * t * u.adjoint();
    const double  norm = schatten_norm(b - a, p);
    if (norm > 1e-12)
    {
        a /= norm;
        b /= norm;
    }
    return {a, b};
}

/// Nelder-Mead maximization of the variation ratio with random restarts.
/// `iterations` is the budget per restart; iteration 1 evaluates the seeded
/// start point only.
inline SharpnessResult sharpness_search(double p, int n, int iterations, std::uint64_t seed, int restarts = 8)
{
    if (!(p > 1.0) || std::isinf(p))
        throw ParameterError("sharpness_search: p > 1 required");
    if (n < 2)
        throw ParameterError("sharpness_search: n >= 2 required");
    if (iterations < 1)
        throw ParameterError("sharpness_search: iterations >= 1 required");
    if (restarts < 1)
        throw ParameterError("sharpness_search: restarts >= 1 required");

    const auto objective = [&](const Eigen::VectorXd& x) {
        auto [a, b] = decode_sharpness_point(x, n, p);
        try
        {
            const double k = schatten_norm(b - a, p);
            if (!(k > 1e-12))
                return 0.0;
            return spectral_variation(a, b, p) / std::pow(k, p);
        }
        catch (const NumericalError&)
        {
            return 0.0;
        }
    };

    SharpnessResult result;
    Eigen::VectorXd best_x;
    double          best = -1.0;
    const auto      dim  = static_cast<Eigen::Index>(sharpness_parameter_count(n));

    for (int r = 0; r < restarts; ++r)
    {
        std::mt19937_64                  rng(derive_seed(seed, static_cast<std::uint64_t>(r), 7));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd                  x0(dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            x0[i] = normal(rng);

        NelderMeadOptions opt;
        opt.max_iterations = iterations;
        opt.collapse_ratio = 1e-2;
        const auto nm = nelder_mead_maximize(objective, x0, opt, [&](int it, double v) {
            result.trace.push_back({r, it, std::max(v, best)});
        });
        if (nm.value > best)
        {
            best   = nm.value;
            best_x = nm.x;
        }
    }

    result.best_ratio            = best;
    std::tie(result.a, result.b) = decode_sharpness_point(best_x, n, p);
    return result;
}

} // namespace specvar
