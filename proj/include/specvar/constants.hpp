#pragma once
//
// Constants of the spectral-variation estimates.
//
//   b_p      Macaev constant:  ||Re T||_p <= b_p ||Im T||_p for nilpotent T
//   Gamma_p  (1 + b_p^{p/(p-1)})^{p-1}
//   L_p,M_p  block-norm constants:  L_p ||T||^p <= sum ||T_i||^p <= M_p ||T||^p
//   N_p      diagonal/off-diagonal split constant
//   C_p      constant of  sum dist(lambda, sigma(A))^p <= C_p ||B - A||_p^p
//
// The best b_p is only known for p = 2^n, where it equals cot(pi / (2p)).
// Elsewhere b_p is bracketed by cot(pi / (2p)) <= b_p < p / (ln 2 e^{2/3}),
// and b_p is non-decreasing on [2, inf).
//

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "specvar/errors.hpp"

namespace specvar {

enum class BpMode
{
    /// a provable upper bound; exact where the value is known (default)
    upper_bound,
    /// cot(pi/(2p)); exact at powers of two, a lower bound elsewhere
    exact_when_known,
};

enum class ConstantTag
{
    BP,
    GAMMA,
    LP,
    MP,
    NP,
    CP,
    UNIT,      // constant 1 (Kato, interval and numerical-range bounds)
    PRODUCT,   // product of the tagged constants above
};

struct ConstantValue
{
    double      value = 1.0;
    bool        exact = true;
    ConstantTag tag   = ConstantTag::UNIT;
};

inline std::string_view to_string(BpMode m)
{
    return m == BpMode::upper_bound ? "upper_bound" : "exact_when_known";
}

inline BpMode parse_bp_mode(std::string_view s)
{
    if (s == "upper_bound")
        return BpMode::upper_bound;
    if (s == "exact_when_known")
        return BpMode::exact_when_known;
    throw ParameterError("unknown mode '" + std::string(s) + "' (upper_bound | exact_when_known)");
}

inline std::string_view to_string(ConstantTag t)
{
    switch (t)
    {
        case ConstantTag::BP:      return "BP";
        case ConstantTag::GAMMA:   return "GAMMA";
        case ConstantTag::LP:      return "LP";
        case ConstantTag::MP:      return "MP";
        case ConstantTag::NP:      return "NP";
        case ConstantTag::CP:      return "CP";
        case ConstantTag::UNIT:    return "UNIT";
        case ConstantTag::PRODUCT: return "PRODUCT";
    }
    return "?";
}

namespace detail {

inline void require_p_above_one(double p, const char* what)
{
    if (!(p > 1.0) || std::isinf(p))
        throw ParameterError(std::string(what) + ": p = " + std::to_string(p) +
                             " unsupported (p > 1 required)");
}

inline void require_p_at_least_one(double p, const char* what)
{
    if (!(p >= 1.0) || std::isinf(p))
        throw ParameterError(std::string(what) + ": p = " + std::to_string(p) +
                             " unsupported (p >= 1 required)");
}

inline bool is_power_of_two(double p)
{
    const double l = std::log2(p);
    return std::abs(l - std::round(l)) < 1e-12;
}

inline double cot_pi_over_2p(double p) { return 1.0 / std::tan(std::numbers::pi / (2.0 * p)); }

// p / (ln 2 e^{2/3})
inline double macaev_upper(double p) { return p / (std::numbers::ln2 * std::exp(2.0 / 3.0)); }

} // namespace detail

inline ConstantValue bp(double p, BpMode mode = BpMode::upper_bound)
{
    detail::require_p_above_one(p, "b_p");
    if (p < 2.0)
        return bp(p / (p - 1.0), mode);

    if (detail::is_power_of_two(p))
    {
        const double k = std::round(std::log2(p));
        return {k == 1.0 ? 1.0 : detail::cot_pi_over_2p(std::exp2(k)), true, ConstantTag::BP};
    }

    if (mode == BpMode::exact_when_known)
        return {detail::cot_pi_over_2p(p), false, ConstantTag::BP};

    // b_p <= b_{2^m} for p <= 2^m by monotonicity on [2, inf)
    const double next_pow2 = std::exp2(std::ceil(std::log2(p)));
    const double value     = std::min(detail::macaev_upper(p), detail::cot_pi_over_2p(next_pow2));
    return {value, false, ConstantTag::BP};
}

inline ConstantValue gamma_p(double p, BpMode mode = BpMode::upper_bound)
{
    detail::require_p_above_one(p, "Gamma_p");
    const ConstantValue b = bp(p, mode);
    return {std::pow(1.0 + std::pow(b.value, p / (p - 1.0)), p - 1.0), b.exact, ConstantTag::GAMMA};
}

inline ConstantValue lp(double p)
{
    detail::require_p_at_least_one(p, "L_p");
    return {p >= 2.0 ? std::exp2(2.0 - p) : 1.0, true, ConstantTag::LP};
}

inline ConstantValue mp(double p)
{
    detail::require_p_at_least_one(p, "M_p");
    return {p >= 2.0 ? 1.0 : std::exp2(2.0 - p), true, ConstantTag::MP};
}

/// N_p; at p = infinity the operator-norm form max(||K_D||, ||K_O||) <= 2 ||K|| is used.
inline ConstantValue np_const(double p)
{
    if (std::isinf(p) && p > 0)
        return {2.0, true, ConstantTag::NP};
    detail::require_p_at_least_one(p, "N_p");
    return {p >= 2.0 ? std::exp2(p - 2.0) : std::pow(3.0, 2.0 - p), true, ConstantTag::NP};
}

inline bool is_exponent_two(double p) { return std::abs(p - 2.0) < 1e-12; }

inline ConstantValue cp(double p, BpMode mode = BpMode::upper_bound)
{
    detail::require_p_above_one(p, "C_p");
    if (is_exponent_two(p))
        return {2.0, true, ConstantTag::CP};
    const ConstantValue g = gamma_p(p, mode);
    const double        v = p > 2.0 ? std::exp2(p / 2.0 - 1.0) * std::pow(4.0, p - 2.0) * g.value
                                    : std::pow(12.0, 2.0 - p) * g.value;
    return {v, g.exact, ConstantTag::CP};
}

/// Weight on sum |Im lambda|^p in the main estimate: 2 (p = 2),
/// 2^{p-2} Gamma_p (p > 2), Gamma_p (1 < p < 2).
inline ConstantValue main_imag_weight(double p, BpMode mode = BpMode::upper_bound)
{
    detail::require_p_above_one(p, "main estimate");
    if (is_exponent_two(p))
        return {2.0, true, ConstantTag::PRODUCT};
    const ConstantValue g = gamma_p(p, mode);
    return {p > 2.0 ? std::exp2(p - 2.0) * g.value : g.value, g.exact, ConstantTag::PRODUCT};
}

/// Right-hand constant of the main estimate: 2 (p = 2),
/// 4^{p-2} Gamma_p (p > 2), 12^{2-p} Gamma_p (1 < p < 2).
inline ConstantValue main_rhs_constant(double p, BpMode mode = BpMode::upper_bound)
{
    detail::require_p_above_one(p, "main estimate");
    if (is_exponent_two(p))
        return {2.0, true, ConstantTag::PRODUCT};
    const ConstantValue g = gamma_p(p, mode);
    return {p > 2.0 ? std::pow(4.0, p - 2.0) * g.value : std::pow(12.0, 2.0 - p) * g.value, g.exact,
            ConstantTag::PRODUCT};
}

/// L_p^{-1} Gamma_p: the imaginary weight produced by the proof chain.
inline ConstantValue chain_imag_weight(double p, BpMode mode = BpMode::upper_bound)
{
    const ConstantValue g = gamma_p(p, mode);
    return {g.value / lp(p).value, g.exact, ConstantTag::PRODUCT};
}

/// L_p^{-1} Gamma_p N_p M_p^2: the right-hand constant produced by the proof chain.
inline ConstantValue chain_rhs_constant(double p, BpMode mode = BpMode::upper_bound)
{
    const ConstantValue g = gamma_p(p, mode);
    const double        m = mp(p).value;
    return {g.value / lp(p).value * np_const(p).value * m * m, g.exact, ConstantTag::PRODUCT};
}

} // namespace specvar
