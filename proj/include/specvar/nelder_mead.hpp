#pragma once
//
// Derivative-free Nelder-Mead simplex search (maximization form).
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace specvar {

struct NelderMeadOptions
{
    /// total iteration budget; iteration 1 only evaluates the start point
    int    max_iterations = 1000;
    double initial_step   = 0.5;
    /// the simplex is rebuilt around the best vertex once its diameter falls
    /// below collapse_ratio times its edge length at the last (re)build
    double collapse_ratio = 1e-3;
    /// a rebuild that brought no improvement shrinks the next edge by this factor
    double rebuild_shrink = 0.1;
    /// edges below this length restart the scale cycle at initial_step
    double min_step       = 1e-10;
    double reflection     = 1.0;
    double expansion      = 2.0;
    double contraction    = 0.5;
    double shrink         = 0.5;
};

struct NelderMeadResult
{
    Eigen::VectorXd x;
    double          value = -std::numeric_limits<double>::infinity();
    int             iterations = 0;
};

/// Maximizes `f`.  `on_iteration(iteration, best_value)` is invoked after each
/// iteration with the best value seen so far (non-decreasing).
template <typename Objective, typename Callback>
NelderMeadResult nelder_mead_maximize(Objective&& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opt,
                                      Callback&& on_iteration)
{
    const Eigen::Index dim = x0.size();

    NelderMeadResult best;
    best.x     = x0;
    best.value = f(x0);
    best.iterations = 1;
    on_iteration(1, best.value);
    if (opt.max_iterations <= 1 || dim == 0)
        return best;

    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(dim + 1));
    std::vector<double>          values(simplex.size());

    auto record = [&](const Eigen::VectorXd& x, double v) {
        if (v > best.value)
        {
            best.value = v;
            best.x     = x;
        }
    };

    auto build = [&](const Eigen::VectorXd& centre, double step) {
        simplex[0] = centre;
        values[0]  = f(centre);
        record(centre, values[0]);
        for (Eigen::Index i = 0; i < dim; ++i)
        {
            Eigen::VectorXd v = centre;
            v[i] += step;
            simplex[static_cast<std::size_t>(i + 1)] = v;
            values[static_cast<std::size_t>(i + 1)]  = f(v);
            record(v, values[static_cast<std::size_t>(i + 1)]);
        }
    };

    double edge = opt.initial_step;
    build(x0, edge);
    std::vector<std::size_t> order(simplex.size());
    double value_at_build = best.value;

    for (int it = 2; it <= opt.max_iterations; ++it)
    {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
        const std::size_t hi = order.front();        // best
        const std::size_t lo = order.back();         // worst
        const std::size_t nl = order[order.size() - 2];

        double diameter = 0.0;
        for (std::size_t i = 0; i < simplex.size(); ++i)
            diameter = std::max(diameter, (simplex[i] - simplex[hi]).lpNorm<Eigen::Infinity>());
        if (diameter < opt.collapse_ratio * edge)
        {
            if (!(best.value > value_at_build))
                edge *= opt.rebuild_shrink;
            if (edge < opt.min_step)
                edge = opt.initial_step;
            value_at_build = best.value;
            build(best.x, edge);
            best.iterations = it;
            on_iteration(it, best.value);
            continue;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t i = 0; i < simplex.size(); ++i)
            if (i != lo)
                centroid += simplex[i];
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd xr = centroid + opt.reflection * (centroid - simplex[lo]);
        const double          fr = f(xr);
        record(xr, fr);

        if (fr > values[hi])
        {
            const Eigen::VectorXd xe = centroid + opt.expansion * (xr - centroid);
            const double          fe = f(xe);
            record(xe, fe);
            if (fe > fr)
            {
                simplex[lo] = xe;
                values[lo]  = fe;
            }
            else
            {
                simplex[lo] = xr;
                values[lo]  = fr;
            }
        }
        else if (fr > values[nl])
        {
            simplex[lo] = xr;
            values[lo]  = fr;
        }
        else
        {
            const bool            outside = fr > values[lo];
            const Eigen::VectorXd xc      = outside ? Eigen::VectorXd(centroid + opt.contraction * (xr - centroid))
                                                    : Eigen::VectorXd(centroid + opt.contraction * (simplex[lo] - centroid));
            const double          fc      = f(xc);
            record(xc, fc);
            if (fc > (outside ? fr : values[lo]))
            {
                simplex[lo] = xc;
                values[lo]  = fc;
            }
            else
            {
                for (std::size_t i = 0; i < simplex.size(); ++i)
                {
                    if (i == hi)
                        continue;
                    simplex[i] = simplex[hi] + opt.shrink * (simplex[i] - simplex[hi]);
                    values[i]  = f(simplex[i]);
                    record(simplex[i], values[i]);
                }
            }
        }
        best.iterations = it;
        on_iteration(it, best.value);
    }
    return best;
}

} // namespace specvar
