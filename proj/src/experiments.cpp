#include "elastinet/experiments.hpp"

#include "elastinet/core.hpp"
#include "elastinet/problem_gen.hpp"
#include "elastinet/reference.hpp"
#include "elastinet/rfss.hpp"
#include "elastinet/rssn.hpp"

#include <chrono>
#include <cmath>
#include <optional>

namespace elastinet::experiments {

namespace {

constexpr double kIstaTol = 1e-10;
constexpr int kIstaMaxIter = 50000;

struct TimedResult {
    SolveResult result;
    double ms = 0.0;
};

template <typename Solve>
TimedResult timed(Solve&& solve) {
    const auto start = std::chrono::steady_clock::now();
    TimedResult out{solve(), 0.0};
    const auto stop = std::chrono::steady_clock::now();
    out.ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return out;
}

// Accumulates a mean that renders as "-" if any sample was missing.
struct MeanCell {
    double sum = 0.0;
    int count = 0;
    bool failed = false;

    void add(std::optional<double> sample) {
        if (sample) {
            sum += *sample;
            ++count;
        } else {
            failed = true;
        }
    }
    std::string render() const {
        if (failed || count == 0) return "-";
        return io::format_double(sum / count);
    }
};

} // namespace

std::vector<double> exact_data_beta_grid() {
    return {0.0,           std::pow(2, -30), std::pow(2, -28), std::pow(2, -24),
            std::pow(2, -20), std::pow(2, -16), std::pow(2, -12)};
}

std::vector<double> noisy_beta_grid() {
    return {0.0, std::pow(2, -8), std::pow(2, -5), std::pow(2, -3), std::pow(2, -1)};
}

GridOptions test1_options(bool full) {
    GridOptions opts;
    if (full) {
        opts.m = 400;
        opts.s = 400;
    }
    return opts;
}

GridOptions test2_options(bool full) {
    GridOptions opts = test1_options(full);
    opts.rank_deficient = true;
    return opts;
}

GridOptions test3_options(bool full, bool rank_deficient) {
    GridOptions opts = test1_options(full);
    opts.rank_deficient = rank_deficient;
    opts.noise_rel = 0.05;
    opts.alpha_from_noise = true;
    opts.betas = noisy_beta_grid();
    opts.repeats = full ? 100 : 10;
    return opts;
}

io::Table run_grid(const GridOptions& opts) {
    const bool noisy = opts.noise_rel > 0.0;

    io::Table table;
    table.columns = {"beta", "active_size", "rel_error"};
    if (noisy) table.columns.push_back("e_kx");
    table.columns.insert(table.columns.end(),
                         {"rfss_iters", "rfss_ms", "rssn_iters", "rssn_ms"});

    struct RowStats {
        MeanCell active_size, rel_error, e_kx;
        MeanCell rfss_iters, rfss_ms, rssn_iters, rssn_ms;
    };
    std::vector<RowStats> stats(opts.betas.size());

    for (int rep = 0; rep < opts.repeats; ++rep) {
        const std::uint64_t base = opts.seed + 2 * static_cast<std::uint64_t>(rep);
        Problem p = gen_gaussian(opts.m, opts.s, opts.spike_period, base);
        if (opts.rank_deficient) p = make_rank_deficient(p);
        if (noisy) p = add_noise(p, opts.noise_rel, base + 1);
        const double alpha = opts.alpha_from_noise ? p.noise_level : opts.alpha;
        const Vector& exact = *p.exact_solution;
        const Vector& exact_data = *p.exact_data;

        for (std::size_t bi = 0; bi < opts.betas.size(); ++bi) {
            const double beta = opts.betas[bi];
            RowStats& row = stats[bi];
            std::optional<Vector> solution;

            if (beta == 0.0) {
                // l1 reference row; the active-set solvers need beta > 0. On a
                // rank-deficient operator the l1 minimizer is not unique, so
                // per-minimizer statistics are meaningless and the row is
                // reported as "-" without running the reference.
                if (!opts.rank_deficient) {
                    const RegParams r(alpha, 0.0);
                    SolveResult ista = ista_solve(p, r, kIstaTol, kIstaMaxIter);
                    if (ista.converged()) solution = std::move(ista.solution);
                }
                row.rfss_iters.add(std::nullopt);
                row.rfss_ms.add(std::nullopt);
                row.rssn_iters.add(std::nullopt);
                row.rssn_ms.add(std::nullopt);
            } else {
                const RegParams r(alpha, beta);
                TimedResult rfss = timed([&] { return rfss_solve(p, r); });
                TimedResult rssn = timed([&] { return rssn_solve(p, r); });
                if (rfss.result.converged()) {
                    row.rfss_iters.add(rfss.result.iterations);
                    row.rfss_ms.add(rfss.ms);
                } else {
                    row.rfss_iters.add(std::nullopt);
                    row.rfss_ms.add(std::nullopt);
                }
                if (rssn.result.converged()) {
                    row.rssn_iters.add(rssn.result.iterations);
                    row.rssn_ms.add(rssn.ms);
                } else {
                    row.rssn_iters.add(std::nullopt);
                    row.rssn_ms.add(std::nullopt);
                }
                if (rssn.result.converged()) {
                    solution = std::move(rssn.result.solution);
                } else if (rfss.result.converged()) {
                    solution = std::move(rfss.result.solution);
                }
            }

            if (solution) {
                row.active_size.add(
                    static_cast<double>(ActiveSet::support_of(*solution).size()));
                row.rel_error.add((*solution - exact).norm() / exact.norm());
                if (noisy) {
                    row.e_kx.add((exact_data - p.op * *solution).norm() /
                                 exact_data.norm());
                }
            } else {
                row.active_size.add(std::nullopt);
                row.rel_error.add(std::nullopt);
                if (noisy) row.e_kx.add(std::nullopt);
            }
        }
    }

    for (std::size_t bi = 0; bi < opts.betas.size(); ++bi) {
        const RowStats& row = stats[bi];
        std::vector<std::string> cells = {io::format_double(opts.betas[bi]),
                                          row.active_size.render(),
                                          row.rel_error.render()};
        if (noisy) cells.push_back(row.e_kx.render());
        cells.push_back(row.rfss_iters.render());
        cells.push_back(row.rfss_ms.render());
        cells.push_back(row.rssn_iters.render());
        cells.push_back(row.rssn_ms.render());
        table.rows.push_back(std::move(cells));
    }
    return table;
}

namespace {

std::string rule_label(double factor) {
    if (factor == 0.0) return "0";
    if (factor == 1.0) return "alpha";
    if (factor == 0.5) return "alpha/2";
    if (factor == 0.25) return "alpha/4";
    return "alpha*" + io::format_double(factor);
}

} // namespace

Test4Output run_test4(const Test4Options& opts) {
    const Problem base = gen_blur(opts.n, opts.band, opts.sigma);
    const Vector& exact = *base.exact_solution;

    Test4Output out;
    out.table.columns = {"beta_rule", "delta", "alpha", "beta",
                         "rel_error", "iterations", "ms"};
    out.slopes.columns = {"beta_rule", "high_noise_slope", "low_noise_slope"};

    double delta_min = 0.0;
    double delta_max = 0.0;
    std::vector<std::vector<std::pair<double, double>>> fits(
        opts.beta_factors.size()); // (delta, error) per rule

    for (std::size_t di = 0; di < opts.deltas.size(); ++di) {
        const Problem p =
            add_noise(base, opts.deltas[di], opts.seed + static_cast<std::uint64_t>(di));
        const double delta = p.noise_level;
        delta_min = di == 0 ? delta : std::min(delta_min, delta);
        delta_max = di == 0 ? delta : std::max(delta_max, delta);
        const double alpha = delta;

        for (std::size_t fi = 0; fi < opts.beta_factors.size(); ++fi) {
            const double factor = opts.beta_factors[fi];
            const double beta = factor * alpha;
            const RegParams r(alpha, beta);
            const TimedResult solve = timed([&] {
                return beta == 0.0 ? ista_solve(p, r, kIstaTol, kIstaMaxIter)
                                   : rssn_solve(p, r);
            });

            std::vector<std::string> cells = {rule_label(factor), io::format_double(delta),
                                              io::format_double(alpha),
                                              io::format_double(beta)};
            if (solve.result.converged()) {
                const double err = (solve.result.solution - exact).norm() / exact.norm();
                fits[fi].emplace_back(delta, err);
                cells.push_back(io::format_double(err));
                cells.push_back(io::format_double(solve.result.iterations));
                cells.push_back(io::format_double(solve.ms));
            } else {
                cells.insert(cells.end(), {"-", "-", "-"});
            }
            out.table.rows.push_back(std::move(cells));
        }
    }

    out.split_delta = opts.split_delta > 0.0 ? opts.split_delta
                                             : std::sqrt(delta_min * delta_max);
    for (std::size_t fi = 0; fi < opts.beta_factors.size(); ++fi) {
        std::vector<std::pair<double, double>> high, low;
        for (const auto& point : fits[fi]) {
            (point.first >= out.split_delta ? high : low).push_back(point);
        }
        std::vector<std::string> cells = {rule_label(opts.beta_factors[fi])};
        cells.push_back(high.size() >= 2 ? io::format_double(slope_fit(high)) : "-");
        cells.push_back(low.size() >= 2 ? io::format_double(slope_fit(low)) : "-");
        out.slopes.rows.push_back(std::move(cells));
    }
    return out;
}

double slope_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) {
        throw InvalidArgument("slope_fit requires at least two points");
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [delta, error] : points) {
        if (!(delta > 0.0) || !(error > 0.0)) {
            throw InvalidArgument("slope_fit requires positive coordinates");
        }
        mean_x += std::log(delta);
        mean_y += std::log(error);
    }
    mean_x /= static_cast<double>(points.size());
    mean_y /= static_cast<double>(points.size());

    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [delta, error] : points) {
        const double dx = std::log(delta) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(error) - mean_y);
    }
    if (sxx == 0.0) {
        throw InvalidArgument("slope_fit requires at least two distinct deltas");
    }
    return sxy / sxx;
}

} // namespace elastinet::experiments
