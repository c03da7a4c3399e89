#include "percap/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "percap/detail/hermitian.hpp"
#include "percap/errors.hpp"
#include "percap/parallel.hpp"

namespace percap {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

arma::vec all_pq_gains(const EigenmodeCoupling& coupling, const arma::vec& lambda,
                       const SnrConfig& snr) {
    arma::vec gains(lambda.n_elem);
    for (arma::uword i = 0; i < lambda.n_elem; ++i) {
        const PqComponents pq = pq_components(coupling, lambda, snr, i);
        gains(i) = (pq.q > 0.0) ? pq.p / pq.q : std::numeric_limits<double>::infinity();
    }
    return gains;
}

} // namespace

arma::vec water_fill(const arma::vec& inverse_gains, double budget) {
    if (!(budget > 0.0)) {
        throw InfeasibleError("water-filling budget must be positive");
    }
    const arma::uword n = inverse_gains.n_elem;
    std::vector<arma::uword> order;
    order.reserve(n);
    for (arma::uword i = 0; i < n; ++i) {
        if (!(inverse_gains(i) >= 0.0)) {
            throw ValidationError("inverse gains must be nonnegative");
        }
        if (std::isfinite(inverse_gains(i))) {
            order.push_back(i);
        }
    }
    if (order.empty()) {
        throw InfeasibleError("every eigenmode has zero gain");
    }
    std::sort(order.begin(), order.end(), [&](arma::uword a, arma::uword b) {
        if (inverse_gains(a) != inverse_gains(b)) {
            return inverse_gains(a) < inverse_gains(b);
        }
        return a < b;
    });

    // Largest active count k with level (budget + prefix_k) / k above g_(k).
    double prefix = 0.0;
    double level = 0.0;
    arma::uword active = 0;
    for (arma::uword k = 0; k < order.size(); ++k) {
        prefix += inverse_gains(order[k]);
        const double candidate = (budget + prefix) / static_cast<double>(k + 1);
        if (candidate > inverse_gains(order[k])) {
            level = candidate;
            active = k + 1;
        }
    }

    arma::vec lambda(n, arma::fill::zeros);
    for (arma::uword k = 0; k < active; ++k) {
        lambda(order[k]) = level - inverse_gains(order[k]);
    }
    return lambda;
}

IwfaTrace iwfa(const EigenmodeCoupling& coupling, const SnrConfig& snr,
               const arma::vec* initial, const IwfaOptions& options) {
    const arma::uword nt = coupling.nt();
    if (snr.nt != nt) {
        throw DimensionError("snr.nt must match the coupling column count");
    }
    arma::vec lambda = (initial != nullptr) ? *initial : arma::vec(nt, arma::fill::ones);
    if (lambda.n_elem != nt) {
        throw DimensionError("initial allocation length must match nt");
    }
    (void)PowerAllocation{lambda}; // validate the starting point

    IwfaTrace trace;
    double cu = bound_bits(coupling, lambda, snr);
    trace.iterations.push_back({lambda, cu, false});

    const double damp_new = 1.0 / static_cast<double>(nt);
    const double damp_old = 1.0 - damp_new;

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const arma::vec gains = all_pq_gains(coupling, lambda, snr);
        arma::vec next = water_fill(gains, static_cast<double>(nt));
        double cu_next = bound_bits(coupling, next, snr);

        bool damped = false;
        int damp_count = 0;
        while (cu_next <= cu && damp_count < options.max_damping) {
            if (arma::norm(next - lambda, "inf") == 0.0) {
                break; // exact fixed point, nothing left to damp
            }
            next = damp_new * next + damp_old * lambda;
            cu_next = bound_bits(coupling, next, snr);
            damped = true;
            ++damp_count;
        }

        if (cu_next < cu) {
            // Finite-precision plateau: keep the last good iterate.
            trace.kkt_residual = kkt_residual(coupling, lambda, snr);
            trace.converged = trace.kkt_residual < options.stall_kkt_tol;
            return trace;
        }

        trace.iterations.push_back({next, cu_next, damped});
        const double delta = cu_next - cu;
        lambda = next;
        cu = cu_next;
        if (delta < options.tol) {
            trace.converged = true;
            break;
        }
    }

    trace.kkt_residual = kkt_residual(coupling, lambda, snr);
    return trace;
}

double kkt_residual(const EigenmodeCoupling& coupling, const arma::vec& lambda, const SnrConfig& snr) {
    const arma::vec gains = all_pq_gains(coupling, lambda, snr);
    double level_min = std::numeric_limits<double>::infinity();
    double level_max = -std::numeric_limits<double>::infinity();
    bool any_active = false;
    for (arma::uword i = 0; i < lambda.n_elem; ++i) {
        if (!std::isfinite(gains(i))) {
            continue; // dead eigenmode, no optimality direction
        }
        if (lambda(i) > 0.0) {
            const double level = lambda(i) + gains(i);
            level_min = std::min(level_min, level);
            level_max = std::max(level_max, level);
            any_active = true;
        }
    }
    if (!any_active) {
        return 0.0;
    }
    double shortfall = 0.0;
    for (arma::uword i = 0; i < lambda.n_elem; ++i) {
        if (lambda(i) == 0.0 && std::isfinite(gains(i))) {
            shortfall = std::max(shortfall, level_max - gains(i));
        }
    }
    return (level_max - level_min) + std::max(0.0, shortfall);
}

arma::vec low_snr_policy(const EigenmodeCoupling& coupling) {
    const arma::vec tau = arma::sum(coupling.omega, 0).t();
    const double top = tau.max();
    const double cutoff = top - 1e-9 * std::abs(top);
    arma::uvec tied = arma::find(tau >= cutoff);
    arma::vec lambda(coupling.nt(), arma::fill::zeros);
    const double share = static_cast<double>(coupling.nt()) / static_cast<double>(tied.n_elem);
    lambda(tied).fill(share);
    return lambda;
}

arma::vec high_snr_policy(arma::uword nt) {
    return arma::vec(nt, arma::fill::ones);
}

arma::vec project_simplex(arma::vec v, double total) {
    const arma::uword n = v.n_elem;
    arma::vec u = arma::sort(v, "descend");
    double prefix = 0.0;
    double shift = 0.0;
    for (arma::uword j = 0; j < n; ++j) {
        prefix += u(j);
        const double candidate = (total - prefix) / static_cast<double>(j + 1);
        if (u(j) + candidate > 0.0) {
            shift = candidate;
        }
    }
    for (double& x : v) {
        x = std::max(0.0, x + shift);
    }
    return v;
}

arma::vec mc_reference_optimize(const ChannelStats& stats, const SnrConfig& snr,
                                std::size_t samples, std::uint64_t seed, int iterations) {
    const arma::uword nt = stats.nt();
    if (snr.nt != nt) {
        throw DimensionError("snr.nt must match the channel");
    }
    if (samples < 1) {
        throw DomainError("at least one Monte-Carlo draw is required");
    }
    const double gamma = snr.gamma();

    // Fixed draw set shared by every iteration.
    std::vector<arma::cx_mat> draws(samples);
    par::for_blocks(samples, 2048, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            RngStream stream = channel_stream(seed, s);
            draws[s] = sample_channel(stats, stream);
        }
    });

    const double budget = static_cast<double>(nt);
    const double step = 0.1 / gamma;
    arma::vec lambda(nt, arma::fill::ones);

    const std::size_t blocks = (samples + 2047) / 2048;
    std::vector<arma::vec> partials(blocks);
    for (int iter = 0; iter < iterations; ++iter) {
        par::for_blocks(samples, 2048, [&](std::size_t block, std::size_t begin, std::size_t end) {
            arma::vec acc(nt, arma::fill::zeros);
            arma::cx_mat a;
            arma::cx_mat solved;
            for (std::size_t s = begin; s < end; ++s) {
                const arma::cx_mat& h = draws[s];
                detail::gram_lower(h, lambda, gamma, a);
                detail::cholesky_lower(a);
                // d/dlambda_i log det = gamma h_i^H A^{-1} h_i
                solved = h;
                detail::cholesky_solve_in_place(a, solved);
                for (arma::uword i = 0; i < nt; ++i) {
                    acc(i) += gamma * std::real(arma::cdot(h.col(i), solved.col(i)));
                }
            }
            partials[block] = acc;
        });
        arma::vec grad(nt, arma::fill::zeros);
        for (const arma::vec& p : partials) {
            grad += p;
        }
        grad /= static_cast<double>(samples) * kLn2; // bits
        lambda = project_simplex(lambda + step * grad, budget);
    }
    return lambda;
}

} // namespace percap
