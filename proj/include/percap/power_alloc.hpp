#ifndef PERCAP_POWER_ALLOC_HPP
#define PERCAP_POWER_ALLOC_HPP

#include <armadillo>
#include <cstdint>
#include <vector>

#include "percap/capacity.hpp"
#include "percap/channel.hpp"

namespace percap {

// Classic water-filling: lambda_i = (level - g_i)^+ with the level chosen so
// that sum(lambda) == budget. Solved exactly by sorting; entries with
// g_i = +inf receive zero power. Throws InfeasibleError when every gain is
// infinite.
arma::vec water_fill(const arma::vec& inverse_gains, double budget);

struct IwfaOptions {
    double tol = 1e-10;        // stop when |delta bound| < tol (bits)
    int max_iter = 100;
    int max_damping = 50;      // damping applications per iteration before declaring a stall
    double stall_kkt_tol = 1e-6;
};

struct IwfaIteration {
    arma::vec lambda;
    double bound_bits;
    bool damped;
};

struct IwfaTrace {
    std::vector<IwfaIteration> iterations; // iterations[0] is the initial point
    bool converged = false;
    double kkt_residual = 0.0;

    const arma::vec& final_lambda() const { return iterations.back().lambda; }
    double final_bound_bits() const { return iterations.back().bound_bits; }
};

// Iterative water-filling on the permanent-based bound: linearize through the
// p/q decomposition, water-fill with gains p_i/q_i, damp whenever the bound
// fails to increase. Bound values along the trace are nondecreasing.
IwfaTrace iwfa(const EigenmodeCoupling& coupling, const SnrConfig& snr,
               const arma::vec* initial = nullptr, const IwfaOptions& options = {});

// First-order optimality violation: spread of the active water levels
// lambda_i + p_i/q_i plus the worst shortfall of any inactive entry; zero at
// the exact optimum. Entries with q_i = 0 are skipped.
double kkt_residual(const EigenmodeCoupling& coupling, const arma::vec& lambda, const SnrConfig& snr);

// Beamforming over the strongest transmit eigenmodes (largest column sums of
// omega, ties within 1e-9 relative share the power).
arma::vec low_snr_policy(const EigenmodeCoupling& coupling);

// Equal power allocation.
arma::vec high_snr_policy(arma::uword nt);

// Euclidean projection onto {v >= 0, sum(v) == total}.
arma::vec project_simplex(arma::vec v, double total);

// Reference optimizer for the true ergodic mutual information: projected
// gradient ascent of the sample average over a fixed set of channel draws
// (common random numbers). Desk-scale oracle, not a performance target.
arma::vec mc_reference_optimize(const ChannelStats& stats, const SnrConfig& snr,
                                std::size_t samples, std::uint64_t seed, int iterations = 200);

} // namespace percap

#endif
