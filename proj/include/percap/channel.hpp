#ifndef PERCAP_CHANNEL_HPP
#define PERCAP_CHANNEL_HPP

#include <armadillo>
#include <cstdint>

#include "percap/rng.hpp"

namespace percap {

// Tolerance on the total-power normalization sum(omega) == nt * nr.
inline constexpr double kNormalizationTol = 1e-9;

// Eigenmode power coupling matrix: nonnegative nr x nt, entries summing to
// nt * nr. The sole channel input of the capacity bound.
struct EigenmodeCoupling {
    arma::mat omega;

    explicit EigenmodeCoupling(arma::mat w); // validates
    arma::uword nr() const { return omega.n_rows; }
    arma::uword nt() const { return omega.n_cols; }
};

// Deterministic channel statistics: LOS amplitudes d (nonzeros only on the
// leading diagonal) and scattering standard deviations m. The derived
// coupling d.^2 + m.^2 must satisfy the EigenmodeCoupling invariants.
struct ChannelStats {
    arma::mat d;
    arma::mat m;

    ChannelStats(arma::mat los, arma::mat scatter); // validates
    arma::uword nr() const { return d.n_rows; }
    arma::uword nt() const { return d.n_cols; }
};

// Separable-correlation special case: coupling = lambda_r * lambda_t^T.
struct KroneckerSpec {
    arma::vec lambda_r;
    arma::vec lambda_t;

    KroneckerSpec(arma::vec lr, arma::vec lt); // validates
};

// omega = d.^2 + m.^2; throws NormalizationError when the result is not
// normalized to nt * nr.
EigenmodeCoupling coupling_from_stats(const ChannelStats& stats);

// Rank-one coupling lambda_r * lambda_t^T.
EigenmodeCoupling kronecker_coupling(const KroneckerSpec& spec);

// Rescales omega so that sum(omega) equals nt * nr exactly.
arma::mat renormalize(arma::mat omega);

// Eigenvalues of the constant-correlation matrix alpha*1 + (1-alpha)*I,
// in descending order: (1 + (n-1) alpha, 1-alpha, ..., 1-alpha).
arma::vec constant_correlation_eigenvalues(arma::uword n, double alpha);

// One random channel realization d + m .* G with G i.i.d. CN(0,1).
arma::cx_mat sample_channel(const ChannelStats& stats, RngStream& stream);

// Stream for the given sample index; distinct indices may be drawn
// concurrently with bit-reproducible results.
inline RngStream channel_stream(std::uint64_t seed, std::uint64_t sample_index) {
    return RngStream(seed, sample_index);
}

struct EigenmodeMarginals {
    arma::vec lambda_t; // column sums of omega (transmit correlation eigenvalues)
    arma::vec lambda_r; // row sums of omega (receive correlation eigenvalues)
};

EigenmodeMarginals eigenmode_marginals(const EigenmodeCoupling& coupling);

// Scattering-only stats with m = sqrt(omega), the sampler for couplings given
// without an explicit (d, m) decomposition.
ChannelStats stats_from_coupling(const EigenmodeCoupling& coupling);

} // namespace percap

#endif
