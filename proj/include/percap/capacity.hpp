#ifndef PERCAP_CAPACITY_HPP
#define PERCAP_CAPACITY_HPP

#include <armadillo>
#include <cstdint>

#include "percap/channel.hpp"
#include "percap/permanents.hpp"

namespace percap {

// Transmit SNR (linear) and antenna count; the per-eigenmode scale is
// gamma = rho / nt and is folded into the matrix argument everywhere.
struct SnrConfig {
    double rho;
    arma::uword nt;

    SnrConfig(double rho_linear, arma::uword num_tx); // validates rho > 0
    double gamma() const { return rho / static_cast<double>(nt); }
    static SnrConfig from_db(double snr_db, arma::uword num_tx);
};

// Transmit power weights: nonnegative, summing to nt.
struct PowerAllocation {
    arma::vec lambda;

    explicit PowerAllocation(arma::vec l); // validates
    arma::uword nt() const { return lambda.n_elem; }
};

// Closed-form mutual-information upper bound in bits:
// log2 ExtPer(gamma * omega * diag(lambda)), evaluated with the Ryser-based
// polynomial method.
double bound_bits(const EigenmodeCoupling& coupling, const arma::vec& lambda, const SnrConfig& snr);

// Same bound through the separable closed form
// sum_k gamma^k k! e_k(lambda_r) e_k(lambda .* lambda_t); must agree with
// bound_bits on the induced rank-one coupling.
double kronecker_bound_bits(const KroneckerSpec& spec, const arma::vec& lambda, const SnrConfig& snr);

// Decomposition ExtPer(gamma omega diag(lambda)) = p + lambda_i * q with both
// parts independent of lambda_i. Index is 0-based.
struct PqComponents {
    double p;
    double q;
};
PqComponents pq_components(const EigenmodeCoupling& coupling, const arma::vec& lambda,
                           const SnrConfig& snr, arma::uword index);

struct McResult {
    double mean_bits;
    double std_error_bits;
};

// Sample mean and standard error of log2 det(I + gamma h diag(lambda) h^H)
// over independent channel draws. Deterministic given (seed, samples) and
// independent of the worker count.
McResult mc_mutual_info(const ChannelStats& stats, const arma::vec& lambda, const SnrConfig& snr,
                        std::size_t samples, std::uint64_t seed);

// Mutual information of a single channel realization, in bits.
double mutual_info_bits(const arma::cx_mat& h, const arma::vec& lambda, double gamma);

// Statistical check of E{det X det X^H} = Per(E{X .* conj(X)}) for a square
// random matrix X with independent complex Gaussian entries of the given
// means (at most one nonzero per row) and variances.
struct Lemma4Result {
    double mc_estimate;
    double mc_std_error;
    double per_value;
};
Lemma4Result lemma4_check(const arma::mat& means, const arma::mat& variances,
                          std::size_t samples, std::uint64_t seed);

} // namespace percap

#endif
