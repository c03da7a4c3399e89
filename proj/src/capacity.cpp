#include "percap/capacity.hpp"

#include <cmath>
#include <vector>

#include "percap/detail/hermitian.hpp"
#include "percap/errors.hpp"
#include "percap/parallel.hpp"

namespace percap {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;
constexpr std::size_t kMcBlock = 2048;

arma::mat scaled_coupling(const arma::mat& omega, const arma::vec& lambda, double gamma) {
    arma::mat ohat = gamma * omega;
    ohat.each_row() %= lambda.t();
    return ohat;
}

void require_lambda_dim(const arma::mat& omega, const arma::vec& lambda, const SnrConfig& snr) {
    if (lambda.n_elem != omega.n_cols || snr.nt != omega.n_cols) {
        throw DimensionError("power allocation length must match the coupling column count");
    }
}

// Elementary symmetric functions e_0..e_n of v, by the product recurrence.
arma::vec elementary_symmetric(const arma::vec& v) {
    arma::vec e(v.n_elem + 1, arma::fill::zeros);
    e(0) = 1.0;
    for (arma::uword i = 0; i < v.n_elem; ++i) {
        for (arma::uword j = i + 1; j >= 1; --j) {
            e(j) += v(i) * e(j - 1);
        }
    }
    return e;
}

struct BlockMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

McResult reduce_moments(const std::vector<BlockMoments>& blocks, std::size_t n) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const BlockMoments& b : blocks) {
        sum += b.sum;
        sum_sq += b.sum_sq;
    }
    const double nd = static_cast<double>(n);
    McResult out;
    out.mean_bits = sum / nd;
    if (n > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / nd) / (nd - 1.0));
        out.std_error_bits = std::sqrt(var / nd);
    } else {
        out.std_error_bits = 0.0;
    }
    return out;
}

} // namespace

SnrConfig::SnrConfig(double rho_linear, arma::uword num_tx) : rho(rho_linear), nt(num_tx) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw DomainError("transmit SNR must be positive and finite");
    }
    if (nt < 1) {
        throw DomainError("nt must be at least 1");
    }
}

SnrConfig SnrConfig::from_db(double snr_db, arma::uword num_tx) {
    return SnrConfig(std::pow(10.0, snr_db / 10.0), num_tx);
}

PowerAllocation::PowerAllocation(arma::vec l) : lambda(std::move(l)) {
    if (lambda.n_elem == 0) {
        throw DimensionError("power allocation must be nonempty");
    }
    if (!lambda.is_finite() || lambda.min() < 0.0) {
        throw ValidationError("power weights must be finite and nonnegative");
    }
    if (std::abs(arma::accu(lambda) - static_cast<double>(lambda.n_elem)) > 1e-9) {
        throw NormalizationError("power weights must sum to nt");
    }
}

double bound_bits(const EigenmodeCoupling& coupling, const arma::vec& lambda, const SnrConfig& snr) {
    require_lambda_dim(coupling.omega, lambda, snr);
    const double e = extended_per_poly(scaled_coupling(coupling.omega, lambda, snr.gamma()),
                                       PerMethod::ryser);
    return std::log2(e);
}

double kronecker_bound_bits(const KroneckerSpec& spec, const arma::vec& lambda, const SnrConfig& snr) {
    if (lambda.n_elem != spec.lambda_t.n_elem || snr.nt != spec.lambda_t.n_elem) {
        throw DimensionError("power allocation length must match lambda_t");
    }
    const arma::vec er = elementary_symmetric(spec.lambda_r);
    const arma::vec et = elementary_symmetric(lambda % spec.lambda_t);
    const arma::uword kmax = std::min(spec.lambda_r.n_elem, spec.lambda_t.n_elem);
    const double gamma = snr.gamma();
    double total = 0.0;
    double gamma_k_kfact = 1.0; // gamma^k k!
    for (arma::uword k = 0; k <= kmax; ++k) {
        if (k > 0) {
            gamma_k_kfact *= gamma * static_cast<double>(k);
        }
        total += gamma_k_kfact * er(k) * et(k);
    }
    if (!std::isfinite(total)) {
        throw OverflowError("kronecker bound evaluation overflowed");
    }
    return std::log2(total);
}

PqComponents pq_components(const EigenmodeCoupling& coupling, const arma::vec& lambda,
                           const SnrConfig& snr, arma::uword index) {
    require_lambda_dim(coupling.omega, lambda, snr);
    if (index >= lambda.n_elem) {
        throw DimensionError("eigenmode index out of range");
    }
    const double gamma = snr.gamma();

    arma::mat omega_del = coupling.omega;
    omega_del.shed_col(index);
    arma::vec lambda_del = lambda;
    lambda_del.shed_row(index);

    arma::vec lambda_unit = lambda;
    lambda_unit(index) = 1.0;

    PqComponents out;
    out.p = extended_per_poly(scaled_coupling(omega_del, lambda_del, gamma), PerMethod::ryser);
    out.q = extended_per_poly(scaled_coupling(coupling.omega, lambda_unit, gamma), PerMethod::ryser) - out.p;
    return out;
}

double mutual_info_bits(const arma::cx_mat& h, const arma::vec& lambda, double gamma) {
    // I + gamma h diag(lambda) h^H is Hermitian positive definite, so the
    // Cholesky factor always exists.
    arma::cx_mat a;
    detail::gram_lower(h, lambda, gamma, a);
    if (!detail::cholesky_lower(a)) {
        throw Error("cholesky factorization failed on a positive definite matrix");
    }
    return detail::log_det_from_cholesky(a) / kLn2;
}

McResult mc_mutual_info(const ChannelStats& stats, const arma::vec& lambda, const SnrConfig& snr,
                        std::size_t samples, std::uint64_t seed) {
    if (lambda.n_elem != stats.nt() || snr.nt != stats.nt()) {
        throw DimensionError("power allocation length must match the channel");
    }
    if (samples < 1) {
        throw DomainError("at least one Monte-Carlo sample is required");
    }
    const double gamma = snr.gamma();
    const std::size_t blocks = (samples + kMcBlock - 1) / kMcBlock;
    std::vector<BlockMoments> moments(blocks);
    par::for_blocks(samples, kMcBlock, [&](std::size_t block, std::size_t begin, std::size_t end) {
        BlockMoments acc;
        for (std::size_t s = begin; s < end; ++s) {
            RngStream stream = channel_stream(seed, s);
            const double bits = mutual_info_bits(sample_channel(stats, stream), lambda, gamma);
            acc.sum += bits;
            acc.sum_sq += bits * bits;
        }
        moments[block] = acc;
    });
    return reduce_moments(moments, samples);
}

Lemma4Result lemma4_check(const arma::mat& means, const arma::mat& variances,
                          std::size_t samples, std::uint64_t seed) {
    if (!means.is_square() || arma::size(means) != arma::size(variances)) {
        throw DimensionError("lemma4_check requires square matrices of equal size");
    }
    if (variances.min() < 0.0) {
        throw ValidationError("variances must be nonnegative");
    }
    for (arma::uword i = 0; i < means.n_rows; ++i) {
        arma::uword nonzeros = 0;
        for (arma::uword j = 0; j < means.n_cols; ++j) {
            if (means(i, j) != 0.0) {
                ++nonzeros;
            }
        }
        if (nonzeros > 1) {
            throw ValidationError("each row may carry at most one nonzero mean");
        }
    }
    if (samples < 1) {
        throw DomainError("at least one Monte-Carlo sample is required");
    }

    const arma::uword n = means.n_rows;
    const arma::mat sigma = arma::sqrt(variances);
    const std::size_t blocks = (samples + kMcBlock - 1) / kMcBlock;
    std::vector<BlockMoments> moments(blocks);
    par::for_blocks(samples, kMcBlock, [&](std::size_t block, std::size_t begin, std::size_t end) {
        BlockMoments acc;
        arma::cx_mat x(n, n);
        for (std::size_t s = begin; s < end; ++s) {
            RngStream stream(seed, s);
            for (arma::uword i = 0; i < n; ++i) {
                for (arma::uword j = 0; j < n; ++j) {
                    x(i, j) = means(i, j) + sigma(i, j) * stream.cgauss();
                }
            }
            const double det_sq = std::norm(arma::det(x));
            acc.sum += det_sq;
            acc.sum_sq += det_sq * det_sq;
        }
        moments[block] = acc;
    });
    const McResult reduced = reduce_moments(moments, samples);

    Lemma4Result out;
    out.mc_estimate = reduced.mean_bits;
    out.mc_std_error = reduced.std_error_bits;
    out.per_value = per_ryser(means % means + variances);
    return out;
}

} // namespace percap
