#include "percap/channel.hpp"

#include <cmath>

#include "percap/errors.hpp"

namespace percap {

namespace {

void require_shape(const arma::mat& m, const char* name) {
    if (m.n_rows == 0 || m.n_cols == 0) {
        throw DimensionError(std::string(name) + " must have at least one row and one column");
    }
}

void require_nonnegative(const arma::mat& m, const char* name) {
    if (m.min() < 0.0) {
        throw ValidationError(std::string(name) + " must be entrywise nonnegative");
    }
    if (!m.is_finite()) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

void require_normalized(const arma::mat& omega) {
    const double target = static_cast<double>(omega.n_rows) * static_cast<double>(omega.n_cols);
    if (std::abs(arma::accu(omega) - target) > kNormalizationTol) {
        throw NormalizationError("coupling matrix entries must sum to nt * nr");
    }
}

} // namespace

EigenmodeCoupling::EigenmodeCoupling(arma::mat w) : omega(std::move(w)) {
    require_shape(omega, "omega");
    require_nonnegative(omega, "omega");
    require_normalized(omega);
}

ChannelStats::ChannelStats(arma::mat los, arma::mat scatter) : d(std::move(los)), m(std::move(scatter)) {
    require_shape(d, "d");
    if (arma::size(d) != arma::size(m)) {
        throw DimensionError("d and m must have identical dimensions");
    }
    require_nonnegative(d, "d");
    require_nonnegative(m, "m");
    // LOS components sit on the leading diagonal only.
    for (arma::uword i = 0; i < d.n_rows; ++i) {
        for (arma::uword j = 0; j < d.n_cols; ++j) {
            if (i != j && d(i, j) != 0.0) {
                throw ValidationError("d may have nonzero entries only at positions (i, i)");
            }
        }
    }
    require_normalized(d % d + m % m);
}

KroneckerSpec::KroneckerSpec(arma::vec lr, arma::vec lt) : lambda_r(std::move(lr)), lambda_t(std::move(lt)) {
    if (lambda_r.n_elem == 0 || lambda_t.n_elem == 0) {
        throw DimensionError("kronecker eigenvalue vectors must be nonempty");
    }
    require_nonnegative(lambda_r, "lambda_r");
    require_nonnegative(lambda_t, "lambda_t");
    const double target = static_cast<double>(lambda_r.n_elem) * static_cast<double>(lambda_t.n_elem);
    if (std::abs(arma::accu(lambda_r) * arma::accu(lambda_t) - target) > kNormalizationTol) {
        throw NormalizationError("kronecker eigenvalue sums must multiply to nt * nr");
    }
}

EigenmodeCoupling coupling_from_stats(const ChannelStats& stats) {
    return EigenmodeCoupling(stats.d % stats.d + stats.m % stats.m);
}

EigenmodeCoupling kronecker_coupling(const KroneckerSpec& spec) {
    return EigenmodeCoupling(spec.lambda_r * spec.lambda_t.t());
}

arma::mat renormalize(arma::mat omega) {
    require_shape(omega, "omega");
    require_nonnegative(omega, "omega");
    const double total = arma::accu(omega);
    if (total <= 0.0) {
        throw ValidationError("cannot renormalize an all-zero coupling matrix");
    }
    const double target = static_cast<double>(omega.n_rows) * static_cast<double>(omega.n_cols);
    omega *= target / total;
    return omega;
}

arma::vec constant_correlation_eigenvalues(arma::uword n, double alpha) {
    if (n < 1) {
        throw DomainError("constant-correlation matrix needs n >= 1");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("correlation coefficient must lie in [0, 1]");
    }
    arma::vec ev(n);
    ev.fill(1.0 - alpha);
    ev(0) = 1.0 + (static_cast<double>(n) - 1.0) * alpha;
    return ev;
}

arma::cx_mat sample_channel(const ChannelStats& stats, RngStream& stream) {
    const arma::uword nr = stats.nr();
    const arma::uword nt = stats.nt();
    arma::cx_mat h(nr, nt);
    // Row-major draw order keeps the stream layout fixed.
    for (arma::uword i = 0; i < nr; ++i) {
        for (arma::uword j = 0; j < nt; ++j) {
            h(i, j) = stats.d(i, j) + stats.m(i, j) * stream.cgauss();
        }
    }
    return h;
}

EigenmodeMarginals eigenmode_marginals(const EigenmodeCoupling& coupling) {
    EigenmodeMarginals out;
    out.lambda_t = arma::sum(coupling.omega, 0).t();
    out.lambda_r = arma::sum(coupling.omega, 1);
    return out;
}

ChannelStats stats_from_coupling(const EigenmodeCoupling& coupling) {
    return ChannelStats(arma::mat(arma::size(coupling.omega), arma::fill::zeros),
                        arma::sqrt(coupling.omega));
}

} // namespace percap
