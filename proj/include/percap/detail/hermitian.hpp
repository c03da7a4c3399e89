#ifndef PERCAP_DETAIL_HERMITIAN_HPP
#define PERCAP_DETAIL_HERMITIAN_HPP

#include <armadillo>
#include <cmath>
#include <complex>

// Small dense Hermitian kernels for the Monte-Carlo inner loops. The
// matrices here are nt x nt with nt <= 10; routing every draw through LAPACK
// costs more in dispatch and temporaries than the factorization itself.

namespace percap::detail {

// Fills the lower triangle of a = I + gamma * h diag(lambda) h^H.
inline void gram_lower(const arma::cx_mat& h, const arma::vec& lambda, double gamma,
                       arma::cx_mat& a) {
    const arma::uword nr = h.n_rows;
    const arma::uword nt = h.n_cols;
    a.set_size(nr, nr);
    for (arma::uword j = 0; j < nr; ++j) {
        for (arma::uword i = j; i < nr; ++i) {
            std::complex<double> s(0.0, 0.0);
            for (arma::uword k = 0; k < nt; ++k) {
                s += lambda(k) * h(i, k) * std::conj(h(j, k));
            }
            a(i, j) = gamma * s;
        }
        a(j, j) += 1.0;
    }
}

// In-place lower Cholesky factorization; only the lower triangle is
// referenced. Returns false when a pivot fails to be strictly positive.
inline bool cholesky_lower(arma::cx_mat& a) {
    const arma::uword n = a.n_rows;
    for (arma::uword j = 0; j < n; ++j) {
        double d = std::real(a(j, j));
        for (arma::uword k = 0; k < j; ++k) {
            d -= std::norm(a(j, k));
        }
        if (!(d > 0.0)) {
            return false;
        }
        const double pivot = std::sqrt(d);
        a(j, j) = pivot;
        for (arma::uword i = j + 1; i < n; ++i) {
            std::complex<double> s = a(i, j);
            for (arma::uword k = 0; k < j; ++k) {
                s -= a(i, k) * std::conj(a(j, k));
            }
            a(i, j) = s / pivot;
        }
    }
    return true;
}

// log det(L L^H) from the factor's diagonal.
inline double log_det_from_cholesky(const arma::cx_mat& l) {
    double s = 0.0;
    for (arma::uword i = 0; i < l.n_rows; ++i) {
        s += std::log(std::real(l(i, i)));
    }
    return 2.0 * s;
}

// Solves L L^H x = b in place, column by column.
inline void cholesky_solve_in_place(const arma::cx_mat& l, arma::cx_mat& b) {
    const arma::uword n = l.n_rows;
    for (arma::uword c = 0; c < b.n_cols; ++c) {
        for (arma::uword i = 0; i < n; ++i) {
            std::complex<double> s = b(i, c);
            for (arma::uword k = 0; k < i; ++k) {
                s -= l(i, k) * b(k, c);
            }
            b(i, c) = s / std::real(l(i, i));
        }
        for (arma::uword i = n; i-- > 0;) {
            std::complex<double> s = b(i, c);
            for (arma::uword k = i + 1; k < n; ++k) {
                s -= std::conj(l(k, i)) * b(k, c);
            }
            b(i, c) = s / std::real(l(i, i));
        }
    }
}

} // namespace percap::detail

#endif
