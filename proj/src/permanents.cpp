#include "percap/permanents.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "percap/errors.hpp"

namespace percap {

namespace {

inline double counted_mul(OpCounter* counter, double a, double b) {
    if (counter != nullptr) {
        counter->add();
    }
    return a * b;
}

void check_finite(double value) {
    if (!std::isfinite(value)) {
        throw OverflowError("permanent evaluation left the representable floating-point range");
    }
}

void check_finite(const arma::vec& values) {
    for (double v : values) {
        check_finite(v);
    }
}

double factorial(arma::uword n) {
    double f = 1.0;
    for (arma::uword i = 2; i <= n; ++i) {
        f *= static_cast<double>(i);
    }
    return f;
}

double binomial(arma::sword n, arma::sword k) {
    if (k < 0 || n < 0 || k > n) {
        return 0.0;
    }
    double b = 1.0;
    for (arma::sword i = 0; i < k; ++i) {
        b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return std::round(b);
}

// Exact k^e for the small integer weights of the Ryser polynomial assembly.
double int_pow(arma::uword k, arma::uword e) {
    double p = 1.0;
    for (arma::uword i = 0; i < e; ++i) {
        p *= static_cast<double>(k);
    }
    return p;
}

// Orient so that rows <= cols; the permanent is invariant under transposition.
arma::mat oriented(const arma::mat& a) {
    return (a.n_rows <= a.n_cols) ? a : a.t();
}

// Visits every ordered sequence of m distinct column indices out of n and
// invokes fn(seq). Enumeration order is lexicographic and deterministic.
template <typename Fn>
void for_each_sequence(arma::uword m, arma::uword n, Fn&& fn) {
    std::vector<arma::uword> seq(m);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, arma::uword depth) -> void {
        if (depth == m) {
            fn(seq);
            return;
        }
        for (arma::uword j = 0; j < n; ++j) {
            if (used[j]) {
                continue;
            }
            used[j] = true;
            seq[depth] = j;
            self(self, depth + 1);
            used[j] = false;
        }
    };
    rec(rec, 0);
}

// Visits every size-k subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(arma::uword k, arma::uword n, Fn&& fn) {
    std::vector<arma::uword> idx(k);
    for (arma::uword i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        fn(idx);
        // advance to the next combination
        arma::sword i = static_cast<arma::sword>(k) - 1;
        while (i >= 0 && idx[static_cast<arma::uword>(i)] == n - k + static_cast<arma::uword>(i)) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++idx[static_cast<arma::uword>(i)];
        for (arma::uword j = static_cast<arma::uword>(i) + 1; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// Multiplies the running coefficients c[0..degree] (c[0] == 1) by (1 + w z)
// in place. Costs exactly `degree` counted multiplications: the update of the
// linear coefficient is an addition because c[0] is one.
void poly_mul_linear(std::vector<double>& c, arma::uword degree, double w, OpCounter* counter) {
    c[degree + 1] = counted_mul(counter, w, c[degree]);
    for (arma::uword j = degree; j >= 2; --j) {
        c[j] += counted_mul(counter, w, c[j - 1]);
    }
    c[1] += w;
}

double ryser_subsets(const arma::mat& b, OpCounter* counter);
double ryser_gray(const arma::mat& b);

} // namespace

double per_definition(const arma::mat& a, OpCounter* counter) {
    if (a.n_rows == 0 || a.n_cols == 0) {
        return 1.0;
    }
    const arma::mat b = oriented(a);
    const arma::uword m = b.n_rows;
    const arma::uword n = b.n_cols;

    double total = 0.0;
    for_each_sequence(m, n, [&](const std::vector<arma::uword>& seq) {
        double prod = b(0, seq[0]);
        for (arma::uword i = 1; i < m; ++i) {
            prod = counted_mul(counter, prod, b(i, seq[i]));
        }
        total += prod;
    });
    check_finite(total);
    return total;
}

double per_laplace(const arma::mat& a, OpCounter* counter) {
    if (a.n_rows == 0 || a.n_cols == 0) {
        return 1.0;
    }
    const arma::mat b = oriented(a);
    const arma::uword m = b.n_rows;

    std::vector<arma::uword> cols(b.n_cols);
    for (arma::uword j = 0; j < b.n_cols; ++j) {
        cols[j] = j;
    }

    // Cofactor expansion along the first remaining row; a single row is a sum.
    auto rec = [&](auto&& self, arma::uword row) -> double {
        if (row + 1 == m) {
            double s = 0.0;
            for (arma::uword j : cols) {
                s += b(row, j);
            }
            return s;
        }
        double s = 0.0;
        for (arma::uword idx = 0; idx < cols.size(); ++idx) {
            const arma::uword j = cols[idx];
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(idx));
            s += counted_mul(counter, b(row, j), self(self, row + 1));
            cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(idx), j);
        }
        return s;
    };
    const double total = rec(rec, 0);
    check_finite(total);
    return total;
}

double per_ryser(const arma::mat& a, OpCounter* counter) {
    if (a.n_rows == 0 || a.n_cols == 0) {
        return 1.0;
    }
    const arma::mat b = oriented(a);
    double total;
    if (counter == nullptr && b.n_cols <= 22) {
        total = ryser_gray(b);
    } else {
        total = ryser_subsets(b, counter);
    }
    check_finite(total);
    return total;
}

namespace {

// Inclusion-exclusion over column subsets with per-subset row-sum products
// recomputed from scratch. This realization performs exactly
// m + (m-1) sum_k C(n,k) multiplications, the count the closed-form formula
// assumes, so it doubles as the instrumented path.
double ryser_subsets(const arma::mat& b, OpCounter* counter) {
    const arma::uword m = b.n_rows;
    const arma::uword n = b.n_cols;
    double total = 0.0;
    std::vector<double> rowsum(m);
    for (arma::uword k = 1; k <= m; ++k) {
        double subset_sum = 0.0;
        for_each_combination(k, n, [&](const std::vector<arma::uword>& cols) {
            for (arma::uword i = 0; i < m; ++i) {
                double s = 0.0;
                for (arma::uword j : cols) {
                    s += b(i, j);
                }
                rowsum[i] = s;
            }
            double prod = rowsum[0];
            for (arma::uword i = 1; i < m; ++i) {
                prod = counted_mul(counter, prod, rowsum[i]);
            }
            subset_sum += prod;
        });
        const double coeff = binomial(static_cast<arma::sword>(n - k), static_cast<arma::sword>(m - k));
        const double term = counted_mul(counter, coeff, subset_sum);
        total += ((m - k) % 2 == 0) ? term : -term;
    }
    return total;
}

// Gray-code walk over all column subsets with incremental row-sum updates.
// Subsets larger than m carry a zero coefficient and are skipped.
double ryser_gray(const arma::mat& b) {
    const arma::uword m = b.n_rows;
    const arma::uword n = b.n_cols;

    std::vector<double> signed_coeff(n + 1, 0.0);
    for (arma::uword k = 1; k <= m; ++k) {
        const double c = binomial(static_cast<arma::sword>(n - k), static_cast<arma::sword>(m - k));
        signed_coeff[k] = ((m - k) % 2 == 0) ? c : -c;
    }

    std::vector<double> rowsum(m, 0.0);
    double total = 0.0;
    std::uint64_t prev = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t g = 1; g < count; ++g) {
        const std::uint64_t gray = g ^ (g >> 1);
        const std::uint64_t diff = gray ^ prev;
        const arma::uword j = static_cast<arma::uword>(std::countr_zero(diff));
        const double sign = (gray & diff) ? 1.0 : -1.0;
        for (arma::uword i = 0; i < m; ++i) {
            rowsum[i] += sign * b(i, j);
        }
        prev = gray;
        const arma::uword k = static_cast<arma::uword>(std::popcount(gray));
        if (k > m) {
            continue;
        }
        double prod = rowsum[0];
        for (arma::uword i = 1; i < m; ++i) {
            prod *= rowsum[i];
        }
        total += signed_coeff[k] * prod;
    }
    return total;
}

} // namespace

double extended_per_direct(const arma::mat& a, OpCounter* counter) {
    if (a.n_rows == 0 || a.n_cols == 0) {
        return 1.0;
    }
    const arma::mat b = oriented(a);
    const arma::uword m = b.n_rows;

    double total = 1.0; // k = 0 term
    arma::uvec rows;
    for (arma::uword k = 1; k <= m; ++k) {
        for_each_combination(k, m, [&](const std::vector<arma::uword>& sel) {
            rows = arma::uvec(sel);
            total += per_ryser(b.rows(rows), counter);
        });
    }
    check_finite(total);
    return total;
}

namespace {

arma::vec poly_by_definition(const arma::mat& b, OpCounter* counter) {
    const arma::uword m = b.n_rows;
    const arma::uword n = b.n_cols;
    arma::vec mu(m + 1, arma::fill::zeros);
    std::vector<double> c(m + 1, 0.0);
    for_each_sequence(m, n, [&](const std::vector<arma::uword>& seq) {
        c[0] = 1.0;
        c[1] = b(0, seq[0]);
        for (arma::uword k = 1; k < m; ++k) {
            poly_mul_linear(c, k, b(k, seq[k]), counter);
        }
        for (arma::uword i = 0; i <= m; ++i) {
            mu(i) += c[i];
        }
    });
    return mu;
}

// Laplace expansion on normalized polynomials. Every sub-permanent of the
// all-(1 + w z) matrix has the known constant term Per(1_{r x c}), so each
// node stores coefficients relative to that constant; the normalizations are
// integer scalings and stay outside the multiplication count.
arma::vec poly_by_laplace(const arma::mat& b, OpCounter* counter) {
    const arma::uword m = b.n_rows;
    const arma::uword n = b.n_cols;

    std::vector<arma::uword> cols(n);
    for (arma::uword j = 0; j < n; ++j) {
        cols[j] = j;
    }

    // Returns nb[0..r-1], where nb[l-1] is the z^l coefficient of the
    // sub-permanent polynomial for rows [row, m) divided by its constant term.
    auto rec = [&](auto&& self, arma::uword row) -> std::vector<double> {
        const arma::uword r = m - row;
        const double width = static_cast<double>(cols.size());
        if (r == 1) {
            double s = 0.0;
            for (arma::uword j : cols) {
                s += b(row, j);
            }
            return {s / width};
        }
        std::vector<double> acc(r, 0.0);
        for (arma::uword idx = 0; idx < cols.size(); ++idx) {
            const arma::uword j = cols[idx];
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(idx));
            const std::vector<double> child = self(self, row + 1);
            cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(idx), j);

            const double w = b(row, j);
            acc[0] += w + child[0];
            for (arma::uword l = 2; l < r; ++l) {
                acc[l - 1] += child[l - 1] + counted_mul(counter, w, child[l - 2]);
            }
            acc[r - 1] += counted_mul(counter, w, child[r - 2]);
        }
        for (double& v : acc) {
            v /= width;
        }
        return acc;
    };

    const std::vector<double> nb = rec(rec, 0);
    arma::vec mu(m + 1);
    mu(0) = factorial(n) / factorial(n - m); // Per(1_{m x n})
    for (arma::uword l = 1; l <= m; ++l) {
        mu(l) = mu(0) * nb[l - 1];
    }
    return mu;
}

arma::vec poly_by_ryser(const arma::mat& b, OpCounter* counter) {
    const arma::uword m = b.n_rows;
    const arma::uword n = b.n_cols;

    // elem_sums[k](i): sum over size-k column subsets of the i-th elementary
    // symmetric function of the subset row sums
    std::vector<arma::vec> elem_sums(m + 1, arma::vec(m + 1, arma::fill::zeros));
    std::vector<double> rowsum(m);
    std::vector<double> c(m + 1, 0.0);
    for (arma::uword k = 1; k <= m; ++k) {
        for_each_combination(k, n, [&](const std::vector<arma::uword>& sel) {
            for (arma::uword i = 0; i < m; ++i) {
                double s = 0.0;
                for (arma::uword j : sel) {
                    s += b(i, j);
                }
                rowsum[i] = s;
            }
            c[0] = 1.0;
            c[1] = rowsum[0];
            for (arma::uword i = 1; i < m; ++i) {
                poly_mul_linear(c, i, rowsum[i], counter);
            }
            for (arma::uword i = 0; i <= m; ++i) {
                elem_sums[k](i) += c[i];
            }
        });
    }

    arma::vec mu(m + 1, arma::fill::zeros);
    for (arma::uword k = 1; k <= m; ++k) {
        const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
        const double coeff = binomial(static_cast<arma::sword>(n - k), static_cast<arma::sword>(m - k));
        for (arma::uword i = 0; i <= m; ++i) {
            double term = elem_sums[k](i);
            if (i < m) {
                term = counted_mul(counter, int_pow(k, m - i), term);
            }
            mu(i) += sign * coeff * term;
        }
    }
    return mu;
}

} // namespace

arma::vec per_polynomial(const arma::mat& a, PerMethod method, OpCounter* counter) {
    if (a.n_rows == 0 || a.n_cols == 0) {
        return arma::vec{1.0};
    }
    const arma::mat b = oriented(a);
    arma::vec mu;
    switch (method) {
        case PerMethod::definition:
            mu = poly_by_definition(b, counter);
            break;
        case PerMethod::laplace:
            mu = poly_by_laplace(b, counter);
            break;
        case PerMethod::ryser:
            mu = poly_by_ryser(b, counter);
            break;
    }
    check_finite(mu);
    return mu;
}

double extended_per_poly(const arma::mat& a, PerMethod method, OpCounter* counter) {
    if (a.n_rows == 0 || a.n_cols == 0) {
        return 1.0;
    }
    const arma::vec mu = per_polynomial(a, method, counter);
    const arma::uword nmax = std::max(a.n_rows, a.n_cols);
    const arma::uword nmin = std::min(a.n_rows, a.n_cols);
    const double diff_fact = factorial(nmax - nmin);
    double total = 0.0;
    for (arma::uword k = 0; k <= nmin; ++k) {
        total += mu(k) * (diff_fact / factorial(nmax - k));
    }
    check_finite(total);
    return total;
}

namespace {

using wide_t = unsigned __int128;

wide_t wide_factorial(arma::uword n) {
    wide_t f = 1;
    for (arma::uword i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

wide_t wide_binomial(arma::uword n, arma::uword k) {
    if (k > n) {
        return 0;
    }
    wide_t b = 1;
    for (arma::uword i = 0; i < k; ++i) {
        b = b * (n - i) / (i + 1);
    }
    return b;
}

std::uint64_t narrow(wide_t v) {
    if (v > std::numeric_limits<std::uint64_t>::max()) {
        throw OverflowError("predicted multiplication count exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(v);
}

} // namespace

std::uint64_t predicted_multiplications(arma::uword m, arma::uword n, PerAlgorithm algorithm) {
    if (m < 1 || n < 1) {
        throw DomainError("predicted_multiplications requires m, n >= 1");
    }
    const arma::uword nmin = std::min(m, n);
    const arma::uword nmax = std::max(m, n);

    wide_t count = 0;
    switch (algorithm) {
        case PerAlgorithm::definition:
            count = wide_t(nmin - 1) * (wide_factorial(nmin + nmax) / wide_factorial(nmax));
            break;
        case PerAlgorithm::laplace:
            for (arma::uword k = 1; k + 1 <= nmin; ++k) {
                count += wide_factorial(nmin + nmax) / wide_factorial(nmin + nmax - k);
            }
            break;
        case PerAlgorithm::ryser: {
            wide_t subsets = 0;
            for (arma::uword k = 1; k <= nmin; ++k) {
                subsets += wide_binomial(nmin + nmax, k);
            }
            count = wide_t(nmin) + wide_t(nmin - 1) * subsets;
            break;
        }
        case PerAlgorithm::poly_definition:
            count = wide_t(nmin) * (nmin - 1) * (wide_factorial(nmax) / wide_factorial(nmax - nmin)) / 2;
            break;
        case PerAlgorithm::poly_laplace:
            for (arma::uword k = 1; k + 1 <= nmin; ++k) {
                count += wide_t(nmin - k) * (wide_factorial(nmax) / wide_factorial(nmax - k));
            }
            break;
        case PerAlgorithm::poly_ryser: {
            wide_t subsets = 0;
            for (arma::uword k = 1; k <= nmin; ++k) {
                subsets += wide_binomial(nmax, k);
            }
            count = wide_t(nmin) * nmin + wide_t(nmin) * (nmin - 1) / 2 * subsets;
            break;
        }
    }
    return narrow(count);
}

} // namespace percap
