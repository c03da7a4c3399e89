#ifndef PERCAP_PERMANENTS_HPP
#define PERCAP_PERMANENTS_HPP

#include <armadillo>
#include <cstdint>

#include "percap/op_counter.hpp"

namespace percap {

enum class PerMethod { definition, laplace, ryser };

enum class PerAlgorithm {
    definition,
    laplace,
    ryser,
    poly_definition,
    poly_laplace,
    poly_ryser,
};

// Permanent of an arbitrary M x N real matrix. All three routines return the
// same value (up to floating-point error for ryser); they differ in the
// expansion used and therefore in multiplication count. Matrices with M > N
// are handled by transposition. An empty matrix has permanent 1.
//
// Throws OverflowError if an intermediate value leaves the double range.
double per_definition(const arma::mat& a, OpCounter* counter = nullptr);
double per_laplace(const arma::mat& a, OpCounter* counter = nullptr);
double per_ryser(const arma::mat& a, OpCounter* counter = nullptr);

// Extended permanent Per([I_M A]) = Per([I_N A^T]), evaluated as the sum of
// permanents of all row-subset submatrices (never by materializing the
// identity block).
double extended_per_direct(const arma::mat& a, OpCounter* counter = nullptr);

// Coefficients mu_0..mu_min(M,N) of Per(1 + z a) as a polynomial in z.
// All three methods agree; mu_0 always equals Per(1_{M x N}) and the top
// coefficient equals Per(a).
arma::vec per_polynomial(const arma::mat& a, PerMethod method, OpCounter* counter = nullptr);

// Extended permanent through the polynomial expansion:
// sum_k mu_k c_k with c_k = |M-N|! / (max(M,N)-k)!.
double extended_per_poly(const arma::mat& a, PerMethod method = PerMethod::ryser,
                         OpCounter* counter = nullptr);

// Closed-form multiplication counts for evaluating the extended permanent of
// an M x N coupling matrix. For the three direct algorithms the count refers
// to the permanent of the augmented min x (min+max) matrix; for the three
// polynomial algorithms to the coefficient computation.
std::uint64_t predicted_multiplications(arma::uword m, arma::uword n, PerAlgorithm algorithm);

} // namespace percap

#endif
