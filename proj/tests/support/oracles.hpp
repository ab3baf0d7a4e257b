#pragma once

// Reference implementations used only by tests. None of them calls the
// library's evaluation code.

#include <complex>
#include <cstdint>
#include <vector>

namespace vmvt::oracle {

// f_d(alpha; N) with phases and trig evaluated in 256-bit binary floating
// point. Coefficients are taken at their exact binary values, ascending
// (alpha_1 first).
std::complex<double> weyl_sum_256(std::vector<double> const& ascending, std::int64_t N);

// Psi_A(beta; N) from the bump definition, evaluated independently.
double psi_reference(double A, double beta, std::int64_t N);

// Tensor midpoint quadratures for d = 3 of
//   S_p(u) = int |f_3(alpha; 2N)|^p sum_y Psi_u(alpha_2 - 3 y alpha_3)
//   U_p(u) = int int |f_3(alpha_3 - beta, alpha_2, alpha_1; 2N)|^p Psi_{u+1}(beta) G(alpha_2, alpha_3)
//   T_p(u) = the same with sum_y Psi_{u-eps} in place of G
// with p = 2s. Grids are fine enough that aliasing is below 1e-12 relative
// for N <= 3.
double s_quadrature_d3(int s, std::int64_t N, double u);
double u_quadrature_d3(int s, std::int64_t N, double u, double eps);
double t_quadrature_d3(int s, std::int64_t N, double u, double eps);

// Number of 2s-tuples in [1, N] with the given power sums balanced, by
// plain nested enumeration.
std::uint64_t count_nested(int s, std::int64_t N, std::vector<int> const& zero_powers);

}  // namespace vmvt::oracle
