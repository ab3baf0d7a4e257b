#pragma once

// Restricted-box moments
//   I_{p,d}(u; N) = int_B |f_d(alpha; N)|^p d alpha,
// where B is the unit cube with coordinate alpha_r confined to [0, N^-u).
// r defaults to d - 1; r = d gives the leading-coefficient box.

#include <cstdint>
#include <optional>
#include <string>

#include "vmvt/counting.hpp"
#include "vmvt/phase_arith.hpp"

namespace vmvt::moments {

using phases::Complex;

enum class Method { kExactEven, kMonteCarlo, kQuadrature };
char const* to_string(Method m);
Method method_from_string(std::string const& name);  // exact | mc | quadrature

struct MomentSpec {
  int d = 2;
  double p = 2.0;
  double u = 0.5;
  std::int64_t N = 1;
  int restricted_power = 0;  // 0 selects d - 1
  Method method = Method::kExactEven;

  int restricted() const { return restricted_power == 0 ? d - 1 : restricted_power; }
  // s with p = 2s, when p is an even integer.
  std::optional<int> half_order() const;
  double box_measure() const;  // N^-u
  void validate() const;
};

// K_u(b) = int_0^{N^-u} e(beta b) d beta.
class BoxKernel {
 public:
  BoxKernel(double u, std::int64_t N);
  double width() const { return width_; }
  Complex operator()(std::int64_t b) const;

 private:
  double width_;
};

struct MomentResult {
  double value = 0.0;
  double std_error = 0.0;       // 0 for exact methods
  double imag_residual = 0.0;   // exact_even only
  std::uint64_t samples = 0;    // MC samples or quadrature points of the final pass
  std::uint64_t profile_entries = 0;
  Method method = Method::kExactEven;
};

// Counting system whose sigma_r-profile gives I_{2s,d}: zero powers
// {1..d} \ {r}, profile power r, variables in [1, N].
counting::SystemSpec exact_even_system(MomentSpec const& spec);

MomentResult moment_exact_even(MomentSpec const& spec, counting::Options const& opts = {});

// sum_b r(b) K_u(b) for an existing profile (for instance one read from a dump).
MomentResult moment_from_profile(counting::FrequencyProfile const& profile, double u);

inline constexpr int kMcBuckets = 32;
inline constexpr std::uint64_t kMcChunk = 4096;
inline constexpr std::uint64_t kMcMinSamples = 1000;

struct McOptions {
  std::uint64_t samples = std::uint64_t{1} << 20;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

// Median of kMcBuckets bucket means (sample i goes to bucket i mod 32) times
// the box measure. Point i depends only on (seed, i), so the result does not
// depend on the worker count.
MomentResult moment_mc(MomentSpec const& spec, McOptions const& opts = {});

// Uniform point in [0, 1) for coordinate `dim` of sample `index`.
double mc_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t dim);

struct QuadratureOptions {
  int resolution = 8;        // points per unit of maximal frequency on each axis
  double rel_tol = 1e-7;     // Richardson stopping rule on the restricted axis
  double max_points = 1e9;   // per pass
  unsigned workers = 0;
};

// Midpoint rule: exact on the periodic axes for even p, Romberg-extrapolated
// doubling on the restricted axis.
MomentResult moment_quadrature(MomentSpec const& spec, QuadratureOptions const& opts = {});

struct MomentOptions {
  counting::Options counting;
  McOptions mc;
  QuadratureOptions quadrature;
};

MomentResult compute_moment(MomentSpec const& spec, MomentOptions const& opts = {});

// Weighted counts from the joint (sigma_{d-1}, sigma_d) profile of 2s-tuples in
// [1, 2N] with sigma_i = 0 for i <= d - 2. For a != 0, Y(a, b) = 1 exactly
// when y = -b / (d a) is an integer in [1, N]; Y(0, 0) = N and Y(0, b) = 0
// otherwise.
//   S = N^-u sum R(a, b) phi_hat(a / N^u) Y(a, b)
//   U = N^{-1} N^{-u-1} N^{-(u-eps)} sum R(a, b) phi_hat(b / N^{u+1}) phi_hat(a / N^{u-eps}) Y(a, b)
//   T = N U
double weighted_count_S(int d, int s, std::int64_t N, double u, counting::Options const& opts = {});
double weighted_count_U(int d, int s, std::int64_t N, double u, double eps,
                        counting::Options const& opts = {});
double weighted_count_T(int d, int s, std::int64_t N, double u, double eps,
                        counting::Options const& opts = {});

counting::JointProfile weighted_count_profile(int d, int s, std::int64_t N,
                                              counting::Options const& opts = {});
double weighted_count_S(counting::JointProfile const& joint, double u);
double weighted_count_U(counting::JointProfile const& joint, double u, double eps);

}  // namespace vmvt::moments
