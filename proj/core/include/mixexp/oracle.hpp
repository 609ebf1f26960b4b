#pragma once

#include "mixexp/phillips.hpp"
#include "mixexp/rational.hpp"
#include "mixexp/structure_b.hpp"
#include "mixexp/structure_h.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace mixexp::oracle {

/// Direct sum of (k - n x)^m b_{n,k}(x).
struct BruteMoment {
  Rational value;
  bool exact = false;
  /// Certified bound on the omitted tail (0 for finite support).
  double tail_bound = 0.0;
  long terms = 0;
};

/// Exact for the binomial family (rational weights). Infinite-support
/// families are summed in extended precision until the omitted tail, bounded
/// by a geometric series on the term ratio, drops below tail_target.
BruteMoment brute_beta(const DiscreteStructure& s, int n, int m, const Rational& x,
                       double tail_target = 1e-20);

/// The generator used by every sampler: std::mt19937_64, seeded through
/// std::seed_seq from the low and high halves of seed and the stream index.
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0);

struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::vector<double> values;
};

struct McEstimate {
  double mean = 0.0;
  double variance = 0.0;
  /// sqrt(variance / n_samples)
  double std_error = 0.0;
  /// Standard error of the sample variance, sqrt((m4 - variance^2) / n_samples).
  double variance_std_error = 0.0;
};

/// Draws eta from sum_k b_{n,k}(x) h_{n,k}(t): k by inverse CDF over the
/// truncated series, then t from h_{n,k}.
SampleBatch sample_phillips(const OperatorPreset& preset, int n, double x, std::size_t n_samples,
                            std::uint64_t seed, std::uint64_t stream = 0);

McEstimate estimate(const std::vector<double>& values);

std::vector<long> sample_discrete(const DiscreteStructure& s, int n, double x,
                                  std::size_t n_samples, std::uint64_t seed);

/// Draws from h_{n,k}. Throws SamplerError if the arctan-type rejection
/// sampler accepts fewer than 1e-3 of its proposals.
double sample_continuous(const ContinuousStructure& s, int n, long k, std::mt19937_64& rng);
std::vector<double> sample_continuous(const ContinuousStructure& s, int n, long k,
                                      std::size_t n_samples, std::uint64_t seed);

/// integral f(t) h_{n,k}(t) dt with absolute tolerance 1e-11.
double quad_expectation(const ContinuousStructure& s, int n, long k,
                        const std::function<double(double)>& f);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double critical_999 = 0.0;
};

/// Pearson statistic of draws against b_{n,k}(x); cells with expected count
/// below 5 are pooled into the neighbouring cell.
ChiSquare chi_square_pmf(const DiscreteStructure& s, int n, double x,
                         const std::vector<long>& draws);

/// sup |F_N - F| with F accumulated by quadrature between sorted samples.
double ks_statistic(const ContinuousStructure& s, int n, long k, std::vector<double> samples);

struct NormalizationAuditEntry {
  std::string structure;
  std::string triple;
  int n = 0;
  long k = 0;
  double measured_mass = 0.0; ///< exact constant, mass by quadrature
  std::string printed_formula;
  double printed_mass_analytic = 1.0;
  /// Quadrature mass of the printed density; NaN when divergent.
  double printed_mass_measured = 0.0;
  /// For divergent printed densities: masses over [eps, inf) for
  /// eps = 1e-1, 1e-2, 1e-3.
  std::vector<double> printed_partial_masses;
  bool printed_consistent = true;
  std::string note;
};

/// Mass audit of the six continuous structures plus the two kernel variants
/// that appear in the worked examples (gamma kernel with t^(k+1), beta-prime
/// kernel with C(n+k+1,k)).
std::vector<NormalizationAuditEntry> normalization_audit(int n, long k);

} // namespace mixexp::oracle
