#include "mixexp/errors.hpp"
#include "mixexp/structure_b.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

using namespace mixexp;

namespace {

const char* const kFamilies[] = {"binomial", "poisson", "negative_binomial", "catalan"};

std::vector<double> interior_grid(const DiscreteStructure& s) {
  std::vector<double> xs;
  for (int i = 1; i <= 10; ++i) {
    xs.push_back(s.domain().bounded() ? i / 11.0 : 0.3 * i);
  }
  return xs;
}

} // namespace

TEST(StructureB, SolveY) {
  EXPECT_NEAR(builtin_family("binomial").solve_y(0.25), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(builtin_family("poisson").solve_y(2.0), 2.0, 1e-14);
  EXPECT_NEAR(builtin_family("negative_binomial").solve_y(1.0), 0.5, 1e-14);
  EXPECT_NEAR(builtin_family("catalan").solve_y(1.0), 2.0 / 9.0, 1e-14);
}

TEST(StructureB, Weights) {
  EXPECT_NEAR(builtin_family("binomial").weight(2, 1, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(builtin_family("poisson").weight(1, 0, 1.0), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(builtin_family("catalan").weight(1, 0, 1.0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(builtin_family("binomial").weight(3, 4, 0.5), 0.0);
  EXPECT_EQ(builtin_family("poisson").weight(3, 0, 0.0), 1.0);
  EXPECT_EQ(builtin_family("poisson").weight(3, 2, 0.0), 0.0);
}

TEST(StructureB, CovarianceCharacteristic) {
  EXPECT_DOUBLE_EQ(builtin_family("binomial").covariance_characteristic(0.5), 0.25);
  EXPECT_DOUBLE_EQ(builtin_family("poisson").covariance_characteristic(3.0), 3.0);
  EXPECT_DOUBLE_EQ(builtin_family("catalan").covariance_characteristic(1.0), 6.0);
  EXPECT_EQ(to_string(*builtin_family("negative_binomial").covariance_poly()), "x + x^2");
  EXPECT_EQ(to_string(*builtin_family("binomial").covariance_poly()), "x - x^2");
}

TEST(StructureB, FisherInformation) {
  EXPECT_DOUBLE_EQ(builtin_family("binomial").fisher_information(10, 0.5), 40.0);
  EXPECT_DOUBLE_EQ(builtin_family("poisson").fisher_information(1, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(builtin_family("poisson").fisher_information(1, 1.0), 1.0);
  EXPECT_THROW(builtin_family("poisson").fisher_information(1, 0.0), DomainError);
}

TEST(StructureB, FisherInformationMatchesScoreVariance) {
  const auto s = builtin_family("binomial");
  const int n = 10;
  const double x = 0.5;
  const double eps = 1e-6;
  double info = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double score = (s.log_weight(n, k, x + eps) - s.log_weight(n, k, x - eps)) / (2 * eps);
    info += score * score * s.weight(n, k, x);
  }
  EXPECT_NEAR(info / s.fisher_information(n, x), 1.0, 1e-6);
}

TEST(StructureB, Errors) {
  EXPECT_THROW(builtin_family("geometric"), UnknownFamily);
  EXPECT_THROW(builtin_family("binomial").weight(2, 0, 1.5), DomainError);
  EXPECT_THROW(builtin_family("poisson").weight(2, 0, -0.1), DomainError);
  EXPECT_THROW(builtin_family("poisson").weight(0, 0, 1.0), ParameterError);
  EXPECT_THROW(builtin_family("poisson").truncation_index(20, 50.0, 1e-14, 100), TruncationError);
}

TEST(StructureB, Normalization) {
  for (const char* name : kFamilies) {
    const auto s = builtin_family(name);
    for (int n : {1, 5, 20, 50}) {
      for (double x : interior_grid(s)) {
        double mass = 0.0;
        for (double w : s.weights(n, x)) {
          mass += w;
        }
        EXPECT_NEAR(mass, 1.0, 1e-12) << name << " n=" << n << " x=" << x;
      }
    }
  }
}

TEST(StructureB, MeanAndVariance) {
  for (const char* name : kFamilies) {
    const auto s = builtin_family(name);
    for (int n : {1, 5, 20}) {
      for (double x : interior_grid(s)) {
        // The catalan tail near the radius of convergence is heavy enough
        // that the second moment needs a tighter cut than the mass does.
        const auto w = s.weights(n, x, 1e-19);
        long double mean = 0.0L;
        long double var = 0.0L;
        for (std::size_t k = 0; k < w.size(); ++k) {
          const long double d = static_cast<long double>(k) - n * x;
          mean += k * static_cast<long double>(w[k]);
          var += d * d * w[k];
        }
        EXPECT_NEAR(static_cast<double>(mean) / (n * x), 1.0, 1e-10) << name;
        EXPECT_NEAR(static_cast<double>(var) / (n * s.covariance_characteristic(x)), 1.0, 1e-10)
            << name << " n=" << n << " x=" << x;
      }
    }
  }
}

TEST(StructureB, DefiningRelation) {
  std::mt19937 rng(3);
  const double eps = 1e-6;
  for (const char* name : kFamilies) {
    const auto s = builtin_family(name);
    const auto xs = interior_grid(s);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 15);
      const double x = xs[rng() % xs.size()];
      const long k = static_cast<long>(rng() % static_cast<unsigned>(
                                           std::min<long>(s.support_max(n), 25) + 1));
      const double lhs = s.covariance_characteristic(x) *
                         (s.weight(n, k, x + eps) - s.weight(n, k, x - eps)) / (2 * eps);
      const double rhs = (k - n * x) * s.weight(n, k, x);
      EXPECT_NEAR(lhs, rhs, 1e-6 * std::max(1.0, s.weight(n, k, x)))
          << name << " n=" << n << " k=" << k << " x=" << x;
    }
  }
}

TEST(StructureB, GenericBinomialMatchesClosedForm) {
  const auto generic = make_generic_family(
      PowerSeriesFamily::from_coefficients("one_plus_y", {Rational(1), Rational(1)}));
  const auto closed = builtin_family("binomial");
  EXPECT_EQ(generic.domain().hi, 1.0);
  for (int n = 1; n <= 10; ++n) {
    for (double x : {0.1, 0.37, 0.5, 0.9}) {
      for (long k = 0; k <= n; ++k) {
        EXPECT_NEAR(generic.weight(n, k, x), closed.weight(n, k, x), 1e-12);
      }
      EXPECT_NEAR(generic.covariance_characteristic(x), x - x * x, 1e-12);
    }
  }
}

TEST(StructureB, GenericPoissonSeries) {
  PowerSeriesFamily fam;
  fam.name = "exp_series";
  fam.coeff = [](long k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return Rational(mpz_class(1), f);
  };
  fam.omega = [](double y) { return std::exp(y); };
  fam.omega_prime = [](double y) { return std::exp(y); };
  fam.omega_second = [](double y) { return std::exp(y); };
  const auto generic = make_generic_family(std::move(fam));
  const auto closed = builtin_family("poisson");
  EXPECT_NEAR(generic.solve_y(1.7), 1.7, 1e-12);
  for (long k = 0; k < 30; ++k) {
    EXPECT_NEAR(generic.weight(6, k, 1.5), closed.weight(6, k, 1.5), 1e-12);
  }
}

TEST(StructureB, CatalanWeightSumsToOne) {
  // The closed form (n/(2k+n)) C(2k+n,k) x^k (1+x)^(n+k) (1+2x)^(-n-2k) is
  // a proper distribution: its mass is checked at large x where the tail is
  // heavy.
  const auto s = builtin_family("catalan");
  for (double x : {0.5, 3.0, 10.0}) {
    double mass = 0.0;
    for (double w : s.weights(3, x)) {
      mass += w;
    }
    EXPECT_NEAR(mass, 1.0, 1e-12) << x;
  }
}

TEST(StructureB, LargeIndexWeightsStayFinite) {
  const auto s = builtin_family("catalan");
  const double w = s.weight(50, 400, 2.0);
  EXPECT_TRUE(std::isfinite(w));
  EXPECT_GT(w, 0.0);
}
