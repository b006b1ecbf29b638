#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pdpp/errors.hpp"
#include "pdpp/kernel.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace pdpp;

namespace {

VectorXd pt1(double x) {
  VectorXd v(1);
  v << x;
  return v;
}

VectorXd pt2(double x, double y) {
  VectorXd v(2);
  v << x, y;
  return v;
}

Domain unit_domain_1d() { return Domain(pt1(-0.5), pt1(0.5)); }

// Independent kernel oracle: the literal double sum over the index set
// {-ell..ell}^d, no recurrence, no factorization.
double direct_cosine_sum(const Domain& dom, int ell, const VectorXd& x, const VectorXd& y) {
  VectorXd t = (x - y).cwiseQuotient(dom.side());
  double total = 0.0;
  if (dom.dim() == 1) {
    for (int j = -ell; j <= ell; ++j) total += std::cos(2.0 * M_PI * j * t[0]);
  } else if (dom.dim() == 2) {
    for (int j1 = -ell; j1 <= ell; ++j1)
      for (int j2 = -ell; j2 <= ell; ++j2)
        total += std::cos(2.0 * M_PI * (j1 * t[0] + j2 * t[1]));
  } else {
    FAIL("oracle supports d <= 2");
  }
  return total / dom.volume();
}

}  // namespace

TEST_CASE("domain validates bounds and exposes the affine map") {
  CHECK_THROWS_AS(Domain(pt1(1.0), pt1(1.0)), ConfigError);
  CHECK_THROWS_AS(Domain(pt1(2.0), pt1(1.0)), ConfigError);
  CHECK_THROWS_AS(Domain(pt2(0, 0), pt1(1)), ConfigError);

  Domain dom(pt2(-1.0, 2.0), pt2(3.0, 5.0));
  CHECK(dom.volume() == doctest::Approx(12.0));
  CHECK(dom.side()[0] == doctest::Approx(4.0));
  CHECK(dom.center()[1] == doctest::Approx(3.5));
  VectorXd x = pt2(0.5, 4.0);
  VectorXd u = dom.to_unit(x);
  CHECK(dom.from_unit(u).isApprox(x, 1e-14));
  CHECK(dom.contains(x));
  CHECK(!dom.contains(pt2(3.1, 4.0)));
  CHECK(dom.nearly_equal(x, pt2(0.5 + 1e-14, 4.0)));
  CHECK(!dom.nearly_equal(x, pt2(0.5 + 1e-9, 4.0)));
}

TEST_CASE("kernel diagonal and zero-separation values") {
  FourierProjectionKernel k(unit_domain_1d(), 1);
  CHECK(k.rank() == 3);
  CHECK(k.eval(pt1(0.2), pt1(0.2)) == doctest::Approx(3.0).epsilon(1e-12));
  // Separation 1/3: 1 + 2 cos(2 pi / 3) = 0.
  CHECK(k.eval(pt1(1.0 / 6), pt1(-1.0 / 6)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(k.eval(pt1(0.6), pt1(0.0)), ConfigError);
}

TEST_CASE("kernel matches the Dirichlet closed form") {
  FourierProjectionKernel k(unit_domain_1d(), 2);
  double t = 0.1;
  double expect = oracle::dirichlet_closed_form(2, t);
  CHECK(k.eval(pt1(t - 0.2), pt1(-0.2)) == doctest::Approx(expect).epsilon(1e-12));
  // Same identity on a stretched domain, where t is in affine units.
  Domain wide(pt1(-2.0), pt1(6.0));
  FourierProjectionKernel kw(wide, 3);
  double sep = 0.31;  // affine units
  double got = kw.eval(pt1(1.0 + sep * 8.0), pt1(1.0));
  CHECK(got == doctest::Approx(oracle::dirichlet_closed_form(3, sep) / 8.0).epsilon(1e-12));
}

TEST_CASE("kernel is symmetric, stationary, and factorizes over dimensions") {
  Domain dom(pt2(-1.0, 0.0), pt2(2.0, 2.0));
  FourierProjectionKernel k(dom, 2);
  CHECK(k.rank() == 25);
  RandomStream rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    VectorXd x = dom.sample_uniform(rng);
    VectorXd y = dom.sample_uniform(rng);
    double v = k.eval(x, y);
    CHECK(v == doctest::Approx(k.eval(y, x)).epsilon(1e-13));
    CHECK(v == doctest::Approx(direct_cosine_sum(dom, 2, x, y)).epsilon(1e-10));
    // Shift both points by a common delta that stays inside the domain.
    VectorXd room_lo = dom.lower() - x.cwiseMin(y);
    VectorXd room_hi = dom.upper() - x.cwiseMax(y);
    VectorXd delta(2);
    for (int e = 0; e < 2; ++e) delta[e] = rng.uniform(room_lo[e], room_hi[e]);
    CHECK(k.eval(x + delta, y + delta) == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("projection identity: the kernel is idempotent under convolution") {
  Domain dom(pt1(0.0), pt1(2.0));
  FourierProjectionKernel k(dom, 3);
  RandomStream rng(12);
  for (int rep = 0; rep < 5; ++rep) {
    VectorXd x = dom.sample_uniform(rng);
    VectorXd y = dom.sample_uniform(rng);
    auto f = [&](double z) { return k.eval(x, pt1(z)) * k.eval(pt1(z), y); };
    double conv = integrate_1d(f, 0.0, 2.0, 1e-10);
    CHECK(conv == doctest::Approx(k.eval(x, y)).epsilon(1e-8));
  }
}

TEST_CASE("kernel integrates to its rank over the domain") {
  Domain dom(pt1(-3.0), pt1(9.0));
  FourierProjectionKernel k(dom, 5);
  auto f = [&](double x) { return k.eval(pt1(x), pt1(x)); };
  CHECK(integrate_1d(f, -3.0, 9.0, 1e-10) == doctest::Approx(11.0).epsilon(1e-9));
}

TEST_CASE("gram matrix examples and brute-force determinant oracle") {
  FourierProjectionKernel k1(unit_domain_1d(), 1);
  MatrixXd single(1, 1);
  single << 0.13;
  GramResult g1 = gram_matrix(k1, single);
  CHECK(g1.gram(0, 0) == doctest::Approx(3.0));
  CHECK(!g1.duplicate_points);

  MatrixXd pair(2, 1);
  pair << -1.0 / 6, 1.0 / 6;
  GramResult g2 = gram_matrix(k1, pair);
  CHECK(g2.gram(0, 0) == doctest::Approx(3.0));
  CHECK(g2.gram(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(oracle::cofactor_det(g2.gram) == doctest::Approx(9.0).epsilon(1e-12));

  FourierProjectionKernel k2(unit_domain_1d(), 2);
  RandomStream rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    MatrixXd pts(3, 1);
    for (int i = 0; i < 3; ++i) pts(i, 0) = rng.uniform(-0.5, 0.5);
    GramResult g = gram_matrix(k2, pts);
    double det = oracle::cofactor_det(g.gram);
    double hadamard = g.gram.diagonal().prod();
    CHECK(det <= hadamard * (1 + 1e-12));
    CHECK(det >= -1e-9 * hadamard);
    // Entries against the independent double-sum oracle.
    Domain dom = unit_domain_1d();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(g.gram(i, j) ==
              doctest::Approx(direct_cosine_sum(dom, 2, pts.row(i), pts.row(j))).epsilon(1e-10));
  }
}

TEST_CASE("gram matrix flags duplicate points") {
  FourierProjectionKernel k(unit_domain_1d(), 2);
  MatrixXd pts(3, 1);
  pts << 0.1, -0.3, 0.1 + 1e-14;
  CHECK(gram_matrix(k, pts).duplicate_points);
  pts(2, 0) = 0.1 + 1e-6;
  CHECK(!gram_matrix(k, pts).duplicate_points);
}

TEST_CASE("log_det_gram agrees with the cofactor oracle and flags singularity") {
  FourierProjectionKernel k(unit_domain_1d(), 2);
  MatrixXd single(1, 1);
  single << -0.2;
  FourierProjectionKernel k1(unit_domain_1d(), 1);
  auto ld1 = log_det_gram(k1, single);
  REQUIRE(ld1.has_value());
  CHECK(*ld1 == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  MatrixXd dup(2, 1);
  dup << 0.2, 0.2;
  CHECK(!log_det_gram(k, dup).has_value());

  MatrixXd pts(4, 1);
  pts << -0.4, -0.1, 0.15, 0.42;
  auto ld = log_det_gram(k, pts);
  REQUIRE(ld.has_value());
  double brute = oracle::cofactor_det(gram_matrix(k, pts).gram);
  CHECK(*ld == doctest::Approx(std::log(brute)).epsilon(1e-10));
}

TEST_CASE("gram matrices of at most m points are PSD") {
  Domain dom = unit_domain_1d();
  FourierProjectionKernel k(dom, 2);  // m = 5
  RandomStream rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 1 + rng.uniform_int(5);
    MatrixXd pts(n, 1);
    for (int i = 0; i < n; ++i) pts(i, 0) = rng.uniform(-0.5, 0.5);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram_matrix(k, pts).gram);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * es.eigenvalues().maxCoeff());
  }
}

TEST_CASE("a gram matrix of m+1 points is singular (rank-m kernel)") {
  FourierProjectionKernel k(unit_domain_1d(), 1);  // m = 3
  RandomStream rng(32);
  for (int rep = 0; rep < 10; ++rep) {
    MatrixXd pts(4, 1);
    for (int i = 0; i < 4; ++i) pts(i, 0) = rng.uniform(-0.5, 0.5);
    MatrixXd gram = gram_matrix(k, pts).gram;
    double det = oracle::cofactor_det(gram);
    CHECK(std::abs(det) <= 1e-6 * gram.diagonal().prod());
    CHECK(!log_det_gram(gram).has_value());
  }
}

TEST_CASE("palm kernel: conditioning zeros, trace, and residual mass") {
  Domain dom = unit_domain_1d();
  FourierProjectionKernel k(dom, 2);  // m = 5
  MatrixXd cond(2, 1);
  cond << -0.22, 0.31;
  PalmKernel palm = make_palm(k, cond);
  CHECK(palm.residual_rank() == 3);

  double trace = 0.0;
  for (int i = 0; i < 2; ++i) {
    double dcond = palm.diag(cond.row(i));
    CHECK(std::abs(dcond) < 1e-10);
    trace += dcond;
  }
  CHECK(std::abs(trace) < 1e-10);

  RandomStream rng(41);
  for (int rep = 0; rep < 50; ++rep) {
    VectorXd x = dom.sample_uniform(rng);
    CHECK(palm.diag(x) >= -1e-10);
    CHECK(palm.diag(x) <= k.diag_value() + 1e-12);
  }

  // Residual intensity integrates to m - k = 3.
  auto f = [&](double x) { return palm.diag(pt1(x)); };
  CHECK(integrate_1d(f, -0.5, 0.5, 1e-8) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("palm kernel with empty conditioning equals the base kernel") {
  Domain dom(pt1(-1.0), pt1(1.0));
  FourierProjectionKernel k(dom, 3);
  PalmKernel palm = make_palm(k, MatrixXd(0, 1));
  RandomStream rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    VectorXd x = dom.sample_uniform(rng);
    VectorXd y = dom.sample_uniform(rng);
    CHECK(palm.eval(x, y) == doctest::Approx(k.eval(x, y)).epsilon(1e-13));
  }
}

TEST_CASE("palm kernel matches a direct Schur-complement oracle") {
  Domain dom(pt2(-1.0, -1.0), pt2(1.0, 3.0));
  FourierProjectionKernel k(dom, 1);  // m = 9
  RandomStream rng(43);
  MatrixXd cond(3, 2);
  for (int i = 0; i < 3; ++i) cond.row(i) = dom.sample_uniform(rng).transpose();
  PalmKernel palm = make_palm(k, cond);
  MatrixXd kss = gram_matrix(k, cond).gram;
  MatrixXd kss_inv = kss.inverse();
  for (int rep = 0; rep < 20; ++rep) {
    VectorXd x = dom.sample_uniform(rng);
    VectorXd y = dom.sample_uniform(rng);
    VectorXd kx(3), ky(3);
    for (int i = 0; i < 3; ++i) {
      kx[i] = k.eval(x, cond.row(i));
      ky[i] = k.eval(y, cond.row(i));
    }
    double expect = k.eval(x, y) - kx.dot(kss_inv * ky);
    CHECK(palm.eval(x, y) == doctest::Approx(expect).epsilon(1e-9));
  }
  // Bulk diagonal equals pointwise diagonal.
  MatrixXd pts(40, 2);
  for (int i = 0; i < 40; ++i) pts.row(i) = dom.sample_uniform(rng).transpose();
  VectorXd bulk = palm.diag_many(pts);
  for (int i = 0; i < 40; ++i) {
    CHECK(bulk[i] == doctest::Approx(palm.diag(pts.row(i))).epsilon(1e-11));
  }
  // d=2 residual mass on a 64x64 tensor grid.
  auto f = [&](const VectorXd& x) { return palm.diag(x); };
  CHECK(integrate_tensor(f, dom, 64) == doctest::Approx(6.0).epsilon(1e-3));
}

TEST_CASE("palm construction rejects bad conditioning sets") {
  FourierProjectionKernel k(unit_domain_1d(), 1);  // m = 3
  MatrixXd four(4, 1);
  four << -0.4, -0.1, 0.2, 0.4;
  CHECK_THROWS_AS(make_palm(k, four), ConfigError);
  MatrixXd dup(2, 1);
  dup << 0.1, 0.1;
  CHECK_THROWS_AS(make_palm(k, dup), NumericalError);
}

TEST_CASE("pair correlation examples") {
  Domain dom = unit_domain_1d();
  FourierProjectionKernel k1(dom, 1);
  CHECK(pair_correlation(k1, pt1(0.2), pt1(0.2)) == doctest::Approx(0.0));
  CHECK(pair_correlation(k1, pt1(1.0 / 6), pt1(-1.0 / 6)) == doctest::Approx(1.0).epsilon(1e-12));

  FourierProjectionKernel k2(dom, 2);
  double sep = 0.05;
  double g = pair_correlation(k2, pt1(sep / 2), pt1(-sep / 2));
  CHECK(g > 0.0);
  CHECK(g < 1.0);
  double kv = direct_cosine_sum(dom, 2, pt1(sep / 2), pt1(-sep / 2));
  CHECK(g == doctest::Approx(1.0 - kv * kv / 25.0).epsilon(1e-10));
}

TEST_CASE("global repulsiveness equals one for projection kernels") {
  Domain dom(pt1(-4.0), pt1(2.0));
  FourierProjectionKernel k1(dom, 1);
  CHECK(global_repulsiveness(k1, pt1(0.7)) == doctest::Approx(1.0).epsilon(1e-6));
  FourierProjectionKernel k5(dom, 5);
  CHECK(global_repulsiveness(k5, pt1(-3.2)) == doctest::Approx(1.0).epsilon(1e-6));

  Domain dom2(pt2(0.0, 0.0), pt2(1.0, 2.0));
  FourierProjectionKernel k2(dom2, 1);
  CHECK(global_repulsiveness(k2, pt2(0.3, 1.5)) == doctest::Approx(1.0).epsilon(1e-3));

  Domain dom4(VectorXd::Zero(4), VectorXd::Ones(4));
  FourierProjectionKernel k4(dom4, 1);
  CHECK_THROWS_AS(global_repulsiveness(k4, VectorXd::Constant(4, 0.5)), ConfigError);
  RandomStream rng(51);
  IntegralEstimate est = global_repulsiveness_mc(k4, VectorXd::Constant(4, 0.5), 200000, rng);
  CHECK(std::abs(est.value - 1.0) < 5.0 * est.standard_error);
}

TEST_CASE("quadrature building blocks are sound") {
  // Exactness on a smooth oscillatory integrand.
  auto f = [](double x) { return std::cos(3.0 * x); };
  CHECK(integrate_1d(f, 0.0, 2.0, 1e-12) == doctest::Approx(std::sin(6.0) / 3.0).epsilon(1e-12));
  Domain dom(pt2(0.0, 0.0), pt2(1.0, 1.0));
  auto g = [](const VectorXd& p) { return p[0] * p[0] + p[1]; };
  CHECK(integrate_tensor(g, dom, 16) == doctest::Approx(1.0 / 3 + 0.5).epsilon(1e-12));
  RandomStream rng(52);
  IntegralEstimate est = integrate_mc(g, dom, 100000, rng);
  CHECK(std::abs(est.value - (1.0 / 3 + 0.5)) < 5.0 * est.standard_error);
}
