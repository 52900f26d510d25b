#include <doctest.h>

#include <cmath>
#include <map>

#include "mllab/errors.hpp"
#include "mllab/regression.hpp"
#include "mllab/rng.hpp"

using namespace mllab;

namespace {

/// Minimal long panel builder for synthetic regression checks.
LongPanel make_panel(const std::vector<int>& subject, const std::vector<int>& round,
                     const std::map<std::string, std::vector<double>>& cols) {
  LongPanel p;
  p.subject = subject;
  p.round = round;
  for (const auto& [name, v] : cols) {
    Eigen::VectorXd col(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) col[i] = v[i];
    p.columns[name] = col;
  }
  return p;
}

}  // namespace

TEST_CASE("ols: exact fit on noiseless data") {
  Rng rng(3);
  int n = 60;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = rng.uniform(-2, 2);
    X(i, 1) = rng.uniform(-1, 3);
    y[i] = 0.7 + 1.5 * X(i, 0) - 2.25 * X(i, 1);
  }
  RegressionResult res = ols(y, X, {"x1", "x2"}, true);
  CHECK(res.coef[0] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(res.coef[1] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(res.coef[2] == doctest::Approx(-2.25).epsilon(1e-10));
  CHECK(res.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ols: the two-point line") {
  Eigen::MatrixXd X(2, 1);
  X << 0.0, 1.0;
  Eigen::VectorXd y(2);
  y << 1.0, 3.0;
  RegressionResult res = ols(y, X, {"x"}, true);
  CHECK(res.coef[0] == doctest::Approx(1.0));
  CHECK(res.coef[1] == doctest::Approx(2.0));
}

TEST_CASE("ols: residuals orthogonal to the design") {
  Rng rng(44);
  int n = 200;
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = rng.normal();
    y[i] = 1.0 - X(i, 0) + 0.5 * X(i, 2) + rng.normal();
  }
  RegressionResult res = ols(y, X, {"a", "b", "c"}, true);
  for (int j = 0; j < 3; ++j) {
    double dot = std::fabs(X.col(j).dot(res.residuals));
    CHECK(dot < 1e-8 * X.col(j).norm() * (res.residuals.norm() + 1.0));
  }
  CHECK(std::fabs(res.residuals.sum()) < 1e-8);
}

TEST_CASE("ols: rank-deficient designs are rejected") {
  Eigen::MatrixXd X(5, 2);
  for (int i = 0; i < 5; ++i) {
    X(i, 0) = i;
    X(i, 1) = 2.0 * i;  // collinear
  }
  Eigen::VectorXd y = Eigen::VectorXd::Ones(5);
  CHECK_THROWS_AS(ols(y, X, {"x", "2x"}, true), SingularDesignError);
}

TEST_CASE("ols: recovers a table-2-shaped group difference across reps") {
  // DGP: phi = 0.75 - 0.44*over + noise. Monte Carlo mean within 2 MC SEs.
  Rng rng(1001);
  int reps = 400, n = 189;
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      double over = rng.bernoulli(0.79) ? 1.0 : 0.0;
      double male = rng.bernoulli(0.53) ? 1.0 : 0.0;
      double age = rng.uniform(18, 70);
      X(i, 0) = over;
      X(i, 1) = male;
      X(i, 2) = age;
      y[i] = 0.75 - 0.44 * over + 0.001 * age + rng.normal(0.0, 0.25);
    }
    RegressionResult res = ols(y, X, {"over", "male", "age"}, true);
    sum += res.coef[1];
    sum2 += res.coef[1] * res.coef[1];
  }
  double mean = sum / reps;
  double sd = std::sqrt((sum2 - reps * mean * mean) / (reps - 1));
  CHECK(std::fabs(mean - (-0.44)) < 2.0 * sd / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("within FE: zero slope when the outcome is subject-constant") {
  std::vector<int> subject, round;
  std::vector<double> y, x;
  Rng rng(9);
  for (int s = 1; s <= 20; ++s) {
    double level = rng.uniform(0, 5);
    for (int t = 1; t <= 4; ++t) {
      subject.push_back(s);
      round.push_back(t);
      y.push_back(level);
      x.push_back(t);
    }
  }
  LongPanel panel = make_panel(subject, round, {{"y", y}, {"round", x}});
  RegressionResult fe = within_fe(panel, "y", {"round"});
  CHECK(std::fabs(fe.coef[0]) < 1e-12);
}

TEST_CASE("within FE absorbs subject-constant regressors and drops singletons") {
  std::vector<int> subject, round;
  std::vector<double> y, x, constant;
  Rng rng(10);
  for (int s = 1; s <= 12; ++s) {
    double level = rng.uniform(0, 2);
    int rounds = s == 1 ? 1 : 4;  // subject 1 is a singleton
    for (int t = 1; t <= rounds; ++t) {
      subject.push_back(s);
      round.push_back(t);
      y.push_back(level + 0.3 * t + rng.normal(0, 0.1));
      x.push_back(t);
      constant.push_back(s % 2);
    }
  }
  LongPanel panel = make_panel(subject, round,
                               {{"y", y}, {"round", x}, {"group", constant}});
  RegressionResult fe = within_fe(panel, "y", {"round", "group"});
  CHECK(fe.dropped_subjects == 1);
  REQUIRE(fe.dropped_terms.size() == 1);
  CHECK(fe.dropped_terms[0] == "group");
  CHECK(fe.index_of("round") >= 0);
  CHECK(fe.coef[fe.index_of("round")] == doctest::Approx(0.3).epsilon(0.15));

  // Estimates are invariant to the absorbed column.
  RegressionResult fe2 = within_fe(panel, "y", {"round"});
  CHECK(fe.coef[fe.index_of("round")] ==
        doctest::Approx(fe2.coef[fe2.index_of("round")]).epsilon(1e-12));
}

TEST_CASE("FE round coefficient stays quiet under a driftless DGP") {
  Rng rng(606);
  int rejections = 0, reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<int> subject, round;
    std::vector<double> y, x;
    for (int s = 1; s <= 60; ++s) {
      double alpha = rng.normal(3.9, 1.0);
      for (int t = 1; t <= 5; ++t) {
        subject.push_back(s);
        round.push_back(t);
        y.push_back(alpha + rng.normal(0.0, 1.0));
        x.push_back(t);
      }
    }
    LongPanel panel = make_panel(subject, round, {{"y", y}, {"round", x}});
    RegressionResult fe = within_fe(panel, "y", {"round"});
    if (fe.p_value[fe.index_of("round")] < 0.05) ++rejections;
  }
  CHECK(rejections <= 10);  // ~5% nominal; the suite requires >= 90% quiet
}

TEST_CASE("random effects recover a table-3-shaped interaction") {
  // DGP: effort = 340 + alpha_i - 33*round - 14*round*over + noise.
  Rng rng(8181);
  int reps = 60;
  double sum_round = 0.0, sum_inter = 0.0, sum2_round = 0.0, sum2_inter = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<int> subject, round;
    std::vector<double> y, rd, over_col, inter;
    for (int s = 1; s <= 189; ++s) {
      bool over = rng.bernoulli(0.79);
      double alpha = rng.normal(0.0, 40.0);
      for (int t = 1; t <= 5; ++t) {
        subject.push_back(s);
        round.push_back(t);
        double eps = rng.normal(0.0, 35.0);
        y.push_back(340.0 + alpha - 33.0 * t - 14.0 * t * (over ? 1.0 : 0.0) + eps);
        rd.push_back(t);
        over_col.push_back(over ? 1.0 : 0.0);
        inter.push_back(t * (over ? 1.0 : 0.0));
      }
    }
    LongPanel panel = make_panel(
        subject, round,
        {{"effort", y}, {"round", rd}, {"over", over_col}, {"round_x_over", inter}});
    RegressionResult re =
        random_effects(panel, "effort", {"round", "over", "round_x_over"});
    double b_round = re.coef[re.index_of("round")];
    double b_inter = re.coef[re.index_of("round_x_over")];
    sum_round += b_round;
    sum2_round += b_round * b_round;
    sum_inter += b_inter;
    sum2_inter += b_inter * b_inter;
  }
  double mean_round = sum_round / reps;
  double sd_round = std::sqrt((sum2_round - reps * mean_round * mean_round) / (reps - 1));
  double mean_inter = sum_inter / reps;
  double sd_inter = std::sqrt((sum2_inter - reps * mean_inter * mean_inter) / (reps - 1));
  CHECK(std::fabs(mean_round - (-33.0)) <
        2.0 * sd_round / std::sqrt(static_cast<double>(reps)));
  CHECK(std::fabs(mean_inter - (-14.0)) <
        2.0 * sd_inter / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("hausman: identical fits give a zero statistic") {
  RegressionResult fe, re;
  fe.names = {"x"};
  fe.coef = Eigen::VectorXd::Constant(1, 2.0);
  fe.vcov = Eigen::MatrixXd::Constant(1, 1, 0.04);
  re.names = {"(intercept)", "x"};
  re.coef = Eigen::VectorXd(2);
  re.coef << 1.0, 2.0;
  re.vcov = Eigen::MatrixXd::Zero(2, 2);
  re.vcov(1, 1) = 0.02;
  HausmanResult h = hausman(fe, re);
  CHECK(h.statistic == doctest::Approx(0.0));
  CHECK(h.p_value == doctest::Approx(1.0));
}

TEST_CASE("hausman: rejection rate near nominal under an RE-consistent DGP") {
  Rng rng(515);
  int reps = 200, rejections = 0;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<int> subject, round;
    std::vector<double> y, x_col;
    for (int s = 1; s <= 80; ++s) {
      double alpha = rng.normal(0.0, 1.0);
      for (int t = 1; t <= 5; ++t) {
        double x = rng.normal(0.0, 1.0);  // independent of alpha
        subject.push_back(s);
        round.push_back(t);
        x_col.push_back(x);
        y.push_back(1.0 + 0.5 * x + alpha + rng.normal(0.0, 1.0));
      }
    }
    LongPanel panel = make_panel(subject, round, {{"y", y}, {"x", x_col}});
    RegressionResult fe = within_fe(panel, "y", {"x"});
    RegressionResult re = random_effects(panel, "y", {"x"});
    if (hausman(fe, re).p_value < 0.05) ++rejections;
  }
  double rate = static_cast<double>(rejections) / reps;
  CHECK(rate <= 0.05 + 0.03);  // nominal 5% within 3pp, inclusive
}

TEST_CASE("hausman: power against correlated effects") {
  Rng rng(9191);
  int reps = 200, rejections = 0;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<int> subject, round;
    std::vector<double> y, x_col;
    for (int s = 1; s <= 80; ++s) {
      double alpha = rng.normal(0.0, 1.0);
      for (int t = 1; t <= 5; ++t) {
        double x = rng.normal(0.0, 1.0) + alpha;  // regressor carries the effect
        subject.push_back(s);
        round.push_back(t);
        x_col.push_back(x);
        y.push_back(1.0 + 0.5 * x + alpha + rng.normal(0.0, 1.0));
      }
    }
    LongPanel panel = make_panel(subject, round, {{"y", y}, {"x", x_col}});
    RegressionResult fe = within_fe(panel, "y", {"x"});
    RegressionResult re = random_effects(panel, "y", {"x"});
    if (hausman(fe, re).p_value < 0.05) ++rejections;
  }
  CHECK(rejections > 160);  // > 80% power
}

TEST_CASE("paired t: identical vectors degenerate, textbook example verifies") {
  std::vector<double> a{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(paired_t_one_sided(a, a, Alternative::Greater),
                  DegenerateTestError);

  std::vector<double> before{0.0, 0.0, 0.0};
  std::vector<double> after{1.0, 2.0, 3.0};
  TTestResult t = paired_t_one_sided(before, after, Alternative::Greater);
  CHECK(t.mean_difference == doctest::Approx(2.0));
  CHECK(t.t_stat == doctest::Approx(3.4641016).epsilon(1e-6));
  CHECK(t.df == 2);
  CHECK(t.p_value == doctest::Approx(0.0370900).epsilon(1e-4));
}

TEST_CASE("paired t is antisymmetric under swapping order and direction") {
  Rng rng(123);
  std::vector<double> x(20), y(20);
  for (int i = 0; i < 20; ++i) {
    x[i] = rng.normal(0.0, 1.0);
    y[i] = rng.normal(0.2, 1.0);
  }
  TTestResult forward = paired_t_one_sided(x, y, Alternative::Greater);
  TTestResult backward = paired_t_one_sided(y, x, Alternative::Less);
  CHECK(forward.p_value == doctest::Approx(backward.p_value).epsilon(1e-12));
}

TEST_CASE("variance target: all three modes") {
  std::vector<int> subject{1, 2, 1, 2};
  std::vector<int> round{1, 1, 2, 2};
  std::vector<double> phi{0.2, 0.6, 0.5, 0.5};
  LongPanel panel = make_panel(subject, round, {{"phi_hat", phi}});

  Eigen::VectorXd sq =
      variance_target(panel, "phi_hat", VarianceMode::SqDevFromRoundMean);
  CHECK(sq[0] == doctest::Approx(0.04));
  CHECK(sq[1] == doctest::Approx(0.04));
  CHECK(sq[2] == doctest::Approx(0.0));
  CHECK(sq[3] == doctest::Approx(0.0));

  Eigen::VectorXd ab =
      variance_target(panel, "phi_hat", VarianceMode::AbsDevFromRoundMean);
  CHECK(ab[0] == doctest::Approx(0.2));

  Eigen::VectorXd truth =
      variance_target(panel, "phi_hat", VarianceMode::SqDevFromTruth, 0.5);
  CHECK(truth[0] == doctest::Approx(0.09));
  CHECK(truth[1] == doctest::Approx(0.01));
  CHECK(truth[2] == doctest::Approx(0.0));
}
