#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "frugaljudge/logistic.hpp"
#include "frugaljudge/rng.hpp"
#include "test_util.hpp"

using namespace frugal;
using namespace testutil;

namespace {

DesignMatrix make_design(const std::vector<std::vector<double>>& rows,
                         const std::vector<int>& labels) {
  DesignMatrix d;
  d.n = rows.size();
  d.p = rows.empty() ? 0 : rows[0].size();
  for (std::size_t j = 0; j < d.p; ++j) d.column_names.push_back("x" + std::to_string(j + 1));
  for (const auto& r : rows) d.values.insert(d.values.end(), r.begin(), r.end());
  d.labels = labels;
  return d;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Random design with integer scores 1..5 and labels from a known beta.
DesignMatrix simulate_design(std::size_t n, const std::vector<double>& beta_true,
                             uint64_t seed) {
  const std::size_t p = beta_true.size() - 1;
  Rng rng(seed);
  std::vector<std::vector<double>> rows(n, std::vector<double>(p));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = beta_true.back();
    for (std::size_t j = 0; j < p; ++j) {
      rows[i][j] = 1.0 + static_cast<double>(rng.bounded(5));
      eta += beta_true[j] * rows[i][j];
    }
    labels[i] = rng.unit() < sigmoid(eta) ? 1 : 0;
  }
  return make_design(rows, labels);
}

}  // namespace

TEST_CASE("intercept-only fit recovers the log odds in closed form") {
  std::vector<int> labels(10, 0);
  for (int i = 0; i < 6; ++i) labels[i] = 1;
  DesignMatrix d = make_design(std::vector<std::vector<double>>(10), labels);
  d.p = 0;
  d.column_names.clear();
  const LogisticModel m = fit_logistic(d);
  REQUIRE(m.coefficients.size() == 1);
  CHECK(m.coefficients[0] == doctest::Approx(std::log(0.6 / 0.4)).epsilon(1e-10));
  for (double p : m.fitted_probs) CHECK(p == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(m.diagnostics.mcfadden == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("known coefficients are recovered within their confidence intervals") {
  const std::vector<double> beta_true{0.45, -0.35, 0.25, 0.0, -1.2};  // incl. intercept
  int inside = 0, total = 0;
  for (uint64_t seed = 1; seed <= 2; ++seed) {
    const DesignMatrix d = simulate_design(2000, beta_true, seed);
    const LogisticModel m = fit_logistic(d);
    REQUIRE_FALSE(m.separated);
    const auto grad = log_likelihood_gradient(d, m.coefficients);
    for (double g : grad) CHECK(std::abs(g) < 1e-8);
    for (std::size_t j = 0; j < beta_true.size(); ++j) {
      ++total;
      if (beta_true[j] >= m.diagnostics.ci_lower[j] &&
          beta_true[j] <= m.diagnostics.ci_upper[j]) {
        ++inside;
      }
    }
  }
  CHECK(inside >= total - 1);  // ~95% coverage on 10 draws
}

TEST_CASE("standard errors match the finite-difference Hessian") {
  const DesignMatrix d = simulate_design(60, {0.8, -0.5, 0.2}, 5);
  const LogisticModel m = fit_logistic(d);
  REQUIRE_FALSE(m.separated);
  const std::size_t k = m.coefficients.size();

  // Observed information by central second differences of the log-likelihood.
  const double h = 1e-4;
  std::vector<std::vector<double>> H(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      auto ll_at = [&](double da, double db) {
        std::vector<double> beta = m.coefficients;
        beta[a] += da;
        beta[b] += db;
        return log_likelihood(d, beta);
      };
      H[a][b] = -(ll_at(h, h) - ll_at(h, -h) - ll_at(-h, h) + ll_at(-h, -h)) / (4 * h * h);
    }
  }
  // Invert by Gauss-Jordan.
  std::vector<std::vector<double>> inv(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(H[r][col]) > std::abs(H[pivot][col])) pivot = r;
    }
    std::swap(H[col], H[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double pv = H[col][col];
    for (std::size_t c = 0; c < k; ++c) {
      H[col][c] /= pv;
      inv[col][c] /= pv;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = H[r][col];
      for (std::size_t c = 0; c < k; ++c) {
        H[r][c] -= f * H[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    CHECK(m.diagnostics.se[j] == doctest::Approx(std::sqrt(inv[j][j])).epsilon(1e-4));
  }
}

TEST_CASE("wald inference basics") {
  // coefficient 0 with SE 1 -> p = 1; coefficient 1.96 with SE 1 -> p ~= .05,
  // CI ~= (0, 3.92)
  CHECK(std::erfc(0.0) == doctest::Approx(1.0));
  CHECK(std::erfc(1.96 / std::sqrt(2.0)) == doctest::Approx(0.05).epsilon(1e-2));
  CHECK(1.96 - 1.96 * 1.0 == doctest::Approx(0.0));
  CHECK(1.96 + 1.96 * 1.0 == doctest::Approx(3.92));

  const DesignMatrix d = simulate_design(400, {0.9, 0.0, -1.8}, 9);
  const LogisticModel m = fit_logistic(d);
  for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
    CHECK(m.diagnostics.ci_lower[j] ==
          doctest::Approx(m.coefficients[j] - 1.96 * m.diagnostics.se[j]).epsilon(1e-12));
    CHECK(m.diagnostics.ci_upper[j] ==
          doctest::Approx(m.coefficients[j] + 1.96 * m.diagnostics.se[j]).epsilon(1e-12));
    const double z = std::abs(m.coefficients[j] / m.diagnostics.se[j]);
    CHECK(m.diagnostics.p_values[j] == doctest::Approx(std::erfc(z / std::sqrt(2.0))));
  }
}

TEST_CASE("orthogonal predictors have VIF 1") {
  const DesignMatrix d = make_design({{1, 1}, {1, 0}, {0, 1}, {0, 0}}, {1, 0, 1, 0});
  const auto v = vif(d);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a duplicated column reports infinite VIF") {
  const DesignMatrix d =
      make_design({{1, 1, 2}, {2, 2, 1}, {3, 3, 5}, {4, 4, 2}, {5, 5, 4}}, {0, 1, 0, 1, 1});
  const auto v = vif(d);
  CHECK(std::isinf(v[0]));
  CHECK(std::isinf(v[1]));
  CHECK(std::isfinite(v[2]));
}

TEST_CASE("VIF matches the auxiliary regression definition") {
  const DesignMatrix d = simulate_design(80, {0.3, -0.2, 0.5, 0.1}, 31);
  const auto v = vif(d);
  // Brute-force R^2 via the normal equations on centered data.
  for (std::size_t j = 0; j < d.p; ++j) {
    const std::size_t q = d.p;  // aux predictors incl. intercept
    std::vector<std::vector<double>> XtX(q, std::vector<double>(q, 0.0));
    std::vector<double> Xty(q, 0.0);
    auto aux = [&](std::size_t row, std::size_t col) {
      if (col + 1 == q) return 1.0;  // intercept
      std::size_t m = col < j ? col : col + 1;
      return d.at(row, m);
    };
    for (std::size_t i = 0; i < d.n; ++i) {
      for (std::size_t a = 0; a < q; ++a) {
        Xty[a] += aux(i, a) * d.at(i, j);
        for (std::size_t b = 0; b < q; ++b) XtX[a][b] += aux(i, a) * aux(i, b);
      }
    }
    // Solve XtX c = Xty by Gaussian elimination.
    for (std::size_t col = 0; col < q; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < q; ++r) {
        if (std::abs(XtX[r][col]) > std::abs(XtX[pivot][col])) pivot = r;
      }
      std::swap(XtX[col], XtX[pivot]);
      std::swap(Xty[col], Xty[pivot]);
      for (std::size_t r = 0; r < q; ++r) {
        if (r == col) continue;
        const double f = XtX[r][col] / XtX[col][col];
        for (std::size_t c = 0; c < q; ++c) XtX[r][c] -= f * XtX[col][c];
        Xty[r] -= f * Xty[col];
      }
    }
    std::vector<double> coef(q);
    for (std::size_t a = 0; a < q; ++a) coef[a] = Xty[a] / XtX[a][a];
    double mean = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) mean += d.at(i, j);
    mean /= d.n;
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      double fit = 0.0;
      for (std::size_t a = 0; a < q; ++a) fit += coef[a] * aux(i, a);
      sse += (d.at(i, j) - fit) * (d.at(i, j) - fit);
      sst += (d.at(i, j) - mean) * (d.at(i, j) - mean);
    }
    const double want = 1.0 / (1.0 - (1.0 - sse / sst));
    CHECK(v[j] == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("pseudo-R2 matches hand computation") {
  const DesignMatrix d = simulate_design(120, {0.7, -0.4, 0.9}, 13);
  const LogisticModel m = fit_logistic(d);
  const PseudoR2 r2 = pseudo_r2(m);

  const double lnl = m.diagnostics.log_likelihood;
  const double lnl0 = m.diagnostics.null_log_likelihood;
  const double n = static_cast<double>(d.n);
  CHECK(r2.mcfadden == doctest::Approx(1.0 - lnl / lnl0).epsilon(1e-12));

  double mean = 0.0;
  for (double e : m.linear_pred) mean += e;
  mean /= n;
  double ss = 0.0;
  for (double e : m.linear_pred) ss += (e - mean) * (e - mean);
  const double var = ss / (n - 1.0);
  const double pi = 3.14159265358979323846;
  CHECK(r2.mckelvey_zavoina == doctest::Approx(var / (var + pi * pi / 3.0)).epsilon(1e-12));

  const double lr = 2.0 * (lnl - lnl0);
  const double r_an = lr / (lr + n);
  const double r_an_max = -2.0 * lnl0 / (n - 2.0 * lnl0);
  CHECK(r2.veall_zimmermann == doctest::Approx(r_an / r_an_max).epsilon(1e-12));

  CHECK(r2.mcfadden >= 0.0);
  CHECK(r2.mcfadden <= 1.0);
  CHECK(r2.mckelvey_zavoina >= 0.0);
  CHECK(r2.mckelvey_zavoina <= 1.0);
  CHECK(r2.veall_zimmermann >= 0.0);
  CHECK(r2.veall_zimmermann <= 1.0);
}

TEST_CASE("optimal cutoff separates perfectly separable probabilities") {
  const std::vector<double> probs{0.1, 0.2, 0.8, 0.9};
  const std::vector<JudgmentClass> labels{
      JudgmentClass::NotOutstanding, JudgmentClass::NotOutstanding,
      JudgmentClass::Outstanding, JudgmentClass::Outstanding};
  const double c = optimal_cutoff(probs, labels);
  CHECK(c == doctest::Approx(0.8));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    CHECK((probs[i] >= c) == (labels[i] == JudgmentClass::Outstanding));
  }
}

TEST_CASE("equal probabilities classify everything as the majority class") {
  const std::vector<double> probs(5, 0.5);
  SUBCASE("majority negative") {
    const std::vector<JudgmentClass> labels{
        JudgmentClass::NotOutstanding, JudgmentClass::NotOutstanding,
        JudgmentClass::NotOutstanding, JudgmentClass::Outstanding,
        JudgmentClass::Outstanding};
    const double c = optimal_cutoff(probs, labels);
    CHECK(0.5 < c);  // everything below the cutoff -> all NotOutstanding
  }
  SUBCASE("majority positive") {
    const std::vector<JudgmentClass> labels{
        JudgmentClass::Outstanding, JudgmentClass::Outstanding, JudgmentClass::Outstanding,
        JudgmentClass::NotOutstanding, JudgmentClass::NotOutstanding};
    const double c = optimal_cutoff(probs, labels);
    CHECK(c == doctest::Approx(0.5));  // everything at/above -> all Outstanding
  }
}

TEST_CASE("optimal cutoff matches exhaustive interval search") {
  Rng rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> probs(15);
    std::vector<JudgmentClass> labels(15);
    for (int i = 0; i < 15; ++i) {
      probs[i] = std::round(rng.unit() * 10.0) / 10.0;  // coarse grid forces ties
      labels[i] = rng.unit() < 0.5 ? JudgmentClass::Outstanding
                                   : JudgmentClass::NotOutstanding;
    }
    labels[0] = JudgmentClass::Outstanding;
    labels[1] = JudgmentClass::NotOutstanding;

    auto misclass = [&](double c) {
      long e = 0;
      for (int i = 0; i < 15; ++i) {
        if ((probs[i] >= c) != (labels[i] == JudgmentClass::Outstanding)) ++e;
      }
      return e;
    };
    // All 2n+1 intervals: below min, at each point, between points, above max.
    std::vector<double> sorted = probs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    long best = misclass(sorted.front() - 0.05);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      best = std::min(best, misclass(sorted[i]));
      const double above =
          i + 1 < sorted.size() ? (sorted[i] + sorted[i + 1]) / 2 : sorted[i] + 0.05;
      best = std::min(best, misclass(above));
    }

    const double c = optimal_cutoff(probs, labels);
    CHECK(misclass(c) == best);
    // Lowest-cutoff tie rule: no unique probability below c does as well.
    for (double p : sorted) {
      if (p < c) CHECK(misclass(p) > best);
    }
  }
}

TEST_CASE("classification boundary: probability equal to the cutoff is Outstanding") {
  LogisticModel m;
  m.column_names = {"x1"};
  m.coefficients = {1.0, 0.0};  // eta = x
  m.cutoff = sigmoid(2.0);
  CHECK(classify(m, {2.0}) == JudgmentClass::Outstanding);
  CHECK(classify(m, {1.999}) == JudgmentClass::NotOutstanding);
  m.coefficients = {0.0, -800.0};  // prob underflows to 0
  CHECK(predict_prob(m, {3.0}) == 0.0);
  CHECK(classify(m, {3.0}) == JudgmentClass::NotOutstanding);
}

TEST_CASE("golden model fixture classifies stably") {
  std::ifstream in(std::string(FJ_FIXTURES_DIR) + "/model_golden.json", std::ios::binary);
  REQUIRE(in.good());
  std::string json((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const LogisticModel m = model_from_json(json);
  REQUIRE(m.column_names.size() == 13);
  const std::vector<double> strong{5, 5, 5, 6, 1, 5, 5, 5, 5, 5, 1, 5, 5};
  const std::vector<double> weak{2, 2, 2, 2, 0, 3, 3, 2, 2, 2, 0, 3, 3};
  CHECK(classify(m, strong) == JudgmentClass::Outstanding);
  CHECK(classify(m, weak) == JudgmentClass::NotOutstanding);
}

TEST_CASE("reduced model on all cues reproduces the full fit") {
  const DesignMatrix d = simulate_design(150, {0.5, -0.3, 0.8, -1.0}, 17);
  const LogisticModel full = fit_logistic(d);
  const LogisticModel red = reduced_model(d, d.column_names);
  REQUIRE(red.coefficients.size() == full.coefficients.size());
  for (std::size_t j = 0; j < full.coefficients.size(); ++j) {
    CHECK(red.coefficients[j] == doctest::Approx(full.coefficients[j]).epsilon(1e-12));
  }
  CHECK(red.diagnostics.aic == doctest::Approx(full.diagnostics.aic).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
  const DesignMatrix d = simulate_design(40, {0.4, -0.6, 0.2}, 23);
  Rng rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> beta(d.p + 1);
    for (double& b : beta) b = rng.normal() * 0.5;
    const auto grad = log_likelihood_gradient(d, beta);
    const double h = 1e-6;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      std::vector<double> up = beta, down = beta;
      up[j] += h;
      down[j] -= h;
      const double fd = (log_likelihood(d, up) - log_likelihood(d, down)) / (2 * h);
      CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("log-likelihood never decreases across IRLS iterations") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const DesignMatrix d = simulate_design(100, {0.6, -0.8, 0.3, 0.1}, 70 + seed);
    const LogisticModel m = fit_logistic(d);
    for (std::size_t i = 1; i < m.loglik_path.size(); ++i) {
      CHECK(m.loglik_path[i] >= m.loglik_path[i - 1] - 1e-12);
    }
  }
}

TEST_CASE("score equation: residuals sum to zero with an intercept") {
  const DesignMatrix d = simulate_design(200, {0.5, 0.4, -0.7}, 29);
  const LogisticModel m = fit_logistic(d);
  double sum = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) sum += m.fitted_probs[i] - d.labels[i];
  CHECK(std::abs(sum) < 1e-8);
}

TEST_CASE("adding a predictor never decreases the log-likelihood") {
  const DesignMatrix d = simulate_design(80, {0.5, -0.4, 0.3}, 37);
  const LogisticModel full = fit_logistic(d);
  const LogisticModel sub = reduced_model(d, {"x1", "x2"});
  CHECK(full.diagnostics.log_likelihood >= sub.diagnostics.log_likelihood - 1e-9);
  const LogisticModel sub1 = reduced_model(d, {"x1"});
  CHECK(sub.diagnostics.log_likelihood >= sub1.diagnostics.log_likelihood - 1e-9);
}

TEST_CASE("training accuracy with the fitted cutoff beats the majority share") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const DesignMatrix d = simulate_design(90, {0.3, -0.2, 0.4}, 400 + seed);
    const LogisticModel m = fit_logistic(d);
    long correct = 0, positives = 0;
    for (std::size_t i = 0; i < d.n; ++i) {
      positives += d.labels[i];
      const bool pred = m.fitted_probs[i] >= m.cutoff;
      if (pred == (d.labels[i] == 1)) ++correct;
    }
    const double majority =
        std::max(positives, static_cast<long>(d.n) - positives) / static_cast<double>(d.n);
    CHECK(static_cast<double>(correct) / d.n >= majority - 1e-12);
  }
}

TEST_CASE("monotone transforms leave the induced classification unchanged") {
  Rng rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> probs(20);
    std::vector<JudgmentClass> labels(20);
    for (int i = 0; i < 20; ++i) {
      probs[i] = 0.05 + 0.9 * rng.unit();
      labels[i] = rng.unit() < 0.4 ? JudgmentClass::Outstanding
                                   : JudgmentClass::NotOutstanding;
    }
    labels[0] = JudgmentClass::Outstanding;
    labels[1] = JudgmentClass::NotOutstanding;
    std::vector<double> squared = probs;
    for (double& p : squared) p = p * p;  // strictly increasing on (0,1)

    const double c1 = optimal_cutoff(probs, labels);
    const double c2 = optimal_cutoff(squared, labels);
    for (int i = 0; i < 20; ++i) {
      CHECK((probs[i] >= c1) == (squared[i] >= c2));
    }
  }
}

TEST_CASE("perfect separation is flagged and inference suppressed") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    const bool pos = i % 2 == 0;
    rows.push_back({pos ? 5.0 : 1.0, static_cast<double>(i % 4)});
    labels.push_back(pos ? 1 : 0);
  }
  const LogisticModel m = fit_logistic(make_design(rows, labels));
  CHECK(m.separated);
  CHECK(m.diagnostics.se.empty());
  CHECK_FALSE(m.warnings.empty());
}

TEST_CASE("perfectly collinear designs are rejected naming the columns") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    const double a = 1.0 + i % 5;
    rows.push_back({a, 2.0 * a, static_cast<double>(i % 3)});
    labels.push_back((i * 7 % 10) < 5 ? 1 : 0);
  }
  try {
    fit_logistic(make_design(rows, labels));
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("dependent columns") != std::string::npos);
  }
}

TEST_CASE("single-class labels are rejected") {
  const DesignMatrix d = make_design({{1}, {2}, {3}}, {1, 1, 1});
  CHECK_THROWS_AS(fit_logistic(d), ValidationError);
}

TEST_CASE("model JSON round-trips coefficients and cutoff") {
  const DesignMatrix d = simulate_design(60, {0.4, -0.3, 0.6}, 47);
  const LogisticModel m = fit_logistic(d);
  const LogisticModel back = model_from_json(model_to_json(m));
  CHECK(back.column_names == m.column_names);
  CHECK(back.cutoff == m.cutoff);
  REQUIRE(back.coefficients.size() == m.coefficients.size());
  for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
    CHECK(back.coefficients[j] == m.coefficients[j]);
  }
  CHECK(back.diagnostics.aic == m.diagnostics.aic);
}
