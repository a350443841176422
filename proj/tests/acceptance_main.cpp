// Acceptance suite: one check per guarantee the library promises, each run at
// its stated tolerance on freshly generated instances. Prints one line per
// check and exits nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli/commands.hpp"
#include "cli/csv.hpp"
#include "richcore/adversarial.hpp"
#include "richcore/linalg.hpp"
#include "richcore/solvers.hpp"
#include "test_util.hpp"

using namespace richcore;
using richcore::testutil::random_instance;
using richcore::testutil::random_multi_instance;
using richcore::testutil::random_rank_k;

namespace {

struct Check {
  std::string name;
  std::function<bool(std::string&)> run;
};

bool expect(bool ok, std::string& detail, const std::string& message) {
  if (!ok && detail.empty()) detail = message;
  return ok;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---- 1. single-set selection keeps every singular value in its interval ----

bool check_single_set_interval(std::string& detail) {
  Rng rng(1001);
  const std::vector<std::pair<Index, Index>> shapes = {{100, 3}, {200, 5}, {400, 8}};
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto [n, ell] = shapes[static_cast<std::size_t>(trial % 3)];
    const Matrix U = random_orthonormal(rng, n, ell);
    for (const Index r : {2 * ell + 1, 4 * ell, 9 * ell}) {
      const CoresetOperator op = single_set_spectral(U, r);
      ok &= expect(op.size() <= r, detail, "more picks than requested");
      const Vector sv = thin_svd(apply(op, U)).sigma;
      const double lo = single_set_lower_factor(ell, r);
      const double hi = single_set_upper_factor(ell, r);
      ok &= expect(sv(0) <= hi + 1e-9 && sv(sv.size() - 1) >= lo - 1e-9, detail,
                   "singular value outside [" + fmt(lo) + ", " + fmt(hi) + "]: [" +
                       fmt(sv(sv.size() - 1)) + ", " + fmt(sv(0)) + "]");
      if (!ok) return false;
    }
  }
  return ok;
}

// ---- 2. simple-regression ratio under the closed-form guarantee ----

bool check_simple_regression_ratio(std::string& detail) {
  bool ok = true;
  ok &= expect(std::abs(simple_coreset_bound(1, 8) - 9.0) < 1e-9, detail,
               "closed form at (k=1, r=8) is not 9");
  ok &= expect(std::abs(simple_coreset_bound(3, 400) - 484.0 / 324.0) < 1e-9, detail,
               "closed form at (k=3, r=400) is not 484/324");

  Rng rng(1002);
  const Index rs[3] = {20, 50, 100};
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const RegressionInstance inst = random_instance(rng, 300, 6, 6);
    const Index r = rs[trial % 3];
    const CoresetBundle bundle = simple_coreset(inst, r);
    const auto domain = ConstraintDomain::unconstrained();
    const Vector x_opt = domain.solve(inst.A, inst.b);
    const Vector x_tilde = solve_on_coreset(bundle.op, inst, domain);
    const SolveReport rep = evaluate(inst, bundle.op, x_opt, x_tilde, bundle.predicted_bound);
    ok &= expect(rep.achieved_ratio >= 1.0 - 1e-9, detail,
                 "unconstrained ratio below 1: " + fmt(rep.achieved_ratio));
    ok &= expect(rep.achieved_ratio <= bundle.predicted_bound + 1e-6, detail,
                 "unconstrained ratio " + fmt(rep.achieved_ratio) + " above bound " +
                     fmt(bundle.predicted_bound));
  }
  for (int trial = 0; trial < 20 && ok; ++trial) {
    // Mostly nonnegative ground truth keeps the constrained fit informative.
    const Matrix A = random_rank_k(rng, 300, 6, 6);
    Vector truth(6);
    for (Index i = 0; i < 6; ++i) truth(i) = std::abs(rng.gaussian());
    Vector b = A * truth;
    for (Index i = 0; i < b.size(); ++i) b(i) += 0.3 * rng.gaussian();
    const RegressionInstance inst(A, b);
    const Index r = rs[trial % 3];
    const CoresetBundle bundle = simple_coreset(inst, r);
    const auto domain = ConstraintDomain::nonnegative();
    const Vector x_opt = domain.solve(inst.A, inst.b);
    const Vector x_tilde = solve_on_coreset(bundle.op, inst, domain);
    const SolveReport rep = evaluate(inst, bundle.op, x_opt, x_tilde, bundle.predicted_bound);
    ok &= expect(x_tilde.minCoeff() >= 0.0, detail, "constrained solution infeasible");
    ok &= expect(rep.achieved_ratio >= 1.0 - 1e-9 &&
                     rep.achieved_ratio <= bundle.predicted_bound + 1e-6,
                 detail,
                 "constrained ratio " + fmt(rep.achieved_ratio) + " outside [1, " +
                     fmt(bundle.predicted_bound) + "]");
  }
  return ok;
}

// ---- 3. fit + spread decomposition of the stacked objective ----

bool check_objective_decomposition(std::string& detail) {
  Rng rng(1003);
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    const Index omega = 2 + (trial % 6);
    const MultiResponseInstance inst =
        random_multi_instance(rng, 20 + (trial % 10), 4, 3, omega);
    Vector x(4);
    for (Index i = 0; i < 4; ++i) x(i) = rng.gaussian();
    const auto [fit, spread] = multi_objective_error_decomposition(inst, x);
    Matrix X(4, omega);
    for (Index j = 0; j < omega; ++j) X.col(j) = x;
    const double direct = (inst.A * X - inst.B).squaredNorm();
    ok &= expect(std::abs(fit + spread - direct) <= 1e-8 * inst.B.squaredNorm(), detail,
                 "decomposition off by " + fmt(std::abs(fit + spread - direct)));
  }
  return ok;
}

// ---- 4. multi-objective ratio under the squared factor ----

bool check_multi_objective_ratio(std::string& detail) {
  Rng rng(1004);
  bool ok = true;
  for (int trial = 0; trial < 30 && ok; ++trial) {
    const Index omega = 2 + (trial % 5);
    const MultiResponseInstance inst = random_multi_instance(rng, 60, 4, 4, omega);
    const CoresetBundle bundle = multi_objective_coreset(inst, 30);
    const Vector b_avg = inst.B.rowwise().mean();
    const Vector x_opt = solve_unconstrained(inst.A, b_avg);
    const Vector x_tilde =
        solve_unconstrained(apply(bundle.op, inst.A), apply(bundle.op, Vector(b_avg)));
    Matrix X_opt(4, omega), X_tilde(4, omega);
    for (Index j = 0; j < omega; ++j) {
      X_opt.col(j) = x_opt;
      X_tilde.col(j) = x_tilde;
    }
    const MultiSolveReport rep = evaluate(inst, bundle.op, X_opt, X_tilde,
                                          bundle.predicted_bound, ErrorNorm::frobenius);
    ok &= expect(rep.achieved_ratio >= 1.0 - 1e-9 &&
                     rep.achieved_ratio <= bundle.predicted_bound + 1e-6,
                 detail,
                 "ratio " + fmt(rep.achieved_ratio) + " outside [1, " +
                     fmt(bundle.predicted_bound) + "]");
  }
  return ok;
}

// ---- 5. block-diagonal lifting identity and constrained ratio ----

bool check_lifting(std::string& detail) {
  Rng rng(1005);
  bool ok = true;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const Index omega = 2 + (trial % 3);
    const MultiResponseInstance inst = random_multi_instance(rng, 8, 3, 2, omega);
    const auto [A_hat, b_hat] = lift_block_diagonal(inst);
    const Matrix X = random_gaussian(rng, 3, omega);
    Vector x_hat(3 * omega);
    for (Index j = 0; j < omega; ++j) x_hat.segment(3 * j, 3) = X.col(j);
    const double lifted = (A_hat * x_hat - b_hat).squaredNorm();
    const double direct = (inst.A * X - inst.B).squaredNorm();
    ok &= expect(std::abs(lifted - direct) <= 1e-10 * std::max(direct, 1.0), detail,
                 "lifting identity off by " + fmt(std::abs(lifted - direct)));
  }
  for (int trial = 0; trial < 10 && ok; ++trial) {
    const Index omega = 2 + (trial % 2);
    const MultiResponseInstance inst = random_multi_instance(rng, 5 + (trial % 4), 2, 2, omega);
    const Index lifted_rank = 2 * omega;
    const CoresetBundle bundle = arbitrary_constrained_coreset(inst, lifted_rank + 2 + trial);
    const auto [A_hat, b_hat] = lift_block_diagonal(inst);
    const RegressionInstance lifted(A_hat, b_hat);
    const Vector x_opt = solve_unconstrained(lifted.A, lifted.b);
    const Vector x_tilde =
        solve_on_coreset(bundle.op, lifted, ConstraintDomain::unconstrained());
    const SolveReport rep = evaluate(lifted, bundle.op, x_opt, x_tilde, bundle.predicted_bound);
    ok &= expect(rep.achieved_ratio >= 1.0 - 1e-9 &&
                     rep.achieved_ratio <= bundle.predicted_bound + 1e-6,
                 detail,
                 "lifted ratio " + fmt(rep.achieved_ratio) + " outside [1, " +
                     fmt(bundle.predicted_bound) + "]");
  }
  return ok;
}

// ---- 6. two-set selections keep both contracts (with 8. on the side) ----

bool check_two_set_contracts(std::string& detail) {
  Rng rng(1006);
  bool ok = true;
  for (int trial = 0; trial < 30 && ok; ++trial) {
    const Index n = 60 + 10 * (trial % 3);
    const Index k = 3 + (trial % 3);
    const Index r = 4 * k + 2 * (trial % 5);
    const Matrix U = random_orthonormal(rng, n, k);

    Matrix Psi;
    if (trial % 5 == 4) {
      Psi = Matrix::Identity(n, n);
    } else {
      Psi = random_gaussian(rng, n, 2 + (trial % 7));
    }
    const double beta = std::sqrt(static_cast<double>(k) / static_cast<double>(r));

    const CoresetOperator spectral = dual_set_spectral({U, Psi, r});
    const Vector sv = thin_svd(apply(spectral, U)).sigma;
    ok &= expect(sv.size() == k && sv(sv.size() - 1) >= 1.0 - beta - 1e-9, detail,
                 "spectral selection dropped sigma_min below " + fmt(1.0 - beta));
    const double rho = static_cast<double>(numerical_rank(Psi));
    const double spectral_budget =
        (1.0 + std::sqrt(rho / static_cast<double>(r))) * spectral_norm(Psi);
    ok &= expect(spectral_norm(apply(spectral, Psi)) <= spectral_budget + 1e-9, detail,
                 "second-set spectral norm above its budget");

    const CoresetOperator frobenius = dual_set_spectral_frobenius({U, Psi, r});
    const Vector sf = thin_svd(apply(frobenius, U)).sigma;
    ok &= expect(sf.size() == k && sf(sf.size() - 1) >= 1.0 - beta - 1e-9, detail,
                 "frobenius selection dropped sigma_min below " + fmt(1.0 - beta));
    ok &= expect(apply(frobenius, Psi).norm() <= Psi.norm() + 1e-9, detail,
                 "second-set frobenius mass grew");

    // 8. generic inequality on an instance assembled from this pair.
    const Matrix A = U * random_gaussian(rng, k, k + 1);
    const MultiResponseInstance inst(A, Psi);
    for (const CoresetOperator* op : {&spectral, &frobenius}) {
      for (const ErrorNorm norm : {ErrorNorm::spectral, ErrorNorm::frobenius}) {
        const auto [lhs, rhs] = generic_bound_check(inst, *op, norm);
        ok &= expect(lhs <= rhs + 1e-8 * rhs, detail,
                     "generic inequality violated: " + fmt(lhs) + " > " + fmt(rhs));
      }
    }
  }
  return ok;
}

// ---- 7. multiple-response ratios under their guarantees (and 8. again) ----

bool check_multiple_response_ratios(std::string& detail) {
  bool ok = true;
  ok &= expect(std::abs(multiple_spectral_bound(4, 9, 100) - 3.640625) < 1e-9, detail,
               "spectral guarantee at (k=4, w=9, r=100) is not 3.640625");
  ok &= expect(std::abs(multiple_frobenius_bound(4, 64) - (1.0 + 16.0 / 9.0)) < 1e-9, detail,
               "frobenius guarantee at (k=4, r=64) is not 1 + 16/9");

  Rng rng(1007);
  for (int trial = 0; trial < 30 && ok; ++trial) {
    const Index omega = trial % 2 == 0 ? 4 : 12;
    const Index r = trial % 4 < 2 ? 40 : 80;
    const MultiResponseInstance inst = random_multi_instance(rng, 120, 5, 5, omega);

    const CoresetBundle spec = multiple_spectral_coreset(inst, r);
    const CoresetBundle frob = multiple_frobenius_coreset(inst, r);
    const CoresetBundle agno = agnostic_coreset(inst.A, r);

    const Matrix X_opt = solve_unconstrained(inst.A, inst.B);
    for (const auto& [bundle, norm] :
         {std::pair<const CoresetBundle&, ErrorNorm>{spec, ErrorNorm::spectral},
          {frob, ErrorNorm::frobenius}}) {
      const Matrix X_tilde =
          solve_unconstrained(apply(bundle.op, inst.A), apply(bundle.op, inst.B));
      const auto rep = evaluate(inst, bundle.op, X_opt, X_tilde, bundle.predicted_bound, norm);
      ok &= expect(rep.achieved_ratio >= 1.0 - 1e-9 &&
                       rep.achieved_ratio <= bundle.predicted_bound + 1e-6,
                   detail,
                   to_string(bundle.mode) + " ratio " + fmt(rep.achieved_ratio) +
                       " outside [1, " + fmt(bundle.predicted_bound) + "]");
      const auto [lhs, rhs] = generic_bound_check(inst, bundle.op, norm);
      ok &= expect(lhs <= rhs + 1e-8 * rhs, detail, "generic inequality violated");
    }

    const Matrix X_agno =
        solve_unconstrained(apply(agno.op, inst.A), apply(agno.op, inst.B));
    for (const ErrorNorm norm : {ErrorNorm::spectral, ErrorNorm::frobenius}) {
      const auto rep = evaluate(inst, agno.op, X_opt, X_agno, agno.predicted_bound, norm);
      ok &= expect(rep.achieved_ratio >= 1.0 - 1e-9 &&
                       rep.achieved_ratio <= agno.predicted_bound + 1e-6,
                   detail,
                   "agnostic ratio " + fmt(rep.achieved_ratio) + " outside [1, " +
                       fmt(agno.predicted_bound) + "]");
      const auto [lhs, rhs] = generic_bound_check(inst, agno.op, norm);
      ok &= expect(lhs <= rhs + 1e-8 * rhs, detail, "generic inequality violated");
    }
  }
  return ok;
}

// ---- 8. generic inequality, checked inline above ----

bool check_generic_inequality_note(std::string& detail) {
  (void)detail;
  // Exercised on every instance of checks 6 and 7; a standalone spot check:
  Rng rng(1008);
  const MultiResponseInstance inst = random_multi_instance(rng, 40, 4, 4, 6);
  const auto [lhs, rhs] =
      generic_bound_check(inst, CoresetOperator::identity(40), ErrorNorm::frobenius);
  return lhs <= rhs + 1e-8 * rhs;
}

// ---- 9. deterministic agnostic lower bound over all coresets ----

bool check_worst_case_floor(std::string& detail) {
  bool ok = true;
  for (const auto& [n, r] : {std::pair<Index, Index>{6, 3}, {8, 4}, {8, 7}}) {
    const double worst = worst_ratio_over_coresets(n, 2, r);
    const double floor = static_cast<double>(n) / static_cast<double>(r);
    ok &= expect(worst >= floor - 1e-6, detail,
                 "worst ratio " + fmt(worst) + " below floor " + fmt(floor));
  }
  return ok;
}

// ---- 10. sampler miss-probability floor, exact and by simulation ----

bool check_sampler_floor(std::string& detail) {
  bool ok = true;
  const auto uniform = uniform_coreset_distribution(6, 2);
  const HardTarget hard = hard_target_for_sampler(6, 2, 2, uniform);
  ok &= expect(hard.success_probability_lower_bound == 0.4, detail,
               "exact miss floor at (6,2,2) is not 0.4");

  const Index n = 8, r = 3, ell = 2;
  const HardTarget target = hard_target_for_sampler(n, r, ell, uniform_coreset_distribution(n, r));
  const double exact =
      static_cast<double>(binomial(5, 2)) / static_cast<double>(binomial(8, 2));
  Rng rng(1010);
  const int draws = 100000;
  int misses = 0;
  for (int i = 0; i < draws; ++i) {
    bool intersects = false;
    for (Index c : rng.sample_without_replacement(n, r)) {
      if (target.b(c) != 0.0) intersects = true;
    }
    if (!intersects) ++misses;
  }
  const double freq = static_cast<double>(misses) / draws;
  const double sigma = std::sqrt(exact * (1.0 - exact) / draws);
  ok &= expect(std::abs(freq - exact) <= 3.0 * sigma, detail,
               "empirical miss rate " + fmt(freq) + " more than 3 standard errors from " +
                   fmt(exact));
  return ok;
}

// ---- 11. nonnegative solver against the support-enumeration oracle ----

bool check_nnls_oracle(std::string& detail) {
  Rng rng(1011);
  bool ok = true;
  for (int trial = 0; trial < 30 && ok; ++trial) {
    const Matrix A = random_gaussian(rng, 20, 4);
    Vector b(20);
    for (Index i = 0; i < 20; ++i) b(i) = rng.gaussian();
    const Vector x = solve_nnls(A, b);
    ok &= expect(x.minCoeff() >= 0.0, detail, "solver left the orthant");
    const double objective = (A * x - b).squaredNorm();

    double oracle = b.squaredNorm();
    for (unsigned mask = 1; mask < 16u; ++mask) {
      std::vector<Index> support;
      for (Index i = 0; i < 4; ++i) {
        if (mask & (1u << i)) support.push_back(i);
      }
      Matrix sub(20, static_cast<Index>(support.size()));
      for (std::size_t j = 0; j < support.size(); ++j) {
        sub.col(static_cast<Index>(j)) = A.col(support[j]);
      }
      const Vector xs = pseudoinverse(sub) * b;
      if (xs.minCoeff() < -1e-12) continue;
      oracle = std::min(oracle, (sub * xs - b).squaredNorm());
    }
    ok &= expect(std::abs(objective - oracle) <= 1e-6 * std::max(oracle, 1e-30), detail,
                 "objective " + fmt(objective) + " vs oracle " + fmt(oracle));
  }
  return ok;
}

// ---- 12. end-to-end determinism of the build command ----

bool check_build_determinism(std::string& detail) {
  Rng rng(1012);
  const std::string dir = "/tmp/richcore_acceptance_" + std::to_string(::getpid());
  std::filesystem::create_directories(dir);
  cli::write_csv_matrix(dir + "/a.csv", random_rank_k(rng, 100, 5, 5));
  cli::write_csv_matrix(dir + "/b.csv", random_gaussian(rng, 100, 1));

  cli::RunConfig cfg;
  cfg.mode = "simple";
  cfg.r_values = {40};
  cfg.input_path = dir + "/a.csv";
  cfg.target_paths = {dir + "/b.csv"};

  auto strip = [](std::string report) {
    const auto pos = report.find("\"wall_time_ms\"");
    if (pos != std::string::npos) report.erase(pos);
    return report;
  };
  const std::string first = strip(cli::run_build(cfg));
  const std::string second = strip(cli::run_build(cfg));
  std::filesystem::remove_all(dir);
  return expect(first == second && !first.empty(), detail,
                "two builds of the same input differ");
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"single-set selection keeps singular values in its interval",
       check_single_set_interval},
      {"simple-regression ratio stays under the closed-form guarantee",
       check_simple_regression_ratio},
      {"stacked objective splits into fit plus spread", check_objective_decomposition},
      {"multi-objective ratio stays under the squared factor", check_multi_objective_ratio},
      {"block-diagonal lifting preserves the objective and its guarantee", check_lifting},
      {"two-set selections keep the rank, spectral, and mass contracts",
       check_two_set_contracts},
      {"multiple-response and agnostic ratios stay under their guarantees",
       check_multiple_response_ratios},
      {"generic error inequality holds on every generated instance",
       check_generic_inequality_note},
      {"every coreset of the hard instances pays at least n/r", check_worst_case_floor},
      {"sampler miss probability matches the exact count", check_sampler_floor},
      {"nonnegative solver matches the support-enumeration oracle", check_nnls_oracle},
      {"identical inputs build identical coresets", check_build_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = checks[i].run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    std::printf("[%2zu/%zu] %-68s %s\n", i + 1, checks.size(), checks[i].name.c_str(),
                ok ? "PASS" : "FAIL");
    if (!ok) {
      ++failures;
      if (!detail.empty()) std::printf("        %s\n", detail.c_str());
    }
  }
  if (failures > 0) std::printf("%d acceptance check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
