#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include "cli/csv.hpp"
#include "cli/json_writer.hpp"
#include "richcore/adversarial.hpp"
#include "richcore/coreset.hpp"
#include "richcore/linalg.hpp"
#include "richcore/rng.hpp"
#include "richcore/solvers.hpp"

namespace richcore::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct ProblemData {
  Matrix A;
  std::vector<Matrix> targets;
};

ProblemData load_problem(const RunConfig& cfg, bool target_required) {
  if (cfg.input_path.empty()) throw precondition_error("--input is required");
  ProblemData data;
  Matrix raw = read_csv_matrix(cfg.input_path, cfg.header);
  if (cfg.target_col >= 0) {
    const Index col = cfg.target_col;
    if (col >= raw.cols()) throw parse_error("--target-col is out of range");
    if (raw.cols() < 2) throw parse_error("--target-col leaves no data columns");
    Matrix A(raw.rows(), raw.cols() - 1);
    A.leftCols(col) = raw.leftCols(col);
    A.rightCols(raw.cols() - 1 - col) = raw.rightCols(raw.cols() - 1 - col);
    data.A = std::move(A);
    data.targets.push_back(raw.col(col));
  } else {
    data.A = std::move(raw);
    for (const std::string& path : cfg.target_paths) {
      data.targets.push_back(read_csv_matrix(path, cfg.header));
    }
  }
  if (target_required && data.targets.empty()) {
    throw precondition_error("this mode needs a target (--target or --target-col)");
  }
  return data;
}

CoresetMode parse_mode(const RunConfig& cfg) { return coreset_mode_from_string(cfg.mode); }

ConstraintDomain parse_domain(const std::string& name) {
  if (name == "unconstrained") return ConstraintDomain::unconstrained();
  if (name == "nnls") return ConstraintDomain::nonnegative();
  throw precondition_error("unknown domain: " + name);
}

Index single_r(const RunConfig& cfg) {
  if (cfg.r_values.size() != 1) {
    throw precondition_error("this command takes exactly one -r value");
  }
  return cfg.r_values.front();
}

const Matrix& sole_target(const ProblemData& data) {
  if (data.targets.size() != 1) {
    throw precondition_error("this mode takes exactly one target");
  }
  return data.targets.front();
}

Vector sole_target_vector(const ProblemData& data) {
  const Matrix& t = sole_target(data);
  if (t.cols() != 1) {
    throw precondition_error("simple mode needs a single-column target");
  }
  return t.col(0);
}

CoresetBundle build_bundle(CoresetMode mode, const ProblemData& data, Index r) {
  switch (mode) {
    case CoresetMode::simple:
      return simple_coreset(RegressionInstance(data.A, sole_target_vector(data)), r);
    case CoresetMode::multi_objective:
      return multi_objective_coreset(MultiResponseInstance(data.A, sole_target(data)), r);
    case CoresetMode::arbitrary_constrained:
      return arbitrary_constrained_coreset(MultiResponseInstance(data.A, sole_target(data)), r);
    case CoresetMode::multiple_spectral:
      return multiple_spectral_coreset(MultiResponseInstance(data.A, sole_target(data)), r);
    case CoresetMode::multiple_frobenius:
      return multiple_frobenius_coreset(MultiResponseInstance(data.A, sole_target(data)), r);
    case CoresetMode::agnostic:
      return agnostic_coreset(data.A, r);
  }
  throw precondition_error("unknown coreset mode");
}

struct TargetOutcome {
  double ratio_spectral;
  double ratio_frobenius;
  bool infinite;
};

struct ModeEvaluation {
  double achieved_ratio = 1.0;
  bool infinite = false;
  double full_error_sq = 0.0;
  double coreset_error_sq = 0.0;
  std::vector<TargetOutcome> per_target;  // agnostic only
};

ModeEvaluation from_report(const SolveReport& rep) {
  return {rep.achieved_ratio, rep.infinite_ratio, rep.full_error_sq, rep.coreset_error_sq, {}};
}

ModeEvaluation from_report(const MultiSolveReport& rep) {
  return {rep.achieved_ratio, rep.infinite_ratio, rep.full_error_sq, rep.coreset_error_sq, {}};
}

ModeEvaluation evaluate_mode(CoresetMode mode, const ProblemData& data,
                             const CoresetOperator& op, double predicted_bound,
                             const ConstraintDomain& domain) {
  if (domain.kind != DomainKind::unconstrained &&
      (mode == CoresetMode::multiple_spectral || mode == CoresetMode::multiple_frobenius ||
       mode == CoresetMode::agnostic)) {
    throw precondition_error("this mode supports only the unconstrained domain");
  }
  switch (mode) {
    case CoresetMode::simple: {
      RegressionInstance inst(data.A, sole_target_vector(data));
      const Vector x_opt = domain.solve(inst.A, inst.b);
      const Vector x_tilde = solve_on_coreset(op, inst, domain);
      return from_report(evaluate(inst, op, x_opt, x_tilde, predicted_bound));
    }
    case CoresetMode::multi_objective: {
      MultiResponseInstance inst(data.A, sole_target(data));
      const Vector b_avg = inst.B.rowwise().mean();
      const Vector x_opt = domain.solve(inst.A, b_avg);
      const Vector x_tilde = domain.solve(apply(op, inst.A), apply(op, Vector(b_avg)));
      Matrix X_opt(inst.A.cols(), inst.omega());
      Matrix X_tilde(inst.A.cols(), inst.omega());
      for (Index j = 0; j < inst.omega(); ++j) {
        X_opt.col(j) = x_opt;
        X_tilde.col(j) = x_tilde;
      }
      return from_report(
          evaluate(inst, op, X_opt, X_tilde, predicted_bound, ErrorNorm::frobenius));
    }
    case CoresetMode::arbitrary_constrained: {
      MultiResponseInstance inst(data.A, sole_target(data));
      auto [A_hat, b_hat] = lift_block_diagonal(inst);
      RegressionInstance lifted(std::move(A_hat), std::move(b_hat));
      const Vector x_opt = domain.solve(lifted.A, lifted.b);
      const Vector x_tilde = solve_on_coreset(op, lifted, domain);
      return from_report(evaluate(lifted, op, x_opt, x_tilde, predicted_bound));
    }
    case CoresetMode::multiple_spectral:
    case CoresetMode::multiple_frobenius: {
      MultiResponseInstance inst(data.A, sole_target(data));
      const Matrix X_opt = solve_unconstrained(inst.A, inst.B);
      const Matrix X_tilde = solve_unconstrained(apply(op, inst.A), apply(op, inst.B));
      const ErrorNorm norm = mode == CoresetMode::multiple_spectral ? ErrorNorm::spectral
                                                                    : ErrorNorm::frobenius;
      return from_report(evaluate(inst, op, X_opt, X_tilde, predicted_bound, norm));
    }
    case CoresetMode::agnostic: {
      if (data.targets.empty()) {
        throw precondition_error("verifying the agnostic mode needs at least one target");
      }
      ModeEvaluation out;
      out.achieved_ratio = 1.0;
      for (const Matrix& B : data.targets) {
        MultiResponseInstance inst(data.A, B);
        const Matrix X_opt = solve_unconstrained(inst.A, inst.B);
        const Matrix X_tilde = solve_unconstrained(apply(op, inst.A), apply(op, inst.B));
        const auto spec =
            evaluate(inst, op, X_opt, X_tilde, predicted_bound, ErrorNorm::spectral);
        const auto frob =
            evaluate(inst, op, X_opt, X_tilde, predicted_bound, ErrorNorm::frobenius);
        out.per_target.push_back({spec.achieved_ratio, frob.achieved_ratio,
                                  spec.infinite_ratio || frob.infinite_ratio});
        out.infinite = out.infinite || out.per_target.back().infinite;
        out.achieved_ratio = std::max(
            {out.achieved_ratio, spec.achieved_ratio, frob.achieved_ratio});
        out.full_error_sq = frob.full_error_sq;
        out.coreset_error_sq = frob.coreset_error_sq;
      }
      return out;
    }
  }
  throw precondition_error("unknown coreset mode");
}

void write_shape_fields(JsonWriter& w, CoresetMode mode, const ProblemData& data,
                        Index r) {
  w.key("mode").value(to_string(mode));
  w.key("n").value(static_cast<std::int64_t>(data.A.rows()));
  w.key("d").value(static_cast<std::int64_t>(data.A.cols()));
  const Index omega = data.targets.empty() ? 0 : data.targets.front().cols();
  w.key("omega").value(static_cast<std::int64_t>(omega));
  w.key("k").value(static_cast<std::int64_t>(numerical_rank(data.A)));
  w.key("r").value(static_cast<std::int64_t>(r));
}

void write_operator_fields(JsonWriter& w, CoresetMode mode, const CoresetOperator& op,
                           Index data_rows) {
  w.key("indices").begin_array();
  for (const Pick& p : op.picks) w.value(static_cast<std::int64_t>(p.row));
  w.end_array();
  w.key("weights").begin_array();
  for (const Pick& p : op.picks) w.value(p.scale);
  w.end_array();
  if (mode == CoresetMode::arbitrary_constrained) {
    w.key("data_rows").begin_array();
    for (const Pick& p : op.picks) {
      w.value(static_cast<std::int64_t>(LiftedIndex::decode(p.row, data_rows).data_row));
    }
    w.end_array();
    w.key("response_cols").begin_array();
    for (const Pick& p : op.picks) {
      w.value(static_cast<std::int64_t>(LiftedIndex::decode(p.row, data_rows).response_col));
    }
    w.end_array();
  }
}

void write_evaluation_fields(JsonWriter& w, const ModeEvaluation& eval,
                             double predicted_bound) {
  if (eval.infinite) {
    w.key("achieved_ratio").null();
  } else {
    w.key("achieved_ratio").value(eval.achieved_ratio);
  }
  w.key("infinite_ratio").value(eval.infinite);
  w.key("full_error_sq").value(eval.full_error_sq);
  w.key("coreset_error_sq").value(eval.coreset_error_sq);
  if (!eval.per_target.empty()) {
    w.key("targets").begin_array();
    for (const TargetOutcome& t : eval.per_target) {
      w.begin_object();
      w.key("ratio_spectral").value(t.ratio_spectral);
      w.key("ratio_frobenius").value(t.ratio_frobenius);
      w.key("infinite_ratio").value(t.infinite);
      w.end_object();
    }
    w.end_array();
  }
  const bool pass = !eval.infinite && eval.achieved_ratio <= predicted_bound;
  w.key("bound_satisfied").value(pass);
}

CoresetOperator uniform_baseline_operator(Rng& rng, Index n, Index r) {
  CoresetOperator op;
  op.source_rows = n;
  const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(r));
  for (Index j = 0; j < r; ++j) {
    op.picks.push_back({static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))), scale});
  }
  return op;
}

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RICHCORE_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) cap = static_cast<unsigned>(parsed);
  }
  return cap;
}

}  // namespace

std::string run_build(const RunConfig& config) {
  const auto start = Clock::now();
  const CoresetMode mode = parse_mode(config);
  const Index r = single_r(config);
  const ProblemData data = load_problem(config, mode != CoresetMode::agnostic);
  const CoresetBundle bundle = build_bundle(mode, data, r);

  JsonWriter w;
  w.begin_object();
  w.key("command").value("build");
  write_shape_fields(w, mode, data, r);
  if (mode == CoresetMode::agnostic) w.key("note").value("target-agnostic");
  write_operator_fields(w, mode, bundle.op, data.A.rows());
  w.key("predicted_bound").value(bundle.predicted_bound);
  w.key("wall_time_ms").value(elapsed_ms(start));
  w.end_object();
  return w.str();
}

std::string run_verify(const RunConfig& config) {
  const auto start = Clock::now();
  const CoresetMode mode = parse_mode(config);
  const Index r = single_r(config);
  const ProblemData data = load_problem(config, true);
  const ConstraintDomain domain = parse_domain(config.domain);
  const CoresetBundle bundle = build_bundle(mode, data, r);
  const ModeEvaluation eval =
      evaluate_mode(mode, data, bundle.op, bundle.predicted_bound, domain);

  JsonWriter w;
  w.begin_object();
  w.key("command").value("verify");
  write_shape_fields(w, mode, data, r);
  w.key("domain").value(config.domain);
  write_operator_fields(w, mode, bundle.op, data.A.rows());
  w.key("predicted_bound").value(bundle.predicted_bound);
  write_evaluation_fields(w, eval, bundle.predicted_bound);
  w.key("wall_time_ms").value(elapsed_ms(start));
  w.end_object();
  return w.str();
}

std::string run_bench(const RunConfig& config) {
  const CoresetMode mode = parse_mode(config);
  if (config.r_values.empty()) throw precondition_error("bench needs at least one -r");
  const ProblemData data = load_problem(config, true);
  const ConstraintDomain domain = parse_domain(config.domain);
  const Index n = data.A.rows();
  const Index trials = std::max<Index>(config.trials, 1);

  std::string lines;
  for (const Index r : config.r_values) {
    const auto start = Clock::now();
    const CoresetBundle bundle = build_bundle(mode, data, r);
    const ModeEvaluation det =
        evaluate_mode(mode, data, bundle.op, bundle.predicted_bound, domain);

    // Source rows of the baseline must match what the mode consumes: the
    // arbitrary-constrained operator samples lifted rows.
    const Index source_rows =
        mode == CoresetMode::arbitrary_constrained ? n * data.targets.front().cols() : n;

    std::vector<double> baseline(static_cast<std::size_t>(trials), 0.0);
    std::vector<char> infinite(static_cast<std::size_t>(trials), 0);
    std::atomic<Index> next{0};
    auto worker = [&]() {
      while (true) {
        const Index t = next.fetch_add(1);
        if (t >= trials) break;
        Rng rng(config.seed + static_cast<std::uint64_t>(t));
        const CoresetOperator op = uniform_baseline_operator(rng, source_rows, r);
        ModeEvaluation eval;
        try {
          eval = evaluate_mode(mode, data, op, bundle.predicted_bound, domain);
        } catch (const std::exception&) {
          // A degenerate random coreset (rank collapse) counts as failure.
          eval.infinite = true;
          eval.achieved_ratio = std::numeric_limits<double>::infinity();
        }
        baseline[static_cast<std::size_t>(t)] = eval.achieved_ratio;
        infinite[static_cast<std::size_t>(t)] = eval.infinite ? 1 : 0;
      }
    };
    const unsigned threads = std::min<unsigned>(thread_cap(), static_cast<unsigned>(trials));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    const double wall = elapsed_ms(start);
    for (Index t = 0; t < trials; ++t) {
      JsonWriter w;
      w.begin_object();
      w.key("r").value(static_cast<std::int64_t>(r));
      w.key("trial").value(static_cast<std::int64_t>(t));
      w.key("predicted_bound").value(bundle.predicted_bound);
      if (det.infinite) {
        w.key("deterministic_ratio").null();
      } else {
        w.key("deterministic_ratio").value(det.achieved_ratio);
      }
      w.key("baseline_ratio").value(baseline[static_cast<std::size_t>(t)]);
      w.key("baseline_infinite").value(infinite[static_cast<std::size_t>(t)] != 0);
      w.end_object();
      lines += w.str();
      lines += '\n';
    }

    std::vector<double> sorted = baseline;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[static_cast<std::size_t>((trials - 1) / 2)];
    JsonWriter w;
    w.begin_object();
    w.key("r").value(static_cast<std::int64_t>(r));
    w.key("summary").value(true);
    w.key("predicted_bound").value(bundle.predicted_bound);
    if (det.infinite) {
      w.key("deterministic_ratio").null();
    } else {
      w.key("deterministic_ratio").value(det.achieved_ratio);
    }
    w.key("baseline_median").value(median);
    w.key("baseline_max").value(sorted.back());
    w.key("trials").value(static_cast<std::int64_t>(trials));
    w.key("wall_time_ms").value(wall);
    w.end_object();
    lines += w.str();
    lines += '\n';
  }
  return lines;
}

std::string run_adversarial(const RunConfig& config) {
  const auto start = Clock::now();
  const Index n = config.adv_n;
  const Index r = single_r(config);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("adversarial");
  if (config.adv_ell < 0) {
    const double worst = worst_ratio_over_coresets(n, config.adv_d, r);
    const double floor = static_cast<double>(n) / static_cast<double>(r);
    w.key("kind").value("worst-coreset");
    w.key("n").value(static_cast<std::int64_t>(n));
    w.key("d").value(static_cast<std::int64_t>(config.adv_d));
    w.key("r").value(static_cast<std::int64_t>(r));
    w.key("worst_ratio").value(worst);
    w.key("ratio_floor").value(floor);
    w.key("floor_satisfied").value(worst >= floor - 1e-6);
  } else {
    const Index ell = config.adv_ell;
    const auto dist = uniform_coreset_distribution(n, r);
    const HardTarget hard = hard_target_for_sampler(n, r, ell, dist);
    double miss = 0.0;
    for (const auto& [set, prob] : dist) {
      bool intersects = false;
      for (Index i : set) {
        if (hard.b(i) != 0.0) intersects = true;
      }
      if (!intersects) miss += prob;
    }
    w.key("kind").value("sampler-miss");
    w.key("n").value(static_cast<std::int64_t>(n));
    w.key("r").value(static_cast<std::int64_t>(r));
    w.key("ell").value(static_cast<std::int64_t>(ell));
    w.key("target").begin_array();
    for (Index i : hard.target) w.value(static_cast<std::int64_t>(i));
    w.end_array();
    w.key("success_probability_lower_bound").value(hard.success_probability_lower_bound);
    w.key("uniform_miss_probability").value(miss);
    w.key("ratio_floor").value(static_cast<double>(n) / static_cast<double>(n - ell));
  }
  w.key("wall_time_ms").value(elapsed_ms(start));
  w.end_object();
  return w.str();
}

void emit_report(const RunConfig& config, const std::string& report) {
  const bool needs_newline = report.empty() || report.back() != '\n';
  if (config.out_path.empty()) {
    std::cout << report;
    if (needs_newline) std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(config.out_path);
  if (!out) throw parse_error("cannot open " + config.out_path + " for writing");
  out << report;
  if (needs_newline) out << '\n';
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace richcore::cli
