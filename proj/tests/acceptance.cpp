// Acceptance suite: one check block per criterion, one PASS/FAIL line
// each, nonzero exit if anything is red. Thresholds are fixed here, not
// tuned at runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "evident/batch.hpp"
#include "evident/classifier.hpp"
#include "evident/dataset.hpp"
#include "evident/experiments.hpp"
#include "evident/fusion.hpp"
#include "evident/loss.hpp"
#include "evident/metrics.hpp"
#include "evident/opinion.hpp"
#include "evident/rng.hpp"
#include "evident/serialize.hpp"
#include "evident/special_functions.hpp"

namespace fs = std::filesystem;
using namespace evident;

namespace {

int failures = 0;

struct Criterion {
  std::string name;
  double time_limit_s;
  std::chrono::steady_clock::time_point start;
  bool ok = true;
  std::string detail;

  Criterion(std::string n, double limit)
      : name(std::move(n)), time_limit_s(limit),
        start(std::chrono::steady_clock::now()) {}

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }

  void finish() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed >= time_limit_s) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%s] %-58s (%.2fs / %.0fs)%s%s\n", ok ? "PASS" : "FAIL",
                name.c_str(), elapsed, time_limit_s, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "evident_acceptance";
  return dir;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void criterion_1_opinion_algebra() {
  Criterion c("1 opinion algebra: unit sum and round trip, 1000 vectors", 1.0);
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + rng.below(6);
    Evidence e;
    e.values.resize(k);
    for (double& v : e.values) v = rng.uniform01() < 0.2 ? 0.0 : rng.uniform(0.0, 60.0);
    const DirichletOpinion o = opinion_from_evidence(e);
    double sum = o.uncertainty;
    for (double b : o.beliefs) sum += b;
    c.expect(std::abs(sum - 1.0) < 1e-9, "unit sum violated");
    const Evidence back = evidence_from_opinion(o);
    for (std::size_t j = 0; j < k; ++j) {
      c.expect(std::abs(back.values[j] - e.values[j]) < 1e-9, "round trip broke");
    }
  }
  c.finish();
}

void criterion_2_zadeh() {
  Criterion c("2 two-expert conflict: ds degenerates, ider stays balanced", 1.0);
  const DirichletOpinion a{{0.99, 0.0, 0.01}, 0.0};
  const DirichletOpinion b{{0.0, 0.99, 0.01}, 0.0};

  const FusionOutcome ds = ds_combine_pair(a, b);
  c.expect(std::abs(ds.opinion.beliefs[2] - 1.0) < 1e-9,
           "ds belief in the doubly-rejected class is not 1");

  // independent direct evaluation of the combination formulas
  std::vector<double> raw(3);
  double total = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    raw[k] = a.beliefs[k] * b.beliefs[k] + a.beliefs[k] * b.uncertainty +
             b.beliefs[k] * a.uncertainty + 0.5 * (a.beliefs[k] + b.beliefs[k]);
    total += raw[k];
  }
  const double raw_u =
      a.uncertainty * b.uncertainty + 0.5 * (a.uncertainty + b.uncertainty);
  total += raw_u;

  const FusionOutcome ider = ider_combine_pair(a, b);
  for (std::size_t k = 0; k < 3; ++k) {
    c.expect(std::abs(ider.opinion.beliefs[k] - raw[k] / total) < 1e-9,
             "ider disagrees with the direct evaluation");
  }
  c.expect(ider.opinion.beliefs[2] < 0.02, "ider gave the rejected class > 0.02");
  c.expect(std::abs(ider.opinion.beliefs[0] - 0.495 / 1.0001) < 1e-9,
           "ider split is not 0.495/1.0001");
  c.expect(std::abs(ider.opinion.beliefs[1] - 0.495 / 1.0001) < 1e-9,
           "ider split is not symmetric");
  c.expect(std::abs(ds.conflict - 0.9999) < 1e-9, "conflict mass is not 0.9999");
  c.finish();
}

void criterion_3_fusion_properties() {
  Criterion c("3 fusion properties: commutativity, neutrality, order", 5.0);
  Rng rng(103);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + rng.below(4);
    Evidence e1, e2;
    e1.values.resize(k);
    e2.values.resize(k);
    for (double& v : e1.values) v = rng.uniform(0.0, 25.0);
    for (double& v : e2.values) v = rng.uniform(0.0, 25.0);
    const DirichletOpinion a = opinion_from_evidence(e1);
    const DirichletOpinion b = opinion_from_evidence(e2);
    const FusionOutcome ab = ider_combine_pair(a, b);
    const FusionOutcome ba = ider_combine_pair(b, a);
    for (std::size_t j = 0; j < k; ++j) {
      c.expect(std::abs(ab.opinion.beliefs[j] - ba.opinion.beliefs[j]) <= 1e-12,
               "commutativity violated");
    }
    c.expect(std::abs(ab.opinion.uncertainty - ba.opinion.uncertainty) <= 1e-12,
             "commutativity violated on uncertainty");
  }

  // vacuous neutrality for ds
  Rng rng2(104);
  for (int i = 0; i < 200; ++i) {
    Evidence e;
    e.values = {rng2.uniform(0.0, 10.0), rng2.uniform(0.0, 10.0),
                rng2.uniform(0.0, 10.0)};
    const DirichletOpinion o = opinion_from_evidence(e);
    const FusionOutcome out = ds_combine_pair(o, {{0.0, 0.0, 0.0}, 1.0});
    for (std::size_t j = 0; j < 3; ++j) {
      c.expect(std::abs(out.opinion.beliefs[j] - o.beliefs[j]) < 1e-12,
               "ds vacuous neutrality violated");
    }
  }

  // non-associativity witness and the documented fold order
  const DirichletOpinion x{{1.0, 0.0}, 0.0};
  const DirichletOpinion v{{0.0, 0.0}, 1.0};
  const DirichletOpinion y{{0.0, 1.0}, 0.0};
  const FusionOutcome left = ider_combine_pair(ider_combine_pair(x, v).opinion, y);
  const FusionOutcome right = ider_combine_pair(x, ider_combine_pair(v, y).opinion);
  c.expect(std::abs(left.opinion.beliefs[0] - right.opinion.beliefs[0]) > 0.1,
           "expected a non-associativity witness");
  const FusionOutcome folded =
      ider_combine_all(std::vector<DirichletOpinion>{x, v, y});
  c.expect(folded.opinion.beliefs == left.opinion.beliefs &&
               folded.opinion.uncertainty == left.opinion.uncertainty,
           "combine_all is not the left-to-right fold");
  c.finish();
}

void criterion_4_special_functions_and_losses() {
  Criterion c("4 special functions and loss closed forms", 5.0);
  Rng rng(105);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(0.01, 30.0);
    c.expect(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-12,
             "digamma recurrence broke at x=" + fmt(x));
    c.expect(std::abs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)) < 1e-12,
             "log_gamma recurrence broke at x=" + fmt(x));
  }
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(0.1, 0.9);
    const double cot =
        std::cos(std::numbers::pi * x) / std::sin(std::numbers::pi * x);
    c.expect(std::abs(digamma(1.0 - x) - digamma(x) - std::numbers::pi * cot) < 1e-12,
             "digamma reflection broke");
    c.expect(std::abs(log_gamma(x) + log_gamma(1.0 - x) -
                      std::log(std::numbers::pi / std::sin(std::numbers::pi * x))) <
                 1e-12,
             "log_gamma reflection broke");
  }

  c.expect(std::abs(adjusted_ce(std::vector<double>{1.0, 1.0}, 0) - 1.0) < 1e-10,
           "adjusted_ce (1,1) != 1");
  c.expect(std::abs(adjusted_ce(std::vector<double>{1.0, 1.0, 1.0, 1.0}, 0) -
                    (1.0 + 0.5 + 1.0 / 3.0)) < 1e-10,
           "adjusted_ce uniform-4 mismatch");
  c.expect(std::abs(adjusted_ce(std::vector<double>{101.0, 1.0, 1.0, 1.0}, 0) -
                    0.029413649531715022) < 1e-10,
           "adjusted_ce (101,1,1,1) mismatch");

  c.expect(std::abs(kl_to_uniform(std::vector<double>{2.0, 1.0}) -
                    (std::log(2.0) - 0.5)) < 1e-10,
           "kl (2,1) != ln2 - 1/2");

  // quadrature oracle for KL(Beta(10,1) || Uniform), via libm
  auto integrand = [](double t) {
    if (t <= 0.0) return 0.0;
    const double f = 10.0 * std::pow(t, 9.0);
    return f * std::log(f);
  };
  std::function<double(double, double, double, double, double, double, int)> simp =
      [&](double a, double b, double fa, double fb, double fm, double eps,
          int depth) -> double {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = integrand(lm), frm = integrand(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return simp(a, m, fa, fm, flm, 0.5 * eps, depth - 1) +
           simp(m, b, fm, fb, frm, 0.5 * eps, depth - 1);
  };
  const double quad = simp(0.0, 1.0, integrand(0.0), integrand(1.0), integrand(0.5),
                           1e-10, 40);
  c.expect(std::abs(kl_to_uniform(std::vector<double>{10.0, 1.0}) - quad) < 1e-6,
           "kl (10,1) disagrees with the quadrature oracle (" + fmt(quad) + ")");
  c.finish();
}

void criterion_5_gradients() {
  Criterion c("5 analytic gradient vs central differences, 100 configs", 10.0);
  Rng rng(106);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 2 + rng.below(5);
    std::vector<double> alpha(k);
    for (double& a : alpha) a = rng.uniform(1.001, 50.0);
    const std::size_t label = rng.below(k);
    const double lambda = (i % 4 == 0) ? 0.0 : rng.uniform(0.0, 1.0);
    const std::vector<double> analytic = loss_gradient(alpha, label, lambda);
    const double h = 1e-5;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> hi = alpha, lo = alpha;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (total_loss_at_lambda(hi, label, lambda).total -
                         total_loss_at_lambda(lo, label, lambda).total) /
                        (2.0 * h);
      worst = std::max(worst,
                       std::abs(analytic[j] - fd) / std::max(std::abs(fd), 1e-6));
    }
  }
  c.expect(worst < 1e-4, "max relative error " + fmt(worst));
  c.finish();
}

void criterion_6_end_to_end_training() {
  Criterion c("6 end-to-end training on the standard workload (seed 0)", 60.0);
  const fs::path dir = work_dir() / "c6";
  fs::remove_all(dir);
  generate_synthetic(SyntheticSpec::standard(), 0, dir);
  const LoadedDataset data = load_dataset(dir / "manifest.json");
  TrainConfig cfg;
  cfg.seed = 0;
  const TrainResult first = train(data, cfg);
  const MetricsReport report = evaluate(first.model, data, data.manifest.split.test);
  c.expect(report.accuracy >= 0.90,
           "test accuracy " + fmt(report.accuracy) + " < 0.90");
  c.expect(first.log.size() == 10, "expected exactly 10 epochs");

  const TrainResult second = train(data, cfg);
  c.expect(checkpoint_to_json(first.model).dump() ==
               checkpoint_to_json(second.model).dump(),
           "checkpoints differ across identical runs");
  c.finish();
}

void criterion_7_ood_uncertainty() {
  // The contrast criterion has two halves. The uncertainty ratio holds;
  // the softmax half is reported honestly and is expected to fail at
  // this scale: with two-layer per-view heads at the same training
  // budget, softmax confidence and Dirichlet evidence are driven by the
  // same quantity (the projection of the input onto learned class
  // directions), so any out-of-distribution placement that saturates
  // the score-fused softmax above 0.9 also manufactures evidence and
  // collapses the uncertainty ratio, and placements that keep the
  // evidence heads quiet leave the averaged softmax below ~0.66. The
  // decoupling shown in the deep-network setting needs feature
  // extractors that respond to training classes only.
  Criterion c("7 OOD: fused uncertainty ratio >= 1.5 (seed 0)", 90.0);
  const fs::path dir = work_dir() / "c7";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const OodReport report = run_ood_pipeline(0, dir);
  c.expect(report.uncertainty_ratio >= 1.5,
           "uncertainty ratio " + fmt(report.uncertainty_ratio) + " < 1.5");
  c.expect(report.mean_uncertainty_id > 0.0 && report.mean_uncertainty_id < 1.0,
           "in-distribution uncertainty outside (0, 1)");
  c.finish();

  Criterion c2("7b OOD: softmax score-fusion mean max-probability > 0.9", 90.0);
  c2.expect(report.softmax_mean_maxprob_ood > 0.9,
            "softmax mean max-probability " + fmt(report.softmax_mean_maxprob_ood) +
                " <= 0.9 (unattainable at this scale, see comment above)");
  c2.finish();
}

void criterion_8_robustness_ordering() {
  Criterion c("8 robustness: ider drop < score-fusion drop, seeds 0,1,2", 300.0);
  RobustnessConfig cfg;
  cfg.base_seed = 0;
  cfg.runs = 3;
  cfg.corrupted_view = 1;
  cfg.noise_multiplier = 5.0;
  cfg.work_dir = work_dir() / "c8";
  fs::remove_all(cfg.work_dir);
  fs::create_directories(cfg.work_dir);
  const RobustnessReport report = run_robustness_experiment(cfg);

  double softmax_mean = 0.0, ider_mean = 0.0;
  for (const RobustnessSeedResult& seed_result : report.per_seed) {
    double softmax_drop = 0.0, ider_drop = 0.0;
    for (const RobustnessArmResult& arm : seed_result.arms) {
      c.expect(arm.clean_accuracy >= 0.90,
               arm.pipeline + " clean accuracy " + fmt(arm.clean_accuracy) +
                   " < 0.90 (seed " + std::to_string(seed_result.seed) + ")");
      if (arm.pipeline == "softmax+score-average") softmax_drop = arm.drop();
      if (arm.pipeline == "evidential+ider") ider_drop = arm.drop();
    }
    c.expect(ider_drop < softmax_drop,
             "seed " + std::to_string(seed_result.seed) + ": ider drop " +
                 fmt(ider_drop) + " !< softmax drop " + fmt(softmax_drop));
    softmax_mean += softmax_drop;
    ider_mean += ider_drop;
  }
  c.expect(ider_mean / 3.0 < softmax_mean / 3.0,
           "mean ider drop " + fmt(ider_mean / 3.0) + " !< mean softmax drop " +
               fmt(softmax_mean / 3.0));
  c.finish();
}

}  // namespace

int main() {
  std::printf("acceptance suite, library version %s\n", kLibraryVersion);
  criterion_1_opinion_algebra();
  criterion_2_zadeh();
  criterion_3_fusion_properties();
  criterion_4_special_functions_and_losses();
  criterion_5_gradients();
  criterion_6_end_to_end_training();
  criterion_7_ood_uncertainty();
  criterion_8_robustness_ordering();
  if (failures > 0) {
    std::printf("%d criterion check(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
