// Acceptance run: one PASS/FAIL line per numbered criterion. Tolerances are
// pinned here rather than read from the shipped config files, so editing a
// config cannot loosen a criterion.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "qgraph/config.hpp"
#include "qgraph/csv.hpp"
#include "qgraph/experiments.hpp"

using namespace qgraph;
namespace fs = std::filesystem;

namespace {

constexpr double kUnitarity = 1e-12;
constexpr double kPerron = 1e-10;
constexpr double kResolvent = 1e-8;
constexpr double kEvaluator = 1e-10;
constexpr double kCoset = 1e-9;
constexpr double kFrozenGap = 0.857142857142857;  // dense oracle at K_8/DFT
constexpr double kFrozenGapSlack = 1e-9;
constexpr double kTSlopeTolerance = 0.15;
constexpr double kTerm1SlopeTolerance = 0.2;
constexpr double kUniversality = 0.1;
constexpr double kFirstValueStandardErrors = 5.0;

struct Line {
  int number;
  std::string name;
  bool passed;
  std::string detail;
};

fs::path g_root;

ExperimentConfig pinned(const std::string& subdir) {
  ExperimentConfig c;
  c.seed = 1;
  c.threads = 1;
  c.output_dir = (g_root / subdir).string();
  c.family = GraphFamily::complete;
  c.vertex_kind = VertexKind::dft;
  c.unitarity_tolerance = kUnitarity;
  c.perron_tolerance = kPerron;
  c.resolvent_tolerance = kResolvent;
  c.evaluator_tolerance = kEvaluator;
  c.coset_tolerance = kCoset;
  c.gap_threshold = kFrozenGap;
  c.gap_threshold_slack = kFrozenGapSlack;
  c.t_slope_target = -1.0;
  c.t_slope_tolerance = kTSlopeTolerance;
  c.term1_slope_target = -1.0;
  c.term1_slope_tolerance = kTerm1SlopeTolerance;
  return c;
}

const CriterionResult* find(const RunReport& r, int number) {
  for (const auto& c : r.criteria)
    if (c.number == number) return &c;
  return nullptr;
}

Line from_report(const RunReport& r, int number, const std::string& extra = {}) {
  const CriterionResult* c = find(r, number);
  if (c == nullptr) return {number, "missing", false, "criterion not reported by " + std::string(to_string(r.command))};
  std::string detail = c->detail;
  for (const auto& e : r.errors) detail += "; V=" + std::to_string(e.size) + " " + e.code + ": " + e.message;
  if (!extra.empty()) detail += "; " + extra;
  return {number, c->name, c->passed, detail};
}

// Byte comparison of every CSV written by the same command at 1 and 4 threads.
Line determinism() {
  bool ok = true;
  std::string detail;
  int compared = 0;
  struct Case {
    Command command;
    std::vector<int> sizes;
  };
  const std::vector<Case> cases = {
      {Command::gap_sweep, {8, 12, 16}},
      {Command::w_stats, {8, 12}},
      {Command::source_scaling, {8, 10, 12, 14, 16}},
      {Command::contraction_check, {}},
      {Command::coset_verify, {}},
      {Command::form_factor, {8}},
  };
  for (const auto& k : cases) {
    std::vector<std::string> files;
    std::vector<fs::path> dirs;
    for (int threads : {1, 4}) {
      ExperimentConfig c = pinned("determinism-" + std::string(to_string(k.command)) + "-t" + std::to_string(threads));
      c.threads = threads;
      if (!k.sizes.empty()) c.sizes = k.sizes;
      c.contraction_sizes = {3, 6};
      c.coset_points = 3;
      c.ff_samples = 40;
      const RunReport r = run_experiment(k.command, c);
      files = r.files;
      dirs.push_back(c.output_dir);
    }
    for (const auto& f : files) {
      if (!f.ends_with(".csv")) continue;
      ++compared;
      if (read_text_file(dirs[0] / f) != read_text_file(dirs[1] / f)) {
        ok = false;
        detail += (detail.empty() ? "" : ", ") + f + " differs";
      }
    }
  }
  if (ok) detail = std::to_string(compared) + " CSV files byte-identical at threads 1 and 4";
  return {9, "determinism", ok && compared > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  g_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "qgraph-acceptance";
  fs::remove_all(g_root);
  std::vector<Line> lines;

  try {
    // 1 and 6: complete graphs through V = 32, plus a random cubic ensemble
    // for the structural checks.
    ExperimentConfig gap = pinned("gap-sweep");
    gap.sizes = {8, 16, 24, 32};
    const RunReport gap_run = run_experiment(Command::gap_sweep, gap);
    ExperimentConfig cubic = pinned("gap-sweep-cubic");
    cubic.family = GraphFamily::random_regular;
    cubic.degree = 3;
    cubic.sizes = {10, 20, 30, 40};
    const RunReport cubic_run = run_experiment(Command::gap_sweep, cubic);
    Line one = from_report(gap_run, 1);
    const CriterionResult* cubic_one = find(cubic_run, 1);
    const bool cubic_ok = cubic_one != nullptr && cubic_one->passed && cubic_run.errors.empty();
    one.passed = one.passed && cubic_ok;
    one.detail += "; random cubic " + std::string(cubic_ok ? "ok" : "FAILED") +
                  (cubic_one ? " (" + cubic_one->detail + ")" : std::string());
    lines.push_back(one);

    ExperimentConfig w = pinned("w-stats");
    w.sizes = {8, 16};
    lines.push_back(from_report(run_experiment(Command::w_stats, w), 2));

    ExperimentConfig contraction = pinned("contraction-check");
    contraction.contraction_sizes = {3, 8, 16};
    contraction.brute_force_limit = 6;
    const RunReport contraction_run = run_experiment(Command::contraction_check, contraction);
    lines.push_back(from_report(contraction_run, 3));
    lines.push_back(from_report(contraction_run, 4));

    ExperimentConfig scaling = pinned("source-scaling");
    scaling.sizes = {8, 12, 16, 24, 32, 40};
    lines.push_back(from_report(run_experiment(Command::source_scaling, scaling), 5));

    lines.push_back(from_report(gap_run, 6));

    ExperimentConfig coset = pinned("coset-verify");
    coset.generator_counts = {2, 4, 6};
    coset.coset_points = 20;
    for (CosetProfile profile : {CosetProfile::generic, CosetProfile::physical}) {
      coset.coset_profile = profile;
      coset.output_dir = (g_root / ("coset-verify-" + std::string(to_string(profile)))).string();
      Line seven = from_report(run_experiment(Command::coset_verify, coset), 7);
      seven.detail = std::string(to_string(profile)) + ": " + seven.detail;
      if (profile == CosetProfile::generic) {
        lines.push_back(seven);
      } else {
        lines.back().passed = lines.back().passed && seven.passed;
        lines.back().detail += "; " + seven.detail;
      }
    }

    ExperimentConfig ff = pinned("form-factor");
    ff.sizes = {16};
    ff.ff_samples = 200;
    ff.ff_n_max = 0;
    ff.ff_window_lo = 1;
    ff.ff_window_hi = 0;
    ff.ff_threshold = kUniversality;
    ff.ff_standard_errors = kFirstValueStandardErrors;
    lines.push_back(from_report(run_experiment(Command::form_factor, ff), 8));

    lines.push_back(determinism());
  } catch (const std::exception& e) {
    std::printf("FAIL  acceptance run aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const auto& l : lines) {
    std::printf("%s  criterion %d (%s): %s\n", l.passed ? "PASS" : "FAIL", l.number, l.name.c_str(), l.detail.c_str());
    failed += !l.passed;
  }
  std::printf("%d of %zu criteria passed; outputs in %s\n", static_cast<int>(lines.size()) - failed, lines.size(),
              g_root.string().c_str());
  return failed == 0 ? 0 : 1;
}
