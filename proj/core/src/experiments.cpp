#include "qgraph/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qgraph/coset.hpp"
#include "qgraph/csv.hpp"
#include "qgraph/error.hpp"
#include "qgraph/form_factor.hpp"
#include "qgraph/massive_modes.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/perron_frobenius.hpp"
#include "qgraph/random.hpp"
#include "qgraph/wick.hpp"

namespace qgraph {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kCommandNames[] = {"gap-sweep",         "w-stats",      "source-scaling",
                                              "contraction-check", "coset-verify", "form-factor"};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string format_scientific(double v) {
  std::ostringstream o;
  o.precision(3);
  o << std::scientific << v;
  return o.str();
}

SizeError to_size_error(int size, const std::exception& e) {
  if (const auto* q = dynamic_cast<const Error*>(&e)) return {size, std::string(to_string(q->code())), q->what()};
  return {size, "exception", e.what()};
}

/// Everything one size of a sweep needs from the scattering layer.
struct Ensemble {
  int vertices = 0;
  Graph graph;
  PropagationMatrix bcal;
  BondLengths lengths;
};

Ensemble make_ensemble(const ExperimentConfig& c, int v) {
  Graph g = build_family_graph(c, v);
  PropagationMatrix b = build_propagation(g, c.vertex_kind);
  BondLengths l = sample_bond_lengths(g.bond_count(), c.length_low, c.length_high, derive_seed(c.seed, 1000 + v));
  return {v, std::move(g), std::move(b), std::move(l)};
}

GapMethod pick_method(const ExperimentConfig& c, int dimension) {
  switch (c.gap_method) {
    case GapMethodChoice::dense:
      return GapMethod::dense;
    case GapMethodChoice::deflated_power:
      return GapMethod::deflated_power;
    default:
      return dimension <= c.dense_limit ? GapMethod::dense : GapMethod::deflated_power;
  }
}

/// Per-size outcome of a sweep: a result or the error that stopped it.
template <class T>
struct Slot {
  std::optional<T> value;
  std::optional<SizeError> error;
};

template <class T>
std::vector<Slot<T>> sweep(const std::vector<int>& sizes, int threads, const std::function<T(int)>& body) {
  std::vector<Slot<T>> out(sizes.size());
  parallel_for(sizes.size(), threads, [&](std::size_t i) {
    try {
      out[i].value = body(sizes[i]);
    } catch (const std::exception& e) {
      out[i].error = to_size_error(sizes[i], e);
    }
  });
  return out;
}

class ReportBuilder {
 public:
  ReportBuilder(Command command, const ExperimentConfig& config) : config_(config) {
    report_.command = command;
    dir_ = config.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_))
      fail(Errc::io_error, "cannot create output directory " + dir_.string() + (ec ? ": " + ec.message() : ""));
  }

  void criterion(int number, std::string name, bool passed, std::string detail) {
    report_.criteria.push_back({number, std::move(name), passed, std::move(detail)});
  }
  void error(SizeError e) { report_.errors.push_back(std::move(e)); }
  template <class T>
  void collect_errors(const std::vector<Slot<T>>& slots) {
    for (const auto& s : slots)
      if (s.error) error(*s.error);
  }

  void write(const std::string& name, const std::string& text) {
    write_text_file(dir_ / name, text);
    report_.files.push_back(name);
  }

  json& results() { return results_; }

  RunReport finish(std::chrono::steady_clock::time_point start) {
    const std::string stem(to_string(report_.command));
    json body;
    body["command"] = stem;
    body["version"] = std::string(kVersion);
    // threads and output_dir describe the execution, not the result; they
    // go to "meta" so the deterministic copy does not depend on them.
    ExperimentConfig normalized = config_;
    normalized.threads = 1;
    normalized.output_dir.clear();
    body["config"] = config_to_ini(normalized);
    body["results"] = results_;
    json criteria = json::array();
    for (const auto& c : report_.criteria)
      criteria.push_back({{"criterion", c.number}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    body["criteria"] = criteria;
    json errors = json::array();
    for (const auto& e : report_.errors) errors.push_back({{"size", e.size}, {"code", e.code}, {"message", e.message}});
    body["errors"] = errors;
    body["all_passed"] = report_.all_passed();
    report_.files.push_back(stem + ".json");
    body["files"] = report_.files;
    report_.deterministic_json = body.dump(2) + "\n";

    report_.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    body["meta"] = {{"timestamp", stamp},
                    {"runtime_seconds", report_.runtime_seconds},
                    {"threads", config_.threads},
                    {"output_dir", config_.output_dir}};
    report_.json = body.dump(2) + "\n";
    write_text_file(dir_ / (stem + ".json"), report_.json);
    return report_;
  }

 private:
  const ExperimentConfig& config_;
  std::filesystem::path dir_;
  RunReport report_;
  json results_ = json::object();
};

// ---------------------------------------------------------------- gap-sweep

struct GapRow {
  int vertices = 0;
  int bonds = 0;
  std::vector<GapReport> gaps;
  double sigma_defect = 0.0;
  double bcal_defect = 0.0;
  double map_defect = 0.0;
  double bistochastic = 0.0;
  double perron = 0.0;
};

void run_gap_sweep(const ExperimentConfig& c, ReportBuilder& rb) {
  auto slots = sweep<GapRow>(c.sizes, c.threads, [&](int v) {
    GapRow row;
    const Graph g = build_family_graph(c, v);
    const auto vm = vertex_matrices(g, c.vertex_kind);
    const BondScatteringMatrix sigma = assemble_bond_scattering(g, vm);
    const PropagationMatrix bcal = propagation_matrix(sigma);
    const BondLengths lengths =
        sample_bond_lengths(g.bond_count(), c.length_low, c.length_high, derive_seed(c.seed, 1000 + v));
    const QuantumMap u = quantum_map(bcal, lengths, sample_phases(bcal.dimension(), derive_seed(c.seed, 2000 + v)), 1.0);
    const PFOperator f = build_pf(bcal);
    row.vertices = v;
    row.bonds = g.bond_count();
    row.sigma_defect = unitarity_defect(sigma.matrix);
    row.bcal_defect = unitarity_defect(bcal.matrix);
    row.map_defect = unitarity_defect(u.matrix);
    row.bistochastic = bistochastic_defect(f.matrix);
    const int dim = bcal.dimension();
    std::vector<GapMethod> methods;
    if (c.gap_method == GapMethodChoice::both) methods = {GapMethod::dense, GapMethod::deflated_power};
    else methods = {pick_method(c, dim)};
    for (GapMethod m : methods) row.gaps.push_back(spectral_gap(f, m));
    row.perron = row.gaps.front().perron_residual;
    return row;
  });
  rb.collect_errors(slots);

  CsvTable table({"V", "B", "twoB", "gap_a", "lambda_sub", "method"});
  double worst_unitary = 0.0, worst_bistochastic = 0.0, worst_perron = 0.0, min_gap = INFINITY;
  bool complete = true;
  json rows = json::array();
  for (const auto& s : slots) {
    if (!s.value) {
      complete = false;
      continue;
    }
    const GapRow& r = *s.value;
    worst_unitary = std::max({worst_unitary, r.sigma_defect, r.bcal_defect, r.map_defect});
    worst_bistochastic = std::max(worst_bistochastic, r.bistochastic);
    worst_perron = std::max(worst_perron, r.perron);
    for (const auto& g : r.gaps) {
      table.add_row({std::int64_t{r.vertices}, std::int64_t{r.bonds}, std::int64_t{2 * r.bonds}, g.gap, g.lambda_sub,
                     std::string(to_string(g.method))});
      min_gap = std::min(min_gap, g.gap);
      rows.push_back({{"V", r.vertices}, {"method", std::string(to_string(g.method))}, {"gap_a", number(g.gap)},
                      {"iterations", g.iterations}});
    }
  }
  rb.write("gap-sweep.csv", table.to_string());
  rb.write("gap-sweep.dat", table.to_gnuplot({0, 3}));
  rb.results()["sizes"] = rows;
  rb.results()["max_unitarity_defect"] = number(worst_unitary);
  rb.results()["max_bistochastic_defect"] = number(worst_bistochastic);
  rb.results()["max_perron_residual"] = number(worst_perron);
  rb.results()["min_gap"] = number(min_gap);

  const bool structural = complete && worst_unitary <= c.unitarity_tolerance &&
                          worst_bistochastic <= c.unitarity_tolerance && worst_perron < c.perron_tolerance;
  rb.criterion(1, "structural-exactness", structural,
               "unitarity " + format_scientific(worst_unitary) + ", bistochastic " +
                   format_scientific(worst_bistochastic) + ", Perron residual " + format_scientific(worst_perron));
  const bool persistent = complete && min_gap >= c.gap_threshold - c.gap_threshold_slack;
  rb.criterion(6, "gap-persistence", persistent,
               "min gap " + format_double(min_gap) + " vs frozen threshold " + format_double(c.gap_threshold));
}

// ------------------------------------------------------------------ w-stats

struct WStatsRow {
  int vertices = 0;
  int bonds = 0;
  double gap = 0.0;
  EstimateReport diag, offdiag, chain;
  MagnitudeStats magnitudes;
  double trace_w_error = 0.0;
  double trace_w2_error = 0.0;
  double norm_sq = 0.0;
  double worst_row_square = 0.0;
};

void run_w_stats(const ExperimentConfig& c, ReportBuilder& rb) {
  auto slots = sweep<WStatsRow>(c.sizes, c.threads, [&](int v) {
    const Ensemble e = make_ensemble(c, v);
    const PFOperator f = build_pf(e.bcal);
    const GapReport spectrum = spectral_gap(f, GapMethod::dense);
    const PFResolvent res(f, spectrum.gap);
    const auto w = res.w_matrices(2);
    WStatsRow row;
    row.vertices = v;
    row.bonds = e.graph.bond_count();
    row.gap = spectrum.gap;
    row.diag = diag_w_average(w[0], spectrum);
    row.offdiag = offdiag_w_stats(w[0], spectrum.gap);
    row.chain = chain_product_check(res, c.chain_order, c.chain_samples, derive_seed(c.seed, 3000 + v));
    row.magnitudes = b_magnitude_stats(e.bcal);
    Complex s1 = 0.0, s2 = 0.0;
    for (Complex l : subleading_eigenvalues(spectrum)) {
      s1 += 1.0 / (1.0 - l);
      s2 += 1.0 / ((1.0 - l) * (1.0 - l));
    }
    row.trace_w_error = std::abs(w[0].matrix.trace() - s1);
    row.trace_w2_error = std::abs((w[0].matrix * w[0].matrix).trace() - s2);
    row.norm_sq = std::pow(operator_norm(w[0].matrix), 2);
    const RealMatrix sq = w[0].matrix.cwiseProduct(w[0].matrix.transpose());
    row.worst_row_square = sq.rowwise().sum().cwiseAbs().maxCoeff();
    return row;
  });
  rb.collect_errors(slots);

  CsvTable table({"V", "B", "twoB", "gap_a", "diag_average", "diag_bound", "offdiag_mean", "offdiag_rms",
                  "offdiag_estimate", "chain_median_ratio", "flatness", "trace_w_error", "trace_w2_error"});
  double worst = 0.0;
  bool complete = true, norm_bound = true;
  json rows = json::array();
  for (const auto& s : slots) {
    if (!s.value) {
      complete = false;
      continue;
    }
    const WStatsRow& r = *s.value;
    const double rms = r.offdiag.detail("rms");
    table.add_row({std::int64_t{r.vertices}, std::int64_t{r.bonds}, std::int64_t{2 * r.bonds}, r.gap, r.diag.exact,
                   r.diag.estimate, r.offdiag.detail("mean"), rms, r.offdiag.estimate, r.chain.ratio,
                   r.magnitudes.report.detail("flatness"), r.trace_w_error, r.trace_w2_error});
    worst = std::max({worst, r.trace_w_error, r.trace_w2_error});
    norm_bound = norm_bound && r.worst_row_square <= r.norm_sq * (1.0 + 1e-9);
    rows.push_back({{"V", r.vertices},
                    {"diag_average", number(r.diag.exact)},
                    {"diag_within_bound", r.diag.exact <= r.diag.estimate},
                    {"offdiag_mean_identity_error", number(r.offdiag.detail("mean_identity_error"))},
                    {"offdiag_rms_over_estimate", number(rms / r.offdiag.estimate)},
                    {"chain_median_ratio_open", number(r.chain.detail("median_ratio_open"))},
                    {"chain_median_ratio_closed", number(r.chain.detail("median_ratio_closed"))},
                    {"chain_interior_averaged", number(r.chain.detail("median_ratio_interior_averaged"))},
                    {"flatness", number(r.magnitudes.report.detail("flatness"))},
                    {"row_square_within_norm", r.worst_row_square <= r.norm_sq * (1.0 + 1e-9)}});
  }
  rb.write("w-stats.csv", table.to_string());
  rb.write("w-stats.dat", table.to_gnuplot({2, 4}));
  rb.results()["sizes"] = rows;
  rb.results()["max_trace_error"] = number(worst);
  rb.criterion(2, "resolvent-consistency", complete && worst <= c.resolvent_tolerance,
               "max |Tr W^k - spectral sum| = " + format_scientific(worst));
  rb.results()["row_square_within_operator_norm"] = norm_bound;
}

// ----------------------------------------------------------- source-scaling

struct ScalingRow {
  int vertices = 0;
  int bonds = 0;
  double gap = 0.0;
  std::string method;
  SourceTerm t;
  std::vector<double> m1n2, m2n22;
};

void run_source_scaling(const ExperimentConfig& c, ReportBuilder& rb) {
  auto slots = sweep<ScalingRow>(c.sizes, c.threads, [&](int v) {
    const Ensemble e = make_ensemble(c, v);
    const PFOperator f = build_pf(e.bcal);
    const GapMethod method = pick_method(c, f.dimension());
    const GapReport gap = spectral_gap(f, method);
    const PFResolvent res(f, gap.gap);
    const auto w = res.w_matrices(3);
    ScalingRow row;
    row.vertices = v;
    row.bonds = e.graph.bond_count();
    row.gap = gap.gap;
    row.method = to_string(method);
    row.t = source_term_value(w[0], row.bonds, gap.gap);
    row.m1n2 = higher_order_values(w, row.bonds, HigherOrderCase::m1n2);
    row.m2n22 = higher_order_values(w, row.bonds, HigherOrderCase::m2n22);
    return row;
  });
  rb.collect_errors(slots);

  CsvTable table({"B", "T_value", "bound", "slope_running"});
  CsvTable higher({"V", "B", "twoB", "m1n2_1", "m1n2_2", "m2n22_1", "m2n22_2", "m2n22_3", "m2n22_4", "m2n22_5",
                   "m2n22_6", "dominance"});
  std::vector<double> bs, ts, twobs, term1;
  bool complete = true, bounded = true;
  double last_dominance = NAN;
  for (const auto& s : slots) {
    if (!s.value) {
      complete = false;
      continue;
    }
    const ScalingRow& r = *s.value;
    bs.push_back(r.bonds);
    ts.push_back(r.t.value);
    twobs.push_back(2.0 * r.bonds);
    term1.push_back(r.m1n2[0]);
    bounded = bounded && r.t.within_bound;
    double running = NAN;
    if (bs.size() >= 5) running = fit_loglog(bs, ts).slope;
    table.add_row({std::int64_t{r.bonds}, r.t.value, r.t.bound, running});
    last_dominance = dominance_margin(r.m2n22);
    std::vector<CsvCell> h{std::int64_t{r.vertices}, std::int64_t{r.bonds}, std::int64_t{2 * r.bonds}};
    for (double x : r.m1n2) h.emplace_back(x);
    for (double x : r.m2n22) h.emplace_back(x);
    h.emplace_back(last_dominance);
    higher.add_row(std::move(h));
  }
  rb.write("source-scaling.csv", table.to_string());
  rb.write("source-scaling-higher.csv", higher.to_string());
  rb.write("source-scaling.dat", table.to_gnuplot({0, 1}));

  double t_slope = NAN, term1_slope = NAN;
  if (bs.size() >= 5) {
    t_slope = fit_loglog(bs, ts).slope;
    term1_slope = fit_loglog(twobs, term1).slope;
  }
  rb.results()["t_slope"] = number(t_slope);
  rb.results()["term1_slope"] = number(term1_slope);
  rb.results()["dominance_at_largest"] = number(last_dominance);
  rb.results()["t_within_bound"] = bounded;
  const bool t_ok = std::abs(t_slope - c.t_slope_target) <= c.t_slope_tolerance;
  const bool term1_ok = std::abs(term1_slope - c.term1_slope_target) <= c.term1_slope_tolerance;
  const bool dominance_ok = last_dominance > 1.0;
  rb.criterion(5, "decay-slopes", complete && t_ok && term1_ok && dominance_ok,
               "T slope " + format_double(t_slope) + ", term-1 slope " + format_double(term1_slope) +
                   ", dominance margin " + format_double(last_dominance));
}

// -------------------------------------------------------- contraction-check

struct ContractionRow {
  int vertices = 0;
  int twob = 0;
  std::vector<TermValue> m1n2, m2n22;
  std::vector<double> direct_m1n2, direct_m2n22;
  std::vector<std::optional<double>> brute_m1n2, brute_m2n22;
  double m0_value = 0.0;
  double t_value = 0.0;
};

void run_contraction_check(const ExperimentConfig& c, ReportBuilder& rb) {
  const TracePattern m0{};
  const TracePattern m1 = pattern_for(HigherOrderCase::m1n2);
  const TracePattern m2 = pattern_for(HigherOrderCase::m2n22);
  const EnumerationResult e0 = enumerate_contractions(m0);
  const EnumerationResult e1 = enumerate_contractions(m1);
  const EnumerationResult e2 = enumerate_contractions(m2);
  const PatternLayout l1 = make_layout(m1);
  const PatternLayout l2 = make_layout(m2);
  const auto ref1 = reference_forms(HigherOrderCase::m1n2);
  const auto ref2 = reference_forms(HigherOrderCase::m2n22);

  json counts = {{"m0", e0.terms.size()}, {"m1n2", e1.terms.size()}, {"m2n22", e2.terms.size()}};
  rb.results()["counts"] = counts;
  auto describe = [](const EnumerationResult& r) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"id", t.id}, {"form", t.form.text}, {"multiplicity", t.multiplicity}});
    return json{{"total_pairings", r.total_pairings}, {"surviving_pairings", r.surviving_pairings}, {"terms", terms}};
  };
  rb.results()["enumeration"] = {{"m0", describe(e0)}, {"m1n2", describe(e1)}, {"m2n22", describe(e2)}};
  const bool counts_ok = e0.terms.size() == 1 && e1.terms.size() == 2 && e2.terms.size() == 6;
  rb.criterion(3, "contraction-counts", counts_ok,
               "m0 " + std::to_string(e0.terms.size()) + " (expect 1), m1n2 " + std::to_string(e1.terms.size()) +
                   " (expect 2), m2n22 " + std::to_string(e2.terms.size()) + " (expect 6)");

  auto slots = sweep<ContractionRow>(c.contraction_sizes, c.threads, [&](int v) {
    const Ensemble e = make_ensemble(c, v);
    const PFOperator f = build_pf(e.bcal);
    const GapReport gap = spectral_gap(f, pick_method(c, f.dimension()));
    const PFResolvent res(f, gap.gap);
    const auto w = res.w_matrices(3);
    ContractionRow row;
    row.vertices = v;
    row.twob = f.dimension();
    const int bonds = e.graph.bond_count();
    const double prefactor = 1.0 / (static_cast<double>(bonds) * bonds);
    row.m0_value = evaluate_term(e0.terms.at(0), w, &e.bcal, prefactor).network.real() * prefactor;
    row.t_value = source_term_value(w[0], bonds, gap.gap).value;
    row.direct_m1n2 = higher_order_values(w, bonds, HigherOrderCase::m1n2);
    row.direct_m2n22 = higher_order_values(w, bonds, HigherOrderCase::m2n22);
    const bool brute = row.twob <= c.brute_force_limit;
    for (const auto& t : e1.terms) {
      row.m1n2.push_back(evaluate_term(t, w, &e.bcal, prefactor));
      row.brute_m1n2.push_back(brute ? std::optional(brute_force_sum(l1, t.pairing, w[0], &e.bcal).real() * prefactor)
                                     : std::nullopt);
    }
    for (const auto& t : e2.terms) {
      row.m2n22.push_back(evaluate_term(t, w, &e.bcal, prefactor));
      row.brute_m2n22.push_back(brute ? std::optional(brute_force_sum(l2, t.pairing, w[0], &e.bcal).real() * prefactor)
                                      : std::nullopt);
    }
    return row;
  });
  rb.collect_errors(slots);

  CsvTable table({"V", "twoB", "case", "term_id", "form", "multiplicity", "value", "direct", "brute_force"});
  double worst_direct = 0.0, worst_brute = 0.0, worst_sum = 0.0;
  bool complete = true, brute_seen = false;
  json per_size = json::array();
  for (const auto& s : slots) {
    if (!s.value) {
      complete = false;
      continue;
    }
    const ContractionRow& r = *s.value;
    worst_direct = std::max(worst_direct, std::abs(r.m0_value - r.t_value));
    auto emit = [&](const char* which, const std::vector<TermValue>& values, const std::vector<double>& direct,
                    const std::vector<std::string>& refs, const std::vector<std::optional<double>>& brute) {
      double matched_sum = 0.0, direct_sum = 0.0;
      json terms = json::array();
      for (std::size_t i = 0; i < values.size(); ++i) {
        const TermValue& tv = values[i];
        // Published forms carry no multiplicity: compare the bare sum / B^2.
        const double value = tv.network.real() / (static_cast<double>(r.twob) * r.twob / 4.0);
        double d = NAN;
        for (std::size_t k = 0; k < refs.size(); ++k)
          if (refs[k] == tv.text) {
            d = direct[k];
            matched_sum += value;
            direct_sum += direct[k];
            worst_direct = std::max(worst_direct, std::abs(value - d));
          }
        const double b = brute[i] ? *brute[i] : NAN;
        if (brute[i]) {
          brute_seen = true;
          worst_brute = std::max(worst_brute, std::abs(value - b));
        }
        table.add_row({std::int64_t{r.vertices}, std::int64_t{r.twob}, std::string(which), std::int64_t{tv.term_id},
                       tv.text, std::int64_t{tv.multiplicity}, value, d, b});
        terms.push_back({{"id", tv.term_id}, {"form", tv.text}, {"value", number(value)}, {"direct", number(d)},
                         {"brute_force", number(b)}, {"published", std::isfinite(d)}});
      }
      worst_sum = std::max(worst_sum, std::abs(matched_sum - direct_sum));
      return json{{"terms", terms}, {"published_sum", number(matched_sum)}, {"direct_sum", number(direct_sum)}};
    };
    json entry;
    entry["V"] = r.vertices;
    entry["twoB"] = r.twob;
    entry["m0"] = number(r.m0_value);
    entry["m1n2"] = emit("m1n2", r.m1n2, r.direct_m1n2, ref1, r.brute_m1n2);
    entry["m2n22"] = emit("m2n22", r.m2n22, r.direct_m2n22, ref2, r.brute_m2n22);
    per_size.push_back(entry);
  }
  rb.write("contraction-check.csv", table.to_string());
  rb.results()["sizes"] = per_size;
  rb.results()["max_direct_deviation"] = number(worst_direct);
  rb.results()["max_sum_deviation"] = number(worst_sum);
  rb.results()["max_brute_force_deviation"] = brute_seen ? number(worst_brute) : json(nullptr);
  const bool ok = complete && brute_seen && worst_direct <= c.evaluator_tolerance &&
                  worst_sum <= c.evaluator_tolerance && worst_brute <= c.evaluator_tolerance;
  rb.criterion(4, "evaluator-equivalence", ok,
               "direct " + format_scientific(worst_direct) + ", sums " + format_scientific(worst_sum) +
                   ", brute force " + (brute_seen ? format_scientific(worst_brute) : std::string("not run")));
}

// ------------------------------------------------------------- coset-verify

void run_coset_verify(const ExperimentConfig& c, ReportBuilder& rb) {
  CosetSuiteOptions opts;
  opts.generator_counts = c.generator_counts;
  opts.points = c.coset_points;
  opts.seed = c.seed;
  opts.tolerance = c.coset_tolerance;
  opts.profile = c.coset_profile;
  const auto checks = run_coset_suite(opts);
  CsvTable table({"generators", "identity", "max_deviation", "tolerance", "passed", "seed"});
  bool all = !checks.empty();
  double worst = 0.0;
  json items = json::array();
  for (const auto& k : checks) {
    table.add_row({std::int64_t{k.generators}, k.identity, k.max_deviation, k.tolerance,
                   std::string(k.passed ? "true" : "false"), std::to_string(k.seed)});
    all = all && k.passed;
    worst = std::max(worst, k.max_deviation);
    items.push_back({{"generators", k.generators}, {"identity", k.identity}, {"max_deviation", number(k.max_deviation)},
                     {"passed", k.passed}});
  }
  rb.write("coset-verify.csv", table.to_string());
  rb.results()["checks"] = items;
  rb.results()["max_deviation"] = number(worst);
  rb.criterion(7, "coset-identities", all,
               std::to_string(checks.size()) + " identity/generator pairs, worst deviation " +
                   format_scientific(worst));
}

// -------------------------------------------------------------- form-factor

void run_form_factor(const ExperimentConfig& c, ReportBuilder& rb) {
  CsvTable table({"V", "n", "K", "standard_error", "cue"});
  bool all = true;
  json per_size = json::array();
  for (int v : c.sizes) {
    try {
      const Ensemble e = make_ensemble(c, v);
      const int dim = e.bcal.dimension();
      const int n_max = c.ff_n_max > 0 ? c.ff_n_max : 2 * dim;
      const int hi = c.ff_window_hi > 0 ? c.ff_window_hi : 2 * dim;
      FormFactorOptions opts;
      opts.threads = c.threads;
      opts.descriptor = std::string(to_string(c.family)) + " V=" + std::to_string(v) + " " +
                        std::string(to_string(c.vertex_kind));
      const FormFactorCurve curve = form_factor(e.bcal, e.lengths, n_max, c.ff_samples, derive_seed(c.seed, v), opts);
      const auto cue = cue_reference_curve(curve);
      const double dev = deviation(curve, cue, c.ff_window_lo, hi);
      const double analytic = analytic_first_value(e.bcal);
      const double diff = std::abs(curve.k[0] - analytic);
      const double allowed = c.ff_standard_errors * curve.standard_error[0];
      const bool first_ok = diff <= allowed || diff <= 1e-12;
      for (std::size_t i = 0; i < curve.n.size(); ++i)
        table.add_row({std::int64_t{v}, std::int64_t{curve.n[i]}, curve.k[i], curve.standard_error[i], cue[i]});
      const bool ok = dev < c.ff_threshold && first_ok;
      all = all && ok;
      per_size.push_back({{"V", v},
                          {"twoB", dim},
                          {"descriptor", opts.descriptor},
                          {"samples", c.ff_samples},
                          {"window", {c.ff_window_lo, hi}},
                          {"deviation", number(dev)},
                          {"first_value", number(curve.k[0])},
                          {"first_value_analytic", number(analytic)},
                          {"first_value_standard_error", number(curve.standard_error[0])},
                          {"passed", ok}});
    } catch (const std::exception& ex) {
      rb.error(to_size_error(v, ex));
      all = false;
    }
  }
  rb.write("form-factor.csv", table.to_string());
  rb.write("form-factor.dat", table.to_gnuplot({1, 2, 4}));
  rb.results()["sizes"] = per_size;
  const auto num = [](const json& j) { return j.is_null() ? NAN : j.get<double>(); };
  std::string detail;
  for (const auto& s : per_size)
    detail += (detail.empty() ? "" : "; ") + std::string("V=") + std::to_string(s["V"].get<int>()) + " MAD " +
              format_double(num(s["deviation"])) + ", K(1) " + format_scientific(num(s["first_value"])) +
              " vs analytic " + format_scientific(num(s["first_value_analytic"])) + " (SE " +
              format_scientific(num(s["first_value_standard_error"])) + ")";
  rb.criterion(8, "universality", all && !per_size.empty(), detail);
}

}  // namespace

std::string_view to_string(Command command) noexcept { return kCommandNames[static_cast<int>(command)]; }

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (Command c : all_commands())
    if (to_string(c) == name) return c;
  return std::nullopt;
}

const std::vector<Command>& all_commands() noexcept {
  static const std::vector<Command> all{Command::gap_sweep,         Command::w_stats,      Command::source_scaling,
                                        Command::contraction_check, Command::coset_verify, Command::form_factor};
  return all;
}

bool RunReport::all_passed() const noexcept {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return true;
}

int RunReport::exit_code() const noexcept { return all_passed() ? 0 : 2; }

Graph build_family_graph(const ExperimentConfig& config, int vertex_count) {
  if (config.family == GraphFamily::complete) return build_complete_graph(vertex_count);
  return build_random_regular(vertex_count, config.degree, derive_seed(config.seed, vertex_count));
}

RunReport run_experiment(Command command, const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  ReportBuilder rb(command, config);
  switch (command) {
    case Command::gap_sweep:
      run_gap_sweep(config, rb);
      break;
    case Command::w_stats:
      run_w_stats(config, rb);
      break;
    case Command::source_scaling:
      run_source_scaling(config, rb);
      break;
    case Command::contraction_check:
      run_contraction_check(config, rb);
      break;
    case Command::coset_verify:
      run_coset_verify(config, rb);
      break;
    case Command::form_factor:
      run_form_factor(config, rb);
      break;
  }
  return rb.finish(start);
}

}  // namespace qgraph
