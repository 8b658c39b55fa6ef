#include "qgraph/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qgraph/csv.hpp"
#include "qgraph/error.hpp"

namespace qgraph {

namespace {

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
    fail(Errc::invalid_argument, "config key '" + key + "': cannot parse '" + raw + "'");
  return value;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& raw) {
  std::vector<int> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, item));
  if (out.empty()) fail(Errc::invalid_argument, "config key '" + key + "': empty list");
  return out;
}

template <class E>
E parse_choice(const std::string& key, const std::string& raw, const std::vector<std::pair<std::string, E>>& options) {
  const std::string text = trim(raw);
  for (const auto& [name, value] : options)
    if (name == text) return value;
  std::string allowed;
  for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + name;
  fail(Errc::invalid_argument, "config key '" + key + "': '" + raw + "' is not one of " + allowed);
}

const std::vector<std::pair<std::string, GraphFamily>> kFamilies{{"complete", GraphFamily::complete},
                                                                 {"random_regular", GraphFamily::random_regular}};
const std::vector<std::pair<std::string, VertexKind>> kKinds{{"dft", VertexKind::dft}, {"neumann", VertexKind::neumann}};
const std::vector<std::pair<std::string, GapMethodChoice>> kMethods{{"auto", GapMethodChoice::automatic},
                                                                    {"dense", GapMethodChoice::dense},
                                                                    {"deflated_power", GapMethodChoice::deflated_power},
                                                                    {"both", GapMethodChoice::both}};
const std::vector<std::pair<std::string, CosetProfile>> kProfiles{{"generic", CosetProfile::generic},
                                                                  {"physical", CosetProfile::physical}};

template <class T>
Setter number(T ExperimentConfig::*field, const std::string& key) {
  return [field, key](ExperimentConfig& c, const std::string& v) { c.*field = parse_number<T>(key, v); };
}

Setter int_list(std::vector<int> ExperimentConfig::*field, const std::string& key) {
  return [field, key](ExperimentConfig& c, const std::string& v) { c.*field = parse_int_list(key, v); };
}

template <class E>
Setter choice(E ExperimentConfig::*field, const std::string& key, const std::vector<std::pair<std::string, E>>& opts) {
  return [field, key, &opts](ExperimentConfig& c, const std::string& v) { c.*field = parse_choice(key, v, opts); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["graph.family"] = choice(&ExperimentConfig::family, "graph.family", kFamilies);
    t["graph.sizes"] = int_list(&ExperimentConfig::sizes, "graph.sizes");
    t["graph.degree"] = number(&ExperimentConfig::degree, "graph.degree");
    t["graph.vertex_kind"] = choice(&ExperimentConfig::vertex_kind, "graph.vertex_kind", kKinds);
    t["graph.length_low"] = number(&ExperimentConfig::length_low, "graph.length_low");
    t["graph.length_high"] = number(&ExperimentConfig::length_high, "graph.length_high");
    t["run.seed"] = number(&ExperimentConfig::seed, "run.seed");
    t["run.threads"] = number(&ExperimentConfig::threads, "run.threads");
    t["run.output_dir"] = [](ExperimentConfig& c, const std::string& v) { c.output_dir = trim(v); };
    t["tolerances.unitarity"] = number(&ExperimentConfig::unitarity_tolerance, "tolerances.unitarity");
    t["tolerances.perron"] = number(&ExperimentConfig::perron_tolerance, "tolerances.perron");
    t["tolerances.resolvent"] = number(&ExperimentConfig::resolvent_tolerance, "tolerances.resolvent");
    t["tolerances.evaluator"] = number(&ExperimentConfig::evaluator_tolerance, "tolerances.evaluator");
    t["tolerances.coset"] = number(&ExperimentConfig::coset_tolerance, "tolerances.coset");
    t["gap.method"] = choice(&ExperimentConfig::gap_method, "gap.method", kMethods);
    t["gap.dense_limit"] = number(&ExperimentConfig::dense_limit, "gap.dense_limit");
    t["gap.threshold"] = number(&ExperimentConfig::gap_threshold, "gap.threshold");
    t["gap.threshold_slack"] = number(&ExperimentConfig::gap_threshold_slack, "gap.threshold_slack");
    t["w.chain_order"] = number(&ExperimentConfig::chain_order, "w.chain_order");
    t["w.chain_samples"] = number(&ExperimentConfig::chain_samples, "w.chain_samples");
    t["scaling.t_slope_target"] = number(&ExperimentConfig::t_slope_target, "scaling.t_slope_target");
    t["scaling.t_slope_tolerance"] = number(&ExperimentConfig::t_slope_tolerance, "scaling.t_slope_tolerance");
    t["scaling.term1_slope_target"] = number(&ExperimentConfig::term1_slope_target, "scaling.term1_slope_target");
    t["scaling.term1_slope_tolerance"] =
        number(&ExperimentConfig::term1_slope_tolerance, "scaling.term1_slope_tolerance");
    t["contraction.sizes"] = int_list(&ExperimentConfig::contraction_sizes, "contraction.sizes");
    t["contraction.brute_force_limit"] = number(&ExperimentConfig::brute_force_limit, "contraction.brute_force_limit");
    t["coset.generators"] = int_list(&ExperimentConfig::generator_counts, "coset.generators");
    t["coset.points"] = number(&ExperimentConfig::coset_points, "coset.points");
    t["coset.profile"] = choice(&ExperimentConfig::coset_profile, "coset.profile", kProfiles);
    t["form_factor.n_max"] = number(&ExperimentConfig::ff_n_max, "form_factor.n_max");
    t["form_factor.samples"] = number(&ExperimentConfig::ff_samples, "form_factor.samples");
    t["form_factor.window_lo"] = number(&ExperimentConfig::ff_window_lo, "form_factor.window_lo");
    t["form_factor.window_hi"] = number(&ExperimentConfig::ff_window_hi, "form_factor.window_hi");
    t["form_factor.threshold"] = number(&ExperimentConfig::ff_threshold, "form_factor.threshold");
    t["form_factor.standard_errors"] = number(&ExperimentConfig::ff_standard_errors, "form_factor.standard_errors");
    return t;
  }();
  return table;
}

template <class E>
std::string_view name_of(E value, const std::vector<std::pair<std::string, E>>& options) noexcept {
  for (const auto& [name, v] : options)
    if (v == value) return name;
  return "unknown";
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

std::string_view to_string(GraphFamily family) noexcept { return name_of(family, kFamilies); }
std::string_view to_string(VertexKind kind) noexcept { return name_of(kind, kKinds); }
std::string_view to_string(GapMethodChoice choice) noexcept { return name_of(choice, kMethods); }
std::string_view to_string(CosetProfile profile) noexcept { return name_of(profile, kProfiles); }

ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(Errc::invalid_argument, std::string("malformed config: ") + e.what());
  }
  ExperimentConfig config;
  bool seed_seen = false;
  for (const auto& [section, body] : tree) {
    if (body.empty()) fail(Errc::invalid_argument, "config key '" + section + "' must live inside a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) fail(Errc::invalid_argument, "unknown config key '" + full + "'");
      it->second(config, value.get_value<std::string>());
      seed_seen = seed_seen || full == "run.seed";
    }
  }
  if (!seed_seen) fail(Errc::invalid_argument, "config must set run.seed");
  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open config " + path.string());
  return parse_config(in);
}

void validate_config(const ExperimentConfig& c) {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(Errc::invalid_argument, "invalid config: " + what);
  };
  check(!c.sizes.empty(), "graph.sizes must not be empty");
  for (int v : c.sizes) check(v >= 2, "graph.sizes entries must be >= 2");
  for (int v : c.contraction_sizes) check(v >= 2, "contraction.sizes entries must be >= 2");
  check(c.degree >= 1, "graph.degree must be positive");
  check(c.length_low > 0.0 && c.length_high > c.length_low, "bond length interval must satisfy 0 < low < high");
  check(c.threads >= 1, "run.threads must be positive");
  for (double t : {c.unitarity_tolerance, c.perron_tolerance, c.resolvent_tolerance, c.evaluator_tolerance,
                   c.coset_tolerance, c.gap_threshold_slack, c.t_slope_tolerance, c.term1_slope_tolerance,
                   c.ff_threshold, c.ff_standard_errors})
    check(t > 0.0, "tolerances must be positive");
  check(c.dense_limit >= 2, "gap.dense_limit must be >= 2");
  check(c.chain_order >= 2, "w.chain_order must be >= 2");
  check(c.chain_samples >= 1, "w.chain_samples must be positive");
  for (int g : c.generator_counts) check(g >= 0 && g <= kMaxGenerators, "coset.generators entries must be in [0, 12]");
  check(c.coset_points >= 1, "coset.points must be positive");
  check(c.ff_n_max >= 0 && c.ff_samples >= 1, "form_factor.n_max >= 0 and samples >= 1");
  check(c.ff_window_lo >= 1 && c.ff_window_hi >= 0, "form_factor window bounds must be non-negative");
}

std::string config_to_ini(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[graph]\nfamily = " << to_string(c.family) << "\nsizes = " << join(c.sizes) << "\ndegree = " << c.degree
    << "\nvertex_kind = " << to_string(c.vertex_kind) << "\nlength_low = " << format_double(c.length_low)
    << "\nlength_high = " << format_double(c.length_high) << "\n\n";
  o << "[run]\nseed = " << c.seed << "\nthreads = " << c.threads << "\noutput_dir = " << c.output_dir << "\n\n";
  o << "[tolerances]\nunitarity = " << format_double(c.unitarity_tolerance)
    << "\nperron = " << format_double(c.perron_tolerance) << "\nresolvent = " << format_double(c.resolvent_tolerance)
    << "\nevaluator = " << format_double(c.evaluator_tolerance) << "\ncoset = " << format_double(c.coset_tolerance)
    << "\n\n";
  o << "[gap]\nmethod = " << to_string(c.gap_method) << "\ndense_limit = " << c.dense_limit
    << "\nthreshold = " << format_double(c.gap_threshold)
    << "\nthreshold_slack = " << format_double(c.gap_threshold_slack) << "\n\n";
  o << "[w]\nchain_order = " << c.chain_order << "\nchain_samples = " << c.chain_samples << "\n\n";
  o << "[scaling]\nt_slope_target = " << format_double(c.t_slope_target)
    << "\nt_slope_tolerance = " << format_double(c.t_slope_tolerance)
    << "\nterm1_slope_target = " << format_double(c.term1_slope_target)
    << "\nterm1_slope_tolerance = " << format_double(c.term1_slope_tolerance) << "\n\n";
  o << "[contraction]\nsizes = " << join(c.contraction_sizes) << "\nbrute_force_limit = " << c.brute_force_limit
    << "\n\n";
  o << "[coset]\ngenerators = " << join(c.generator_counts) << "\npoints = " << c.coset_points
    << "\nprofile = " << to_string(c.coset_profile) << "\n\n";
  o << "[form_factor]\nn_max = " << c.ff_n_max << "\nsamples = " << c.ff_samples << "\nwindow_lo = " << c.ff_window_lo
    << "\nwindow_hi = " << c.ff_window_hi << "\nthreshold = " << format_double(c.ff_threshold)
    << "\nstandard_errors = " << format_double(c.ff_standard_errors) << "\n";
  return o.str();
}

}  // namespace qgraph
