#include "qgraph/wick.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

void add_variable(PatternLayout& layout, int trace, std::string name) {
  layout.variable_trace.push_back(trace);
  layout.variable_names.push_back(std::move(name));
}

int add_slots(PatternLayout& layout, int trace, int variable, int psi_count, int psi_tilde_count) {
  for (int i = 0; i < psi_count; ++i) layout.psi.push_back({trace, SlotKind::psi, variable});
  for (int i = 0; i < psi_tilde_count; ++i) layout.psi_tilde.push_back({trace, SlotKind::psi_tilde, variable});
  return psi_count;
}

// Variable relabelings that leave the pattern invariant.
using Relabeling = std::vector<int>;

std::vector<Relabeling> symmetry_group(const PatternLayout& layout) {
  std::map<std::string, std::vector<int>> classes;
  for (int t = 2; t < layout.trace_count; ++t) classes[layout.trace_shape[t]].push_back(t);

  // Trace permutations: product of all permutations inside each class.
  std::vector<std::vector<int>> trace_maps{std::vector<int>(layout.trace_count)};
  std::iota(trace_maps[0].begin(), trace_maps[0].end(), 0);
  for (const auto& [shape, members] : classes) {
    std::vector<int> perm = members;
    std::vector<std::vector<int>> next;
    do {
      for (const auto& base : trace_maps) {
        auto m = base;
        for (std::size_t i = 0; i < members.size(); ++i) m[members[i]] = perm[i];
        next.push_back(std::move(m));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    trace_maps = std::move(next);
  }

  std::vector<Relabeling> group;
  const int nvars = static_cast<int>(layout.variable_trace.size());
  for (const auto& tmap : trace_maps) {
    // Rotation choices for every dressed trace.
    std::vector<int> dressed;
    for (int t = 2; t < layout.trace_count; ++t)
      if (!layout.trace_beta[t].empty()) dressed.push_back(t);
    std::vector<int> rot(dressed.size(), 0);
    while (true) {
      Relabeling r(nvars);
      std::iota(r.begin(), r.end(), 0);
      for (int t = 2; t < layout.trace_count; ++t) {
        const int target = tmap[t];
        int shift = 0;
        for (std::size_t d = 0; d < dressed.size(); ++d)
          if (dressed[d] == t) shift = rot[d];
        const auto& src_a = layout.trace_alpha[t];
        const auto& dst_a = layout.trace_alpha[target];
        const int l = static_cast<int>(src_a.size());
        for (int i = 0; i < l; ++i) r[src_a[i]] = dst_a[(i + shift) % l];
        const auto& src_b = layout.trace_beta[t];
        const auto& dst_b = layout.trace_beta[target];
        for (int i = 0; i < static_cast<int>(src_b.size()); ++i) r[src_b[i]] = dst_b[(i + shift) % l];
      }
      group.push_back(std::move(r));
      std::size_t d = 0;
      for (; d < dressed.size(); ++d) {
        const int l = static_cast<int>(layout.trace_alpha[dressed[d]].size());
        if (++rot[d] < l) break;
        rot[d] = 0;
      }
      if (d == dressed.size()) break;
    }
  }
  return group;
}

std::string canonical_with(const PatternLayout& layout, const SymbolicForm& form, const std::vector<Relabeling>& group) {
  std::string best;
  bool first = true;
  std::vector<std::string> parts;
  for (const auto& r : group) {
    parts.clear();
    auto name = [&](int v) { return layout.variable_names[r[v]]; };
    for (const auto& f : form.w)
      parts.push_back((f.order == 1 ? std::string("W") : "W" + std::to_string(f.order)) + "[" + name(f.row) + "," +
                      name(f.col) + "]");
    for (const auto& f : form.b)
      parts.push_back(std::string(f.adjoint ? "Bd" : "B") + "[" + name(f.row) + "," + name(f.col) + "]");
    for (int k : form.trace_powers) parts.push_back(k == 1 ? std::string("TrW") : "TrW" + std::to_string(k));
    std::sort(parts.begin(), parts.end());
    std::string text;
    for (const auto& p : parts) {
      if (!text.empty()) text += ' ';
      text += p;
    }
    if (first || text < best) {
      best = std::move(text);
      first = false;
    }
  }
  return best;
}

void validate_layout(const PatternLayout& layout) {
  if (layout.trace_count < 2) fail(Errc::invalid_pattern, "layout needs the two source traces");
  if (layout.psi.size() != layout.psi_tilde.size())
    fail(Errc::invalid_pattern, "psi and psi_tilde slot counts differ");
  if (static_cast<int>(layout.psi.size()) > kMaxPsiSlots)
    fail(Errc::invalid_pattern, "pattern exceeds " + std::to_string(kMaxPsiSlots) + " psi slots");
  const int nvars = static_cast<int>(layout.variable_trace.size());
  std::vector<int> balance(layout.trace_count, 0);
  for (const auto* slots : {&layout.psi, &layout.psi_tilde})
    for (const auto& s : *slots) {
      if (s.trace < 0 || s.trace >= layout.trace_count || s.variable < 0 || s.variable >= nvars)
        fail(Errc::invalid_pattern, "slot refers to an unknown trace or variable");
      balance[s.trace] += s.kind == SlotKind::psi ? 1 : -1;
    }
  for (int t = 0; t < layout.trace_count; ++t)
    if (balance[t] != 0) fail(Errc::invalid_pattern, "trace " + std::to_string(t) + " has unequal psi/psi_tilde counts");
  for (int v = 0; v < 2; ++v) {
    int in = 0, out = 0;
    for (const auto& s : layout.psi) out += s.variable == v;
    for (const auto& s : layout.psi_tilde) in += s.variable == v;
    if (in != 1 || out != 1) fail(Errc::invalid_pattern, "source variables need exactly one psi and one psi_tilde");
  }
}

}  // namespace

int SymbolicForm::max_order() const {
  int m = 0;
  for (const auto& f : w) m = std::max(m, f.order);
  for (int k : trace_powers) m = std::max(m, k);
  return m;
}

PatternLayout make_layout(const TracePattern& pattern) {
  PatternLayout layout;
  const int traces = 2 + static_cast<int>(pattern.plain.size() + pattern.dressed.size());
  layout.trace_count = traces;
  layout.trace_shape.resize(traces);
  layout.trace_alpha.resize(traces);
  layout.trace_beta.resize(traces);

  add_variable(layout, 0, "mu");
  add_variable(layout, 1, "nu");
  layout.trace_shape[0] = "S0";
  layout.trace_shape[1] = "S1";
  layout.trace_alpha[0] = {0};
  layout.trace_alpha[1] = {1};
  int psi_total = add_slots(layout, 0, 0, 1, 1);
  psi_total += add_slots(layout, 1, 1, 1, 1);

  int trace = 2;
  for (std::size_t j = 0; j < pattern.plain.size(); ++j, ++trace) {
    const int n = pattern.plain[j];
    if (n < 1) fail(Errc::invalid_pattern, "plain trace exponent must be >= 1");
    const int v = static_cast<int>(layout.variable_trace.size());
    add_variable(layout, trace, "r" + std::to_string(j));
    layout.trace_shape[trace] = "P" + std::to_string(n);
    layout.trace_alpha[trace] = {v};
    psi_total += add_slots(layout, trace, v, n, n);
    if (psi_total > kMaxPsiSlots)
      fail(Errc::invalid_pattern, "pattern exceeds " + std::to_string(kMaxPsiSlots) + " psi slots");
  }
  for (std::size_t t = 0; t < pattern.dressed.size(); ++t, ++trace) {
    const auto& d = pattern.dressed[t];
    if (d.p < 0 || d.q < 0 || d.l < 1) fail(Errc::invalid_pattern, "dressed trace needs p, q >= 0 and l >= 1");
    if (psi_total + d.l * (d.p + d.q + 1) > kMaxPsiSlots)
      fail(Errc::invalid_pattern, "pattern exceeds " + std::to_string(kMaxPsiSlots) + " psi slots");
    layout.trace_shape[trace] =
        "D" + std::to_string(d.p) + "," + std::to_string(d.q) + "," + std::to_string(d.l);
    std::vector<int> alpha, beta;
    for (int i = 0; i < d.l; ++i) {
      alpha.push_back(static_cast<int>(layout.variable_trace.size()));
      add_variable(layout, trace, "a" + std::to_string(t) + "_" + std::to_string(i));
    }
    for (int i = 0; i < d.l; ++i) {
      beta.push_back(static_cast<int>(layout.variable_trace.size()));
      add_variable(layout, trace, "b" + std::to_string(t) + "_" + std::to_string(i));
    }
    for (int i = 0; i < d.l; ++i) {
      const int next = alpha[(i + 1) % d.l];
      layout.b_factors.push_back({false, alpha[i], beta[i]});
      layout.b_factors.push_back({true, beta[i], next});
      psi_total += add_slots(layout, trace, beta[i], d.p + 1, d.p);
      psi_total += add_slots(layout, trace, next, d.q, d.q + 1);
    }
    layout.trace_alpha[trace] = alpha;
    layout.trace_beta[trace] = beta;
  }
  return layout;
}

std::vector<WFactor> raw_propagators(const PatternLayout& layout, const std::vector<int>& pairing) {
  require(pairing.size() == layout.psi.size(), "pairing size does not match the layout");
  std::vector<char> seen(pairing.size(), 0);
  for (int j : pairing) {
    require(j >= 0 && j < static_cast<int>(pairing.size()) && !seen[j], "pairing is not a bijection");
    seen[j] = 1;
  }
  std::vector<WFactor> out;
  out.reserve(pairing.size());
  for (std::size_t i = 0; i < pairing.size(); ++i)
    out.push_back({1, layout.psi[i].variable, layout.psi_tilde[pairing[i]].variable});
  return out;
}

namespace {

SymbolicForm collapse_sources(const PatternLayout& layout, const std::vector<int>& pairing) {
  SymbolicForm form;
  form.w = raw_propagators(layout, pairing);
  form.b = layout.b_factors;
  for (int s = 0; s < static_cast<int>(layout.variable_trace.size()); ++s) {
    if (layout.variable_trace[s] >= 2) {
      form.summed_variables.push_back(s);
      continue;
    }
    // Source index: exactly one propagator ends on it and one starts there.
    auto in = std::find_if(form.w.begin(), form.w.end(), [&](const WFactor& f) { return f.col == s; });
    auto out = std::find_if(form.w.begin(), form.w.end(), [&](const WFactor& f) { return f.row == s; });
    if (in == form.w.end() || out == form.w.end())
      fail(Errc::internal_consistency, "source index without both propagator ends");
    if (in == out) {
      form.trace_powers.push_back(in->order);
      form.w.erase(in);
      continue;
    }
    const WFactor merged{in->order + out->order, in->row, out->col};
    form.w.erase(std::max(in, out));
    form.w.erase(std::min(in, out));
    form.w.push_back(merged);
  }
  std::sort(form.trace_powers.begin(), form.trace_powers.end());
  return form;
}

}  // namespace

SymbolicForm classify_cycles(const PatternLayout& layout, const std::vector<int>& pairing) {
  validate_layout(layout);
  SymbolicForm form = collapse_sources(layout, pairing);
  form.text = canonical_text(layout, form);
  return form;
}

std::string canonical_text(const PatternLayout& layout, const SymbolicForm& form) {
  return canonical_with(layout, form, symmetry_group(layout));
}

EnumerationResult enumerate_contractions(const TracePattern& pattern) {
  return enumerate_contractions(make_layout(pattern));
}

EnumerationResult enumerate_contractions(const PatternLayout& layout) {
  validate_layout(layout);
  const int n = static_cast<int>(layout.psi.size());
  const auto group = symmetry_group(layout);

  EnumerationResult result;
  result.total_pairings = 1;
  for (int i = 2; i <= n; ++i) result.total_pairings *= i;

  std::map<std::string, ContractionTerm> classes;
  std::vector<int> pairing(n, -1);
  std::vector<char> used(n, 0);

  // True when some fully paired component misses a trace.
  auto closed_early = [&](int assigned) {
    UnionFind uf(layout.trace_count);
    for (int i = 0; i < assigned; ++i) uf.unite(layout.psi[i].trace, layout.psi_tilde[pairing[i]].trace);
    std::vector<int> open(layout.trace_count, 0);
    for (int i = assigned; i < n; ++i) ++open[uf.find(layout.psi[i].trace)];
    std::vector<int> size(layout.trace_count, 0);
    for (int t = 0; t < layout.trace_count; ++t) ++size[uf.find(t)];
    for (int t = 0; t < layout.trace_count; ++t)
      if (uf.find(t) == t && open[t] == 0 && size[t] < layout.trace_count) return true;
    return false;
  };

  std::function<void(int)> recurse = [&](int i) {
    if (i == n) {
      SymbolicForm form = collapse_sources(layout, pairing);
      form.text = canonical_with(layout, form, group);
      auto [it, inserted] = classes.try_emplace(form.text);
      if (inserted) {
        it->second.pairing = pairing;
        it->second.form = std::move(form);
      }
      ++it->second.multiplicity;
      ++result.surviving_pairings;
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      pairing[i] = j;
      if (!closed_early(i + 1)) recurse(i + 1);
      used[j] = 0;
      pairing[i] = -1;
    }
  };
  recurse(0);

  int id = 0;
  for (auto& [text, term] : classes) {
    term.id = id++;
    result.terms.push_back(std::move(term));
  }
  return result;
}

TracePattern pattern_for(HigherOrderCase which) {
  return which == HigherOrderCase::m1n2 ? TracePattern{{2}, {}} : TracePattern{{2, 2}, {}};
}

std::vector<std::string> reference_forms(HigherOrderCase which) {
  const PatternLayout layout = make_layout(pattern_for(which));
  const int r = 2, t = 3;  // variables of the first and second plain trace
  std::vector<std::vector<WFactor>> forms;
  if (which == HigherOrderCase::m1n2) {
    forms = {{{3, r, r}, {1, r, r}}, {{2, r, r}, {2, r, r}}};
  } else {
    forms = {
        {{3, r, r}, {1, r, t}, {1, t, r}, {1, t, t}},
        {{3, t, r}, {1, r, t}, {1, r, t}, {1, t, r}},
        {{3, t, r}, {1, r, t}, {1, r, r}, {1, t, t}},
        {{2, r, t}, {2, t, r}, {1, r, t}, {1, t, r}},
        {{2, r, r}, {2, t, t}, {1, r, t}, {1, t, r}},
        {{2, r, t}, {2, t, r}, {1, r, r}, {1, t, t}},
    };
  }
  std::vector<std::string> out;
  for (auto& f : forms) {
    SymbolicForm form;
    form.w = std::move(f);
    out.push_back(canonical_text(layout, form));
  }
  return out;
}

namespace {

// Dense factor over distinct variables, row-major in `vars` order; each
// variable ranges over the directed-bond dimension.
struct Tensor {
  std::vector<int> vars;
  std::vector<Complex> data;
};

constexpr std::size_t kMaxTensorEntries = std::size_t{1} << 26;

Tensor from_matrix(int row, int col, const ComplexMatrix& m) {
  const auto n = m.rows();
  Tensor t;
  if (row == col) {
    t.vars = {row};
    t.data.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) t.data[i] = m(i, i);
    return t;
  }
  t.vars = {row, col};
  t.data.resize(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t.data[i * n + j] = m(i, j);
  return t;
}

// Matrix view of a two-variable tensor with `first` as the row variable.
ComplexMatrix oriented(const Tensor& t, int first, int n) {
  ComplexMatrix m(n, n);
  const bool straight = t.vars[0] == first;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = straight ? t.data[i * n + j] : t.data[j * n + i];
  return m;
}

Tensor matrix_tensor(int row, int col, const ComplexMatrix& m) {
  Tensor t;
  const auto n = m.rows();
  t.vars = {row, col};
  t.data.resize(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t.data[i * n + j] = m(i, j);
  return t;
}

// Sum over `v` of the product of `factors` (each containing v), by brute
// force over the joint index space. Only used when no matrix form applies.
Tensor eliminate_generic(const std::vector<Tensor>& factors, int v, int n) {
  std::set<int> others;
  for (const auto& f : factors)
    for (int x : f.vars)
      if (x != v) others.insert(x);
  Tensor out;
  out.vars.assign(others.begin(), others.end());
  std::size_t size = 1;
  for (std::size_t i = 0; i < out.vars.size(); ++i) {
    size *= n;
    if (size > kMaxTensorEntries) fail(Errc::invalid_argument, "tensor network too large to contract");
  }
  out.data.assign(size, Complex(0.0, 0.0));
  std::vector<int> all = out.vars;
  all.push_back(v);
  std::vector<int> idx(all.size(), 0);
  auto pos = [&](int var) { return static_cast<int>(std::find(all.begin(), all.end(), var) - all.begin()); };
  std::vector<std::vector<int>> where(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k)
    for (int x : factors[k].vars) where[k].push_back(pos(x));
  while (true) {
    Complex prod(1.0, 0.0);
    for (std::size_t k = 0; k < factors.size(); ++k) {
      std::size_t off = 0;
      for (int p : where[k]) off = off * n + idx[p];
      prod *= factors[k].data[off];
    }
    std::size_t o = 0;
    for (std::size_t p = 0; p + 1 < all.size(); ++p) o = o * n + idx[p];
    out.data[o] += prod;
    int d = static_cast<int>(all.size()) - 1;
    for (; d >= 0; --d) {
      if (++idx[d] < n) break;
      idx[d] = 0;
    }
    if (d < 0) break;
  }
  return out;
}

Tensor eliminate(std::vector<Tensor> factors, int v, int n) {
  // Fold vectors on v into one weight; merge matrices sharing a partner.
  Eigen::VectorXcd weight = Eigen::VectorXcd::Ones(n);
  std::map<int, ComplexMatrix> by_partner;
  std::vector<Tensor> rest;
  for (auto& f : factors) {
    if (f.vars.size() == 1) {
      for (int i = 0; i < n; ++i) weight(i) *= f.data[i];
    } else if (f.vars.size() == 2) {
      const int partner = f.vars[0] == v ? f.vars[1] : f.vars[0];
      ComplexMatrix m = oriented(f, v, n);
      auto [it, inserted] = by_partner.try_emplace(partner, m);
      if (!inserted) it->second = it->second.cwiseProduct(m);
    } else {
      rest.push_back(std::move(f));
    }
  }
  if (rest.empty() && by_partner.size() <= 2) {
    Tensor out;
    if (by_partner.empty()) {
      out.data = {weight.sum()};
    } else if (by_partner.size() == 1) {
      const auto& [x, m] = *by_partner.begin();
      const Eigen::VectorXcd r = m.transpose() * weight;
      out.vars = {x};
      out.data.assign(r.data(), r.data() + n);
    } else {
      auto it = by_partner.begin();
      const auto& [x, mx] = *it;
      ++it;
      const auto& [y, my] = *it;
      const ComplexMatrix r = mx.transpose() * weight.asDiagonal() * my;
      out = matrix_tensor(x, y, r);
    }
    return out;
  }
  std::vector<Tensor> all = std::move(rest);
  Tensor w;
  w.vars = {v};
  w.data.assign(weight.data(), weight.data() + n);
  all.push_back(std::move(w));
  for (const auto& [x, m] : by_partner) all.push_back(matrix_tensor(v, x, m));
  return eliminate_generic(all, v, n);
}

}  // namespace

Complex contract_network(const SymbolicForm& form, const std::vector<WMatrix>& w, const PropagationMatrix* bcal) {
  require(!w.empty(), "no W matrices supplied");
  const int n = static_cast<int>(w.front().matrix.rows());
  for (std::size_t k = 0; k < w.size(); ++k)
    require(w[k].order == static_cast<int>(k) + 1 && w[k].matrix.rows() == n, "W matrices must be W^(1), W^(2), ...");
  if (form.max_order() > static_cast<int>(w.size()))
    fail(Errc::invalid_argument, "term needs W of order " + std::to_string(form.max_order()) + " but only " +
                                     std::to_string(w.size()) + " supplied");
  if (!form.b.empty()) {
    require(bcal != nullptr, "term has B insertions but no propagation matrix was supplied");
    require(bcal->dimension() == n, "propagation matrix dimension does not match W");
  }

  std::vector<Tensor> factors;
  for (const auto& f : form.w) factors.push_back(from_matrix(f.row, f.col, w[f.order - 1].matrix.cast<Complex>()));
  for (const auto& f : form.b)
    factors.push_back(from_matrix(f.row, f.col, f.adjoint ? ComplexMatrix(bcal->matrix.adjoint()) : bcal->matrix));

  Complex scalar(1.0, 0.0);
  for (int k : form.trace_powers) scalar *= w[k - 1].matrix.trace();

  std::set<int> pending(form.summed_variables.begin(), form.summed_variables.end());
  // Summed variables that no factor touches contribute a factor n each.
  for (int v : form.summed_variables) {
    bool touched = false;
    for (const auto& f : factors) touched |= std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end();
    if (!touched) {
      scalar *= static_cast<double>(n);
      pending.erase(v);
    }
  }

  while (!pending.empty()) {
    // Greedy order: the variable whose elimination leaves the fewest neighbours.
    int best = -1;
    std::size_t best_cost = 0;
    for (int v : pending) {
      std::set<int> nb;
      for (const auto& f : factors)
        if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
          for (int x : f.vars)
            if (x != v) nb.insert(x);
      if (best < 0 || nb.size() < best_cost) {
        best = v;
        best_cost = nb.size();
      }
    }
    std::vector<Tensor> touching, others;
    for (auto& f : factors)
      (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end() ? touching : others).push_back(std::move(f));
    others.push_back(eliminate(std::move(touching), best, n));
    factors = std::move(others);
    pending.erase(best);
  }
  for (const auto& f : factors) {
    if (!f.vars.empty()) fail(Errc::internal_consistency, "factor left with an unsummed variable");
    scalar *= f.data[0];
  }
  return scalar;
}

TermValue evaluate_term(const ContractionTerm& term, const std::vector<WMatrix>& w, const PropagationMatrix* bcal,
                        double prefactor) {
  TermValue v;
  v.term_id = term.id;
  v.text = term.form.text;
  v.multiplicity = term.multiplicity;
  v.directed_count = w.empty() ? 0 : static_cast<int>(w.front().matrix.rows());
  v.network = contract_network(term.form, w, bcal);
  v.value = v.network * static_cast<double>(term.multiplicity) * prefactor;
  return v;
}

Complex brute_force_sum(const PatternLayout& layout, const std::vector<int>& pairing, const WMatrix& w1,
                        const PropagationMatrix* bcal) {
  require(w1.order == 1, "brute force needs W^(1)");
  require(layout.b_factors.empty() || bcal != nullptr, "pattern has B insertions but no B was given");
  const std::vector<WFactor> props = raw_propagators(layout, pairing);
  const int n = static_cast<int>(w1.matrix.rows());
  const int vars = static_cast<int>(layout.variable_trace.size());
  require(std::pow(static_cast<double>(n), vars) <= 1e9, "brute-force sum too large");
  std::vector<int> idx(vars, 0);
  Complex total = 0.0;
  while (true) {
    Complex term = 1.0;
    for (const auto& f : props) term *= w1.matrix(idx[f.row], idx[f.col]);
    for (const auto& b : layout.b_factors)
      term *= b.adjoint ? std::conj(bcal->matrix(idx[b.col], idx[b.row])) : bcal->matrix(idx[b.row], idx[b.col]);
    total += term;
    int k = 0;
    while (k < vars && ++idx[k] == n) idx[k++] = 0;
    if (k == vars) break;
  }
  return total;
}

}  // namespace qgraph
