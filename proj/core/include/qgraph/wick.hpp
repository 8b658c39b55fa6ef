#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/massive_modes.hpp"
#include "qgraph/perron_frobenius.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

/// STr[B psi (psit psi)^p B^dag psit (psi psit)^q]^l.
struct DressedTrace {
  int p = 0;
  int q = 0;
  int l = 1;
};

/// Two source traces (psi_mu psit_mu and psit_nu psi_nu) are always present.
/// `plain` lists exponents n of STr(psi psit)^n.
struct TracePattern {
  std::vector<int> plain;
  std::vector<DressedTrace> dressed;
};

enum class SlotKind { psi, psi_tilde };

struct Slot {
  int trace = 0;
  SlotKind kind = SlotKind::psi;
  int variable = 0;
};

/// B(row, col), or B^dag(row, col) = conj(B(col, row)) when adjoint.
struct BFactor {
  bool adjoint = false;
  int row = 0;
  int col = 0;
  friend bool operator==(const BFactor&, const BFactor&) = default;
};

/// W^(order)(row, col).
struct WFactor {
  int order = 1;
  int row = 0;
  int col = 0;
  friend bool operator==(const WFactor&, const WFactor&) = default;
};

/// Slots, summation variables and B insertions of a pattern. Traces 0 and 1
/// are the sources; their variables are 0 (mu) and 1 (nu).
struct PatternLayout {
  int trace_count = 0;
  std::vector<Slot> psi;
  std::vector<Slot> psi_tilde;
  std::vector<int> variable_trace;  // owning trace per variable
  std::vector<std::string> variable_names;
  std::vector<BFactor> b_factors;
  /// Per trace: shape key (traces with equal keys are interchangeable) and
  /// the variables in rotation order; dressed traces rotate in steps of one
  /// repetition.
  std::vector<std::string> trace_shape;
  std::vector<std::vector<int>> trace_alpha;  // alpha variables (or the single plain variable)
  std::vector<std::vector<int>> trace_beta;   // beta variables of dressed traces
};

inline constexpr int kMaxPsiSlots = 12;

/// Throws invalid_pattern for malformed patterns or more than 12 psi slots.
PatternLayout make_layout(const TracePattern& pattern);

/// Product of W^(n) factors, B insertions and traces Tr W^(k) after the
/// source indices have been summed out. Variables are layout variables.
struct SymbolicForm {
  std::vector<WFactor> w;
  std::vector<BFactor> b;
  std::vector<int> trace_powers;
  std::vector<int> summed_variables;
  std::string text;  // canonical
  int max_order() const;
};

struct ContractionTerm {
  int id = 0;
  /// Representative pairing: psi slot i -> psi_tilde slot pairing[i].
  std::vector<int> pairing;
  SymbolicForm form;
  std::int64_t multiplicity = 0;
};

struct EnumerationResult {
  std::vector<ContractionTerm> terms;
  std::int64_t total_pairings = 0;
  std::int64_t surviving_pairings = 0;
};

/// All psi -> psi_tilde bijections whose trace multigraph is connected,
/// merged by canonical symbolic form; terms sorted by canonical text.
EnumerationResult enumerate_contractions(const TracePattern& pattern);
EnumerationResult enumerate_contractions(const PatternLayout& layout);

/// Collapses the source indices of a pairing into W^(n) chains and traces.
SymbolicForm classify_cycles(const PatternLayout& layout, const std::vector<int>& pairing);

/// Canonical text of a form under relabelings that permute interchangeable
/// traces and rotate dressed traces.
std::string canonical_text(const PatternLayout& layout, const SymbolicForm& form);

/// Uncollapsed propagators W(var(psi_i), var(psit_pairing[i])).
std::vector<WFactor> raw_propagators(const PatternLayout& layout, const std::vector<int>& pairing);

/// Published forms for the one- and two-trace cases, canonicalized against
/// the matching pattern ({2} and {2, 2}), in published order.
std::vector<std::string> reference_forms(HigherOrderCase which);
TracePattern pattern_for(HigherOrderCase which);

/// Index sum of the form via matrix products and variable elimination.
/// `w[k]` must hold W^(k+1); bcal may be null when the form has no B factor.
Complex contract_network(const SymbolicForm& form, const std::vector<WMatrix>& w, const PropagationMatrix* bcal);

/// Direct sum over every assignment of every layout variable of the raw
/// W^(1) propagators and B insertions of `pairing`; (2B)^variables terms.
Complex brute_force_sum(const PatternLayout& layout, const std::vector<int>& pairing, const WMatrix& w1,
                        const PropagationMatrix* bcal);

struct TermValue {
  int term_id = 0;
  std::string text;
  std::int64_t multiplicity = 0;
  int directed_count = 0;
  Complex network{};  // bare index sum
  Complex value{};    // network * multiplicity * prefactor
};

TermValue evaluate_term(const ContractionTerm& term, const std::vector<WMatrix>& w, const PropagationMatrix* bcal,
                        double prefactor);

}  // namespace qgraph
