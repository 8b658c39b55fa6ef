#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qgraph/graph.hpp"

namespace qgraph {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kUnitarityTolerance = 1e-12;

enum class VertexKind { dft, neumann };

struct VertexScatteringMatrix {
  int vertex = -1;
  ComplexMatrix matrix;
};

/// DFT: exp(2 pi i jk / v) / sqrt(v). Neumann: 2/v - delta_jk.
ComplexMatrix vertex_matrix(VertexKind kind, int dimension);

/// One matrix per vertex, sized by the vertex degree.
std::vector<VertexScatteringMatrix> vertex_matrices(const Graph& graph, VertexKind kind);

/// Sigma^(B) in vertex-local labelling: entry (mu, nu) is nonzero only when
/// both directed bonds end at the same vertex alpha, and then equals
/// sigma^(alpha) at the local edge positions of mu and nu.
struct BondScatteringMatrix {
  ComplexMatrix matrix;
};

/// B = sigma_1^D Sigma^(B): row mu of B is row flip(mu) of Sigma^(B). With
/// the labelling above, B(mu, nu) != 0 iff terminus(nu) == origin(mu).
struct PropagationMatrix {
  ComplexMatrix matrix;

  int dimension() const noexcept { return static_cast<int>(matrix.rows()); }
  /// Exact-zero pruned copy for repeated products.
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> sparse() const;
};

struct MagneticPhases {
  std::vector<double> values;  // one per directed bond, in [0, 2 pi)
};

struct QuantumMap {
  double wavenumber = 0.0;
  ComplexMatrix matrix;
};

BondScatteringMatrix assemble_bond_scattering(const Graph& graph,
                                              std::span<const VertexScatteringMatrix> vertex_matrices);

PropagationMatrix propagation_matrix(const BondScatteringMatrix& sigma);

/// Convenience: vertex matrices of one kind, assembly and direction flip.
PropagationMatrix build_propagation(const Graph& graph, VertexKind kind);

MagneticPhases sample_phases(int directed_bond_count, std::uint64_t seed);
MagneticPhases zero_phases(int directed_bond_count);

/// U(k) = diag(exp(i (k L_b(mu) + phi_mu))) B.
QuantumMap quantum_map(const PropagationMatrix& bcal, const BondLengths& lengths, const MagneticPhases& phases,
                       double wavenumber);

/// max |M^dagger M - 1|.
double unitarity_defect(const ComplexMatrix& m);

/// Number of nonzero entries per row.
std::vector<int> row_support(const ComplexMatrix& m);

}  // namespace qgraph
