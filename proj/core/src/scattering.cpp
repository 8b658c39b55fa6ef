#include "qgraph/scattering.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qgraph/error.hpp"
#include "qgraph/random.hpp"

namespace qgraph {

ComplexMatrix vertex_matrix(VertexKind kind, int dimension) {
  require(dimension >= 1, "vertex matrix dimension must be >= 1");
  ComplexMatrix m(dimension, dimension);
  const double v = dimension;
  switch (kind) {
    case VertexKind::dft: {
      const double norm = 1.0 / std::sqrt(v);
      for (int j = 0; j < dimension; ++j)
        for (int k = 0; k < dimension; ++k) {
          // Reduce jk mod v first so large exponents keep full accuracy.
          const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % dimension) / v;
          m(j, k) = norm * Complex(std::cos(angle), std::sin(angle));
        }
      break;
    }
    case VertexKind::neumann:
      for (int j = 0; j < dimension; ++j)
        for (int k = 0; k < dimension; ++k) m(j, k) = 2.0 / v - (j == k ? 1.0 : 0.0);
      break;
  }
  return m;
}

std::vector<VertexScatteringMatrix> vertex_matrices(const Graph& graph, VertexKind kind) {
  std::vector<VertexScatteringMatrix> out;
  out.reserve(graph.vertex_count());
  for (int a = 0; a < graph.vertex_count(); ++a) out.push_back({a, vertex_matrix(kind, graph.degree(a))});
  return out;
}

double unitarity_defect(const ComplexMatrix& m) {
  const ComplexMatrix d = m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

std::vector<int> row_support(const ComplexMatrix& m) {
  std::vector<int> out(m.rows(), 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != Complex(0.0, 0.0)) ++out[i];
  return out;
}

BondScatteringMatrix assemble_bond_scattering(const Graph& graph,
                                              std::span<const VertexScatteringMatrix> vertex_matrices) {
  require(static_cast<int>(vertex_matrices.size()) == graph.vertex_count(),
          "need exactly one vertex matrix per vertex");
  const DirectedBondSpace space(graph);
  const int n = space.size();
  std::vector<const ComplexMatrix*> by_vertex(graph.vertex_count(), nullptr);
  for (const auto& vm : vertex_matrices) {
    require(vm.vertex >= 0 && vm.vertex < graph.vertex_count(), "vertex matrix has invalid vertex id");
    require(by_vertex[vm.vertex] == nullptr, "duplicate vertex matrix for vertex " + std::to_string(vm.vertex));
    const int d = graph.degree(vm.vertex);
    require(vm.matrix.rows() == d && vm.matrix.cols() == d,
            "vertex " + std::to_string(vm.vertex) + ": matrix dimension does not match degree " + std::to_string(d));
    require(unitarity_defect(vm.matrix) < kUnitarityTolerance,
            "vertex " + std::to_string(vm.vertex) + ": matrix is not unitary");
    by_vertex[vm.vertex] = &vm.matrix;
  }

  BondScatteringMatrix sigma{ComplexMatrix::Zero(n, n)};
  for (int a = 0; a < graph.vertex_count(); ++a) {
    const auto& inc = graph.incident_edges(a);
    const ComplexMatrix& s = *by_vertex[a];
    // The directed bond on edge inc[j] that ends at vertex a.
    auto arriving = [&](int j) {
      const int b = inc[j];
      return space.terminus(DirectedBondSpace::index(b, Direction::forward)) == a
                 ? DirectedBondSpace::index(b, Direction::forward)
                 : DirectedBondSpace::index(b, Direction::backward);
    };
    for (std::size_t j = 0; j < inc.size(); ++j)
      for (std::size_t k = 0; k < inc.size(); ++k)
        sigma.matrix(arriving(static_cast<int>(j)), arriving(static_cast<int>(k))) = s(j, k);
  }
  return sigma;
}

PropagationMatrix propagation_matrix(const BondScatteringMatrix& sigma) {
  const auto n = sigma.matrix.rows();
  require(n > 0 && n % 2 == 0 && sigma.matrix.cols() == n, "bond scattering matrix must be square of even size");
  require(unitarity_defect(sigma.matrix) < kUnitarityTolerance, "bond scattering matrix is not unitary");
  PropagationMatrix bcal{ComplexMatrix(n, n)};
  for (Eigen::Index mu = 0; mu < n; ++mu) bcal.matrix.row(mu) = sigma.matrix.row(DirectedBondSpace::flip(static_cast<int>(mu)));
  return bcal;
}

PropagationMatrix build_propagation(const Graph& graph, VertexKind kind) {
  const auto vms = vertex_matrices(graph, kind);
  return propagation_matrix(assemble_bond_scattering(graph, vms));
}

Eigen::SparseMatrix<Complex, Eigen::RowMajor> PropagationMatrix::sparse() const {
  return matrix.sparseView(Complex(0.0, 0.0), 0.0);
}

MagneticPhases sample_phases(int directed_bond_count, std::uint64_t seed) {
  require(directed_bond_count >= 1, "need at least one directed bond");
  Rng rng(mix_seed(seed));
  MagneticPhases phases;
  phases.values.resize(directed_bond_count);
  for (double& p : phases.values) p = 2.0 * std::numbers::pi * uniform01(rng);
  return phases;
}

MagneticPhases zero_phases(int directed_bond_count) {
  return MagneticPhases{std::vector<double>(directed_bond_count, 0.0)};
}

QuantumMap quantum_map(const PropagationMatrix& bcal, const BondLengths& lengths, const MagneticPhases& phases,
                       double wavenumber) {
  const int n = bcal.dimension();
  require(lengths.size() * 2 == n, "bond lengths do not match the propagation matrix");
  require(static_cast<int>(phases.values.size()) == n, "phases do not match the propagation matrix");
  QuantumMap map{wavenumber, ComplexMatrix(n, n)};
  for (int mu = 0; mu < n; ++mu) {
    const double angle = wavenumber * lengths.values[DirectedBondSpace::bond(mu)] + phases.values[mu];
    map.matrix.row(mu) = Complex(std::cos(angle), std::sin(angle)) * bcal.matrix.row(mu);
  }
  return map;
}

}  // namespace qgraph
