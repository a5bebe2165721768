// Copyright 2026 The quasidecay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUASIDECAY_PROPAGATOR_HPP
#define QUASIDECAY_PROPAGATOR_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "quasidecay/model.hpp"

namespace quasidecay {

enum class EigenSolver {
    // Secular equation of the arrowhead matrix, one root per pole gap.
    Arrowhead,
    // Dense symmetric eigendecomposition; the reference route.
    Dense,
};

// Truncated Hamiltonian on |b⟩, |−N⟩, ..., |N⟩ (that order):
//   H[0][0] = αΔ, H[0][j] = H[j][0] = g, H[j][j] = nΔ.
// The discrete level is placed at αΔ; α-periodicity makes this equivalent
// to the original E_b and keeps the resonance centred in the band.
class PropagatorState {
public:
    // Assembles and diagonalizes the Hamiltonian, then checks ‖QᵀQ − I‖_max
    // <= 1e-10. Matrices larger than kFullOrthogonalityCheck are checked on a
    // fixed subset of columns. Throws NumericalError on failure.
    static PropagatorState build(const ModelParams& params, std::int64_t half_width,
                                 EigenSolver solver = EigenSolver::Arrowhead);

    static constexpr Eigen::Index kFullOrthogonalityCheck = 4096;

    [[nodiscard]] const ModelParams& params() const { return params_; }
    [[nodiscard]] std::int64_t half_width() const { return half_width_; }
    [[nodiscard]] Eigen::Index dimension() const { return eigenvalues_.size(); }
    [[nodiscard]] double discrete_energy() const { return discrete_energy_; }
    [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    [[nodiscard]] const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    [[nodiscard]] double orthogonality_error() const { return orthogonality_error_; }
    [[nodiscard]] EigenSolver solver() const { return solver_; }

    // Dense copy of the Hamiltonian (tests and diagnostics).
    [[nodiscard]] Eigen::MatrixXd hamiltonian() const;

    // ψ(t) = Q e^{−iΛt} Qᵀ ψ0 for any real t, negative included.
    [[nodiscard]] Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double t) const;

private:
    PropagatorState() = default;

    ModelParams params_;
    std::int64_t half_width_ = 0;
    double discrete_energy_ = 0.0;
    EigenSolver solver_ = EigenSolver::Arrowhead;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;  // columns, ascending eigenvalue
    double orthogonality_error_ = 0.0;
};

struct PropagationResult {
    std::vector<double> times;
    std::vector<double> survival;     // P_i = |ψ_b|²
    std::vector<double> transferred;  // P = Σ_n |ψ_n|²
    std::vector<double> norm;         // P_i + P
    // Population in the outermost 5% of continuum levels (both edges).
    std::vector<double> edge_population;
    // ⟨b|ψ(t)⟩ with the free phase e^{−iE_b t} removed.
    std::vector<std::complex<double>> amplitude;
};

// ψ(0) = |b⟩. Throws DomainError when the grid is unsorted or negative.
[[nodiscard]] PropagationResult propagate(const PropagatorState& state, std::span<const double> grid);

struct ConvergenceEntry {
    std::int64_t half_width = 0;
    double max_deviation = 0.0;        // max_t |P_i(N) − P_i(N_max)|
    double max_edge_population = 0.0;  // max_t of the edge population
    bool edge_warning = false;         // edge population above the guard
};

struct ConvergenceReport {
    std::vector<ConvergenceEntry> entries;
    double tolerance = 0.0;
    // Smallest N whose deviation from the largest run is within tolerance.
    std::optional<std::int64_t> smallest_converged;
};

inline constexpr double kEdgePopulationGuard = 1e-6;

// Runs each truncation of an increasing list against the largest one.
[[nodiscard]] ConvergenceReport convergence_study(const ModelParams& params, std::span<const double> grid,
                                                  std::span<const std::int64_t> half_widths,
                                                  double tolerance = 1e-4,
                                                  EigenSolver solver = EigenSolver::Arrowhead);

}  // namespace quasidecay

#endif  // QUASIDECAY_PROPAGATOR_HPP
