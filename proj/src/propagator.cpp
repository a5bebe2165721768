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

#include "quasidecay/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "quasidecay/errors.hpp"

namespace quasidecay {

namespace {

constexpr double kOrthogonalityTolerance = 1e-10;
constexpr Eigen::Index kSampledColumns = 64;
constexpr Eigen::Index kTimeBlock = 256;
constexpr double kEdgeFraction = 0.05;

// Secular function of the arrowhead matrix, written relative to the pole
// `origin` so that λ − d_i = (d_origin − d_i) + τ keeps full precision when
// the root sits close to a pole.
//   h(τ) = (z − d_origin) − τ + g² Σ_i 1/((d_origin − d_i) + τ)
class SecularFunction {
public:
    SecularFunction(const std::vector<double>& poles, double z, double g) : poles_(poles), z_(z), g2_(g * g) {}

    double operator()(std::size_t origin, double tau) const {
        const double d0 = poles_[origin];
        double acc = 0.0;
        for (double d : poles_) acc += 1.0 / ((d0 - d) + tau);
        return (z_ - d0) - tau + g2_ * acc;
    }

private:
    const std::vector<double>& poles_;
    double z_;
    double g2_;
};

struct Root {
    std::size_t origin;
    double tau;
};

// Root of the strictly decreasing h on a bracket [lo, hi] with h(lo) > 0 > h(hi).
double solve_bracketed(const SecularFunction& h, std::size_t origin, double lo, double hi, double h_lo, double h_hi) {
    auto f = [&](double tau) { return h(origin, tau); };
    boost::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(f, lo, hi, h_lo, h_hi,
                                                           boost::math::tools::eps_tolerance<double>(52), max_iter);
    if (max_iter >= 200) throw NumericalError("secular equation root did not converge");
    return 0.5 * (bracket.first + bracket.second);
}

// Walks τ toward the pole (τ → 0 with the given sign) until h takes the sign
// it has next to that pole: positive just right of a pole, negative just left.
bool approach_pole(const SecularFunction& h, std::size_t origin, double start, double& tau, double& value) {
    tau = start;
    for (int i = 0; i < 1100; ++i) {
        value = h(origin, tau);
        if ((start > 0.0 && value > 0.0) || (start < 0.0 && value < 0.0)) return true;
        tau *= 0.5;
        if (tau == 0.0) break;
    }
    return false;
}

std::vector<Root> arrowhead_roots(const std::vector<double>& poles, double z, double g) {
    const SecularFunction h(poles, z, g);
    const std::size_t count = poles.size();
    std::vector<Root> roots;
    roots.reserve(count + 1);

    auto fail = [](const char* where) {
        throw NumericalError(std::string("could not bracket secular root ") + where);
    };

    // Below the lowest pole. Gershgorin puts every eigenvalue above
    // min(z − count·g, d_0 − g).
    {
        const double spacing = count > 1 ? poles[1] - poles[0] : 1.0;
        double lo = std::min(z - static_cast<double>(count) * g, poles[0] - g) - poles[0] - spacing;
        double h_lo = h(0, lo);
        while (!(h_lo > 0.0)) {
            lo *= 2.0;
            h_lo = h(0, lo);
        }
        double hi = 0.0, h_hi = 0.0;
        if (!approach_pole(h, 0, -spacing, hi, h_hi)) fail("below the band");
        if (hi <= lo) fail("below the band");
        roots.push_back({0, h_hi == 0.0 ? hi : solve_bracketed(h, 0, lo, hi, h_lo, h_hi)});
    }

    // One root strictly between consecutive poles.
    for (std::size_t j = 1; j < count; ++j) {
        const double gap = poles[j] - poles[j - 1];
        const double h_mid = h(j - 1, gap / 2.0);
        if (h_mid == 0.0) {
            roots.push_back({j - 1, gap / 2.0});
        } else if (h_mid > 0.0) {
            double hi = 0.0, h_hi = 0.0;
            if (!approach_pole(h, j, -gap / 2.0, hi, h_hi)) fail("inside the band");
            roots.push_back({j, solve_bracketed(h, j, -gap / 2.0, hi, h(j, -gap / 2.0), h_hi)});
        } else {
            double lo = 0.0, h_lo = 0.0;
            if (!approach_pole(h, j - 1, gap / 2.0, lo, h_lo)) fail("inside the band");
            roots.push_back({j - 1, solve_bracketed(h, j - 1, lo, gap / 2.0, h_lo, h(j - 1, gap / 2.0))});
        }
    }

    // Above the highest pole.
    {
        const std::size_t last = count - 1;
        const double spacing = count > 1 ? poles[last] - poles[last - 1] : 1.0;
        double hi = std::max(z + static_cast<double>(count) * g, poles[last] + g) - poles[last] + spacing;
        double h_hi = h(last, hi);
        while (!(h_hi < 0.0)) {
            hi *= 2.0;
            h_hi = h(last, hi);
        }
        double lo = 0.0, h_lo = 0.0;
        if (!approach_pole(h, last, spacing, lo, h_lo)) fail("above the band");
        if (lo >= hi) fail("above the band");
        roots.push_back({last, h_lo == 0.0 ? lo : solve_bracketed(h, last, lo, hi, h_lo, h_hi)});
    }
    return roots;
}

double orthogonality_defect(const Eigen::MatrixXd& q) {
    const Eigen::Index n = q.cols();
    if (n <= PropagatorState::kFullOrthogonalityCheck) {
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(q.transpose());
        gram.diagonal().array() -= 1.0;
        return gram.triangularView<Eigen::Lower>().toDenseMatrix().cwiseAbs().maxCoeff();
    }
    Eigen::MatrixXd columns(q.rows(), kSampledColumns);
    for (Eigen::Index c = 0; c < kSampledColumns; ++c) columns.col(c) = q.col(c * (n - 1) / (kSampledColumns - 1));
    Eigen::MatrixXd block = q.transpose() * columns;
    for (Eigen::Index c = 0; c < kSampledColumns; ++c) block(c * (n - 1) / (kSampledColumns - 1), c) -= 1.0;
    return block.cwiseAbs().maxCoeff();
}

void check_grid(std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) throw DomainError("time grid must be non-negative");
        if (i > 0 && grid[i] < grid[i - 1]) throw DomainError("time grid must be sorted");
    }
}

}  // namespace

PropagatorState PropagatorState::build(const ModelParams& params, std::int64_t half_width, EigenSolver solver) {
    if (half_width < 1) throw DomainError("truncation half-width must be at least 1");
    PropagatorState state;
    state.params_ = params;
    state.half_width_ = half_width;
    state.solver_ = solver;
    state.discrete_energy_ = params.alpha * params.delta;

    const auto levels = static_cast<std::size_t>(2 * half_width + 1);
    const auto dim = static_cast<Eigen::Index>(levels + 1);
    std::vector<double> poles(levels);
    for (std::size_t i = 0; i < levels; ++i)
        poles[i] = static_cast<double>(static_cast<std::int64_t>(i) - half_width) * params.delta;

    if (solver == EigenSolver::Dense) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.hamiltonian());
        if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
        state.eigenvalues_ = es.eigenvalues();
        state.eigenvectors_ = es.eigenvectors();
    } else if (params.g == 0.0) {
        // Diagonal: eigenpairs are the basis states, sorted by energy.
        std::vector<double> diag(static_cast<std::size_t>(dim));
        diag[0] = state.discrete_energy_;
        std::copy(poles.begin(), poles.end(), diag.begin() + 1);
        std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return diag[static_cast<std::size_t>(a)] < diag[static_cast<std::size_t>(b)];
        });
        state.eigenvalues_.resize(dim);
        state.eigenvectors_ = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            state.eigenvalues_(k) = diag[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
            state.eigenvectors_(order[static_cast<std::size_t>(k)], k) = 1.0;
        }
    } else {
        const auto roots = arrowhead_roots(poles, state.discrete_energy_, params.g);
        state.eigenvalues_.resize(dim);
        state.eigenvectors_.resize(dim, dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Root& r = roots[static_cast<std::size_t>(k)];
            const double d0 = poles[r.origin];
            state.eigenvalues_(k) = d0 + r.tau;
            auto col = state.eigenvectors_.col(k);
            col(0) = 1.0;
            for (std::size_t i = 0; i < levels; ++i)
                col(static_cast<Eigen::Index>(i) + 1) = params.g / ((d0 - poles[i]) + r.tau);
            col /= col.norm();
        }
    }

    state.orthogonality_error_ = orthogonality_defect(state.eigenvectors_);
    if (!(state.orthogonality_error_ <= kOrthogonalityTolerance)) {
        std::ostringstream msg;
        msg << "eigenvectors lost orthogonality: max |QᵀQ − I| = " << state.orthogonality_error_;
        throw NumericalError(msg.str());
    }
    return state;
}

Eigen::MatrixXd PropagatorState::hamiltonian() const {
    const Eigen::Index dim = 2 * half_width_ + 2;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    h(0, 0) = discrete_energy_;
    for (Eigen::Index j = 1; j < dim; ++j) {
        h(j, j) = static_cast<double>(j - 1 - half_width_) * params_.delta;
        h(0, j) = h(j, 0) = params_.g;
    }
    return h;
}

Eigen::VectorXcd PropagatorState::evolve(const Eigen::VectorXcd& psi0, double t) const {
    if (psi0.size() != dimension()) throw DomainError("state dimension does not match the Hamiltonian");
    const Eigen::VectorXd re = eigenvectors_.transpose() * psi0.real();
    const Eigen::VectorXd im = eigenvectors_.transpose() * psi0.imag();
    Eigen::VectorXd out_re(dimension()), out_im(dimension());
    for (Eigen::Index k = 0; k < dimension(); ++k) {
        const double c = std::cos(eigenvalues_(k) * t);
        const double s = std::sin(eigenvalues_(k) * t);
        // (re + i im)(c − i s)
        out_re(k) = re(k) * c + im(k) * s;
        out_im(k) = im(k) * c - re(k) * s;
    }
    Eigen::VectorXcd psi(dimension());
    psi.real() = eigenvectors_ * out_re;
    psi.imag() = eigenvectors_ * out_im;
    return psi;
}

PropagationResult propagate(const PropagatorState& state, std::span<const double> grid) {
    check_grid(grid);
    const Eigen::Index dim = state.dimension();
    const Eigen::MatrixXd& q = state.eigenvectors();
    const Eigen::VectorXd& lambda = state.eigenvalues();
    const Eigen::VectorXd weights = q.row(0).transpose();  // Qᵀ|b⟩

    const std::int64_t n = state.half_width();
    const std::int64_t edge_from = n - static_cast<std::int64_t>(std::floor(kEdgeFraction * static_cast<double>(n)));

    PropagationResult out;
    out.times.assign(grid.begin(), grid.end());
    const std::size_t count = grid.size();
    out.survival.resize(count);
    out.transferred.resize(count);
    out.norm.resize(count);
    out.edge_population.resize(count);
    out.amplitude.resize(count);

    for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(kTimeBlock)) {
        const auto block = static_cast<Eigen::Index>(std::min<std::size_t>(kTimeBlock, count - start));
        Eigen::MatrixXd c_re(dim, block), c_im(dim, block);
        for (Eigen::Index j = 0; j < block; ++j) {
            const double t = grid[start + static_cast<std::size_t>(j)];
            for (Eigen::Index k = 0; k < dim; ++k) {
                const double phase = lambda(k) * t;
                c_re(k, j) = weights(k) * std::cos(phase);
                c_im(k, j) = -weights(k) * std::sin(phase);
            }
        }
        const Eigen::MatrixXd psi_re = q * c_re;
        const Eigen::MatrixXd psi_im = q * c_im;
        for (Eigen::Index j = 0; j < block; ++j) {
            const std::size_t idx = start + static_cast<std::size_t>(j);
            const double p_b = psi_re(0, j) * psi_re(0, j) + psi_im(0, j) * psi_im(0, j);
            double p = 0.0;
            double edge = 0.0;
            for (Eigen::Index i = 1; i < dim; ++i) {
                const double pop = psi_re(i, j) * psi_re(i, j) + psi_im(i, j) * psi_im(i, j);
                p += pop;
                if (std::abs(static_cast<std::int64_t>(i - 1) - n) >= edge_from) edge += pop;
            }
            out.survival[idx] = p_b;
            out.transferred[idx] = p;
            out.norm[idx] = p_b + p;
            out.edge_population[idx] = edge;
            const double free_phase = state.discrete_energy() * grid[idx];
            out.amplitude[idx] =
                std::complex<double>(psi_re(0, j), psi_im(0, j)) * std::polar(1.0, free_phase);
        }
    }
    return out;
}

ConvergenceReport convergence_study(const ModelParams& params, std::span<const double> grid,
                                    std::span<const std::int64_t> half_widths, double tolerance,
                                    EigenSolver solver) {
    if (half_widths.empty()) throw DomainError("convergence study needs at least one truncation");
    for (std::size_t i = 1; i < half_widths.size(); ++i)
        if (half_widths[i] <= half_widths[i - 1]) throw DomainError("truncations must be strictly increasing");

    std::vector<PropagationResult> runs;
    runs.reserve(half_widths.size());
    for (std::int64_t n : half_widths) runs.push_back(propagate(PropagatorState::build(params, n, solver), grid));

    ConvergenceReport report;
    report.tolerance = tolerance;
    const PropagationResult& reference = runs.back();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        ConvergenceEntry entry;
        entry.half_width = half_widths[r];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            entry.max_deviation = std::max(entry.max_deviation, std::abs(runs[r].survival[i] - reference.survival[i]));
            entry.max_edge_population = std::max(entry.max_edge_population, runs[r].edge_population[i]);
        }
        entry.edge_warning = entry.max_edge_population > kEdgePopulationGuard;
        if (!report.smallest_converged && entry.max_deviation <= tolerance) report.smallest_converged = entry.half_width;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace quasidecay
