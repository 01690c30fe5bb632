// dynamics.hpp: exact unitary propagation by spectral decomposition, the
// Loschmidt echo, and the OTOC in its variance form.

#pragma once

#include "rabichaos/model.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rabichaos {

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::MatrixXcd eigenvectors;  // columns

    int dim() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

struct TimeSeries {
    std::string label;
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const noexcept { return times.size(); }
    // Throws ValidationError if lengths differ or times are not strictly increasing.
    void validate() const;
};

// Inclusive uniform grid t0, t0 + dt, ..., t1 (last point snapped to t1).
std::vector<double> uniform_times(double t0, double t1, double dt);

// Rejects non-Hermitian input (defect > 1e-10).
SpectralDecomposition decompose(const OperatorMatrix& h);

QuantumState propagate(const QuantumState& state, double t, const SpectralDecomposition& spec);

// Evolves |psi0> to every time in `times` and hands each state to `visit`
// together with its sample index. States are formed in column blocks with one
// matrix product per block, so this is the fast path for long series.
using StateVisitor = std::function<void(std::size_t, const Eigen::Ref<const Eigen::VectorXcd>&)>;
// Block form: column j of `states` is the state at times[first + j].
using BlockVisitor = std::function<void(std::size_t first, const Eigen::MatrixXcd& states)>;
inline constexpr std::size_t kEvolveBlock = 128;
void evolve_blocks(const QuantumState& state, const SpectralDecomposition& spec,
                   std::span<const double> times, const BlockVisitor& visit);
void evolve_series(const QuantumState& state, const SpectralDecomposition& spec,
                   std::span<const double> times, const StateVisitor& visit);

// <psi|op|psi>. Throws NumericalGateError if the imaginary part exceeds 1e-8.
double expectation(const QuantumState& state, const OperatorMatrix& op);
double expectation(const Eigen::Ref<const Eigen::VectorXcd>& psi, const OperatorMatrix& op);

// <W psi|W psi> - <psi|W psi>^2 for Hermitian W.
double variance(const Eigen::Ref<const Eigen::VectorXcd>& psi, const OperatorMatrix& op);

// L(t) = |<psi(t; omega)|psi(t; omega + delta)>|^2.
TimeSeries loschmidt_echo(const QuantumState& state0, const ModelParams& params, double delta,
                          std::span<const double> times);
TimeSeries loschmidt_echo(const QuantumState& state0, const SpectralDecomposition& spec,
                          const SpectralDecomposition& perturbed, std::span<const double> times);

struct OtocSeries {
    TimeSeries var_q2;
    TimeSeries var_p2;
    TimeSeries sum;  // Var[q2(t)] + Var[p2(t)]
};

OtocSeries otoc_variance(const QuantumState& state0, const SpectralDecomposition& spec,
                         const OperatorMatrix& q2_op, const OperatorMatrix& p2_op,
                         std::span<const double> times);

// Largest relative deviation |a - b| / max(|b|, floor) between two series.
double max_relative_deviation(const TimeSeries& a, const TimeSeries& b, double floor = 1e-12);

}  // namespace rabichaos
