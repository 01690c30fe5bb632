// dynamics.cpp: spectral propagation, Loschmidt echo, OTOC variance

#include "rabichaos/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rabichaos {

namespace {

void require_dim(int state_dim, int spec_dim, const char* what) {
    if (state_dim != spec_dim) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (state " << state_dim << ", operator " << spec_dim << ")";
        throw ValidationError(msg.str());
    }
}

inline constexpr double kNegligibleWeight = 1e-32;

// Column j holds c_k exp(-i lambda_k t_j) for the block's times.
Eigen::MatrixXcd phased_coefficients(const Eigen::VectorXcd& coeffs, const Eigen::VectorXd& evals,
                                     std::span<const double> times) {
    const Eigen::Index d = coeffs.size();
    Eigen::MatrixXcd out(d, static_cast<Eigen::Index>(times.size()));
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        for (Eigen::Index k = 0; k < d; ++k) out(k, j) = coeffs(k) * std::polar(1.0, -evals(k) * t);
    }
    return out;
}

}  // namespace

void TimeSeries::validate() const {
    if (times.size() != values.size()) throw ValidationError("time series: length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw ValidationError("time series: times not strictly increasing");
}

std::vector<double> uniform_times(double t0, double t1, double dt) {
    if (!(dt > 0.0) || !(t1 >= t0)) throw ValidationError("time grid needs dt > 0 and t1 >= t0");
    const auto n = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = t0 + static_cast<double>(i) * dt;
    t.back() = t1;
    return t;
}

SpectralDecomposition decompose(const OperatorMatrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) throw ValidationError("decompose: matrix must be square and non-empty");
    const double defect = hermiticity_defect(h);
    if (defect > 1e-10) {
        std::ostringstream msg;
        msg << "decompose: matrix is not Hermitian (max |H - H^dag| = " << defect << ")";
        throw ValidationError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalGateError("decompose: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

QuantumState propagate(const QuantumState& state, double t, const SpectralDecomposition& spec) {
    require_dim(state.dim(), spec.dim(), "propagate");
    Eigen::VectorXcd c = spec.eigenvectors.adjoint() * state.amplitudes();
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -spec.eigenvalues(k) * t);
    Eigen::VectorXcd psi = spec.eigenvectors * c;
    return QuantumState(std::move(psi));
}

void evolve_blocks(const QuantumState& state, const SpectralDecomposition& spec,
                   std::span<const double> times, const BlockVisitor& visit) {
    require_dim(state.dim(), spec.dim(), "evolve");
    const Eigen::VectorXcd c = spec.eigenvectors.adjoint() * state.amplitudes();

    // Eigenstates with negligible overlap are dropped; the discarded norm is
    // at most dim * kNegligibleWeight.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < c.size(); ++k)
        if (std::norm(c(k)) > kNegligibleWeight) kept.push_back(k);
    const auto m = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXcd vecs(spec.eigenvectors.rows(), m);
    Eigen::VectorXcd coeffs(m);
    Eigen::VectorXd evals(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        vecs.col(j) = spec.eigenvectors.col(kept[j]);
        coeffs(j) = c(kept[j]);
        evals(j) = spec.eigenvalues(kept[j]);
    }

    Eigen::MatrixXcd block;
    for (std::size_t first = 0; first < times.size(); first += kEvolveBlock) {
        const std::size_t count = std::min(kEvolveBlock, times.size() - first);
        block.noalias() = vecs * phased_coefficients(coeffs, evals, times.subspan(first, count));
        visit(first, block);
    }
}

void evolve_series(const QuantumState& state, const SpectralDecomposition& spec,
                   std::span<const double> times, const StateVisitor& visit) {
    evolve_blocks(state, spec, times, [&](std::size_t first, const Eigen::MatrixXcd& block) {
        for (Eigen::Index j = 0; j < block.cols(); ++j) visit(first + static_cast<std::size_t>(j), block.col(j));
    });
}

double expectation(const Eigen::Ref<const Eigen::VectorXcd>& psi, const OperatorMatrix& op) {
    require_dim(static_cast<int>(psi.size()), static_cast<int>(op.rows()), "expectation");
    const cplx v = psi.dot(op * psi);
    if (std::abs(v.imag()) > 1e-8) {
        std::ostringstream msg;
        msg << "expectation: imaginary part " << v.imag() << " indicates a non-Hermitian operator";
        throw NumericalGateError(msg.str());
    }
    return v.real();
}

double expectation(const QuantumState& state, const OperatorMatrix& op) {
    return expectation(state.amplitudes(), op);
}

double variance(const Eigen::Ref<const Eigen::VectorXcd>& psi, const OperatorMatrix& op) {
    require_dim(static_cast<int>(psi.size()), static_cast<int>(op.rows()), "variance");
    const Eigen::VectorXcd w_psi = op * psi;
    const double mean = psi.dot(w_psi).real();
    return w_psi.squaredNorm() - mean * mean;
}

TimeSeries loschmidt_echo(const QuantumState& state0, const SpectralDecomposition& spec,
                          const SpectralDecomposition& perturbed, std::span<const double> times) {
    require_dim(state0.dim(), spec.dim(), "loschmidt_echo");
    require_dim(state0.dim(), perturbed.dim(), "loschmidt_echo");
    TimeSeries out{"loschmidt_echo", {times.begin(), times.end()}, std::vector<double>(times.size())};

    // Both series are produced block by block in lockstep.
    const Eigen::VectorXcd c0 = spec.eigenvectors.adjoint() * state0.amplitudes();
    const Eigen::VectorXcd c1 = perturbed.eigenvectors.adjoint() * state0.amplitudes();
    Eigen::MatrixXcd a, b;
    for (std::size_t first = 0; first < times.size(); first += kEvolveBlock) {
        const std::size_t count = std::min(kEvolveBlock, times.size() - first);
        const auto sub = times.subspan(first, count);
        a.noalias() = spec.eigenvectors * phased_coefficients(c0, spec.eigenvalues, sub);
        b.noalias() = perturbed.eigenvectors * phased_coefficients(c1, perturbed.eigenvalues, sub);
        for (std::size_t j = 0; j < count; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            out.values[first + j] = std::norm(a.col(jj).dot(b.col(jj)));
        }
    }
    return out;
}

TimeSeries loschmidt_echo(const QuantumState& state0, const ModelParams& params, double delta,
                          std::span<const double> times) {
    ModelParams shifted = params;
    shifted.omega += delta;
    shifted.validate();
    const SpectralDecomposition spec = decompose(build_hamiltonian(params));
    const SpectralDecomposition perturbed = decompose(build_hamiltonian(shifted));
    return loschmidt_echo(state0, spec, perturbed, times);
}

OtocSeries otoc_variance(const QuantumState& state0, const SpectralDecomposition& spec,
                         const OperatorMatrix& q2_op, const OperatorMatrix& p2_op,
                         std::span<const double> times) {
    require_dim(state0.dim(), static_cast<int>(q2_op.rows()), "otoc_variance");
    require_dim(state0.dim(), static_cast<int>(p2_op.rows()), "otoc_variance");
    const std::vector<double> t(times.begin(), times.end());
    OtocSeries out{{"var_q2", t, std::vector<double>(t.size())},
                   {"var_p2", t, std::vector<double>(t.size())},
                   {"otoc", t, std::vector<double>(t.size())}};

    Eigen::MatrixXcd wq, wp;
    evolve_blocks(state0, spec, times, [&](std::size_t first, const Eigen::MatrixXcd& psi) {
        wq.noalias() = q2_op * psi;
        wp.noalias() = p2_op * psi;
        for (Eigen::Index j = 0; j < psi.cols(); ++j) {
            const double mq = psi.col(j).dot(wq.col(j)).real();
            const double mp = psi.col(j).dot(wp.col(j)).real();
            const double vq = wq.col(j).squaredNorm() - mq * mq;
            const double vp = wp.col(j).squaredNorm() - mp * mp;
            const std::size_t i = first + static_cast<std::size_t>(j);
            out.var_q2.values[i] = vq;
            out.var_p2.values[i] = vp;
            out.sum.values[i] = vq + vp;
        }
    });
    return out;
}

double max_relative_deviation(const TimeSeries& a, const TimeSeries& b, double floor) {
    if (a.size() != b.size()) throw ValidationError("max_relative_deviation: series length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]) / std::max(std::abs(b.values[i]), floor));
    return worst;
}

}  // namespace rabichaos
