// model.cpp: anisotropic Rabi model operators and coherent states

#include "rabichaos/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rabichaos {

namespace {

// Fock-space ladder operator a on n = 0..np.
Eigen::MatrixXcd fock_annihilator(int np) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(np + 1, np + 1);
    for (int n = 1; n <= np; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// Atom operators in (e, g) ordering.
Eigen::Matrix2cd atom_sigma_z() {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

Eigen::Matrix2cd atom_sigma_plus() {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    s(0, 1) = 1.0;  // |e><g|
    return s;
}

Eigen::MatrixXcd kron(const Eigen::Matrix2cd& atom, const Eigen::MatrixXcd& field) {
    const Eigen::Index f = field.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * f, 2 * f);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (atom(i, j) != cplx(0.0)) out.block(i * f, j * f, f, f) = atom(i, j) * field;
    return out;
}

}  // namespace

void ModelParams::validate() const {
    if (!(omega > 0.0)) throw ValidationError("omega must be > 0");
    if (!(omega0 >= 0.0)) throw ValidationError("omega0 must be >= 0");
    if (!std::isfinite(g1) || !std::isfinite(g2)) throw ValidationError("couplings must be finite");
    if (np < 1) throw ValidationError("Fock cutoff np must be >= 1 (np = 0 is a degenerate Fock space)");
}

void require_bloch_domain(double q1, double p1) {
    const double r2 = q1 * q1 + p1 * p1;
    if (!(r2 < 2.0)) {
        std::ostringstream msg;
        msg << "phase point outside Bloch domain: q1^2 + p1^2 = " << r2 << " (must be < 2)";
        throw ValidationError(msg.str());
    }
}

QuantumState::QuantumState(Eigen::VectorXcd amplitudes, double norm_tol)
    : amps_(std::move(amplitudes)) {
    if (amps_.size() < 4 || amps_.size() % 2 != 0)
        throw ValidationError("state dimension must be 2 * (np + 1) with np >= 1");
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > norm_tol) {
        std::ostringstream msg;
        msg << "state not normalized: norm = " << norm;
        throw ValidationError(msg.str());
    }
}

OperatorSet build_operators(const ModelParams& params) {
    params.validate();
    const Eigen::MatrixXcd a_f = fock_annihilator(params.np);
    const Eigen::MatrixXcd id_f = Eigen::MatrixXcd::Identity(params.np + 1, params.np + 1);
    const Eigen::Matrix2cd id_a = Eigen::Matrix2cd::Identity();

    OperatorSet ops;
    ops.a = kron(id_a, a_f);
    ops.a_dag = ops.a.adjoint();
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    ops.q2 = (ops.a_dag + ops.a) * inv_sqrt2;
    ops.p2 = cplx(0.0, 1.0) * (ops.a_dag - ops.a) * inv_sqrt2;
    ops.sigma_z = kron(atom_sigma_z(), id_f);
    ops.sigma_plus = kron(atom_sigma_plus(), id_f);
    ops.sigma_minus = ops.sigma_plus.adjoint();
    return ops;
}

OperatorMatrix build_hamiltonian(const ModelParams& params) {
    const OperatorSet ops = build_operators(params);
    OperatorMatrix h = 0.5 * params.omega * ops.sigma_z + params.omega0 * ops.a_dag * ops.a;
    h += params.g1 * (ops.a_dag * ops.sigma_minus + ops.a * ops.sigma_plus);
    h += params.g2 * (ops.a_dag * ops.sigma_plus + ops.a * ops.sigma_minus);
    return h;
}

OperatorMatrix excitation_number(const ModelParams& params) {
    const OperatorSet ops = build_operators(params);
    return ops.a_dag * ops.a + ops.sigma_plus * ops.sigma_minus;
}

double hermiticity_defect(const OperatorMatrix& op) {
    if (op.rows() != op.cols()) return std::numeric_limits<double>::infinity();
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

cplx bloch_parameter(const PhasePoint& point) {
    require_bloch_domain(point.q1, point.p1);
    return cplx(point.q1, point.p1) / std::sqrt(2.0 - point.bloch_radius2());
}

cplx field_parameter(const PhasePoint& point) {
    return cplx(point.q2, point.p2) / std::numbers::sqrt2;
}

std::vector<cplx> glauber_amplitudes(cplx beta, int np) {
    std::vector<cplx> c(static_cast<std::size_t>(np) + 1);
    c[0] = std::exp(-0.5 * std::norm(beta));
    for (int n = 0; n < np; ++n) c[n + 1] = c[n] * beta / std::sqrt(static_cast<double>(n + 1));
    return c;
}

double fock_tail_mass(cplx beta, int np) {
    double kept = 0.0;
    for (const cplx& c : glauber_amplitudes(beta, np)) kept += std::norm(c);
    return std::max(0.0, 1.0 - kept);
}

bool cutoff_margin_ok(cplx beta, int np) noexcept {
    const double b = std::abs(beta);
    return b * b + 6.0 * b <= static_cast<double>(np);
}

QuantumState coherent_state(const PhasePoint& point, const ModelParams& params) {
    params.validate();
    const cplx tau = bloch_parameter(point);
    const cplx beta = field_parameter(point);

    std::vector<cplx> field = glauber_amplitudes(beta, params.np);
    double kept = 0.0;
    for (const cplx& c : field) kept += std::norm(c);
    const double tail = 1.0 - kept;
    if (tail > kTailMassLimit) {
        std::ostringstream msg;
        msg << "Fock cutoff np = " << params.np << " too small for |beta|^2 = " << std::norm(beta)
            << ": tail mass " << tail << " exceeds " << kTailMassLimit;
        throw NumericalGateError(msg.str());
    }
    const double field_scale = 1.0 / std::sqrt(kept);

    // (|g> + tau |e>) / sqrt(1 + |tau|^2)
    const double atom_scale = 1.0 / std::sqrt(1.0 + std::norm(tau));
    const cplx amp_e = tau * atom_scale;
    const cplx amp_g = atom_scale;

    const int f = params.fock_dim();
    Eigen::VectorXcd psi(params.dim());
    for (int n = 0; n < f; ++n) {
        psi(n) = amp_e * field[n] * field_scale;
        psi(f + n) = amp_g * field[n] * field_scale;
    }
    return QuantumState(std::move(psi));
}

double classical_energy(const PhasePoint& x, const ModelParams& params) {
    require_bloch_domain(x.q1, x.p1);
    const double r2 = x.bloch_radius2();
    const double f = std::sqrt(1.0 - 0.5 * r2);
    return 0.5 * params.omega * (r2 - 1.0) + 0.5 * params.omega0 * (x.q2 * x.q2 + x.p2 * x.p2)
           + f * (params.g_plus() * x.q1 * x.q2 + params.g_minus() * x.p1 * x.p2);
}

ShellRoots solve_p2_on_shell(double q1, double p1, double q2, double energy,
                             const ModelParams& params) {
    require_bloch_domain(q1, p1);
    const double r2 = q1 * q1 + p1 * p1;
    const double f = std::sqrt(1.0 - 0.5 * r2);
    const double a = 0.5 * params.omega0;
    const double b = f * params.g_minus() * p1;
    const double c = 0.5 * params.omega * (r2 - 1.0) + 0.5 * params.omega0 * q2 * q2
                     + f * params.g_plus() * q1 * q2 - energy;

    if (a == 0.0) {
        if (b == 0.0 || -c / b <= 0.0) throw ValidationError("no positive p2 on the energy shell");
        return {-c / b, std::nullopt};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        std::ostringstream msg;
        msg << "point (q1=" << q1 << ", p1=" << p1 << ", q2=" << q2
            << ") admits no real p2 on the shell E=" << energy;
        throw ValidationError(msg.str());
    }
    // Stable form avoids cancellation between -b and sqrt(disc).
    const double s = std::sqrt(disc);
    const double qq = -0.5 * (b + std::copysign(s, b));
    double r_hi = qq / a;
    double r_lo = qq != 0.0 ? c / qq : -b / (2.0 * a);
    if (r_lo > r_hi) std::swap(r_lo, r_hi);

    if (r_hi <= 0.0) {
        std::ostringstream msg;
        msg << "point (q1=" << q1 << ", p1=" << p1 << ", q2=" << q2
            << ") has no positive p2 root on the shell E=" << energy;
        throw ValidationError(msg.str());
    }
    ShellRoots out{r_hi, std::nullopt};
    if (r_lo > 0.0) out.other_positive = r_lo;
    return out;
}

}  // namespace rabichaos
