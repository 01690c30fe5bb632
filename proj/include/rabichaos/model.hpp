// model.hpp: operators, Hamiltonian, and coherent states of the anisotropic
// quantum Rabi model on a truncated Fock space, plus the mean-field energy.
//
// Basis layout is atom-major: index = level * (np + 1) + n, with level 0 the
// excited state |e> (sigma_z = +1) and level 1 the ground state |g>.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabichaos {

using cplx = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;

// Bad user input: out-of-domain points, invalid parameters, malformed config.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical acceptance gate tripped (truncation tail, energy drift, ...).
class NumericalGateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelParams {
    double omega{1.0};
    double omega0{0.2};
    double g1{0.9};
    double g2{0.5};
    int np{150};

    double g_plus() const noexcept { return g1 + g2; }
    double g_minus() const noexcept { return g1 - g2; }
    int fock_dim() const noexcept { return np + 1; }
    int dim() const noexcept { return 2 * (np + 1); }

    // Throws ValidationError unless omega > 0, omega0 >= 0, np >= 1.
    void validate() const;
};

struct PhasePoint {
    double q1{0.0};
    double p1{0.0};
    double q2{0.0};
    double p2{0.0};

    double bloch_radius2() const noexcept { return q1 * q1 + p1 * p1; }
};

// Throws ValidationError when q1^2 + p1^2 >= 2.
void require_bloch_domain(double q1, double p1);

// Normalized state vector. Construction checks the norm.
class QuantumState {
public:
    explicit QuantumState(Eigen::VectorXcd amplitudes, double norm_tol = 1e-10);

    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    int dim() const noexcept { return static_cast<int>(amps_.size()); }
    int np() const noexcept { return dim() / 2 - 1; }

private:
    Eigen::VectorXcd amps_;
};

struct OperatorSet {
    OperatorMatrix a;
    OperatorMatrix a_dag;
    OperatorMatrix q2;
    OperatorMatrix p2;
    OperatorMatrix sigma_z;
    OperatorMatrix sigma_plus;
    OperatorMatrix sigma_minus;
};

OperatorSet build_operators(const ModelParams& params);

// H = (w/2) sz + w0 a^dag a + g1 (a^dag s- + a s+) + g2 (a^dag s+ + a s-)
OperatorMatrix build_hamiltonian(const ModelParams& params);

// a^dag a + s+ s-, conserved when g2 = 0.
OperatorMatrix excitation_number(const ModelParams& params);

// max |A - A^dag| over entries.
double hermiticity_defect(const OperatorMatrix& op);

// tau = (q1 + i p1) / sqrt(2 - q1^2 - p1^2)
cplx bloch_parameter(const PhasePoint& point);
// beta = (q2 + i p2) / sqrt(2)
cplx field_parameter(const PhasePoint& point);

// Unnormalized Glauber amplitudes c_n = e^{-|beta|^2/2} beta^n / sqrt(n!),
// n = 0..np, by the recurrence c_{n+1} = c_n beta / sqrt(n+1).
std::vector<cplx> glauber_amplitudes(cplx beta, int np);

// Probability weight above the cutoff, 1 - sum_{n<=np} |c_n|^2.
double fock_tail_mass(cplx beta, int np);

// The 6-sigma admission margin |beta|^2 + 6|beta| <= np.
bool cutoff_margin_ok(cplx beta, int np) noexcept;

inline constexpr double kTailMassLimit = 1e-8;

// |tau> (x) |beta>. Throws ValidationError outside the Bloch domain and
// NumericalGateError when the Fock tail above np exceeds kTailMassLimit.
QuantumState coherent_state(const PhasePoint& point, const ModelParams& params);

double classical_energy(const PhasePoint& point, const ModelParams& params);

struct ShellRoots {
    double p2{0.0};
    // Set when the quadratic has two positive roots; p2 holds the larger.
    std::optional<double> other_positive;
};

// Positive p2 such that classical_energy(q1, p1, q2, p2) == energy.
// Throws ValidationError when there is no real or no positive root.
ShellRoots solve_p2_on_shell(double q1, double p1, double q2, double energy,
                             const ModelParams& params);

}  // namespace rabichaos
