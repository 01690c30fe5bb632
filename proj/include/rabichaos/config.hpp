// config.hpp: flat `key = value` run configuration (schema in docs/config.md)

#pragma once

#include "rabichaos/model.hpp"
#include "rabichaos/observables.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rabichaos {

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct NamedPoint {
    std::string name;
    PhasePoint point;
    bool p2_from_shell{false};  // p2 was solved rather than given
};

struct RunConfig {
    ModelParams params;
    double energy{2.0};
    double energy_tolerance{1e-4};
    std::vector<NamedPoint> points;

    // quantum diagnostics
    double delta{0.1};
    TimeWindow window{0.0, 50.0};
    double dt{0.01};
    AutoWindowOptions fit;
    std::optional<double> fit_t_start;
    std::optional<double> fit_t_end;
    int np_check{0};  // 0 disables the cutoff convergence check
    int map_grid{101};
    int husimi_grid{201};
    double husimi_range{10.0};
    std::vector<double> husimi_times{0.0, 2.0, 4.0, 6.0, 8.0};
    double husimi_peak_threshold{0.05};
    double inversion_width{1.0};
    std::optional<double> collapse_fraction;

    // classical diagnostics
    double classical_tol{1e-11};
    double drift_limit{1e-8};
    double lyapunov_t_end{2000.0};
    double lyapunov_renorm{1.0};
    double poincare_t_end{20000.0};
    int poincare_max_points{2000};
    int poincare_scan{0};

    std::string out_dir{"."};
    int workers{1};

    const NamedPoint& point(std::string_view name) const;
    // Every setting in canonical key order, formatted so that the lines can
    // be fed back to parse_config.
    std::vector<std::pair<std::string, std::string>> echo() const;
    // Checks value ranges and the admissibility of every named point.
    void validate() const;
};

// Parses config text. Points given as `q1, p1, q2` get p2 solved on the shell;
// points given with four numbers are checked against the shell. Throws
// ConfigError naming the line, key, or point.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace rabichaos
