// runner.hpp: subcommand dispatch and CSV emission for the rabichaos CLI

#pragma once

#include "rabichaos/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rabichaos {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumericalGate = 2;

// Command-line overrides layered on top of a config file.
struct Overrides {
    std::optional<int> grid;
    std::optional<int> np;
    std::optional<double> t_end;
    std::optional<std::string> out;
    std::optional<int> workers;
};

const std::vector<std::string>& subcommands();

// --grid sets map.grid (husimi.grid for `husimi`); --t-end sets the time span
// of the subcommand's own diagnostic.
void apply_overrides(RunConfig& cfg, std::string_view subcommand, const Overrides& o);

// One CSV file: `#` provenance lines, a column header, then rows.
class CsvTable {
public:
    CsvTable(std::string file_name, std::vector<std::string> columns);

    const std::string& file_name() const noexcept { return name_; }
    void add_note(std::string line);
    void add_row(std::vector<std::string> cells);
    void add_numbers(std::initializer_list<double> values);
    // `header` lines are written first, each prefixed with "# ".
    std::string render(const std::vector<std::string>& header, std::string_view failure = {}) const;

private:
    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::string> notes_;
    std::vector<std::string> rows_;
};

std::vector<std::string> provenance_header(const RunConfig& cfg, std::string_view subcommand,
                                           std::string_view config_source);

CsvTable entropy_map_table(const EntropyMap& map);

// Runs one subcommand and writes its files into cfg.out_dir. Returns kExitOk,
// kExitValidation, or kExitNumericalGate; messages go to `log`.
int run(std::string_view subcommand, const RunConfig& cfg, std::string_view config_source, std::ostream& log);

}  // namespace rabichaos
