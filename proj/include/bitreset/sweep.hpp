#pragma once

// Parameter sweeps over one protocol family, written out as CSV.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitreset/thermo.hpp"

namespace bitreset {

enum class Family { discrete, continuous };
enum class Mode { fixed_emax, fixed_epsilon };
enum class Spacing { linear, log };

struct Grid {
  std::string parameter;  // "tau", "e_max" or "epsilon"
  Spacing spacing = Spacing::linear;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  std::vector<double> values() const;
};

struct SweepSpec {
  Family family = Family::discrete;
  Mode mode = Mode::fixed_emax;
  /// Fixed values keyed by parameter name: n_steps, e_max, epsilon, tau.
  std::vector<std::pair<std::string, double>> fixed;
  Grid grid;
  BathParams bath{1.0, 0.1};
  std::vector<std::string> columns;

  /// Throws InvalidArgument describing the first problem found.
  void validate() const;
};

/// Every column a sweep can emit, in canonical order.
const std::vector<std::string>& column_vocabulary();

/// Parses the JSON form of a SweepSpec; unknown keys are rejected.
SweepSpec parse_sweep_spec(std::string_view json_text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

/// Rows of optional cells; an empty cell is rendered as NA.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  bool operator==(const Table&) const = default;
};

/// Evaluates every grid point. Rows come out in ascending grid order for any
/// thread count; infeasible design targets yield rows with feasible = 0.
Table run_sweep(const SweepSpec& spec, unsigned threads = 1);

/// BITRESET_THREADS if set and positive, otherwise the hardware concurrency.
unsigned default_thread_count();

/// Header row plus one line per row, values at 17 significant digits, NA for empty cells.
void emit_csv(const Table& table, std::ostream& out);
/// Writes through a temporary file in the same directory, then renames it into place.
void write_csv_file(const Table& table, const std::filesystem::path& path);
Table parse_csv(std::istream& in);

std::string format_number(double x);

}  // namespace bitreset
