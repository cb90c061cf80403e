#include "bitreset/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "bitreset/bounds.hpp"
#include "bitreset/errors.hpp"
#include "bitreset/protocols.hpp"

namespace bitreset {

namespace {

using json = nlohmann::json;
using Row = std::vector<std::optional<double>>;
using Cells = std::map<std::string, std::optional<double>>;

// Parameters that fully determine a row, per family and mode.
std::vector<std::string> required_parameters(Family family, Mode mode) {
  std::vector<std::string> out;
  if (family == Family::discrete) out.emplace_back("n_steps");
  out.emplace_back(mode == Mode::fixed_emax ? "e_max" : "epsilon");
  out.emplace_back("tau");
  return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
T get_required(const json& obj, const char* key, std::string_view where) {
  if (!obj.contains(key)) throw InvalidArgument("missing key '" + std::string(key) + "' in " + std::string(where));
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument("bad value for '" + std::string(key) + "' in " + std::string(where) + ": " + e.what());
  }
}

double lookup(const Cells& params, const std::string& key) { return *params.at(key); }

void fill_bounds(Cells& cells, const RunRecord& run, const std::vector<BoundReport>& reports) {
  for (const BoundReport& r : reports) cells[r.name] = r.value;
  cells["tau"] = run.tau;
  cells["epsilon"] = run.epsilon;
  cells["e_max"] = run.e_max;
  cells["W"] = run.work;
  cells["W_qs"] = run.w_qs;
  cells["W_pn"] = run.w_pn;
  cells["D"] = run.d_final;
  cells["Sigma"] = run.sigma;
  cells["feasible"] = 1.0;
}

Cells evaluate_point(const SweepSpec& spec, const Cells& params) {
  Cells cells;
  const BathParams& bath = spec.bath;
  const double tau = lookup(params, "tau");
  auto mark_infeasible = [&] {
    for (const auto& [k, v] : params) {
      if (k != "n_steps") cells[k] = v;
    }
    cells["feasible"] = 0.0;
    return cells;
  };

  if (spec.family == Family::discrete) {
    const int n = static_cast<int>(lookup(params, "n_steps"));
    double e_max = 0.0;
    if (spec.mode == Mode::fixed_emax) {
      e_max = lookup(params, "e_max");
    } else {
      try {
        e_max = solve_emax_discrete(lookup(params, "epsilon"), n, tau, bath);
      } catch (const InfeasibleTarget&) {
        return mark_infeasible();
      }
    }
    const DiscreteProtocol proto(n, e_max, tau);
    const RunRecord run = run_discrete(proto, bath);
    fill_bounds(cells, run, discrete_bounds(run, proto, bath));
    cells["dominates_eq11"] = sigma_dominates_eq11(proto, bath) ? 1.0 : 0.0;
    if (run.epsilon > 0.0 && run.epsilon < 0.5) {
      const EmaxSandwich s = emax_sandwich_eq15(run.epsilon, n, bath);
      cells["emax_lb_eq15"] = s.lower;
      cells["emax_ub_eq15"] = s.upper;
    }
    return cells;
  }

  double delta = 0.0;
  if (spec.mode == Mode::fixed_emax) {
    delta = bath.beta() * lookup(params, "e_max") - bath.mu() * tau;
    // the slope mu/beta alone overshoots e_max
    if (delta < 0.0) return mark_infeasible();
  } else {
    try {
      delta = solve_delta_continuous(lookup(params, "epsilon"), tau, bath);
    } catch (const InfeasibleTarget&) {
      return mark_infeasible();
    }
  }
  const ContinuousProtocol proto(delta, tau);
  const RunRecord run = run_continuous(proto, bath);
  fill_bounds(cells, run, continuous_bounds(run, proto, bath));
  cells["delta"] = delta;
  return cells;
}

std::optional<double> parse_cell(std::string_view text) {
  if (text == "NA") return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("malformed CSV cell '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const std::vector<std::string>& column_vocabulary() {
  static const std::vector<std::string> vocab = {
      "tau",     "epsilon", "e_max",        "delta",        "W",           "W_qs",        "W_pn",
      "D",       "Sigma",   "lb_eq5",       "lb_eq8",       "ub_eq10",     "lb_eq12",     "ub_eq13",
      "eps_lb_eq14", "emax_lb_eq15", "emax_ub_eq15", "ub_eq16", "ub_eq17", "dominates_eq11", "feasible"};
  return vocab;
}

std::vector<double> Grid::values() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / (count - 1);
    out[i] = spacing == Spacing::linear ? min + (max - min) * frac
                                        : std::exp(std::log(min) + (std::log(max) - std::log(min)) * frac);
  }
  if (count >= 2) {
    out.front() = min;
    out.back() = max;
  }
  return out;
}

void SweepSpec::validate() const {
  const auto required = required_parameters(family, mode);
  if (std::find(required.begin(), required.end(), grid.parameter) == required.end() || grid.parameter == "n_steps") {
    throw InvalidArgument("swept parameter '" + grid.parameter + "' is not a real parameter of this family/mode");
  }
  if (grid.count < 2) throw InvalidArgument("grid count must be >= 2");
  if (!(grid.min < grid.max)) throw InvalidArgument("grid min must be < max");
  if (grid.spacing == Spacing::log && !(grid.min > 0.0)) throw InvalidArgument("log grid needs min > 0");
  if (grid.min < 0.0) throw InvalidArgument("grid values must be >= 0");

  std::set<std::string> seen;
  for (const auto& [key, value] : fixed) {
    if (!seen.insert(key).second) throw InvalidArgument("duplicate fixed parameter '" + key + "'");
    if (key == grid.parameter) throw InvalidArgument("'" + key + "' is both fixed and swept");
    if (std::find(required.begin(), required.end(), key) == required.end()) {
      throw InvalidArgument("fixed parameter '" + key + "' does not apply to this family/mode");
    }
    if (!std::isfinite(value) || value < 0.0) throw InvalidArgument("fixed parameter '" + key + "' must be >= 0");
    if (key == "n_steps" && (value < 1.0 || value != std::floor(value))) {
      throw InvalidArgument("n_steps must be a positive integer");
    }
  }
  for (const auto& key : required) {
    if (key != grid.parameter && !seen.count(key)) throw InvalidArgument("missing fixed parameter '" + key + "'");
  }
  const auto& vocab = column_vocabulary();
  for (const auto& c : columns) {
    if (std::find(vocab.begin(), vocab.end(), c) == vocab.end()) throw InvalidArgument("unknown column '" + c + "'");
  }
}

SweepSpec parse_sweep_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("sweep spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("sweep spec must be a JSON object");
  reject_unknown_keys(doc, {"family", "mode", "fixed", "sweep", "bath", "columns"}, "sweep spec");

  SweepSpec spec;
  const auto family = get_required<std::string>(doc, "family", "sweep spec");
  if (family == "discrete") spec.family = Family::discrete;
  else if (family == "continuous") spec.family = Family::continuous;
  else throw InvalidArgument("family must be 'discrete' or 'continuous', got '" + family + "'");

  const auto mode = get_required<std::string>(doc, "mode", "sweep spec");
  if (mode == "fixed-emax") spec.mode = Mode::fixed_emax;
  else if (mode == "fixed-epsilon") spec.mode = Mode::fixed_epsilon;
  else throw InvalidArgument("mode must be 'fixed-emax' or 'fixed-epsilon', got '" + mode + "'");

  const json fixed = doc.contains("fixed") ? doc.at("fixed") : json::object();
  if (!fixed.is_object()) throw InvalidArgument("'fixed' must be an object");
  reject_unknown_keys(fixed, {"n_steps", "e_max", "epsilon", "tau"}, "fixed");
  for (const auto& [key, value] : fixed.items()) {
    if (!value.is_number()) throw InvalidArgument("fixed parameter '" + key + "' must be a number");
    spec.fixed.emplace_back(key, value.get<double>());
  }

  const json& sweep = doc.contains("sweep") ? doc.at("sweep") : throw InvalidArgument("missing key 'sweep'");
  if (!sweep.is_object()) throw InvalidArgument("'sweep' must be an object");
  reject_unknown_keys(sweep, {"parameter", "spacing", "min", "max", "count"}, "sweep");
  spec.grid.parameter = get_required<std::string>(sweep, "parameter", "sweep");
  const auto spacing = get_required<std::string>(sweep, "spacing", "sweep");
  if (spacing == "linear") spec.grid.spacing = Spacing::linear;
  else if (spacing == "log") spec.grid.spacing = Spacing::log;
  else throw InvalidArgument("spacing must be 'linear' or 'log', got '" + spacing + "'");
  spec.grid.min = get_required<double>(sweep, "min", "sweep");
  spec.grid.max = get_required<double>(sweep, "max", "sweep");
  spec.grid.count = get_required<int>(sweep, "count", "sweep");

  const json& bath = doc.contains("bath") ? doc.at("bath") : throw InvalidArgument("missing key 'bath'");
  if (!bath.is_object()) throw InvalidArgument("'bath' must be an object");
  reject_unknown_keys(bath, {"beta", "mu"}, "bath");
  spec.bath = BathParams(get_required<double>(bath, "beta", "bath"), get_required<double>(bath, "mu", "bath"));

  if (doc.contains("columns")) {
    spec.columns = get_required<std::vector<std::string>>(doc, "columns", "sweep spec");
  } else {
    spec.columns = column_vocabulary();
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open sweep spec " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_spec(buf.str());
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("BITRESET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Table run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const std::vector<double> grid = spec.grid.values();
  Table table;
  table.columns = spec.columns.empty() ? column_vocabulary() : spec.columns;
  table.rows.resize(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());

  auto work = [&](std::size_t i) {
    try {
      Cells params;
      for (const auto& [k, v] : spec.fixed) params[k] = v;
      params[spec.grid.parameter] = grid[i];
      const Cells cells = evaluate_point(spec, params);
      Row row;
      row.reserve(table.columns.size());
      for (const auto& c : table.columns) {
        const auto it = cells.find(c);
        row.push_back(it == cells.end() ? std::nullopt : it->second);
      }
      table.rows[i] = std::move(row);  // each slot has exactly one writer
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < grid.size(); i += n_threads) work(i);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

void emit_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const Row& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << (row[i] ? format_number(*row[i]) : "NA");
    }
    out << '\n';
  }
}

void write_csv_file(const Table& table, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    emit_csv(table, out);
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

Table parse_csv(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("CSV input is empty");
  table.columns = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.columns.size()) throw InvalidArgument("CSV row width does not match header");
    Row row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bitreset
