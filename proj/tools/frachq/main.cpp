// frachq command-line tool. Talks to the library through the C API only.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frachq/frachq.h"
#include "table.hpp"

using frachq_cli::Cell;
using frachq_cli::Table;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kNumerical = 3, kVerifyFailed = 4 };

// Input problem detected before or during computation: exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library failure carrying its status.
struct LibraryError : std::runtime_error {
  frachq_status status;
  LibraryError(frachq_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
};

int exit_code_for(frachq_status s) {
  switch (s) {
    case FRACHQ_ERR_QUADRATURE:
    case FRACHQ_ERR_EIGENSOLVER:
    case FRACHQ_ERR_OUT_OF_MEMORY:
    case FRACHQ_ERR_INTERNAL:
      return kNumerical;
    default:
      return kUsage;
  }
}

void check(frachq_status s) {
  if (s != FRACHQ_OK) {
    throw LibraryError(s, std::string(frachq_status_string(s)) + ": " + frachq_last_error());
  }
}

// ---- options ---------------------------------------------------------------

struct Options {
  double alpha = 0.5;
  double t_start = 0.0;
  double t_stop = 5.0;
  int t_count = 51;
  double time = 1.0;
  double s_start = 0.0;
  double s_stop = 5.0;
  int s_count = 11;
  double omega = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  double b = 1.0;
  double x0 = 0.0;
  double p0 = 0.0;
  double s_max = 1e4;
  std::string mode;
  std::string method = "spectral";
  std::string format = "csv";
  std::string config;
  std::string out;
  std::string columns;
  std::string hamiltonian;
  std::string op;
  std::string density;
  std::string preset;
  std::string level = "quick";
  unsigned threads = 1;
  std::map<std::string, double> quad;  // rel_tol, abs_tol, ...
};

// Options registered on a subcommand, keyed by config-file name, so values
// from --config can be applied where no flag was given.
struct Binding {
  CLI::Option* option;
  std::function<void(const std::string&)> assign;
};
using Registry = std::map<std::string, Binding>;

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw UsageError("config key '" + key + "': '" + v + "' is not a number");
}

template <class T>
void bind_option(CLI::App* app, Registry& reg, const std::string& name, T& var,
          const std::string& help) {
  CLI::Option* o = app->add_option("--" + name, var, help)->capture_default_str();
  reg[name] = {o, [&var, name](const std::string& v) {
                 if constexpr (std::is_same_v<T, std::string>) {
                   var = v;
                 } else if constexpr (std::is_integral_v<T>) {
                   const double d = parse_double(name, v);
                   if (d != std::floor(d)) throw UsageError("config key '" + name + "' must be an integer");
                   var = static_cast<T>(d);
                 } else {
                   var = parse_double(name, v);
                 }
               }};
}

struct ConfigEntry {
  std::string key;  // as written
  std::string value;
};

std::vector<ConfigEntry> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::vector<ConfigEntry> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    kv.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return kv;
}

void apply_config(const Options& opt, Registry& reg) {
  if (opt.config.empty()) return;
  // Keys accept '_' or '-'; later lines win.
  for (const auto& e : read_config(opt.config)) {
    std::string key = e.key;
    std::replace(key.begin(), key.end(), '_', '-');
    auto it = reg.find(key);
    if (it == reg.end()) throw UsageError("config file: unknown key '" + e.key + "'");
    if (it->second.option->count() == 0) it->second.assign(e.value);
  }
}

// ---- validation helpers ------------------------------------------------------

std::vector<double> linear_grid(const char* name, double start, double stop, int count,
                                bool allow_zero) {
  const std::string n = name;
  if (!std::isfinite(start) || !std::isfinite(stop)) throw UsageError(n + " grid must be finite");
  if (count < 1) throw UsageError("--" + n + "-count must be >= 1");
  if (allow_zero ? start < 0.0 : start <= 0.0) {
    throw UsageError("--" + n + "-start must be " + (allow_zero ? ">= 0" : "> 0"));
  }
  if (count > 1 && !(stop > start)) {
    throw UsageError("--" + n + "-stop must exceed --" + n + "-start when --" + n +
                     "-count > 1");
  }
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    g[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  return g;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

void validate_alpha(double alpha, bool allow_one) {
  require(alpha > 0.0 && (allow_one ? alpha <= 1.0 : alpha < 1.0),
          std::string("--alpha must lie in ") + (allow_one ? "(0, 1]" : "(0, 1)") +
              " (got " + frachq_cli::format_number(alpha) + ")");
}

struct ConfigHandle {
  frachq_config* ptr = nullptr;
  explicit ConfigHandle(const Options& opt) {
    check(frachq_config_create(&ptr));
    for (const auto& [k, v] : opt.quad) {
      std::string key = k;
      std::replace(key.begin(), key.end(), '-', '_');
      check(frachq_config_set(ptr, key.c_str(), v));
    }
  }
  ~ConfigHandle() { frachq_config_destroy(ptr); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

struct MatrixHandle {
  frachq_matrix* ptr = nullptr;
  MatrixHandle() = default;
  MatrixHandle(MatrixHandle&& o) noexcept : ptr(o.ptr) { o.ptr = nullptr; }
  MatrixHandle& operator=(MatrixHandle&& o) noexcept {
    std::swap(ptr, o.ptr);
    return *this;
  }
  ~MatrixHandle() { frachq_matrix_destroy(ptr); }
};

struct SpectrumHandle {
  frachq_spectrum* ptr = nullptr;
  ~SpectrumHandle() { frachq_spectrum_destroy(ptr); }
};

// Reads {"dim": N, "re": [[...]], "im": [[...]]}; "im" may be omitted.
MatrixHandle load_matrix(const std::string& path, frachq_role role) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open matrix file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError(path + ": invalid JSON (" + e.what() + ")");
  }
  auto fail = [&](const std::string& m) { throw UsageError(path + ": " + m); };
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    fail("expected an object with integer \"dim\"");
  }
  const int n = j["dim"].get<int>();
  if (n < 1 || n > 1000) fail("\"dim\" must lie in [1, 1000]");
  std::vector<double> re(n * n, 0.0), im(n * n, 0.0);
  auto read_part = [&](const char* key, std::vector<double>& dst, bool required) {
    if (!j.contains(key)) {
      if (required) fail(std::string("missing \"") + key + "\"");
      return;
    }
    const json& a = j[key];
    if (!a.is_array() || static_cast<int>(a.size()) != n) {
      fail(std::string("\"") + key + "\" must have " + std::to_string(n) + " rows");
    }
    for (int r = 0; r < n; ++r) {
      if (!a[r].is_array() || static_cast<int>(a[r].size()) != n) {
        fail(std::string("\"") + key + "\" row " + std::to_string(r) + " must have " +
             std::to_string(n) + " entries");
      }
      for (int c = 0; c < n; ++c) {
        if (!a[r][c].is_number()) fail(std::string("\"") + key + "\" entries must be numbers");
        const double v = a[r][c].get<double>();
        if (!std::isfinite(v)) fail("entries must be finite");
        dst[r * n + c] = v;
      }
    }
  };
  read_part("re", re, true);
  read_part("im", im, false);
  MatrixHandle m;
  check(frachq_matrix_create(n, re.data(), im.data(), role, &m.ptr));
  return m;
}

MatrixHandle make_matrix(int n, const std::vector<double>& re, const std::vector<double>& im,
                         frachq_role role) {
  MatrixHandle m;
  check(frachq_matrix_create(n, re.data(), im.data(), role, &m.ptr));
  return m;
}

// ---- evaluation over a grid --------------------------------------------------

struct PointError {
  frachq_status status = FRACHQ_OK;
  std::string message;
  bool usage = false;
};

// Runs row(i) for every i on `threads` workers (strided), collecting rows in
// index order. The first failing index (lowest i) is rethrown.
std::vector<std::vector<Cell>> evaluate_rows(std::size_t n, unsigned threads,
                                             const std::function<std::vector<Cell>(std::size_t)>& row) {
  std::vector<std::vector<Cell>> rows(n);
  std::vector<PointError> errors(n);
  auto work = [&](std::size_t i) {
    try {
      rows[i] = row(i);
    } catch (const LibraryError& e) {
      errors[i] = {e.status, e.what(), false};
    } catch (const UsageError& e) {
      errors[i] = {FRACHQ_ERR_DOMAIN, e.what(), true};
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += threads) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e.usage) throw UsageError(e.message);
    if (e.status != FRACHQ_OK) throw LibraryError(e.status, e.message);
  }
  return rows;
}

// ---- commands -----------------------------------------------------------------

struct Output {
  Table table;
  json extra = json::object();
  std::optional<json> json_override;  // full JSON document, when not tabular
  std::string title;
};

Output cmd_kernel(const Options& o) {
  validate_alpha(o.alpha, false);
  require(o.time > 0.0 && std::isfinite(o.time), "--time must be > 0");
  const auto s = linear_grid("s", o.s_start, o.s_stop, o.s_count, true);
  ConfigHandle cfg(o);

  Output out;
  out.title = "stable kernel f_alpha(t, s), alpha = " + frachq_cli::format_number(o.alpha) +
              ", t = " + frachq_cli::format_number(o.time);
  out.table.columns = {"s", "f"};
  out.table.rows = evaluate_rows(s.size(), o.threads, [&](std::size_t i) {
    double f = 0.0;
    check(frachq_kernel_eval(o.alpha, o.time, s[i], cfg.ptr, &f, nullptr));
    return std::vector<Cell>{s[i], f};
  });
  out.extra["alpha"] = o.alpha;
  out.extra["t"] = o.time;
  return out;
}

frachq_packet packet_of(const Options& o) { return {o.x0, o.p0, o.b, o.hbar}; }

void validate_packet(const Options& o) {
  require(o.mass > 0.0, "--mass must be > 0");
  require(o.hbar > 0.0, "--hbar must be > 0");
  require(o.b > 0.0, "--b must be > 0");
  require(std::isfinite(o.x0) && std::isfinite(o.p0), "--x0 and --p0 must be finite");
}

Output cmd_oscillator(const Options& o) {
  validate_alpha(o.alpha, true);
  validate_packet(o);
  require(o.omega > 0.0, "--omega must be > 0");
  frachq_envelope_mode mode = FRACHQ_ENVELOPE_CLOSED_FORM;
  if (o.mode == "quadrature") {
    mode = FRACHQ_ENVELOPE_QUADRATURE;
  } else {
    require(o.mode.empty() || o.mode == "closed-form",
            "--mode must be closed-form or quadrature for oscillator");
  }
  const auto t = linear_grid("t", o.t_start, o.t_stop, o.t_count, true);
  ConfigHandle cfg(o);
  const frachq_packet packet = packet_of(o);

  Output out;
  out.title = "fractional oscillator, alpha = " + frachq_cli::format_number(o.alpha);
  out.table.columns = {"t", "C", "S", "mean_q", "mean_p", "D_Q", "D_P"};
  out.table.rows = evaluate_rows(t.size(), o.threads, [&](std::size_t i) {
    double coeffs[4], env[2];
    check(frachq_oscillator_coeffs(o.alpha, o.mass, o.omega, o.hbar, t[i], mode, cfg.ptr,
                                   coeffs, env));
    frachq_moments m;
    check(frachq_evolve_moments(&packet, coeffs, &m));
    return std::vector<Cell>{t[i], env[0], env[1], m.mean_q, m.mean_p, m.disp_q, m.disp_p};
  });
  out.extra["alpha"] = o.alpha;
  out.extra["omega"] = o.omega;
  return out;
}

Output cmd_free(const Options& o) {
  validate_alpha(o.alpha, true);
  validate_packet(o);
  frachq_free_mode mode = FRACHQ_FREE_REGULARIZED_HALF;
  if (!o.mode.empty()) {
    if (frachq_free_mode_parse(o.mode.c_str(), &mode) != FRACHQ_OK) {
      throw UsageError(frachq_last_error());
    }
  }
  if (mode != FRACHQ_FREE_TRUNCATED_NUMERIC && o.alpha != 0.5 && o.alpha != 1.0) {
    throw UsageError(std::string("--mode ") + frachq_free_mode_name(mode) +
                     " needs --alpha 0.5 (or 1)");
  }
  require(o.s_max > 0.0, "--s-max must be > 0");
  const auto t = linear_grid("t", o.t_start, o.t_stop, o.t_count, true);
  ConfigHandle cfg(o);
  const frachq_packet packet = packet_of(o);
  const bool half = mode != FRACHQ_FREE_TRUNCATED_NUMERIC && o.alpha == 0.5;

  Output out;
  out.title = std::string("fractional free particle, mode ") + frachq_free_mode_name(mode);
  out.table.columns = {"t",   "g",           "mean_q", "mean_p",   "D_Q",
                       "D_P", "D_Q_printed", "mode",   "divergent", "growth_exponent"};
  out.table.rows = evaluate_rows(t.size(), o.threads, [&](std::size_t i) {
    double coeffs[4], g = 0.0;
    frachq_free_diagnostics d;
    check(frachq_free_coeffs(o.alpha, t[i], o.mass, mode, o.s_max, cfg.ptr, coeffs, &g, &d));
    frachq_moments m;
    check(frachq_evolve_moments(&packet, coeffs, &m));
    double printed = NAN;
    if (half) check(frachq_printed_free_disp_q(&packet, o.mass, t[i], &printed));
    const double growth = d.has_measured_exponent ? d.measured_exponent : NAN;
    return std::vector<Cell>{t[i],    g,       m.mean_q,
                             m.mean_p, m.disp_q, m.disp_p,
                             printed, std::string(frachq_free_mode_name(mode)),
                             static_cast<double>(d.divergent), growth};
  });
  out.extra["alpha"] = o.alpha;
  out.extra["mode"] = frachq_free_mode_name(mode);
  if (mode == FRACHQ_FREE_TRUNCATED_NUMERIC) {
    out.extra["s_max"] = o.s_max;
    out.extra["predicted_growth_exponent"] = 1.0 - o.alpha;
  }
  return out;
}

std::string entry_name(const char* part, int j, int k) {
  return std::string(part) + "_" + std::to_string(j) + "_" + std::to_string(k);
}

Output cmd_matrix(const Options& o, frachq_role role) {
  validate_alpha(o.alpha, true);
  require(o.hbar > 0.0, "--hbar must be > 0");
  frachq_method method = FRACHQ_METHOD_SPECTRAL;
  if (o.method == "subordination") {
    method = FRACHQ_METHOD_SUBORDINATION;
  } else {
    require(o.method == "spectral", "--method must be spectral or subordination");
  }
  const auto t = linear_grid("t", o.t_start, o.t_stop, o.t_count, true);
  const std::string& file = role == FRACHQ_ROLE_DENSITY ? o.density : o.op;
  const char* file_flag = role == FRACHQ_ROLE_DENSITY ? "--density" : "--operator";

  MatrixHandle h, x;
  if (!o.preset.empty()) {
    require(o.preset == "qubit", "--preset must be qubit");
    require(o.hamiltonian.empty() && file.empty(),
            "--preset cannot be combined with matrix files");
    h = make_matrix(2, {0.5, 0.0, 0.0, -0.5}, {0, 0, 0, 0}, FRACHQ_ROLE_HERMITIAN);
    if (role == FRACHQ_ROLE_DENSITY) {
      x = make_matrix(2, {0.5, 0.5, 0.5, 0.5}, {0, 0, 0, 0}, role);
    } else {
      x = make_matrix(2, {0.0, 1.0, 1.0, 0.0}, {0, 0, 0, 0}, role);
    }
  } else {
    require(!o.hamiltonian.empty(), "--hamiltonian (or --preset qubit) is required");
    require(!file.empty(), std::string(file_flag) + " (or --preset qubit) is required");
    h = load_matrix(o.hamiltonian, FRACHQ_ROLE_HERMITIAN);
    x = load_matrix(file, role);
  }
  const int n = frachq_matrix_dim(h.ptr);
  if (frachq_matrix_dim(x.ptr) != n) {
    throw UsageError("Hamiltonian and " + std::string(file_flag + 2) + " dimensions differ");
  }
  SpectrumHandle spec;
  check(frachq_spectrum_create(h.ptr, o.hbar, &spec.ptr));
  ConfigHandle cfg(o);

  Output out;
  out.title = std::string(role == FRACHQ_ROLE_DENSITY ? "density" : "observable") +
              " evolution, alpha = " + frachq_cli::format_number(o.alpha);
  out.table.columns = {"t"};
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      out.table.columns.push_back(entry_name("re", j, k));
      out.table.columns.push_back(entry_name("im", j, k));
    }
  }
  std::vector<std::vector<double>> re_all(t.size()), im_all(t.size());
  out.table.rows = evaluate_rows(t.size(), o.threads, [&](std::size_t i) {
    MatrixHandle r;
    check(frachq_evolve(spec.ptr, x.ptr, o.alpha, t[i], method, cfg.ptr, &r.ptr, nullptr));
    std::vector<double> re(n * n), im(n * n);
    check(frachq_matrix_get(r.ptr, re.data(), im.data()));
    std::vector<Cell> row{t[i]};
    for (int e = 0; e < n * n; ++e) {
      row.emplace_back(re[e]);
      row.emplace_back(im[e]);
    }
    re_all[i] = std::move(re);
    im_all[i] = std::move(im);
    return row;
  });

  json doc;
  doc["alpha"] = o.alpha;
  doc["dim"] = n;
  doc["method"] = o.method;
  doc["role"] = role == FRACHQ_ROLE_DENSITY ? "density" : "observable";
  json results = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    json re = json::array(), im = json::array();
    for (int j = 0; j < n; ++j) {
      re.push_back(std::vector<double>(re_all[i].begin() + j * n, re_all[i].begin() + (j + 1) * n));
      im.push_back(std::vector<double>(im_all[i].begin() + j * n, im_all[i].begin() + (j + 1) * n));
    }
    results.push_back({{"t", t[i]}, {"re", re}, {"im", im}});
  }
  doc["results"] = std::move(results);
  out.json_override = std::move(doc);
  return out;
}

struct VerifyState {
  std::vector<std::vector<Cell>> rows;
};

void on_check(const char* name, int passed, double residual, double tolerance,
              const char* detail, void* user) {
  auto* st = static_cast<VerifyState*>(user);
  std::fprintf(stderr, "[%s] %s: residual %.3g (tolerance %.3g)%s%s\n",
               passed ? "pass" : "FAIL", name, residual, tolerance, *detail ? " " : "",
               detail);
  st->rows.push_back({static_cast<double>(st->rows.size() + 1), std::string(name),
                      std::string(passed ? "pass" : "fail"), residual, tolerance,
                      std::string(detail)});
}

Output cmd_verify(const Options& o, int& failed) {
  frachq_verify_level level = FRACHQ_VERIFY_QUICK;
  if (o.level == "full") {
    level = FRACHQ_VERIFY_FULL;
  } else {
    require(o.level == "quick", "level must be quick or full");
  }
  VerifyState st;
  check(frachq_verify(level, on_check, &st, &failed));
  Output out;
  out.title = "verify " + o.level;
  out.table.columns = {"index", "check", "status", "residual", "tolerance", "detail"};
  for (auto& r : st.rows) {
    // Keep CSV well formed.
    auto& d = std::get<std::string>(r[5]);
    std::replace(d.begin(), d.end(), ',', ';');
    std::replace(d.begin(), d.end(), '\n', ' ');
  }
  out.table.rows = std::move(st.rows);
  out.extra["level"] = o.level;
  out.extra["failed"] = failed;
  return out;
}

std::string render(Output& out, const Options& o) {
  if (!o.columns.empty()) {
    std::vector<std::string> keep;
    std::stringstream ss(o.columns);
    for (std::string c; std::getline(ss, c, ',');) {
      if (!c.empty()) keep.push_back(c);
    }
    const auto missing = out.table.select(keep);
    if (!missing.empty()) throw UsageError("--columns: unknown column '" + missing[0] + "'");
    out.json_override.reset();
  }
  if (o.format == "csv") return frachq_cli::to_csv(out.table);
  if (o.format == "json") {
    if (out.json_override) return out.json_override->dump(2) + "\n";
    return frachq_cli::to_json(out.table, out.extra);
  }
  return frachq_cli::to_svg(out.table, out.title);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Heisenberg dynamics by stable subordination"};
  app.require_subcommand(1);
  app.set_version_flag("--version", frachq_version());

  Options o;
  std::map<std::string, Registry> registries;

  auto common = [&](CLI::App* sub) {
    Registry& reg = registries[sub->get_name()];
    bind_option(sub, reg, "alpha", o.alpha, "fractional order, 0 < alpha <= 1");
    bind_option(sub, reg, "format", o.format, "csv, json or svg");
    bind_option(sub, reg, "out", o.out, "output file (default stdout)");
    bind_option(sub, reg, "columns", o.columns, "comma-separated columns to keep");
    bind_option(sub, reg, "threads", o.threads, "worker threads over grid points");
    for (const char* k : {"rel-tol", "abs-tol", "theta", "max-panels", "tail-cut"}) {
      auto* opt = sub->add_option_function<double>(
          std::string("--") + k, [&o, k](double v) { o.quad[k] = v; },
          "quadrature setting");
      reg[k] = {opt, [&o, k](const std::string& v) { o.quad[k] = parse_double(k, v); }};
    }
    sub->add_option("--config", o.config, "key = value file; flags take precedence");
    return &reg;
  };
  auto t_grid = [&](CLI::App* sub, Registry& reg) {
    bind_option(sub, reg, "t-start", o.t_start, "first time");
    bind_option(sub, reg, "t-stop", o.t_stop, "last time");
    bind_option(sub, reg, "t-count", o.t_count, "number of times");
  };
  auto packet = [&](CLI::App* sub, Registry& reg) {
    bind_option(sub, reg, "mass", o.mass, "mass m");
    bind_option(sub, reg, "hbar", o.hbar, "reduced Planck constant");
    bind_option(sub, reg, "b", o.b, "packet width b");
    bind_option(sub, reg, "x0", o.x0, "packet position centre");
    bind_option(sub, reg, "p0", o.p0, "packet momentum centre");
  };

  auto* kernel = app.add_subcommand("kernel", "tabulate f_alpha(t, s) over s");
  {
    Registry& reg = *common(kernel);
    bind_option(kernel, reg, "time", o.time, "kernel time t");
    bind_option(kernel, reg, "s-start", o.s_start, "first s");
    bind_option(kernel, reg, "s-stop", o.s_stop, "last s");
    bind_option(kernel, reg, "s-count", o.s_count, "number of s values");
  }
  auto* osc = app.add_subcommand("oscillator", "harmonic oscillator envelopes and moments");
  {
    Registry& reg = *common(osc);
    t_grid(osc, reg);
    packet(osc, reg);
    bind_option(osc, reg, "omega", o.omega, "oscillator frequency");
    bind_option(osc, reg, "mode", o.mode, "closed-form or quadrature");
  }
  auto* fr = app.add_subcommand("free", "free particle moment g and packet moments");
  {
    Registry& reg = *common(fr);
    t_grid(fr, reg);
    packet(fr, reg);
    bind_option(fr, reg, "mode", o.mode, "paper-half, regularized-half or truncated-numeric");
    bind_option(fr, reg, "s-max", o.s_max, "truncation point for truncated-numeric");
  }
  auto* mat = app.add_subcommand("matrix-evolve", "fractional Heisenberg evolution of an observable");
  auto* den = app.add_subcommand("density-evolve", "fractional von Neumann evolution of a density matrix");
  for (auto* sub : {mat, den}) {
    Registry& reg = *common(sub);
    t_grid(sub, reg);
    bind_option(sub, reg, "hbar", o.hbar, "reduced Planck constant");
    bind_option(sub, reg, "hamiltonian", o.hamiltonian, "Hamiltonian matrix file (JSON)");
    if (sub == mat) {
      bind_option(sub, reg, "operator", o.op, "observable matrix file (JSON)");
    } else {
      bind_option(sub, reg, "density", o.density, "density matrix file (JSON)");
    }
    bind_option(sub, reg, "preset", o.preset, "qubit: H = sigma_z / 2 with sigma_x or |+><+|");
    bind_option(sub, reg, "method", o.method, "spectral or subordination");
  }
  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  {
    Registry& reg = *common(ver);
    auto* lv = ver->add_option("level", o.level, "quick or full")->capture_default_str();
    reg["level"] = {lv, [&o](const std::string& v) { o.level = v; }};
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    apply_config(o, registries[sub->get_name()]);
    require(o.format == "csv" || o.format == "json" || o.format == "svg",
            "--format must be csv, json or svg");
    require(o.threads >= 1 && o.threads <= 256, "--threads must lie in [1, 256]");

    int failed = 0;
    Output out;
    const std::string name = sub->get_name();
    if (name == "kernel") {
      out = cmd_kernel(o);
    } else if (name == "oscillator") {
      out = cmd_oscillator(o);
    } else if (name == "free") {
      out = cmd_free(o);
    } else if (name == "matrix-evolve") {
      out = cmd_matrix(o, FRACHQ_ROLE_HERMITIAN);
    } else if (name == "density-evolve") {
      out = cmd_matrix(o, FRACHQ_ROLE_DENSITY);
    } else {
      out = cmd_verify(o, failed);
    }
    write_output(render(out, o), o.out);
    if (failed > 0) {
      std::fprintf(stderr, "frachq: %d check(s) failed\n", failed);
      return kVerifyFailed;
    }
    return kOk;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "frachq: %s\n", e.what());
    return kUsage;
  } catch (const LibraryError& e) {
    std::fprintf(stderr, "frachq: %s\n", e.what());
    return exit_code_for(e.status);
  }
}
