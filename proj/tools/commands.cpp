#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "tspectra/tspectra.hpp"

#ifndef TSPECTRA_VERSION
#define TSPECTRA_VERSION "unknown"
#endif

namespace tspectra::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class ResourceCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Relative cost units above which a run needs --expensive.
constexpr double kCostCap = 5e10;
/// Rough wall-clock seconds per cost unit, measured on a single core.
constexpr double kSecondsPerUnit = 1.1e-8;

struct Options {
  std::string preset;
  std::string symbol_text;
  std::string symbol_file;
  std::size_t n = 0;
  std::size_t n0 = 0;
  std::size_t alpha = 0;
  int prec = 0;  // 0: not given
  std::string order = "real-asc";
  std::string out = ".";
  bool expensive = false;
  bool no_balance = false;
  std::string input;
  std::string spectrum;
  std::string recovery;
  std::string component = "re";
  std::string format = "gnuplot";
};

// ---------------------------------------------------------------------------
// Small helpers

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string absolute(const std::string& path) { return fs::absolute(path).lexically_normal().string(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path.string());
  return os;
}

double bits_weight(int bits) { return bits == 53 ? 1.0 : 30.0 * std::pow(bits / 64.0, 1.5); }

/// Sum of n^3 over the requested eigensolves, weighted by the cost of one
/// arithmetic operation at the given width relative to native double.
void check_cost(const std::vector<std::size_t>& sizes, int bits, bool expensive, std::ostream& err) {
  double units = 0;
  for (std::size_t n : sizes) units += std::pow(static_cast<double>(n), 3) * bits_weight(bits);
  std::ostringstream msg;
  msg << "estimated cost " << std::scientific << std::setprecision(2) << units << " units (~"
      << std::fixed << std::setprecision(0) << units * kSecondsPerUnit << " s single-threaded)";
  if (units > kCostCap) {
    if (!expensive) {
      throw ResourceCapExceeded(msg.str() + " exceeds the cap of " + std::to_string(static_cast<long long>(kCostCap)) +
                                "; pass --expensive to run anyway");
    }
    err << msg.str() << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const std::string& path) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw InputError(path + ": missing column '" + name + "'");
  }
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty CSV file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != t.header.size()) {
      throw InputError(path + ": row " + std::to_string(t.rows.size() + 1) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.rows.empty()) throw InputError(path + ": no data rows");
  return t;
}

template <RealScalar Real>
Real parse_cell(const std::string& text, const std::string& path, const PrecisionContext& ctx) {
  try {
    return num::parse<Real>(text, ctx);
  } catch (const std::invalid_argument&) {
    throw InputError(path + ": malformed number '" + text + "'");
  }
}

/// Precision for commands reading earlier outputs: --prec, else the manifest
/// written next to `csv_path`, else 53 bits.
int inherited_precision(const Options& o, const std::string& csv_path) {
  if (o.prec != 0) return o.prec;
  const fs::path p(csv_path);
  const fs::path manifest = p.parent_path() / (p.stem().string() + ".manifest.json");
  if (fs::exists(manifest)) {
    try {
      const json m = json::parse(read_file(manifest.string()));
      if (m.contains("precision_bits") && m["precision_bits"].is_number_integer()) {
        return m["precision_bits"].get<int>();
      }
    } catch (const json::exception&) {
      throw InputError("malformed manifest " + manifest.string());
    }
  }
  return PrecisionContext::kDoubleBits;
}

// ---------------------------------------------------------------------------
// Symbols

std::size_t symbol_sources(const Options& o) {
  return static_cast<std::size_t>(!o.preset.empty()) + static_cast<std::size_t>(!o.symbol_text.empty()) +
         static_cast<std::size_t>(!o.symbol_file.empty());
}

template <RealScalar Real>
LaurentSymbol<Real> load_symbol(const Options& o, const PrecisionContext& ctx) {
  if (symbol_sources(o) != 1) throw InputError("give exactly one of --preset, --symbol, --symbol-file");
  if (!o.preset.empty()) {
    const auto id = preset_from_name(o.preset);
    if (!id) throw InputError("unknown preset '" + o.preset + "' (see 'preset list')");
    return preset<Real>(*id, ctx);
  }
  std::string text = o.symbol_text;
  if (!o.symbol_file.empty()) {
    text = read_file(o.symbol_file);
    if (fs::path(o.symbol_file).extension() == ".json") {
      try {
        return symbol_from_json<Real>(json::parse(text), ctx);
      } catch (const json::exception& e) {
        throw InputError(o.symbol_file + ": " + e.what());
      }
    }
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  }
  try {
    return parse_symbol<Real>(text, ctx);
  } catch (const ParseError& e) {
    throw InputError(std::string(e.what()) + "\n  " + text + "\n  " + std::string(e.position(), ' ') + "^");
  }
}

/// Symbol arguments for the replay command line.
std::vector<std::string> symbol_args(const Options& o) {
  if (!o.preset.empty()) return {"--preset", o.preset};
  if (!o.symbol_text.empty()) return {"--symbol", o.symbol_text};
  if (!o.symbol_file.empty()) return {"--symbol-file", absolute(o.symbol_file)};
  return {};
}

json symbol_record(const Options& o) {
  if (!o.preset.empty()) return {{"kind", "preset"}, {"value", o.preset}};
  if (!o.symbol_text.empty()) return {{"kind", "text"}, {"value", o.symbol_text}};
  if (!o.symbol_file.empty()) return {{"kind", "file"}, {"value", absolute(o.symbol_file)}};
  return nullptr;
}

template <RealScalar Real>
OrderingStrategy<Real> make_strategy(const std::string& name, const LaurentSymbol<Real>& sym) {
  const auto kind = order_kind_from_name(name);
  if (!kind) throw InputError("unknown ordering '" + name + "'");
  OrderingStrategy<Real> s;
  s.kind = *kind;
  if (*kind == OrderKind::nearest_to_symbol) s.symbol = sym;
  return s;
}

// ---------------------------------------------------------------------------
// Manifests

struct Manifest {
  std::string command;
  std::vector<std::string> replay_args;
  json fields = json::object();
};

void write_manifest(const Manifest& m, const Options& o, const PrecisionContext& ctx, const fs::path& output,
                    std::ostream& out) {
  json j = m.fields;
  j["command"] = m.command;
  j["argv"] = m.replay_args;
  j["precision_bits"] = ctx.bits();
  j["output_dir"] = absolute(o.out);
  j["outputs"] = json::array({output.filename().string()});
  j["tool_version"] = TSPECTRA_VERSION;
  j["timestamp"] = timestamp_utc();
  const fs::path path = output.parent_path() / (output.stem().string() + ".manifest.json");
  auto os = open_output(path);
  os << j.dump(2) << '\n';
  out << "wrote " << output.string() << '\n';
}

fs::path prepare_out(const Options& o, const std::string& name) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw InputError("cannot create output directory " + o.out + ": " + ec.message());
  return fs::path(o.out) / name;
}

// ---------------------------------------------------------------------------
// Commands

template <RealScalar Real>
void cmd_eig(const Options& o, const PrecisionContext& ctx, std::ostream& out, std::ostream& err) {
  if (o.n == 0) throw InputError("--n must be positive");
  const auto sym = load_symbol<Real>(o, ctx);
  const auto strategy = make_strategy<Real>(o.order, sym);
  check_cost({o.n}, ctx.bits(), o.expensive, err);
  auto eig = eigenvalues(build_toeplitz(sym, o.n, ctx), ctx, EigOptions{!o.no_balance});
  const auto spectrum = order(std::move(eig.values), strategy, ctx);

  const fs::path path = prepare_out(o, "spectrum.csv");
  {
    auto os = open_output(path);
    write_spectrum_csv(os, spectrum, ctx);
  }
  Manifest m;
  m.command = "eig";
  m.replay_args = {"eig"};
  for (auto& a : symbol_args(o)) m.replay_args.push_back(a);
  for (const std::string& a : {std::string("--n"), std::to_string(o.n), std::string("--prec"),
                               std::to_string(ctx.bits()), std::string("--order"), o.order}) {
    m.replay_args.push_back(a);
  }
  if (o.no_balance) m.replay_args.push_back("--no-balance");
  if (o.expensive) m.replay_args.push_back("--expensive");
  m.fields["symbol"] = symbol_record(o);
  m.fields["symbol_coefficients"] = symbol_to_json(sym, ctx);
  m.fields["n"] = o.n;
  m.fields["order"] = o.order;
  m.fields["balance"] = !o.no_balance;
  m.fields["qr_iterations"] = eig.iterations;
  write_manifest(m, o, ctx, path, out);
}

template <RealScalar Real>
void cmd_expand(const Options& o, const PrecisionContext& ctx, std::ostream& out, std::ostream& err) {
  if (o.n0 < o.alpha + 1) {
    throw InputError("--n0 " + std::to_string(o.n0) + " must be at least --alpha + 1 = " + std::to_string(o.alpha + 1));
  }
  const auto sym = load_symbol<Real>(o, ctx);
  const auto strategy = make_strategy<Real>(o.order, sym);
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k <= o.alpha; ++k) sizes.push_back(expansion_size(o.n0, k));
  check_cost(sizes, ctx.bits(), o.expensive, err);

  const auto table =
      compute_expansion<Real>(o.n0, o.alpha, toeplitz_eig_source(sym, strategy, EigOptions{!o.no_balance}), ctx);
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';

  const fs::path path = prepare_out(o, "expansion.csv");
  {
    auto os = open_output(path);
    write_expansion_csv(os, table, ctx);
  }
  Manifest m;
  m.command = "expand";
  m.replay_args = {"expand"};
  for (auto& a : symbol_args(o)) m.replay_args.push_back(a);
  for (const std::string& a :
       {std::string("--n0"), std::to_string(o.n0), std::string("--alpha"), std::to_string(o.alpha),
        std::string("--prec"), std::to_string(ctx.bits()), std::string("--order"), o.order}) {
    m.replay_args.push_back(a);
  }
  if (o.no_balance) m.replay_args.push_back("--no-balance");
  if (o.expensive) m.replay_args.push_back("--expensive");
  m.fields["symbol"] = symbol_record(o);
  m.fields["symbol_coefficients"] = symbol_to_json(sym, ctx);
  m.fields["n0"] = o.n0;
  m.fields["alpha"] = o.alpha;
  m.fields["sizes_used"] = table.sizes_used;
  m.fields["order"] = o.order;
  m.fields["balance"] = !o.no_balance;
  m.fields["warnings"] = table.warnings;
  write_manifest(m, o, ctx, path, out);
}

template <RealScalar Real>
std::vector<Complex<Real>> read_c0(const std::string& path, const PrecisionContext& ctx) {
  const CsvTable t = read_csv(path);
  const std::size_t re = t.column("c0_re", path);
  const std::size_t im = t.column("c0_im", path);
  std::vector<Complex<Real>> c0;
  c0.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    c0.emplace_back(parse_cell<Real>(row[re], path, ctx), parse_cell<Real>(row[im], path, ctx));
  }
  return c0;
}

template <RealScalar Real>
void cmd_fourier(const Options& o, const PrecisionContext& ctx, std::ostream& out, std::ostream&) {
  const auto rec = recover_spectral_function(read_c0<Real>(o.input, ctx), ctx);
  const fs::path path = prepare_out(o, "fourier.csv");
  {
    auto os = open_output(path);
    write_fourier_csv(os, rec, ctx);
  }
  if (rec.noise_floor) out << "noise floor " << num::format(*rec.noise_floor, ctx) << '\n';
  Manifest m;
  m.command = "fourier";
  m.replay_args = {"fourier", absolute(o.input), "--prec", std::to_string(ctx.bits())};
  m.fields["input"] = absolute(o.input);
  m.fields["n0"] = rec.n0;
  m.fields["noise_floor"] = rec.noise_floor ? json(num::format(*rec.noise_floor, ctx)) : json(nullptr);
  write_manifest(m, o, ctx, path, out);
}

template <RealScalar Real>
void cmd_gamma(const Options& o, const PrecisionContext& ctx, std::ostream& out, std::ostream&) {
  const auto sym = load_symbol<Real>(o, ctx);
  const auto curves = gamma_curves(sym, read_c0<Real>(o.input, ctx), ctx);
  const fs::path path = prepare_out(o, "gamma.csv");
  {
    auto os = open_output(path);
    write_gamma_csv(os, curves, ctx);
  }
  Manifest m;
  m.command = "gamma";
  m.replay_args = {"gamma", absolute(o.input)};
  for (auto& a : symbol_args(o)) m.replay_args.push_back(a);
  m.replay_args.push_back("--prec");
  m.replay_args.push_back(std::to_string(ctx.bits()));
  m.fields["symbol"] = symbol_record(o);
  m.fields["input"] = absolute(o.input);
  m.fields["branches"] = curves.degree();
  write_manifest(m, o, ctx, path, out);
}

template <RealScalar Real>
void cmd_grid(const Options& o, const PrecisionContext& ctx, std::ostream& out, std::ostream&) {
  if (o.component != "re" && o.component != "im") throw InputError("--component must be re or im");
  const bool want_re = o.component == "re";
  const bool from_recovery = !o.recovery.empty();
  if (from_recovery == (symbol_sources(o) != 0)) {
    throw InputError("give either a symbol (--preset, --symbol, --symbol-file) or --recovery");
  }

  RealFunction<Real> component;
  if (from_recovery) {
    const CsvTable t = read_csv(o.recovery);
    const std::size_t cre = t.column("ghat_re", o.recovery);
    const std::size_t cim = t.column("ghat_im", o.recovery);
    FourierRecovery<Real> rec;
    for (const auto& row : t.rows) {
      rec.ghat_re.push_back(parse_cell<Real>(row[cre], o.recovery, ctx));
      rec.ghat_im.push_back(parse_cell<Real>(row[cim], o.recovery, ctx));
    }
    rec.n0 = t.rows.size();
    component = [rec, want_re, &ctx](const Real& x) {
      auto z = evaluate_g_tilde(rec, x, ctx);
      return want_re ? z.re : z.im;
    };
  } else {
    const auto sym = load_symbol<Real>(o, ctx);
    component = [sym, want_re, &ctx](const Real& x) {
      auto z = evaluate(sym, x, ctx);
      return want_re ? z.re : z.im;
    };
  }

  const CsvTable spec = read_csv(o.spectrum);
  const std::size_t col = spec.column(want_re ? "lambda_re" : "lambda_im", o.spectrum);
  std::vector<Real> targets;
  for (const auto& row : spec.rows) targets.push_back(parse_cell<Real>(row[col], o.spectrum, ctx));
  const auto xi = perfect_grid(component, targets, ctx);

  const fs::path path = prepare_out(o, "grid.csv");
  {
    auto os = open_output(path);
    write_grid_csv(os, targets, xi, ctx);
  }
  Manifest m;
  m.command = "grid";
  m.replay_args = {"grid", "--spectrum", absolute(o.spectrum), "--component", o.component};
  if (from_recovery) {
    m.replay_args.push_back("--recovery");
    m.replay_args.push_back(absolute(o.recovery));
  } else {
    for (auto& a : symbol_args(o)) m.replay_args.push_back(a);
  }
  m.replay_args.push_back("--prec");
  m.replay_args.push_back(std::to_string(ctx.bits()));
  m.fields["spectrum"] = absolute(o.spectrum);
  m.fields["component"] = o.component;
  if (from_recovery) {
    m.fields["recovery"] = absolute(o.recovery);
  } else {
    m.fields["symbol"] = symbol_record(o);
  }
  write_manifest(m, o, ctx, path, out);
}

// ---------------------------------------------------------------------------
// Plot scripts

enum class CsvKind { spectrum, expansion, fourier, gamma, grid };

CsvKind classify(const CsvTable& t, const std::string& path) {
  const auto& h = t.header;
  auto is = [&h](std::initializer_list<const char*> names) {
    if (h.size() < names.size()) return false;
    std::size_t i = 0;
    for (const char* n : names) {
      if (h[i++] != n) return false;
    }
    return true;
  };
  if (is({"j", "theta", "lambda_re", "lambda_im"})) return CsvKind::spectrum;
  if (is({"theta", "c0_re", "c0_im"})) return CsvKind::expansion;
  if (is({"k", "ghat_re", "ghat_im"})) return CsvKind::fourier;
  if (is({"branch", "theta", "z_re", "z_im"})) return CsvKind::gamma;
  if (is({"j", "theta", "target", "xi"})) return CsvKind::grid;
  throw InputError(path + ": unrecognized CSV header");
}

std::string quoted(const std::string& s) {
  std::string r = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') r += '\\';
    r += c;
  }
  return r + "'";
}

std::string gnuplot_script(CsvKind kind, const CsvTable& t, const std::string& csv, const std::string& curve,
                           const std::string& image) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set terminal svg size 900,650\n"
    << "set output " << quoted(image) << "\n"
    << "set key outside\n";
  switch (kind) {
    case CsvKind::spectrum:
      s << "set xlabel 'Re'\nset ylabel 'Im'\n"
        << "plot " << quoted(csv) << " using 3:4 skip 1 with points pt 7 ps 0.6 title 'eigenvalues'";
      if (!curve.empty()) s << ", \\\n     " << quoted(curve) << " using 2:3 skip 1 with lines lw 1.5 title 'symbol'";
      s << '\n';
      break;
    case CsvKind::expansion: {
      const std::size_t terms = (t.header.size() - 1) / 2;
      s << "set xlabel 'theta'\nset xrange [0:pi]\nplot ";
      for (std::size_t k = 0; k < terms; ++k) {
        if (k != 0) s << ", \\\n     ";
        s << quoted(csv) << " using 1:" << 2 + 2 * k << " skip 1 with linespoints pt 7 ps 0.4 title 'c" << k
          << " re', \\\n     " << quoted(csv) << " using 1:" << 3 + 2 * k << " skip 1 with linespoints pt 6 ps 0.4 title 'c"
          << k << " im'";
      }
      s << '\n';
      break;
    }
    case CsvKind::fourier:
      s << "set xlabel 'k'\nset logscale y\nset format y '10^{%L}'\n"
        << "plot " << quoted(csv) << " using 1:(abs($2)) skip 1 with points pt 7 ps 0.6 title '|ghat re|', \\\n     "
        << quoted(csv) << " using 1:(abs($3)) skip 1 with points pt 6 ps 0.6 title '|ghat im|'\n";
      break;
    case CsvKind::gamma:
      s << "set xlabel 'Re z'\nset ylabel 'Im z'\nset size ratio -1\nset parametric\nset trange [0:2*pi]\n"
        << "plot cos(t), sin(t) with lines dt 2 lc rgb 'gray' title 'unit circle', \\\n     " << quoted(csv)
        << " using 3:4:1 skip 1 with points pt 7 ps 0.5 lc variable title 'gamma branches'\n";
      break;
    case CsvKind::grid:
      s << "set xlabel 'theta'\nset ylabel 'xi'\nset size ratio -1\n"
        << "plot " << quoted(csv) << " using 2:4 skip 1 with points pt 7 ps 0.6 title 'xi', x with lines dt 2 title 'xi = theta'\n";
      break;
  }
  return s.str();
}

std::string matplotlib_script(CsvKind kind, const CsvTable& t, const std::string& csv, const std::string& curve,
                              const std::string& image) {
  std::ostringstream s;
  s << "import csv\nimport math\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n\n"
    << "def load(path):\n"
    << "    with open(path, newline='') as f:\n"
    << "        rows = list(csv.reader(f))\n"
    << "    return rows[0], [[float(x) for x in r] for r in rows[1:] if r]\n\n"
    << "header, rows = load(" << quoted(csv) << ")\n"
    << "fig, ax = plt.subplots(figsize=(9, 6.5))\n";
  switch (kind) {
    case CsvKind::spectrum:
      s << "ax.plot([r[2] for r in rows], [r[3] for r in rows], 'o', ms=3, label='eigenvalues')\n";
      if (!curve.empty()) {
        s << "_, c = load(" << quoted(curve) << ")\n"
          << "ax.plot([r[1] for r in c], [r[2] for r in c], '-', lw=1.5, label='symbol')\n";
      }
      s << "ax.set_xlabel('Re')\nax.set_ylabel('Im')\n";
      break;
    case CsvKind::expansion: {
      const std::size_t terms = (t.header.size() - 1) / 2;
      s << "for k in range(" << terms << "):\n"
        << "    ax.plot([r[0] for r in rows], [r[1 + 2 * k] for r in rows], '.-', ms=3, label=f'c{k} re')\n"
        << "    ax.plot([r[0] for r in rows], [r[2 + 2 * k] for r in rows], '.--', ms=3, label=f'c{k} im')\n"
        << "ax.set_xlabel('theta')\nax.set_xlim(0, math.pi)\n";
      break;
    }
    case CsvKind::fourier:
      s << "ax.semilogy([r[0] for r in rows], [abs(r[1]) or 1e-300 for r in rows], 'o', ms=3, label='|ghat re|')\n"
        << "ax.semilogy([r[0] for r in rows], [abs(r[2]) or 1e-300 for r in rows], 's', ms=3, mfc='none', label='|ghat im|')\n"
        << "ax.set_xlabel('k')\n";
      break;
    case CsvKind::gamma:
      s << "t = [2 * math.pi * i / 400 for i in range(401)]\n"
        << "ax.plot([math.cos(x) for x in t], [math.sin(x) for x in t], ':', color='gray', label='unit circle')\n"
        << "for b in sorted({int(r[0]) for r in rows}):\n"
        << "    pts = [r for r in rows if int(r[0]) == b]\n"
        << "    ax.plot([r[2] for r in pts], [r[3] for r in pts], '.', ms=3, label=f'branch {b}')\n"
        << "ax.set_aspect('equal')\nax.set_xlabel('Re z')\nax.set_ylabel('Im z')\n";
      break;
    case CsvKind::grid:
      s << "ax.plot([r[1] for r in rows], [r[3] for r in rows], 'o', ms=3, label='xi')\n"
        << "ax.plot([0, math.pi], [0, math.pi], ':', label='xi = theta')\n"
        << "ax.set_xlabel('theta')\nax.set_ylabel('xi')\n";
      break;
  }
  s << "ax.legend()\nfig.savefig(" << quoted(image) << ", dpi=120, bbox_inches='tight')\n";
  return s.str();
}

void cmd_plot(const Options& o, std::ostream& out) {
  if (o.format != "gnuplot" && o.format != "matplotlib") throw InputError("--format must be gnuplot or matplotlib");
  const CsvTable t = read_csv(o.input);
  const CsvKind kind = classify(t, o.input);
  const bool gp = o.format == "gnuplot";
  const fs::path script = prepare_out(o, gp ? "plot.gp" : "plot.py");
  const std::string image = absolute((fs::path(o.out) / (gp ? "plot.svg" : "plot.png")).string());

  std::string curve;
  if (kind == CsvKind::spectrum && symbol_sources(o) != 0) {
    const PrecisionContext ctx;
    const auto sym = load_symbol<double>(o, ctx);
    const fs::path cpath = fs::path(o.out) / "symbol_curve.csv";
    auto os = open_output(cpath);
    os << "theta,f_re,f_im\n";
    const double pi = num::pi<double>(ctx);
    for (int i = 0; i <= 720; ++i) {
      const double th = -pi + 2 * pi * i / 720.0;
      const auto z = evaluate(sym, th, ctx);
      os << num::format(th, ctx) << ',' << num::format(z.re, ctx) << ',' << num::format(z.im, ctx) << '\n';
    }
    curve = absolute(cpath.string());
  }
  {
    auto os = open_output(script);
    const std::string csv = absolute(o.input);
    os << (gp ? gnuplot_script(kind, t, csv, curve, image) : matplotlib_script(kind, t, csv, curve, image));
  }
  Manifest m;
  m.command = "plot";
  m.replay_args = {"plot", absolute(o.input), "--format", o.format};
  for (auto& a : symbol_args(o)) m.replay_args.push_back(a);
  m.fields["input"] = absolute(o.input);
  m.fields["format"] = o.format;
  m.fields["image"] = image;
  write_manifest(m, o, PrecisionContext(), script, out);
}

void cmd_preset_list(std::ostream& out) {
  for (const auto& p : preset_table()) {
    out << p.name << "\n  symbol: " << p.text << "\n  " << p.description << '\n';
  }
}

// ---------------------------------------------------------------------------
// Argument parsing

void add_symbol_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--preset", o.preset, "Named symbol (see 'preset list')");
  cmd->add_option("--symbol", o.symbol_text, "Symbol text, e.g. \"0:2+0i; 1:-1+0i; -1:-2+1i\"");
  cmd->add_option("--symbol-file", o.symbol_file, "File holding the symbol text, or its JSON form (.json)");
}

void add_numeric_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--prec", o.prec, "Working precision in bits (53 = double)")->check(CLI::Range(24, 1 << 20));
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
}

int report(const std::exception& e, int code, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  std::string replay_manifest;

  CLI::App app("Asymptotic eigenvalue expansions of banded Toeplitz matrices", "tspectra");
  app.set_version_flag("--version", TSPECTRA_VERSION);
  app.require_subcommand(1);

  const std::vector<std::string> orders{"real-asc", "imag-asc", "imag-desc", "chain", "nearest-symbol"};

  auto* eig = app.add_subcommand("eig", "Ordered spectrum of T_n(f)");
  add_symbol_options(eig, o);
  eig->add_option("--n", o.n, "Matrix size")->required()->check(CLI::PositiveNumber);
  eig->add_option("--order", o.order, "Ordering strategy")->check(CLI::IsMember(orders))->capture_default_str();
  eig->add_flag("--no-balance", o.no_balance, "Skip balancing before the QR iteration");
  eig->add_flag("--expensive", o.expensive, "Allow runs above the cost cap");
  add_numeric_options(eig, o);

  auto* expand = app.add_subcommand("expand", "Expansion functions c_k on the coarse grid");
  add_symbol_options(expand, o);
  expand->add_option("--n0", o.n0, "Coarse grid size")->required()->check(CLI::PositiveNumber);
  expand->add_option("--alpha", o.alpha, "Expansion order")->required();
  expand->add_option("--order", o.order, "Ordering strategy")->check(CLI::IsMember(orders))->capture_default_str();
  expand->add_flag("--no-balance", o.no_balance, "Skip balancing before the QR iteration");
  expand->add_flag("--expensive", o.expensive, "Allow runs above the cost cap");
  add_numeric_options(expand, o);

  auto* fourier = app.add_subcommand("fourier", "Cosine Fourier coefficients of g from an expansion CSV");
  fourier->add_option("expansion", o.input, "expansion.csv")->required()->check(CLI::ExistingFile);
  add_numeric_options(fourier, o);

  auto* gamma = app.add_subcommand("gamma", "Roots of b(z) = g(theta_j) chained into branch curves");
  gamma->add_option("expansion", o.input, "expansion.csv")->required()->check(CLI::ExistingFile);
  add_symbol_options(gamma, o);
  add_numeric_options(gamma, o);

  auto* grid = app.add_subcommand("grid", "Perfect sampling grid for one spectrum component");
  add_symbol_options(grid, o);
  grid->add_option("--recovery", o.recovery, "fourier.csv to use instead of a symbol")->check(CLI::ExistingFile);
  grid->add_option("--spectrum", o.spectrum, "spectrum.csv")->required()->check(CLI::ExistingFile);
  grid->add_option("--component", o.component, "re or im")->check(CLI::IsMember({"re", "im"}))->capture_default_str();
  add_numeric_options(grid, o);

  auto* plot = app.add_subcommand("plot", "Plot script for any output CSV");
  plot->add_option("csv", o.input, "CSV written by another command")->required()->check(CLI::ExistingFile);
  plot->add_option("--format", o.format, "gnuplot or matplotlib")
      ->check(CLI::IsMember({"gnuplot", "matplotlib"}))
      ->capture_default_str();
  add_symbol_options(plot, o);
  plot->add_option("--out", o.out, "Output directory")->capture_default_str();

  auto* preset_cmd = app.add_subcommand("preset", "Built-in symbols");
  preset_cmd->require_subcommand(1);
  auto* preset_list = preset_cmd->add_subcommand("list", "List the built-in symbols");

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_manifest, "*.manifest.json")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", o.out, "Output directory")->capture_default_str();

  std::vector<const char*> argv{"tspectra"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (preset_list->parsed()) {
      cmd_preset_list(out);
      return kExitOk;
    }
    if (replay->parsed()) {
      json m;
      try {
        m = json::parse(read_file(replay_manifest));
      } catch (const json::exception& e) {
        throw InputError(replay_manifest + ": " + e.what());
      }
      if (!m.contains("argv") || !m["argv"].is_array()) throw InputError(replay_manifest + ": no argv record");
      auto again = m["argv"].get<std::vector<std::string>>();
      again.push_back("--out");
      again.push_back(o.out);
      return run(again, out, err);
    }
    if (plot->parsed()) {
      cmd_plot(o, out);
      return kExitOk;
    }

    int bits = o.prec != 0 ? o.prec : PrecisionContext::kDoubleBits;
    if (fourier->parsed() || gamma->parsed()) bits = inherited_precision(o, o.input);
    if (grid->parsed()) bits = inherited_precision(o, o.spectrum);
    const PrecisionContext ctx(bits);

    with_scalar(ctx, [&]<class Real>() {
      if (eig->parsed()) cmd_eig<Real>(o, ctx, out, err);
      if (expand->parsed()) cmd_expand<Real>(o, ctx, out, err);
      if (fourier->parsed()) cmd_fourier<Real>(o, ctx, out, err);
      if (gamma->parsed()) cmd_gamma<Real>(o, ctx, out, err);
      if (grid->parsed()) cmd_grid<Real>(o, ctx, out, err);
    });
    return kExitOk;
  } catch (const ResourceCapExceeded& e) {
    return report(e, kExitResourceCap, err);
  } catch (const InputError& e) {
    return report(e, kExitInput, err);
  } catch (const NumericError& e) {
    return report(e, kExitNumeric, err);
  } catch (const std::invalid_argument& e) {
    return report(e, kExitInput, err);
  } catch (const std::exception& e) {
    return report(e, kExitFailure, err);
  }
}

}  // namespace tspectra::cli
