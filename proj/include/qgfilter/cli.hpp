#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qgfilter/ab_loop.hpp"
#include "qgfilter/delta_approx.hpp"
#include "qgfilter/dtn.hpp"
#include "qgfilter/filters.hpp"
#include "qgfilter/graph_io.hpp"

namespace qgfilter::cli {

enum ExitCode : int { Success = 0, InputFailure = 2, EmptyResult = 3, NumericalFailure = 4 };

struct RunConfig {
  std::string subcommand;
  std::string graph;
  double k_min = 0.1;
  double k_max = 10.0;
  std::size_t samples = 2000;
  std::optional<double> b_min;
  std::optional<double> b_max;
  std::optional<double> k;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4};
  /// Empty means standard output.
  std::string output;
  Tolerances tol;
  bool quiet = false;
};

/// Thrown by a command that ran correctly but produced no rows.
struct EmptyResultError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed scientific notation, independent of the stream locale.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string> cols) { header(std::vector<std::string>(cols)); }
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
  }
  CsvWriter& field(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  CsvWriter& field(double v) { return field(fmt(v)); }
  CsvWriter& field(std::size_t v) { return field(std::to_string(v)); }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  std::ostream& out_;
  bool first_ = true;
};

namespace detail {

class Logger {
 public:
  Logger(std::ostream& sink, bool quiet) : sink_(sink), quiet_(quiet) {}
  void warn(const std::string& msg) const {
    if (!quiet_) sink_ << "warning: " << msg << '\n';
  }

 private:
  std::ostream& sink_;
  bool quiet_;
};

inline void check_k_range(const RunConfig& c) {
  if (!std::isfinite(c.k_min) || !std::isfinite(c.k_max) || !(c.k_min > 0.0) || !(c.k_min < c.k_max)) {
    throw InputError("need 0 < k-min < k-max");
  }
  if (c.samples < 2) throw InputError("samples must be at least 2");
}

inline void check_k(double k) {
  if (!std::isfinite(k) || !(k > 0.0)) throw InputError("k must be positive");
}

/// The loop filter described by a graph with one self-loop at a band-pass contact.
inline LoopFilter loop_from_graph(const MetricGraph& g) {
  const auto* bp = std::get_if<coupling::BandPass>(&g.coupling());
  if (g.edges().size() != 1 || !bp) {
    throw Unsupported("sweep-b needs a single self-loop attached through a band-pass contact");
  }
  const Edge& e = g.edges().front();
  if (e.end_a != e.end_b || e.scalar_potential != 0.0) {
    throw Unsupported("sweep-b needs a single self-loop without scalar potential");
  }
  return LoopFilter(e.length, e.length * e.length / (4.0 * std::numbers::pi), 0.0, bp->alpha, g.units());
}

}  // namespace detail

inline void cmd_sweep_k(const RunConfig& c, const MetricGraph& g, std::ostream& out, std::ostream& log) {
  detail::check_k_range(c);
  const detail::Logger logger(log, c.quiet);
  const bool separator = port_count(g.coupling()) == 3;
  const auto curve = sweep_device(g, c.k_min, c.k_max, c.samples, c.tol);

  CsvWriter csv(out);
  std::vector<std::string> cols{"k", "E", "classification", "re_R", "im_R", "re_T1", "im_T1"};
  if (separator) cols.insert(cols.end(), {"re_T2", "im_T2"});
  cols.emplace_back("P1");
  if (separator) cols.emplace_back("P2");
  cols.emplace_back("unitarity_residual");
  csv.header(cols);

  for (const auto& pt : curve) {
    if (pt.diagnostic) logger.warn("k = " + fmt(pt.k) + ": " + *pt.diagnostic);
    csv.field(pt.k).field(pt.E).field(pt.diagnostic ? "undecidable" : to_string(pt.classification));
    csv.field(pt.R.real()).field(pt.R.imag());
    for (const cplx& t : pt.T) csv.field(t.real()).field(t.imag());
    for (double p : pt.P) csv.field(p);
    csv.field(pt.unitarity_residual);
    csv.end_row();
  }
}

/// P over a field grid at fixed k, or over a (B, k) grid when no k is given.
/// The loop area is taken as that of a circle with the loop's length.
inline void cmd_sweep_b(const RunConfig& c, const MetricGraph& g, std::ostream& out, std::ostream&) {
  const LoopFilter base = detail::loop_from_graph(g);
  const double b_min = c.b_min.value_or(0.0);
  const double b_max = c.b_max.value_or(base.max_field());
  if (!std::isfinite(b_min) || !std::isfinite(b_max) || !(b_min < b_max)) {
    throw InputError("need b-min < b-max");
  }
  if (c.samples < 2) throw InputError("samples must be at least 2");

  std::vector<double> ks;
  if (c.k) {
    detail::check_k(*c.k);
    ks = {*c.k};
  } else {
    detail::check_k_range(c);
    ks = uniform_grid(c.k_min, c.k_max, c.samples);
  }

  CsvWriter csv(out);
  csv.header({"B", "theta", "k", "P"});
  for (double b : uniform_grid(b_min, b_max, c.samples)) {
    const LoopFilter f = base.with_field(b);
    for (double k : ks) {
      csv.field(b).field(f.theta()).field(k).field(loop_transmission_probability(f, k, c.tol.pole_guard));
      csv.end_row();
    }
  }
}

inline void cmd_spectrum(const RunConfig& c, const MetricGraph& g, std::ostream& out, std::ostream&) {
  detail::check_k_range(c);
  const auto roots = find_spectrum(g, c.k_min, c.k_max, c.samples, c.tol);
  if (roots.empty()) throw EmptyResultError("no spectral points in [" + fmt(c.k_min) + ", " + fmt(c.k_max) + "]");

  CsvWriter csv(out);
  csv.header({"index", "k_root", "lambda", "residual"});
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const DtNSample s = dtn_at_wavenumber(g, roots[i], c.tol);
    csv.field(i).field(roots[i]).field(s.lambda).field(s.finite() ? std::abs(s.value) : std::nan(""));
    csv.end_row();
  }
}

inline void cmd_converge(const RunConfig& c, const MetricGraph& g, std::ostream& out, std::ostream& log) {
  if (!std::holds_alternative<coupling::BandPass>(g.coupling())) {
    throw Unsupported("converge is only available for band-pass contacts");
  }
  const detail::Logger logger(log, c.quiet);
  std::vector<double> ks;
  if (c.k) {
    detail::check_k(*c.k);
    ks = {*c.k};
  } else {
    detail::check_k_range(c);
    ks = uniform_grid(c.k_min, c.k_max, c.samples);
  }
  const auto rows = convergence_study(g, c.epsilons, ks, c.tol);

  CsvWriter csv(out);
  csv.header({"epsilon", "k", "re_T_eps", "im_T_eps", "re_T_closed", "im_T_closed", "re_T", "im_T", "abs_T_eps",
              "error", "ratio"});
  const double nan = std::nan("");
  for (const auto& r : rows) {
    if (r.guard_violated) logger.warn("k * epsilon = " + fmt(r.k * r.epsilon) + " >= 0.5 at epsilon = " + fmt(r.epsilon));
    if (r.diagnostic) logger.warn("epsilon = " + fmt(r.epsilon) + ", k = " + fmt(r.k) + ": " + *r.diagnostic);
    const cplx closed = r.T_closed.value_or(cplx(nan, nan));
    csv.field(r.epsilon).field(r.k);
    csv.field(r.T_epsilon.real()).field(r.T_epsilon.imag());
    csv.field(closed.real()).field(closed.imag());
    csv.field(r.T_limit.real()).field(r.T_limit.imag());
    csv.field(std::abs(r.T_epsilon)).field(r.error).field(r.ratio);
    csv.end_row();
  }
}

/// Runs one subcommand and maps failures to exit codes. CSV goes to the
/// configured output (or `out`), messages to `log`.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& log) {
  try {
    const MetricGraph g = io::load_graph(c.graph);
    std::ostringstream buffer;
    if (c.subcommand == "sweep-k") {
      cmd_sweep_k(c, g, buffer, log);
    } else if (c.subcommand == "sweep-b") {
      cmd_sweep_b(c, g, buffer, log);
    } else if (c.subcommand == "spectrum") {
      cmd_spectrum(c, g, buffer, log);
    } else if (c.subcommand == "converge") {
      cmd_converge(c, g, buffer, log);
    } else {
      throw InputError("unknown subcommand '" + c.subcommand + "'");
    }
    if (c.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(c.output, std::ios::binary);
      if (!file) throw InputError("cannot write '" + c.output + "'");
      file << buffer.str();
    }
    return Success;
  } catch (const InputError& err) {
    log << "error: " << err.what() << '\n';
    return InputFailure;
  } catch (const Unsupported& err) {
    log << "error: " << err.what() << '\n';
    return InputFailure;
  } catch (const EmptyResultError& err) {
    log << err.what() << '\n';
    return EmptyResult;
  } catch (const NumericalDiagnostic& err) {
    log << "numerical failure: " << err.what() << '\n';
    return NumericalFailure;
  }
}

}  // namespace qgfilter::cli
