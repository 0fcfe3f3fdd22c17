// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "qgfilter/cli.hpp"

using namespace qgfilter;

namespace {

constexpr double pi = std::numbers::pi;

class Criterion {
 public:
  explicit Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  /// Records a measured value against an upper bound.
  void at_most(const std::string& what, double value, double bound) {
    std::ostringstream s;
    s << what << " = " << value << " (<= " << bound << ")";
    note(value <= bound, s.str());
  }
  void require(bool ok, const std::string& what) { note(ok, what); }
  /// A measurement that is reported but not judged.
  void info(const std::string& what) { lines_.push_back("info " + what); }

  bool report() const {
    std::printf("%s criterion %d: %s\n", ok_ ? "PASS" : "FAIL", id_, title_.c_str());
    for (const auto& line : lines_) std::printf("    %s\n", line.c_str());
    return ok_;
  }

 private:
  void note(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    lines_.push_back((ok ? "ok   " : "FAIL ") + what);
  }

  int id_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> lines_;
};

/// Runs a check body and turns an escaping exception into a failure.
bool run(int id, const std::string& title, const std::function<void(Criterion&)>& body) {
  Criterion c(id, title);
  try {
    body(c);
  } catch (const std::exception& err) {
    c.require(false, std::string("exception: ") + err.what());
  }
  return c.report();
}

MetricGraph flux_loop(const ContactCoupling& c) { return qgtest::loop_graph(1.0, 1.0, c); }

void loop_sweep(Criterion& c) {
  const MetricGraph g = flux_loop(coupling::BandPass{4.0});
  const auto f = LoopFilter::from_flux_angle(1.0, 1.0, 4.0);

  const auto curve = sweep_device(g, 0.1, 10.0, 2000);
  std::size_t undecided = 0;
  std::vector<double> grid_peaks;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].diagnostic) ++undecided;
    if (i > 0 && i + 1 < curve.size() && curve[i].P[0] >= curve[i - 1].P[0] && curve[i].P[0] > curve[i + 1].P[0]) {
      grid_peaks.push_back(curve[i].k);
    }
  }
  c.require(curve.size() == 2000 && undecided == 0, "2000-point sweep evaluated everywhere");

  c.at_most("1 - P(1)", 1.0 - evaluate_device(g, 1.0).P[0], 1e-9);

  const std::vector<double> expected{1.0, 2 * pi - 1.0, 2 * pi + 1.0};
  const auto peaks = locate_peaks(f, 0.1, 10.0, 2000);
  c.require(peaks.size() == expected.size() && grid_peaks.size() == expected.size(),
            "three transmission maxima in (0.1, 10)");
  if (peaks.size() == expected.size()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < peaks.size(); ++i) worst = std::max(worst, std::abs(peaks[i] - expected[i]));
    c.at_most("max |refined peak - {1, 2pi-1, 2pi+1}|", worst, 1e-8);
  }
  if (grid_peaks.size() == expected.size()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid_peaks.size(); ++i) worst = std::max(worst, std::abs(grid_peaks[i] - expected[i]));
    c.at_most("max |sweep argmax - refined peak|", worst, 9.9 / 1999.0);
  }

  c.at_most("|P(pi/2) - 0.013204|", std::abs(evaluate_device(g, pi / 2).P[0] - 0.013204), 1e-5);
  c.at_most("|P(pi/2) numeric - closed form|",
            std::abs(evaluate_device(g, pi / 2).P[0] - loop_transmission_probability(f, pi / 2)), 1e-12);
}

void dtn_oracles(Criterion& c) {
  const auto grid = uniform_grid(0.1, 10.0, 2000);
  for (double len : {1.0, 1.7}) {
    for (double theta : {0.0, 1.0, 2.5}) {
      const MetricGraph loop = qgtest::loop_graph(len, theta, coupling::BandPass{1.0});
      double worst = 0.0;
      std::size_t used = 0;
      for (double k : grid) {
        if (std::abs(std::sin(k * len)) < 1e-3) continue;
        const double expect = -2.0 * k * (std::cos(k * len) - std::cos(theta)) / std::sin(k * len);
        const DtNSample s = dtn_at_wavenumber(loop, k);
        const double got = s.finite() ? s.value : std::nan("");
        worst = std::max(worst, std::isfinite(got) ? std::abs(got - expect) / (1.0 + std::abs(expect)) : 1.0);
        ++used;
      }
      std::ostringstream what;
      what << "loop l = " << len << ", theta = " << theta << ", " << used << " points: relative gap";
      c.at_most(what.str(), worst, 1e-9);
    }
    const MetricGraph stub = qgtest::stub_graph(1, len, condition::Dirichlet{}, coupling::BandPass{1.0});
    double worst = 0.0;
    std::size_t used = 0;
    for (double k : grid) {
      if (std::abs(std::sin(k * len)) < 1e-3) continue;
      const double expect = -k / std::tan(k * len);
      const DtNSample s = dtn_at_wavenumber(stub, k);
      worst = std::max(worst, s.regular() ? std::abs(s.value - expect) / (1.0 + std::abs(expect)) : 1.0);
      ++used;
    }
    std::ostringstream what;
    what << "stub l = " << len << ", " << used << " points: relative gap";
    c.at_most(what.str(), worst, 1e-9);
  }
}

struct Sample {
  qgtest::Instance instance;
  double k = 0.0;
};

struct Gaps {
  double pass = 0.0;
  double stop = 0.0;
  double sep = 0.0;
  double unitarity = 0.0;
};

Gaps compare(const Sample& s) {
  const auto& in = s.instance;
  const MetricGraph bp = in.bandpass();
  const DtNSample lam = dtn_at_wavenumber(bp, s.k);
  Gaps g;
  const auto fp = bandpass_transmission(lam, in.alpha, s.k);
  const auto dp = scatter_direct(bp, s.k);
  g.pass = std::max(std::abs(fp.T - dp.transmissions[0]), std::abs(fp.R - dp.R));
  const auto fs = bandstop_transmission(lam, in.alpha, s.k);
  const auto ds = scatter_direct(in.bandstop(), s.k);
  g.stop = std::max(std::abs(fs.T - ds.transmissions[0]), std::abs(fs.R - ds.R));
  const auto fx = separator_transmission(lam, in.alpha, in.beta, s.k);
  const auto dx = scatter_separator_direct(in.separator(), s.k);
  g.sep = std::max({std::abs(fx.T1 - dx.transmissions[0]), std::abs(fx.T2 - dx.transmissions[1]),
                    std::abs(fx.R - dx.R)});
  g.unitarity = std::max({dp.unitarity_residual, ds.unitarity_residual, dx.unitarity_residual});
  return g;
}

/// Random instances of all four families plus sigma0 and eigen-consistent points.
std::vector<Sample> equivalence_samples() {
  std::vector<Sample> out;
  qgtest::Rng rng(20240611);
  for (std::size_t i = 0; i < 240; ++i) {
    auto in = qgtest::random_instance(rng, i);
    const double k = in.k;
    out.push_back({std::move(in), k});
  }
  qgtest::Instance stubs;
  stubs.attached = qgtest::stub_graph(2, 1.0, condition::Dirichlet{}, coupling::BandPass{1.0}).description();
  qgtest::Instance loop;
  loop.attached = qgtest::loop_graph(1.0, 0.0, coupling::BandPass{1.0}).description();
  for (double alpha : {0.7, 4.0}) {
    for (double beta : {1.0 / 3.0, 2.0}) {
      for (auto* in : {&stubs, &loop}) {
        in->alpha = alpha;
        in->beta = beta;
      }
      out.push_back({stubs, pi});
      out.push_back({stubs, 2 * pi});
      out.push_back({loop, 2 * pi});
    }
  }
  return out;
}

void formula_vs_direct(Criterion& c, const std::vector<Sample>& samples) {
  Gaps worst;
  std::size_t special = 0;
  for (const auto& s : samples) {
    const Gaps g = compare(s);
    worst.pass = std::max(worst.pass, g.pass);
    worst.stop = std::max(worst.stop, g.stop);
    worst.sep = std::max(worst.sep, g.sep);
    worst.unitarity = std::max(worst.unitarity, g.unitarity);
    if (!dtn_at_wavenumber(s.instance.bandpass(), s.k).regular()) ++special;
  }
  c.require(samples.size() >= 200, std::to_string(samples.size()) + " instances, " + std::to_string(special) +
                                       " of them at non-regular points");
  c.at_most("band-pass max |formula - direct|", worst.pass, 1e-8);
  c.at_most("band-stop max |formula - direct|", worst.stop, 1e-8);
  c.at_most("separator max |formula - direct|", worst.sep, 1e-8);
  c.at_most("max unitarity residual", worst.unitarity, 1e-9);
}

void duality(Criterion& c, const std::vector<Sample>& samples) {
  double worst = 0.0;
  double worst_moderate = 0.0;
  double worst_scaled = 0.0;
  std::size_t used = 0;
  std::size_t over = 0;
  std::size_t moderate = 0;
  for (const auto& s : samples) {
    const DtNSample lam = dtn_at_wavenumber(s.instance.bandpass(), s.k);
    if (!lam.regular() || lam.value == 0.0) continue;
    const auto p = bandpass_transmission(lam, s.instance.alpha, s.k);
    const auto t = bandstop_transmission(lam, s.instance.alpha, s.k);
    const double r = duality_residual(p.T, t.T);
    const double x = s.instance.alpha * s.instance.alpha * std::abs(lam.value) / s.k;
    worst = std::max(worst, r);
    worst_scaled = std::max(worst_scaled, r / (std::numeric_limits<double>::epsilon() * (1.0 + x) * (1.0 + x)));
    if (x <= 30.0) {
      worst_moderate = std::max(worst_moderate, r);
      ++moderate;
    }
    if (r > 1e-12) ++over;
    ++used;
  }
  c.at_most(std::to_string(used) + " regular samples: max duality residual", worst, 1e-12);
  // Diagnostics only: both sides equal i alpha^2 Lambda / k, and rounding T_stop
  // alone moves the right side by about 2 x^2 eps with x = alpha^2 |Lambda| / k.
  std::ostringstream a;
  a << over << " of " << used << " samples above 1e-12";
  c.info(a.str());
  std::ostringstream b;
  b << moderate << " samples with x <= 30: max residual = " << worst_moderate;
  c.info(b.str());
  std::ostringstream d;
  d << "max residual / (eps (1 + x)^2) = " << worst_scaled;
  c.info(d.str());
}

void sigma0(Criterion& c) {
  const MetricGraph stubs = qgtest::stub_graph(2, 1.0, condition::Dirichlet{}, coupling::BandPass{4.0});
  c.require(dtn_at_wavenumber(stubs, pi).classification == DtNClass::Sigma0, "k = pi is classified sigma0");

  const auto pass = evaluate_device(stubs, pi);
  const auto pass_direct = scatter_direct(stubs, pi);
  c.at_most("band-pass |T - 0| formula", std::abs(pass.T[0]), 1e-9);
  c.at_most("band-pass |T - 0| direct", std::abs(pass_direct.transmissions[0]), 1e-9);

  const MetricGraph stop = stubs.with_coupling(coupling::BandStop{4.0});
  c.at_most("band-stop |T + 1| formula", std::abs(evaluate_device(stop, pi).T[0] + 1.0), 1e-9);
  c.at_most("band-stop |T + 1| direct", std::abs(scatter_direct(stop, pi).transmissions[0] + 1.0), 1e-9);

  const MetricGraph sep = stubs.with_coupling(coupling::Separator{4.0, 1.0 / 3.0});
  const cplx t1(-54.0 / 91.0, 0.0);
  const cplx t2(6.0 / 91.0, 0.0);
  const auto f = evaluate_device(sep, pi);
  const auto d = scatter_separator_direct(sep, pi);
  c.at_most("separator max |(T1, T2) - (-54/91, 6/91)| formula",
            std::max(std::abs(f.T[0] - t1), std::abs(f.T[1] - t2)), 1e-9);
  c.at_most("separator max |(T1, T2) - (-54/91, 6/91)| direct",
            std::max(std::abs(d.transmissions[0] - t1), std::abs(d.transmissions[1] - t2)), 1e-9);
}

void arrangement_convergence(Criterion& c) {
  const MetricGraph g = flux_loop(coupling::BandPass{4.0});
  const auto rows = convergence_study(g, {1e-1, 1e-2, 1e-3, 1e-4}, {2.0});
  bool decreasing = true;
  std::ostringstream errors;
  double closed_gap = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    errors << (i ? ", " : "") << rows[i].error;
    if (i > 0 && !(rows[i].error < rows[i - 1].error)) decreasing = false;
    if (rows[i].k * rows[i].epsilon < 0.5) {
      closed_gap = rows[i].T_closed ? std::max(closed_gap, std::abs(*rows[i].T_closed - rows[i].T_epsilon)) : 1.0;
    }
  }
  c.require(rows.size() == 4 && decreasing, "errors strictly decreasing: " + errors.str());
  c.at_most("final error", rows.back().error, 1e-2);
  c.at_most("max |closed-form T_eps - direct T_eps|", closed_gap, 1e-8);
}

void field_control(Criterion& c) {
  const auto base = LoopFilter::from_flux_angle(1.0, 0.0, 4.0);
  const double k_top = base.max_wavenumber();
  std::vector<double> argmax;
  double deviation = 0.0;
  for (double b : uniform_grid(0.0, base.max_field(), 201)) {
    const auto f = base.with_field(b);
    const double k = refine_peak(f, 0.0, k_top);
    argmax.push_back(k);
    deviation = std::max(deviation, std::abs(k - f.theta() / f.length()));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < argmax.size(); ++i) monotone = monotone && argmax[i] > argmax[i - 1];
  c.require(monotone, "refined argmax strictly increasing over 201 field values");
  c.at_most("|argmax at B = 0|", std::abs(argmax.front()), 1e-6);
  c.at_most("|argmax at B_max - pi/l|", std::abs(argmax.back() - k_top), 1e-6);
  c.at_most("max |argmax - k0|", deviation, 1e-6);

  const auto f = LoopFilter::from_flux_angle(1.0, 1.0, 4.0);
  const double period = f.flux_quantum();
  double gap = 0.0;
  for (double k : uniform_grid(0.1, 10.0, 50)) {
    const auto a = field_sweep(f, 0.0, period, 101, k);
    const auto b = field_sweep(f, period, 2 * period, 101, k);
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i].P - b[i].P));
  }
  c.at_most("max |P(B) - P(B + period)|", gap, 1e-10);
}

void strong_coupling_limits(Criterion& c) {
  const double k = 2.0;
  const MetricGraph loop = flux_loop(coupling::BandPass{4.0});
  const DtNSample lam = dtn_at_wavenumber(loop, k);
  c.require(lam.regular() && lam.value != 0.0, "Lambda(2) regular and nonzero");

  std::vector<double> pass;
  std::vector<double> stop;
  for (double alpha : {4.0, 16.0, 64.0}) {
    pass.push_back(evaluate_device(loop.with_coupling(coupling::BandPass{alpha}), k).P[0]);
    stop.push_back(evaluate_device(loop.with_coupling(coupling::BandStop{alpha}), k).P[0]);
  }
  std::ostringstream p;
  p << "band-pass P = " << pass[0] << ", " << pass[1] << ", " << pass[2] << " strictly decreasing";
  c.require(pass[1] < pass[0] && pass[2] < pass[1], p.str());
  std::ostringstream s;
  s << "band-stop P = " << stop[0] << ", " << stop[1] << ", " << stop[2] << " strictly increasing below 1";
  c.require(stop[1] > stop[0] && stop[2] > stop[1] && stop[2] <= 1.0, s.str());

  const double beta = 1.0 / 3.0;
  const double limit = 4.0 / std::pow(1.0 / beta + beta + beta * beta * beta, 2);
  std::vector<double> gaps;
  for (double alpha : {4.0, 16.0, 64.0}) {
    gaps.push_back(std::abs(evaluate_device(loop.with_coupling(coupling::Separator{alpha, beta}), k).P[0] - limit));
  }
  c.require(gaps[1] < gaps[0] && gaps[2] < gaps[1], "separator P1 approaches its limit monotonically");
  c.at_most("separator |P1 - 4/(1/b + b + b^3)^2| at alpha = 64", gaps[2], 1e-3);
}

void cli_determinism(Criterion& c) {
  std::vector<cli::RunConfig> configs;
  auto add = [&](const char* sub, const char* file) {
    cli::RunConfig r;
    r.subcommand = sub;
    r.graph = qgtest::fixture(file);
    r.quiet = true;
    r.samples = 400;
    configs.push_back(r);
    return &configs.back();
  };
  add("sweep-k", "loop_bandpass.json");
  add("sweep-k", "loop_separator.json");
  add("sweep-k", "flower.json");
  add("sweep-b", "loop_bandpass.json")->samples = 60;
  add("sweep-b", "loop_bandpass.json")->k = 2.0;
  add("spectrum", "loop_field_free.json");
  add("spectrum", "flower.json");
  add("converge", "loop_bandpass.json")->k = 2.0;

  for (const auto& cfg : configs) {
    std::ostringstream first;
    std::ostringstream second;
    std::ostringstream log;
    const int a = cli::run(cfg, first, log);
    const int b = cli::run(cfg, second, log);
    const std::string name = cfg.subcommand + " " + cfg.graph.substr(cfg.graph.find_last_of('/') + 1);
    c.require(a == cli::Success && b == cli::Success && !first.str().empty() && first.str() == second.str(),
              name + ": " + std::to_string(first.str().size()) + " bytes, identical across runs");
  }
}

}  // namespace

int main() {
  const auto samples = equivalence_samples();
  bool ok = true;
  ok &= run(1, "loop band-pass sweep, peaks and P(pi/2)", loop_sweep);
  ok &= run(2, "numeric DtN equals the closed forms", dtn_oracles);
  ok &= run(3, "formula and direct solver agree", [&](Criterion& c) { formula_vs_direct(c, samples); });
  ok &= run(4, "band-pass / band-stop duality", [&](Criterion& c) { duality(c, samples); });
  ok &= run(5, "sigma0 amplitudes of two Dirichlet stubs", sigma0);
  ok &= run(6, "delta arrangement converges to the band-pass junction", arrangement_convergence);
  ok &= run(7, "field control of the passband", field_control);
  ok &= run(8, "strong-coupling limits", strong_coupling_limits);
  ok &= run(9, "CLI output is deterministic", cli_determinism);
  std::printf("%s\n", ok ? "ALL PASS" : "SOME CRITERIA FAILED");
  return ok ? 0 : 1;
}
