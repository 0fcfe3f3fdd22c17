#include <catch_amalgamated.hpp>

#include <limits>

#include "generators.hpp"

using namespace qgfilter;
using qgtest::Rng;

namespace {

struct Gaps {
  double pass = 0.0;
  double stop = 0.0;
  double sep = 0.0;
  double unitarity = 0.0;
};

Gaps compare(const qgtest::Instance& in, double k) {
  Gaps g;
  const MetricGraph bp = in.bandpass();
  const DtNSample s = dtn_at_wavenumber(bp, k);

  const auto fp = bandpass_transmission(s, in.alpha, k);
  const auto dp = scatter_direct(bp, k);
  g.pass = std::max(std::abs(fp.T - dp.transmissions[0]), std::abs(fp.R - dp.R));

  const auto fs = bandstop_transmission(s, in.alpha, k);
  const auto ds = scatter_direct(in.bandstop(), k);
  g.stop = std::max(std::abs(fs.T - ds.transmissions[0]), std::abs(fs.R - ds.R));

  const auto fx = separator_transmission(s, in.alpha, in.beta, k);
  const auto dx = scatter_separator_direct(in.separator(), k);
  g.sep = std::max({std::abs(fx.T1 - dx.transmissions[0]), std::abs(fx.T2 - dx.transmissions[1]),
                    std::abs(fx.R - dx.R)});
  g.unitarity = std::max({dp.unitarity_residual, ds.unitarity_residual, dx.unitarity_residual});
  return g;
}

}  // namespace

TEST_CASE("closed forms agree with the direct solver on random graphs") {
  Rng rng(71);
  for (std::size_t i = 0; i < 240; ++i) {
    const auto in = qgtest::random_instance(rng, i);
    const Gaps g = compare(in, in.k);
    INFO(qgtest::family_name(in.family) << " #" << i << " k = " << in.k << " alpha = " << in.alpha);
    CHECK(g.pass <= 1e-8);
    CHECK(g.stop <= 1e-8);
    CHECK(g.sep <= 1e-8);
    CHECK(g.unitarity <= 1e-9);
  }
}

TEST_CASE("closed forms agree with the direct solver at sigma0 and eigen points") {
  const double pi = std::numbers::pi;
  qgtest::Instance stubs;
  stubs.attached = qgtest::stub_graph(2, 1.0, condition::Dirichlet{}, coupling::BandPass{1.0}).description();
  qgtest::Instance loop;
  loop.attached = qgtest::loop_graph(1.0, 0.0, coupling::BandPass{1.0}).description();
  for (double alpha : {0.7, 4.0}) {
    for (double beta : {1.0 / 3.0, 2.0}) {
      stubs.alpha = loop.alpha = alpha;
      stubs.beta = loop.beta = beta;
      for (const auto& [in, k] : {std::pair{stubs, pi}, std::pair{stubs, 2 * pi}, std::pair{loop, 2 * pi}}) {
        const Gaps g = compare(in, k);
        CHECK(g.pass <= 1e-8);
        CHECK(g.stop <= 1e-8);
        CHECK(g.sep <= 1e-8);
        CHECK(g.unitarity <= 1e-9);
      }
    }
  }
}

TEST_CASE("duality holds at every regular random sample") {
  Rng rng(72);
  for (std::size_t i = 0; i < 200; ++i) {
    const auto in = qgtest::random_instance(rng, i);
    const DtNSample s = dtn_at_wavenumber(in.bandpass(), in.k);
    if (!s.regular() || s.value == 0.0) continue;
    const auto p = bandpass_transmission(s, in.alpha, in.k);
    const auto t = bandstop_transmission(s, in.alpha, in.k);
    // rounding of T_stop alone moves the residual by about 2 x^2 eps
    const double x = in.alpha * in.alpha * std::abs(s.value) / in.k;
    const double r = duality_residual(p.T, t.T);
    CHECK(r <= 4 * std::numeric_limits<double>::epsilon() * (1.0 + x) * (1.0 + x));
    if (x <= 30.0) CHECK(r <= 1e-12);
  }
}

TEST_CASE("gauge invariance of stub lengths") {
  // a vector potential on a tree edge is a pure gauge
  Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const double len = rng.uniform(0.3, 2.0);
    const double k = rng.uniform(0.2, 6.0);
    GraphDescription d;
    d.contact = "v0";
    d.vertices = {{"v0", std::nullopt}, {"w", qgtest::random_end_condition(rng)}};
    d.edges = {{"s", "v0", "w", len, 0.0, 0.0}};
    d.coupling = coupling::BandPass{2.0};
    const MetricGraph plain = build_graph(d);
    d.edges[0].vector_potential = rng.uniform(-3.0, 3.0);
    const MetricGraph gauged = build_graph(d);
    const DtNSample a = dtn_at_wavenumber(plain, k);
    const DtNSample b = dtn_at_wavenumber(gauged, k);
    REQUIRE(a.classification == b.classification);
    if (a.regular()) CHECK(std::abs(a.value - b.value) <= 1e-9 * (1.0 + std::abs(a.value)));
  }
}

TEST_CASE("edge orientation does not matter") {
  Rng rng(74);
  for (std::size_t i = 0; i < 60; ++i) {
    const auto in = qgtest::random_instance(rng, i);
    GraphDescription flipped = in.attached;
    for (Edge& e : flipped.edges) {
      std::swap(e.end_a, e.end_b);
      e.vector_potential = -e.vector_potential;
    }
    qgtest::Instance other = in;
    other.attached = flipped;
    const auto a = scatter_direct(in.bandpass(), in.k);
    const auto b = scatter_direct(other.bandpass(), in.k);
    INFO(qgtest::family_name(in.family) << " k = " << in.k);
    CHECK(std::abs(a.transmissions[0] - b.transmissions[0]) <= 1e-9);
  }
}
