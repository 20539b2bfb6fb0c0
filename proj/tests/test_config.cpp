#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mstefan/config.hpp"
#include "mstefan/errors.hpp"

#include <cmath>

using namespace mstefan;

namespace {

template <typename E, typename F>
E expect_error(F&& f) {
  try {
    f();
  } catch (const E& e) {
    return e;
  }
  FAIL("expected error not thrown");
  throw;
}

}  // namespace

TEST_CASE("key=value parsing") {
  const auto kv = parse_key_values("# header\n\nspecies = 3\nD=1,2,3  # trailing\n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0].key == "species");
  CHECK(kv[0].value == "3");
  CHECK(kv[0].line == 3);
  CHECK(kv[1].value == "1,2,3");

  const auto e = expect_error<ParseError>([] { parse_key_values("species=3\nno equals sign\n"); });
  CHECK(e.line() == 2);
  CHECK_THROWS_AS(parse_key_values("=3\n"), ParseError);

  const KeyValue o = parse_override("tau=2e-3");
  CHECK(o.key == "tau");
  CHECK(o.value == "2e-3");
  CHECK(o.line == 0);
  CHECK_THROWS_AS(parse_override("tau"), ParseError);
}

TEST_CASE("minimal document") {
  const RunConfig cfg = parse_config("species=3\nD=1,2,3\ncells=64\ntau=1e-3\nt_end=1.0");
  CHECK(cfg.species == 3);
  CHECK(cfg.D(0, 1) == 1.0);
  CHECK(cfg.D(0, 2) == 2.0);
  CHECK(cfg.D(1, 2) == 3.0);
  CHECK(cfg.D(2, 1) == 3.0);
  CHECK(cfg.D(1, 1) == 0.0);
  CHECK(cfg.cells == 64);
  CHECK(cfg.scheme.tau == 1e-3);
  CHECK(cfg.scheme.t_end == 1.0);
  CHECK(cfg.scheme.eps == 1e-8);
  CHECK(cfg.length == 1.0);
  CHECK(cfg.mixture().delta() == doctest::Approx(1.0 / 3.0));

  const ConcentrationField c0 = cfg.initial_field();
  CHECK(c0.rows() == 64);
  CHECK(c0.cols() == 3);
  CHECK((c0.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
}

TEST_CASE("validation errors") {
  auto missing = expect_error<ValidationError>([] { parse_config("D=1,2,3\n"); });
  CHECK(missing.key() == "species");
  auto tau = expect_error<ValidationError>([] { parse_config("species=3\nD=1,2,3\ntau=-1\n"); });
  CHECK(tau.key() == "tau");
  CHECK(std::string(tau.what()).find("must be positive") != std::string::npos);
  auto D = expect_error<ValidationError>([] { parse_config("species=3\nD=1,-2,3\n"); });
  CHECK(D.key() == "D");
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\ncells=1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\nproduction=quaternary\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\ntau=abc\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\nscenario=nope\n"), ValidationError);

  auto unknown = expect_error<ParseError>([] { parse_config("species=3\nD=1,2,3\nbogus=1\n"); });
  CHECK(unknown.line() == 3);
  auto dup = expect_error<ParseError>([] { parse_config("species=3\nspecies=4\nD=1,2,3\n"); });
  CHECK(dup.line() == 2);
  CHECK_THROWS_AS(make_config(parse_key_values("species=3\nD=1,2,3\n"), {{"bogus", "1", 0}}), ValidationError);
}

TEST_CASE("layering preset, file and overrides") {
  const RunConfig base = make_config({{"scenario", "ternary_uphill", 1}});
  CHECK(base.species == 3);
  CHECK(base.D(0, 1) == 0.0833);
  CHECK(base.D(0, 2) == 0.680);
  CHECK(base.D(1, 2) == 0.168);
  CHECK(base.cells == 128);
  CHECK(base.scheme.tau == 1e-3);
  CHECK(base.scheme.eps == 1e-8);
  CHECK(base.initial.kind == InitialKind::Step);

  const RunConfig file = make_config(parse_key_values("scenario=ternary_uphill\ncells=64\ntau=2e-3\n"));
  CHECK(file.cells == 64);
  CHECK(file.scheme.tau == 2e-3);

  const RunConfig over = make_config(parse_key_values("scenario=ternary_uphill\ncells=64\n"),
                                     {{"cells", "32", 0}, {"cells", "16", 0}});
  CHECK(over.cells == 16);

  const RunConfig switched = make_config(parse_key_values("scenario=ternary_uphill\n"), {{"scenario", "heat_check", 0}});
  CHECK(switched.scenario == "heat_check");
  CHECK(switched.D(0, 1) == 1.0);
}

TEST_CASE("presets are valid and documented") {
  REQUIRE(presets().size() == 3);
  for (const auto& p : presets()) {
    const RunConfig cfg = parse_config(p.text);
    CHECK(cfg.scenario == p.name);
    CHECK(cfg.cells == 128);
    CHECK(cfg.scheme.tau == 1e-3);
    CHECK(cfg.scheme.eps == 1e-8);
    CHECK(cfg.length == 1.0);
    CHECK(find_preset(p.name) == &p);
    CHECK(config_keys_help().find(p.name) != std::string::npos);
  }
  CHECK(find_preset("missing") == nullptr);

  const RunConfig q = parse_config(find_preset("quaternary_reaction")->text);
  CHECK(q.species == 5);
  CHECK(q.production.kind() == ProductionLaw::Kind::QuaternaryReversible);
  CHECK(q.D(0, 2) == 2.0);
  CHECK(q.D(1, 3) == 2.0);
  CHECK(q.D(0, 1) == 1.0);
  CHECK(q.initial.kind == InitialKind::Uniform);

  const RunConfig h = parse_config(find_preset("heat_check")->text);
  CHECK(h.mixture().equal_diffusivities());
  CHECK(h.initial.kind == InitialKind::Cosine);
}

TEST_CASE("every key is documented") {
  for (const char* key : {"scenario", "species", "D", "production", "custom_terms", "length", "cells", "tau", "eps",
                          "picard_tol", "picard_max", "damping_theta", "eta_floor", "t_end", "audit_mode", "initial",
                          "initial_mean", "initial_amplitude", "initial_left", "initial_right", "initial_split",
                          "output_dir", "emit_timeseries", "emit_snapshots", "emit_audit", "emit_certify",
                          "snapshot_every", "samples", "seed"}) {
    CHECK(config_keys_help().find(std::string(key) + "=") != std::string::npos);
  }
}

TEST_CASE("initial conditions") {
  const RunConfig step = parse_config(
      "species=3\nD=1,2,3\ncells=10\ninitial=step\ninitial_left=0.6,0.3,0.1\ninitial_right=0.1,0.3,0.6\n"
      "initial_split=0.3\n");
  const ConcentrationField c = step.initial_field();
  CHECK(c(0, 0) == 0.6);
  CHECK(c(2, 0) == 0.6);
  CHECK(c(3, 0) == 0.1);
  CHECK(c(9, 2) == 0.6);

  const RunConfig uni = parse_config("species=4\nD=1,1,1,1,1,1\ninitial=uniform\ninitial_mean=0.1,0.2,0.3\n");
  const ConcentrationField u = uni.initial_field();
  CHECK(u(5, 3) == doctest::Approx(0.4));

  const RunConfig cosine = parse_config("species=3\nD=1,1,1\ncells=4\ninitial_mean=0.4,0.3,0.3\n"
                                        "initial_amplitude=0.1,-0.05,-0.05\n");
  const ConcentrationField k = cosine.initial_field();
  CHECK(k(0, 0) == doctest::Approx(0.4 + 0.1 * std::cos(3.14159265358979323846 * 0.125)));

  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\ninitial=uniform\ninitial_mean=0.7,0.6\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\ninitial_amplitude=0.1,0.1,0.1\n"), ValidationError);
}

TEST_CASE("custom production terms") {
  const RunConfig cfg =
      parse_config("species=3\nD=1,1,1\nproduction=custom\ncustom_terms=1:-1:1 0 0;2:1:1 0 0\n");
  CHECK(cfg.production.kind() == ProductionLaw::Kind::Custom);
  CHECK(cfg.production.terms().size() == 2);
  CHECK_FALSE(cfg.mixture().warnings().empty());
  CHECK_THROWS(parse_config("species=3\nD=1,1,1\nproduction=custom\ncustom_terms=1:-1:1 0\n"));
}

TEST_CASE("scheme and output keys") {
  const RunConfig cfg = parse_config(
      "species=3\nD=1,2,3\naudit_mode=warn\nemit_snapshots=true\nemit_audit=false\nsnapshot_every=5\n"
      "samples=0\nseed=99\noutput_dir=out/x\npicard_max=7\ndamping_theta=0.5\neta_floor=1e-6\n");
  CHECK(cfg.scheme.audit_mode == AuditMode::Warn);
  CHECK(cfg.emit.snapshots);
  CHECK_FALSE(cfg.emit.audit_json);
  CHECK(cfg.snapshot_every == 5);
  CHECK(cfg.samples == 0);
  CHECK(cfg.seed == 99);
  CHECK(cfg.output_dir == "out/x");
  CHECK(cfg.scheme.picard_max == 7);
  CHECK(cfg.scheme.damping_theta == 0.5);
  CHECK(cfg.scheme.eta_floor == 1e-6);
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\nemit_audit=maybe\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("species=3\nD=1,2,3\naudit_mode=loud\n"), ValidationError);
}
