#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "schlab/config.hpp"

using namespace schlab;

TEST_CASE("minimal config keeps the documented defaults") {
  const std::string text = "[problem]\nn = 16\nm = 128\nT = 0.2\n";
  const RunConfig cfg = parse_config_text(text, "mem", Command::rates_space);
  CHECK(cfg.problem.n == 16);
  CHECK(cfg.problem.m == 128);
  CHECK(cfg.problem.T == doctest::Approx(0.2));
  CHECK(cfg.problem.drift.describe() == "sin 1");
  CHECK(cfg.problem.diffusion.describe() == "shifted_sine 1 0.5");
  CHECK(cfg.problem.initial.describe() == "sine 1 1");
  CHECK(cfg.seed == 0);
  CHECK(cfg.study.levels == std::vector<int>{4, 8, 16, 32});
  CHECK(cfg.study.reference == 64);
  CHECK(cfg.output_dir == "out");
}

TEST_CASE("command-specific ladder defaults") {
  const RunConfig t = parse_config_text("", "mem", Command::rates_time);
  CHECK(t.study.levels == std::vector<int>{4, 8, 16, 32, 64});
  CHECK(t.study.reference == 4096);

  const RunConfig d = parse_config_text("", "mem", Command::density);
  CHECK(d.study.levels == std::vector<int>{4, 8, 16});
  CHECK(d.study.samples == 5000);

  const RunConfig h = parse_config_text("", "mem", Command::holder);
  CHECK(h.problem.n == 64);
  CHECK(h.problem.m == 4096);
  CHECK(h.problem.T == doctest::Approx(0.25));
}

TEST_CASE("unknown keys, sections, duplicates, and malformed values are errors") {
  CHECK_THROWS_WITH_AS(parse_config_text("[problem]\nnn = 3\n", "cfg", Command::simulate),
                       doctest::Contains("unknown key 'problem.nn'"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[wat]\nx = 1\n", "cfg", Command::simulate),
                       doctest::Contains("unknown section"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[problem]\nn = 8\nn = 9\n", "cfg", Command::simulate),
                       doctest::Contains("duplicate key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[problem]\nn = eight\n", "cfg", Command::simulate),
                       doctest::Contains("cfg:2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("n = 8\n", "cfg", Command::simulate),
                       doctest::Contains("outside any section"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg", Command::simulate),
                  std::runtime_error);
}

TEST_CASE("model descriptors parse and rebuild") {
  const std::string text =
      "[problem]\n"
      "drift = cubic_cutoff 1 0 -1 0 2\n"
      "diffusion = constant 0.75\n"
      "initial = combo 1 1.0 3 -0.25\n"
      "record = stride 16\n"
      "seed = 99\n";
  const RunConfig cfg = parse_config_text(text, "mem", Command::simulate);
  CHECK(cfg.problem.drift.kind() == Drift::Kind::cubic_cutoff);
  CHECK(cfg.problem.diffusion.kind() == Diffusion::Kind::constant);
  CHECK(cfg.problem.initial.modes().size() == 2);
  CHECK(cfg.problem.record == RecordPolicy::stride);
  CHECK(cfg.problem.stride == 16);
  CHECK(cfg.seed == 99);

  CHECK_THROWS_WITH_AS(
      parse_config_text("[problem]\ndrift = warp 1\n", "cfg", Command::simulate),
      doctest::Contains("unknown drift"), std::runtime_error);
}

TEST_CASE("emit -> parse round-trip is the identity") {
  std::string text =
      "[problem]\n"
      "n = 24\nm = 96\nT = 0.375\n"
      "drift = rational 1.25\n"
      "diffusion = shifted_sine 2 0.125\n"
      "initial = sine 2 0.5\n"
      "seed = 31\n"
      "[study]\n"
      "levels = 4 8\nreference = 16\nsamples = 123\nmoment_p = 3\neval_x = 1.25\n"
      "time_gaps = 2 4 8\nspace_gaps = 4 8\n"
      "hnorm_n = 8\nhnorm_m = 16\nhnorm_samples = 77\nrho = 0.25\n"
      "[kernel]\n"
      "levels = 8 16\nhorizon = 0.25\nx_points = 0.5 1.5\n"
      "tail_tol = 1e-10\nj_max = 128\ntime_nodes = 32\ntime_grading = 2\nspace_nodes_per_cell = 2\n"
      "[output]\n"
      "dir = artifacts\n";
  const RunConfig cfg = parse_config_text(text, "mem", Command::rates_space);
  const std::string emitted = emit_config(cfg);
  const RunConfig again = parse_config_text(emitted, "emitted", Command::rates_space);
  CHECK(again == cfg);
  CHECK(emit_config(again) == emitted);
}
