#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "greedy/experiments.hpp"
#include "greedy/rng.hpp"

using namespace greedy;

namespace {

ExperimentConfig small_config(const char* engine, std::size_t runs, double tolerance) {
    ExperimentConfig cfg;
    cfg.preset = Preset::example1;
    cfg.engines = {EngineSpec::parse(engine)};
    cfg.runs = runs;
    cfg.grid_size = 200;
    cfg.tolerance = tolerance;
    cfg.base_seed = 5;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("preset lookup") {
    CHECK(parse_preset("example1") == Preset::example1);
    CHECK(parse_preset("2") == Preset::example2);
    CHECK(parse_preset("example3") == Preset::example3);
    CHECK_THROWS_AS(parse_preset("example9"), std::invalid_argument);
    CHECK(preset_name(Preset::example2) == "example2");
    CHECK(preset_sample_size(Preset::example1) == 90);
    CHECK(preset_sample_size(Preset::example2) == 90);
    CHECK(preset_sample_size(Preset::example3) == 120);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_config("uniform", 4, 0.05);
    CHECK_NOTHROW(cfg.validate());
    cfg.runs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config("uniform", 4, 0.0);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config("uniform", 4, 0.05);
    cfg.grid_size = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config("uniform", 4, 0.05);
    cfg.engines.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("two deterministic runs have zero variance everywhere") {
    ExperimentConfig cfg = small_config("weak-greedy", 2, 1e-2);
    cfg.grid_size = 500;
    const ExperimentStats stats = run_experiment(cfg);
    REQUIRE(stats.engines.size() == 1);
    const EngineStats& eng = stats.engines[0];
    for (double v : eng.v_t) CHECK(v == 0.0);
    for (double v : eng.pointwise_var) CHECK(v == 0.0);
    CHECK(eng.stop_step_std == 0.0);
}

TEST_CASE("the experiment is a pure function of its config") {
    const ExperimentConfig cfg = small_config("rpdm", 6, 0.05);
    const ExperimentStats a = run_experiment(cfg);
    const ExperimentStats b = run_experiment(cfg);
    REQUIRE(a.engines.size() == b.engines.size());
    REQUIRE(a.engines[0].e_t.size() == b.engines[0].e_t.size());
    for (std::size_t i = 0; i < a.engines[0].e_t.size(); ++i) {
        CHECK(a.engines[0].e_t[i] == b.engines[0].e_t[i]);
        CHECK(a.engines[0].v_t[i] == b.engines[0].v_t[i]);
    }
    for (std::size_t i = 0; i < a.engines[0].pointwise_mean.size(); ++i) {
        CHECK(a.engines[0].pointwise_mean[i] == b.engines[0].pointwise_mean[i]);
        CHECK(a.engines[0].pointwise_var[i] == b.engines[0].pointwise_var[i]);
    }
}

TEST_CASE("aggregate averages decrease step over step on a convex preset") {
    const ExperimentConfig cfg = small_config("uniform", 12, 0.05);
    const ExperimentStats stats = run_experiment(cfg);
    const EngineStats& eng = stats.engines[0];
    REQUIRE(eng.e_t.size() >= 2);
    for (std::size_t s = 0; s + 1 < eng.e_t.size(); ++s)
        CHECK(eng.e_t[s + 1] <= eng.e_t[s] + 1e-9);
    for (double v : eng.v_t) CHECK(v >= 0.0);
    for (double e : eng.e_t) CHECK(e >= 0.0);
}

TEST_CASE("pointwise error vanishes at the boundary grid points") {
    const ExperimentConfig cfg = small_config("rpdm", 8, 0.05);
    const ExperimentStats stats = run_experiment(cfg);
    const EngineStats& eng = stats.engines[0];
    REQUIRE(eng.pointwise_mean.size() == cfg.grid_size);
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < eng.pointwise_mean.size(); ++i)
        interior += eng.pointwise_mean[i];
    interior /= double(eng.pointwise_mean.size() - 2);
    CHECK(eng.pointwise_mean.front() < interior);
    CHECK(eng.pointwise_mean.back() < interior);
    CHECK(eng.pointwise_mean.front() <= 1e-13);  // a and b are always knots
    CHECK(eng.pointwise_mean.back() <= 1e-13);
}

TEST_CASE("aggregates ignore the order of the runs") {
    Rng rng = make_rng(3);
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(uniform_real(rng, -5.0, 5.0));
    std::vector<double> shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    const auto [m1, v1] = mean_and_population_variance(xs);
    const auto [m2, v2] = mean_and_population_variance(shuffled);
    CHECK(m1 == doctest::Approx(m2).epsilon(1e-13));
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));

    // integer data with an integer mean keeps every deviation exact, so the
    // invariance is bit-exact
    std::vector<double> ints{4.0, 8.0, 2.0, 6.0, 0.0};
    std::vector<double> ints_rev{0.0, 6.0, 2.0, 8.0, 4.0};
    const auto [mi, vi] = mean_and_population_variance(ints);
    const auto [mr, vr] = mean_and_population_variance(ints_rev);
    CHECK(mi == mr);
    CHECK(vi == vr);

    CHECK_THROWS_AS(mean_and_population_variance({}), std::invalid_argument);
}

TEST_CASE("comparison rows line up engines and keep eval identities coherent") {
    ExperimentConfig cfg = small_config("rpdm", 6, 0.05);
    cfg.engines = {EngineSpec::parse("rpdm"), EngineSpec::parse("weak-greedy")};
    const std::vector<ComparisonRow> rows = compare_engines({cfg});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].engine == "rpdm");
    CHECK(rows[1].engine == "weak-greedy");

    // aggregate stopping advances all runs together, so the deterministic
    // sweep count follows the stop node count exactly
    const double n = rows[0].stop_nodes;
    CHECK(rows[0].selection_evals == doctest::Approx(n * (n + 1) / 2.0 - 1.0));
    const double sel_per_node = rows[1].selection_evals / rows[1].stop_nodes;
    CHECK(sel_per_node == doctest::Approx(90.0));

    ExperimentConfig other = small_config("uniform", 4, 0.05);
    other.preset = Preset::example2;
    CHECK_THROWS_AS(compare_engines({cfg, other}), std::invalid_argument);
}

TEST_CASE("csv export: pinned headers, byte-stable re-export, seed provenance") {
    namespace fs = std::filesystem;
    const ExperimentConfig cfg = small_config("uniform", 4, 0.05);
    const ExperimentStats stats = run_experiment(cfg);

    const fs::path dir1 = fs::temp_directory_path() / "greedy_csv_a";
    const fs::path dir2 = fs::temp_directory_path() / "greedy_csv_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    export_csv(stats, dir1.string());
    export_csv(stats, dir2.string());

    const std::string decay = slurp(dir1 / "decay.csv");
    CHECK(first_line(decay) == "step,engine,E_t,V_t");
    CHECK(first_line(slurp(dir1 / "pointwise.csv")) == "y,engine,E_y,V_y");

    CHECK(slurp(dir1 / "decay.csv") == slurp(dir2 / "decay.csv"));
    CHECK(slurp(dir1 / "pointwise.csv") == slurp(dir2 / "pointwise.csv"));
    CHECK(slurp(dir1 / "meta.csv") == slurp(dir2 / "meta.csv"));

    const std::string meta = slurp(dir1 / "meta.csv");
    CHECK(meta.find("base_seed") != std::string::npos);
    CHECK(meta.find("engine") != std::string::npos);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

}  // TEST_SUITE
