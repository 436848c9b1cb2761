#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "greedy/process.hpp"
#include "greedy/rng.hpp"

using namespace greedy;

namespace {

Trajectory run_with(const char* engine_name, const Cop& cop, const StoppingRule& stop,
                    std::uint64_t seed, std::size_t grid_size = 200) {
    const auto engine = make_engine(EngineSpec::parse(engine_name), cop);
    Rng rng = make_rng(seed);
    const Configuration eta0 = engine->initial_config(rng);
    const QuadratureGrid grid(cop.domain, grid_size);
    return run_discrete(*engine, eta0, cop, stop, grid, rng);
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("node-count stopping gives one event per node") {
    const Cop cop = example1();
    const Trajectory traj = run_with("rpdm", cop, StoppingRule::max_nodes(5), 3);
    REQUIRE(traj.events.size() == 5);
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
        CHECK(traj.events[i].jump_time == double(i));
        CHECK(traj.events[i].config.count() == i + 1);
    }
    CHECK(traj.final_config().count() == 5);
}

TEST_CASE("an affine target stops one step after the first check") {
    const Cop cop{affine_target(2.0, 0.5), Domain::interval(0.0, 1.0)};
    const QuadratureGrid grid(cop.domain, 100);
    const StoppingRule stop = StoppingRule::error_below(1e-2, grid);
    const Trajectory traj = run_with("uniform", cop, stop, 11, 100);
    CHECK(traj.events.size() == 2);  // initial configuration + the single step
    CHECK(traj.events.back().grid_mean_error <= 1e-13);
}

TEST_CASE("identical engine, seed, and rule reproduce the trajectory bit for bit") {
    const Cop cop = example1();
    for (const char* name : {"uniform", "rpdm", "weak-greedy"}) {
        const Trajectory a = run_with(name, cop, StoppingRule::max_nodes(12), 19);
        const Trajectory b = run_with(name, cop, StoppingRule::max_nodes(12), 19);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].jump_time == b.events[i].jump_time);
            CHECK(a.events[i].g_estimate == b.events[i].g_estimate);
            CHECK(a.events[i].evals_cumulative == b.events[i].evals_cumulative);
            REQUIRE(a.events[i].config.count() == b.events[i].config.count());
            for (std::size_t j = 0; j < a.events[i].config.count(); ++j)
                CHECK(a.events[i].config.at(j).x() == b.events[i].config.at(j).x());
        }
    }
}

TEST_CASE("global error estimates never increase along convex-target runs") {
    for (const Cop& cop : {example1(), example2()}) {
        for (const char* name : {"uniform", "rpdm", "weak-greedy"}) {
            const Trajectory traj = run_with(name, cop, StoppingRule::max_nodes(30), 7);
            for (std::size_t i = 0; i + 1 < traj.events.size(); ++i)
                CHECK(traj.events[i + 1].g_estimate <= traj.events[i].g_estimate + 1e-12);
        }
    }
}

TEST_CASE("an unreachable tolerance trips the step guard") {
    const Cop cop = example1();
    const auto engine = make_engine(EngineSpec::parse("uniform"), cop);
    Rng rng = make_rng(5);
    const Configuration eta0 = engine->initial_config(rng);
    const QuadratureGrid grid(cop.domain, 100);
    const StoppingRule stop = StoppingRule::error_below(0.0, grid);
    CHECK_THROWS_AS(run_discrete(*engine, eta0, cop, stop, grid, rng, 50), std::runtime_error);
}

TEST_CASE("input validation") {
    const Cop cop = example1();
    const auto engine = make_engine(EngineSpec::parse("uniform"), cop);
    Rng rng = make_rng(5);
    const QuadratureGrid grid(cop.domain, 100);

    const Configuration two({Point(1.0), Point(2.0)});
    CHECK_THROWS_AS(run_discrete(*engine, two, cop, StoppingRule::max_nodes(5), grid, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_discrete(*engine, Configuration({Point(1.0)}), cop,
                                 StoppingRule::max_time(5.0), grid, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(StoppingRule::max_nodes(0), std::invalid_argument);
    CHECK_THROWS_AS(StoppingRule::error_below(-1.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(StoppingRule::max_time(0.0), std::invalid_argument);

    Rng clock = make_clock_rng(5);
    CHECK_THROWS_AS(run_ctmc(*engine, Configuration({Point(1.0)}), cop, 0.0, grid, rng, clock),
                    std::invalid_argument);
}

TEST_CASE("a horizon below the first holding time leaves only the initial event") {
    const Cop cop = example1();
    const auto engine = make_engine(EngineSpec::parse("uniform"), cop);
    Rng rng = make_rng(23);
    const Configuration eta0 = engine->initial_config(rng);
    const QuadratureGrid grid(cop.domain, 100);
    Rng clock = make_clock_rng(23);
    const Trajectory traj = run_ctmc(*engine, eta0, cop, 1e-9, grid, rng, clock);
    CHECK(traj.events.size() == 1);
    CHECK(traj.events[0].config.count() == 1);
}

TEST_CASE("the continuous clock replays the discrete skeleton") {
    const Cop cop = example1();
    const QuadratureGrid grid(cop.domain, 100);
    for (const char* name : {"uniform", "rpdm"}) {
        const auto e1 = make_engine(EngineSpec::parse(name), cop);
        Rng r1 = make_rng(37);
        const Configuration c1 = e1->initial_config(r1);
        Rng clock = make_clock_rng(37);
        const Trajectory ct = run_ctmc(*e1, c1, cop, 10.0, grid, r1, clock);

        const auto e2 = make_engine(EngineSpec::parse(name), cop);
        Rng r2 = make_rng(37);
        const Configuration c2 = e2->initial_config(r2);
        const Trajectory disc =
            run_discrete(*e2, c2, cop, StoppingRule::max_nodes(ct.final_config().count()), grid, r2);

        REQUIRE(ct.events.size() == disc.events.size());
        for (std::size_t i = 0; i < ct.events.size(); ++i) {
            REQUIRE(ct.events[i].config.count() == disc.events[i].config.count());
            for (std::size_t j = 0; j < ct.events[i].config.count(); ++j)
                CHECK(ct.events[i].config.at(j).x() == disc.events[i].config.at(j).x());
        }
        // timestamps differ: strictly increasing real times vs step indices
        for (std::size_t i = 1; i < ct.events.size(); ++i)
            CHECK(ct.events[i].jump_time > ct.events[i - 1].jump_time);
    }
}

TEST_CASE("event lookup by time returns the configuration in force") {
    const Cop cop = example1();
    const Trajectory traj = run_with("uniform", cop, StoppingRule::max_nodes(6), 41);
    CHECK(traj.at_time(0.0).config.count() == 1);
    CHECK(traj.at_time(2.5).config.count() == 3);
    CHECK(traj.at_time(100.0).config.count() == 6);
}

TEST_CASE("deterministic sample-grid run matches the published step budget") {
    const Cop cop = example1();
    const auto engine = make_engine(EngineSpec::parse("weak-greedy"), cop);
    Rng rng = make_rng(1);
    const Configuration eta0 = engine->initial_config(rng);
    const QuadratureGrid grid(cop.domain, 500);
    const Trajectory traj =
        run_discrete(*engine, eta0, cop, StoppingRule::error_below(1e-2, grid), grid, rng);

    const std::size_t steps = traj.events.size() - 1;
    CHECK(steps >= 29);
    CHECK(steps <= 49);
    // one sweep of all 90 samples per selection, including the initial pick
    CHECK(engine->eval_count() == 90 * (steps + 1));
    CHECK(engine->eval_count() >= std::uint64_t(3510 * 0.75));
    CHECK(engine->eval_count() <= std::uint64_t(3510 * 1.25));
}

TEST_CASE("one-jump improvement residuals: zero cases and time decay") {
    const Cop cop = example1();
    const KernelSampler unif = [&cop](const Configuration&, Rng& r) {
        return uniform_sample(cop.domain, r);
    };

    // affine target: local errors vanish identically
    const Cop flat{affine_target(1.0, 0.0), Domain::interval(0.0, 5.0)};
    Rng rng = make_rng(59);
    const std::vector<Configuration> etas{Configuration({Point(2.0)}),
                                          Configuration({Point(1.0), Point(3.0)})};
    CHECK(generator_residual(unif, flat, etas, Point(2.5), 50, rng) == 0.0);

    // q already a node everywhere: the interpolant stays exact at q
    const std::vector<Configuration> with_node{Configuration({Point(2.5)}),
                                               Configuration({Point(1.0), Point(2.5)})};
    CHECK(generator_residual(unif, cop, with_node, Point(2.5), 50, rng) == 0.0);

    // snapshots from later times yield smaller residuals
    std::vector<Configuration> early, late;
    for (std::uint64_t s = 0; s < 12; ++s) {
        const Trajectory traj = run_with("uniform", cop, StoppingRule::max_nodes(25), 100 + s);
        early.push_back(traj.events[0].config);
        late.push_back(traj.final_config());
    }
    const double r_early = generator_residual(unif, cop, early, Point(1.7), 400, rng);
    const double r_late = generator_residual(unif, cop, late, Point(1.7), 400, rng);
    CHECK(r_early > r_late);
    CHECK(r_late >= -1e-12);  // convex target: improvements never negative
}

}  // TEST_SUITE
