#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracle_utils.hpp"
#include "preisach/errors.hpp"
#include "preisach/identify.hpp"
#include "preisach/synth.hpp"

using namespace preisach;

TEST_SUITE("synth") {

TEST_CASE("the one-level program is a single full cycle") {
    PreisachGrid g(0.4, 1);
    InputProgram p = forc_program(g);
    CHECK(p.turning_points == std::vector<double>{0.0, 0.4, 0.0});
}

TEST_CASE("the two-level program reverses at kmax and kmax/2") {
    PreisachGrid g(0.5, 2);
    InputProgram p = forc_program(g);
    CHECK(p.turning_points == std::vector<double>{0.0, 1.0, 0.0, 0.5, 0.0});
}

TEST_CASE("nested reversals beat ten thousand random programs of equal length") {
    PreisachGrid g(1.0 / 3.0, 3);
    std::vector<double> forc = loop_program(g, forc_program(g).turning_points);
    std::vector<double> y(forc.size(), 0.0);
    IdentificationSystem sys = assemble(g, forc, y);
    const int forc_rank = testutil::exact_rank(sys.delta);
    CHECK(forc_rank == testutil::max_attainable_rank(g));

    SplitMix64 rng(606);
    int beaten = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        std::vector<int> levels(forc.size());
        for (int& lvl : levels) lvl = static_cast<int>(rng.next() % (g.m() + 1));
        SignMatrix delta = sign_matrix(g, levels);
        if (testutil::exact_rank(delta) > forc_rank) ++beaten;
    }
    CHECK(beaten == 0);
}

TEST_CASE("ground truth is deterministic per seed") {
    PreisachGrid g(0.25, 4);
    CHECK(make_truth(g, 42).x == make_truth(g, 42).x);
    CHECK(make_truth(g, 42).x != make_truth(g, 43).x);
}

TEST_CASE("seed zero produces the documented fixed vector") {
    PreisachGrid g(0.5, 2);
    KernelVector k = make_truth(g, 0);
    // splitmix64(0) stream mapped to [0,1): frozen here as the contract for
    // reproducible artifacts.
    CHECK(k.x[0] == 0.88331080821364261);
    CHECK(k.x[1] == 0.43152799704850997);
    CHECK(k.x[2] == k.x[1]);  // paired triangles of the split square
    CHECK(k.x[3] == 0.026433771592597743);
    CHECK(k.c() == 0.97088197815382848);
}

TEST_CASE("a thousand seeds give a thousand distinct kernels") {
    PreisachGrid g(0.5, 2);
    std::set<std::vector<double>> seen;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
        seen.insert(make_truth(g, seed).x);
    CHECK(seen.size() == 1000);
}

TEST_CASE("cell values are nonnegative and equal within each square") {
    PreisachGrid g(0.2, 5);
    KernelVector k = make_truth(g, 31415);
    for (double v : k.x) CHECK(v >= 0.0);
    for (int band = 1; band <= g.m(); ++band) {
        int base = (band - 1) * (band - 1);
        for (int i = 0; i + 1 < band; ++i)
            CHECK(k.x[static_cast<std::size_t>(base + 2 * i)] ==
                  k.x[static_cast<std::size_t>(base + 2 * i + 1)]);
    }
}

TEST_CASE("noise-free simulation is exactly reproducible") {
    PreisachGrid g(0.1, 10);
    KernelVector k = make_truth(g, 5);
    InputProgram p = forc_program(g);
    ExperimentSeries a = simulate(g, k, p, 0.0, 1);
    ExperimentSeries b = simulate(g, k, p, 0.0, 1);
    CHECK(a.kappa == b.kappa);
    CHECK(a.moment == b.moment);
    CHECK(a.t == b.t);
}

TEST_CASE("noisy simulation is seeded and deterministic") {
    PreisachGrid g(0.2, 5);
    KernelVector k = make_truth(g, 5);
    InputProgram p = forc_program(g);
    ExperimentSeries a = simulate(g, k, p, 0.1, 9);
    ExperimentSeries b = simulate(g, k, p, 0.1, 9);
    ExperimentSeries c = simulate(g, k, p, 0.1, 10);
    CHECK(a.moment == b.moment);
    CHECK(a.moment != c.moment);
}

TEST_CASE("fitting a noise-free simulation closes the loop") {
    PreisachGrid g(0.1, 10);
    KernelVector k = make_truth(g, 21);
    ExperimentSeries s = simulate(g, k, forc_program(g), 0.0, 21);
    FitReport fit = solve(assemble(g, s.kappa, s.moment), 1e-10);
    CHECK(fit.residual_rms < 1e-10);
}

TEST_CASE("the fitted residual tracks the injected noise level") {
    PreisachGrid g(0.25, 4);  // n = 17
    KernelVector k = make_truth(g, 77);
    InputProgram p = forc_program(g);
    p.samples_per_branch = 40;  // T = 321 >= 10 n
    const double sigma = 0.05;
    ExperimentSeries s = simulate(g, k, p, sigma, 1234);
    FitReport fit = solve(assemble(g, s.kappa, s.moment), 1e-10);
    CHECK(fit.residual_rms == doctest::Approx(sigma).epsilon(0.2));
}

TEST_CASE("every cell is exercised both ways by the nested program") {
    PreisachGrid g(0.2, 5);
    std::vector<double> samples = loop_program(g, forc_program(g).turning_points);
    std::vector<int> levels = to_levels(g, samples);
    SignMatrix delta = sign_matrix(g, levels);
    for (int col = 0; col < g.cell_count(); ++col) {
        int flips = 0;
        for (int i = 1; i < delta.rows; ++i)
            if (delta.at(i, col) != delta.at(i - 1, col)) ++flips;
        CHECK(flips >= 2);
    }
}

TEST_CASE("programs must alternate direction after quantization") {
    PreisachGrid g(0.2, 5);
    KernelVector k = make_truth(g, 3);
    InputProgram monotone{{0.0, 0.4, 0.8}, 0};
    CHECK_THROWS_AS(simulate(g, k, monotone, 0.0, 1), validation_error);
    InputProgram repeated{{0.0, 0.41, 0.39}, 0};  // both quantize to 0.4
    CHECK_THROWS_AS(simulate(g, k, repeated, 0.0, 1), validation_error);
    InputProgram valid{{0.0, 0.8, 0.2, 0.6}, 0};
    CHECK_NOTHROW(simulate(g, k, valid, 0.0, 1));
}

TEST_CASE("negative noise is rejected") {
    PreisachGrid g(0.2, 5);
    CHECK_THROWS_AS(simulate(g, make_truth(g, 1), forc_program(g), -0.1, 1), validation_error);
}

} // TEST_SUITE
