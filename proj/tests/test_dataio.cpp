#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "preisach/dataio.hpp"
#include "preisach/errors.hpp"
#include "preisach/operator.hpp"
#include "preisach/synth.hpp"

using namespace preisach;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("preisach_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("dataio") {

TEST_CASE("a well-formed three-row file parses") {
    std::istringstream in("t,kappa,moment\n0,0.0,1.5\n1,0.5,2.5\n2,1.0,3.5\n");
    ExperimentSeries s = load_csv(in, "mem");
    REQUIRE(s.size() == 3);
    CHECK(s.kappa[1] == 0.5);
    CHECK(s.moment[2] == 3.5);
}

TEST_CASE("comments and blank lines are skipped") {
    std::istringstream in("# run 12\n\nt,kappa,moment\n# mid comment\n0,0.1,1\n1,0.2,2\n");
    CHECK(load_csv(in, "mem").size() == 2);
}

TEST_CASE("non-increasing time is reported with its file row") {
    // header on line 1, bad sample on line 5
    std::istringstream in("t,kappa,moment\n0,0,0\n1,0.1,1\n2,0.2,2\n1.5,0.3,3\n3,0.4,4\n");
    try {
        load_csv(in, "mem");
        FAIL("expected a validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("row 5") != std::string::npos);
    }
}

TEST_CASE("extra trailing columns are accepted and ignored") {
    std::istringstream in("t,kappa,moment,temp,notes\n0,0.1,1,21.5,ok\n1,0.2,2,21.6,ok\n");
    ExperimentSeries s = load_csv(in, "mem");
    CHECK(s.size() == 2);
    CHECK(s.moment[1] == 2.0);
}

TEST_CASE("missing columns and non-numeric fields are rejected with locations") {
    std::istringstream bad_header("time,kappa,moment\n0,0,0\n");
    CHECK_THROWS_AS(load_csv(bad_header, "mem"), validation_error);

    std::istringstream bad_field("t,kappa,moment\n0,0,0\n1,zero point two,2\n");
    try {
        load_csv(bad_field, "mem");
        FAIL("expected a validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }

    std::istringstream nan_field("t,kappa,moment\n0,0,nan\n");
    CHECK_THROWS_AS(load_csv(nan_field, "mem"), validation_error);
}

TEST_CASE("missing files raise io errors") {
    CHECK_THROWS_AS(load_csv("/nonexistent/path/data.csv"), io_error);
    CHECK_THROWS_AS(import_kernel("/nonexistent/path/kernel.json"), io_error);
}

TEST_CASE("quantization collapses constant runs and keeps the settled moment") {
    ExperimentSeries s;
    s.t = {0, 1, 2, 3};
    s.kappa = {0.0, 0.24, 0.26, 1.0};
    s.moment = {10, 11, 12, 13};
    QuantizedSeries q = preprocess(s, 0.5, false);
    CHECK(q.grid.m() == 2);
    REQUIRE(q.kappa.size() == 3);
    CHECK(q.kappa == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(q.moment == std::vector<double>{11, 12, 13});
    CHECK(q.kept_index == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("a constant series collapses to one sample") {
    ExperimentSeries s;
    s.t = {0, 1, 2};
    s.kappa = {0.3, 0.3, 0.3};
    s.moment = {1, 2, 3};
    QuantizedSeries q = preprocess(s, 0.1, false);
    REQUIRE(q.kappa.size() == 1);
    CHECK(q.moment[0] == 3.0);
}

TEST_CASE("negative curvature needs the offset mode") {
    ExperimentSeries s;
    s.t = {0, 1};
    s.kappa = {-0.1, 0.4};
    s.moment = {0, 1};
    CHECK_THROWS_AS(preprocess(s, 0.1, false), validation_error);
    QuantizedSeries q = preprocess(s, 0.1, true);
    CHECK(q.kappa.front() == 0.0);
    CHECK(q.kappa.back() == 0.5);
    CHECK(q.grid.kmax() == doctest::Approx(0.5));
}

TEST_CASE("the ceiling snaps the observed maximum up to the grid") {
    ExperimentSeries s;
    s.t = {0, 1};
    s.kappa = {0.0, 0.97};
    s.moment = {0, 1};
    CHECK(preprocess(s, 0.1, false).grid.m() == 10);

    ExperimentSeries exact;
    exact.t = {0, 1, 2};
    exact.kappa = {0.0, 0.1 + 0.1 + 0.1, 0.2};  // accumulated fp noise on 0.3
    exact.moment = {0, 1, 2};
    CHECK(preprocess(exact, 0.1, false).grid.m() == 3);
}

TEST_CASE("explicit ceilings are validated and clamping saturates") {
    ExperimentSeries s;
    s.t = {0, 1};
    s.kappa = {0.0, 0.7};
    s.moment = {0, 1};
    PreprocessOptions opt;
    opt.d = 0.1;
    opt.kmax_override = 0.5;
    CHECK_THROWS_AS(preprocess(s, opt), validation_error);  // 0.7 beyond the ceiling
    opt.clamp = true;
    QuantizedSeries q = preprocess(s, opt);
    CHECK(q.grid.m() == 5);
    CHECK(q.kappa.back() == doctest::Approx(0.5));
    opt.kmax_override = 0.55;  // not a multiple of d
    CHECK_THROWS_AS(preprocess(s, opt), validation_error);
}

TEST_CASE("preprocess is idempotent on its own output") {
    ExperimentSeries s;
    s.t = {0, 1, 2, 3, 4, 5};
    s.kappa = {0.0, 0.13, 0.27, 0.8, 0.74, 0.4};
    s.moment = {0, 1, 2, 3, 4, 5};
    QuantizedSeries q1 = preprocess(s, 0.2, false);

    ExperimentSeries round;
    round.t.resize(q1.kappa.size());
    for (std::size_t i = 0; i < round.t.size(); ++i) round.t[i] = static_cast<double>(i);
    round.kappa = q1.kappa;
    round.moment = q1.moment;
    QuantizedSeries q2 = preprocess(round, 0.2, false);
    CHECK(q2.kappa == q1.kappa);
    CHECK(q2.moment == q1.moment);
}

TEST_CASE("collapsing runs never changes the response at kept samples") {
    SplitMix64 rng(71);
    PreisachGrid g(0.2, 5);
    KernelVector k = make_truth(g, 5);
    ExperimentSeries s;
    int lvl = 0;
    for (int i = 0; i < 60; ++i) {
        lvl = std::max(0, std::min(5, lvl + static_cast<int>(rng.next() % 3) - 1));
        s.t.push_back(i);
        s.kappa.push_back(lvl * 0.2);
        s.moment.push_back(0.0);
    }
    QuantizedSeries q = preprocess(s, 0.2, false);
    std::vector<double> full = eval_discrete(g, k, s.kappa);
    std::vector<double> collapsed = eval_discrete(g, k, q.kappa);
    for (std::size_t i = 0; i < q.kappa.size(); ++i)
        CHECK(collapsed[i] == full[q.kept_index[i]]);
}

TEST_CASE("kernel documents round-trip to full precision and stable bytes") {
    PreisachGrid g(0.1, 3);
    KernelVector k = make_truth(g, 12345);
    KernelDocument doc{g, k, 7, 1e-10, 0.1234567890123456789, 3.3e-5};
    auto path = temp_file("kernel.json");
    export_kernel(doc, path);
    KernelDocument back = import_kernel(path);
    CHECK(back.grid == g);
    CHECK(back.kernel.x == k.x);
    CHECK(back.q == doc.q);
    CHECK(back.svd_tol == doc.svd_tol);
    CHECK(back.residual_rms == doc.residual_rms);
    CHECK(back.objective == doc.objective);

    auto path2 = temp_file("kernel2.json");
    export_kernel(back, path2);
    CHECK(slurp(path) == slurp(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("an empty trace exports a header-only CSV") {
    auto path = temp_file("empty_loop.csv");
    export_loop({}, path);
    CHECK(slurp(path) == "kappa,moment\n");
    std::filesystem::remove(path);
}

TEST_CASE("the heatmap has one row per cell") {
    PreisachGrid g(0.25, 4);
    auto path = temp_file("heatmap.csv");
    export_heatmap(g, KernelVector::zeros(g), path);
    std::string text = slurp(path);
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == g.cell_count() + 1);
    CHECK(text.rfind("cell_id,v0r,v0s,v1r,v1s,v2r,v2s,value\n", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("series survive an export/load round trip exactly") {
    SplitMix64 rng(72);
    ExperimentSeries s;
    for (int i = 0; i < 25; ++i) {
        s.t.push_back(i + rng.uniform());
        s.kappa.push_back(rng.uniform());
        s.moment.push_back(20.0 * rng.uniform() - 10.0);
    }
    auto path = temp_file("series.csv");
    export_series(s, path);
    ExperimentSeries back = load_csv(path);
    CHECK(back.t == s.t);
    CHECK(back.kappa == s.kappa);
    CHECK(back.moment == s.moment);
    std::filesystem::remove(path);
}

TEST_CASE("shortest representation parses back to the same double") {
    SplitMix64 rng(73);
    for (int i = 0; i < 2000; ++i) {
        double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.next() % 31) - 15);
        std::string text = format_double(v);
        double back = 0.0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), back);
        REQUIRE(res.ec == std::errc());
        CHECK(back == v);
    }
}

} // TEST_SUITE
