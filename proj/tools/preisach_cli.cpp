// Command-line front end: fit a kernel from a measured CSV, reconstruct
// moment traces from a kernel, demo the relay, and generate synthetic
// benchmark datasets. Output is plot-ready CSV/JSON; reports go to stdout
// as key=value lines.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "preisach/dataio.hpp"
#include "preisach/errors.hpp"
#include "preisach/identify.hpp"
#include "preisach/operator.hpp"
#include "preisach/relay.hpp"
#include "preisach/synth.hpp"

namespace {

using namespace preisach;

constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitConvergence = 4;

struct FitArgs {
    std::string input, output, heatmap;
    double d = 0.0;
    std::optional<double> kmax;
    double svd_tol = 1e-10;
    bool nonneg = false;
    bool offset = false;
    bool clamp = false;
    int folds = 0;
};

int run_fit(const FitArgs& args) {
    if (!(args.d > 0.0))
        throw validation_error("--d must be positive");
    ExperimentSeries series = load_csv(args.input);

    PreprocessOptions opt;
    opt.d = args.d;
    opt.offset = args.offset;
    opt.clamp = args.clamp;
    opt.kmax_override = args.kmax;
    QuantizedSeries qs = preprocess(series, opt);

    IdentificationSystem sys = assemble(qs.grid, qs.kappa, qs.moment);
    FitReport fit = args.nonneg ? solve_nonneg(sys, args.svd_tol) : solve(sys, args.svd_tol);

    export_kernel(to_document(qs.grid, fit), args.output);
    if (!args.heatmap.empty()) export_heatmap(qs.grid, fit.x_star, args.heatmap);

    std::cout << "T=" << sys.t() << "\n";
    std::cout << "n=" << sys.n() << "\n";
    std::cout << "q=" << fit.q << "\n";
    std::cout << "residual_rms=" << format_double(fit.residual_rms) << "\n";
    std::cout << "objective=" << format_double(fit.objective) << "\n";
    if (args.nonneg) {
        std::cout << "converged=" << (fit.converged ? 1 : 0) << "\n";
        std::cout << "kkt_residual=" << format_double(fit.kkt_residual) << "\n";
    }
    if (args.folds >= 2) {
        std::vector<double> cv = cross_validate(sys, args.folds, args.svd_tol);
        for (std::size_t k = 0; k < cv.size(); ++k)
            std::cout << "cv_rms_" << k << "=" << format_double(cv[k]) << "\n";
    }
    if (args.nonneg && !fit.converged) {
        std::cerr << "active-set iteration cap reached; best iterate written\n";
        return kExitConvergence;
    }
    return 0;
}

struct PredictArgs {
    std::string kernel, input, output;
    std::optional<double> d;
    bool clamp = false;
};

int run_predict(const PredictArgs& args) {
    KernelDocument doc = import_kernel(args.kernel);
    if (args.d && std::abs(*args.d - doc.grid.d()) > 1e-9 * doc.grid.d())
        throw validation_error("--d does not match the kernel grid (kernel d=" +
                               format_double(doc.grid.d()) + ")");

    InputSeries in = load_inputs_csv(args.input);
    std::vector<double> kq;
    kq.reserve(in.kappa.size());
    for (double v : in.kappa)
        kq.push_back(args.clamp ? quantize_clamped(v, doc.grid) : quantize(v, doc.grid));

    std::vector<double> pred = eval_discrete(doc.grid, doc.kernel, kq);
    std::vector<LoopPoint> trace(kq.size());
    for (std::size_t i = 0; i < kq.size(); ++i) trace[i] = {kq[i], pred[i]};
    export_loop(trace, args.output);

    std::cout << "T=" << kq.size() << "\n";
    if (in.moment) {
        double ss = 0.0;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            double r = (*in.moment)[i] - pred[i];
            ss += r * r;
        }
        std::cout << "rms_error=" << format_double(std::sqrt(ss / pred.size())) << "\n";
    }
    return 0;
}

struct RelayArgs {
    std::string output;
    double a1 = -0.3;
    double a2 = 0.2;
    int xi0 = 1;
    double tmax = 10.0;
    int samples = 10000;
};

int run_relay_demo(const RelayArgs& args) {
    if (args.samples < 2)
        throw validation_error("--samples must be at least 2");
    RelayConfig cfg{args.a1, args.a2, args.xi0};
    cfg.validate();

    std::vector<double> t(static_cast<std::size_t>(args.samples));
    std::vector<double> v(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        t[k] = args.tmax * static_cast<double>(k) / (args.samples - 1);
        v[k] = std::sin(t[k]);
    }
    std::vector<int> w = relay_trajectory(cfg, v);

    std::string text = "t,v,w\n";
    for (std::size_t k = 0; k < t.size(); ++k)
        text += format_double(t[k]) + "," + format_double(v[k]) + "," + std::to_string(w[k]) + "\n";
    if (args.output.empty() || args.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(args.output, std::ios::binary);
        if (!out)
            throw io_error("cannot write '" + args.output + "'");
        out << text;
    }

    int switches = 0;
    for (std::size_t k = 1; k < w.size(); ++k)
        if (w[k] != w[k - 1]) ++switches;
    std::cerr << "switches=" << switches << "\n";
    return 0;
}

struct SynthArgs {
    std::string output, truth;
    double d = 0.1;
    int m = 10;
    std::uint64_t seed = 0;
    double noise = 0.0;
    int samples = 0;
    std::string program = "forc";
    double scale = 1.0;
};

int run_synth(const SynthArgs& args) {
    if (!(args.d > 0.0))
        throw validation_error("--d must be positive");
    PreisachGrid grid(args.d, args.m);
    KernelVector truth = make_truth(grid, args.seed, args.scale);

    InputProgram program;
    if (args.program == "forc") {
        program = forc_program(grid);
    } else {
        std::stringstream ss(args.program);
        std::string tok;
        while (std::getline(ss, tok, ','))
            program.turning_points.push_back(std::stod(tok));
        if (program.turning_points.empty())
            throw validation_error("--program needs 'forc' or a comma-separated point list");
    }
    program.samples_per_branch = args.samples;

    ExperimentSeries series = simulate(grid, truth, program, args.noise, args.seed);
    export_series(series, args.output);
    if (!args.truth.empty())
        export_kernel(KernelDocument{grid, truth, 0, 0.0, 0.0, 0.0}, args.truth);

    std::cout << "T=" << series.size() << "\n";
    std::cout << "n=" << grid.unknown_count() << "\n";
    std::cout << "kmax=" << format_double(grid.kmax()) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preisach hysteresis modeling and kernel identification"};
    app.require_subcommand(1);

    FitArgs fit;
    CLI::App* cfit = app.add_subcommand("fit", "identify a kernel from a t,kappa,moment CSV");
    cfit->add_option("--input", fit.input, "measured CSV")->required();
    cfit->add_option("--output", fit.output, "kernel JSON path")->required();
    cfit->add_option("--heatmap", fit.heatmap, "also write a per-cell heatmap CSV");
    cfit->add_option("--d", fit.d, "curvature quantization step")->required();
    cfit->add_option("--kmax", fit.kmax, "fixed input ceiling (multiple of d)");
    cfit->add_option("--svd-tol", fit.svd_tol, "relative rank threshold")->capture_default_str();
    cfit->add_flag("--nonneg", fit.nonneg, "constrain cell values to be nonnegative");
    cfit->add_flag("--offset", fit.offset, "shift curvature so its minimum maps to 0");
    cfit->add_flag("--clamp", fit.clamp, "saturate out-of-range curvature");
    cfit->add_option("--folds", fit.folds, "contiguous cross-validation folds");

    PredictArgs predict;
    CLI::App* cpred = app.add_subcommand("predict", "evaluate a kernel on a curvature CSV");
    cpred->add_option("--kernel", predict.kernel, "kernel JSON")->required();
    cpred->add_option("--input", predict.input, "t,kappa[,moment] CSV")->required();
    cpred->add_option("--output", predict.output, "loop CSV path")->required();
    cpred->add_option("--d", predict.d, "expected grid step, checked against the kernel");
    cpred->add_flag("--clamp", predict.clamp, "saturate out-of-range curvature");

    RelayArgs relay;
    CLI::App* crelay = app.add_subcommand("relay-demo", "relay response to v(t)=sin(t)");
    crelay->add_option("--output", relay.output, "t,v,w CSV path ('-' = stdout)");
    crelay->add_option("--a1", relay.a1, "lower threshold")->capture_default_str();
    crelay->add_option("--a2", relay.a2, "upper threshold")->capture_default_str();
    crelay->add_option("--xi0", relay.xi0, "initial state, -1 or +1")->capture_default_str();
    crelay->add_option("--tmax", relay.tmax, "time horizon")->capture_default_str();
    crelay->add_option("--samples", relay.samples, "sample count")->capture_default_str();

    SynthArgs synth;
    CLI::App* csynth = app.add_subcommand("synth", "synthetic dataset with known kernel");
    csynth->add_option("--output", synth.output, "dataset CSV path")->required();
    csynth->add_option("--truth", synth.truth, "ground-truth kernel JSON path");
    csynth->add_option("--d", synth.d, "grid step")->capture_default_str();
    csynth->add_option("--m", synth.m, "level count")->capture_default_str();
    csynth->add_option("--seed", synth.seed, "random seed")->capture_default_str();
    csynth->add_option("--noise", synth.noise, "gaussian noise RMS")->capture_default_str();
    csynth->add_option("--samples", synth.samples, "samples per branch (0 = per level)")
        ->capture_default_str();
    csynth->add_option("--program", synth.program, "'forc' or comma-separated turning points")
        ->capture_default_str();
    csynth->add_option("--scale", synth.scale, "kernel magnitude")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (cfit->parsed()) return run_fit(fit);
        if (cpred->parsed()) return run_predict(predict);
        if (crelay->parsed()) return run_relay_demo(relay);
        if (csynth->parsed()) return run_synth(synth);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
