#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "preisach/identify.hpp"
#include "preisach/operator.hpp"
#include "preisach/plane.hpp"

namespace preisach {

/// Raw (t, kappa, moment) record of a cyclic bending run.
struct ExperimentSeries {
    std::vector<double> t;       // seconds, strictly increasing
    std::vector<double> kappa;   // curvature, 1/m
    std::vector<double> moment;  // N*m
    std::string source;

    std::size_t size() const { return t.size(); }
    void validate() const;
};

/// Quantized, run-collapsed view of a series together with its grid.
struct QuantizedSeries {
    PreisachGrid grid;
    std::vector<double> kappa;            // grid multiples, no consecutive repeats
    std::vector<double> moment;           // last raw moment of each constant run
    std::vector<std::size_t> kept_index;  // raw index the sample was taken from
};

/// Parse a `t,kappa,moment` CSV. Lines starting with '#' are comments; extra
/// trailing columns are ignored. Errors carry the 1-based file row.
ExperimentSeries load_csv(const std::filesystem::path& path);
ExperimentSeries load_csv(std::istream& in, const std::string& name);

/// Curvature CSV for prediction: `t,kappa` with an optional `moment` column.
struct InputSeries {
    std::vector<double> t;
    std::vector<double> kappa;
    std::optional<std::vector<double>> moment;
};
InputSeries load_inputs_csv(const std::filesystem::path& path);

struct PreprocessOptions {
    double d = 0.0;
    bool offset = false;                 // shift kappa so its minimum maps to 0
    std::optional<double> kmax_override; // fixed ceiling instead of the data maximum
    bool clamp = false;                  // saturate out-of-range values instead of failing
};

/// Quantize with tolerance d and collapse runs of equal quantized values,
/// keeping the last raw moment of each run. The grid ceiling snaps the
/// observed maximum up to the next level unless overridden.
QuantizedSeries preprocess(const ExperimentSeries& series, const PreprocessOptions& opt);
QuantizedSeries preprocess(const ExperimentSeries& series, double d, bool offset_mode);

/// Fitted (or synthetic ground-truth) kernel with its grid and fit metadata.
struct KernelDocument {
    PreisachGrid grid;
    KernelVector kernel;
    int q = 0;
    double svd_tol = 0.0;
    double residual_rms = 0.0;
    double objective = 0.0;
};

KernelDocument to_document(const PreisachGrid& grid, const FitReport& report);

/// JSON export/import of a kernel document; see docs/kernel-format.md.
/// Numbers print in shortest round-trip form, so export is byte-stable and
/// import reproduces every double exactly.
void export_kernel(const KernelDocument& doc, const std::filesystem::path& path);
KernelDocument import_kernel(const std::filesystem::path& path);

/// CSV writers. Loops are `kappa,moment`; the heatmap lists each cell's
/// vertices and value; series round-trip through load_csv.
void export_loop(const std::vector<LoopPoint>& trace, const std::filesystem::path& path);
void export_heatmap(const PreisachGrid& grid, const KernelVector& kernel,
                    const std::filesystem::path& path);
void export_series(const ExperimentSeries& series, const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace preisach
