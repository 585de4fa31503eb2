#include "preisach/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "preisach/errors.hpp"

namespace preisach {

void ExperimentSeries::validate() const {
    if (t.size() != kappa.size() || t.size() != moment.size())
        throw validation_error("series columns must have equal length");
    if (t.empty())
        throw validation_error("series must contain at least one sample");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(kappa[i]) || !std::isfinite(moment[i]))
            throw validation_error("series values must be finite (sample " + std::to_string(i) + ")");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw validation_error("timestamps must be strictly increasing (sample " +
                                   std::to_string(i) + ")");
    }
}

namespace {

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_field(const std::string& field, const std::string& name, int row) {
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw validation_error("non-numeric " + name + " '" + field + "' at row " +
                               std::to_string(row));
    if (!std::isfinite(v))
        throw validation_error(name + " is not finite at row " + std::to_string(row));
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> row_numbers;  // 1-based file lines
};

CsvTable read_table(std::istream& in, const std::string& name) {
    CsvTable table;
    std::string line;
    int row = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++row;
        std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        if (!have_header) {
            table.header = split_csv(body);
            have_header = true;
            continue;
        }
        table.rows.push_back(split_csv(body));
        table.row_numbers.push_back(row);
    }
    if (!have_header)
        throw validation_error(name + ": missing header line");
    return table;
}

int column_of(const CsvTable& table, const std::string& name, const std::string& file) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == name) return static_cast<int>(i);
    throw validation_error(file + ": missing column '" + name + "'");
}

} // namespace

ExperimentSeries load_csv(std::istream& in, const std::string& name) {
    CsvTable table = read_table(in, name);
    const int ct = column_of(table, "t", name);
    const int ck = column_of(table, "kappa", name);
    const int cm = column_of(table, "moment", name);

    ExperimentSeries series;
    series.source = name;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& cells = table.rows[i];
        const int row = table.row_numbers[i];
        const int need = std::max({ct, ck, cm});
        if (static_cast<int>(cells.size()) <= need)
            throw validation_error(name + ": too few fields at row " + std::to_string(row));
        double t = parse_field(cells[ct], "t", row);
        if (!series.t.empty() && !(t > series.t.back()))
            throw validation_error(name + ": non-increasing time at row " + std::to_string(row));
        series.t.push_back(t);
        series.kappa.push_back(parse_field(cells[ck], "kappa", row));
        series.moment.push_back(parse_field(cells[cm], "moment", row));
    }
    series.validate();
    return series;
}

ExperimentSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path.string() + "'");
    return load_csv(in, path.string());
}

InputSeries load_inputs_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path.string() + "'");
    CsvTable table = read_table(in, path.string());
    const int ct = column_of(table, "t", path.string());
    const int ck = column_of(table, "kappa", path.string());
    int cm = -1;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == "moment") cm = static_cast<int>(i);

    InputSeries out;
    if (cm >= 0) out.moment.emplace();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& cells = table.rows[i];
        const int row = table.row_numbers[i];
        const int need = std::max({ct, ck, cm});
        if (static_cast<int>(cells.size()) <= need)
            throw validation_error(path.string() + ": too few fields at row " + std::to_string(row));
        double t = parse_field(cells[ct], "t", row);
        if (!out.t.empty() && !(t > out.t.back()))
            throw validation_error(path.string() + ": non-increasing time at row " +
                                   std::to_string(row));
        out.t.push_back(t);
        out.kappa.push_back(parse_field(cells[ck], "kappa", row));
        if (cm >= 0) out.moment->push_back(parse_field(cells[cm], "moment", row));
    }
    if (out.t.empty())
        throw validation_error(path.string() + ": no data rows");
    return out;
}

QuantizedSeries preprocess(const ExperimentSeries& series, const PreprocessOptions& opt) {
    series.validate();
    if (!(opt.d > 0.0))
        throw validation_error("quantization step d must be positive");

    std::vector<double> k = series.kappa;
    if (opt.offset) {
        double kmin = *std::min_element(k.begin(), k.end());
        for (double& v : k) v -= kmin;
    }

    int m;
    if (opt.kmax_override) {
        double q = *opt.kmax_override / opt.d;
        m = static_cast<int>(std::llround(q));
        if (m < 1 || std::abs(*opt.kmax_override - m * opt.d) > 1e-9 * opt.d)
            throw validation_error("kmax override must be a positive multiple of d");
    } else {
        double kmaxraw = *std::max_element(k.begin(), k.end());
        m = std::max(1, static_cast<int>(std::ceil(kmaxraw / opt.d - 1e-9)));
    }
    PreisachGrid grid(opt.d, m);

    QuantizedSeries out{grid, {}, {}, {}};
    for (std::size_t i = 0; i < k.size(); ++i) {
        double q = opt.clamp ? quantize_clamped(k[i], grid) : quantize(k[i], grid);
        if (!out.kappa.empty() && q == out.kappa.back()) {
            out.moment.back() = series.moment[i];  // settled value of the run
            out.kept_index.back() = i;
        } else {
            out.kappa.push_back(q);
            out.moment.push_back(series.moment[i]);
            out.kept_index.push_back(i);
        }
    }
    return out;
}

QuantizedSeries preprocess(const ExperimentSeries& series, double d, bool offset_mode) {
    PreprocessOptions opt;
    opt.d = d;
    opt.offset = offset_mode;
    return preprocess(series, opt);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

KernelDocument to_document(const PreisachGrid& grid, const FitReport& report) {
    return KernelDocument{grid, report.x_star, report.q, report.svd_tol,
                          report.residual_rms, report.objective};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw io_error("write failed for '" + path.string() + "'");
}

} // namespace

void export_kernel(const KernelDocument& doc, const std::filesystem::path& path) {
    doc.kernel.validate(doc.grid);
    nlohmann::json j;
    j["grid"]["d"] = doc.grid.d();
    j["grid"]["m"] = doc.grid.m();
    j["grid"]["kmax"] = doc.grid.kmax();
    j["cells"] = std::vector<double>(doc.kernel.x.begin(), doc.kernel.x.end() - 1);
    j["c"] = doc.kernel.c();
    j["q"] = doc.q;
    j["svd_tol"] = doc.svd_tol;
    j["residual_rms"] = doc.residual_rms;
    j["objective"] = doc.objective;
    write_file(path, j.dump(2) + "\n");
}

KernelDocument import_kernel(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(path.string() + ": " + e.what());
    }
    try {
        PreisachGrid grid(j.at("grid").at("d").get<double>(), j.at("grid").at("m").get<int>());
        double kmax = j.at("grid").at("kmax").get<double>();
        if (std::abs(kmax - grid.kmax()) > 1e-9 * grid.kmax())
            throw validation_error(path.string() + ": kmax does not equal m*d");
        KernelDocument doc{grid, KernelVector{}, j.at("q").get<int>(),
                           j.at("svd_tol").get<double>(), j.at("residual_rms").get<double>(),
                           j.at("objective").get<double>()};
        doc.kernel.x = j.at("cells").get<std::vector<double>>();
        doc.kernel.x.push_back(j.at("c").get<double>());
        doc.kernel.validate(grid);
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(path.string() + ": " + e.what());
    }
}

void export_loop(const std::vector<LoopPoint>& trace, const std::filesystem::path& path) {
    std::string text = "kappa,moment\n";
    for (const LoopPoint& p : trace)
        text += format_double(p.kappa) + "," + format_double(p.moment) + "\n";
    write_file(path, text);
}

void export_heatmap(const PreisachGrid& grid, const KernelVector& kernel,
                    const std::filesystem::path& path) {
    kernel.validate(grid);
    std::string text = "cell_id,v0r,v0s,v1r,v1s,v2r,v2s,value\n";
    for (int id = 1; id <= grid.cell_count(); ++id) {
        CellTriangle tri = cell_geometry(grid, id);
        text += std::to_string(id);
        for (const auto& v : tri.vertex)
            text += "," + format_double(v[0]) + "," + format_double(v[1]);
        text += "," + format_double(kernel.cell(id)) + "\n";
    }
    write_file(path, text);
}

void export_series(const ExperimentSeries& series, const std::filesystem::path& path) {
    series.validate();
    std::string text = "t,kappa,moment\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        text += format_double(series.t[i]) + "," + format_double(series.kappa[i]) + "," +
                format_double(series.moment[i]) + "\n";
    write_file(path, text);
}

} // namespace preisach
