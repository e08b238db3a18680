#include "masslab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace masslab {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<double> coefficient_array(const json& entry, int n_e, const std::string& what) {
    if (entry.is_number()) return std::vector<double>(n_e, entry.get<double>());
    if (entry.is_array()) {
        std::vector<double> v = entry.get<std::vector<double>>();
        if (static_cast<int>(v.size()) == 1) return std::vector<double>(n_e, v[0]);
        if (static_cast<int>(v.size()) != n_e)
            throw std::invalid_argument("problem: " + what + " must have n_e entries");
        return v;
    }
    throw std::invalid_argument("problem: " + what + " must be a number or an array");
}

} // namespace

std::string problem_to_json(const ProblemSpec& spec, const DensityField* rho) {
    json doc;
    doc["L"] = spec.L;
    doc["m"] = spec.m;
    doc["k"] = spec.k;
    doc["n_e"] = spec.n_e;
    doc["p"] = spec.p;
    doc["b"] = spec.b;
    doc["A"] = spec.A;
    if (rho) doc["rho"] = rho->values;
    return doc.dump(2) + "\n";
}

ProblemSpec problem_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("problem: invalid JSON: ") + err.what());
    }
    ProblemSpec spec;
    try {
        spec.L = doc.at("L").get<double>();
        spec.m = doc.at("m").get<int>();
        spec.k = doc.at("k").get<int>();
        spec.n_e = doc.at("n_e").get<int>();
        spec.p = doc.value("p", spec.m + 2);
        if (doc.contains("A")) {
            const json& a = doc["A"];
            if (!a.is_array() || static_cast<int>(a.size()) != spec.m + 1)
                throw std::invalid_argument("problem: A must list m+1 coefficient arrays");
            for (int d = 0; d <= spec.m; ++d)
                spec.A.push_back(coefficient_array(a[d], spec.n_e, "A_" + std::to_string(d)));
        } else {
            spec.A.assign(spec.m + 1, std::vector<double>(spec.n_e, 0.0));
            spec.A[spec.m].assign(spec.n_e, 1.0);
        }
        spec.b = doc.contains("b") ? doc.at("b").get<double>() : default_shift(spec);
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("problem: ") + err.what());
    }
    validate_problem(spec);
    return spec;
}

ProblemSpec load_problem(const std::string& path) { return problem_from_json_text(read_text_file(path)); }

std::string density_to_json(const DensityField& rho) {
    json doc;
    doc["rho"] = rho.values;
    return doc.dump(2) + "\n";
}

DensityField density_from_json_text(const ProblemSpec& spec, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("density: invalid JSON: ") + err.what());
    }
    std::vector<double> values;
    if (doc.is_array())
        values = doc.get<std::vector<double>>();
    else if (doc.contains("rho"))
        values = doc["rho"].get<std::vector<double>>();
    else
        throw std::invalid_argument("density: expected {\"rho\": [...]} or a bare array");
    DensityField rho = density_from_values(spec, std::move(values));
    if (!(rho.min_value() > 0.0)) throw std::invalid_argument("density: values must be strictly positive");
    return rho;
}

DensityField resolve_density(const ProblemSpec& spec, const std::string& problem_json_text,
                             const std::string& option) {
    if (option.rfind("uniform:", 0) == 0) {
        const double v = std::stod(option.substr(8));
        if (!(v > 0.0)) throw std::invalid_argument("density: uniform value must be positive");
        return uniform_density(spec, v);
    }
    if (!option.empty()) return density_from_json_text(spec, read_text_file(option));
    const json doc = json::parse(problem_json_text);
    if (doc.contains("rho")) return density_from_json_text(spec, doc["rho"].dump());
    return uniform_density(spec, 1.0);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    write_text_file(path, out.str());
}

void write_report_csv(const std::string& path, const ExperimentReport& report) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(report.rows.size());
    for (const auto& r : report.rows)
        rows.push_back({r.param, format_double(r.observed), format_double(r.reference), format_double(r.margin),
                        r.pass ? "1" : "0"});
    write_csv(path, {"param", "observed", "reference", "margin", "pass"}, rows);
}

} // namespace masslab
