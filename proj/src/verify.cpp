#include "masslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "masslab/analysis.hpp"
#include "masslab/io.hpp"
#include "masslab/optimize.hpp"
#include "masslab/spectrum.hpp"

namespace masslab {

namespace {

const double kPi = 3.14159265358979323846;

ProblemSpec cell_problem(int m, int k, int n_e) {
    ProblemSpec spec;
    spec.L = 1.0;
    spec.m = m;
    spec.k = k;
    spec.n_e = n_e;
    spec.p = m + 2;
    spec.A.assign(m + 1, std::vector<double>(n_e, 0.0));
    spec.A[m].assign(n_e, 1.0);
    spec.b = default_shift(spec);
    return spec;
}

DensityField wavy_density(const ProblemSpec& spec) {
    const std::vector<double> mid = element_midpoints(spec);
    std::vector<double> values(spec.n_e);
    for (int e = 0; e < spec.n_e; ++e) values[e] = 1.0 + 0.25 * std::sin(2.0 * kPi * mid[e] / spec.L);
    return density_from_values(spec, values);
}

// Shift and block identities over the computed spectrum; the fault flag flips
// the sign of the shift terms, which must make the check fail.
ExperimentReport identities_check(const ProblemSpec& spec, const DensityField& rho, bool break_comb) {
    ExperimentReport report;
    report.name = "identities";
    const SpectralDecomposition dec = eigenvalues(spec, rho, 8);

    for (int size = 1; size <= 4; ++size) {
        std::vector<double> values(dec.lambdas.begin(), dec.lambdas.begin() + size);
        for (int h = 1; h <= size; ++h) {
            for (double b : {spec.b, 1.0, 10.0}) {
                double direct, via;
                if (!break_comb) {
                    const auto sides = shift_identity_check(values, b, h);
                    direct = sides.first;
                    via = sides.second;
                } else {
                    // faulty rendering: (+b)^{h-k} instead of (-b)^{h-k}
                    direct = elementary_symmetric(values, h);
                    std::vector<double> shifted(values);
                    for (double& v : shifted) v += b;
                    via = 0.0;
                    for (int kk = 0; kk <= h; ++kk)
                        via += std::pow(b, h - kk) * static_cast<double>(binomial(size - kk, h - kk)) *
                               elementary_symmetric(shifted, kk);
                }
                const double scale = std::max({1.0, std::abs(direct), std::abs(via)});
                const double rel = std::abs(direct - via) / scale;
                report.rows.push_back(ExperimentRow{"comb |F|=" + std::to_string(size) + " h=" +
                                                        std::to_string(h) + " b=" + format_double(b),
                                                    rel, 1e-10, 1e-10 - rel, rel <= 1e-10});
            }

            // block factorization over a split of the same index window
            for (int cut = 1; cut < size; ++cut) {
                std::vector<std::vector<double>> blocks{
                    std::vector<double>(values.begin(), values.begin() + cut),
                    std::vector<double>(values.begin() + cut, values.end())};
                const auto sides = block_identity_check(blocks, h);
                const double scale = std::max({1.0, std::abs(sides.first), std::abs(sides.second)});
                const double rel = std::abs(sides.first - sides.second) / scale;
                report.rows.push_back(ExperimentRow{"blocks |F|=" + std::to_string(size) + " h=" +
                                                        std::to_string(h) + " cut=" + std::to_string(cut),
                                                    rel, 1e-10, 1e-10 - rel, rel <= 1e-10});
            }
        }
    }
    return report;
}

ExperimentReport homogeneity_check(const ProblemSpec& spec, const DensityField& rho, int count) {
    ExperimentReport report;
    report.name = "homogeneity";
    // tolerance sized for the quartic pencil at this mesh: the eigensolver's
    // absolute noise scales with the top discrete eigenvalue
    const double tol = 1e-8;
    const SpectralDecomposition base = eigenvalues(spec, rho, count);
    for (double t : {0.5, 2.0, 7.0}) {
        std::vector<double> scaled(rho.values);
        for (double& v : scaled) v *= t;
        const SpectralDecomposition dec = eigenvalues(spec, density_from_values(spec, scaled), count);
        for (int n = 1; n <= count; ++n) {
            const double lhs = t * dec.lambdas[n - 1];
            const double ref = base.lambdas[n - 1];
            const double rel = std::abs(lhs - ref) / std::max(1.0, std::abs(ref));
            report.rows.push_back(ExperimentRow{"t=" + format_double(t) + " n=" + std::to_string(n), lhs, ref,
                                                tol - rel, rel <= tol});
        }
    }
    return report;
}

} // namespace

bool VerifySummary::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

std::string summary_to_json(const VerifySummary& summary) {
    nlohmann::json doc;
    doc["all_pass"] = summary.all_pass();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : summary.checks) {
        nlohmann::json item;
        item["name"] = c.name;
        item["pass"] = c.pass;
        item["worst_margin"] = c.worst_margin;
        arr.push_back(item);
    }
    doc["checks"] = arr;
    return doc.dump(2) + "\n";
}

VerifySummary run_verify(const VerifyOptions& options) {
    if (options.cells.empty()) throw std::invalid_argument("verify: empty problem matrix");
    if (options.out_dir.empty()) throw std::invalid_argument("verify: output directory required");
    std::filesystem::create_directories(options.out_dir);

    VerifySummary summary;
    auto record = [&](const std::string& cell, const ExperimentReport& report) {
        const std::string name = cell + "_" + report.name;
        write_report_csv(options.out_dir + "/" + name + ".csv", report);
        summary.checks.push_back(VerifyCheck{name, report.pass(), report.worst_margin()});
    };

    int cell_index = 0;
    for (const auto& [m, k] : options.cells) {
        const std::string cell = "m" + std::to_string(m) + "k" + std::to_string(k);
        const std::uint64_t seed = options.seed + 1000ull * cell_index;
        ++cell_index;

        const ProblemSpec spec = cell_problem(m, k, 64);
        const DensityField rho = wavy_density(spec);

        record(cell, lipschitz_random_pairs(spec, 6, 50, seed + 1));

        const ProblemSpec fine = cell_problem(m, k, 256);
        record(cell, weakstar_experiment(fine, uniform_density(fine, 1.0), 0.5, {2, 4, 8, 16, 32}).report);

        record(cell, auchmuty_check(spec, rho, 10, 100, seed + 2));
        record(cell, garding_lower_bound(spec, rho, 10));

        ProblemSpec shifted = spec;
        shifted.b = 1.0;
        record(cell, t_rho_crosscheck(shifted, rho, 10));

        record(cell, identities_check(spec, rho, options.break_comb));
        record(cell, homogeneity_check(spec, rho, 10));

        const BoxConstraint box = BoxConstraint::uniform(spec.n_e, 0.5, 2.0);
        const MassConstraint mass{1.2 * spec.L};
        record(cell, interior_scan(spec, box, mass, {1}, 1, 20, seed + 3));
    }

    write_text_file(options.out_dir + "/summary.json", summary_to_json(summary));
    return summary;
}

} // namespace masslab
