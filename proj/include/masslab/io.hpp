#pragma once

#include <string>
#include <vector>

#include "masslab/analysis.hpp"
#include "masslab/problem.hpp"

namespace masslab {

/// Fixed shortest-faithful-ish rendering used for every numeric artifact so
/// repeated runs are byte-identical.
std::string format_double(double v);

/// Problem document: {L, m, k, n_e, p, b, A: [[...]...], rho: [...]}.
/// A entries may be scalars (broadcast over elements); p defaults to m+2, b to
/// the coercivity-based default, A to the polyharmonic coefficients. rho is
/// optional.
std::string problem_to_json(const ProblemSpec& spec, const DensityField* rho);
ProblemSpec problem_from_json_text(const std::string& text);
ProblemSpec load_problem(const std::string& path);

/// Density document {rho: [...]} (or a bare array).
std::string density_to_json(const DensityField& rho);
DensityField density_from_json_text(const ProblemSpec& spec, const std::string& text);

/// Either "uniform:<value>" or a path to a density document. An empty option
/// falls back to the problem document's rho, or uniform 1.
DensityField resolve_density(const ProblemSpec& spec, const std::string& problem_json_text,
                             const std::string& option);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// CSV with a header row; all cells pre-rendered.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Report rows as CSV (param, observed, reference, margin, pass).
void write_report_csv(const std::string& path, const ExperimentReport& report);

} // namespace masslab
