#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bcfem/problems.hpp"
#include "bcfem/stage_system.hpp"

namespace bcfem::experiments {

// Method naming scheme P_r-RIIA(P_s)-{VP|VI}: spatial flavor/degree, time
// family/stages/basis, constrained or not.
struct MethodSpec {
    fem1d::BasisFlavor spatial_flavor = fem1d::BasisFlavor::Lagrange;
    int spatial_degree = 1;
    tableau::CollocationFamily family = tableau::CollocationFamily::RadauIIA;
    int stages = 2;
    stage_system::TimeBasis time_basis = stage_system::TimeBasis::Lagrange;
    bool constrained = true;

    std::string name() const;       // e.g. "B2-RIIA(B2)-VI"
    std::string time_name() const;  // e.g. "RIIA(B2)-VI", for ODE runs
};

// Per-step experiment trace plus run-level metadata; `aux` carries
// problem-specific per-step series that are not CSV columns.
struct RunRecord {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> metadata;  // emitted as '# key=value' lines
    bool completed = true;
    std::string failure_reason;
    std::map<std::string, std::vector<double>> aux;
};

// One implicit RK step: VI solve when constrained, plain Newton otherwise.
struct StepResult {
    linalg::Vector stages;
    linalg::Vector y_next;
    vi_solver::SolveReport report;
};
StepResult solve_step(const stage_system::SemidiscreteProblem& prob,
                      const stage_system::StepContext& ctx, bool constrained,
                      const vi_solver::NewtonSettings& settings);

// Phytoplankton run to time T with fixed step k; per-step component values,
// linear invariants, dense-output minimum over 200 tau samples plus the
// collocation nodes, and iteration counts.  aux: min_stage_C/N/P/D,
// min_dense_output, bounds_active.
RunRecord run_phyto(const MethodSpec& method, const problems::PhytoParams& params, double k,
                    double t_final);

// Heat MMS (smooth variant) convergence study with k = 1/N; one row per N:
// N, l2_error, h1_error, avg_newton_its.
RunRecord run_heat_convergence(const MethodSpec& method, const std::vector<int>& n_values);

// Dense-output violation scan on the front-variant heat problem.
struct ViolationScan {
    // [at_dof][at_collocation_time] counters over the full scan grid.
    long counts[2][2] = {{0, 0}, {0, 0}};
    double worst[2][2] = {{0, 0}, {0, 0}};
    RunRecord record;  // rows: step, tau, x, value, at_dof, at_colloc_time
    long total_violations() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
};
ViolationScan run_violation_scan(const MethodSpec& method, int n_cells = 8, double k = 0.125,
                                 double t_final = 1.0);

// Cahn-Hilliard run; per-step free energy, min/max c coefficient, total mass,
// iterations.  Solver failure or a logarithm singularity halts the run with a
// partial record.
enum class ChInit { Sine, Random };
RunRecord run_cahn_hilliard(const problems::CahnHilliardParams& params, const MethodSpec& method,
                            int n_cells, bool periodic, ChInit init, std::uint64_t seed, double k,
                            int n_steps);

// Deterministic CSV: '#'-prefixed metadata lines, a header row, one data row
// per step, 17 significant digits.
void emit_csv(const RunRecord& record, const std::string& path);

extern const char* kVersionString;

}  // namespace bcfem::experiments
