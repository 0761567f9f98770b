// Command-line driver for the experiment suite.  Exit code 0 on success, 2 on
// solver failure (a partial CSV is still written), 1 on configuration or I/O
// errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcfem/errors.hpp"
#include "bcfem/experiments.hpp"

namespace {

using namespace bcfem;

struct CommonOpts {
    std::string space = "lagrange";
    int degree = 2;
    std::string family = "radau";
    int stages = 2;
    std::string time_basis = "bernstein";
    std::string constrained = "vi";
    double dt = 0.0;
    double t_final = 0.0;
    int cells = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string params_file;
};

experiments::MethodSpec method_from(const CommonOpts& o) {
    experiments::MethodSpec m;
    m.spatial_flavor =
        o.space == "bernstein" ? fem1d::BasisFlavor::Bernstein : fem1d::BasisFlavor::Lagrange;
    m.spatial_degree = o.degree;
    if (o.family == "radau")
        m.family = tableau::CollocationFamily::RadauIIA;
    else if (o.family == "gauss")
        m.family = tableau::CollocationFamily::GaussLegendre;
    else
        m.family = tableau::CollocationFamily::LobattoIIIA;
    m.stages = o.stages;
    m.time_basis = o.time_basis == "bernstein" ? stage_system::TimeBasis::Bernstein
                                               : stage_system::TimeBasis::Lagrange;
    m.constrained = o.constrained == "vi";
    return m;
}

std::map<std::string, double> read_params_file(const std::string& path) {
    std::map<std::string, double> kv;
    if (path.empty()) return kv;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open parameter file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("malformed parameter line (expected key=value): " + line);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        try {
            kv[key] = std::stod(val);
        } catch (const std::exception&) {
            throw ConfigError("non-numeric value for " + key + ": " + val);
        }
    }
    return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v = it->second;
    kv.erase(it);
    return v;
}

void reject_leftovers(const std::map<std::string, double>& kv) {
    if (kv.empty()) return;
    std::ostringstream os;
    os << "unknown parameter keys:";
    for (const auto& [k, v] : kv) os << ' ' << k;
    throw ConfigError(os.str());
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--space", o.space)->check(CLI::IsMember({"lagrange", "bernstein"}));
    cmd->add_option("--degree", o.degree)->check(CLI::Range(1, 4));
    cmd->add_option("--family", o.family)->check(CLI::IsMember({"radau", "gauss", "lobatto"}));
    cmd->add_option("--stages", o.stages)->check(CLI::Range(1, 5));
    cmd->add_option("--time-basis", o.time_basis)
        ->check(CLI::IsMember({"lagrange", "bernstein"}));
    cmd->add_option("--constrained", o.constrained)->check(CLI::IsMember({"vp", "vi"}));
    cmd->add_option("--dt", o.dt);
    cmd->add_option("--tfinal", o.t_final);
    cmd->add_option("--cells", o.cells);
    cmd->add_option("--seed", o.seed);
    cmd->add_option("--out", o.out)->required();
    cmd->add_option("--params", o.params_file);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds-constrained collocation time integration experiments"};
    app.require_subcommand(1);

    CommonOpts phyto_o, conv_o, vios_o, ch_o;
    phyto_o.dt = 1.0;
    phyto_o.t_final = 20.0;
    phyto_o.time_basis = "lagrange";
    CLI::App* phyto_cmd = app.add_subcommand("phyto", "phytoplankton ODE run");
    add_common(phyto_cmd, phyto_o);

    conv_o.t_final = 1.0;
    CLI::App* conv_cmd = app.add_subcommand("heat-conv", "heat MMS convergence study");
    add_common(conv_cmd, conv_o);
    std::vector<int> conv_n = {4, 8, 16, 32, 64};
    conv_cmd->add_option("--cells-list", conv_n, "mesh sizes, k = 1/N pairing");

    vios_o.degree = 2;
    vios_o.dt = 0.125;
    vios_o.t_final = 1.0;
    vios_o.cells = 8;
    CLI::App* vios_cmd = app.add_subcommand("heat-vios", "dense-output violation scan");
    add_common(vios_cmd, vios_o);

    ch_o.space = "bernstein";
    ch_o.dt = 1e-4;
    ch_o.cells = 100;
    CLI::App* ch_cmd = app.add_subcommand("cahn-hilliard", "Cahn-Hilliard phase-field run");
    add_common(ch_cmd, ch_o);
    int ch_steps = 500;
    std::string ch_init = "sine", ch_boundary = "neumann";
    ch_cmd->add_option("--steps", ch_steps);
    ch_cmd->add_option("--init", ch_init)->check(CLI::IsMember({"sine", "random"}));
    ch_cmd->add_option("--boundary", ch_boundary)->check(CLI::IsMember({"neumann", "periodic"}));

    CLI11_PARSE(app, argc, argv);

    try {
        experiments::RunRecord rec;
        if (*phyto_cmd) {
            auto kv = read_params_file(phyto_o.params_file);
            problems::PhytoParams p;
            p.a = take(kv, "a", p.a);
            p.b = take(kv, "b", p.b);
            p.k_c = take(kv, "k_c", p.k_c);
            p.k_n = take(kv, "k_n", p.k_n);
            p.r_max = take(kv, "r_max", p.r_max);
            p.e = take(kv, "e", p.e);
            p.c0 = take(kv, "c0", p.c0);
            p.n0 = take(kv, "n0", p.n0);
            p.p0 = take(kv, "p0", p.p0);
            p.d0 = take(kv, "d0", p.d0);
            reject_leftovers(kv);
            rec = experiments::run_phyto(method_from(phyto_o), p, phyto_o.dt, phyto_o.t_final);
            experiments::emit_csv(rec, phyto_o.out);
        } else if (*conv_cmd) {
            reject_leftovers(read_params_file(conv_o.params_file));
            rec = experiments::run_heat_convergence(method_from(conv_o), conv_n);
            experiments::emit_csv(rec, conv_o.out);
        } else if (*vios_cmd) {
            reject_leftovers(read_params_file(vios_o.params_file));
            experiments::ViolationScan scan = experiments::run_violation_scan(
                method_from(vios_o), vios_o.cells, vios_o.dt, vios_o.t_final);
            experiments::emit_csv(scan.record, vios_o.out);
            rec = scan.record;
            std::cerr << "violations: " << scan.total_violations() << "\n";
        } else {
            auto kv = read_params_file(ch_o.params_file);
            problems::CahnHilliardParams p;
            p.theta0 = take(kv, "theta0", p.theta0);
            p.theta_c = take(kv, "theta_c", p.theta_c);
            p.epsilon = take(kv, "epsilon", p.epsilon);
            p.mobility = take(kv, "mobility", p.mobility);
            p.delta_reg = take(kv, "delta_reg", p.delta_reg);
            p.delta_b = take(kv, "delta_b", p.delta_b);
            reject_leftovers(kv);
            rec = experiments::run_cahn_hilliard(
                p, method_from(ch_o), ch_o.cells, ch_boundary == "periodic",
                ch_init == "random" ? experiments::ChInit::Random : experiments::ChInit::Sine,
                ch_o.seed, ch_o.dt, ch_steps);
            experiments::emit_csv(rec, ch_o.out);
        }
        if (!rec.completed) {
            std::cerr << "solver failure: " << rec.failure_reason << "\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
