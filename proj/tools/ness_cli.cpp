// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nessmpa/nessmpa.hpp"

namespace {

using nessmpa::cplx;
using json = nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInvalidInput = 2;

cplx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return cplx(std::stod(text), 0.0);
        return cplx(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected a number or re,im pair, got '" + text + "'");
    }
}

std::string show_complex(cplx v) {
    std::ostringstream os;
    os << std::setprecision(17) << v.real();
    if (v.imag() != 0.0) os << (v.imag() >= 0.0 ? "+" : "") << v.imag() << "i";
    return os.str();
}

struct Config {
    std::string regime = "epr";
    int n_sites = 5;
    std::optional<double> eta;
    std::optional<std::string> q_text;
    std::optional<double> lambda_log;
    std::optional<double> lambda_phase;
    std::optional<std::string> z_text;
    std::optional<double> z_theta;
    std::optional<double> z_phi;
    std::optional<std::string> w_text;
    bool w_resonant = false;
    bool helix = false;
    int kink = 0;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> gamma;
    std::string json_path;
};

void add_common_flags(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--regime", cfg.regime, "Parameter regime: epr (|q|=1, real lambda) or ear (real q, |lambda|=1)")
        ->check(CLI::IsMember({"epr", "ear"}))
        ->capture_default_str();
    cmd->add_option("--n", cfg.n_sites, "Chain length (odd)")->capture_default_str();
    auto* eta = cmd->add_option("--eta", cfg.eta, "Anisotropy phase, sets q = exp(i eta) [default 0.3 in epr]");
    auto* q = cmd->add_option("--q", cfg.q_text, "Anisotropy parameter q as re[,im] [default exp(0.62) in ear]");
    eta->excludes(q);
    auto* llog = cmd->add_option("--lambda-log", cfg.lambda_log,
                                 "Log of the interaction parameter, lambda = exp(s) [epr, default 0.9]");
    auto* lphase = cmd->add_option("--lambda-phase", cfg.lambda_phase,
                                   "Phase of the interaction parameter, lambda = exp(i phi) [ear, default 0.8]");
    llog->excludes(lphase);
    auto* z = cmd->add_option("--z", cfg.z_text, "Left reset coordinate as re[,im] [default 1]");
    auto* zt = cmd->add_option("--z-theta", cfg.z_theta, "Left reset polar angle; z = tan(theta/2) exp(i phi)");
    auto* zp = cmd->add_option("--z-phi", cfg.z_phi, "Left reset azimuth; use with --z-theta");
    z->excludes(zt)->excludes(zp);
    zt->needs(zp);
    zp->needs(zt);
    auto* w = cmd->add_option("--w", cfg.w_text, "Right reset coordinate as re[,im]");
    auto* wres = cmd->add_flag("--w-resonant", cfg.w_resonant, "Set w = z lambda");
    auto* whelix = cmd->add_flag("--helix", cfg.helix,
                                 "Set w = q^(n+1-2k) lambda z, the pure-helix drive (k from --kink)");
    cmd->add_option("--kink", cfg.kink, "Domain-wall count for --helix")->capture_default_str();
    auto* al = cmd->add_option("--alpha", cfg.alpha, "Hybrid drive: first Euler angle of the edge unitary");
    auto* be = cmd->add_option("--beta", cfg.beta, "Hybrid drive: tilt Euler angle of the edge unitary");
    auto* ga = cmd->add_option("--gamma", cfg.gamma, "Hybrid drive: last Euler angle of the edge unitary");
    w->excludes(wres)->excludes(whelix)->excludes(al);
    wres->excludes(whelix)->excludes(al);
    whelix->excludes(al);
    al->needs(be)->needs(ga);
    be->needs(al);
    ga->needs(al);
    cmd->add_option("--json", cfg.json_path, "Write a JSON summary sidecar to this path");
}

nessmpa::CircuitParams build_params(const Config& cfg) {
    using namespace nessmpa;
    const bool epr = cfg.regime == "epr";
    cplx q;
    if (cfg.eta)
        q = std::exp(cplx(0.0, *cfg.eta));
    else if (cfg.q_text)
        q = parse_complex(*cfg.q_text);
    else
        q = epr ? std::exp(cplx(0.0, 0.3)) : cplx(std::exp(0.62));
    cplx lambda;
    if (cfg.lambda_log)
        lambda = std::exp(*cfg.lambda_log);
    else if (cfg.lambda_phase)
        lambda = std::exp(cplx(0.0, *cfg.lambda_phase));
    else
        lambda = epr ? cplx(std::exp(0.9)) : std::exp(cplx(0.0, 0.8));

    cplx z(1.0);
    if (cfg.z_text) {
        z = parse_complex(*cfg.z_text);
    } else if (cfg.z_theta) {
        const double half = 0.5 * *cfg.z_theta;
        if (std::abs(std::cos(half)) < 1e-12)
            throw InvalidParameter("z-theta at the south pole has no finite chart coordinate");
        z = std::tan(half) * std::exp(cplx(0.0, *cfg.z_phi));
    }

    Drive drive{};
    if (cfg.alpha) {
        drive = HybridDrive{z, EulerAngles{*cfg.alpha, *cfg.beta, *cfg.gamma}};
    } else if (cfg.helix) {
        drive = TwoResetDrive{z, helix_condition(z, q, lambda, cfg.n_sites, cfg.kink)};
    } else if (cfg.w_text) {
        drive = TwoResetDrive{z, parse_complex(*cfg.w_text)};
    } else {
        drive = TwoResetDrive{z, z * lambda};
    }

    const CircuitParams p = make_params(cfg.n_sites, q, lambda, drive);
    const Regime declared = epr ? Regime::EasyPlane : Regime::EasyAxis;
    if (p.regime != declared)
        throw InvalidParameter("parameters classify as the other regime than --regime declares");
    return p;
}

json params_json(const nessmpa::CircuitParams& p) {
    json j;
    j["n"] = p.n_sites;
    j["q"] = {p.q.real(), p.q.imag()};
    j["lambda"] = {p.lambda.real(), p.lambda.imag()};
    j["regime"] = p.regime == nessmpa::Regime::EasyPlane ? "epr" : "ear";
    j["z"] = {p.z().real(), p.z().imag()};
    if (p.is_hybrid()) {
        const nessmpa::EulerAngles& a = p.euler();
        j["euler"] = {a.alpha, a.beta, a.gamma};
    } else {
        j["w"] = {p.w().real(), p.w().imag()};
    }
    return j;
}

void write_json_sidecar(const std::string& path, const json& doc) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw nessmpa::Error("cannot open " + path + " for writing");
    out << doc.dump(2) << '\n';
}

double eta_of(const nessmpa::CircuitParams& p) { return std::arg(p.q); }

int run_ness(const Config& cfg, bool print_matrix) {
    using namespace nessmpa;
    const CircuitParams p = build_params(cfg);
    json results;
    std::cout << format_params(p) << '\n';

    cplx edge;
    if (p.n_sites <= DenseOperator::kMaxSites) {
        const DenseOperator rho = assemble_density(p);
        const double trace = rho.trace().real();
        const double purity = (rho.matrix() * rho.matrix()).trace().real();
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
        const double min_eig = es.eigenvalues().minCoeff();
        edge = local_expectation(rho, sigma_plus(), 1);
        std::cout << "trace      " << std::setprecision(17) << trace << '\n'
                  << "purity     " << purity << '\n'
                  << "min_eig    " << min_eig << '\n';
        for (int site = 1; site <= p.n_sites; ++site)
            std::cout << "sigma_z  site " << site << "  "
                      << local_expectation(rho, sigma_z(), site).real() << '\n';
        std::cout << "sigma_plus site 1  " << show_complex(edge) << '\n';
        if (print_matrix) {
            std::cout << "rho:\n";
            const Eigen::MatrixXcd& m = rho.matrix();
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    std::cout << (c == 0 ? "" : "  ") << show_complex(m(r, c));
                std::cout << '\n';
            }
        }
        results["trace"] = trace;
        results["purity"] = purity;
        results["min_eig"] = min_eig;
    } else {
        if (print_matrix) {
            std::cerr << "error: --matrix needs n <= " << DenseOperator::kMaxSites << '\n';
            return kExitInvalidInput;
        }
        edge = contract_expectation(p, sigma_plus(), 1);
        std::cout << "sigma_plus site 1  " << show_complex(edge) << '\n';
        for (int site = 1; site <= p.n_sites; ++site)
            std::cout << "sigma_z  site " << site << "  "
                      << contract_expectation(p, sigma_z(), site).real() << '\n';
        results["trace"] = nullptr;
        results["purity"] = nullptr;
        results["min_eig"] = nullptr;
    }
    results["sigma_plus_site1"] = {edge.real(), edge.imag()};
    if (p.regime == Regime::EasyPlane) {
        try {
            const Indicators f = indicators(edge, p.z(), eta_of(p));
            std::cout << "f1         " << f.f1 << '\n' << "f2         " << f.f2 << '\n';
            results["f1"] = f.f1;
            results["f2"] = f.f2;
        } catch (const UndefinedArg&) {
            results["f1"] = nullptr;
            results["f2"] = nullptr;
        }
    } else {
        results["f1"] = nullptr;
        results["f2"] = nullptr;
    }

    json doc;
    doc["params"] = params_json(p);
    doc["results"] = results;
    doc["residuals"] = json::array();
    write_json_sidecar(cfg.json_path, doc);
    return kExitPass;
}

int run_verify(const Config& cfg) {
    using namespace nessmpa;
    const CircuitParams p = build_params(cfg);
    const std::vector<ResidualReport> reports = verify_all(p);
    bool all_pass = true;
    std::cout << format_params(p) << '\n';
    json residuals = json::array();
    for (const ResidualReport& r : reports) {
        const bool ok = r.passed();
        all_pass = all_pass && ok;
        std::cout << std::left << std::setw(22) << r.name << std::right << std::scientific
                  << std::setprecision(3) << r.residual << "  (tol " << r.tolerance << ")  "
                  << (ok ? "pass" : "FAIL") << '\n'
                  << std::defaultfloat;
        residuals.push_back({{"name", r.name},
                             {"residual", r.residual},
                             {"tolerance", r.tolerance},
                             {"passed", ok},
                             {"window", {r.window.lo, r.window.hi}}});
    }
    json doc;
    doc["params"] = params_json(p);
    doc["results"] = json::object();
    doc["residuals"] = residuals;
    write_json_sidecar(cfg.json_path, doc);
    std::cout << (all_pass ? "all checks passed" : "some checks FAILED") << '\n';
    return all_pass ? kExitPass : kExitVerificationFailure;
}

int run_scan(const Config& cfg, int grid_points, const std::string& out_path) {
    using namespace nessmpa;
    const CircuitParams p = build_params(cfg);
    if (p.regime != Regime::EasyPlane)
        throw InvalidParameter("anisotropy scans sweep the phase of q and need the epr regime");
    const ScanTable table = scan_anisotropy(p, default_eta_grid(grid_points));
    if (out_path.empty()) {
        table.write_csv(std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cannot open " + out_path + " for writing");
        table.write_csv(out);
    }
    json doc;
    doc["params"] = params_json(p);
    doc["results"] = {{"grid_points", grid_points},
                      {"rows", table.rows.size()},
                      {"output", out_path.empty() ? json(nullptr) : json(out_path)}};
    doc["residuals"] = json::array();
    write_json_sidecar(cfg.json_path, doc);
    return kExitPass;
}

int run_oracle(const Config& cfg, double tol) {
    using namespace nessmpa;
    const CircuitParams p = build_params(cfg);
    const double dist = oracle_agreement(p);
    std::cout << format_params(p) << '\n'
              << "|assembled - power_iterated|_F = " << std::scientific << std::setprecision(3)
              << dist << "  (tol " << tol << ")\n";
    json doc;
    doc["params"] = params_json(p);
    doc["results"] = {{"oracle_distance", dist}, {"tolerance", tol}};
    doc["residuals"] = json::array();
    write_json_sidecar(cfg.json_path, doc);
    return dist < tol ? kExitPass : kExitVerificationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact steady states of boundary-driven brickwork circuits"};
    app.require_subcommand(1);

    Config cfg;
    bool print_matrix = false;
    int grid_points = 2001;
    std::string out_path;
    double oracle_tol = 1e-8;

    CLI::App* ness = app.add_subcommand("ness", "Assemble the steady state and report its summary");
    add_common_flags(ness, cfg);
    ness->add_flag("--matrix", print_matrix, "Also print the full density matrix (n <= 9)");

    CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
    add_common_flags(verify, cfg);

    CLI::App* scan = app.add_subcommand("scan", "Sweep the anisotropy phase and emit a CSV table");
    add_common_flags(scan, cfg);
    scan->add_option("--grid", grid_points, "Number of grid points in eta/pi (0, 1)")
        ->capture_default_str();
    scan->add_option("--out", out_path, "CSV output path (default: standard output)");

    CLI::App* oracle = app.add_subcommand("oracle", "Compare the assembled state with power iteration");
    add_common_flags(oracle, cfg);
    oracle->add_option("--tol", oracle_tol, "Agreement threshold")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInvalidInput;
    }

    try {
        if (ness->parsed()) return run_ness(cfg, print_matrix);
        if (verify->parsed()) return run_verify(cfg);
        if (scan->parsed()) return run_scan(cfg, grid_points, out_path);
        if (oracle->parsed()) return run_oracle(cfg, oracle_tol);
    } catch (const nessmpa::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
