// shc: spectra, eigenfunctions, verification, controls and extension classification
// for -d^2/dx^2 + (nu^2 - 1/4)/x^2 on (-1,1).
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "shc/asymptotics.hpp"
#include "shc/control.hpp"
#include "shc/errors.hpp"
#include "shc/extensions.hpp"
#include "shc/special_functions.hpp"
#include "shc/spectrum.hpp"

using json = nlohmann::json;
using namespace shc;

namespace {

constexpr int kUsage = 2;
constexpr int kContract = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to the output path, or stdout when the path is empty.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw UsageError("cannot open output file " + path);
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit_json(const json& j, const std::string& path) {
    Sink sink(path);
    sink.out() << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("malformed JSON in " + path + ": " + e.what());
    }
}

Mat2 parse_mat2(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
        j[1].size() != 2)
        throw UsageError(std::string(name) + " must be a 2x2 nested array");
    Mat2 m;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            if (!j[r][c].is_number()) throw UsageError(std::string(name) + " entries must be numbers");
            m(r, c) = j[r][c].get<double>();
        }
    return m;
}

Mat2 mat2_from_list(const std::vector<double>& v, const char* name) {
    if (v.size() != 4) throw UsageError(std::string(name) + " needs 4 entries (row-major)");
    Mat2 m;
    m << v[0], v[1], v[2], v[3];
    return m;
}

json to_json(const Mat2& m) { return json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}); }

json to_json(const Vec2& v) { return json::array({v(0), v(1)}); }

// ---- spectrum --------------------------------------------------------------

struct SpectrumArgs {
    std::vector<double> nus{0.5};
    int count = 10;
    bool figure = false;
    bool asymptotic = false;
    std::string output;
};

int run_spectrum(const SpectrumArgs& a) {
    if (a.count < 1) throw UsageError("--count must be >= 1");
    Sink sink(a.output);
    std::ostream& out = sink.out();
    if (a.figure) {
        out << "nu,n,lambda,j2_nu,j2_minus_nu\n" << std::setprecision(17);
        for (double nu : a.nus) {
            const auto p = SpectralParameter::make(nu);
            for (int n = 1; n <= a.count; ++n) {
                const double jp = bessel_zero(p.nu, n), jm = bessel_zero(-p.nu, n);
                out << p.nu << ',' << n << ',' << eigenvalue(p, n) << ',' << jp * jp << ',' << jm * jm << '\n';
            }
        }
        return 0;
    }
    if (a.nus.size() != 1) throw UsageError("a table needs exactly one --nu (use --figure for several)");
    const SpectralBasis basis(SpectralParameter::make(a.nus.front()), a.count);
    if (a.asymptotic)
        write_asymptotics_csv(basis, out);
    else
        write_spectrum_csv(basis, out);
    return 0;
}

// ---- eigfun ----------------------------------------------------------------

struct EigfunArgs {
    double nu = 0.5;
    int n = 0;
    int points = 200;
    std::string output;
};

int run_eigfun(const EigfunArgs& a) {
    if (a.n < 0) throw UsageError("--n must be >= 0");
    if (a.points < 2) throw UsageError("--points must be >= 2");
    const SpectralBasis basis(SpectralParameter::make(a.nu), a.n + 1);
    Sink sink(a.output);
    std::ostream& out = sink.out();
    out << "x,phi\n" << std::setprecision(17);
    // cell midpoints never hit 0 for an even point count; odd counts skip the middle cell
    for (int i = 0; i < a.points; ++i) {
        const double x = -1.0 + 2.0 * (i + 0.5) / a.points;
        if (std::fabs(x) < 1e-12) continue;
        out << x << ',' << eigenfunction_eval(basis, a.n, x) << '\n';
    }
    return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::vector<double> nus{0.1, 0.3, 0.5, 0.6, 0.9};
    int count = 201;
    int gram_modes = 15;
    std::string output;
};

int run_verify(const VerifyArgs& a) {
    if (a.count < 2) throw UsageError("--count must be >= 2");
    if (a.gram_modes < 1 || a.gram_modes > a.count) throw UsageError("--gram-modes must lie in [1, count]");
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) {
        const double x = 0.06 + 0.9 * i / 40.0;
        grid.push_back(x);
        grid.push_back(-x);
    }
    json report = json::array();
    bool ok = true;
    for (double nu : a.nus) {
        const SpectralBasis basis(SpectralParameter::make(nu), a.count);
        const auto& p = basis.param();
        int order_fail = 0, bracket_fail = 0;
        double char_res = 0.0, coef_res = 0.0, ode = 0.0, norm_err = 0.0, transmission = 0.0;
        const auto id = classify_extension(Mat2::Identity(), Mat2::Identity());
        for (int n = 0; n < basis.count(); ++n) {
            const auto& r = basis.record(n);
            transmission = std::max(transmission, transmission_residual(id, coeffs_to_alphabeta(p, singular_coefficients(p, r))));
            if (n == 0) continue;
            if (!(r.lambda > basis.record(n - 1).lambda)) ++order_fail;
            coef_res = std::max(coef_res, coefficient_residual(p, r));
            if (r.bracket.degenerate) continue;
            if (!(r.lambda > r.bracket.lo && r.lambda < r.bracket.hi)) ++bracket_fail;
            char_res = std::max(char_res, static_cast<double>(std::fabs(characteristic_ext(p, r.parity, r.lambda_ext) - 1)));
        }
        const Eigen::MatrixXd g = gram_matrix(basis, a.gram_modes);
        const double gram_err = (g - Eigen::MatrixXd::Identity(a.gram_modes, a.gram_modes)).cwiseAbs().maxCoeff();
        for (int n = 0; n < a.gram_modes; ++n) {
            ode = std::max(ode, ode_residual(basis, n, grid));
            const double an = basis.record(n).norm_a;
            norm_err = std::max(norm_err, std::fabs(norm_squared_by_quadrature(basis, n) / (an * an) - 1));
        }
        json checks = {
            {"strict_ordering", {{"failures", order_fail}, {"pass", order_fail == 0}}},
            {"brackets", {{"failures", bracket_fail}, {"pass", bracket_fail == 0}}},
            {"characteristic_residual", {{"value", char_res}, {"limit", 1e-9}, {"pass", char_res < 1e-9}}},
            {"coefficient_residual", {{"value", coef_res}, {"limit", 1e-10}, {"pass", coef_res < 1e-10}}},
            {"transmission_residual", {{"value", transmission}, {"limit", 1e-10}, {"pass", transmission < 1e-10}}},
            {"gram_error", {{"value", gram_err}, {"limit", 1e-6}, {"pass", gram_err < 1e-6}}},
            {"ode_residual", {{"value", ode}, {"limit", 1e-4}, {"pass", ode < 1e-4}}},
            {"norm_error", {{"value", norm_err}, {"limit", 1e-7}, {"pass", norm_err < 1e-7}}},
        };
        bool all = true;
        for (const auto& [name, c] : checks.items()) all = all && c["pass"].get<bool>();
        ok = ok && all;
        report.push_back({{"nu", p.nu}, {"count", a.count}, {"pass", all}, {"checks", checks}});
    }
    emit_json({{"pass", ok}, {"results", report}}, a.output);
    return ok ? 0 : kContract;
}

// ---- control ---------------------------------------------------------------

struct ControlArgs {
    std::string problem;
    std::string output;
};

ControlProblem parse_problem(const json& j, double& nu) {
    auto need = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw UsageError(std::string("problem file lacks \"") + key + "\"");
        return j.at(key);
    };
    if (!need("nu").is_number() || !need("T").is_number() || !need("N").is_number_integer())
        throw UsageError("nu and T must be numbers, N an integer");
    nu = j["nu"].get<double>();
    ControlProblem p;
    p.horizon_T = j["T"].get<double>();
    p.mode_count = j["N"].get<int>();
    const json& omega = need("omega");
    if (omega.is_string()) {
        if (omega.get<std::string>() != "boundary") throw UsageError("omega must be \"boundary\" or a list of [a,b]");
    } else if (omega.is_array()) {
        std::vector<Interval> pieces;
        for (const auto& iv : omega) {
            if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
                throw UsageError("omega entries must be [a,b] pairs");
            pieces.push_back({iv[0].get<double>(), iv[1].get<double>()});
        }
        p.region = IntervalUnion(pieces);
    } else {
        throw UsageError("omega must be \"boundary\" or a list of [a,b]");
    }
    if (j.contains("f0_modes")) {
        for (const auto& m : j["f0_modes"]) {
            if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() || !m[1].is_number())
                throw UsageError("f0_modes entries must be [n, c]");
            p.initial_modes.push_back({m[0].get<int>(), m[1].get<double>()});
        }
    }
    if (j.contains("report_modes")) p.report_modes = j["report_modes"].get<int>();
    return p;
}

int run_control(const ControlArgs& a) {
    double nu = 0.5;
    ControlProblem problem = parse_problem(read_json(a.problem), nu);
    if (problem.mode_count < 1) throw UsageError("N must be >= 1");
    if (problem.mode_count > kMaxFamilySize) throw UsageError("N above the family cap");
    const SpectralBasis basis(SpectralParameter::make(nu), problem.report_horizon());
    const ControlCertificate cert = certify(basis, problem);
    json modes = json::array();
    for (const auto& m : cert.final_modes) modes.push_back({{"n", m.n}, {"value", m.value}, {"targeted", m.targeted}});
    json out = {{"final_modes", modes},
                {"control_norm", cert.control_norm},
                {"gram_condition", cert.gram_condition},
                {"biorth_residual", cert.biorth_residual},
                {"max_targeted", cert.max_targeted},
                {"pass", cert.max_targeted < 1e-8}};
    if (problem.boundary())
        out["gauge"] = "modes y_n = <f, phi_n>/sqrt(lambda_n+1) of e^{-t} f, spectrum shifted by +1";
    emit_json(out, a.output);
    return cert.max_targeted < 1e-8 ? 0 : kContract;
}

// ---- extensions ------------------------------------------------------------

struct ExtensionArgs {
    std::string input;
    std::vector<double> m2, m3;
    std::string output;
};

int run_classify(const ExtensionArgs& a) {
    Mat2 m2, m3;
    if (!a.input.empty()) {
        const json j = read_json(a.input);
        if (!j.contains("M2") || !j.contains("M3")) throw UsageError("input needs \"M2\" and \"M3\"");
        m2 = parse_mat2(j["M2"], "M2");
        m3 = parse_mat2(j["M3"], "M3");
    } else {
        if (a.m2.empty() || a.m3.empty()) throw UsageError("give --input or both --m2 and --m3");
        m2 = mat2_from_list(a.m2, "--m2");
        m3 = mat2_from_list(a.m3, "--m3");
    }
    const ExtensionSpec spec = classify_extension(m2, m3);
    json out = {{"class", to_string(spec.classification)}};
    switch (spec.classification) {
        case ExtensionClass::coupled: out["M"] = to_json(spec.m); break;
        case ExtensionClass::decoupled:
            out["l_minus"] = to_json(spec.l_minus);
            out["l_plus"] = to_json(spec.l_plus);
            break;
        default: out["reason"] = spec.reason; break;
    }
    emit_json(out, a.output);
    return 0;
}

// ---- illposed --------------------------------------------------------------

struct IllposedArgs {
    double c = -0.5;
    std::vector<double> eps{1.0};
    std::string output;
};

int run_illposed(const IllposedArgs& a) {
    json rows = json::array();
    for (double e : a.eps) {
        const auto p = illposedness_profile(a.c, e);
        rows.push_back({{"c", p.c},
                        {"eps", p.eps},
                        {"int_f2", p.int_f2},
                        {"int_f2_over_x2", p.int_f2_over_x2},
                        {"int_fprime2", p.int_fprime2},
                        {"quadrature", {{"int_f2", p.quad_f2}, {"int_f2_over_x2", p.quad_f2_over_x2}, {"int_fprime2", p.quad_fprime2}}},
                        {"lhs", p.lhs},
                        {"eps_times_lhs", p.eps * p.lhs},
                        {"limit_eps_times_lhs", -0.125 - a.c / 2},
                        {"rayleigh_quotient", p.rayleigh_quotient}});
    }
    emit_json(rows.size() == 1 ? rows[0] : rows, a.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral decomposition and null control for the inverse-square operator on (-1,1)"};
    app.require_subcommand(1);

    SpectrumArgs spectrum;
    auto* sp = app.add_subcommand("spectrum", "eigenvalue table (CSV)");
    sp->add_option("--nu", spectrum.nus, "order nu in (0,1); repeatable with --figure")->expected(1, -1);
    sp->add_option("--count", spectrum.count, "number of modes (figure: zeros per nu)");
    sp->add_flag("--figure", spectrum.figure, "emit nu,n,lambda,j2_nu,j2_minus_nu tuples");
    sp->add_flag("--asymptotic", spectrum.asymptotic, "emit computed vs predicted sqrt(lambda)");
    sp->add_option("-o,--output", spectrum.output, "output file (default stdout)");

    EigfunArgs eigfun;
    auto* ef = app.add_subcommand("eigfun", "sample a normalized eigenfunction (CSV)");
    ef->add_option("--nu", eigfun.nu, "order nu in (0,1)");
    ef->add_option("--n", eigfun.n, "mode index")->required();
    ef->add_option("--points", eigfun.points, "sample count");
    ef->add_option("-o,--output", eigfun.output, "output file (default stdout)");

    VerifyArgs verify;
    auto* vf = app.add_subcommand("verify", "run the spectral invariant suite (JSON report)");
    vf->add_option("--nu", verify.nus, "orders to check")->expected(1, -1);
    vf->add_option("--count", verify.count, "modes per order");
    vf->add_option("--gram-modes", verify.gram_modes, "modes in the Gram/ODE/norm checks");
    vf->add_option("-o,--output", verify.output, "output file (default stdout)");

    ControlArgs control;
    auto* ct = app.add_subcommand("control", "synthesize and certify a null control (JSON)");
    ct->add_option("--problem", control.problem, "problem file")->required()->check(CLI::ExistingFile);
    ct->add_option("-o,--output", control.output, "output file (default stdout)");

    ExtensionArgs ext;
    auto* ex = app.add_subcommand("extensions", "self-adjoint extension tools");
    ex->require_subcommand(1);
    auto* cl = ex->add_subcommand("classify", "classify a transmission pair (M2, M3)");
    cl->add_option("--input", ext.input, "JSON file {\"M2\": [[..]], \"M3\": [[..]]}")->check(CLI::ExistingFile);
    cl->add_option("--m2", ext.m2, "M2 entries, row-major")->expected(4);
    cl->add_option("--m3", ext.m3, "M3 entries, row-major")->expected(4);
    cl->add_option("-o,--output", ext.output, "output file (default stdout)");

    IllposedArgs ill;
    auto* il = app.add_subcommand("illposed", "blow-up integrals for f = x^{1/2+eps}(1-x)");
    il->add_option("--c", ill.c, "potential coefficient");
    il->add_option("--eps", ill.eps, "eps in (0,1]; repeatable")->expected(1, -1);
    il->add_option("-o,--output", ill.output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (sp->parsed()) return run_spectrum(spectrum);
        if (ef->parsed()) return run_eigfun(eigfun);
        if (vf->parsed()) return run_verify(verify);
        if (ct->parsed()) return run_control(control);
        if (cl->parsed()) return run_classify(ext);
        if (il->parsed()) return run_illposed(ill);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        // ContractError, ConvergenceError and anything unexpected from the numerics
        std::cout << json{{"pass", false}, {"error", e.what()}}.dump(2) << "\n";
        return kContract;
    }
    return kUsage;
}
