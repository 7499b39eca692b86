#include "CLI11.hpp"

#include "specialforms/report.hpp"
#include "specialforms/theta.hpp"
#include "specialforms/verify.hpp"
#include "specialforms/weil.hpp"

#include <fstream>
#include <iostream>

using namespace specialforms;

namespace {

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

std::vector<Rational> parse_vector(const std::string& s) {
    std::vector<Rational> out;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(parse_rational(cur));
            cur.clear();
        } else if (!isspace(ch)) {
            cur += ch;
        }
    }
    return out;
}

std::vector<std::vector<Rational>> parse_matrix(const std::string& s) {
    std::vector<std::vector<Rational>> out;
    std::string cur;
    for (char ch : s + ";") {
        if (ch == ';') {
            if (!cur.empty()) out.push_back(parse_vector(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

/// Monomial expressions like "1", "x1", "2*x1^3*x2", "-1/2*x2".
weil::GaussPoly parse_poly(const std::string& s, int d) {
    weil::VarPoly poly(d);
    std::string term;
    auto flush = [&](const std::string& t) {
        if (t.empty()) return;
        Scalar coef = Scalar::one();
        std::vector<uint8_t> exp(d, 0);
        std::string factor;
        for (char ch : t + "*") {
            if (ch == '*') {
                if (factor.empty()) continue;
                if (factor[0] == 'x') {
                    auto caret = factor.find('^');
                    int var = std::stoi(factor.substr(1, caret - 1)) - 1;
                    int e = caret == std::string::npos ? 1 : std::stoi(factor.substr(caret + 1));
                    if (var < 0 || var >= d) throw CLI::ValidationError("poly", "variable out of range");
                    exp[var] = static_cast<uint8_t>(exp[var] + e);
                } else {
                    coef *= Scalar::rational(parse_rational(factor));
                }
                factor.clear();
            } else if (!isspace(ch)) {
                factor += ch;
            }
        }
        poly.add_term(exp, coef);
    };
    // Split on '+' and unary '-' boundaries (keep it simple: '+' separated,
    // each term may start with '-').
    std::string cur;
    for (char ch : s + "+") {
        if (ch == '+') {
            flush(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return weil::GaussPoly(1, d, poly);
}

int finish(const report::Report& rep, const std::string& out_path) {
    std::cout << rep.summary();
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "cannot write report to " << out_path << "\n";
            return 2;
        }
        f << rep.to_json() << "\n";
    }
    return rep.failed() > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of the special Weil-representation cocycles"};
    app.require_subcommand(1);
    app.set_config("--config");

    verify::Options opt;
    std::string out_path;
    int workers = 0, precision = 53, max_degree = 2;
    app.add_option("--out", out_path, "write the JSON report to this path");
    app.add_option("--workers", workers, "worker threads for the check sweeps");
    app.add_option("--precision", precision, "floating precision in bits (53 or 64)");
    app.add_option("--max-degree", max_degree, "cap on l' and |lambda| in the sweeps");

    int p = 0, q = 0, n = 0, ell = 0;
    std::string lambda_arg;
    auto add_param_opts = [&](CLI::App* sub) {
        sub->fallthrough();
        sub->add_option("-p", p, "positive rank p");
        sub->add_option("-q", q, "negative rank q");
        sub->add_option("-n", n, "symplectic size n");
        sub->add_option("-l,--ell", ell, "parabolic parameter ell");
        sub->add_option("--lambda", lambda_arg, "partition, e.g. 2,1");
    };

    CLI::App* c_closed = app.add_subcommand("verify-closed", "closedness of the special forms");
    CLI::App* c_restr = app.add_subcommand("verify-restriction", "local boundary restriction");
    CLI::App* c_prod = app.add_subcommand("verify-product", "product rules");
    CLI::App* c_tab = app.add_subcommand("verify-tableaux", "symmetrizer suite + dimension audit");
    CLI::App* c_herm = app.add_subcommand("verify-hermite", "Fourier transforms of the raised Gaussians");
    CLI::App* c_nil = app.add_subcommand("verify-nilpotent", "nilpotent cocycles and primitives");
    CLI::App* c_all = app.add_subcommand("verify-all", "every suite, including the theta checks");
    for (CLI::App* sub : {c_closed, c_restr, c_prod, c_tab, c_herm, c_nil, c_all})
        add_param_opts(sub);

    CLI::App* c_theta = app.add_subcommand("theta-eval", "evaluate a lattice theta sum");
    c_theta->fallthrough();
    std::string basis_arg = "1", shift_arg = "", poly_arg = "1", weight_arg = "1";
    double t_arg = 1.0, radius_arg = 8.0, tol_arg = 0.0;
    c_theta->add_option("--basis", basis_arg, "lattice basis rows, e.g. \"2,0;0,2\"");
    c_theta->add_option("--shift", shift_arg, "coset shift, e.g. \"1/2,0\"");
    c_theta->add_option("--weight", weight_arg, "rational weight");
    c_theta->add_option("--poly", poly_arg, "polynomial part, e.g. \"x1*x2^2\"");
    c_theta->add_option("--t", t_arg, "Gaussian scale t");
    c_theta->add_option("--radius", radius_arg, "enumeration radius");
    c_theta->add_option("--tol", tol_arg, "required certified tolerance (0 = none)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    opt.workers = workers;
    opt.precision = precision;
    opt.max_degree = max_degree;
    if (p > 0) opt.p = p;
    if (q > 0) opt.q = q;
    if (n > 0) opt.n = n;
    if (ell > 0) opt.ell = ell;
    if (!lambda_arg.empty()) {
        std::vector<int> lambda;
        for (const auto& r : parse_vector(lambda_arg))
            lambda.push_back(static_cast<int>(numerator(r)));
        opt.lambda = lambda;
    }

    report::Report rep;
    rep.notes = report::standard_notes();
    rep.parameters = {{"workers", std::to_string(workers)},
                      {"precision", std::to_string(precision)},
                      {"max_degree", std::to_string(max_degree)}};

    try {
        if (*c_closed) {
            rep.command = "verify-closed";
            rep.checks = verify::run_closedness(opt);
        } else if (*c_restr) {
            rep.command = "verify-restriction";
            rep.checks = verify::run_restriction(opt);
        } else if (*c_prod) {
            rep.command = "verify-product";
            rep.checks = verify::run_product(opt);
        } else if (*c_tab) {
            rep.command = "verify-tableaux";
            rep.checks = verify::run_tableaux(opt);
        } else if (*c_herm) {
            rep.command = "verify-hermite";
            rep.checks = verify::run_hermite(opt);
        } else if (*c_nil) {
            rep.command = "verify-nilpotent";
            rep.checks = verify::run_nilpotent(opt);
        } else if (*c_all) {
            rep.command = "verify-all";
            rep.checks = verify::run_all(opt);
        } else if (*c_theta) {
            rep.command = "theta-eval";
            auto basis = parse_matrix(basis_arg);
            int d = static_cast<int>(basis.size());
            theta::LatticeCoset L;
            L.basis = basis;
            L.shift = shift_arg.empty() ? std::vector<Rational>(d, Rational(0))
                                        : parse_vector(shift_arg);
            L.weight = parse_rational(weight_arg);
            if (static_cast<int>(L.shift.size()) != d)
                throw CLI::ValidationError("shift", "dimension mismatch");
            weil::GaussPoly phi = parse_poly(poly_arg, d);
            std::optional<double> tol;
            if (tol_arg > 0) tol = tol_arg;
            theta::ThetaValue v = theta::theta_eval({L}, phi, t_arg, radius_arg, tol);
            report::CheckRecord rec;
            rec.suite = "theta";
            rec.claim = "theta-eval";
            rec.params = {{"basis", basis_arg}, {"shift", shift_arg}, {"poly", poly_arg},
                          {"t", std::to_string(t_arg)}, {"radius", std::to_string(radius_arg)}};
            std::ostringstream os;
            os << "value " << v.value.real();
            if (v.value.imag() != 0) os << (v.value.imag() > 0 ? "+" : "") << v.value.imag() << "i";
            os << " tail " << v.tail << " terms " << v.terms;
            rec.witness = os.str();
            rec.outcome = report::CheckRecord::Outcome::Pass;
            rep.checks.push_back(rec);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return finish(rep, out_path);
}
