#include "oulab/cli.hpp"

#include "oulab/bounds.hpp"
#include "oulab/oracle.hpp"
#include "oulab/ousolver.hpp"
#include "oulab/reduction.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#ifndef OULAB_VERSION
#define OULAB_VERSION "0.0.0"
#endif

namespace oulab::cli {

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string config;
    std::string out;
    std::string format = "csv";
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;

    QuadratureSpec spec() const {
        QuadratureSpec s;
        s.rel_tol = rel_tol;
        s.abs_tol = abs_tol;
        s.validate();
        return s;
    }
};

// Thrown for invalid configurations; mapped to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> trailer;  // comment lines after the data
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

void write_table(const Table& t, const std::vector<std::string>& preamble, const std::string& format,
                 std::ostream& os) {
    for (const auto& line : preamble) os << "# " << line << '\n';
    if (format == "csv") {
        for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
        os << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
    } else {
        std::vector<std::size_t> w(t.header.size(), 0);
        for (std::size_t i = 0; i < t.header.size(); ++i) w[i] = t.header[i].size();
        for (const auto& r : t.rows)
            for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                os << (i ? "  " : "") << std::left << std::setw(static_cast<int>(w[i])) << cells[i];
            }
            os << '\n';
        };
        line(t.header);
        for (const auto& r : t.rows) line(r);
    }
    for (const auto& c : t.trailer) os << "# " << c << '\n';
}

class Runner {
public:
    Runner(CLI::App& app, Globals& g, std::ostream& out) : app_(app), g_(g), out_(out) {}

    std::vector<std::string> preamble(const std::string& command) const {
        std::vector<std::string> p{std::string("oulab ") + OULAB_VERSION, "command: " + command,
                                   "seed: " + std::to_string(g_.seed)};
        std::istringstream cfg(app_.config_to_str(true, false));
        std::string line;
        while (std::getline(cfg, line)) {
            line = trim(line);
            if (line.empty()) continue;
            p.push_back("config: " + line);
        }
        return p;
    }

    void emit(const Table& t, const std::string& command) const {
        if (g_.out.empty()) {
            write_table(t, preamble(command), g_.format, out_);
            return;
        }
        std::ofstream f(g_.out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file '" + g_.out + "'");
        write_table(t, preamble(command), g_.format, f);
    }

private:
    CLI::App& app_;
    Globals& g_;
    std::ostream& out_;
};

Spectrum parse_spectrum(const std::string& d) {
    try {
        return Spectrum::parse(d);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

KernelScale parse_scale(const std::string& s) {
    try {
        return parse_kernel_scale(s);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

// ---- verify ----

struct Check {
    std::string name;
    double value;
    double reference;
    double tolerance;
    bool pass;
};

Check abs_check(std::string name, double value, double reference, double tol) {
    return {std::move(name), value, reference, tol, std::abs(value - reference) <= tol};
}

Check rel_check(std::string name, double value, double reference, double rel) {
    const double tol = rel * std::abs(reference);
    return {std::move(name), value, reference, tol, std::abs(value - reference) <= tol};
}

std::vector<double> random_vector(RngStream& rng, int m) {
    std::vector<double> c(static_cast<std::size_t>(m));
    for (auto& v : c) v = rng.normal();
    return c;
}

int random_index(RngStream& rng, int m) { return 1 + std::min(m - 1, static_cast<int>(rng.uniform() * m)); }

std::vector<Check> verify_lemmas(const Globals& g) {
    std::vector<Check> out;
    const QuadratureSpec spec = g.spec();
    out.push_back(abs_check("log_prefactor(2) = -ln(pi)", log_prefactor(2), -std::log(kPi), 1e-14));
    out.push_back(abs_check("radial moment m=3", gaussian_radial_moment(3), 2.0, 1e-12));
    for (int m : {2, 5}) {
        const double expo = 0.5 * (m - 3.0);
        QuadratureSpec s = spec;
        if (m == 2) s = s.with_right(EndpointSingularity::algebraic(-0.5));
        const QuadResult r =
            integrate([expo](double x) { return x * std::pow((1.0 - x) * (1.0 + x), expo); }, 0.0, 1.0, s);
        out.push_back(abs_check("x(1-x^2)^((m-3)/2) integral m=" + std::to_string(m), r.value, 1.0 / (m - 1.0), 1e-9));
    }
    RngStream rng(g.seed, 101);
    for (int m : {2, 3, 5, 10}) {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            ReductionTask task;
            task.m = m;
            task.k = random_index(rng, m);
            task.c = random_vector(rng, m);
            const double v = odd_reduce(task, spec).value;
            worst = std::max(worst, std::abs(v - sign_closed_form(task.c, task.k)));
        }
        out.push_back(abs_check("odd_reduce(sign) closed form m=" + std::to_string(m), worst, 0.0, 1e-8));
    }
    {
        ReductionTask task;
        task.m = 4;
        task.k = 2;
        task.c = {0.7, -1.1, 0.3, 0.5};
        task.profile = make_smooth_step(3);
        out.push_back(abs_check("radial_reduce = odd_reduce (step n=3, m=4)", radial_reduce(task, spec).value,
                                odd_reduce(task, spec).value, 1e-8));
    }
    const Profile1D spline = hermite_spline_profile({-2.0, -0.5, 0.0, 0.7, 2.0}, {-0.3, 0.6, 0.1, -0.8, 0.9});
    for (int i = 0; i < 3; ++i) {
        ReductionTask task;
        task.m = 2 + i;
        task.k = random_index(rng, task.m);
        task.c = random_vector(rng, task.m);
        task.profile = spline;
        const double q = radial_reduce(task, spec).value;
        const MCEstimate mc =
            mc_gaussian_integral_mk(spline, task.c, task.m, task.k, 200000, rng.substream(200 + i), false);
        out.push_back(abs_check("radial_reduce vs Monte Carlo (spline, m=" + std::to_string(task.m) + ")", q, mc.mean,
                                3.0 * mc.std_error));
    }
    return out;
}

std::vector<Check> verify_gradient(const Globals& g) {
    std::vector<Check> out;
    const QuadratureSpec spec = g.spec();
    {
        const OUModel model(1, Spectrum::quadratic(1.0));
        const FieldFunction f(CylindricalFn(tanh_profile(), {1.0}));
        const std::vector<double> x{0.4}, h{1.0};
        const double t = 0.5;
        const double grad = grad_semigroup(model, f, t, x, h, QuadMethod{spec}).value;
        const double fd = fd_gradient([&](std::span<const double> y) { return semigroup_apply(model, f, t, y, QuadMethod{spec}).value; },
                                      x, h, 1e-4);
        out.push_back(rel_check("D_h P_t f quadrature vs FD (m=1)", grad, fd, 1e-6));
    }
    {
        const OUModel model(2, Spectrum::quadratic(1.0));
        const FieldFunction f(CylindricalFn(tanh_profile(), {1.0, 0.5}));
        const std::vector<double> x{0.3, -0.2}, h{0.6, 0.8};
        const double t = 0.5;
        const double fd = fd_gradient([&](std::span<const double> y) { return semigroup_apply(model, f, t, y, QuadMethod{spec}).value; },
                                      x, h, 1e-4);
        const double grad = grad_semigroup(model, f, t, x, h, QuadMethod{spec}).value;
        out.push_back(rel_check("D_h P_t f quadrature vs FD (m=2)", grad, fd, 1e-6));
        const Estimate mc = grad_semigroup(model, f, t, x, h, MCMethod{400000, RngStream(g.seed, 301), true});
        out.push_back(abs_check("D_h P_t f Monte Carlo vs FD (m=2)", mc.value, fd, 3.0 * mc.error));
    }
    {
        const OUModel model(1, Spectrum::quadratic(1.0));
        const FieldFunction f(CylindricalFn(tanh_profile(), {1.0}));
        const std::vector<double> x{0.3}, h{1.0};
        const double fd = fd_gradient([&](std::span<const double> y) { return resolvent_apply(model, f, y, QuadMethod{spec}).value; },
                                      x, h, 1e-3);
        out.push_back(rel_check("D u quadrature vs FD (m=1)", grad_resolvent(model, f, x, h, QuadMethod{spec}).value, fd, 1e-6));
        const std::vector<double> zero{0.0};
        const double fd0 = fd_gradient([&](std::span<const double> y) { return resolvent_apply(model, f, y, QuadMethod{spec}).value; },
                                       zero, h, 1e-3);
        const double g1 = sqrtA_grad_resolvent_zero(model, f, QuadMethod{spec}).components[0];
        out.push_back(rel_check("sqrt(lambda) D u(0), derived scale vs FD", g1, std::sqrt(model.lambda(1)) * fd0, 1e-3));
    }
    return out;
}

std::vector<Check> verify_pde(const Globals& g) {
    std::vector<Check> out;
    const QuadratureSpec spec = g.spec();
    std::vector<std::vector<double>> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back({-2.0 + 0.2 * i});
    for (double lambda : {1.0, 4.0}) {
        const Spectrum sp = Spectrum::explicit_list({lambda});
        const OUModel model(1, sp);
        const FieldFunction f(CylindricalFn(tanh_profile(), {1.0}));
        const double res = pde_residual([&](std::span<const double> x) { return resolvent_apply(model, f, x, QuadMethod{spec}).value; },
                                        [&](std::span<const double> x) { return f(x); }, sp, 1, grid, 5e-3);
        out.push_back(abs_check("PDE residual, f = tanh, lambda = " + format_number(lambda), res, 0.0, 1e-3));
    }
    {
        const Spectrum sp = Spectrum::quadratic(1.0);
        const OUModel model(1, sp);
        const FieldFunction f(1, [](std::span<const double> x) { return x[0]; }, kInf, "linear", true);
        const std::vector<double> x{0.8};
        out.push_back(abs_check("resolvent of f(x) = x at 0.8", resolvent_apply(model, f, x, QuadMethod{spec}).value, 0.4, 1e-8));
        const double res = pde_residual([](std::span<const double> y) { return 0.5 * y[0]; },
                                        [](std::span<const double> y) { return y[0]; }, sp, 1, grid, 1e-3);
        out.push_back(abs_check("PDE residual, f = x, u = x/2", res, 0.0, 1e-8));
    }
    return out;
}

int cmd_verify(const Runner& runner, const Globals& g, const std::string& level) {
    std::vector<Check> checks;
    auto append = [&](std::vector<Check> c) { checks.insert(checks.end(), c.begin(), c.end()); };
    if (level == "lemmas" || level == "all") append(verify_lemmas(g));
    if (level == "gradient" || level == "all") append(verify_gradient(g));
    if (level == "pde" || level == "all") append(verify_pde(g));
    Table t;
    t.header = {"check", "value", "reference", "tolerance", "pass"};
    bool all = true;
    for (const auto& c : checks) {
        t.rows.push_back({c.name, format_number(c.value), format_number(c.reference), format_number(c.tolerance), yes_no(c.pass)});
        all = all && c.pass;
    }
    t.trailer.push_back(std::string("verify ") + level + ": " + (all ? "all checks passed" : "FAILED"));
    runner.emit(t, "verify");
    return all ? kExitOk : kExitCheckFailed;
}

// ---- diverge ----

struct DivergeOptions {
    std::string spectrum = "quadratic:c0=1";
    double delta = 1.0;
    std::string ms = "2,4,8,16,32,64,128,256,512,1024,2048,4096";
    std::string kernel_scale = "derived";
    bool time_weighted = false;
};

int cmd_diverge(const Runner& runner, const Globals& g, const DivergeOptions& o) {
    const Spectrum sp = parse_spectrum(o.spectrum);
    if (!sp.increasing())
        throw ConfigError("diverge: constant spectra are the scalar case, which obeys the dimension-free bound "
                          "pi/sqrt(2); run `scalar-bound` instead");
    if (!(o.delta > 0.0)) throw ConfigError("diverge: --delta must be > 0");
    const auto ms = parse_int_list(o.ms);
    if (ms.empty()) throw ConfigError("diverge: --m list is empty");
    const KernelScale scale = parse_scale(o.kernel_scale);
    Table t;
    t.header = {"m", "delta", "D_m", "sqq_bound", "chain_bound", "sqrt_harmonic", "kernel_scale", "time_weighted"};
    std::vector<double> lnm, d, chain;
    bool ok = true;
    for (int m : ms) {
        if (m < 2) throw ConfigError("diverge: every m must be >= 2");
        const DivergenceRow r = divergence_lower_bound(sp, m, o.delta, o.time_weighted, scale, g.spec());
        t.rows.push_back({std::to_string(m), format_number(r.delta), format_number(r.D_m), format_number(r.sqq_bound),
                          format_number(r.chain_bound), format_number(r.sqrt_harmonic), to_string(r.kernel_scale),
                          yes_no(r.time_weighted)});
        lnm.push_back(std::log(static_cast<double>(m)));
        d.push_back(r.D_m);
        chain.push_back(r.chain_bound);
        const double slack = 1e-9 + r.D_m_error + r.sqq_error;
        ok = ok && r.converged && r.D_m >= r.sqq_bound - slack;
        if (!std::isnan(r.chain_bound)) ok = ok && r.sqq_bound >= r.chain_bound - slack;
    }
    if (ms.size() >= 2) {
        std::string s = "summary: slope_D_m_vs_ln_m=" + format_number(least_squares_slope(lnm, d));
        if (!std::isnan(chain.front())) s += " slope_chain_vs_ln_m=" + format_number(least_squares_slope(lnm, chain));
        t.trailer.push_back(s);
    }
    t.trailer.push_back(std::string("chain inequality D_m >= sqq_bound >= chain_bound: ") + (ok ? "holds" : "VIOLATED"));
    runner.emit(t, "diverge");
    return ok ? kExitOk : kExitCheckFailed;
}

// ---- scalar-bound ----

struct ScalarOptions {
    std::string lambdas = "0.25,1,4,16";
    std::string fs = "const:1,tanh,sin,step:n=1,sign";
    std::string ms = "1,2,4";
    int grid_points = 41;
};

int cmd_scalar(const Runner& runner, const Globals& g, const ScalarOptions& o) {
    const auto lambdas = parse_double_list(o.lambdas);
    const auto ms = parse_int_list(o.ms);
    std::vector<ScalarCase> cases;
    for (const auto& name : split(o.fs, ',')) {
        try {
            cases.push_back({name, parse_profile(name)});
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    if (cases.empty()) throw ConfigError("scalar-bound: the function suite (--f) is empty");
    if (lambdas.empty()) throw ConfigError("scalar-bound: --lambda list is empty");
    for (double l : lambdas)
        if (!(l > 0.0)) throw ConfigError("scalar-bound: lambda values must be > 0");
    if (ms.empty()) throw ConfigError("scalar-bound: --m list is empty");
    for (int m : ms)
        if (m < 1) throw ConfigError("scalar-bound: m must be >= 1");
    if (o.grid_points < 2) throw ConfigError("scalar-bound: --grid-points must be >= 2");
    for (const auto& c : cases)
        if (c.profile.sup_bound() > 1.0) throw ConfigError("scalar-bound: '" + c.name + "' is not bounded by 1");

    const auto rows = scalar_bound_harness(lambdas, cases, ms, default_scalar_grid(o.grid_points), g.spec());
    Table t;
    t.header = {"lambda", "f_name", "m", "sup_value", "bound", "pass"};
    bool ok = true;
    for (const auto& r : rows) {
        t.rows.push_back({format_number(r.lambda), r.f_name, std::to_string(r.m), format_number(r.sup_value),
                          format_number(r.bound), yes_no(r.pass)});
        ok = ok && r.pass;
    }
    t.trailer.push_back(std::string("scalar bound pi/sqrt(2): ") + (ok ? "all rows pass" : "FAILED"));
    runner.emit(t, "scalar-bound");
    return ok ? kExitOk : kExitCheckFailed;
}

// ---- witness ----

struct WitnessOptions {
    std::string spectrum = "quadratic:c0=1";
    std::string ns = "1,4,16,64,256";
    int m = 8;
    double delta = 1.0;
};

int cmd_witness(const Runner& runner, const Globals& g, const WitnessOptions& o) {
    const Spectrum sp = parse_spectrum(o.spectrum);
    if (!sp.increasing()) throw ConfigError("witness: requires an increasing spectrum");
    if (o.m < 2) throw ConfigError("witness: m must be >= 2 (the polar reduction needs m >= 2)");
    if (!(o.delta > 0.0)) throw ConfigError("witness: --delta must be > 0");
    const auto ns = parse_int_list(o.ns);
    for (int n : ns)
        if (n < 1) throw ConfigError("witness: every n must be >= 1");
    const QuadratureSpec spec = g.spec();
    const WitnessResult limit = s_m_witness(sign_profile(), sp, o.m, o.delta, spec);
    Table t;
    t.header = {"n", "m", "delta", "value", "limit_F0"};
    bool ok = limit.converged;
    for (int n : ns) {
        const WitnessResult w = s_m_witness(make_smooth_step(n), sp, o.m, o.delta, spec);
        ok = ok && w.converged;
        t.rows.push_back({std::to_string(n), std::to_string(o.m), format_number(o.delta), format_number(w.value),
                          format_number(limit.value)});
    }
    t.rows.push_back({"inf", std::to_string(o.m), format_number(o.delta), format_number(limit.value), format_number(limit.value)});
    runner.emit(t, "witness");
    return ok ? kExitOk : kExitCheckFailed;
}

// ---- p2-contrast ----

struct P2Options {
    std::string spectrum = "quadratic:c0=1";
    std::string ms = "2,4,8,16";
    std::string profile = "sign";
    std::uint64_t points = 400;
    double delta = 1.0;
    std::string kernel_scale = "derived";
};

int cmd_p2(const Runner& runner, const Globals& g, const P2Options& o) {
    const Spectrum sp = parse_spectrum(o.spectrum);
    const auto ms = parse_int_list(o.ms);
    if (ms.empty()) throw ConfigError("p2-contrast: --m list is empty");
    Profile1D profile = sign_profile();
    try {
        profile = parse_profile(o.profile);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (o.points < 2) throw ConfigError("p2-contrast: --points must be >= 2");
    const KernelScale scale = parse_scale(o.kernel_scale);
    const auto rows = p2_contrast(sp, ms, profile, o.points, RngStream(g.seed, 0), g.spec());
    Table t;
    t.header = {"m", "ratio", "ratio_std_error", "D_m"};
    for (const auto& r : rows) {
        std::string dm = "nan";
        if (sp.increasing() && r.m >= 2) dm = format_number(divergence_lower_bound(sp, r.m, o.delta, false, scale, g.spec()).D_m);
        t.rows.push_back({std::to_string(r.m), format_number(r.ratio), format_number(r.ratio_std_error), dm});
    }
    runner.emit(t, "p2-contrast");
    return kExitOk;
}

// ---- plot ----

int cmd_plot(const Globals& g, const std::string& in, std::ostream& out) {
    std::ifstream f(in, std::ios::binary);
    if (!f) throw ConfigError("plot: cannot read '" + in + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    std::string script;
    try {
        script = plot_script(ss.str());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (g.out.empty()) {
        out << script;
    } else {
        std::ofstream o(g.out, std::ios::binary);
        if (!o) throw ConfigError("cannot open output file '" + g.out + "'");
        o << script;
    }
    return kExitOk;
}

const std::vector<std::string> kGlobalKeys{"seed", "out", "format", "rel-tol", "abs-tol"};
const std::vector<std::string> kGlobalValueOptions{"--seed", "--config", "--out", "--format", "--rel-tol", "--abs-tol"};

// Splices config-file tokens into the argument list: global keys go first and
// subcommand keys right after the subcommand name, so that explicit flags,
// which come later, take precedence.
std::vector<std::string> with_config(const std::vector<std::string>& args, const std::vector<std::string>& subcommands) {
    std::string path;
    std::size_t sub_pos = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (a.rfind("--config=", 0) == 0) path = a.substr(9);
        if (sub_pos == args.size() && std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end()) {
            const bool is_value = i > 0 && std::find(kGlobalValueOptions.begin(), kGlobalValueOptions.end(), args[i - 1]) !=
                                               kGlobalValueOptions.end();
            if (!is_value) sub_pos = i;
        }
    }
    if (path.empty()) return args;
    std::vector<std::string> global, local;
    for (const auto& tok : config_tokens(path)) {
        const std::string key = tok.substr(2, tok.find('=') - 2);
        if (key == "config") throw ConfigError("config: nested 'config' keys are not supported");
        (std::find(kGlobalKeys.begin(), kGlobalKeys.end(), key) != kGlobalKeys.end() ? global : local).push_back(tok);
    }
    if (!local.empty() && sub_pos == args.size())
        throw ConfigError("config: subcommand keys given but no subcommand on the command line");
    std::vector<std::string> out = global;
    for (std::size_t i = 0; i < args.size(); ++i) {
        out.push_back(args[i]);
        if (i == sub_pos) out.insert(out.end(), local.begin(), local.end());
    }
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ConfigError("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ConfigError("cannot parse integer '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot read '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not of the form 'key = value'");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
        std::replace(key.begin(), key.end(), '_', '-');
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

std::string detect_schema(const std::string& header_line) {
    const std::string h = trim(header_line);
    if (h == "m,delta,D_m,sqq_bound,chain_bound,sqrt_harmonic,kernel_scale,time_weighted") return "diverge";
    if (h == "lambda,f_name,m,sup_value,bound,pass") return "scalar";
    if (h == "n,m,delta,value,limit_F0") return "witness";
    if (h == "m,ratio,ratio_std_error,D_m") return "p2";
    return "";
}

std::string plot_script(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line, header;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = line;
            continue;
        }
        rows.push_back(split(line, ','));
    }
    const std::string kind = detect_schema(header);
    if (kind.empty()) throw std::invalid_argument("plot: unknown CSV schema (header '" + header + "')");
    const auto cols = split(header, ',');

    auto literal = [](const std::string& v) -> std::string {
        if (v == "inf") return "math.inf";
        if (v == "-inf") return "-math.inf";
        if (v == "nan") return "math.nan";
        if (v == "true") return "True";
        if (v == "false") return "False";
        char* end = nullptr;
        std::strtod(v.c_str(), &end);
        if (!v.empty() && end && *end == '\0') return v;
        return "\"" + v + "\"";
    };

    std::ostringstream s;
    s << "# Plot script generated by oulab " << OULAB_VERSION << " (schema: " << kind << ").\n"
      << "import math\n\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\ndata = {\n";
    for (std::size_t c = 0; c < cols.size(); ++c) {
        s << "    \"" << cols[c] << "\": [";
        for (std::size_t r = 0; r < rows.size(); ++r) s << (r ? ", " : "") << (c < rows[r].size() ? literal(rows[r][c]) : "None");
        s << "],\n";
    }
    s << "}\n\nfig, ax = plt.subplots(figsize=(7, 4.5))\n";
    if (kind == "diverge") {
        s << "lnm = [math.log(m) for m in data[\"m\"]]\n"
             "ax.plot(lnm, data[\"D_m\"], \"o-\", label=\"D_m\")\n"
             "ax.plot(lnm, data[\"sqq_bound\"], \"x--\", label=\"sqq bound\")\n"
             "ax.plot(lnm, data[\"chain_bound\"], \"s:\", label=\"chain bound\")\n"
             "ax.set_xlabel(\"ln m\")\nax.set_ylabel(\"value\")\nax.set_title(\"Lower bound D_m against ln m\")\n"
             "out = \"diverge.png\"\n";
    } else if (kind == "scalar") {
        s << "labels = [f\"{f} m={m} lam={l:g}\" for l, f, m in zip(data[\"lambda\"], data[\"f_name\"], data[\"m\"])]\n"
             "colors = [\"tab:blue\" if p else \"tab:red\" for p in data[\"pass\"]]\n"
             "ax.bar(range(len(labels)), data[\"sup_value\"], color=colors)\n"
             "ax.axhline(data[\"bound\"][0], color=\"k\", linestyle=\"--\", label=\"pi/sqrt(2)\")\n"
             "ax.set_xticks(range(len(labels)))\nax.set_xticklabels(labels, rotation=90, fontsize=6)\n"
             "ax.set_ylabel(\"sup sqrt(lambda)|Du|\")\nax.set_title(\"Scalar gradient bound\")\n"
             "out = \"scalar_bound.png\"\n";
    } else if (kind == "witness") {
        s << "pts = [(n, v) for n, v in zip(data[\"n\"], data[\"value\"]) if n != math.inf]\n"
             "ax.semilogx([p[0] for p in pts], [p[1] for p in pts], \"o-\", label=\"F_n witness\")\n"
             "ax.axhline(data[\"limit_F0\"][0], color=\"k\", linestyle=\"--\", label=\"F_0 limit\")\n"
             "ax.set_xlabel(\"n\")\nax.set_ylabel(\"witness value\")\nax.set_title(\"Monotone convergence of witnesses\")\n"
             "out = \"witness.png\"\n";
    } else {
        s << "ax.errorbar(data[\"m\"], data[\"ratio\"], yerr=[3 * e for e in data[\"ratio_std_error\"]], fmt=\"o-\", "
             "label=\"L2 ratio\")\n"
             "ax.plot(data[\"m\"], data[\"D_m\"], \"s--\", label=\"D_m\")\n"
             "ax.set_xscale(\"log\", base=2)\nax.set_xlabel(\"m\")\nax.set_title(\"p = 2 contrast\")\n"
             "out = \"p2_contrast.png\"\n";
    }
    s << "ax.legend()\nfig.tight_layout()\nfig.savefig(out, dpi=150)\nprint(\"wrote\", out)\n";
    return s.str();
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    Globals g;
    CLI::App app{"oulab: Ornstein-Uhlenbeck gradient experiments", "oulab"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
    app.add_option("--config", g.config, "plain 'key = value' configuration file (flags override)");
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_option("--format", g.format, "table format")->check(CLI::IsMember({"csv", "human"}))->capture_default_str();
    app.add_option("--rel-tol", g.rel_tol, "quadrature relative tolerance")->capture_default_str();
    app.add_option("--abs-tol", g.abs_tol, "quadrature absolute tolerance")->capture_default_str();

    std::string level = "all";
    auto* verify = app.add_subcommand("verify", "run the cross-validation suites");
    verify->add_option("--level", level)->check(CLI::IsMember({"lemmas", "gradient", "pde", "all"}))->capture_default_str();

    DivergeOptions dopt;
    auto* diverge = app.add_subcommand("diverge", "lower bound D_m and the chain of bounds per dimension");
    diverge->add_option("--spectrum", dopt.spectrum, "quadratic:c0=<v> | explicit:file=<path>[,c0=<v>]")->capture_default_str();
    diverge->add_option("--delta", dopt.delta)->capture_default_str();
    diverge->add_option("--m", dopt.ms, "comma separated dimensions")->capture_default_str();
    diverge->add_option("--kernel-scale", dopt.kernel_scale, "derived | paper_si1")->capture_default_str();
    diverge->add_flag("--time-weighted", dopt.time_weighted, "insert e^{-t} under the integrals");

    ScalarOptions sopt;
    auto* scalar = app.add_subcommand("scalar-bound", "sup of sqrt(lambda)|Du| against pi/sqrt(2)");
    scalar->add_option("--lambda", sopt.lambdas)->capture_default_str();
    scalar->add_option("--f", sopt.fs, "comma separated profiles applied to x_1")->capture_default_str();
    scalar->add_option("--m", sopt.ms)->capture_default_str();
    scalar->add_option("--grid-points", sopt.grid_points, "points on [-5, 5]")->capture_default_str();

    WitnessOptions wopt;
    auto* witness = app.add_subcommand("witness", "witness values for smoothed steps F_n and the sign limit");
    witness->add_option("--spectrum", wopt.spectrum)->capture_default_str();
    witness->add_option("--n", wopt.ns)->capture_default_str();
    witness->add_option("--m", wopt.m)->capture_default_str();
    witness->add_option("--delta", wopt.delta)->capture_default_str();

    P2Options popt;
    auto* p2 = app.add_subcommand("p2-contrast", "L2 ratio of the weighted gradient against D_m");
    p2->add_option("--spectrum", popt.spectrum)->capture_default_str();
    p2->add_option("--m", popt.ms)->capture_default_str();
    p2->add_option("--profile", popt.profile)->capture_default_str();
    p2->add_option("--points", popt.points, "Monte Carlo sample size")->capture_default_str();
    p2->add_option("--delta", popt.delta)->capture_default_str();
    p2->add_option("--kernel-scale", popt.kernel_scale)->capture_default_str();

    std::string plot_in;
    auto* plot = app.add_subcommand("plot", "emit a matplotlib script for a CSV produced by this tool");
    plot->add_option("--in", plot_in, "CSV file")->required();

    for (auto* sub : {verify, diverge, scalar, witness, p2, plot}) sub->fallthrough();

    try {
        std::vector<std::string> subs;
        for (const auto* sub : app.get_subcommands({})) subs.push_back(sub->get_name());
        std::vector<std::string> args = with_config(args_in, subs);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "oulab: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "oulab: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        g.spec();
        const Runner runner(app, g, out);
        if (verify->parsed()) return cmd_verify(runner, g, level);
        if (diverge->parsed()) return cmd_diverge(runner, g, dopt);
        if (scalar->parsed()) return cmd_scalar(runner, g, sopt);
        if (witness->parsed()) return cmd_witness(runner, g, wopt);
        if (p2->parsed()) return cmd_p2(runner, g, popt);
        if (plot->parsed()) return cmd_plot(g, plot_in, out);
    } catch (const ConfigError& e) {
        err << "oulab: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "oulab: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "oulab: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}

}  // namespace oulab::cli
