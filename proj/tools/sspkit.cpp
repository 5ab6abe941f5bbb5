#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sspkit/asymptotics.hpp"
#include "sspkit/berele.hpp"
#include "sspkit/identities.hpp"
#include "sspkit/kernel.hpp"
#include "sspkit/markov.hpp"
#include "sspkit/process.hpp"

using namespace sspkit;
using nlohmann::json;

namespace {

enum Exit { ok = 0, verification_failed = 1, usage_error = 2, diagnostic_failed = 3 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
    std::string config;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
}

void require_keys(const json& j, const std::vector<std::string>& keys, const std::string& where) {
    for (const auto& k : keys)
        if (!j.contains(k)) throw ConfigError(where + ": missing field \"" + k + "\"");
}

void require_type(const json& j, const std::string& key, json::value_t t, const std::string& where) {
    if (j.contains(key) && j.at(key).type() != t &&
        !(t == json::value_t::number_float && j.at(key).is_number()) &&
        !(t == json::value_t::number_integer && j.at(key).is_number_unsigned()))
        throw ConfigError(where + ": field \"" + key + "\" has the wrong type");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> doubles_or(const json& j, const std::string& key, std::size_t n, double fill) {
    if (!j.contains(key)) return std::vector<double>(n, fill);
    auto v = j.at(key).get<std::vector<double>>();
    if (v.size() == 1 && n > 1) v.assign(n, v[0]);
    if (v.size() != n) throw ConfigError("field \"" + key + "\" needs " + std::to_string(n) + " entries");
    return v;
}

std::vector<KernelPoint> parse_points(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("\"points\" must be a nonempty array");
    std::vector<KernelPoint> pts;
    for (const auto& p : j) pts.push_back(KernelPoint::from_json(p));
    return pts;
}

// ---- sample

int cmd_sample(const Globals& g, json job) {
    require_keys(job, {"n", "k"}, "sample");
    int n = job.at("n").get<int>(), k = job.at("k").get<int>();
    long long samples = job.value("samples", 1LL);
    if (n < 1 || k < 1 || samples < 1) throw ConfigError("sample: n, k and samples must be positive");
    auto x = doubles_or(job, "x", n, 1.0);
    auto y = doubles_or(job, "y", k, 0.5);
    std::vector<std::string> rows(samples);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (long long s = 0; s < samples; ++s) {
        try {
            std::seed_seq seq{static_cast<std::uint32_t>(g.seed), static_cast<std::uint32_t>(g.seed >> 32),
                              static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
            std::mt19937_64 rng(seq);
            auto lam = sample_process(n, k, x, y, rng);
            std::ostringstream os;
            for (int j = 1; j <= k; ++j)
                for (int i = 1; i <= n; ++i)
                    os << s << ',' << j << ',' << (i <= lam[j - 1].length() ? lam[j - 1][i - 1] : 0) - i << '\n';
            rows[s] = os.str();
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    Output out(g.out);
    out.stream() << "sample,j,pos\n";
    for (const auto& r : rows) out.stream() << r;
    return ok;
}

// ---- verify

int cmd_verify(const Globals& g, json job) {
    json jobs = job.contains("jobs") ? job.at("jobs") : json::array({job});
    if (!jobs.is_array() || jobs.empty()) throw ConfigError("verify: \"jobs\" must be a nonempty array");
    json reports = json::array();
    bool all = true;
    for (const auto& j : jobs) {
        require_keys(j, {"identity"}, "verify");
        require_type(j, "identity", json::value_t::string, "verify");
        auto id = identity_from_name(j.at("identity").get<std::string>());
        std::vector<Partition> parts;
        for (const auto& p : j.value("partitions", json::array())) parts.push_back(Partition(p.get<std::vector<int>>()));
        std::vector<Specialization> specs;
        for (const auto& s : j.value("specs", json::array())) specs.push_back(Specialization::from_json(s));
        int D = j.value("D", 4);
        auto r = verify(id, parts, specs, D);
        all = all && r.pass && r.bound_stable;
        reports.push_back(r.to_json());
    }
    Output out(g.out);
    out.stream() << json({{"pass", all}, {"reports", reports}}).dump(2) << '\n';
    return all ? ok : verification_failed;
}

// ---- kernel and correlate

struct KernelSource {
    std::optional<SpecTuple> spec;
    int berele_n = 0;
    QuadratureConfig cfg;
};

KernelSource kernel_source(const json& job) {
    KernelSource src;
    if (job.contains("quadrature")) src.cfg = QuadratureConfig::from_json(job.at("quadrature"));
    if (job.contains("spec")) {
        src.spec = SpecTuple::from_json(job.at("spec"));
    } else if (job.contains("berele_n")) {
        src.berele_n = job.at("berele_n").get<int>();
        if (src.berele_n < 1) throw ConfigError("berele_n must be positive");
    } else {
        throw ConfigError("need \"spec\" (spec tuple) or \"berele_n\"");
    }
    return src;
}

KernelFn kernel_fn(const KernelSource& src) {
    if (src.spec) {
        auto s = *src.spec;
        auto cfg = src.cfg;
        return [s, cfg](const KernelPoint& p, const KernelPoint& q) { return kssp_eval(p, q, s, cfg); };
    }
    int n = src.berele_n;
    auto cfg = src.cfg;
    return [n, cfg](const KernelPoint& p, const KernelPoint& q) {
        if (p.primed || q.primed) throw ConfigError("berele kernel points are unprimed levels");
        return kssp_berele(p.level, p.pos, q.level, q.pos, n, cfg);
    };
}

int cmd_kernel(const Globals& g, json job) {
    require_keys(job, {"points"}, "kernel");
    auto pts = parse_points(job.at("points"));
    auto src = kernel_source(job);
    if (src.spec) check_points(pts, src.spec->k());
    auto m = kernel_matrix(pts, kernel_fn(src));
    json mat = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        mat.push_back(row);
    }
    json pj = json::array();
    for (const auto& p : pts) pj.push_back(p.to_string());
    Output out(g.out);
    out.stream() << json({{"points", pj}, {"matrix", mat}, {"determinant", m.determinant()}}).dump(2) << '\n';
    return ok;
}

int cmd_correlate(const Globals& g, json job) {
    require_keys(job, {"points"}, "correlate");
    auto pts = parse_points(job.at("points"));
    auto src = kernel_source(job);
    if (src.spec) check_points(pts, src.spec->k());
    json rep;
    rep["kernel"] = correlation(pts, kernel_fn(src));
    int code = ok;
    if (job.contains("enumerate_cap")) {
        if (!src.spec) throw ConfigError("enumeration needs \"spec\"");
        auto sup = enumerate_support(*src.spec, job.at("enumerate_cap").get<int>());
        auto e = enumerated_correlation(pts, sup);
        rep["enumerated"] = {{"value", e.value}, {"tail_bound", e.tail_bound}};
        double diff = rep["kernel"].get<double>() - e.value;
        double tol = job.value("tolerance", 1e-8);
        bool agree = diff >= -tol && diff <= e.tail_bound + tol;
        rep["enumerated"]["agree"] = agree;
        if (!agree) code = verification_failed;
    }
    if (job.contains("monte_carlo")) {
        const auto& mc = job.at("monte_carlo");
        require_keys(mc, {"n", "k"}, "correlate.monte_carlo");
        int n = mc.at("n").get<int>(), k = mc.at("k").get<int>();
        McOptions opt;
        opt.samples = mc.value("samples", 100000LL);
        opt.seed = g.seed;
        auto est = mc_correlation(pts, n, k, doubles_or(mc, "x", n, 1.0), doubles_or(mc, "y", k, 0.5), opt);
        rep["monte_carlo"] = est.to_json();
        double z = est.stderr_ > 0 ? std::abs(est.estimate - rep["kernel"].get<double>()) / est.stderr_ : 0;
        rep["monte_carlo"]["z_score"] = z;
        if (z > mc.value("max_z", 4.0)) code = std::max(code, static_cast<int>(diagnostic_failed));
    }
    Output out(g.out);
    out.stream() << rep.dump(2) << '\n';
    return code;
}

// ---- shape and density

int cmd_shape(const Globals& g, json job) {
    std::vector<double> xs;
    if (job.contains("steps")) {
        int steps = job.at("steps").get<int>();
        double x_max = job.value("x_max", 9.0 / 8);
        if (steps < 1 || !(x_max > 0 && x_max <= 9.0 / 8))
            throw ConfigError("shape: need steps >= 1 and x_max in (0, 9/8]");
        for (int a = 1; a <= steps; ++a) xs.push_back(x_max * a / steps);
    } else {
        for (int a = 1; a <= 112; ++a) xs.push_back(a / 100.0);
        xs.push_back(9.0 / 8);
    }
    std::vector<std::string> rows(xs.size());
#pragma omp parallel for schedule(static)
    for (std::size_t a = 0; a < xs.size(); ++a) {
        auto ls = limit_shape(xs[a]);
        rows[a] = fmt(xs[a]) + ',' + fmt(ls.y_minus) + ',' + fmt(ls.y_plus) + '\n';
    }
    Output out(g.out);
    out.stream() << "x,y_minus,y_plus\n";
    for (const auto& r : rows) out.stream() << r;
    return ok;
}

int cmd_density(const Globals& g, json job) {
    int nx = job.value("nx", 50), ny = job.value("ny", 80);
    double y_min = job.value("y_min", -1.0), y_max = job.value("y_max", 7.0);
    if (nx < 1 || ny < 1 || !(y_max > y_min)) throw ConfigError("density: need nx, ny >= 1 and y_max > y_min");
    std::vector<std::string> rows(nx);
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < nx; ++a) {
        double x = (a + 0.5) / nx;
        std::string s;
        for (int b = 0; b <= ny; ++b) {
            double y = y_min + (y_max - y_min) * b / ny;
            s += fmt(x) + ',' + fmt(y) + ',' + fmt(limit_density(x, y)) + '\n';
        }
        rows[a] = std::move(s);
    }
    Output out(g.out);
    out.stream() << "x,y,rho\n";
    for (const auto& r : rows) out.stream() << r;
    return ok;
}

// ---- dynamics

int cmd_dynamics(const Globals& g, json job) {
    std::string mode = job.value("mode", "coupled");
    json rep;
    int code = ok;
    if (mode == "coupled") {
        int n = job.value("n", 2), k = job.value("k", 2);
        long long runs = job.value("runs", 1000LL);
        if (n < 1 || k < 1 || runs < 1) throw ConfigError("dynamics: n, k and runs must be positive");
        auto x = doubles_or(job, "x", n, 1.0);
        auto y = doubles_or(job, "y", k, 1.0 / 3);
        long long matched = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : matched)
        for (long long r = 0; r < runs; ++r) {
            std::seed_seq seq{static_cast<std::uint32_t>(g.seed), static_cast<std::uint32_t>(g.seed >> 32),
                              static_cast<std::uint32_t>(r)};
            std::mt19937_64 rng(seq);
            if (run_coupled(n, k, x, y, rng).match) ++matched;
        }
        rep = {{"mode", mode}, {"n", n}, {"k", k}, {"runs", runs}, {"matched", matched}, {"pass", matched == runs}};
        if (matched != runs) code = verification_failed;
    } else if (mode == "stationarity") {
        require_keys(job, {"spec", "pi"}, "dynamics");
        auto s = SpecTuple::from_json(job.at("spec"));
        auto pi = Specialization::from_json(job.at("pi"));
        auto r = stationarity_test(s, pi, job.value("samples", 20000LL), job.value("size_cap", 12), g.seed);
        rep = r.to_json();
        rep["mode"] = mode;
        rep["pass"] = r.p_value > 0.001;
        if (r.p_value <= 0.001) code = diagnostic_failed;
    } else {
        throw ConfigError("dynamics: mode must be coupled or stationarity");
    }
    Output out(g.out);
    out.stream() << rep.dump(2) << '\n';
    return code;
}

// ---- limits

template <class A, class B>
std::vector<std::pair<A, B>> pairs(const json& job, std::vector<std::pair<A, B>> fallback) {
    if (!job.contains("points")) return fallback;
    std::vector<std::pair<A, B>> out;
    for (const auto& p : job.at("points")) {
        if (!p.is_array() || p.size() != 2) throw ConfigError("limits: points are [tau, alpha] pairs");
        out.push_back({p[0].get<A>(), p[1].get<B>()});
    }
    return out;
}

int cmd_limits(const Globals& g, json job) {
    require_keys(job, {"kernel"}, "limits");
    auto kind = limit_kind_from_string(job.at("kernel").get<std::string>());
    auto ns = job.contains("ns") ? job.at("ns").get<std::vector<int>>() : std::vector<int>{100, 200, 400};
    ConvergenceReport rep;
    switch (kind) {
        case LimitKind::sine:
            rep = sine_convergence(job.value("x", 0.5), job.value("y", 0.0),
                                   pairs<long, long>(job, {{0, 0}, {0, 1}, {1, 0}}), ns, job.value("threshold", 0.02));
            break;
        case LimitKind::airy:
            rep = airy_convergence(job.value("x", 0.5), job.value("branch", std::string("lower")) == "upper",
                                   pairs<double, double>(job, {{0, 0}, {0, 1}, {0.5, 0.5}}), ns,
                                   job.value("threshold", 0.05));
            break;
        case LimitKind::gue_corners:
            rep = gue_corners_convergence(pairs<int, double>(job, {{1, 0.0}, {2, 0.5}, {2, -0.5}}), ns,
                                          job.value("threshold", 0.05));
            break;
        case LimitKind::pearcey:
            rep = pearcey_convergence(pairs<double, double>(job, {{0, 1}, {0.5, 1.5}}), ns, job.value("threshold", 0.05),
                                      job.value("gaussian_sign", std::string("derived")) == "printed"
                                          ? PearceySign::as_printed
                                          : PearceySign::derived);
            break;
    }
    Output out(g.out);
    out.stream() << rep.to_json().dump(2) << '\n';
    return rep.pass ? ok : diagnostic_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sspkit: symplectic Schur process toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--threads", g.threads, "OpenMP threads (default: SSPKIT_THREADS or all cores)");
    app.add_option("--out", g.out, "output file (default: stdout)");
    app.add_option("--config", g.config, "JSON job file");

    json flags = json::object();
    auto* sample = app.add_subcommand("sample", "point clouds (sample,j,pos) from the Berele sampler");
    int n = 0, k = 0;
    long long samples = 0;
    std::vector<double> xs, ys;
    sample->add_option("-n", n, "number of Laurent variables");
    sample->add_option("-k", k, "number of levels");
    sample->add_option("--samples", samples, "number of samples");
    sample->add_option("--x", xs, "x parameters (one value is repeated)");
    sample->add_option("--y", ys, "y parameters (one value is repeated)");

    auto* verify_cmd = app.add_subcommand("verify", "identity verification jobs (JSON report)");
    std::string identity;
    int D = 0;
    verify_cmd->add_option("--identity", identity, "identity name, e.g. CL-UNIV");
    verify_cmd->add_option("-D", D, "truncation degree");

    auto* kernel_cmd = app.add_subcommand("kernel", "correlation kernel matrix (JSON)");
    auto* correlate_cmd = app.add_subcommand("correlate", "correlation functions from the kernel, enumeration and Monte Carlo");
    std::vector<std::string> point_args;
    int berele_n = 0;
    for (auto* c : {kernel_cmd, correlate_cmd}) {
        c->add_option("--points", point_args, "points such as 1:0 or 2':-1");
        c->add_option("--berele-n", berele_n, "use the x = 1, y = 1/2 Berele kernel with n variables");
    }

    auto* shape_cmd = app.add_subcommand("shape", "limit shape CSV (x,y_minus,y_plus)");
    int steps = 0;
    shape_cmd->add_option("--steps", steps, "number of x values");
    auto* density_cmd = app.add_subcommand("density", "limit density grid CSV (x,y,rho)");
    int nx = 0, ny = 0;
    density_cmd->add_option("--nx", nx, "grid columns");
    density_cmd->add_option("--ny", ny, "grid rows");

    auto* dynamics_cmd = app.add_subcommand("dynamics", "coupled dynamics or stationarity diagnostics (JSON)");
    std::string mode;
    long long runs = 0;
    dynamics_cmd->add_option("--mode", mode, "coupled or stationarity");
    dynamics_cmd->add_option("--runs", runs, "coupled runs");

    auto* limits_cmd = app.add_subcommand("limits", "finite-n convergence to a limit kernel (JSON)");
    std::string kernel_name;
    limits_cmd->add_option("--kernel", kernel_name, "sine, airy, gue_corners or pearcey");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage_error;
    }

    if (g.threads <= 0)
        if (const char* env = std::getenv("SSPKIT_THREADS")) g.threads = std::atoi(env);
    if (g.threads > 0) omp_set_num_threads(g.threads);

    try {
        json job = load_config(g.config);
        auto set = [&](const char* key, bool given, const json& v) {
            if (given) job[key] = v;
        };
        if (sample->parsed()) {
            set("n", n > 0, n);
            set("k", k > 0, k);
            set("samples", samples > 0, samples);
            set("x", !xs.empty(), xs);
            set("y", !ys.empty(), ys);
            return cmd_sample(g, job);
        }
        if (verify_cmd->parsed()) {
            set("identity", !identity.empty(), identity);
            set("D", D > 0, D);
            return cmd_verify(g, job);
        }
        if (kernel_cmd->parsed() || correlate_cmd->parsed()) {
            set("points", !point_args.empty(), point_args);
            set("berele_n", berele_n > 0, berele_n);
            return kernel_cmd->parsed() ? cmd_kernel(g, job) : cmd_correlate(g, job);
        }
        if (shape_cmd->parsed()) {
            set("steps", steps > 0, steps);
            return cmd_shape(g, job);
        }
        if (density_cmd->parsed()) {
            set("nx", nx > 0, nx);
            set("ny", ny > 0, ny);
            return cmd_density(g, job);
        }
        if (dynamics_cmd->parsed()) {
            set("mode", !mode.empty(), mode);
            set("runs", runs > 0, runs);
            return cmd_dynamics(g, job);
        }
        if (limits_cmd->parsed()) {
            set("kernel", !kernel_name.empty(), kernel_name);
            return cmd_limits(g, job);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage_error;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return diagnostic_failed;
    }
    return usage_error;
}
