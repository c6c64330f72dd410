#include "zw/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "zw/dpp_core.hpp"
#include "zw/rh_kernel.hpp"
#include "zw/scaling_limit.hpp"
#include "zw/verify.hpp"

namespace zw::cli {

using json = nlohmann::json;
using cplx = std::complex<double>;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// parameter entries come as numbers, [re, im] pairs, or exact literals like
// "2" and "5/2"
cplx parse_param(const json& j, bool& exact) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        exact = true;
        auto slash = s.find('/');
        if (slash == std::string::npos) return {std::stod(s), 0.0};
        double num = std::stod(s.substr(0, slash));
        double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) throw DomainError("parameter literal divides by zero");
        return {num / den, 0.0};
    }
    throw DomainError("parameter must be a number, [re, im], or a rational literal");
}

// index-sharded map; results land in caller-owned slots, so the output
// order does not depend on the thread count
template <typename F>
void parallel_for(int threads, long long count, F&& fn) {
    threads = std::min<long long>(threads, count);
    if (threads <= 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (long long i; (i = next.fetch_add(1)) < count;) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct Csv {
    std::ofstream out;
    explicit Csv(const std::filesystem::path& path) : out(path) {
        if (!out) throw Error("cannot open output file " + path.string());
    }
    void header(const RunConfig& cfg, const std::string& extra = "") {
        const auto& p = cfg.params;
        out << "# zwkernel v1.0\n";
        out << "# params z=" << fmt(p.z.real()) << "+" << fmt(p.z.imag()) << "i"
            << " z'=" << fmt(p.zp.real()) << "+" << fmt(p.zp.imag()) << "i"
            << " w=" << fmt(p.w.real()) << "+" << fmt(p.w.imag()) << "i"
            << " w'=" << fmt(p.wp.real()) << "+" << fmt(p.wp.imag()) << "i\n";
        out << "# n=" << cfg.n << " window=" << fmt(cfg.window) << " seed=" << cfg.seed << "\n";
        if (!extra.empty()) out << "# " << extra << "\n";
    }
};

int cmd_measure(const RunConfig& cfg, const std::filesystem::path& path) {
    const auto& p = cfg.params;
    std::vector<meas::Signature> sigs;
    if (p.class_zz.cls == meas::PairClass::Degenerate &&
        p.class_ww.cls == meas::PairClass::Degenerate) {
        if (p.class_zz.m + p.class_ww.m == 0)
            std::fprintf(stderr, "note: support is a single signature; proceeding\n");
        sigs = meas::enumerate_support(p.class_zz.m, p.class_ww.m, cfg.n);
    } else {
        sigs = meas::enumerate_box(-static_cast<long long>(cfg.window),
                                   static_cast<long long>(cfg.window), cfg.n);
    }
    Csv csv(path);
    csv.header(cfg, "columns signature,p_n");
    csv.out << "signature,p_n\n";
    double total = 0.0;
    for (const auto& lam : sigs) {
        double mass = meas::measure(p, lam).p_n;
        total += mass;
        csv.out << '"' << lam.str() << '"' << ',' << fmt(mass) << '\n';
    }
    std::fprintf(stderr, "measure: %zu signatures, total mass %.12g\n", sigs.size(), total);
    return kOk;
}

int cmd_kernel_n(const RunConfig& cfg, const std::filesystem::path& path) {
    auto lat = dpp::TruncatedLattice::make(cfg.params, cfg.n, cfg.window);
    const long long m = static_cast<long long>(lat.size());
    std::vector<double> values(static_cast<size_t>(m * m));
    parallel_for(cfg.threads, m * m, [&](long long idx) {
        const auto& x = lat.points[static_cast<size_t>(idx / m)];
        const auto& y = lat.points[static_cast<size_t>(idx % m)];
        values[static_cast<size_t>(idx)] = rh::kernel_KN(cfg.params, cfg.n, x, y);
    });
    Csv csv(path);
    csv.header(cfg, "tail_bound=" + fmt(lat.tail_bound) + " columns x,y,K");
    csv.out << "x,y,K\n";
    for (long long idx = 0; idx < m * m; ++idx)
        csv.out << fmt(lat.points[static_cast<size_t>(idx / m)].value()) << ','
                << fmt(lat.points[static_cast<size_t>(idx % m)].value()) << ','
                << fmt(values[static_cast<size_t>(idx)]) << '\n';
    return kOk;
}

int cmd_kernel_limit(const RunConfig& cfg, const std::filesystem::path& path) {
    Csv csv(path);
    csv.header(cfg, "columns x,y,K");
    csv.out << "x,y,K\n";
    for (double x : cfg.grid)
        for (double y : cfg.grid)
            csv.out << fmt(x) << ',' << fmt(y) << ',' << fmt(lim::kernel_K(cfg.params, x, y))
                    << '\n';
    return kOk;
}

int cmd_converge(const RunConfig& cfg, const std::filesystem::path& path) {
    const long long g = static_cast<long long>(cfg.grid.size());
    const long long per = g * g;
    const long long total = per * static_cast<long long>(cfg.n_list.size());
    std::vector<double> scaled(static_cast<size_t>(total)), limv(static_cast<size_t>(per));
    parallel_for(cfg.threads, per, [&](long long idx) {
        limv[static_cast<size_t>(idx)] =
            lim::kernel_K(cfg.params, cfg.grid[static_cast<size_t>(idx / g)],
                          cfg.grid[static_cast<size_t>(idx % g)]);
    });
    parallel_for(cfg.threads, total, [&](long long idx) {
        int n = cfg.n_list[static_cast<size_t>(idx / per)];
        double x = cfg.grid[static_cast<size_t>((idx % per) / g)];
        double y = cfg.grid[static_cast<size_t>(idx % g)];
        auto xn = meas::nearest_lattice_point(n, n * x);
        auto yn = meas::nearest_lattice_point(n, n * y);
        scaled[static_cast<size_t>(idx)] = n * rh::kernel_KN(cfg.params, n, xn, yn);
    });
    Csv csv(path);
    csv.header(cfg, "columns N,x,y,KN_scaled,K_limit,abs_err");
    csv.out << "N,x,y,KN_scaled,K_limit,abs_err\n";
    for (long long idx = 0; idx < total; ++idx) {
        int n = cfg.n_list[static_cast<size_t>(idx / per)];
        double x = cfg.grid[static_cast<size_t>((idx % per) / g)];
        double y = cfg.grid[static_cast<size_t>(idx % g)];
        double lv = limv[static_cast<size_t>(idx % per)];
        csv.out << n << ',' << fmt(x) << ',' << fmt(y) << ',' << fmt(scaled[static_cast<size_t>(idx)])
                << ',' << fmt(lv) << ',' << fmt(std::abs(scaled[static_cast<size_t>(idx)] - lv))
                << '\n';
    }
    return kOk;
}

int cmd_sample(const RunConfig& cfg, const std::filesystem::path& path) {
    auto draws = dpp::sample_process(cfg.params, cfg.n, cfg.seed, cfg.count, cfg.window);
    Csv csv(path);
    csv.header(cfg, "columns seed,index,signature");
    csv.out << "seed,index,signature\n";
    for (size_t i = 0; i < draws.size(); ++i)
        csv.out << cfg.seed << ',' << i << ',' << '"' << draws[i].str() << '"' << '\n';
    return kOk;
}

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& path) {
    auto checks = verify::run_all(cfg.params, cfg.n, cfg.seed);
    json report;
    report["version"] = "1.0";
    report["n"] = cfg.n;
    report["seed"] = cfg.seed;
    bool all = true;
    json arr = json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual},
                       {"tol", c.tol}});
        all = all && c.pass;
        std::fprintf(stderr, "%-36s %s  residual %.3e (tol %.1e)\n", c.name.c_str(),
                     c.pass ? "pass" : "FAIL", c.residual, c.tol);
    }
    report["checks"] = arr;
    report["all_pass"] = all;
    std::ofstream out(path);
    out << report.dump(2) << "\n";
    return all ? kOk : kNumericalFailure;
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& command) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& ex) {
        throw DomainError(std::string("config is not valid JSON: ") + ex.what());
    }
    RunConfig cfg;
    cfg.command = command.empty() ? j.value("command", "") : command;
    if (!j.contains("params")) throw DomainError("config lacks \"params\"");
    const json& pj = j["params"];
    bool exact = false;
    cplx z = parse_param(pj.at("z"), exact);
    cplx zp = parse_param(pj.at("z_prime"), exact);
    cplx w = parse_param(pj.at("w"), exact);
    cplx wp = parse_param(pj.at("w_prime"), exact);
    cfg.params = meas::classify(z, zp, w, wp, exact);

    cfg.n = j.value("n", 3);
    if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<int>>();
    if (cfg.n_list.empty()) cfg.n_list = {cfg.n};
    cfg.window = j.value("window", 25.0);
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (g.is_array()) {
            cfg.grid = g.get<std::vector<double>>();
        } else {
            double lo = g.at("min").get<double>(), hi = g.at("max").get<double>();
            int count = g.at("count").get<int>();
            for (int i = 0; i < count; ++i)
                cfg.grid.push_back(lo + (hi - lo) * i / std::max(1, count - 1));
        }
    }
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.count = j.value("count", 100);
    cfg.tolerance = j.value("tolerance", 1e-8);
    cfg.output = j.value("output", "");
    cfg.timestamps = j.value("timestamps", false);
    if (cfg.tolerance <= 0.0) throw DomainError("tolerance must be positive");
    if (cfg.window <= 0.0) throw DomainError("window must be positive");
    return cfg;
}

int run_command(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    bool is_json = cfg.command == "verify";
    std::filesystem::path path =
        dir / (cfg.output.empty() ? cfg.command + (is_json ? ".json" : ".csv") : cfg.output);

    if (!cfg.params.admissible) {
        std::fprintf(stderr, "error: parameters are not admissible\n");
        return kInadmissible;
    }
    try {
        if (cfg.command == "measure") return cmd_measure(cfg, path);
        if (cfg.command == "kernel-n") return cmd_kernel_n(cfg, path);
        if (cfg.command == "kernel-limit") return cmd_kernel_limit(cfg, path);
        if (cfg.command == "converge") return cmd_converge(cfg, path);
        if (cfg.command == "sample") return cmd_sample(cfg, path);
        if (cfg.command == "verify") return cmd_verify(cfg, path);
    } catch (const ConvergenceError& ex) {
        std::fprintf(stderr, "numerical failure: %s\n", ex.what());
        return kNumericalFailure;
    } catch (const Error& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kNumericalFailure;
    }
    std::fprintf(stderr, "error: unknown command \"%s\"\n", cfg.command.c_str());
    return kConfigError;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"zw-measure kernels: tabulation, sampling, and verification"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads;  // reserved; grids are cheap at desk scale

    for (const char* name :
         {"measure", "kernel-n", "kernel-limit", "converge", "sample", "verify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (default: current)");
        sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--threads", threads, "worker threads for grid maps");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    std::string command = app.get_subcommands().front()->get_name();
    std::ifstream in(config_path);
    if (!in) {
        std::fprintf(stderr, "error: cannot read config %s\n", config_path.c_str());
        return kConfigError;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    RunConfig cfg;
    try {
        cfg = parse_config(text, command);
    } catch (const Error& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return kConfigError;
    }
    if (seed_override) cfg.seed = *seed_override;
    if (threads) cfg.threads = std::max(1, *threads);
    return run_command(cfg, out_dir);
}

}  // namespace zw::cli
