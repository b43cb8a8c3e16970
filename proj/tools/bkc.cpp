/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
// Command-line driver. Everything numerical goes through the C interface of libbkcorners.
#include <bkcorners/bkcorners.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands{"enumerate",   "sample",     "verify-exact", "verify-analytic",
                                         "verify-lln", "verify-clt", "kernel"};

struct RunConfig {
    std::string command;
    double theta = 1.0;
    int K = 10;
    int N = -1;  // negative: N = K
    std::uint64_t seed = 1;
    int samples = 200;
    int burnin = -1;  // negative: library default
    int thin = -1;
    int chains = 8;
    std::vector<int> levels;                     // levels to record when sampling
    std::vector<double> s_values;                // macroscopic levels for lln, clt and kernel
    int grid = 41;                               // points per axis in kernel and lln grids
    double tol = 1.0;                            // multiplies every tolerance
    std::string variant = "omega";               // GFF identification for verify-clt
    std::int64_t guard = 0;                      // enumeration budget, 0 = library default
    std::string out = ".";
};

json to_json(const RunConfig& c)
{
    return json{{"command", c.command}, {"theta", c.theta},   {"K", c.K},       {"N", c.N},
                {"seed", c.seed},       {"samples", c.samples}, {"burnin", c.burnin}, {"thin", c.thin},
                {"chains", c.chains},   {"levels", c.levels}, {"s", c.s_values}, {"grid", c.grid},
                {"tol", c.tol},         {"variant", c.variant}, {"guard", c.guard}, {"out", c.out}};
}

// A failed library call; carries the status for the failure report.
struct ApiError : std::runtime_error {
    bk_status status;
    ApiError(bk_status s, const std::string& where)
        : std::runtime_error(where + ": " + bk_status_name(s) + ": " + bk_last_error()), status(s)
    {
    }
};

void check(bk_status s, const char* where)
{
    if (s != BK_OK) throw ApiError(s, where);
}

// Writes doubles with 17 significant digits so values round-trip exactly.
std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> outputs;
    json failures = json::array();
};

void write_file(const fs::path& p, const std::string& body)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << body;
}

std::string utc_timestamp()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/* ---- commands ------------------------------------------------------------ */

Outcome run_enumerate(const RunConfig& c, const fs::path& dir)
{
    bk_enumeration* e = nullptr;
    check(bk_enumerate(c.theta, c.K, c.N, c.guard, &e), "enumerate");
    std::ostringstream os;
    os << "config_id,level,i,lambda,log_weight,probability\n";
    std::vector<int> lam(static_cast<size_t>(std::max(c.N, 1)));
    for (size_t k = 0; k < bk_enumeration_size(e); ++k)
        for (int n = 1; n <= c.N; ++n) {
            double lw = 0.0, p = 0.0;
            check(bk_enumeration_config(e, k, n, lam.data(), &lw, &p), "enumerate");
            for (int i = 0; i < n; ++i)
                os << k << ',' << n << ',' << i + 1 << ',' << lam[i] << ',' << num(lw) << ',' << num(p) << '\n';
        }
    std::cout << "configurations: " << bk_enumeration_size(e) << "  Z = " << num(bk_enumeration_partition_function(e))
              << '\n';
    bk_enumeration_free(e);
    write_file(dir / "enumerate.csv", os.str());
    return {true, {"enumerate.csv"}, json::array()};
}

struct BatchHolder {
    bk_batch* b = nullptr;
    ~BatchHolder() { bk_batch_free(b); }
};

void sample_into(const RunConfig& c, bool all_levels, BatchHolder& h)
{
    bk_chain_config cfg;
    bk_chain_config_init(&cfg);
    cfg.seed = c.seed;
    cfg.burnin_sweeps = c.burnin;
    cfg.thin_sweeps = c.thin;
    cfg.n_samples = c.samples;
    if (!all_levels && !c.levels.empty()) {
        cfg.record_levels = c.levels.data();
        cfg.n_record_levels = static_cast<int>(c.levels.size());
    }
    check(bk_sample(c.theta, c.K, c.N, &cfg, c.chains, &h.b), "sample");
}

Outcome run_sample(const RunConfig& c, const fs::path& dir)
{
    BatchHolder h;
    sample_into(c, false, h);
    std::ostringstream os;
    std::vector<int> levels(static_cast<size_t>(c.N)), lam(static_cast<size_t>(c.N));
    for (size_t k = 0; k < bk_batch_size(h.b); ++k) {
        int chain = 0, count = 0;
        int64_t sweep = 0;
        check(bk_batch_snapshot(h.b, k, &chain, &sweep), "sample");
        check(bk_batch_levels(h.b, k, levels.data(), c.N, &count), "sample");
        json rec{{"chain", chain}, {"sweep", sweep}, {"levels", json::object()}};
        for (int j = 0; j < count; ++j) {
            check(bk_batch_level(h.b, k, levels[j], lam.data(), c.N), "sample");
            rec["levels"][std::to_string(levels[j])] = std::vector<int>(lam.begin(), lam.begin() + levels[j]);
        }
        os << rec.dump() << '\n';
    }
    write_file(dir / "samples.jsonl", os.str());
    std::cout << "snapshots: " << bk_batch_size(h.b) << '\n';
    return {true, {"samples.jsonl"}, json::array()};
}

Outcome run_suite(bk_status (*fn)(double, bk_suite**), const char* name, const RunConfig& c, const fs::path& dir)
{
    bk_suite* s = nullptr;
    check(fn(c.tol, &s), name);
    Outcome o;
    std::ostringstream os;
    os << "check,value,tol,pass\n";
    for (size_t k = 0; k < bk_suite_size(s); ++k) {
        const char* nm = nullptr;
        double v = 0.0, t = 0.0;
        int pass = 0;
        check(bk_suite_check(s, k, &nm, &v, &t, &pass), name);
        os << csv_quote(nm) << ',' << num(v) << ',' << num(t) << ',' << pass << '\n';
        if (!pass) {
            o.pass = false;
            o.failures.push_back({{"check", nm}, {"value", v}, {"tol", t}});
        }
        std::cout << (pass ? "ok   " : "FAIL ") << nm << "  " << num(v) << " < " << num(t) << '\n';
    }
    bk_suite_free(s);
    const std::string file = std::string(name) + ".csv";
    write_file(dir / file, os.str());
    o.outputs.push_back(file);
    return o;
}

std::string report_header() { return "quantity,estimate,stderr,target,zscore\n"; }

std::string report_line(const std::string& q, double est, double se, double target, double z)
{
    return csv_quote(q) + ',' + num(est) + ',' + num(se) + ',' + num(target) + ',' + num(z) + '\n';
}

Outcome run_lln(const RunConfig& c, const fs::path& dir)
{
    BatchHolder h;
    sample_into(c, true, h);
    const std::vector<double> sv = c.s_values.empty() ? std::vector<double>{1.0} : c.s_values;
    bk_lln r{};
    check(bk_lln_report(h.b, sv.data(), static_cast<int>(sv.size()), c.grid, &r), "verify-lln");
    const double limit = 0.05 * c.tol;
    Outcome o;
    o.pass = r.mean_gap < limit;
    std::string body = report_header();
    body += report_line("mean_sup_gap", r.mean_gap, r.stderr_gap, 0.0, r.stderr_gap > 0 ? r.mean_gap / r.stderr_gap : 0.0);
    body += report_line("max_sup_gap", r.max_gap, 0.0, 0.0, 0.0);
    write_file(dir / "lln.csv", body);
    o.outputs.push_back("lln.csv");
    std::cout << "mean sup gap " << num(r.mean_gap) << " (limit " << num(limit) << "), max " << num(r.max_gap) << '\n';
    if (!o.pass) o.failures.push_back({{"check", "mean_sup_gap"}, {"value", r.mean_gap}, {"tol", limit}});
    return o;
}

double f_one(double, void*) { return 1.0; }
double f_x(double x, void*) { return x; }

Outcome run_clt(const RunConfig& c, const fs::path& dir)
{
    BatchHolder h;
    sample_into(c, true, h);
    const std::vector<double> sv = c.s_values.empty() ? std::vector<double>{0.75, 1.25} : c.s_values;
    std::vector<std::string> names;
    std::vector<bk_pairing_spec> specs;
    for (double s : sv) {
        names.push_back("1@s=" + num(s));
        names.push_back("x@s=" + num(s));
    }
    for (size_t k = 0; k < sv.size(); ++k) {
        specs.push_back({names[2 * k].c_str(), sv[k], f_one, nullptr});
        specs.push_back({names[2 * k + 1].c_str(), sv[k], f_x, nullptr});
    }
    const double zlim = 3.0 * c.tol;
    const bk_gff_variant v = c.variant == "hat" ? BK_GFF_OMEGA_HAT : BK_GFF_OMEGA;

    bk_report* rep = nullptr;
    check(bk_clt_report(h.b, specs.data(), static_cast<int>(specs.size()), v, 400, zlim, &rep), "verify-clt");
    bk_report* st = nullptr;
    const bk_status sst = bk_stieltjes_cov_report(h.b, {2.0, 1.0}, 1.0, {2.0, -1.0}, 1.0, &st);
    if (sst != BK_OK) bk_report_free(rep);
    check(sst, "verify-clt");

    Outcome o;
    std::string body = report_header();
    for (bk_report* r : {rep, st}) {
        for (size_t k = 0; k < bk_report_size(r); ++k) {
            bk_report_row row{};
            check(bk_report_row_at(r, k, &row), "verify-clt");
            body += report_line(row.quantity, row.estimate, row.stderr_, row.target, row.zscore);
            const bool bad = row.checked && !(std::fabs(row.zscore) < zlim);
            if (bad) {
                o.pass = false;
                o.failures.push_back({{"check", row.quantity}, {"zscore", row.zscore}, {"limit", zlim}});
            }
            std::cout << (bad ? "FAIL " : (row.checked ? "ok   " : "info ")) << row.quantity << "  est " << num(row.estimate)
                      << "  target " << num(row.target) << "  z " << num(row.zscore) << '\n';
        }
    }
    bk_report_free(rep);
    bk_report_free(st);
    write_file(dir / "clt.csv", body);
    o.outputs.push_back("clt.csv");
    return o;
}

Outcome run_kernel(const RunConfig& c, const fs::path& dir)
{
    const std::vector<double> sv = c.s_values.empty() ? std::vector<double>{0.5, 1.0, 2.0} : c.s_values;
    const int g = std::max(c.grid, 2);
    std::ostringstream dens;
    dens << "x,s,mu,nu,h\n";
    for (double s : sv) {
        bk_edges e{};
        check(bk_edge_data(s, c.theta, &e), "kernel");
        const double lo = std::min(-c.theta, e.a) - 0.25, hi = std::max(1.0 / s, e.b) + 0.25;
        for (int k = 0; k < g; ++k) {
            const double x = lo + (hi - lo) * k / (g - 1);
            double mu = 0.0, nu = 0.0, hh = 0.0;
            check(bk_mu_density(x, s, c.theta, &mu), "kernel");
            check(bk_nu_density(x, s, c.theta, &nu), "kernel");
            check(bk_limit_height(x, s, c.theta, &hh), "kernel");
            dens << num(x) << ',' << num(s) << ',' << num(mu) << ',' << num(nu) << ',' << num(hh) << '\n';
        }
    }
    // covariance on a rectangle of points off the real axis, for every ordered pair s1 >= s2
    std::ostringstream cov;
    cov << "z1,s1,z2,s2,ReC,ImC\n";
    const int m = std::max(2, std::min(g, 11));
    for (double s1 : sv)
        for (double s2 : sv) {
            if (s1 < s2) continue;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const bk_complex z1{-3.0 + 6.0 * i / (m - 1), 1.0}, z2{-3.0 + 6.0 * j / (m - 1), -0.75};
                    bk_complex v{};
                    check(bk_covariance(z1, s1, z2, s2, c.theta, &v), "kernel");
                    auto z = [](bk_complex w) { return num(w.re) + (w.im < 0 ? "" : "+") + num(w.im) + "i"; };
                    cov << z(z1) << ',' << num(s1) << ',' << z(z2) << ',' << num(s2) << ',' << num(v.re) << ',' << num(v.im)
                        << '\n';
                }
        }
    write_file(dir / "kernel_density.csv", dens.str());
    write_file(dir / "kernel_covariance.csv", cov.str());
    return {true, {"kernel_density.csv", "kernel_covariance.csv"}, json::array()};
}

void apply_config_file(const std::string& path, RunConfig& c, const CLI::App& app)
{
    std::ifstream f(path);
    if (!f) throw CLI::ValidationError("--config", "cannot open " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
    if (!j.is_object()) throw CLI::ValidationError("--config", "top level must be an object");
    auto given = [&](const char* flag) { return app.get_option(flag)->count() > 0; };
    try {
        for (auto& [key, val] : j.items()) {
            if (key == "command") { if (!given("command")) c.command = val.get<std::string>(); }
            else if (key == "theta") { if (!given("--theta")) c.theta = val.get<double>(); }
            else if (key == "K") { if (!given("--K")) c.K = val.get<int>(); }
            else if (key == "N") { if (!given("--N")) c.N = val.get<int>(); }
            else if (key == "seed") { if (!given("--seed")) c.seed = val.get<std::uint64_t>(); }
            else if (key == "samples") { if (!given("--samples")) c.samples = val.get<int>(); }
            else if (key == "burnin") { if (!given("--burnin")) c.burnin = val.get<int>(); }
            else if (key == "thin") { if (!given("--thin")) c.thin = val.get<int>(); }
            else if (key == "chains") { if (!given("--chains")) c.chains = val.get<int>(); }
            else if (key == "levels") { if (!given("--levels")) c.levels = val.get<std::vector<int>>(); }
            else if (key == "s") { if (!given("--s")) c.s_values = val.get<std::vector<double>>(); }
            else if (key == "grid") { if (!given("--grid")) c.grid = val.get<int>(); }
            else if (key == "tol") { if (!given("--tol")) c.tol = val.get<double>(); }
            else if (key == "variant") { if (!given("--variant")) c.variant = val.get<std::string>(); }
            else if (key == "guard") { if (!given("--guard")) c.guard = val.get<std::int64_t>(); }
            else if (key == "out") { if (!given("--out")) c.out = val.get<std::string>(); }
            else throw CLI::ValidationError("--config", "unknown key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
}

void validate(const RunConfig& c)
{
    bool known = false;
    for (const auto& k : kCommands) known = known || k == c.command;
    if (!known) throw CLI::ValidationError("command", "unknown or missing command '" + c.command + "'");
    if (c.variant != "omega" && c.variant != "hat") throw CLI::ValidationError("--variant", "expected omega or hat");
    if (c.tol <= 0) throw CLI::ValidationError("--tol", "must be positive");
}

// Unless given explicitly, N covers every level the field statistics will read.
int default_levels(const RunConfig& c)
{
    int n = c.K;
    if (c.command == "verify-lln" || c.command == "verify-clt") {
        std::vector<double> sv = c.s_values;
        if (sv.empty()) sv = c.command == "verify-lln" ? std::vector<double>{1.0} : std::vector<double>{0.75, 1.25};
        if (c.command == "verify-clt") sv.push_back(1.0);  // the Stieltjes covariance check
        for (double s : sv) n = std::max(n, static_cast<int>(std::ceil(s * c.K * std::max(1.0, 1.0 / c.theta) - 1e-9)));
    }
    return n;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact enumeration, sampling and verification for the beta-Krawtchouk corners process", "bkc"};
    RunConfig c;
    std::string config_path;
    std::string commands;
    for (const auto& k : kCommands) commands += (commands.empty() ? "" : ", ") + k;
    app.add_option("command", c.command, "one of: " + commands);
    app.add_option("--theta", c.theta, "beta/2");
    app.add_option("--K", c.K, "box width");
    app.add_option("--N", c.N, "number of levels (default K)");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--samples", c.samples, "snapshots per chain");
    app.add_option("--burnin", c.burnin, "burn-in sweeps (default 20K)");
    app.add_option("--thin", c.thin, "sweeps between snapshots (default K)");
    app.add_option("--chains", c.chains, "independent chains");
    app.add_option("--levels", c.levels, "levels to record when sampling")->delimiter(',');
    app.add_option("--s", c.s_values, "macroscopic levels for kernel, lln and clt")->delimiter(',');
    app.add_option("--grid", c.grid, "grid points per axis");
    app.add_option("--tol", c.tol, "multiplier applied to every tolerance");
    app.add_option("--variant", c.variant, "GFF identification for verify-clt: omega or hat");
    app.add_option("--guard", c.guard, "enumeration budget (0 = default)");
    app.add_option("--config", config_path, "JSON file with the same keys; flags take precedence");
    app.add_option("--out", c.out, "output directory");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) apply_config_file(config_path, c, app);
        validate(c);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    }
    if (c.N < 0) c.N = default_levels(c);

    const fs::path dir(c.out);
    json manifest{{"tool", "bkc"},
                  {"version", bk_version()},
                  {"config", to_json(c)},
                  {"resolved", {{"burnin", c.burnin >= 0 ? c.burnin : bk_default_burnin(c.K)},
                                {"thin", c.thin >= 0 ? c.thin : bk_default_thin(c.K)}}},
                  {"timestamp", utc_timestamp()}};
    Outcome o;
    int code = 0;
    json error;
    try {
        fs::create_directories(dir);
        if (c.command == "enumerate") o = run_enumerate(c, dir);
        else if (c.command == "sample") o = run_sample(c, dir);
        else if (c.command == "verify-exact") o = run_suite(bk_verify_exact, "verify_exact", c, dir);
        else if (c.command == "verify-analytic") o = run_suite(bk_verify_analytic, "verify_analytic", c, dir);
        else if (c.command == "verify-lln") o = run_lln(c, dir);
        else if (c.command == "verify-clt") o = run_clt(c, dir);
        else o = run_kernel(c, dir);
        code = o.pass ? 0 : 1;
    } catch (const ApiError& e) {
        error = {{"status", bk_status_name(e.status)}, {"message", e.what()}};
        code = 3;
    } catch (const std::exception& e) {
        error = {{"status", "io"}, {"message", e.what()}};
        code = 3;
    }
    manifest["outputs"] = o.outputs;
    manifest["exit_code"] = code;
    try {
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        if (code != 0) {
            json report{{"command", c.command}, {"exit_code", code}, {"failed_checks", o.failures}};
            if (!error.is_null()) report["error"] = error;
            write_file(dir / "failure_report.json", report.dump(2) + "\n");
        } else if (fs::exists(dir / "failure_report.json")) {
            fs::remove(dir / "failure_report.json");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    if (!error.is_null()) std::cerr << "error: " << error["message"].get<std::string>() << '\n';
    return code;
}
