#include "momenta/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "momenta/suites.hpp"

namespace momenta {

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

std::uint64_t default_seed()
{
    const char* env = std::getenv("MOMENTA_SEED");
    if (env == nullptr || *env == '\0')
        return 0;
    try
    {
        return std::stoull(env);
    }
    catch (const std::exception&)
    {
        throw InputError(std::string("MOMENTA_SEED is not an unsigned integer: ") + env);
    }
}

std::vector<std::string> tokens(std::string text)
{
    for (char& c : text)
        if (c == ',')
            c = ' ';
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

/// Rows separated by ';', entries by whitespace or ','.
IMat parse_weights(const std::string& text)
{
    std::vector<std::vector<long long>> rows;
    std::stringstream all(text);
    std::string row;
    while (std::getline(all, row, ';'))
    {
        std::vector<long long> r;
        for (const std::string& tok : tokens(row))
        {
            std::size_t used = 0;
            long long v = 0;
            try
            {
                v = std::stoll(tok, &used);
            }
            catch (const std::exception&)
            {
                used = 0;
            }
            if (used != tok.size())
                throw InputError("weights must be integers, got '" + tok + "'");
            r.push_back(v);
        }
        if (!r.empty())
            rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw InputError("empty weight matrix");
    IMat w(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        if (rows[i].size() != rows.front().size())
            throw InputError("weight rows have different lengths");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return w;
}

Vec parse_vector(const std::string& text)
{
    std::vector<double> vals;
    for (const std::string& tok : tokens(text))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(tok, &used);
        }
        catch (const std::exception&)
        {
            used = 0;
        }
        if (used != tok.size())
            throw InputError("not a number: '" + tok + "'");
        vals.push_back(v);
    }
    return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

struct Options
{
    std::uint64_t seed = 0;
    double tol_scale = 1.0;
    std::string report_path;
    std::string weights;
    std::string mu;
    std::string model;
    int genus = 1;
    long long chern = 1;
    int samples = 100;
    bool quick = false;
};

std::vector<Suite> run_all(Rng& rng, const Options& o)
{
    const bool q = o.quick;
    const double ts = o.tol_scale;
    std::vector<Suite> out;
    out.push_back(suite_double_orthogonal(rng, q ? 40 : 200, ts));
    out.push_back(suite_invariant_splitting(rng, q ? 10 : 20, ts));
    out.push_back(suite_momentum_relation(rng, q ? 200 : 1000, ts));
    out.push_back(suite_bifurcation(rng, q ? 10 : 50, ts));
    out.push_back(suite_normal_form(rng, {}, q ? 16 : 64, ts));
    out.push_back(suite_mgs(rng, q ? 32 : 128, ts));
    out.push_back(suite_reduction_examples(rng, ts));
    out.push_back(suite_reduced_dynamics(rng, q ? 2.0 : 10.0, 1e-3, ts));
    for (int g = 1; g <= (q ? 2 : 3); ++g)
        out.push_back(suite_gauge_flat(rng, g, q ? 20 : 100, q ? 10 : 50, 5, ts));
    out.push_back(suite_gauge_ym(rng, 2, {-2, 1}, q ? 20 : 100, 5, ts));
    out.push_back(suite_repvar(2, q ? 10 : 100, o.seed, ts));
    return out;
}

}  // namespace

json without_timing(json report)
{
    report.erase("wall_time_s");
    return report;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Momentum maps, normal forms and symplectic reduction: verification runs"};
    app.require_subcommand(1);
    app.fallthrough();
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "random seed (default: MOMENTA_SEED or 0)");
    app.add_option("--tol-scale", o.tol_scale, "multiplies every default tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--report", o.report_path, "write the JSON report here instead of stdout");

    std::function<std::vector<Suite>(Rng&)> job;

    auto* symplin = app.add_subcommand("symplin", "symplectic linear algebra")->require_subcommand(1);
    symplin->add_subcommand("verify", "double orthogonals and invariant splittings")->callback([&] {
        job = [&](Rng& rng) {
            return std::vector<Suite>{suite_double_orthogonal(rng, 200, o.tol_scale),
                                      suite_invariant_splitting(rng, 20, o.tol_scale)};
        };
    });

    auto* reduce = app.add_subcommand("reduce", "singular reduction")->require_subcommand(1);
    auto* linear = reduce->add_subcommand("linear", "torus representation on C^n given by integer weights");
    linear->add_option("--weights", o.weights, "k x n integer weights, rows separated by ';'")->required();
    linear->add_option("--mu", o.mu, "momentum level (default 0)");
    linear->callback([&] {
        job = [&](Rng& rng) {
            const IMat w = parse_weights(o.weights);
            const Vec mu = o.mu.empty() ? Vec() : parse_vector(o.mu);
            return std::vector<Suite>{suite_linear_reduction(rng, w, mu, o.tol_scale)};
        };
    });

    auto* normalform = app.add_subcommand("normalform", "normal forms of smooth maps")->require_subcommand(1);
    auto* demo = normalform->add_subcommand("demo", "normal form of a demo model");
    demo->add_option("--model", o.model, "model name, or 'all'")->required();
    demo->callback([&] {
        job = [&](Rng& rng) {
            std::vector<std::string> models;
            if (o.model != "all")
                models.push_back(o.model);
            return std::vector<Suite>{suite_normal_form(rng, models, 64, o.tol_scale)};
        };
    });

    auto* gauge = app.add_subcommand("gauge", "U(1) gauge theory on a closed surface")->require_subcommand(1);
    auto* flat = gauge->add_subcommand("flat", "Hodge theory and flat moduli");
    flat->add_option("--genus", o.genus, "genus >= 1")->required();
    flat->callback([&] {
        job = [&](Rng& rng) { return std::vector<Suite>{suite_gauge_flat(rng, o.genus, 100, 50, 5, o.tol_scale)}; };
    });
    auto* ym = gauge->add_subcommand("ym", "central Yang-Mills connection");
    ym->add_option("--genus", o.genus, "genus >= 1")->required();
    ym->add_option("--chern", o.chern, "Chern number")->required();
    ym->callback([&] {
        job = [&](Rng& rng) {
            return std::vector<Suite>{suite_gauge_ym(rng, o.genus, {o.chern}, 100, 5, o.tol_scale)};
        };
    });

    auto* repvar = app.add_subcommand("repvar", "SU(2) representation variety")->require_subcommand(1);
    auto* solve = repvar->add_subcommand("solve", "solve the relator from random seeds");
    solve->add_option("--genus", o.genus, "genus >= 1")->required();
    solve->add_option("--samples", o.samples, "number of seeds")->required();
    solve->callback([&] {
        job = [&](Rng&) { return std::vector<Suite>{suite_repvar(o.genus, o.samples, o.seed, o.tol_scale)}; };
    });

    auto* all = app.add_subcommand("all", "every suite");
    all->add_flag("--quick", o.quick, "reduced sample counts");
    all->callback([&] { job = [&](Rng& rng) { return run_all(rng, o); }; });

    for (CLI::App* sub : {symplin, reduce, linear, normalform, demo, gauge, flat, ym, repvar, solve, all})
        sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitPass;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    std::string command;
    for (const std::string& a : args)
        command += (command.empty() ? "" : " ") + a;

    json report;
    int code = kExitPass;
    const auto start = std::chrono::steady_clock::now();
    try
    {
        o.seed = seed ? *seed : default_seed();
        Rng rng(o.seed);
        std::vector<Suite> suites = job(rng);
        json js = json::array();
        bool pass = true;
        for (const Suite& s : suites)
        {
            js.push_back(s.to_json());
            pass = pass && s.pass();
        }
        report = {{"schema", 1},
                  {"command", command},
                  {"seed", o.seed},
                  {"tol_scale", o.tol_scale},
                  {"suites", js},
                  {"pass", pass}};
        code = pass ? kExitPass : kExitFail;
    }
    catch (const InputError& e)
    {
        err << "input error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const NumericalError& e)
    {
        report = {{"schema", 1},
                  {"command", command},
                  {"seed", o.seed},
                  {"tol_scale", o.tol_scale},
                  {"suites", json::array()},
                  {"error", e.what()},
                  {"pass", false}};
        code = kExitFail;
    }
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string text = report.dump(2) + "\n";
    if (o.report_path.empty())
    {
        out << text;
    }
    else
    {
        std::ofstream f(o.report_path);
        if (!f)
        {
            err << "cannot write report to " << o.report_path << "\n";
            return kExitUsage;
        }
        f << text;
        for (const auto& s : report["suites"])
            out << s["suite"].get<std::string>() << ": " << (s["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    }
    return code;
}

}  // namespace momenta
