// polynomiogram: render root-density images, run validation suites, solve
// single polynomials, and expand presets into editable configs.
//
// Exit codes: 0 ok, 1 I/O failure, 2 configuration or input error,
// 3 too many solver failures, 4 validation failure.

#include "polynomiogram/config.hpp"
#include "polynomiogram/density.hpp"
#include "polynomiogram/digest.hpp"
#include "polynomiogram/expr.hpp"
#include "polynomiogram/pipeline.hpp"
#include "polynomiogram/png.hpp"
#include "polynomiogram/presets.hpp"
#include "polynomiogram/render.hpp"
#include "polynomiogram/solver.hpp"
#include "polynomiogram/validate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace pg = polynomiogram;

namespace {

enum Exit : int { kOk = 0, kIo = 1, kConfig = 2, kNoConvergence = 3, kValidation = 4 };

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw pg::IoError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())))
        throw pg::IoError("cannot write '" + path + "'");
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_render(const std::string& path, const std::optional<std::uint64_t>& seed)
{
    std::string text;
    try {
        text = read_file(path);
    } catch (const pg::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }

    std::optional<pg::config::RunConfig> cfg;
    try {
        cfg = pg::config::load_config(text);
        if (seed) {
            cfg->plan.seed = *seed;
            if (auto* kac = std::get_if<pg::family::KacFamily>(&cfg->family.variant()))
                cfg->family = pg::family::KacFamily{kac->degree, *seed};
        }
    } catch (const pg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    }

    pg::pipeline::SweepResult res;
    try {
        res = pg::pipeline::sweep(*cfg);
    } catch (const pg::DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const pg::DegreeCapExceeded& e) {
        std::cerr << "config error: solver.degree_cap: " << e.what() << "\n";
        return kConfig;
    }

    std::cout << "samples=" << res.samples << "\n"
              << "rejected=" << res.rejected << "\n"
              << "eval_errors=" << res.eval_errors << "\n"
              << "solver_failures=" << res.solver_failures << "\n"
              << "roots_offered=" << res.roots_offered << "\n"
              << "roots_binned=" << res.grid.total_in << "\n"
              << "roots_dropped=" << res.grid.total_dropped << "\n"
              << "bounds=" << fmt(res.grid.bounds.re_min) << "," << fmt(res.grid.bounds.re_max) << ","
              << fmt(res.grid.bounds.im_min) << "," << fmt(res.grid.bounds.im_max) << "\n"
              << "workers=" << res.workers << "\n";

    try {
        const pg::render::Image img = pg::render::render(res.grid, cfg->render);
        if (!cfg->output.image.empty()) {
            pg::write_png(cfg->output.image, img);
            std::cout << "image=" << cfg->output.image << "\n";
        }
        std::cout << "pixel_sha256=" << pg::sha256_hex(img.pixels) << "\n";
        if (!cfg->output.grid_dump.empty()) {
            write_file(cfg->output.grid_dump, pg::density::dump(res.grid));
            std::cout << "grid_dump=" << cfg->output.grid_dump << "\n";
        }
        if (!cfg->output.roots_csv.empty()) {
            std::string csv = "re,im,sample_index\n";
            for (const auto& row : res.rows)
                csv += fmt(row.z.real()) + "," + fmt(row.z.imag()) + "," + std::to_string(row.sample) + "\n";
            write_file(cfg->output.roots_csv, csv);
            std::cout << "roots_csv=" << cfg->output.roots_csv << "\n"
                      << "roots_csv_rows=" << res.rows.size() << "\n";
        }
    } catch (const pg::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    std::printf("wall_seconds=%.3f\n", res.seconds);

    if (pg::pipeline::too_many_failures(res)) {
        std::cerr << "error: " << res.solver_failures << " of " << res.samples
                  << " samples failed to converge (limit 0.1%)\n";
        return kNoConvergence;
    }
    return kOk;
}

int cmd_validate(const std::string& suite, const std::optional<int>& n, int bits, int degree,
                 std::uint64_t samples, const std::string& json_path)
{
    pg::validate::Report report;
    try {
        if (suite == "kac") {
            pg::validate::KacOptions o;
            o.degree = degree;
            o.samples = samples;
            report = pg::validate::kac_suite(o);
        } else if (suite == "lucas") {
            report = pg::validate::lucas_suite(n ? std::vector<pg::validate::LucasCase>{{*n, bits}}
                                                 : pg::validate::default_lucas_cases());
        } else {
            report = pg::validate::cubic_suite();
        }
    } catch (const pg::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const pg::NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoConvergence;
    }
    std::cout << pg::validate::to_text(report);
    if (!json_path.empty()) {
        try {
            write_file(json_path, pg::validate::to_json(report).dump(2) + "\n");
        } catch (const pg::IoError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kIo;
        }
    }
    return report.pass() ? kOk : kValidation;
}

int cmd_roots(const std::vector<std::string>& coeffs, const std::string& engine, int bits)
{
    std::vector<pg::complex> c;
    try {
        for (const auto& s : coeffs)
            c.push_back(pg::expr::evaluate(pg::expr::parse(s), {}, {}));
    } catch (const pg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    if (c.size() < 2 || c.back() == pg::complex{}) {
        std::cerr << "error: need a0 .. an with n >= 1 and a nonzero leading coefficient\n";
        return kConfig;
    }
    const pg::Polynomial p(c);
    pg::solver::RootSet rs;
    try {
        pg::config::SolverConfig sc;
        sc.engine = engine == "aberth" ? pg::solver::Engine::Aberth : pg::solver::Engine::CompanionQR;
        sc.precision.significand_bits = bits;
        rs = pg::pipeline::solve(p, sc);
    } catch (const pg::NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const pg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    std::vector<std::pair<pg::complex, double>> rows;
    for (std::size_t k = 0; k < rs.roots.size(); ++k)
        rows.emplace_back(rs.roots[k], pg::solver::scaled_residual(p, rs.roots[k]));
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real())
            return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    for (const auto& [z, r] : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "re=%.17g im=%.17g residual=%.3g", z.real(), z.imag(), r);
        std::cout << buf << "\n";
    }
    return kOk;
}

int cmd_preset(const std::string& name, bool print_config)
{
    try {
        const auto cfg = pg::config::preset_config(name);
        if (print_config) {
            std::cout << pg::config::print_config(cfg);
        } else {
            std::cout << "preset=" << name << "\n"
                      << "max_degree=" << cfg.family.max_degree() << "\n"
                      << "count=" << cfg.plan.count << "\n"
                      << "seed=" << cfg.plan.seed << "\n";
        }
    } catch (const pg::UnknownPreset& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Root-density images of parameterised polynomial families"};
    app.require_subcommand(1);

    auto* render = app.add_subcommand("render", "Sample, solve, bin and render a config");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    render->add_option("config", config_path, "Config file")->required();
    render->add_option("--seed", seed, "Override plan.seed");

    auto* val = app.add_subcommand("validate", "Run a validation suite");
    std::string suite;
    std::optional<int> lucas_n;
    int bits = 53, degree = 50;
    std::uint64_t samples = 10000;
    std::string json_path;
    val->add_option("suite", suite, "kac | lucas | cubic")
        ->required()
        ->check(CLI::IsMember({"kac", "lucas", "cubic"}));
    val->add_option("--n", lucas_n, "Lucas degree (default: n=64 @ 53 bits and n=128 @ 106 bits)")
        ->check(CLI::Range(1, 100000));
    val->add_option("--bits", bits, "Lucas working precision")->check(CLI::IsMember({53, 106}));
    val->add_option("--degree", degree, "Kac degree")->check(CLI::Range(11, 100000));
    val->add_option("--samples", samples, "Kac sample count")->check(CLI::Range(1, 100000000));
    val->add_option("--json", json_path, "Write the report as JSON");

    auto* roots = app.add_subcommand("roots", "Roots of a0 + a1 x + ... + an x^n");
    std::vector<std::string> coeffs;
    std::string engine = "companion";
    int root_bits = 53;
    roots->add_option("--engine", engine, "companion | aberth")
        ->check(CLI::IsMember({"companion", "aberth"}));
    roots->add_option("--bits", root_bits, "Aberth working precision")->check(CLI::IsMember({53, 106}));
    roots->add_option("coefficients", coeffs, "a0 a1 ... an (numbers or constant expressions)")
        ->required();
    roots->positionals_at_end();

    auto* preset = app.add_subcommand("preset", "Describe a built-in preset");
    std::string preset_name;
    bool print = false;
    preset->add_option("name", preset_name, "kac10 | kac50 | lucas | cubic | hibiscus | fusion")
        ->required();
    preset->add_flag("--print-config", print, "Print the preset as an editable config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    if (render->parsed())
        return cmd_render(config_path, seed);
    if (val->parsed())
        return cmd_validate(suite, lucas_n, bits, degree, samples, json_path);
    if (roots->parsed())
        return cmd_roots(coeffs, engine, root_bits);
    return cmd_preset(preset_name, print);
}
