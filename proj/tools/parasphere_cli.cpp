#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "parasphere/runner.hpp"

using namespace parasphere;

int main(int argc, char** argv) {
    CLI::App app{"special Kähler geometries as parabolic affine spheres: "
                 "residual certificates and graph realizations"};
    app.require_subcommand(1);

    double tol_scale = 1.0;
    int jobs = 1;
    app.add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor");
    app.add_option("--jobs", jobs, "worker threads for the residual sweep");

    std::string config_path;
    std::string base_override;

    app.fallthrough();

    CLI::App* check = app.add_subcommand("check", "run the residual suite over the sample plan");
    check->fallthrough();
    check->add_option("--config", config_path, "JSON run configuration")->required();

    CLI::App* realize =
        app.add_subcommand("realize", "emit immersion samples (CSV, and OBJ mesh for m = 1)");
    realize->fallthrough();
    realize->add_option("--config", config_path, "JSON run configuration")->required();

    CLI::App* info = app.add_subcommand("info", "summarize the geometry at the base point");
    info->fallthrough();
    info->add_option("--config", config_path, "JSON run configuration")->required();
    info->add_option("--base", base_override, "comma-separated reals re1,im1,...,rem,imm");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = RunConfig::from_file(config_path);

        if (check->parsed()) {
            CheckOutcome out = run_check(cfg, tol_scale, jobs);
            if (cfg.report_path.empty()) std::cout << out.report.dump(2) << "\n";
            if (out.exit_code == 0)
                std::cout << "check: all residuals within tolerance\n";
            else if (out.exit_code == 1)
                std::cout << "check: residuals exceed tolerance (report written)\n";
            else
                std::cout << "check: sample plan is mostly degenerate\n";
            return out.exit_code;
        }

        if (realize->parsed()) {
            RealizeOutcome out = run_realize(cfg);
            std::cout << out.report.dump(2) << "\n";
            return out.exit_code;
        }

        // info
        if (!base_override.empty()) {
            std::vector<double> vals;
            std::stringstream ss(base_override);
            std::string tok;
            while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
            if (static_cast<int>(vals.size()) != 2 * cfg.m)
                throw ConfigError("--base needs 2m comma-separated reals");
            for (int k = 0; k < cfg.m; ++k) cfg.base[k] = cplx(vals[2 * k], vals[2 * k + 1]);
        }
        InfoSummary s = run_info(cfg);
        std::cout << "arity m = " << s.m << "\n";
        std::cout << "signature of B = Im Hess F: (" << s.sig_b.pos << ", " << s.sig_b.neg
                  << ")\n";
        std::cout << "signature of G = Hess u: (" << s.sig_g.pos << ", " << s.sig_g.neg << ")\n";
        std::cout << (s.curvature_is_gauss ? "Gauss" : "scalar") << " curvature at base: "
                  << format_double(s.curvature) << "\n";
        std::cout << "paraboloid congruence: "
                  << (s.congruence_applicable ? "applicable" : "not applicable") << " ("
                  << s.congruence_note << ")\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "prepotential parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
