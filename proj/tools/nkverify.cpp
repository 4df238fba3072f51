// nkverify: verification reports for the homogeneous nearly Kahler S3 x S3
// and its Lagrangian catalog. Exit code 0 when all checks pass, 1 on a check
// failure, 2 on configuration or input errors.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "nk/errors.hpp"
#include "nk/verify.hpp"

namespace {

void add_common(CLI::App* cmd, nk::RunConfig* cfg, std::string* backend, std::string* format) {
    cmd->add_option("--seed", cfg->seed, "master seed for the sample generator");
    cmd->add_option("--samples", cfg->samples, "number of random samples / chart points");
    cmd->add_option("--tol", cfg->tol_algebraic, "tolerance for algebraic identities");
    cmd->add_option("--tol-fd", cfg->tol_fd, "tolerance for finite-difference checks");
    cmd->add_option("--backend", *backend, "scalar backend: float|exact")
        ->check(CLI::IsMember({"float", "exact"}));
    cmd->add_option("--format", *format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
}

nk::RunConfig finish(nk::RunConfig cfg, const std::string& backend, const std::string& format) {
    cfg.backend = backend == "exact" ? nk::Backend::Exact : nk::Backend::Float;
    cfg.format = format == "json" ? nk::Format::Json : nk::Format::Text;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification suites for the nearly Kahler S3 x S3 geometry"};
    app.require_subcommand(1);

    nk::RunConfig cfg;
    std::string backend = "float", format = "text";
    std::string immersion_source, check_id, sample_immersion;

    CLI::App* structure = app.add_subcommand("structure", "ambient structure-tensor identities");
    add_common(structure, &cfg, &backend, &format);

    CLI::App* immersion = app.add_subcommand("immersion", "per-immersion verification report");
    immersion->add_option("source", immersion_source, "catalog name (f1..f8) or descriptor file")
        ->required();
    add_common(immersion, &cfg, &backend, &format);

    CLI::App* classify_cmd = app.add_subcommand("classify", "roots of 32x^3 - 6x + 1 and their curvatures");
    classify_cmd->add_option("--format", format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* sample = app.add_subcommand("sample", "targeted Monte-Carlo for one identity");
    sample->add_option("--check", check_id, "check id (see id list on error)")->required();
    sample->add_option("--immersion", sample_immersion, "immersion context for per-point checks");
    add_common(sample, &cfg, &backend, &format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (structure->parsed()) {
            nk::RunConfig c = finish(cfg, backend, format);
            if (structure->count("--samples") == 0 && c.backend == nk::Backend::Exact)
                c.samples = 64;
            nk::VerificationReport rep = nk::run_structure_suite(c);
            std::cout << rep.render(c.format);
            return rep.all_pass() ? 0 : 1;
        }
        if (immersion->parsed()) {
            nk::RunConfig c = finish(cfg, backend, format);
            if (immersion->count("--samples") == 0) c.samples = 8;  // chart points, not draws
            nk::VerificationReport rep = nk::run_immersion_report(immersion_source, c);
            std::cout << rep.render(c.format);
            return rep.all_pass() ? 0 : 1;
        }
        if (classify_cmd->parsed()) {
            nk::ClassificationRecord rec = nk::classify();
            std::cout << rec.render(format == "json" ? nk::Format::Json : nk::Format::Text);
            return 0;
        }
        if (sample->parsed()) {
            nk::RunConfig c = finish(cfg, backend, format);
            nk::VerificationReport rep = nk::run_sample(c, check_id, sample_immersion);
            std::cout << rep.render(c.format);
            return rep.all_pass() ? 0 : 1;
        }
    } catch (const nk::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nk::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
