#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nk/lagrangian.hpp"

namespace nk {

enum class Backend { Float, Exact };
enum class Format { Text, Json };

struct RunConfig {
    uint64_t seed = 42;
    int samples = 1000;
    double tol_algebraic = 1e-10;
    double tol_fd = 1e-6;
    Backend backend = Backend::Float;
    Format format = Format::Text;

    void validate() const;  // throws ConfigError on nonpositive counts/tolerances
};

struct CheckRecord {
    std::string id;
    std::string anchor;  // the identity or fact the residual measures
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    bool skipped = false;
    bool expect_exceed = false;  // pass means residual > tol (anisotropy checks)
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckRecord> checks;
    uint64_t seed = 0;
    int samples = 0;
    std::string backend = "float";
    long long elapsed_ms = 0;

    bool all_pass() const;
    /// Deterministic bytes for fixed (seed, config, input); elapsed_ms is
    /// emitted as 0 so reruns and different thread counts compare equal.
    std::string to_json() const;
    std::string to_text() const;
    std::string render(Format f) const { return f == Format::Json ? to_json() : to_text(); }
};

/// Ambient structure identities over seeded random Lie vectors; the exact
/// backend certifies them with literally zero residual on rational inputs.
VerificationReport run_structure_suite(const RunConfig& cfg);

/// Per-immersion verification aggregated over seeded chart points in the box
/// [-0.4, 0.4]^3. `source` is a catalog name (f1..f8) or a descriptor file
/// path. Catalog members additionally check their published constants.
VerificationReport run_immersion_report(const std::string& source, const RunConfig& cfg);

/// Targeted Monte-Carlo for one identity; reports min/median/max residuals.
VerificationReport run_sample(const RunConfig& cfg, const std::string& check_id,
                              const std::string& immersion_source = "");
std::vector<std::string> sample_check_ids();

struct ClassificationRoot {
    double value = 0.0;
    int multiplicity = 1;
    double poly_residual = 0.0;
    double curvature = 0.0;        // 1/4 - x^2
    std::string matched_immersion; // catalog member with this h_12^3
};

struct ClassificationRecord {
    std::vector<ClassificationRoot> roots;  // descending multiplicity, then value
    std::string to_json() const;
    std::string to_text() const;
    std::string render(Format f) const { return f == Format::Json ? to_json() : to_text(); }
};

/// Roots of 32x^3 - 6x + 1 with multiplicity, their curvatures 1/4 - x^2,
/// and the catalog immersions whose h_12^3 matches each root.
ClassificationRecord classify();

/// Thread cap from NKVERIFY_THREADS (defaults to hardware concurrency).
int max_threads();

/// Index-deterministic parallel map: fn(i) for i in [0,n), any thread order.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace nk
