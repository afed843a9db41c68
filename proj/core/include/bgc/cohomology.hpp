#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bgc/complex.hpp"
#include "bgc/linalg.hpp"

namespace bgc {

struct CohomCell {
    int g = 0;
    int v = 0;
    int degree = 0;
    std::size_t dim_basis = 0;
    int rank_out = 0;  // rank of d: v -> v-1
    int rank_in = 0;   // rank of d: v+1 -> v
    int dim_h = 0;
    bool flagged = false;  // modular ranks disagreed
};

/// Cohomology dimensions of one complex with r legs, indexed by (g, v).
struct CohomTable {
    Flavor flavor = Flavor::Even;
    VariantSpec variant;
    int r = 0;
    std::vector<std::uint32_t> primes;
    std::vector<CohomCell> cells;  // sorted by (g, v)

    [[nodiscard]] const CohomCell* cell(int g, int v) const;
    /// dim H at (g, v); 0 outside the computed cells.
    [[nodiscard]] int dim(int g, int v) const;
    [[nodiscard]] int total(int g) const;
    /// Alternating sums of basis and cohomology dimensions agree.
    [[nodiscard]] bool euler_holds(int g) const;
    [[nodiscard]] bool any_flagged() const;
};

struct CohomOptions {
    std::vector<std::uint32_t> primes = default_primes();
    std::size_t exact_guard = kDefaultExactGuard;
};

/// Rows g in [g_min, g_max]; columns v in [v_min, v_max] clipped to the
/// possible range (v_max < 0 means no upper clip). Neighbouring slices
/// outside the window are still computed for the incoming ranks.
[[nodiscard]] CohomTable cohomology_dims(SliceStore& store, Flavor flavor, const VariantSpec& variant,
                                         int r, int g_min, int g_max, int v_min = 1, int v_max = -1,
                                         const CohomOptions& options = {});

[[nodiscard]] std::string table_text(const CohomTable& table);
[[nodiscard]] std::string table_csv(const CohomTable& table, bool header = true);
[[nodiscard]] std::string table_json(const CohomTable& table);

struct CheckResult {
    std::string name;
    std::string params;
    std::string expected;
    std::string computed;
    bool pass = false;
    double seconds = 0.0;
};

struct Report {
    std::vector<CheckResult> checks;

    void add(CheckResult result) { checks.push_back(std::move(result)); }
    void append(const Report& other);
    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] std::string text() const;
    [[nodiscard]] std::string json(const std::vector<std::uint32_t>& primes = default_primes()) const;
};

/// Exact products of consecutive differentials for one (flavor, variant, g, r).
[[nodiscard]] CheckResult verify_d_squared(SliceStore& store, Flavor flavor, const VariantSpec& variant,
                                           int g, int r);

/// Every valid variant of a flavor.
[[nodiscard]] std::vector<VariantSpec> all_variants(Flavor flavor);

struct D2RangeOptions {
    int g_max = 4;
    int r_max = 2;
    std::vector<Flavor> flavors{Flavor::Even, Flavor::Odd};
    std::vector<VariantSpec> variants;  // empty means all valid variants
    std::optional<std::filesystem::path> cache_root;
    double budget_seconds = 0.0;  // 0 means unlimited
    std::size_t graph_limit = 0;  // 0 means unlimited
    std::function<void(const CheckResult&)> on_result;  // called as each complex finishes
};

/// d^2 over every (flavor, variant, g, r) in range, smaller complexes first,
/// with a fresh catalog per (g, r). Complexes not reached within the budget
/// or the graph limit are reported as failures.
[[nodiscard]] Report verify_d_squared_range(const D2RangeOptions& options);

struct MultiedgeOptions {
    int g_max = 5;
    int r_max = 2;
};

/// Odd full versus odd simple complexes, plus the three exceptional
/// one-dimensional complexes.
[[nodiscard]] Report verify_multiedge_proposition(SliceStore& store, const MultiedgeOptions& options = {});

/// Odd fat-free, fat and simple complexes for one (g, r), plus the homotopy
/// identity on every slice of the fat complex whose graphs have at most
/// `homotopy_max_vertices` vertices.
[[nodiscard]] Report verify_fat_claims(SliceStore& store, int g, int r, int homotopy_max_vertices = 5);

struct LegFactOptions {
    int g_max = 4;
};

[[nodiscard]] Report verify_leg_facts(SliceStore& store, const LegFactOptions& options = {});

/// Canonical graphs used as witnesses.
[[nodiscard]] Multigraph theta_graph(int legs);
[[nodiscard]] Multigraph double_edge_two_legs();

}  // namespace bgc
