#include "bgc/cohomology.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bgc/canonical.hpp"

namespace bgc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}


}  // namespace

const CohomCell* CohomTable::cell(int g, int v) const {
    for (const CohomCell& c : cells) {
        if (c.g == g && c.v == v) return &c;
    }
    return nullptr;
}

int CohomTable::dim(int g, int v) const {
    const CohomCell* c = cell(g, v);
    return c ? c->dim_h : 0;
}

int CohomTable::total(int g) const {
    int sum = 0;
    for (const CohomCell& c : cells) {
        if (c.g == g) sum += c.dim_h;
    }
    return sum;
}

bool CohomTable::euler_holds(int g) const {
    long long chain = 0;
    long long homology = 0;
    for (const CohomCell& c : cells) {
        if (c.g != g) continue;
        const int s = c.v % 2 == 0 ? 1 : -1;
        chain += s * static_cast<long long>(c.dim_basis);
        homology += s * static_cast<long long>(c.dim_h);
    }
    return chain == homology;
}

bool CohomTable::any_flagged() const {
    return std::any_of(cells.begin(), cells.end(), [](const CohomCell& c) { return c.flagged; });
}

CohomTable cohomology_dims(SliceStore& store, Flavor flavor, const VariantSpec& variant, int r, int g_min,
                           int g_max, int v_min, int v_max, const CohomOptions& options) {
    variant.validate(flavor);
    CohomTable table;
    table.flavor = flavor;
    table.variant = variant;
    table.r = r;
    table.primes = options.primes;
    for (int g = g_min; g <= g_max; ++g) {
        SliceKey key{flavor, variant, g, r, 1};
        const int top = max_slice_index(key);
        const int lo = std::max(1, v_min);
        const int hi = v_max < 0 ? top : std::min(v_max, top);
        if (top == 0 || lo > hi) continue;
        std::map<int, RankResult> ranks;
        auto rank_of = [&](int v) -> const RankResult& {
            auto it = ranks.find(v);
            if (it != ranks.end()) return it->second;
            RankResult result;
            result.primes_used = options.primes;
            if (v >= 2 && v <= top) {
                const SparseIntMatrix& d = store.differential(key.shifted(v - 1));
                if (!d.is_zero()) result = rank_consensus(d, options.primes, options.exact_guard);
            }
            return ranks.emplace(v, result).first->second;
        };
        for (int v = lo; v <= hi; ++v) {
            CohomCell c;
            c.g = g;
            c.v = v;
            const SliceKey here = key.shifted(v - 1);
            c.degree = slice_degree(here);
            c.dim_basis = store.basis(here).size();
            const RankResult& out = rank_of(v);
            const RankResult& in = rank_of(v + 1);
            c.rank_out = out.rank;
            c.rank_in = in.rank;
            c.flagged = out.disagreement || in.disagreement;
            c.dim_h = static_cast<int>(c.dim_basis) - c.rank_out - c.rank_in;
            if (c.dim_h < 0) throw LinalgError("negative cohomology dimension at " + here.label());
            table.cells.push_back(c);
        }
    }
    return table;
}

std::string table_text(const CohomTable& table) {
    std::ostringstream out;
    int v_lo = 1 << 20, v_hi = 0, g_lo = 1 << 20, g_hi = -1;
    for (const CohomCell& c : table.cells) {
        v_lo = std::min(v_lo, c.v);
        v_hi = std::max(v_hi, c.v);
        g_lo = std::min(g_lo, c.g);
        g_hi = std::max(g_hi, c.g);
    }
    out << flavor_name(table.flavor) << ' ' << table.variant.name() << " r=" << table.r << '\n';
    if (table.cells.empty()) {
        out << "(empty)\n";
        return out.str();
    }
    const char* index = table.variant.fat ? "w" : "v";
    out << "g\\" << index;
    for (int v = v_lo; v <= v_hi; ++v) out << std::setw(4) << v;
    out << '\n';
    for (int g = g_lo; g <= g_hi; ++g) {
        bool any = false;
        for (const CohomCell& c : table.cells) any = any || c.g == g;
        if (!any) continue;
        out << std::setw(3) << g;
        for (int v = v_lo; v <= v_hi; ++v) {
            const CohomCell* c = table.cell(g, v);
            if (!c || c->dim_basis == 0) {
                out << std::setw(4) << "-";
            } else {
                out << std::setw(4) << (std::to_string(c->dim_h) + (c->flagged ? "?" : ""));
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string table_csv(const CohomTable& table, bool header) {
    std::ostringstream out;
    if (header) out << "flavor,variant,r,g,v,dim_basis,rank_out,rank_in,dim_H\n";
    for (const CohomCell& c : table.cells) {
        out << flavor_name(table.flavor) << ',' << table.variant.name() << ',' << table.r << ',' << c.g << ','
            << c.v << ',' << c.dim_basis << ',' << c.rank_out << ',' << c.rank_in << ',' << c.dim_h << '\n';
    }
    return out.str();
}

std::string table_json(const CohomTable& table) {
    nlohmann::ordered_json doc;
    doc["flavor"] = flavor_name(table.flavor);
    doc["variant"] = table.variant.name();
    doc["r"] = table.r;
    doc["primes"] = table.primes;
    doc["cells"] = nlohmann::ordered_json::array();
    for (const CohomCell& c : table.cells) {
        nlohmann::ordered_json cell;
        cell["flavor"] = flavor_name(table.flavor);
        cell["variant"] = table.variant.name();
        cell["r"] = table.r;
        cell["g"] = c.g;
        cell["v"] = c.v;
        cell["degree"] = c.degree;
        cell["dim_basis"] = c.dim_basis;
        cell["rank_out"] = c.rank_out;
        cell["rank_in"] = c.rank_in;
        cell["dim_H"] = c.dim_h;
        cell["flagged"] = c.flagged;
        doc["cells"].push_back(std::move(cell));
    }
    return doc.dump(2);
}

void Report::append(const Report& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string Report::text() const {
    std::ostringstream out;
    for (const CheckResult& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.params.empty()) out << " [" << c.params << "]";
        out << " expected=" << c.expected << " computed=" << c.computed << " (" << std::fixed
            << std::setprecision(2) << c.seconds << "s)\n";
    }
    return out.str();
}

std::string Report::json(const std::vector<std::uint32_t>& primes) const {
    nlohmann::ordered_json doc;
    doc["passed"] = all_passed();
    doc["primes"] = primes;
    doc["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["params"] = c.params;
        j["expected"] = c.expected;
        j["computed"] = c.computed;
        j["pass"] = c.pass;
        j["seconds"] = c.seconds;
        doc["checks"].push_back(std::move(j));
    }
    return doc.dump(2);
}

CheckResult verify_d_squared(SliceStore& store, Flavor flavor, const VariantSpec& variant, int g, int r) {
    const auto start = Clock::now();
    CheckResult result;
    result.name = "d_squared";
    result.params = std::string("flavor=") + flavor_name(flavor) + " variant=" + variant.name() +
                    " g=" + std::to_string(g) + " r=" + std::to_string(r);
    result.expected = "0";
    const SliceKey key{flavor, variant, g, r, 1};
    const int top = max_slice_index(key);
    std::size_t products = 0;
    std::size_t nonzero_entries = 0;
    std::string offender;
    for (int v = 3; v <= top; ++v) {
        const SparseIntMatrix& outer = store.differential(key.shifted(v - 2));
        const SparseIntMatrix& inner = store.differential(key.shifted(v - 1));
        if (outer.is_zero() || inner.is_zero()) continue;
        const SparseIntMatrix product = multiply(outer, inner);
        ++products;
        if (!product.is_zero() && offender.empty()) {
            const Triplet& t = product.entries().front();
            offender = " first offender v=" + std::to_string(v) + ": " +
                       encode(store.basis(key.shifted(v - 1))[t.col], flavor_char(flavor));
        }
        nonzero_entries += product.nnz();
    }
    result.pass = nonzero_entries == 0;
    result.computed = std::to_string(nonzero_entries) + " nonzero entries in " + std::to_string(products) +
                      " products" + offender;
    result.seconds = seconds_since(start);
    return result;
}

std::vector<VariantSpec> all_variants(Flavor flavor) {
    std::vector<VariantSpec> out;
    for (const char* name : {"full", "bl", "s", "s_bl", "fat", "fat_bl"}) {
        const VariantSpec spec = VariantSpec::parse(name);
        if (spec.fat && flavor != Flavor::Odd) continue;
        out.push_back(spec);
    }
    return out;
}

Report verify_d_squared_range(const D2RangeOptions& options) {
    const auto start = Clock::now();
    std::vector<std::pair<int, int>> pairs;
    for (int g = 0; g <= options.g_max; ++g) {
        for (int r = 0; r <= options.r_max; ++r) {
            if (max_vertices(g, r) > 0) pairs.emplace_back(g, r);
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return max_vertices(a.first, a.second) < max_vertices(b.first, b.second);
    });
    Report report;
    std::string stop_reason;
    for (const auto& [g, r] : pairs) {
        GraphCatalog catalog;
        catalog.set_limit(options.graph_limit);
        std::string limited;
        for (Flavor flavor : options.flavors) {
            const auto variants = options.variants.empty() ? all_variants(flavor) : options.variants;
            for (const VariantSpec& variant : variants) {
                if (variant.fat && flavor != Flavor::Odd) continue;
                if (stop_reason.empty() && options.budget_seconds > 0 &&
                    seconds_since(start) > options.budget_seconds) {
                    stop_reason = "time budget of " + std::to_string(static_cast<int>(options.budget_seconds)) +
                                  "s exhausted";
                }
                CheckResult result;
                if (stop_reason.empty() && limited.empty()) {
                    try {
                        SliceStore store(options.cache_root, &catalog);
                        result = verify_d_squared(store, flavor, variant, g, r);
                    } catch (const ResourceLimitError& e) {
                        limited = e.what();
                    }
                }
                if (!stop_reason.empty() || !limited.empty()) {
                    result.name = "d_squared";
                    result.params = std::string("flavor=") + flavor_name(flavor) + " variant=" + variant.name() +
                                    " g=" + std::to_string(g) + " r=" + std::to_string(r);
                    result.expected = "0";
                    result.computed = "not computed: " + (stop_reason.empty() ? limited : stop_reason);
                }
                if (options.on_result) options.on_result(result);
                report.add(std::move(result));
            }
        }
    }
    return report;
}

Multigraph theta_graph(int legs) {
    std::vector<Edge> edges(3, Edge(0, 1));
    return canonicalize(Multigraph(2, std::move(edges), std::vector<int>(legs, 0))).canonical_graph;
}

Multigraph double_edge_two_legs() {
    std::vector<Edge> edges(2, Edge(0, 1));
    return canonicalize(Multigraph(2, std::move(edges), {0, 1})).canonical_graph;
}

namespace {

bool is_exception(int g, int r) { return (g == 2 && r == 0) || (g == 2 && r == 1) || (g == 1 && r == 2); }

std::vector<int> row_dims(const CohomTable& table, int g, int v_hi) {
    std::vector<int> dims;
    for (int v = 1; v <= v_hi; ++v) dims.push_back(table.dim(g, v));
    return dims;
}

int row_top(int g, int r, bool fat) {
    SliceKey key{Flavor::Odd, VariantSpec{}, g, r, 1};
    key.variant.fat = fat;
    return max_slice_index(key);
}

}  // namespace

Report verify_multiedge_proposition(SliceStore& store, const MultiedgeOptions& options) {
    Report report;
    const VariantSpec full;
    VariantSpec simple;
    simple.simple = true;
    for (int g = 0; g <= options.g_max; ++g) {
        for (int r = 0; r <= options.r_max; ++r) {
            if (max_vertices(g, r) == 0) continue;
            const auto start = Clock::now();
            CheckResult c;
            c.params = "g=" + std::to_string(g) + " r=" + std::to_string(r);
            if (is_exception(g, r)) {
                c.name = "multiedge_exception";
                const Multigraph witness = g == 1 ? double_edge_two_legs() : theta_graph(r);
                std::size_t full_total = 0;
                std::size_t simple_total = 0;
                bool witness_found = false;
                bool zero_differential = true;
                for (int v = 1; v <= max_vertices(g, r); ++v) {
                    const SliceKey key{Flavor::Odd, full, g, r, v};
                    const Basis& b = store.basis(key);
                    full_total += b.size();
                    witness_found = witness_found || b.find(witness) >= 0;
                    zero_differential = zero_differential && store.differential(key).is_zero();
                    simple_total += store.basis(SliceKey{Flavor::Odd, simple, g, r, v}).size();
                }
                c.expected = "full complex = {witness} with d=0, simple complex = 0";
                c.computed = "full dim " + std::to_string(full_total) + (witness_found ? " (witness)" : "") +
                             (zero_differential ? ", d=0" : ", d!=0") + ", simple dim " +
                             std::to_string(simple_total);
                c.pass = full_total == 1 && witness_found && zero_differential && simple_total == 0;
            } else {
                c.name = "multiedge_quasi_iso";
                const int top = max_vertices(g, r);
                const CohomTable a = cohomology_dims(store, Flavor::Odd, full, r, g, g);
                const CohomTable b = cohomology_dims(store, Flavor::Odd, simple, r, g, g);
                const auto da = row_dims(a, g, top);
                const auto db = row_dims(b, g, top);
                c.expected = "H(simple) by v = " + join_ints(db);
                c.computed = "H(full) by v = " + join_ints(da);
                c.pass = da == db && !a.any_flagged() && !b.any_flagged();
            }
            c.seconds = seconds_since(start);
            report.add(std::move(c));
        }
    }
    return report;
}

Report verify_fat_claims(SliceStore& store, int g, int r, int homotopy_max_vertices) {
    Report report;
    const VariantSpec full;
    VariantSpec simple;
    simple.simple = true;
    VariantSpec fat;
    fat.fat = true;
    const std::string params = "g=" + std::to_string(g) + " r=" + std::to_string(r);
    auto start = Clock::now();
    const int top = row_top(g, r, true);
    const CohomTable a = cohomology_dims(store, Flavor::Odd, full, r, g, g);
    const CohomTable b = cohomology_dims(store, Flavor::Odd, simple, r, g, g);
    const CohomTable c = cohomology_dims(store, Flavor::Odd, fat, r, g, g);
    const auto da = row_dims(a, g, top);
    const auto db = row_dims(b, g, top);
    const auto dc = row_dims(c, g, top);
    const double table_seconds = seconds_since(start);

    CheckResult claim1;
    claim1.name = "fat_claim_simple";
    claim1.params = params;
    claim1.expected = "H(simple) by index = " + join_ints(db);
    claim1.computed = "H(fat) by index = " + join_ints(dc);
    claim1.pass = db == dc && !b.any_flagged() && !c.any_flagged();
    claim1.seconds = table_seconds;
    report.add(claim1);

    CheckResult claim2;
    claim2.name = "fat_claim_full";
    claim2.params = params;
    if (is_exception(g, r)) {
        claim2.expected = "H(full) differs from H(fat) by the exceptional class";
        claim2.computed = "H(full) = " + join_ints(da) + ", H(fat) = " + join_ints(dc);
        int diff = 0;
        for (std::size_t i = 0; i < da.size(); ++i) diff += da[i] - dc[i];
        claim2.pass = diff == 1;
    } else {
        claim2.expected = "H(fat) by index = " + join_ints(dc);
        claim2.computed = "H(full) by index = " + join_ints(da);
        claim2.pass = da == dc && !a.any_flagged();
    }
    claim2.seconds = table_seconds;
    report.add(claim2);

    start = Clock::now();
    CheckResult homotopy;
    homotopy.name = "fat_homotopy";
    homotopy.params = params + " max_vertices=" + std::to_string(homotopy_max_vertices);
    homotopy.expected = "d_fat h + h d_fat = N id";
    std::size_t checked = 0;
    std::string failure;
    const DiffParts fat_only{false, true};
    for (int w = 1; w <= top && failure.empty(); ++w) {
        const SliceKey key{Flavor::Odd, fat, g, r, w};
        const Basis& here = store.basis(key);
        if (here.empty()) continue;
        const Basis& up = store.basis(key.shifted(1));
        const Basis& down = store.basis(key.shifted(-1));
        const SparseIntMatrix h_here = homotopy_h(here, up);
        const SparseIntMatrix h_down = homotopy_h(down, here);
        const SparseIntMatrix d_up = build_differential(key.shifted(1), up, here, fat_only);
        const SparseIntMatrix d_here = build_differential(key, here, down, fat_only);
        const SparseIntMatrix total = add(multiply(d_up, h_here), multiply(h_down, d_here));
        std::vector<std::map<int, std::int64_t>> columns(here.size());
        for (const Triplet& t : total.entries()) columns[t.col][t.row] = t.value;
        for (std::size_t j = 0; j < here.size() && failure.empty(); ++j) {
            if (here[j].num_vertices() > homotopy_max_vertices) continue;
            ++checked;
            const int n = multi_pair_count(here[j]);
            std::map<int, std::int64_t> expected;
            if (n != 0) expected[static_cast<int>(j)] = n;
            if (columns[j] != expected) {
                failure = "mismatch at " + encode(here[j], 'O');
            }
        }
    }
    homotopy.pass = failure.empty();
    homotopy.computed = failure.empty() ? "identity holds on " + std::to_string(checked) + " basis graphs" : failure;
    homotopy.seconds = seconds_since(start);
    report.add(homotopy);
    return report;
}

Report verify_leg_facts(SliceStore& store, const LegFactOptions& options) {
    Report report;
    const VariantSpec full;
    VariantSpec simple;
    simple.simple = true;

    for (int g = 0; g <= options.g_max; ++g) {
        if (max_vertices(g, 0) == 0 && max_vertices(g, 1) == 0) continue;
        const auto start = Clock::now();
        const int top = std::max(max_vertices(g, 0), max_vertices(g, 1));
        const CohomTable t0 = cohomology_dims(store, Flavor::Even, simple, 0, g, g);
        const CohomTable t1 = cohomology_dims(store, Flavor::Even, simple, 1, g, g);
        CheckResult c;
        c.name = "one_leg_equals_no_leg";
        c.params = "g=" + std::to_string(g);
        c.expected = "H(g,0) by v = " + join_ints(row_dims(t0, g, top));
        c.computed = "H(g,1) by v = " + join_ints(row_dims(t1, g, top));
        c.pass = row_dims(t0, g, top) == row_dims(t1, g, top);
        c.seconds = seconds_since(start);
        report.add(std::move(c));
    }

    // Witnesses: the displayed classes and their edge counts.
    struct Expectation {
        int g;
        int r;
        int dim;
        int edges;  // -1: no degree constraint
    };
    std::vector<Expectation> expectations{{0, 3, 1, 0}, {1, 3, 1, 3}, {2, 2, 1, 5}};
    for (int g = 1; g <= options.g_max; ++g) {
        if (g != 2) expectations.push_back({g, 2, 0, -1});
    }
    expectations.push_back({1, 1, 1, 1});
    for (const Expectation& e : expectations) {
        const auto start = Clock::now();
        const CohomTable t = cohomology_dims(store, Flavor::Even, full, e.r, e.g, e.g);
        std::vector<int> degrees;
        for (const CohomCell& cell : t.cells) {
            for (int k = 0; k < cell.dim_h; ++k) degrees.push_back(cell.degree);
        }
        CheckResult c;
        c.name = "legged_cohomology";
        c.params = "g=" + std::to_string(e.g) + " r=" + std::to_string(e.r);
        c.expected = "dim " + std::to_string(e.dim) +
                     (e.edges >= 0 ? " in degree " + std::to_string(-e.edges) : std::string());
        c.computed = "dim " + std::to_string(t.total(e.g)) +
                     (degrees.empty() ? std::string() : " in degrees " + join_ints(degrees));
        c.pass = t.total(e.g) == e.dim && !t.any_flagged();
        if (e.edges >= 0) c.pass = c.pass && degrees == std::vector<int>(e.dim, -e.edges);
        c.seconds = seconds_since(start);
        report.add(std::move(c));
    }

    const auto start = Clock::now();
    const CohomTable tad = cohomology_dims(store, Flavor::Even, simple, 1, 1, 1);
    CheckResult c;
    c.name = "tadpole_simple";
    c.params = "g=1 r=1";
    c.expected = "dim 0";
    c.computed = "dim " + std::to_string(tad.total(1));
    c.pass = tad.total(1) == 0;
    c.seconds = seconds_since(start);
    report.add(std::move(c));
    return report;
}

}  // namespace bgc
