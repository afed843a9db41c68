// One PASS/FAIL line per acceptance criterion; details follow each line.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bgc/cohomology.hpp"
#include "bgc/e1.hpp"

using namespace bgc;

namespace {

using Clock = std::chrono::steady_clock;

// Published grids, columns v = 4, 5, ...; "-" marks an empty chain group.
const std::map<int, std::string> kEvenRows = {
    {3, "1 - - - - - - - - - - - - - - -"},
    {4, "- 0 0 - - - - - - - - - - - - -"},
    {5, "- 0 1 0 0 - - - - - - - - - - -"},
    {6, "- 0 0 1 0 0 1 - - - - - - - - -"},
};

const std::map<int, std::string> kOddRows = {
    {3, "1 - - - - - - - - - - - - - - -"},
    {4, "- 0 1 - - - - - - - - - - - - -"},
    {5, "- 0 0 0 2 - - - - - - - - - - -"},
    {6, "- 0 0 1 0 0 2 - - - - - - - - -"},
    {7, "- - 0 0 0 2 0 0 3 - - - - - - -"},
    {8, "- - 0 0 0 0 1 4 0 0 4 - - - - -"},
};

// Annotated cells of the decorated-tree table, as (g, v) -> attribution.
const std::map<std::pair<int, int>, std::string> kAttributions = {
    {{3, 4}, "1_A"}, {{5, 6}, "1_A"}, {{6, 7}, "1_B"}, {{6, 10}, "1_A"},
    {{8, 9}, "1_A+1_B"}, {{8, 10}, "1_C"}, {{8, 12}, "1_A"},
};

bool stretch_enabled() { return std::getenv("BGC_STRETCH") != nullptr; }

double env_number(const char* name, double fallback) {
    const char* value = std::getenv(name);
    return value == nullptr ? fallback : std::atof(value);
}

std::optional<std::filesystem::path> cache_root() {
    const char* value = std::getenv("BGC_CACHE");
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::filesystem::path(value);
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void fail(const std::string& note) {
        pass = false;
        notes.push_back(note);
    }
};

int failures = 0;

void emit(int number, const std::string& title, const Outcome& o, double seconds) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " ("
              << static_cast<long long>(seconds) << " s)" << std::endl;
    for (const std::string& n : o.notes) std::cout << "    " << n << '\n';
    std::cout.flush();
    if (!o.pass) ++failures;
}

void add_failures(Outcome& o, const Report& report) {
    for (const CheckResult& c : report.checks) {
        if (!c.pass) o.fail(c.name + " [" + c.params + "] expected " + c.expected + ", computed " + c.computed);
    }
}

Outcome compare_grid(Flavor flavor, const std::map<int, std::string>& rows, int g_max) {
    Outcome o;
    SliceStore store(cache_root());
    const CohomTable t = cohomology_dims(store, flavor, VariantSpec::parse("s_bl"), 0, 3, g_max);
    for (const auto& [g, text] : rows) {
        if (g > g_max) continue;
        std::istringstream in(text);
        std::vector<std::string> published;
        for (std::string cell; in >> cell;) published.push_back(cell);
        for (int v = 1; v <= max_vertices(g, 0); ++v) {
            const int column = v - 4;
            const std::string want =
                column >= 0 && column < static_cast<int>(published.size()) ? published[column] : "-";
            const CohomCell* cell = t.cell(g, v);
            const std::size_t basis = cell == nullptr ? 0 : cell->dim_basis;
            const int got = cell == nullptr ? 0 : cell->dim_h;
            const std::string where = "g=" + std::to_string(g) + " v=" + std::to_string(v);
            if (cell != nullptr && cell->flagged) o.fail(where + ": modular ranks disagree");
            if (want == "-") {
                if (basis != 0) o.fail(where + ": published '-' but the basis has " + std::to_string(basis) + " graphs");
            } else if (std::stoi(want) != got) {
                o.fail(where + ": published " + want + ", computed " + std::to_string(got));
            }
        }
    }
    std::ostringstream summary;
    summary << "rows g=3.." << g_max << " compared cell by cell";
    o.notes.insert(o.notes.begin(), summary.str());
    return o;
}

void criterion_1() {
    const auto start = Clock::now();
    emit(1, "even bridgeless simple table, g <= 6", compare_grid(Flavor::Even, kEvenRows, 6), seconds_since(start));
}

void criterion_2() {
    const auto start = Clock::now();
    const int g_max = stretch_enabled() ? 8 : 6;
    emit(2, "odd bridgeless simple table, g <= " + std::to_string(g_max), compare_grid(Flavor::Odd, kOddRows, g_max),
         seconds_since(start));
}

void criterion_3() {
    const auto start = Clock::now();
    D2RangeOptions options;
    options.g_max = 6;
    options.r_max = 3;
    options.cache_root = cache_root();
    options.budget_seconds = env_number("BGC_D2_BUDGET", 7200.0);
    options.graph_limit = static_cast<std::size_t>(env_number("BGC_D2_GRAPH_LIMIT", 8.0e6));
    options.on_result = [](const CheckResult& c) {
        std::cerr << "progress: d^2 " << (c.pass ? "ok " : "not ok ") << c.params << '\n';
    };
    const Report report = verify_d_squared_range(options);
    Outcome o;
    int passed = 0;
    for (const CheckResult& c : report.checks) passed += c.pass ? 1 : 0;
    o.notes.push_back(std::to_string(passed) + " of " + std::to_string(report.checks.size()) +
                      " complexes verified exactly");
    add_failures(o, report);
    emit(3, "d^2 = 0 for every flavor and variant, g <= 6, r <= 3", o, seconds_since(start));
}

void criterion_4() {
    const auto start = Clock::now();
    SliceStore store(cache_root());
    Outcome o;
    const Report report = verify_multiedge_proposition(store, MultiedgeOptions{5, 2});
    o.notes.push_back(std::to_string(report.checks.size()) + " checks");
    add_failures(o, report);
    emit(4, "full and simple odd complexes agree except for three one-dimensional cases", o, seconds_since(start));
}

void criterion_5() {
    const auto start = Clock::now();
    SliceStore store(cache_root());
    Report report;
    for (int g = 0; g <= 4; ++g) {
        for (int r = 0; r <= 2; ++r) {
            if (max_vertices(g, r) > 0) report.append(verify_fat_claims(store, g, r, 5));
        }
    }
    Outcome o;
    o.notes.push_back(std::to_string(report.checks.size()) + " checks over g <= 4, r <= 2");
    add_failures(o, report);
    emit(5, "fat-edge complexes and the homotopy identity", o, seconds_since(start));
}

void criterion_6() {
    const auto start = Clock::now();
    SliceStore store(cache_root());
    Outcome o;
    const Report report = verify_leg_facts(store, LegFactOptions{4});
    for (const CheckResult& c : report.checks) {
        // The edge count of the two-leg witness is checked separately below.
        if (c.name == "legged_cohomology" && c.params == "g=2 r=2") {
            if (c.computed.rfind("dim 1", 0) != 0) o.fail("g=2 r=2: expected dim 1, computed " + c.computed);
            continue;
        }
        if (!c.pass) o.fail(c.name + " [" + c.params + "] expected " + c.expected + ", computed " + c.computed);
    }
    const CohomTable t = cohomology_dims(store, Flavor::Even, VariantSpec::parse("full"), 2, 2, 2);
    std::vector<int> degrees;
    for (const CohomCell& c : t.cells) {
        for (int k = 0; k < c.dim_h; ++k) degrees.push_back(c.degree);
    }
    if (degrees != std::vector<int>{-4}) {
        std::string found;
        for (int d : degrees) found += (found.empty() ? "" : ",") + std::to_string(d);
        o.fail("g=2 r=2 witness: expected degree -4 (4 edges), computed degree " + found);
    }
    const double seconds = seconds_since(start);
    if (seconds > 1800) o.fail("exceeded 30 minutes");
    emit(6, "legged graph cohomology facts", o, seconds);
}

void criterion_7() {
    const auto start = Clock::now();
    const int g_max = stretch_enabled() ? 8 : 6;
    SliceStore store(cache_root());
    Outcome o;
    const auto shapes = enumerate_tree_shapes(g_max);
    const DecorationTable table = compute_decoration_table(store, needed_decorations(shapes, g_max));
    std::map<int, std::map<int, E1Cell>> predicted;
    for (int g = 3; g <= g_max; ++g) predicted[g] = predict_e1_row(table, shapes, g);
    const CohomTable direct = cohomology_dims(store, Flavor::Even, VariantSpec::parse("s_bl"), 0, 3, g_max);
    const Report report = compare_prediction(predicted, direct);
    o.notes.push_back(std::to_string(report.checks.size()) + " cells compared for g=3.." + std::to_string(g_max));
    add_failures(o, report);
    for (const auto& [gv, want] : kAttributions) {
        if (gv.first > g_max) continue;
        std::string got = "0";
        if (const auto row = predicted.find(gv.first); row != predicted.end()) {
            if (const auto cell = row->second.find(gv.second); cell != row->second.end()) {
                got = cell->second.attribution();
            }
        }
        const std::string where = "g=" + std::to_string(gv.first) + " v=" + std::to_string(gv.second);
        if (got != want) o.fail(where + ": expected " + want + ", predicted " + got);
    }
    emit(7, "decorated-tree prediction equals the direct computation, g <= " + std::to_string(g_max), o,
         seconds_since(start));
}

void criterion_8() {
    const auto start = Clock::now();
    Outcome o;
    const std::string command = std::string("\"") + BGC_UNIT_TESTS + "\" --test-suite=properties --minimal";
    const int status = std::system(command.c_str());
    if (status != 0) o.fail("property suite exited with status " + std::to_string(status));
    const double seconds = seconds_since(start);
    if (seconds > 300) o.fail("exceeded 5 minutes");
    emit(8, "property suites", o, seconds);
}

}  // namespace

int main() {
    std::cout << "stretch targets " << (stretch_enabled() ? "enabled" : "disabled (set BGC_STRETCH to enable)")
              << '\n';
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
