#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bgc/canonical.hpp"
#include "bgc/cohomology.hpp"
#include "bgc/complex.hpp"
#include "bgc/e1.hpp"
#include "bgc/multigraph.hpp"
#include "bgc/orientation.hpp"
#include "bgc/version.hpp"

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string flavor = "even";
    std::string variant = "s_bl";
    int r = 0;
    int g_min = 3;
    int g_max = 6;
    int v_min = 1;
    int v_max = -1;
    std::vector<std::uint32_t> primes = bgc::default_primes();
    std::string cache;
    std::string format = "text";
    int threads = 0;

    bgc::Flavor parsed_flavor;
    bgc::VariantSpec parsed_variant;

    void validate() {
        try {
            parsed_flavor = bgc::parse_flavor(flavor);
            parsed_variant = bgc::VariantSpec::parse(variant);
            parsed_variant.validate(parsed_flavor);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (r < 0 || r > 8) throw UsageError("r must lie in [0, 8]");
        if (g_min < 0 || g_max < g_min) throw UsageError("need 0 <= g-min <= g-max");
        if (v_min < 1) throw UsageError("v-min must be at least 1");
        if (v_max >= 0 && v_max < v_min) throw UsageError("v-max is below v-min");
        if (format != "text" && format != "csv" && format != "json") {
            throw UsageError("format must be text, csv or json");
        }
        if (threads < 0) throw UsageError("threads must be non-negative");
        if (primes.empty()) throw UsageError("at least one prime is needed");
        for (std::uint32_t p : primes) {
            if (p < 3 || p >= (1u << 31) || !is_prime(p)) {
                throw UsageError("not an odd prime below 2^31: " + std::to_string(p));
            }
        }
    }

    [[nodiscard]] std::optional<std::filesystem::path> cache_root() const {
        if (!cache.empty()) return std::filesystem::path(cache);
        return std::nullopt;
    }

    [[nodiscard]] bgc::CohomOptions cohom_options() const {
        bgc::CohomOptions o;
        o.primes = primes;
        return o;
    }

    [[nodiscard]] ordered_json echo() const {
        ordered_json j;
        j["flavor"] = flavor;
        j["variant"] = variant;
        j["r"] = r;
        j["g_min"] = g_min;
        j["g_max"] = g_max;
        j["v_min"] = v_min;
        j["v_max"] = v_max;
        j["primes"] = primes;
        j["cache"] = cache;
        j["format"] = format;
        return j;
    }

    static bool is_prime(std::uint32_t p) {
        for (std::uint64_t d = 2; d * d <= p; ++d) {
            if (p % d == 0) return false;
        }
        return true;
    }
};

ordered_json provenance(const RunConfig& config) {
    ordered_json j;
    j["tool"] = "bgc";
    j["version"] = bgc::kVersion;
    j["primes"] = config.primes;
    j["config"] = config.echo();
    return j;
}

void emit(const std::string& content, const std::string& output) {
    if (output.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    bgc::write_file_atomic(output, content);
}

int column_top(const RunConfig& config, int g) {
    const int top = bgc::max_slice_index({config.parsed_flavor, config.parsed_variant, g, config.r, 1});
    return config.v_max < 0 ? top : std::min(top, config.v_max);
}

int cmd_basis(const RunConfig& config, const std::string& output) {
    bgc::SliceStore store(config.cache_root());
    std::ostringstream text;
    std::ostringstream csv;
    ordered_json rows = ordered_json::array();
    csv << "flavor,variant,r,g,v,count\n";
    for (int g = config.g_min; g <= config.g_max; ++g) {
        text << config.flavor << '/' << config.parsed_variant.name() << " r=" << config.r << " g=" << g << '\n';
        for (int v = config.v_min; v <= column_top(config, g); ++v) {
            const bgc::SliceKey key{config.parsed_flavor, config.parsed_variant, g, config.r, v};
            const std::size_t n = store.basis(key).size();
            text << "v=" << v << ": " << n << '\n';
            csv << config.flavor << ',' << config.parsed_variant.name() << ',' << config.r << ',' << g << ',' << v
                << ',' << n << '\n';
            rows.push_back({{"g", g}, {"v", v}, {"count", n}});
        }
    }
    if (config.format == "text") emit(text.str(), output);
    if (config.format == "csv") emit(csv.str(), output);
    if (config.format == "json") {
        ordered_json doc;
        doc["provenance"] = provenance(config);
        doc["bases"] = rows;
        emit(doc.dump(2), output);
    }
    return 0;
}

int cmd_diff(const RunConfig& config, const std::string& output) {
    bgc::SliceStore store(config.cache_root());
    std::ostringstream text;
    std::ostringstream csv;
    ordered_json rows = ordered_json::array();
    csv << "flavor,variant,r,g,v,rows,cols,nnz\n";
    for (int g = config.g_min; g <= config.g_max; ++g) {
        text << config.flavor << '/' << config.parsed_variant.name() << " r=" << config.r << " g=" << g << '\n';
        for (int v = std::max(2, config.v_min); v <= column_top(config, g); ++v) {
            const bgc::SliceKey key{config.parsed_flavor, config.parsed_variant, g, config.r, v};
            const bgc::SparseIntMatrix& d = store.differential(key);
            text << "v=" << v << "->" << v - 1 << ": " << d.rows() << 'x' << d.cols() << " nnz=" << d.nnz() << '\n';
            csv << config.flavor << ',' << config.parsed_variant.name() << ',' << config.r << ',' << g << ',' << v
                << ',' << d.rows() << ',' << d.cols() << ',' << d.nnz() << '\n';
            rows.push_back({{"g", g}, {"v", v}, {"rows", d.rows()}, {"cols", d.cols()}, {"nnz", d.nnz()}});
        }
    }
    if (config.format == "text") emit(text.str(), output);
    if (config.format == "csv") emit(csv.str(), output);
    if (config.format == "json") {
        ordered_json doc;
        doc["provenance"] = provenance(config);
        doc["differentials"] = rows;
        emit(doc.dump(2), output);
    }
    return 0;
}

int cmd_cohomology(const RunConfig& config, const std::string& output) {
    bgc::SliceStore store(config.cache_root());
    const bgc::CohomTable table =
        bgc::cohomology_dims(store, config.parsed_flavor, config.parsed_variant, config.r, config.g_min,
                             config.g_max, config.v_min, config.v_max, config.cohom_options());
    if (config.format == "text") emit(bgc::table_text(table), output);
    if (config.format == "csv") emit(bgc::table_csv(table), output);
    if (config.format == "json") {
        ordered_json doc;
        doc["provenance"] = provenance(config);
        doc["table"] = ordered_json::parse(bgc::table_json(table));
        emit(doc.dump(2), output);
    }
    if (table.any_flagged()) std::cerr << "warning: modular ranks disagreed on some cells\n";
    return 0;
}

struct VerifyArgs {
    std::string check = "all";
    int g_max = -1;
    int r_max = -1;
    double budget = 0.0;
    std::size_t graph_limit = 0;
    std::string report;
};

bgc::Report run_check(const RunConfig& config, const VerifyArgs& args, const std::string& check) {
    auto pick = [&](int value, int fallback) { return value >= 0 ? value : fallback; };
    bgc::SliceStore store(config.cache_root());
    if (check == "d2") {
        bgc::D2RangeOptions o;
        o.g_max = pick(args.g_max, 4);
        o.r_max = pick(args.r_max, 2);
        o.cache_root = config.cache_root();
        o.budget_seconds = args.budget;
        o.graph_limit = args.graph_limit;
        o.on_result = [](const bgc::CheckResult& c) {
            std::cerr << (c.pass ? "PASS " : "FAIL ") << c.params << " (" << c.seconds << " s)" << std::endl;
        };
        return bgc::verify_d_squared_range(o);
    }
    if (check == "multiedge") {
        bgc::MultiedgeOptions o;
        o.g_max = pick(args.g_max, 5);
        o.r_max = pick(args.r_max, 2);
        return bgc::verify_multiedge_proposition(store, o);
    }
    if (check == "fat") {
        bgc::Report report;
        for (int g = 0; g <= pick(args.g_max, 4); ++g) {
            for (int r = 0; r <= pick(args.r_max, 2); ++r) {
                if (bgc::max_vertices(g, r) > 0) report.append(bgc::verify_fat_claims(store, g, r));
            }
        }
        return report;
    }
    if (check == "legs") {
        bgc::LegFactOptions o;
        o.g_max = pick(args.g_max, 4);
        return bgc::verify_leg_facts(store, o);
    }
    if (check == "e1") {
        const int g_max = pick(args.g_max, 6);
        const auto shapes = bgc::enumerate_tree_shapes(g_max);
        const auto table = bgc::compute_decoration_table(store, bgc::needed_decorations(shapes, g_max),
                                                         config.cohom_options());
        std::map<int, std::map<int, bgc::E1Cell>> predicted;
        for (int g = 3; g <= g_max; ++g) predicted[g] = bgc::predict_e1_row(table, shapes, g);
        const bgc::CohomTable direct = bgc::cohomology_dims(store, bgc::Flavor::Even, bgc::VariantSpec::parse("s_bl"),
                                                            0, 3, g_max, 1, -1, config.cohom_options());
        return bgc::compare_prediction(predicted, direct);
    }
    throw UsageError("unknown check '" + check + "'");
}

int cmd_verify(const RunConfig& config, const VerifyArgs& args, const std::string& output) {
    std::vector<std::string> checks;
    if (args.check == "all") {
        checks = {"d2", "multiedge", "fat", "legs", "e1"};
    } else {
        checks = {args.check};
    }
    bgc::Report report;
    for (const std::string& check : checks) report.append(run_check(config, args, check));
    emit(config.format == "json" ? report.json(config.primes) : report.text(), output);
    std::string report_path = args.report;
    if (report_path.empty() && config.cache_root()) {
        report_path = (*config.cache_root() / "reports" / ("verify_" + args.check + ".json")).string();
    }
    if (!report_path.empty()) {
        ordered_json doc = ordered_json::parse(report.json(config.primes));
        doc["provenance"] = provenance(config);
        bgc::write_file_atomic(report_path, doc.dump(2) + "\n");
    }
    return report.all_passed() ? 0 : 1;
}

int cmd_e1(const RunConfig& config, int g_max, const std::string& output) {
    bgc::SliceStore store(config.cache_root());
    const auto shapes = bgc::enumerate_tree_shapes(g_max);
    const auto table =
        bgc::compute_decoration_table(store, bgc::needed_decorations(shapes, g_max), config.cohom_options());
    std::ostringstream text;
    std::ostringstream csv;
    ordered_json cells = ordered_json::array();
    csv << "flavor,variant,r,g,v,dim_basis,rank_out,rank_in,dim_H,attribution\n";
    text << "shapes:";
    for (const auto& s : shapes) text << ' ' << s.name << "(|Aut|=" << s.automorphisms.size() << ')';
    text << '\n';
    for (int g = 3; g <= g_max; ++g) {
        const auto row = bgc::predict_e1_row(table, shapes, g);
        for (int v = 1; v <= bgc::max_vertices(g, 0); ++v) {
            auto it = row.find(v);
            const int total = it == row.end() ? 0 : it->second.total;
            const std::string attribution = it == row.end() ? "0" : it->second.attribution();
            if (total > 0) text << "g=" << g << " v=" << v << ": " << total << '=' << attribution << '\n';
            csv << "even,s_bl,0," << g << ',' << v << ",,,," << total << ',' << attribution << '\n';
            cells.push_back({{"flavor", "even"},
                             {"variant", "s_bl"},
                             {"r", 0},
                             {"g", g},
                             {"v", v},
                             {"dim_H", total},
                             {"attribution", attribution}});
        }
    }
    if (config.format == "text") emit(text.str(), output);
    if (config.format == "csv") emit(csv.str(), output);
    if (config.format == "json") {
        ordered_json doc;
        doc["provenance"] = provenance(config);
        doc["cells"] = cells;
        emit(doc.dump(2), output);
    }
    return 0;
}

int cmd_graph(const std::string& line) {
    bgc::ParsedGraph parsed;
    try {
        parsed = bgc::parse_graph(line);
    } catch (const bgc::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    const bgc::Multigraph& g = parsed.graph;
    std::cout << "vertices: " << g.num_vertices() << '\n';
    std::cout << "edges: " << g.num_edges() << " (normal " << g.num_normal_edges() << ", fat " << g.num_fat_edges()
              << ")\n";
    std::cout << "legs: " << g.num_legs() << '\n';
    std::cout << "valences:";
    for (int v = 0; v < g.num_vertices(); ++v) std::cout << ' ' << bgc::valence(g, v);
    std::cout << '\n';
    std::cout << "genus: " << bgc::genus_data(g).genus << '\n';
    const auto bridges = bgc::find_bridges(g);
    std::cout << "bridges:";
    if (bridges.empty()) std::cout << " none";
    for (int e : bridges) std::cout << ' ' << e;
    std::cout << '\n';
    std::cout << "Aut order " << bgc::automorphism_edge_actions(g).size()
              << ", zero(Even)=" << (bgc::is_zero_graph(g, bgc::Flavor::Even) ? "true" : "false")
              << ", zero(Odd)=" << (bgc::is_zero_graph(g, bgc::Flavor::Odd) ? "true" : "false") << '\n';
    std::cout << "degree(Even)=" << bgc::graph_degree(g, bgc::Flavor::Even)
              << ", degree(Odd)=" << bgc::graph_degree(g, bgc::Flavor::Odd) << '\n';
    std::cout << "canonical: " << bgc::encode(bgc::canonicalize(g).canonical_graph, parsed.flavor_char) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph complexes with legs: bases, differentials, cohomology and checks"};
    app.set_version_flag("--version", bgc::kVersion);
    app.set_config("--config", "", "Flat key = value configuration file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    if (const char* env = std::getenv("BGC_CACHE")) config.cache = env;
    std::string output;
    app.add_option("--flavor", config.flavor, "even or odd")->capture_default_str();
    app.add_option("--variant", config.variant, "full, bl, s, s_bl, fat or fat_bl")->capture_default_str();
    app.add_option("-r,--r", config.r, "Number of legs")->capture_default_str();
    app.add_option("--g-min,--g_min", config.g_min, "Smallest loop order")->capture_default_str();
    app.add_option("--g-max,--g_max", config.g_max, "Largest loop order")->capture_default_str();
    app.add_option("--v-min,--v_min", config.v_min, "Smallest vertex count (slice index for fat)")->capture_default_str();
    app.add_option("--v-max,--v_max", config.v_max, "Largest vertex count, -1 for all")->capture_default_str();
    app.add_option("--primes", config.primes, "Primes for modular ranks")->delimiter(',');
    app.add_option("--cache", config.cache, "Cache directory (default: $BGC_CACHE)");
    app.add_option("--format", config.format, "text, csv or json")->capture_default_str();
    app.add_option("-j,--threads", config.threads, "Worker threads, 0 for all cores")->capture_default_str();
    app.add_option("-o,--output", output, "Write the result to this file instead of stdout");

    auto* basis = app.add_subcommand("basis", "Build bases and print their sizes");
    auto* diff = app.add_subcommand("diff", "Build differentials and print their shapes");
    auto* cohomology = app.add_subcommand("cohomology", "Cohomology dimension table");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("check", verify_args.check, "d2, multiedge, fat, legs, e1 or all")
        ->check(CLI::IsMember({"d2", "multiedge", "fat", "legs", "e1", "all"}));
    verify->add_option("--upto-g", verify_args.g_max, "Largest loop order checked (per-check default)");
    verify->add_option("--upto-r", verify_args.r_max, "Largest leg count checked (per-check default)");
    verify->add_option("--budget", verify_args.budget, "Time budget in seconds for d2, 0 for none");
    verify->add_option("--graph-limit", verify_args.graph_limit, "Graph count limit for d2, 0 for none");
    verify->add_option("--report", verify_args.report, "Machine-readable report path");

    int e1_g_max = 6;
    auto* e1 = app.add_subcommand("e1", "Decorated-tree prediction of the bridgeless simple table");
    e1->add_option("--upto-g", e1_g_max, "Largest loop order (at most 10)")->capture_default_str();

    std::string graph_line;
    auto* graph = app.add_subcommand("graph", "Diagnostic dump of one encoded graph");
    graph->add_option("encoding", graph_line, "Graph encoding line")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        config.validate();
        bgc::set_num_threads(config.threads);
        if (*basis) return cmd_basis(config, output);
        if (*diff) return cmd_diff(config, output);
        if (*cohomology) return cmd_cohomology(config, output);
        if (*verify) return cmd_verify(config, verify_args, output);
        if (*e1) {
            if (e1_g_max > bgc::kMaxTreeGenus) throw UsageError("e1 is limited to loop order 10");
            return cmd_e1(config, e1_g_max, output);
        }
        if (*graph) return cmd_graph(graph_line);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
