#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "lyphc/analysis.hpp"
#include "lyphc/composer.hpp"
#include "lyphc/document.hpp"
#include "lyphc/editor.hpp"
#include "lyphc/exporter.hpp"
#include "lyphc/generator.hpp"
#include "lyphc/layout.hpp"
#include "lyphc/schema.hpp"
#include "lyphc/tabular.hpp"

namespace fs = std::filesystem;
using namespace lyphc;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure("cannot write '" + path.string() + "'");
    out << text;
}

std::string stem_of(const std::string& input) {
    fs::path p(input);
    if (p.filename().empty()) p = p.parent_path();
    std::string s = p.filename().string();
    for (const char* ext : {".generated.json", ".json", ".xlsx", ".csvdir"})
        if (s.size() > std::string(ext).size() && s.ends_with(ext)) return s.substr(0, s.size() - std::string(ext).size());
    return p.stem().string();
}

struct Loaded {
    Model model;
    ValidationReport report;
};

// JSON document, .xlsx workbook or directory of CSV pages; "-" reads JSON from stdin.
Loaded load(const std::string& input) {
    Loaded l;
    if (input != "-" && fs::is_directory(input)) {
        auto r = workbook_to_spec(read_csv_dir(input), input);
        return {std::move(r.model), std::move(r.report)};
    }
    if (input.ends_with(".xlsx")) {
        auto r = workbook_to_spec(read_xlsx(input), input);
        return {std::move(r.model), std::move(r.report)};
    }
    std::string text = read_file(input);
    l.report = validate_syntax(std::string_view(text), input == "-" ? "stdin" : input);
    if (l.report.has_errors()) return l;
    l.model = parse_model_text(text);
    return l;
}

struct Session {
    ValidationReport report;

    Model load_or_fail(const std::string& input) {
        Loaded l = load(input);
        report.merge(l.report);
        if (l.report.has_errors()) throw Failure("");
        return std::move(l.model);
    }

    Model link(const Model& spec, const std::string& base, const std::optional<std::string>& cache, bool always) {
        if (spec.imports.empty()) return spec;
        FetcherOptions fo;
        fo.cache_dir = cache ? std::optional<fs::path>(*cache) : cache_dir_from_env();
        auto r = resolve_imports(spec, default_fetcher(fo), base, always ? CachePolicy::AlwaysFetch : CachePolicy::CacheOk);
        report.merge(r.report);
        return std::move(r.model);
    }

    Model generated(const Model& spec, bool neurulate = true) {
        if (spec.generated) return spec;
        GenerateOptions go;
        go.neurulate = neurulate;
        auto r = generate(spec, go);
        report.merge(r.report);
        if (!r.ok()) throw Failure("");
        return std::move(r.model);
    }

    int finish() {
        if (!report.empty()) std::cerr << report.render();
        return exit_code(report.max_severity());
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lyphc: compiler and linker for multiscale connectivity models"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every command");

    std::string input, second, output, script, start, mode = "2d", clade, svg, base_iri(kDefaultBase);
    std::optional<std::string> cache;
    std::vector<std::string> groups;
    std::uint64_t seed = 0;
    int iters = 300;
    bool always_fetch = false, no_neurulate = false;

    auto* validate_cmd = app.add_subcommand("validate", "Check a model document, workbook or CSV directory");
    validate_cmd->add_option("input", input, "Model file, '-' for stdin")->required();

    auto* convert_cmd = app.add_subcommand("convert", "Convert between JSON, XLSX (read only) and CSV directories");
    convert_cmd->add_option("input", input, "Source model")->required();
    convert_cmd->add_option("-o,--output", output, "Target: *.json file or a directory of CSV pages")->required();

    auto* generate_cmd = app.add_subcommand("generate", "Resolve imports and expand into a generated model");
    generate_cmd->add_option("input", input, "Model specification")->required();
    generate_cmd->add_option("-o,--output", output, "Output directory")->required();
    generate_cmd->add_option("--import-cache", cache, "Cache directory for fetched imports (default $LYPHC_IMPORT_CACHE)");
    generate_cmd->add_flag("--always-fetch", always_fetch, "Revalidate every import, ignoring cached copies");
    generate_cmd->add_flag("--no-neurulate", no_neurulate, "Skip closed-component groups");

    auto* merge_cmd = app.add_subcommand("merge", "Merge a second model into the first one's namespace");
    merge_cmd->add_option("base", input, "Base model")->required();
    merge_cmd->add_option("other", second, "Model to merge")->required();
    merge_cmd->add_option("-o,--output", output, "Output JSON")->required();

    auto* join_cmd = app.add_subcommand("join", "Join a second model under its own namespace");
    join_cmd->add_option("base", input, "Base model")->required();
    join_cmd->add_option("other", second, "Model to join")->required();
    join_cmd->add_option("-o,--output", output, "Output JSON")->required();

    auto* neurulate_cmd = app.add_subcommand("neurulate", "Find closed components of a (generated) model");
    neurulate_cmd->add_option("input", input, "Model")->required();
    neurulate_cmd->add_option("-o,--output", output, "Write the model with NEURULATED groups");

    auto* query_cmd = app.add_subcommand("query", "Soma-process query from a node, link or lyph");
    query_cmd->add_option("input", input, "Model")->required();
    query_cmd->add_option("--start", start, "Start resource id")->required();

    auto* layout_cmd = app.add_subcommand("layout", "Constraint-driven layout");
    layout_cmd->add_option("input", input, "Model")->required();
    layout_cmd->add_option("-o,--output", output, "Layout JSON (default stdout)");
    layout_cmd->add_option("--seed", seed, "Random seed")->default_val(0);
    layout_cmd->add_option("--iters", iters, "Force iterations")->default_val(300)->check(CLI::NonNegativeNumber);
    layout_cmd->add_option("--mode", mode, "2d or 3d")->default_val("2d")->check(CLI::IsMember({"2d", "3d"}));
    layout_cmd->add_option("--groups", groups, "Active groups (default: all resources)")->delimiter(',');
    layout_cmd->add_option("--clade", clade, "Show only resources present in this clade");
    layout_cmd->add_option("--svg", svg, "Also write an SVG drawing");

    auto* export_cmd = app.add_subcommand("export", "Write generated JSON, JSON-LD and the resource map");
    export_cmd->add_option("input", input, "Model")->required();
    export_cmd->add_option("-o,--output", output, "Output directory")->required();
    export_cmd->add_option("--base-iri", base_iri, "Base IRI for resources")->default_val(std::string(kDefaultBase));
    export_cmd->add_option("--import-cache", cache, "Cache directory for fetched imports");

    auto* edit_cmd = app.add_subcommand("edit", "Apply an edit script transactionally");
    edit_cmd->add_option("input", input, "Model")->required();
    edit_cmd->add_option("--script", script, "JSON list of edit ops")->required();
    edit_cmd->add_option("-o,--output", output, "Edited model JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    Session s;
    try {
        if (*validate_cmd) {
            Model m = s.load_or_fail(input);
            s.report.merge(validate_references(m));
            if (m.generated) s.report.merge(validate_generated(m));
        } else if (*convert_cmd) {
            Model m = s.load_or_fail(input);
            if (output.ends_with(".json")) write_file(output, serialize(m, DocumentKind::Input));
            else if (output.ends_with(".xlsx")) throw Failure("writing .xlsx is not supported; use a CSV directory");
            else write_csv_dir(spec_to_workbook(m), output);
        } else if (*generate_cmd) {
            Model m = s.link(s.load_or_fail(input), input, cache, always_fetch);
            GenerateOptions go;
            go.neurulate = !no_neurulate;
            auto r = generate(m, go);
            s.report.merge(r.report);
            if (!r.ok()) throw Failure("");
            write_file(fs::path(output) / (stem_of(input) + ".generated.json"), serialize_generated(r.model));
        } else if (*merge_cmd || *join_cmd) {
            Model a = s.load_or_fail(input), b = s.load_or_fail(second);
            auto r = *merge_cmd ? merge(a, b) : join(a, b);
            s.report.merge(r.report);
            write_file(output, serialize(r.model, DocumentKind::Input));
        } else if (*neurulate_cmd) {
            Model m = s.generated(s.link(s.load_or_fail(input), input, cache, false), false);
            auto r = neurulate(m);
            s.report.merge(r.report);
            for (const auto& g : r.groups) std::cout << g.key() << " " << g.refs("links").size() << " links\n";
            replace_neurulated(m, r.groups);
            if (!output.empty()) write_file(output, serialize_generated(m));
        } else if (*query_cmd) {
            Model m = s.generated(s.link(s.load_or_fail(input), input, cache, false));
            auto r = soma_processes(m, start);
            s.report.merge(r.report);
            std::cout << canonical_text(resource_to_json(r.group, m.ns));
        } else if (*layout_cmd) {
            Model m = s.generated(s.link(s.load_or_fail(input), input, cache, false));
            if (!clade.empty()) {
                auto v = filter_by_clade(m, clade);
                s.report.merge(v.report);
                apply_visibility(m, v);
            }
            LayoutOptions lo;
            lo.seed = seed;
            lo.iterations = iters;
            lo.three_d = mode == "3d";
            if (!groups.empty()) lo.active_groups = std::set<std::string>(groups.begin(), groups.end());
            auto r = run_layout(m, lo);
            s.report.merge(r.report);
            std::string text = canonical_text(layout_to_json(r.state));
            if (output.empty()) std::cout << text;
            else write_file(output, text);
            if (!svg.empty()) write_file(svg, layout_to_svg(m, r.state));
        } else if (*export_cmd) {
            Model m = s.generated(s.link(s.load_or_fail(input), input, cache, false));
            auto ld = to_json_ld(m, default_context(base_iri));
            s.report.merge(ld.report);
            std::string stem = stem_of(input);
            write_file(fs::path(output) / (stem + ".generated.json"), serialize_generated(m));
            write_file(fs::path(output) / (stem + ".jsonld"), canonical_text(ld.document));
            write_file(fs::path(output) / (stem + ".resource-map.json"), canonical_text(resource_map(m)));
        } else if (*edit_cmd) {
            Model m = s.load_or_fail(input);
            auto ops = parse_script(json::parse(read_file(script)));
            auto r = run_script(m, ops);
            s.report.merge(r.report);
            if (!r.ok) throw Failure("edit script rejected; nothing written");
            for (std::size_t i = 0; i < r.diffs.size(); ++i)
                std::cout << "# " << (i + 1) << " " << edit_kind_name(ops[i].kind) << " " << ops[i].target << "\n"
                          << r.diffs[i].render();
            write_file(output, serialize(r.model, m.generated ? DocumentKind::Generated : DocumentKind::Input));
            write_file(output + ".editlog.json", canonical_text(r.log.to_json()));
        }
    } catch (const Failure& e) {
        if (*e.what()) std::cerr << "error: " << e.what() << "\n";
        s.finish();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        s.finish();
        return 2;
    }
    return s.finish();
}
