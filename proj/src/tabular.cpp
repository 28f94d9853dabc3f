#include "lyphc/tabular.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lyphc {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::optional<json> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    bool real = cell.find_first_of(".eE") != std::string::npos;
    if (!real) {
        long long v = 0;
        auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec == std::errc() && p == cell.data() + cell.size()) return json(v);
        return std::nullopt;
    }
    double d = 0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), d);
    if (ec == std::errc() && p == cell.data() + cell.size()) return json(d);
    return std::nullopt;
}

std::string number_text(const json& v) {
    return v.dump();
}

// Unknown columns: cells that read as non-string JSON keep that value.
json loose_value(const std::string& cell) {
    json v = json::parse(cell, nullptr, false);
    if (v.is_discarded()) return cell;
    return v;
}

std::string loose_text(const json& v) {
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        json probe = json::parse(s, nullptr, false);
        return probe.is_discarded() ? s : v.dump();
    }
    return v.dump();
}

class RowReader {
public:
    RowReader(ValidationReport& report, std::string location) : report_(report), location_(std::move(location)) {}

    std::optional<json> cell(const PropertyDef* def, const std::string& column, const std::string& raw) {
        std::string text = trim(raw);
        if (text.empty()) return std::nullopt;
        if (!def) return loose_value(text);
        switch (def->kind) {
        case PropKind::String:
        case PropKind::Enum:
        case PropKind::Ref:
            return json(text);
        case PropKind::Bool: {
            std::string u = upper(text);
            if (u == "TRUE") return json(true);
            if (u == "FALSE") return json(false);
            bad(column, "expects TRUE or FALSE");
            return std::nullopt;
        }
        case PropKind::Number:
        case PropKind::PositiveInteger:
        case PropKind::Fraction:
            if (auto n = parse_number(text)) return n;
            bad(column, "expects a decimal number");
            return std::nullopt;
        case PropKind::RefList:
        case PropKind::CurieList: {
            std::size_t empty = 0;
            auto items = split_list(text, &empty);
            if (empty)
                report_.warn("empty-element", "list in column '" + column + "' has empty elements", {}, location_);
            return json(items);
        }
        case PropKind::Vector:
        case PropKind::Vector2: {
            json out = json::array();
            std::istringstream in(text);
            std::string tok;
            while (in >> tok) {
                auto n = parse_number(tok);
                if (!n) {
                    bad(column, "expects space-separated coordinates");
                    return std::nullopt;
                }
                out.push_back(*n);
            }
            return out;
        }
        }
        return std::nullopt;
    }

private:
    void bad(const std::string& column, const std::string& what) {
        report_.error("type", "column '" + column + "' " + what, {}, location_);
    }

    ValidationReport& report_;
    std::string location_;
};

std::string cell_text(const PropertyDef* def, const json& v) {
    if (!def) return loose_text(v);
    switch (def->kind) {
    case PropKind::Bool:
        return v.is_boolean() ? (v.get<bool>() ? "TRUE" : "FALSE") : loose_text(v);
    case PropKind::Number:
    case PropKind::PositiveInteger:
    case PropKind::Fraction:
        return v.is_number() ? number_text(v) : loose_text(v);
    case PropKind::RefList:
    case PropKind::CurieList: {
        if (!v.is_array()) return loose_text(v);
        std::vector<std::string> items;
        for (const auto& e : v) items.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        return join_list(items);
    }
    case PropKind::Vector:
    case PropKind::Vector2: {
        if (!v.is_array()) return loose_text(v);
        std::string out;
        for (const auto& e : v) out += (out.empty() ? "" : " ") + number_text(e);
        return out;
    }
    default:
        return v.is_string() ? v.get<std::string>() : loose_text(v);
    }
}

std::string location(std::string_view source, const std::string& page, std::size_t row) {
    return std::string(source) + "#" + page + "!" + std::to_string(row);
}

void read_main(const Table& t, Model& m, ValidationReport& report, std::string_view source,
               std::vector<std::string>& clades) {
    std::vector<std::vector<std::string>> rows;
    bool header_is_data = !t.header.empty() && t.header[0] != "key";
    if (header_is_data) rows.push_back(t.header);
    rows.insert(rows.end(), t.rows.begin(), t.rows.end());
    std::size_t row_no = header_is_data ? 1 : 2;
    for (const auto& row : rows) {
        std::string loc = location(source, "main", row_no++);
        if (row.empty()) continue;
        std::string key = trim(row[0]);
        std::string value = row.size() > 1 ? trim(row[1]) : "";
        if (key.empty()) continue;
        if (key == "id") m.id = value;
        else if (key == "namespace") m.ns = value;
        else if (key == "name") m.name = value;
        else if (key == "description") m.description = value;
        else if (key == "schemaVersion") m.schema_version = value;
        else if (key == "imports") {
            for (const auto& item : split_list(value)) {
                auto sp = item.find(' ');
                if (sp == std::string::npos) m.imports.push_back({item, {}});
                else m.imports.push_back({trim(item.substr(sp + 1)), item.substr(0, sp)});
            }
        } else if (key == "clades") {
            clades = split_list(value);
        } else {
            report.warn("unknown-property", "unknown main page key '" + key + "'", {}, loc);
        }
    }
}

}  // namespace

Table* Workbook::page(std::string_view name) {
    for (auto& [n, t] : pages)
        if (n == name) return &t;
    return nullptr;
}

const Table* Workbook::page(std::string_view name) const {
    for (const auto& [n, t] : pages)
        if (n == name) return &t;
    return nullptr;
}

Table& Workbook::add_page(const std::string& name) {
    if (Table* t = page(name)) return *t;
    pages.emplace_back(name, Table{});
    return pages.back().second;
}

const std::vector<std::string>& workbook_page_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n{"main"};
        for (auto c : kAllClasses) n.emplace_back(collection_name(c));
        n.emplace_back("variances");
        return n;
    }();
    return names;
}

std::vector<std::string> split_list(std::string_view cell, std::size_t* empty_elements) {
    std::vector<std::string> out;
    std::size_t empty = 0;
    if (!trim(cell).empty()) {
        std::size_t start = 0;
        while (true) {
            std::size_t comma = cell.find(',', start);
            std::string item = trim(cell.substr(start, comma == std::string_view::npos ? cell.npos : comma - start));
            if (item.empty()) ++empty;
            else out.push_back(std::move(item));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    if (empty_elements) *empty_elements = empty;
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
    return out;
}

TabularResult workbook_to_spec(const Workbook& wb, std::string_view source) {
    TabularResult result;
    Model& m = result.model;
    ValidationReport& report = result.report;
    std::vector<std::string> clades;

    if (const Table* main = wb.page("main")) read_main(*main, m, report, source, clades);
    if (m.ns == "model" && m.id != "model") m.ns = m.id;

    for (const auto& [name, table] : wb.pages) {
        if (name == "main") continue;
        if (name == "variances") {
            std::size_t row_no = 2;
            auto col = [&](std::string_view h) -> std::optional<std::size_t> {
                for (std::size_t i = 0; i < table.header.size(); ++i)
                    if (trim(table.header[i]) == h) return i;
                return std::nullopt;
            };
            auto id_col = col("id"), clade_col = col("clades");
            for (const auto& row : table.rows) {
                std::string loc = location(source, name, row_no++);
                std::string id = id_col && *id_col < row.size() ? trim(row[*id_col]) : "";
                if (id.empty()) {
                    report.error("required", "variance row without id", {}, loc);
                    continue;
                }
                m.variance.presence[id] =
                    clade_col && *clade_col < row.size() ? split_list(row[*clade_col]) : std::vector<std::string>{};
            }
            continue;
        }
        auto cls = class_from_collection(name);
        if (!cls) {
            report.warn("unknown-page", "unknown page '" + name + "' ignored", {}, std::string(source) + "#" + name);
            continue;
        }
        std::size_t row_no = 2;
        for (const auto& row : table.rows) {
            std::string loc = location(source, name, row_no++);
            bool blank = std::all_of(row.begin(), row.end(), [](const std::string& c) { return trim(c).empty(); });
            if (blank) continue;
            Resource r;
            r.cls = *cls;
            r.ns = m.ns;
            r.origin = "/" + name + "/" + std::to_string(row_no - 3);
            RowReader reader(report, loc);
            for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i) {
                std::string column = trim(table.header[i]);
                if (column.empty()) continue;
                if (column == "id") {
                    r.id = trim(row[i]);
                    continue;
                }
                if (column == "namespace") {
                    if (auto v = trim(row[i]); !v.empty()) r.ns = v;
                    continue;
                }
                if (auto v = reader.cell(find_property(*cls, column), column, row[i])) r.props[column] = *v;
            }
            if (r.id.empty()) {
                report.error("required", std::string(class_name(*cls)) + " row without id", {}, loc);
                continue;
            }
            m.add(std::move(r));
        }
    }

    if (!clades.empty()) {
        m.variance.clades = clades;
    } else if (!m.variance.presence.empty()) {
        std::set<std::string> all;
        for (const auto& [k, v] : m.variance.presence) all.insert(v.begin(), v.end());
        m.variance.clades.assign(all.begin(), all.end());
    }
    return result;
}

Workbook spec_to_workbook(const Model& model) {
    Workbook wb;
    Table& main = wb.add_page("main");
    main.header = {"key", "value"};
    main.rows.push_back({"id", model.id});
    main.rows.push_back({"namespace", model.ns});
    if (model.schema_version != kSchemaVersion) main.rows.push_back({"schemaVersion", model.schema_version});
    if (!model.name.empty()) main.rows.push_back({"name", model.name});
    if (!model.description.empty()) main.rows.push_back({"description", model.description});
    if (!model.imports.empty()) {
        std::vector<std::string> items;
        for (const auto& imp : model.imports) items.push_back(imp.ns.empty() ? imp.url : imp.ns + " " + imp.url);
        main.rows.push_back({"imports", join_list(items)});
    }
    if (!model.variance.clades.empty()) main.rows.push_back({"clades", join_list(model.variance.clades)});

    for (ResourceClass c : kAllClasses) {
        std::vector<const Resource*> rs;
        for (const auto& r : model.resources())
            if (r.cls == c && !r.imported) rs.push_back(&r);
        if (rs.empty()) continue;
        std::set<std::string> columns;
        bool foreign = false;
        for (const Resource* r : rs) {
            for (auto it = r->props.begin(); it != r->props.end(); ++it) columns.insert(it.key());
            foreign = foreign || r->ns != model.ns;
        }
        Table& t = wb.add_page(std::string(collection_name(c)));
        t.header.push_back("id");
        if (foreign) t.header.push_back("namespace");
        t.header.insert(t.header.end(), columns.begin(), columns.end());
        for (const Resource* r : rs) {
            std::vector<std::string> row{r->id};
            if (foreign) row.push_back(r->ns == model.ns ? "" : r->ns);
            for (const auto& col : columns) {
                auto it = r->props.find(col);
                row.push_back(it == r->props.end() ? "" : cell_text(find_property(c, col), *it));
            }
            t.rows.push_back(std::move(row));
        }
    }

    if (!model.variance.presence.empty()) {
        Table& t = wb.add_page("variances");
        t.header = {"id", "clades"};
        for (const auto& [id, clades] : model.variance.presence) t.rows.push_back({id, join_list(clades)});
    }
    return wb;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string write_csv(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const std::string& f = row[i];
            if (f.find_first_of(",\"\r\n") == std::string::npos) {
                out += f;
                continue;
            }
            out += '"';
            for (char c : f) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        }
        out += '\n';
    }
    return out;
}

Workbook read_csv_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw TabularError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    const auto& known = workbook_page_names();
    auto rank = [&](const fs::path& p) {
        auto it = std::find(known.begin(), known.end(), p.stem().string());
        return std::make_pair(static_cast<std::size_t>(it - known.begin()), p.stem().string());
    };
    std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) { return rank(a) < rank(b); });

    Workbook wb;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        auto rows = parse_csv(ss.str());
        Table t;
        if (!rows.empty()) {
            t.header = rows.front();
            t.rows.assign(rows.begin() + 1, rows.end());
        }
        wb.pages.emplace_back(f.stem().string(), std::move(t));
    }
    return wb;
}

void write_csv_dir(const Workbook& wb, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& [name, t] : wb.pages) {
        std::vector<std::vector<std::string>> rows{t.header};
        rows.insert(rows.end(), t.rows.begin(), t.rows.end());
        std::ofstream out(dir / (name + ".csv"), std::ios::binary);
        if (!out) throw TabularError("cannot write " + (dir / (name + ".csv")).string());
        out << write_csv(rows);
    }
}

}  // namespace lyphc
