#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <zlib.h>

#include "lyphc/tabular.hpp"

namespace lyphc {

namespace {

// --- zip ---------------------------------------------------------------

std::uint32_t u16(const std::string& b, std::size_t at) {
    if (at + 2 > b.size()) throw TabularError("truncated xlsx archive");
    return std::uint32_t(std::uint8_t(b[at])) | std::uint32_t(std::uint8_t(b[at + 1])) << 8;
}

std::uint32_t u32(const std::string& b, std::size_t at) {
    return u16(b, at) | u16(b, at + 2) << 16;
}

std::string inflate_raw(std::string_view data, std::size_t expected) {
    std::string out(expected, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw TabularError("zlib init failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) throw TabularError("corrupt deflate stream in xlsx archive");
    out.resize(zs.total_out);
    return out;
}

std::map<std::string, std::string> unzip(const std::string& b) {
    if (b.size() < 22) throw TabularError("not an xlsx (zip) file");
    std::size_t eocd = std::string::npos;
    for (std::size_t i = b.size() - 22 + 1; i-- > 0;) {
        if (u32(b, i) == 0x06054b50) {
            eocd = i;
            break;
        }
        if (b.size() - i > 22 + 65535) break;
    }
    if (eocd == std::string::npos) throw TabularError("not an xlsx (zip) file");
    std::size_t entries = u16(b, eocd + 10);
    std::size_t at = u32(b, eocd + 16);

    std::map<std::string, std::string> files;
    for (std::size_t k = 0; k < entries; ++k) {
        if (u32(b, at) != 0x02014b50) throw TabularError("bad central directory in xlsx archive");
        std::uint32_t method = u16(b, at + 10);
        std::size_t csize = u32(b, at + 20), usize = u32(b, at + 24);
        std::size_t nlen = u16(b, at + 28), xlen = u16(b, at + 30), clen = u16(b, at + 32);
        std::size_t local = u32(b, at + 42);
        std::string name = b.substr(at + 46, nlen);
        at += 46 + nlen + xlen + clen;

        if (u32(b, local) != 0x04034b50) throw TabularError("bad local header in xlsx archive");
        std::size_t data = local + 30 + u16(b, local + 26) + u16(b, local + 28);
        if (data + csize > b.size()) throw TabularError("truncated xlsx archive");
        std::string_view raw(b.data() + data, csize);
        if (method == 0) files[name] = std::string(raw);
        else if (method == 8) files[name] = inflate_raw(raw, usize);
        else throw TabularError("unsupported compression in xlsx archive: " + name);
    }
    return files;
}

// --- xml ---------------------------------------------------------------

struct XmlEvent {
    enum Kind { Start, End, Text } kind;
    std::string name;
    std::map<std::string, std::string> attrs;
    std::string text;
    bool empty = false;  // self-closing start tag
};

std::string decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        std::size_t semi = s.find(';', i);
        if (semi == std::string_view::npos) {
            out += s[i];
            continue;
        }
        std::string_view ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (!ent.empty() && ent[0] == '#') {
            unsigned long cp = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')
                                   ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                                   : std::stoul(std::string(ent.substr(1)));
            if (cp < 0x80) out += char(cp);
            else if (cp < 0x800) {
                out += char(0xC0 | (cp >> 6));
                out += char(0x80 | (cp & 0x3F));
            } else if (cp < 0x10000) {
                out += char(0xE0 | (cp >> 12));
                out += char(0x80 | ((cp >> 6) & 0x3F));
                out += char(0x80 | (cp & 0x3F));
            } else {
                out += char(0xF0 | (cp >> 18));
                out += char(0x80 | ((cp >> 12) & 0x3F));
                out += char(0x80 | ((cp >> 6) & 0x3F));
                out += char(0x80 | (cp & 0x3F));
            }
        } else {
            out += '&';
            out += ent;
            out += ';';
        }
        i = semi;
    }
    return out;
}

std::string local_name(std::string_view qname) {
    auto colon = qname.find(':');
    return std::string(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
}

std::vector<XmlEvent> scan(const std::string& xml) {
    std::vector<XmlEvent> events;
    std::size_t i = 0;
    while (i < xml.size()) {
        if (xml[i] != '<') {
            std::size_t next = xml.find('<', i);
            if (next == std::string::npos) next = xml.size();
            events.push_back({XmlEvent::Text, {}, {}, decode(std::string_view(xml).substr(i, next - i))});
            i = next;
            continue;
        }
        if (xml.compare(i, 4, "<!--") == 0) {
            std::size_t e = xml.find("-->", i);
            i = e == std::string::npos ? xml.size() : e + 3;
            continue;
        }
        if (xml.compare(i, 9, "<![CDATA[") == 0) {
            std::size_t e = xml.find("]]>", i);
            std::size_t end = e == std::string::npos ? xml.size() : e;
            events.push_back({XmlEvent::Text, {}, {}, xml.substr(i + 9, end - i - 9)});
            i = e == std::string::npos ? xml.size() : e + 3;
            continue;
        }
        std::size_t close = xml.find('>', i);
        if (close == std::string::npos) break;
        std::string_view tag(xml.data() + i + 1, close - i - 1);
        i = close + 1;
        if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
        if (tag[0] == '/') {
            events.push_back({XmlEvent::End, local_name(tag.substr(1)), {}, {}});
            continue;
        }
        XmlEvent ev{XmlEvent::Start, {}, {}, {}};
        if (tag.back() == '/') {
            ev.empty = true;
            tag.remove_suffix(1);
        }
        std::size_t p = 0;
        while (p < tag.size() && !std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
        ev.name = local_name(tag.substr(0, p));
        while (p < tag.size()) {
            while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
            std::size_t eq = tag.find('=', p);
            if (eq == std::string_view::npos) break;
            std::string key = local_name(tag.substr(p, eq - p));
            std::size_t q = eq + 1;
            if (q >= tag.size()) break;
            char quote = tag[q];
            std::size_t end = tag.find(quote, q + 1);
            if (end == std::string_view::npos) break;
            ev.attrs[key] = decode(tag.substr(q + 1, end - q - 1));
            p = end + 1;
        }
        events.push_back(std::move(ev));
        if (events.back().empty) events.push_back({XmlEvent::End, events.back().name, {}, {}});
    }
    return events;
}

std::vector<std::string> shared_strings(const std::string& xml) {
    std::vector<std::string> out;
    bool in_si = false, in_t = false, in_rph = false;
    std::string cur;
    for (const auto& ev : scan(xml)) {
        if (ev.kind == XmlEvent::Start) {
            if (ev.name == "si") {
                in_si = true;
                cur.clear();
            } else if (ev.name == "t") in_t = true;
            else if (ev.name == "rPh") in_rph = true;
        } else if (ev.kind == XmlEvent::End) {
            if (ev.name == "si") {
                in_si = false;
                out.push_back(cur);
            } else if (ev.name == "t") in_t = false;
            else if (ev.name == "rPh") in_rph = false;
        } else if (in_si && in_t && !in_rph) {
            cur += ev.text;
        }
    }
    return out;
}

std::size_t column_index(const std::string& ref) {
    std::size_t col = 0;
    for (char c : ref) {
        if (c < 'A' || c > 'Z') break;
        col = col * 26 + std::size_t(c - 'A' + 1);
    }
    return col == 0 ? 0 : col - 1;
}

std::vector<std::vector<std::string>> sheet_rows(const std::string& xml, const std::vector<std::string>& strings) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string>* row = nullptr;
    std::string type, value, ref;
    std::size_t next_col = 0;
    bool in_cell = false, in_v = false, in_t = false;
    for (const auto& ev : scan(xml)) {
        if (ev.kind == XmlEvent::Start) {
            if (ev.name == "row") {
                std::size_t r = rows.size() + 1;
                if (auto it = ev.attrs.find("r"); it != ev.attrs.end()) r = std::stoul(it->second);
                if (r > rows.size()) rows.resize(r);
                row = &rows[r - 1];
                next_col = 0;
            } else if (ev.name == "c") {
                in_cell = true;
                value.clear();
                auto t = ev.attrs.find("t");
                type = t == ev.attrs.end() ? "n" : t->second;
                auto r = ev.attrs.find("r");
                ref = r == ev.attrs.end() ? "" : r->second;
            } else if (ev.name == "v") in_v = true;
            else if (ev.name == "t") in_t = true;
        } else if (ev.kind == XmlEvent::End) {
            if (ev.name == "v") in_v = false;
            else if (ev.name == "t") in_t = false;
            else if (ev.name == "c" && in_cell && row) {
                in_cell = false;
                std::size_t col = ref.empty() ? next_col : column_index(ref);
                std::string text = value;
                if (type == "s") {
                    std::size_t k = value.empty() ? 0 : std::stoul(value);
                    text = k < strings.size() ? strings[k] : "";
                } else if (type == "b") {
                    text = value == "1" ? "TRUE" : "FALSE";
                }
                if (row->size() <= col) row->resize(col + 1);
                (*row)[col] = text;
                next_col = col + 1;
            } else if (ev.name == "row") row = nullptr;
        } else if (in_cell && (in_v || in_t)) {
            value += ev.text;
        }
    }
    return rows;
}

std::string normalize_target(const std::string& target) {
    if (!target.empty() && target[0] == '/') return target.substr(1);
    return "xl/" + target;
}

}  // namespace

Workbook read_xlsx_bytes(const std::string& bytes) {
    auto files = unzip(bytes);
    auto get = [&](const std::string& name) -> const std::string& {
        auto it = files.find(name);
        if (it == files.end()) throw TabularError("xlsx archive lacks " + name);
        return it->second;
    };

    std::map<std::string, std::string> targets;
    if (files.count("xl/_rels/workbook.xml.rels"))
        for (const auto& ev : scan(files["xl/_rels/workbook.xml.rels"]))
            if (ev.kind == XmlEvent::Start && ev.name == "Relationship")
                targets[ev.attrs.count("Id") ? ev.attrs.at("Id") : ""] =
                    ev.attrs.count("Target") ? ev.attrs.at("Target") : "";

    std::vector<std::string> strings;
    if (files.count("xl/sharedStrings.xml")) strings = shared_strings(files["xl/sharedStrings.xml"]);

    Workbook wb;
    std::size_t ordinal = 0;
    for (const auto& ev : scan(get("xl/workbook.xml"))) {
        if (ev.kind != XmlEvent::Start || ev.name != "sheet") continue;
        ++ordinal;
        std::string name = ev.attrs.count("name") ? ev.attrs.at("name") : "Sheet" + std::to_string(ordinal);
        std::string path = "xl/worksheets/sheet" + std::to_string(ordinal) + ".xml";
        if (auto rid = ev.attrs.find("id"); rid != ev.attrs.end() && targets.count(rid->second))
            path = normalize_target(targets[rid->second]);
        auto rows = sheet_rows(get(path), strings);
        Table t;
        if (!rows.empty()) {
            t.header = rows.front();
            while (!t.header.empty() && t.header.back().empty()) t.header.pop_back();
            for (std::size_t r = 1; r < rows.size(); ++r) t.rows.push_back(rows[r]);
        }
        wb.pages.emplace_back(name, std::move(t));
    }
    return wb;
}

Workbook read_xlsx(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw TabularError("cannot open " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return read_xlsx_bytes(ss.str());
}

}  // namespace lyphc
