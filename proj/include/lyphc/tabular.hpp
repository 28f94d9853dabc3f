#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

class TabularError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One spreadsheet page: a header row of property names and data rows of cell text.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    friend bool operator==(const Table&, const Table&) = default;
};

struct Workbook {
    std::vector<std::pair<std::string, Table>> pages;

    Table* page(std::string_view name);
    const Table* page(std::string_view name) const;
    /// Returns the page, appending an empty one if missing.
    Table& add_page(const std::string& name);
};

/// Recognized page names, in canonical order.
const std::vector<std::string>& workbook_page_names();

struct TabularResult {
    Model model;
    ValidationReport report;
};

/// Rows become flat resources. List cells split on ","; empty elements are
/// dropped with a WARNING. Unknown pages are WARNINGs, rows without id ERRORs.
/// `source` prefixes issue locations ("source#page!row").
TabularResult workbook_to_spec(const Workbook& wb, std::string_view source = {});

/// Inverse of workbook_to_spec. Imported resources are left out; pages with
/// no rows are omitted.
Workbook spec_to_workbook(const Model& model);

/// Splits a list cell on ","; trims blanks around elements.
std::vector<std::string> split_list(std::string_view cell, std::size_t* empty_elements = nullptr);
std::string join_list(const std::vector<std::string>& items);

std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string write_csv(const std::vector<std::vector<std::string>>& rows);

/// A directory holding one "<page>.csv" per page.
Workbook read_csv_dir(const std::filesystem::path& dir);
void write_csv_dir(const Workbook& wb, const std::filesystem::path& dir);

/// Reads the sheets of an .xlsx file (cell values only; no formulas, no styles).
Workbook read_xlsx(const std::filesystem::path& file);
Workbook read_xlsx_bytes(const std::string& bytes);

}  // namespace lyphc
