#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lyphc/model.hpp"
#include "lyphc/report.hpp"

namespace lyphc {

class EditError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EditKind { Create, Update, Delete, Rename, CloneSubgraph, SplitChain, MergeChains, Annotate };

std::string_view edit_kind_name(EditKind k) noexcept;
std::optional<EditKind> edit_kind_from_name(std::string_view name) noexcept;

/// One edit. Payloads by kind:
///   CREATE          {"class": "Lyph", <properties>}
///   UPDATE          {<property>: value | null}            (null removes)
///   DELETE          {}
///   RENAME          {"id": "new"}
///   CLONE_SUBGRAPH  {"suffix": "_L"}                      (target is a group)
///   SPLIT_CHAIN     {"at": k, "id": "newChain"}
///   MERGE_CHAINS    {"with": "otherChain"}
///   ANNOTATE        {"add": [curie...], "remove": [curie...]}
/// UPDATE with target "" and {"restore": ...} is the patch form used for inverses.
struct EditOp {
    EditKind kind = EditKind::Update;
    std::string target;
    json payload = json::object();

    json to_json() const;
    /// Throws EditError on malformed records.
    static EditOp from_json(const json& j);

    friend bool operator==(const EditOp&, const EditOp&) = default;
};

/// Keys ("ns:id") touched by an edit.
struct EditDiff {
    std::vector<std::string> created, updated, deleted;
    std::vector<std::string> notes;
    std::size_t rewritten_refs = 0;

    bool empty() const { return created.empty() && updated.empty() && deleted.empty(); }
    std::vector<std::string> touched() const;
    std::string render() const;
    json to_json() const;
};

struct EditResult {
    Model model;
    EditOp inverse;
    EditDiff diff;
    ValidationReport report;

    bool ok() const { return !report.has_errors(); }
};

/// Applies one op to a copy of `model`. On ERROR the returned model equals
/// the input.
EditResult apply_edit(const Model& model, const EditOp& op);

/// Applied ops with their inverses and an undo/redo cursor.
class EditLog {
public:
    /// Applies `op` to `model` in place on success; drops any redo tail.
    EditResult apply(Model& model, const EditOp& op);
    /// Empty history leaves the model alone and returns a notice.
    ValidationReport undo(Model& model);
    ValidationReport redo(Model& model);

    bool can_undo() const { return cursor_ > 0; }
    bool can_redo() const { return cursor_ < entries_.size(); }
    std::size_t cursor() const { return cursor_; }
    std::size_t size() const { return entries_.size(); }

    json to_json() const;

private:
    struct Entry {
        EditOp op, inverse;
    };
    std::vector<Entry> entries_;
    std::size_t cursor_ = 0;
};

/// Edit script: a JSON list of op records (or {"ops": [...]}). Throws EditError.
std::vector<EditOp> parse_script(const json& script);

struct ScriptResult {
    Model model;
    EditLog log;
    std::vector<EditDiff> diffs;
    ValidationReport report;
    bool ok = true;
};

/// All-or-nothing: the first op with an ERROR stops the run and the input
/// model is returned unchanged.
ScriptResult run_script(const Model& model, const std::vector<EditOp>& ops);

}  // namespace lyphc
