#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "broac/engine.hpp"
#include "broac/errors.hpp"

namespace broac {

class ScenarioError : public ValidationError {
public:
    ScenarioError(int line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ScenarioAuthorizationError : public AuthorizationError {
public:
    ScenarioAuthorizationError(int line, const std::string& what)
        : AuthorizationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// -- directives ---------------------------------------------------------

struct SubjectRef {
    SpecKind kind = SpecKind::All;
    std::string id;  // agent for One, collection for Some, empty for All
    friend bool operator==(const SubjectRef&, const SubjectRef&) = default;
};

struct ObjectRef {
    SpecKind kind = SpecKind::All;
    std::string id;
    friend bool operator==(const ObjectRef&, const ObjectRef&) = default;
};

struct TypeDef {
    std::string name;
    std::vector<std::string> parents;
    std::vector<std::string> item_abilities;
    std::vector<std::string> global_abilities;
    friend bool operator==(const TypeDef&, const TypeDef&) = default;
};

struct AgentDef {
    std::string id;
    std::optional<std::string> type;  // defaults to Agent
    std::optional<std::string> creator;
    bool nodefault = false;
    std::optional<std::string> as;
    friend bool operator==(const AgentDef&, const AgentDef&) = default;
};

struct CollectionDef {
    std::string id;
    std::optional<std::string> type;  // defaults to Collection
    std::optional<std::string> creator;
    bool nodefault = false;
    std::optional<std::string> as;
    friend bool operator==(const CollectionDef&, const CollectionDef&) = default;
};

struct ItemDef {
    std::string id;
    std::string type;
    std::optional<std::string> creator;
    bool nodefault = false;
    std::optional<std::string> as;
    friend bool operator==(const ItemDef&, const ItemDef&) = default;
};

struct MemberDef {
    std::string collection;
    std::string member;
    std::optional<bool> enabled;  // absent: engine default per actor's power
    std::optional<std::string> as;
    friend bool operator==(const MemberDef&, const MemberDef&) = default;
};

/// Flips permission_enabled on an existing membership edge.
struct EnableDef {
    std::string collection;
    std::string member;
    bool enabled = true;
    std::optional<std::string> as;
    friend bool operator==(const EnableDef&, const EnableDef&) = default;
};

struct Permit {
    SubjectRef subject;
    ObjectRef object;
    std::string ability;
    bool allow = true;
    std::optional<std::string> as;
    friend bool operator==(const Permit&, const Permit&) = default;
};

struct PermitGlobal {
    SubjectRef subject;
    std::string ability;
    bool allow = true;
    std::optional<std::string> as;
    friend bool operator==(const PermitGlobal&, const PermitGlobal&) = default;
};

struct Check {
    std::string agent, item, ability;
    friend bool operator==(const Check&, const Check&) = default;
};

struct Filter {
    std::string agent, ability;
    friend bool operator==(const Filter&, const Filter&) = default;
};

struct Explain {
    std::string agent, item, ability;
    friend bool operator==(const Explain&, const Explain&) = default;
};

struct Lint {
    std::string agent, item, ability;
    friend bool operator==(const Lint&, const Lint&) = default;
};

using DirectiveBody = std::variant<TypeDef, AgentDef, CollectionDef, ItemDef, MemberDef, EnableDef,
                                   Permit, PermitGlobal, Check, Filter, Explain, Lint>;

struct Directive {
    int line = 0;
    DirectiveBody body;
};

// -- parsing / printing --------------------------------------------------

/// One directive per line, `#` starts a comment, abilities and ability lists
/// are double-quoted. Throws ScenarioError with line and column on bad input.
std::vector<Directive> parse_scenario(std::string_view text);
std::vector<Directive> parse_scenario_file(const std::string& path);

/// Canonical single-line rendering; parsing it back yields an equal body.
std::string format_directive(const Directive& d);

// -- execution -----------------------------------------------------------

/// `ALLOWED|DENIED level=<n|-> reason=<...> via=<Kind(sign)>,...`; via lists
/// the permissions at the winning level that carry the verdict's sign.
std::string format_decision(const Decision& d);

/// Decision line plus one indented line per relevant permission, sorted by
/// (level, deny first).
std::string format_decision_trace(const Decision& d);

struct ExecutionResult {
    std::vector<std::string> outputs;  // one entry per query directive
};

/// Applies mutations in file order against the engine and renders each query
/// directive. Definition directives are silent. Reference errors throw
/// ScenarioError; guard failures throw ScenarioAuthorizationError, both
/// carrying the source line.
ExecutionResult execute(const std::vector<Directive>& directives, Engine& engine);

}  // namespace broac
