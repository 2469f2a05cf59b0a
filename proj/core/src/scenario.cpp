#include "broac/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace broac {

namespace {

bool word_chars_only(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

struct Token {
    std::string text;
    int column = 0;
    bool quoted = false;
};

std::vector<Token> tokenize(std::string_view line, int lineno) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        Token tok;
        tok.column = static_cast<int>(i) + 1;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            if (line[i] == '#' && !tok.quoted) break;
            if (line[i] == '"') {
                tok.quoted = true;
                ++i;
                std::size_t start = i;
                while (i < line.size() && line[i] != '"') ++i;
                if (i == line.size())
                    throw ScenarioError(lineno, "column " + std::to_string(start) +
                                                    ": unterminated quote");
                tok.text.append(line.substr(start, i - start));
                ++i;
            } else {
                tok.text.push_back(line[i]);
                ++i;
            }
        }
        tokens.push_back(std::move(tok));
        if (i < line.size() && line[i] == '#') break;
    }
    return tokens;
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) end = s.size();
        if (end > start) out.emplace_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

[[noreturn]] void fail(int line, const Token& tok, const std::string& what) {
    throw ScenarioError(line, "column " + std::to_string(tok.column) + ": " + what);
}

// Positional-then-options reader for one directive line.
class LineReader {
public:
    LineReader(std::vector<Token> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

    const Token& positional(const char* what) {
        if (pos_ >= tokens_.size())
            throw ScenarioError(line_, std::string("missing ") + what);
        return tokens_[pos_++];
    }

    std::string identifier(const char* what) {
        const Token& tok = positional(what);
        if (!word_chars_only(tok.text))
            fail(line_, tok, std::string("malformed ") + what + ": '" + tok.text + "'");
        return tok.text;
    }

    std::string ability() { return positional("ability string").text; }

    bool sign() {
        const Token& tok = positional("allow|deny");
        if (tok.text == "allow") return true;
        if (tok.text == "deny") return false;
        fail(line_, tok, "expected allow or deny, got '" + tok.text + "'");
    }

    bool at_keyword(const char* kw) const {
        return pos_ < tokens_.size() && tokens_[pos_].text == kw && !tokens_[pos_].quoted;
    }
    void skip() { ++pos_; }

    // The remaining tokens may be key=value options or bare flags.
    struct Options {
        std::optional<std::string> type, creator, as;
        std::optional<bool> enabled;
        std::vector<std::string> item_abilities, global_abilities;
        bool nodefault = false;
    };

    Options options(bool allow_abilities = false) {
        Options opt;
        while (pos_ < tokens_.size()) {
            const Token& tok = tokens_[pos_++];
            if (tok.text == "nodefault" && !tok.quoted) {
                opt.nodefault = true;
                continue;
            }
            std::size_t eq = tok.text.find('=');
            if (eq == std::string::npos)
                fail(line_, tok, "unexpected token '" + tok.text + "'");
            std::string key = tok.text.substr(0, eq);
            std::string value = tok.text.substr(eq + 1);
            if (key == "type" || key == "creator" || key == "as") {
                if (!word_chars_only(value))
                    fail(line_, tok, "malformed " + key + " value: '" + value + "'");
                (key == "type" ? opt.type : key == "creator" ? opt.creator : opt.as) = value;
            } else if (key == "enabled") {
                if (value == "true")
                    opt.enabled = true;
                else if (value == "false")
                    opt.enabled = false;
                else
                    fail(line_, tok, "enabled must be true or false");
            } else if (allow_abilities && key == "item_abilities") {
                opt.item_abilities = split_list(value, ';');
            } else if (allow_abilities && key == "global_abilities") {
                opt.global_abilities = split_list(value, ';');
            } else {
                fail(line_, tok, "unknown option '" + key + "'");
            }
        }
        return opt;
    }

    int line() const { return line_; }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int line_;
};

SubjectRef parse_subject(const Token& tok, int line) {
    if (tok.text == "all") return SubjectRef{SpecKind::All, ""};
    if (tok.text.rfind("agent:", 0) == 0) {
        std::string id = tok.text.substr(6);
        if (!word_chars_only(id)) fail(line, tok, "malformed subject agent id");
        return SubjectRef{SpecKind::One, id};
    }
    if (tok.text.rfind("group:", 0) == 0) {
        std::string id = tok.text.substr(6);
        if (!word_chars_only(id)) fail(line, tok, "malformed subject group id");
        return SubjectRef{SpecKind::Some, id};
    }
    fail(line, tok, "malformed subject '" + tok.text + "' (expected agent:ID, group:ID or all)");
}

ObjectRef parse_object(const Token& tok, int line) {
    if (tok.text == "all") return ObjectRef{SpecKind::All, ""};
    if (tok.text.rfind("item:", 0) == 0) {
        std::string id = tok.text.substr(5);
        if (!word_chars_only(id)) fail(line, tok, "malformed object item id");
        return ObjectRef{SpecKind::One, id};
    }
    if (tok.text.rfind("collection:", 0) == 0) {
        std::string id = tok.text.substr(11);
        if (!word_chars_only(id)) fail(line, tok, "malformed object collection id");
        return ObjectRef{SpecKind::Some, id};
    }
    fail(line, tok, "malformed object '" + tok.text + "' (expected item:ID, collection:ID or all)");
}

Directive parse_line(std::vector<Token> tokens, int lineno) {
    LineReader r(std::move(tokens), lineno);
    const std::string keyword = r.positional("directive keyword").text;
    Directive d;
    d.line = lineno;

    if (keyword == "type") {
        TypeDef def;
        def.name = r.identifier("type name");
        if (r.at_keyword("extends")) {
            r.skip();
            const Token& parents = r.positional("parent list");
            for (const std::string& p : split_list(parents.text, ',')) {
                if (!word_chars_only(p)) fail(lineno, parents, "malformed parent name '" + p + "'");
                def.parents.push_back(p);
            }
            if (def.parents.empty()) fail(lineno, parents, "empty parent list");
        }
        auto opt = r.options(/*allow_abilities=*/true);
        def.item_abilities = std::move(opt.item_abilities);
        def.global_abilities = std::move(opt.global_abilities);
        d.body = std::move(def);
    } else if (keyword == "agent") {
        AgentDef def;
        def.id = r.identifier("agent id");
        auto opt = r.options();
        def.type = std::move(opt.type);
        def.creator = std::move(opt.creator);
        def.nodefault = opt.nodefault;
        def.as = std::move(opt.as);
        d.body = std::move(def);
    } else if (keyword == "collection") {
        CollectionDef def;
        def.id = r.identifier("collection id");
        auto opt = r.options();
        def.type = std::move(opt.type);
        def.creator = std::move(opt.creator);
        def.nodefault = opt.nodefault;
        def.as = std::move(opt.as);
        d.body = std::move(def);
    } else if (keyword == "item") {
        ItemDef def;
        def.id = r.identifier("item id");
        auto opt = r.options();
        if (!opt.type) throw ScenarioError(lineno, "item directive requires type=");
        def.type = std::move(*opt.type);
        def.creator = std::move(opt.creator);
        def.nodefault = opt.nodefault;
        def.as = std::move(opt.as);
        d.body = std::move(def);
    } else if (keyword == "member") {
        MemberDef def;
        def.collection = r.identifier("collection id");
        def.member = r.identifier("member id");
        auto opt = r.options();
        def.enabled = opt.enabled;
        def.as = std::move(opt.as);
        d.body = std::move(def);
    } else if (keyword == "enable") {
        EnableDef def;
        def.collection = r.identifier("collection id");
        def.member = r.identifier("member id");
        const Token& flag = r.positional("true|false");
        if (flag.text == "true")
            def.enabled = true;
        else if (flag.text == "false")
            def.enabled = false;
        else
            fail(lineno, flag, "expected true or false");
        def.as = r.options().as;
        d.body = std::move(def);
    } else if (keyword == "permit") {
        Permit def;
        def.subject = parse_subject(r.positional("subject"), lineno);
        def.object = parse_object(r.positional("object"), lineno);
        def.ability = r.ability();
        def.allow = r.sign();
        def.as = r.options().as;
        d.body = std::move(def);
    } else if (keyword == "permit-global") {
        PermitGlobal def;
        def.subject = parse_subject(r.positional("subject"), lineno);
        def.ability = r.ability();
        def.allow = r.sign();
        def.as = r.options().as;
        d.body = std::move(def);
    } else if (keyword == "check") {
        Check def;
        def.agent = r.identifier("agent id");
        def.item = r.identifier("item id");
        def.ability = r.ability();
        r.options();
        d.body = std::move(def);
    } else if (keyword == "filter") {
        Filter def;
        def.agent = r.identifier("agent id");
        def.ability = r.ability();
        r.options();
        d.body = std::move(def);
    } else if (keyword == "explain") {
        Explain def;
        def.agent = r.identifier("agent id");
        def.item = r.identifier("item id");
        def.ability = r.ability();
        r.options();
        d.body = std::move(def);
    } else if (keyword == "lint") {
        Lint def;
        def.agent = r.identifier("agent id");
        def.item = r.identifier("item id");
        def.ability = r.ability();
        r.options();
        d.body = std::move(def);
    } else {
        throw ScenarioError(lineno, "unknown directive '" + keyword + "'");
    }
    return d;
}

}  // namespace

std::vector<Directive> parse_scenario(std::string_view text) {
    std::vector<Directive> directives;
    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++lineno;
        std::vector<Token> tokens = tokenize(text.substr(start, end - start), lineno);
        if (!tokens.empty()) directives.push_back(parse_line(std::move(tokens), lineno));
        if (end == text.size()) break;
        start = end + 1;
    }
    return directives;
}

std::vector<Directive> parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(sep);
        out += v[i];
    }
    return out;
}

std::string render_subject_ref(const SubjectRef& s) {
    switch (s.kind) {
        case SpecKind::One: return "agent:" + s.id;
        case SpecKind::Some: return "group:" + s.id;
        case SpecKind::All: return "all";
    }
    return "all";
}

std::string render_object_ref(const ObjectRef& o) {
    switch (o.kind) {
        case SpecKind::One: return "item:" + o.id;
        case SpecKind::Some: return "collection:" + o.id;
        case SpecKind::All: return "all";
    }
    return "all";
}

void append_common(std::string& out, const std::optional<std::string>& type,
                   const std::optional<std::string>& creator, bool nodefault,
                   const std::optional<std::string>& as) {
    if (type) out += " type=" + *type;
    if (creator) out += " creator=" + *creator;
    if (nodefault) out += " nodefault";
    if (as) out += " as=" + *as;
}

}  // namespace

std::string format_directive(const Directive& d) {
    return std::visit(
        [](const auto& body) -> std::string {
            using T = std::decay_t<decltype(body)>;
            std::string out;
            if constexpr (std::is_same_v<T, TypeDef>) {
                out = "type " + body.name;
                if (!body.parents.empty()) out += " extends " + join(body.parents, ',');
                if (!body.item_abilities.empty())
                    out += " item_abilities=" + quoted(join(body.item_abilities, ';'));
                if (!body.global_abilities.empty())
                    out += " global_abilities=" + quoted(join(body.global_abilities, ';'));
            } else if constexpr (std::is_same_v<T, AgentDef>) {
                out = "agent " + body.id;
                append_common(out, body.type, body.creator, body.nodefault, body.as);
            } else if constexpr (std::is_same_v<T, CollectionDef>) {
                out = "collection " + body.id;
                append_common(out, body.type, body.creator, body.nodefault, body.as);
            } else if constexpr (std::is_same_v<T, ItemDef>) {
                out = "item " + body.id;
                append_common(out, body.type, body.creator, body.nodefault, body.as);
            } else if constexpr (std::is_same_v<T, MemberDef>) {
                out = "member " + body.collection + " " + body.member;
                if (body.enabled) out += std::string(" enabled=") + (*body.enabled ? "true" : "false");
                if (body.as) out += " as=" + *body.as;
            } else if constexpr (std::is_same_v<T, EnableDef>) {
                out = "enable " + body.collection + " " + body.member + " " +
                      (body.enabled ? "true" : "false");
                if (body.as) out += " as=" + *body.as;
            } else if constexpr (std::is_same_v<T, Permit>) {
                out = "permit " + render_subject_ref(body.subject) + " " +
                      render_object_ref(body.object) + " " + quoted(body.ability) + " " +
                      (body.allow ? "allow" : "deny");
                if (body.as) out += " as=" + *body.as;
            } else if constexpr (std::is_same_v<T, PermitGlobal>) {
                out = "permit-global " + render_subject_ref(body.subject) + " " +
                      quoted(body.ability) + " " + (body.allow ? "allow" : "deny");
                if (body.as) out += " as=" + *body.as;
            } else if constexpr (std::is_same_v<T, Check>) {
                out = "check " + body.agent + " " + body.item + " " + quoted(body.ability);
            } else if constexpr (std::is_same_v<T, Filter>) {
                out = "filter " + body.agent + " " + quoted(body.ability);
            } else if constexpr (std::is_same_v<T, Explain>) {
                out = "explain " + body.agent + " " + body.item + " " + quoted(body.ability);
            } else if constexpr (std::is_same_v<T, Lint>) {
                out = "lint " + body.agent + " " + body.item + " " + quoted(body.ability);
            }
            return out;
        },
        d.body);
}

std::string format_decision(const Decision& d) {
    std::string s = d.allowed ? "ALLOWED" : "DENIED";
    s += " level=";
    s += d.winning_level ? std::to_string(*d.winning_level) : "-";
    s += " reason=";
    s += reason_name(d.reason);
    if (d.reason == Reason::level_comparison) {
        s += " via=";
        bool first = true;
        for (const DecisionCandidate& c : d.candidates) {
            if (c.level != *d.winning_level || c.allow != d.allowed) continue;
            if (!first) s += ",";
            first = false;
            s += c.kind;
            s += c.allow ? "(allow)" : "(deny)";
        }
    }
    return s;
}

std::string format_decision_trace(const Decision& d) {
    std::string s = format_decision(d);
    for (const DecisionCandidate& c : d.candidates) {
        s += "\n  [" + std::to_string(c.level) + "] " + c.kind + (c.allow ? "(allow)" : "(deny)") +
             " subject=" + c.subject;
        if (!c.object.empty()) s += " object=" + c.object;
        s += " ability=" + quoted(c.ability);
    }
    return s;
}

namespace {

class Executor {
public:
    explicit Executor(Engine& engine) : engine_(engine) {}

    ExecutionResult run(const std::vector<Directive>& directives) {
        ExecutionResult result;
        for (const Directive& d : directives) {
            try {
                std::visit([&](const auto& body) { apply(body, result); }, d.body);
            } catch (const ScenarioError&) {
                throw;
            } catch (const ScenarioAuthorizationError&) {
                throw;
            } catch (const AuthorizationError& e) {
                throw ScenarioAuthorizationError(d.line, e.what());
            } catch (const ValidationError& e) {
                throw ScenarioError(d.line, e.what());
            }
        }
        return result;
    }

private:
    EntityIndex ref(const std::string& id) { return engine_.world().index_of(id); }

    Actor actor_of(const std::optional<std::string>& as) {
        return as ? Actor::agent(ref(*as)) : Actor::system();
    }

    std::optional<EntityIndex> creator_of(const std::optional<std::string>& creator) {
        if (!creator) return std::nullopt;
        return ref(*creator);
    }

    SubjectSpec subject_spec(const SubjectRef& s) {
        switch (s.kind) {
            case SpecKind::One: return SubjectSpec::one(ref(s.id));
            case SpecKind::Some: return SubjectSpec::some(ref(s.id));
            case SpecKind::All: return SubjectSpec::all();
        }
        return SubjectSpec::all();
    }

    ObjectSpec object_spec(const ObjectRef& o) {
        switch (o.kind) {
            case SpecKind::One: return ObjectSpec::one(ref(o.id));
            case SpecKind::Some: return ObjectSpec::some(ref(o.id));
            case SpecKind::All: return ObjectSpec::all();
        }
        return ObjectSpec::all();
    }

    void define_entity(const std::string& id, const std::string& type,
                       const std::optional<std::string>& creator, bool nodefault,
                       const std::optional<std::string>& as, const char* required_ancestor) {
        if (required_ancestor && !engine_.registry().derives_from(type, required_ancestor))
            throw ValidationError("type '" + type + "' does not derive from " + required_ancestor);
        engine_.create_entity(id, type, actor_of(as), CreateOptions{nodefault}, creator_of(creator));
        touched_ = true;
    }

    void apply(const TypeDef& d, ExecutionResult&) {
        // The registry is write-once relative to world content.
        if (touched_)
            throw ValidationError("type definitions must precede entities and permissions");
        engine_.registry().define_type(d.name, d.parents, d.item_abilities, d.global_abilities);
    }

    void apply(const AgentDef& d, ExecutionResult&) {
        define_entity(d.id, d.type.value_or("Agent"), d.creator, d.nodefault, d.as, "Agent");
    }

    void apply(const CollectionDef& d, ExecutionResult&) {
        define_entity(d.id, d.type.value_or("Collection"), d.creator, d.nodefault, d.as,
                      "Collection");
    }

    void apply(const ItemDef& d, ExecutionResult&) {
        define_entity(d.id, d.type, d.creator, d.nodefault, d.as, nullptr);
    }

    void apply(const MemberDef& d, ExecutionResult&) {
        engine_.add_membership(ref(d.collection), ref(d.member), actor_of(d.as), d.enabled);
        touched_ = true;
    }

    void apply(const EnableDef& d, ExecutionResult&) {
        engine_.set_permission_enabled(ref(d.collection), ref(d.member), d.enabled, actor_of(d.as));
        touched_ = true;
    }

    void apply(const Permit& d, ExecutionResult&) {
        engine_.set_permission(subject_spec(d.subject), object_spec(d.object), d.ability, d.allow,
                               actor_of(d.as));
        touched_ = true;
    }

    void apply(const PermitGlobal& d, ExecutionResult&) {
        engine_.set_global_permission(subject_spec(d.subject), d.ability, d.allow, actor_of(d.as));
        touched_ = true;
    }

    void apply(const Check& d, ExecutionResult& result) {
        Decision dec = engine_.resolver().resolve_item_ability(ref(d.agent), ref(d.item), d.ability);
        result.outputs.push_back(format_decision(dec));
    }

    void apply(const Filter& d, ExecutionResult& result) {
        std::vector<EntityIndex> items = engine_.resolver().filter_items(ref(d.agent), d.ability);
        std::vector<std::string> ids;
        ids.reserve(items.size());
        for (EntityIndex e : items) ids.push_back(engine_.world().entity(e).id);
        std::sort(ids.begin(), ids.end());
        std::string out = "ITEMS";
        for (const std::string& id : ids) out += " " + id;
        result.outputs.push_back(std::move(out));
    }

    void apply(const Explain& d, ExecutionResult& result) {
        Decision dec = engine_.resolver().explain(ref(d.agent), ref(d.item), d.ability);
        result.outputs.push_back(format_decision_trace(dec));
    }

    void apply(const Lint& d, ExecutionResult& result) {
        LoopholeReport r =
            engine_.resolver().lint_anonymous(ref(d.agent), ref(d.item), d.ability);
        std::string out = r.flagged ? "LOOPHOLE" : "CLEAN";
        out += std::string(" agent=") + (r.agent_decision.allowed ? "ALLOWED" : "DENIED");
        out += std::string(" anonymous=") + (r.anonymous_decision.allowed ? "ALLOWED" : "DENIED");
        result.outputs.push_back(std::move(out));
    }

    Engine& engine_;
    bool touched_ = false;
};

}  // namespace

ExecutionResult execute(const std::vector<Directive>& directives, Engine& engine) {
    return Executor(engine).run(directives);
}

}  // namespace broac
