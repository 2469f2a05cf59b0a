#include <doctest.h>

#include <fstream>
#include <sstream>

#include "broac/scenario.hpp"

using namespace broac;

namespace {

std::string scenario_path(const std::string& name) {
    return std::string(BROAC_SCENARIO_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string run_file(const std::string& name) {
    Engine engine;
    ExecutionResult result = execute(parse_scenario_file(scenario_path(name)), engine);
    std::string out;
    for (const std::string& line : result.outputs) out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("permit line parses into its subject, object, ability and sign") {
    auto ds = parse_scenario(R"(permit agent:alice item:doc1 "edit TextDocument.body" deny)");
    REQUIRE(ds.size() == 1);
    const auto& p = std::get<Permit>(ds[0].body);
    CHECK(p.subject == SubjectRef{SpecKind::One, "alice"});
    CHECK(p.object == ObjectRef{SpecKind::One, "doc1"});
    CHECK(p.ability == "edit TextDocument.body");
    CHECK_FALSE(p.allow);
    CHECK_FALSE(p.as.has_value());
    CHECK(ds[0].line == 1);
}

TEST_CASE("member line with the enabled flag") {
    auto ds = parse_scenario("member staff alice enabled=true");
    const auto& m = std::get<MemberDef>(ds[0].body);
    CHECK(m.collection == "staff");
    CHECK(m.member == "alice");
    CHECK(m.enabled == true);
}

TEST_CASE("comments, blank lines and line numbers") {
    auto ds = parse_scenario("# heading\n\nagent a\n  # indented comment\nagent b # trailing\n");
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].line == 3);
    CHECK(ds[1].line == 5);
    CHECK(std::get<AgentDef>(ds[1].body).id == "b");
}

TEST_CASE("type line with parents and ability lists") {
    auto ds = parse_scenario(
        R"(type Transcript extends TextDocument item_abilities="view Transcript.body;seal" global_abilities="audit")");
    const auto& t = std::get<TypeDef>(ds[0].body);
    CHECK(t.name == "Transcript");
    CHECK(t.parents == std::vector<std::string>{"TextDocument"});
    CHECK(t.item_abilities == std::vector<std::string>{"view Transcript.body", "seal"});
    CHECK(t.global_abilities == std::vector<std::string>{"audit"});
}

TEST_CASE("syntax errors carry line and column") {
    CHECK_THROWS_WITH_AS((void)parse_scenario("agent a\nbogus x"),
                         "line 2: unknown directive 'bogus'", ScenarioError);
    try {
        (void)parse_scenario("permit wrong item:x \"delete\" allow");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("column 8") != std::string::npos);
        CHECK(std::string(e.what()).find("malformed subject") != std::string::npos);
    }
    CHECK_THROWS_AS((void)parse_scenario("check a b \"unterminated"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario("item x"), ScenarioError);       // missing type=
    CHECK_THROWS_AS((void)parse_scenario("member c m enabled=maybe"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario("permit agent:a item:b \"x\" sometimes"), ScenarioError);
    CHECK_THROWS_AS((void)parse_scenario("agent a frobnicate=1"), ScenarioError);
}

TEST_CASE("format and re-parse round-trips every directive body") {
    const char* text = R"(type Transcript extends TextDocument,Comment item_abilities="view Transcript.body"
agent alice type=Person nodefault
collection staff creator=alice
item doc1 type=TextDocument creator=alice nodefault as=alice
member staff alice enabled=false as=alice
enable staff alice true as=alice
permit agent:alice collection:staff "view Item.name" deny as=alice
permit group:staff all "view Item.name" allow
permit-global all "create Person" deny
check alice doc1 "view Item.name"
filter anonymous "view Item.name"
explain alice doc1 "do_anything"
lint alice doc1 "view Item.name")";
    auto parsed = parse_scenario(text);
    REQUIRE(parsed.size() == 13);
    for (const Directive& d : parsed) {
        std::string printed = format_directive(d);
        auto reparsed = parse_scenario(printed);
        REQUIRE(reparsed.size() == 1);
        CHECK(reparsed[0].body == d.body);
    }
}

TEST_CASE("fixture directives survive the print/parse round trip") {
    for (const char* name : {"ex1.scn", "ex4.scn", "ex8.scn", "loophole.scn", "bootstrap.scn"}) {
        auto parsed = parse_scenario(read_file(scenario_path(name)));
        for (const Directive& d : parsed) {
            auto reparsed = parse_scenario(format_directive(d));
            REQUIRE(reparsed.size() == 1);
            CHECK(reparsed[0].body == d.body);
        }
    }
}

TEST_CASE("executing a group-to-all permit lands at level 6") {
    Engine engine;
    execute(parse_scenario("type Transcript extends TextDocument "
                           "item_abilities=\"view Transcript.body\"\n"
                           "collection students\n"
                           "permit group:students all \"view Transcript.body\" deny"),
            engine);
    REQUIRE(engine.store().size() == 1);
    const Permission& p = engine.store().item_permissions()[0];
    CHECK(permission_level(p) == 6);
    CHECK(p.subject.kind == SpecKind::Some);
    CHECK(p.object.kind == SpecKind::All);
    CHECK_FALSE(p.allow);
}

TEST_CASE("fixtures reproduce their golden outputs") {
    for (const char* name : {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7", "ex8", "loophole"}) {
        CAPTURE(name);
        std::string got = run_file(std::string(name) + ".scn");
        std::string want = read_file(scenario_path(std::string("golden/") + name + ".out"));
        CHECK(got == want);
    }
}

TEST_CASE("executing the same file twice is byte-identical") {
    for (int round = 0; round < 2; ++round) {
        CHECK(run_file("ex8.scn") == run_file("ex8.scn"));
    }
}

TEST_CASE("reference errors carry the offending line") {
    Engine engine;
    try {
        execute(parse_scenario("agent a\nmember ghost a"), engine);
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
}

TEST_CASE("guarded mutations halt with an authorization error and line") {
    Engine engine;
    auto ds = parse_scenario_file(scenario_path("authfail.scn"));
    try {
        execute(ds, engine);
        FAIL("expected ScenarioAuthorizationError");
    } catch (const ScenarioAuthorizationError& e) {
        CHECK(e.line() == 5);
        CHECK(std::string(e.what()).find("mallory") != std::string::npos);
    }
}

TEST_CASE("type directives must precede world content") {
    Engine engine;
    CHECK_THROWS_AS(execute(parse_scenario("agent a\ntype Late"), engine), ScenarioError);
}

TEST_CASE("agent and collection directives enforce their type families") {
    Engine engine;
    CHECK_THROWS_AS(execute(parse_scenario("agent a type=TextDocument"), engine), ScenarioError);
    Engine engine2;
    CHECK_THROWS_AS(execute(parse_scenario("collection c type=Person"), engine2), ScenarioError);
    Engine engine3;
    execute(parse_scenario("agent p type=Person\ncollection g type=Group"), engine3);
    CHECK(engine3.world().is_agent(engine3.world().index_of("p")));
    CHECK(engine3.world().is_collection(engine3.world().index_of("g")));
}

TEST_CASE("definition-only files produce no output") {
    Engine engine;
    ExecutionResult r = execute(parse_scenario("agent a\ncollection c\nmember c a"), engine);
    CHECK(r.outputs.empty());
}

TEST_CASE("format_decision spellings") {
    Decision closed;
    closed.allowed = false;
    closed.reason = Reason::closed_world;
    CHECK(format_decision(closed) == "DENIED level=- reason=closed_world");

    Decision override_d;
    override_d.allowed = true;
    override_d.reason = Reason::global_override;
    CHECK(format_decision(override_d) == "ALLOWED level=- reason=global_override");

    Decision cmp;
    cmp.allowed = false;
    cmp.reason = Reason::level_comparison;
    cmp.winning_level = 2;
    cmp.candidates = {
        DecisionCandidate{2, false, "OneToSome", "agent:director", "collection:hiring",
                          "view TextDocument.body"},
        DecisionCandidate{5, true, "SomeToSome", "group:board", "collection:hiring",
                          "view TextDocument.body"},
    };
    CHECK(format_decision(cmp) == "DENIED level=2 reason=level_comparison via=OneToSome(deny)");
    CHECK(format_decision_trace(cmp) ==
          "DENIED level=2 reason=level_comparison via=OneToSome(deny)\n"
          "  [2] OneToSome(deny) subject=agent:director object=collection:hiring "
          "ability=\"view TextDocument.body\"\n"
          "  [5] SomeToSome(allow) subject=group:board object=collection:hiring "
          "ability=\"view TextDocument.body\"");
}
