#include <doctest.h>

#include "fixtures.hpp"

using namespace solsem;

namespace {

ParseResult must_parse(std::string_view src, ParseOptions po = {}) {
    ParseResult r = parse(src, po);
    REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty() ? std::string() : r.diagnostics.front().message));
    return r;
}

const Diagnostic& first_error(const ParseResult& r) {
    REQUIRE(!r.diagnostics.empty());
    return r.diagnostics.front();
}

}  // namespace

TEST_CASE("every fixture round-trips through the printer") {
    for (const char* f : {"test.sol", "test2.sol", "test3.sol", "test4.sol", "coin.sol", "dao.sol", "dao_fixed.sol",
                          "dao_depth1.sol", "dao_proxy.sol", "refs.sol"}) {
        CAPTURE(f);
        const ParseResult a = must_parse(fixtures::read(f));
        const std::string printed = print(a.unit);
        const ParseResult b = must_parse(printed);
        CHECK(ast::equal(a.unit, b.unit));
        CHECK(print(b.unit) == printed);
    }
}

TEST_CASE("constructors and fallbacks") {
    const ParseResult r = must_parse(fixtures::read("dao.sol"));
    const auto prog = Program::build(r.unit);
    const ContractInfo* attack = prog->contract("Attack");
    REQUIRE(attack);
    CHECK(attack->constructor.has_value());
    CHECK(attack->fallback.has_value());
    CHECK(!prog->contract("Bank")->fallback.has_value());
}

TEST_CASE("modern constructor syntax needs the option") {
    const std::string src = "contract A { uint x; constructor() public { x = 1; } }";
    CHECK(!parse(src).ok());
    ParseOptions po;
    po.modern_syntax = true;
    const auto prog = Program::build(must_parse(src, po).unit);
    CHECK(prog->contract("A")->constructor.has_value());
}

TEST_CASE("unsupported constructs are named") {
    const std::pair<const char*, const char*> cases[] = {
        {"contract A { event E(); }", "event"},
        {"library L {}", "library"},
        {"contract A is B {}", "inheritance"},
        {"contract A { function f() { uint x = 1 ** 2; } }", "**"},
        {"contract A { function f() { while (true) { break; } } }", "break"},
        {"contract A { function f() { assembly { } } }", "assembly"},
    };
    for (const auto& [src, what] : cases) {
        CAPTURE(src);
        const ParseResult r = parse(src);
        CHECK(!r.ok());
        CHECK(first_error(r).kind == ErrorKind::UnsupportedFeature);
        (void)what;
    }
}

TEST_CASE("syntax errors carry a position") {
    const ParseResult r = parse("contract A {\n  function f() {\n    uint x = ;\n  }\n}\n");
    CHECK(!r.ok());
    const Diagnostic& d = first_error(r);
    CHECK(d.kind == ErrorKind::SyntaxError);
    CHECK(d.span.line == 3);
    CHECK(d.span.col > 0);
}

TEST_CASE("for loops and compound assignment desugar") {
    const ParseResult r = must_parse("contract A { uint s; function f() { for (uint i = 0; i < 3; i++) { s += i; } } }");
    const std::string printed = print(r.unit);
    CHECK(printed.find("while") != std::string::npos);
    CHECK(printed.find("for") == std::string::npos);
    CHECK(printed.find("(s + i)") != std::string::npos);
}

TEST_CASE("local mapping pointers and conversions parse") {
    const ParseResult r =
        must_parse("contract A { mapping(uint => uint) m; function f() { mapping(uint => uint) storage p = m; uint8 y = uint8(300); } }");
    CHECK(print(r.unit).find("mapping(uint => uint) storage p") != std::string::npos);
}

TEST_CASE("expressions parse with precedence") {
    const auto e = parse_expression("1 + 2 * 3 == 7 && !false");
    CHECK(print(*e) == "(((1 + (2 * 3)) == 7) && (!false))");
    CHECK_THROWS_AS(parse_expression("1 +"), Error);
}

TEST_CASE("hex literals only with the option") {
    CHECK_THROWS_AS(parse_expression("0x10"), Error);
    ParseOptions po;
    po.hex_literals = true;
    CHECK(print(*parse_expression("0x10", po)) == "16");
}

TEST_CASE("modifiers are inlined into function bodies") {
    const auto prog = fixtures::program_src(R"(
contract A {
    address owner;
    uint x;
    modifier onlyOwner() { if (msg.sender == owner) _; }
    modifier bump(uint n) { x = x + n; _; }
    function f() onlyOwner bump(2) { x = x * 10; }
}
)");
    const FunctionInfo* f = prog->contract("A")->function("f");
    REQUIRE(f);
    CHECK(f->guard != nullptr);
    CHECK(f->body != nullptr);
}
