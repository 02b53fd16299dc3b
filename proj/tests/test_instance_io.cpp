#include <doctest.h>

#include <sstream>

#include "fbl/generators.hpp"
#include "fbl/instance_io.hpp"

using namespace fbl;

namespace {

int error_line(std::string_view text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("parse a commented instance") {
    const Instance inst = parse_instance(
        "# blocking family\n"
        "alpha 10/1\n"
        "\n"
        "buffer 2   # B\n"
        "packet 1 0 one\n"
        "packet 1 1 alpha\n"
        "packet 2 0 alpha\n");
    CHECK(inst.capacity == 2);
    CHECK(inst.alpha == Rat(10));
    REQUIRE(inst.size() == 3);
    CHECK(inst.arrivals[1].klass == PacketClass::Alpha);
    CHECK(inst.arrivals[2].key == ArrivalKey{2, 0});
    CHECK(inst.arrivals[2].id.value == 2);
}

TEST_CASE("round trip") {
    for (const Instance& inst : {gen::paper_example(Rat(7, 3)), gen::greedy_blocking(Rat(10)), Instance{1, Rat(2), {}}}) {
        const std::string text = format_instance(inst);
        CHECK(format_instance(parse_instance(text)) == text);
    }
    CHECK(format_instance(gen::greedy_blocking(Rat(10))) ==
          "buffer 2\nalpha 10/1\npacket 1 0 one\npacket 1 1 alpha\npacket 2 0 alpha\npacket 2 1 alpha\n");
}

TEST_CASE("decimal alpha is read exactly") {
    CHECK(parse_instance("buffer 1\nalpha 1.5\n").alpha == Rat(3, 2));
}

TEST_CASE("errors carry line numbers") {
    CHECK(error_line("buffer 1\nalpha 2\nqueue 3\n") == 3);
    CHECK(error_line("buffer 1\nbuffer 2\nalpha 2\n") == 2);
    CHECK(error_line("buffer 1\nalpha 1\n") == 2);
    CHECK(error_line("buffer 0\nalpha 2\n") == 1);
    CHECK(error_line("buffer 1\nalpha 2\npacket 2 0 one\npacket 1 0 one\n") == 4);
    CHECK(error_line("buffer 1\nalpha 2\npacket 2 0 one\npacket 2 0 alpha\n") == 4);
    CHECK(error_line("buffer 1\nalpha 2\npacket 1 0 gold\n") == 3);
    CHECK(error_line("buffer 1\nalpha 2\npacket 1 x one\n") == 3);
    CHECK(error_line("buffer 1\nalpha 2\npacket 0 0 one\n") == 3);
    CHECK(error_line("buffer 1\nalpha 2/0\n") == 2);
    CHECK(error_line("buffer 2\n") > 0);
    CHECK(error_line("alpha 2\n") > 0);

    try {
        parse_instance("buffer 1\nalpha 2\nqueue 3\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()) == "line 3: unknown directive 'queue'");
    }
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.txt"), std::runtime_error);
}
