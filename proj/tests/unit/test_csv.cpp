#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shelab/csv.hpp"
#include "shelab/errors.hpp"

using namespace shelab;

TEST_CASE("doubles round trip exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 6.02214076e23}) {
        CHECK(std::stod(format_cell(v)) == v);
    }
    CHECK(format_cell(0.1) == "0.10000000000000001");
    CHECK(format_cell(42LL) == "42");
}

TEST_CASE("header-only table") {
    CsvTable t{{"a", "b"}, {}};
    CHECK(to_csv(t) == "a,b\r\n");
}

TEST_CASE("quoting and CRLF") {
    CsvTable t{{"name", "x"}, {}};
    t.add({std::string("plain"), 1.5});
    t.add({std::string("has,comma"), 2LL});
    t.add({std::string("say \"hi\""), 3LL});
    const auto text = to_csv(t);
    CHECK(text == "name,x\r\nplain,1.5\r\n\"has,comma\",2\r\n\"say \"\"hi\"\"\",3\r\n");
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 4);
    CHECK(rows[2][0] == "has,comma");
    CHECK(rows[3][0] == "say \"hi\"");
}

TEST_CASE("rows must match the header") {
    CsvTable t{{"a", "b"}, {}};
    CHECK_THROWS_AS(t.add({1.0}), InvalidArgument);
}

TEST_CASE("summary record") {
    SummaryRecord s;
    s.add("x", 0.5);
    s.add("n", 3LL);
    s.add("ok", true);
    s.add("label", "hello");
    CHECK(s.text() == "x = 0.5\nn = 3\nok = true\nlabel = hello\n");
}

TEST_CASE("files are written byte for byte") {
    const auto dir = std::filesystem::temp_directory_path() / "shelab_csv_test";
    std::filesystem::create_directories(dir);
    CsvTable t{{"v"}, {}};
    t.add({0.1});
    write_csv(t, dir / "t.csv");
    std::ifstream in(dir / "t.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == to_csv(t));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(write_text("x", "/nonexistent/dir/file.txt"), IoError);
}
