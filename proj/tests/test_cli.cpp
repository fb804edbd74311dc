#include "iwg/cli.hpp"

#include <doctest.h>

#include <algorithm>

using namespace iwg;
using namespace iwg::cli;

namespace {

const char* kWorked = R"({
  "schema_version": 1,
  "params": {"p": 5, "k": 3, "j": 1, "v": "1", "n_min": 1, "n_max": 3},
  "characters": [
    {"eta": 0, "mu1": 0, "mu2": 0, "lambda1": 2, "lambda2": 2,
     "kappa1": 1, "kappa2": 1, "r_inf": 0,
     "b": {"1": 0, "2": 8, "3": 48, "4": 348}}
  ]
})";

size_t col(const Table& t, const std::string& name)
{
    auto it = std::find(t.columns.begin(), t.columns.end(), name);
    REQUIRE(it != t.columns.end());
    return (size_t) (it - t.columns.begin());
}

const std::vector<std::string>& row_at(const Table& t, const std::string& n)
{
    size_t c = col(t, "n");
    for (auto& r : t.rows)
        if (r[c] == n)
            return r;
    FAIL("no row for n = " << n);
    return t.rows.front();
}

std::string error_field(const std::string& json)
{
    try {
        parse_config(json);
    } catch (const SchemaError& e) {
        return e.field;
    }
    return "";
}

}  // namespace

TEST_CASE("config parsing")
{
    RunConfig c = parse_config(kWorked);
    CHECK(c.params.p == 5);
    CHECK(c.params.v == ExtValuation(1));
    CHECK(c.params.d == 1);
    REQUIRE(c.characters.size() == 1);
    CHECK(c.characters[0].lambda1 == 2);
    CHECK(c.characters[0].b.at(3) == 48);
    CHECK(c.N == 40);
    CHECK(c.format == "csv");
}

TEST_CASE("config errors name the field")
{
    CHECK(error_field(R"({"params": {"p": 5, "k": 3, "v": "1", "n_max": 3}})") == "$.schema_version");
    CHECK(error_field(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "v": "1"}})") == "$.params.n_max");
    CHECK(error_field(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "v": "1", "n_max": 2, "q": 1}})") ==
          "$.params.q");
    CHECK(error_field(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "v": "1", "n_max": 2},
        "characters": [{"eta": 7}]})") == "$.characters[0].eta");
    CHECK(error_field(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "v": "1", "n_max": 2},
        "characters": [{"eta": 0, "F1": "X^2 + p", "lambda1": 3, "mu2": 0, "lambda2": 1}]})") == "$.characters[0].F1");
    CHECK_THROWS_AS(parse_config("{"), SchemaError);
}

TEST_CASE("hypothesis violations")
{
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1,
        "params": {"p": 5, "k": 3, "v": "1/5", "n_max": 2}})"),
                    HypothesisError);
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1,
        "params": {"p": 5, "k": 3, "v": "1", "n_max": 2},
        "characters": [{"eta": 0, "mu1": 0, "mu2": 0, "lambda1": 4, "lambda2": 1, "kappa1": 3}]})"),
                    HypothesisError);
}

TEST_CASE("series literals fill the invariants")
{
    RunConfig c = parse_config(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "v": "1", "n_max": 2},
        "characters": [{"eta": 1, "F1": "p*X", "F2": "X^2 + p"}]})");
    CHECK(c.characters[0].mu1 == 1);
    CHECK(c.characters[0].lambda1 == 1);
    CHECK(c.characters[0].mu2 == 0);
    CHECK(c.characters[0].lambda2 == 2);
}

TEST_CASE("bound table")
{
    Table t = cmd_bound(parse_config(kWorked));
    CHECK(t.columns == kBoundColumns);
    CHECK(t.rows.size() == 3);
    auto& r3 = row_at(t, "3");
    CHECK(r3[col(t, "tau")] == "2");
    CHECK(r3[col(t, "q_star")] == "8");
    CHECK(r3[col(t, "bound_delta_s")] == "11");
    CHECK_NOTHROW(validate_table(t, "bound"));

    Table e = cmd_bound(parse_config(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "v": "1", "n_max": 2}})"));
    CHECK(e.rows.empty());
}

TEST_CASE("tamagawa table")
{
    std::vector<std::string> warn;
    Table t = cmd_tamagawa(parse_config(kWorked), warn);
    CHECK(t.columns == kTamagawaColumns);
    auto& r3 = row_at(t, "3");
    CHECK(r3[col(t, "t_delta")] == "311");
    CHECK(r3[col(t, "correction")] == "300");
    CHECK(r3[col(t, "defect")] == "0");
    CHECK(r3[col(t, "tight")] == "yes");
    CHECK(row_at(t, "2")[col(t, "defect")] == "0");
    CHECK(warn.empty());
    CHECK_NOTHROW(validate_table(t, "tamagawa"));

    /* k = j + 1: no correction term */
    RunConfig c = parse_config(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "j": 2, "v": "1", "n_max": 1},
        "characters": [{"eta": 0, "mu1": 0, "mu2": 0, "lambda1": 1, "lambda2": 1, "b": {"1": 2, "2": 5}}]})");
    Table z = cmd_tamagawa(c, warn);
    CHECK(z.rows.at(0)[col(z, "correction")] == "0");
    CHECK(z.rows.at(0)[col(z, "defect")] == "3");

    /* missing b_{n+1}: skipped with a note; b falling: warning */
    c = parse_config(R"({"schema_version": 1, "params": {"p": 5, "k": 3, "v": "1", "n_max": 2},
        "characters": [{"eta": 0, "mu1": 0, "mu2": 0, "lambda1": 1, "lambda2": 1, "b": {"1": 50, "2": 0}}]})");
    Table m = cmd_tamagawa(c, warn);
    CHECK(m.rows.size() == 1);
    CHECK(m.notes.size() == 1);
    CHECK(warn.size() == 1);
}

TEST_CASE("csv and jsonl round trip")
{
    Table t = cmd_bound(parse_config(kWorked));
    t.rows.push_back(std::vector<std::string>(t.columns.size(), "a,\"b\""));
    std::string csv = to_csv(t);
    CHECK(csv.find("\"a,\"\"b\"\"\"") != std::string::npos);
    CHECK(csv.find("\r\n") != std::string::npos);
    Table back = parse_csv(csv);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);

    Table j = parse_jsonl(to_jsonl(t), t.columns);
    CHECK(j.rows == t.rows);

    Table bad = cmd_bound(parse_config(kWorked));
    bad.rows[0][col(bad, "tau")] = "3";
    CHECK_THROWS_AS(validate_table(bad, "bound"), SchemaError);
    CHECK_THROWS_AS(parse_csv("a,b\r\n\"x,y\r\n"), SchemaError);
}

TEST_CASE("outputs are deterministic")
{
    RunConfig c = parse_config(kWorked);
    CHECK(to_csv(cmd_bound(c)) == to_csv(cmd_bound(c)));
    VerifyOptions o;
    o.n_max = 2;
    o.cases = 4;
    std::string a = to_csv(cmd_verify("twist", o).table);
    o.jobs = 2;
    CHECK(to_csv(cmd_verify("twist", o).table) == a);
}

TEST_CASE("verify suites")
{
    VerifyOptions o;
    o.p = 5;
    o.k = 3;
    o.ap = 5;
    o.n_max = 2;
    VerifyReport h = cmd_verify("evaluate-h", o);
    CHECK(h.failures == 0);
    CHECK(h.table.rows.size() == 2);
    CHECK_NOTHROW(validate_table(h.table, "verify"));

    VerifyOptions m;
    m.p = 3;
    m.n_max = 1;
    VerifyReport r = cmd_verify("mellin", m);
    CHECK(r.failures == 0);
    CHECK(r.table.rows.at(0)[col(r.table, "computed")] == "6");

    VerifyOptions k;
    k.n_max = 3;
    k.cases = 1;
    VerifyReport kr = cmd_verify("kobayashi", k);
    CHECK(kr.failures == 0);
    size_t seen = 0;
    for (auto& row : kr.table.rows)
        if (row[col(kr.table, "case")] == "F=X") {
            CHECK(row[col(kr.table, "computed")] == "1");
            seen++;
        }
    /* n = 1..3 at both default primes */
    CHECK(seen == 6);

    CHECK_THROWS_AS(cmd_verify("nope", o), DomainError);
}
