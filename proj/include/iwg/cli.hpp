/* Batch front end: JSON run configurations, growth tables and the
 * verification suites.
 *
 * Config schema (version 1).  Rationals are strings "num/den" or "inf".
 *
 *   {
 *     "schema_version": 1,
 *     "params": {"p": 5, "k": 3, "j": 1, "v": "1", "e": 1, "d": 1, "r": 1,
 *                "n_min": 1, "n_max": 4},
 *     "characters": [
 *       {"eta": 0, "mu1": 0, "mu2": 0, "lambda1": 2, "lambda2": 2,
 *        "kappa1": 1, "kappa2": 1, "r_inf": 0,
 *        "mu0": 0, "lambda0": 0,
 *        "F1": "X^2 + p", "F2": "X^2 + p",
 *        "b": {"1": 0, "2": 8, "3": 48}}
 *     ],
 *     "precision": {"N": 40, "M": 64},
 *     "output": {"format": "csv"}
 *   }
 *
 * Only schema_version and params are required.  F1/F2 are series literals
 * (see literal.hpp); their invariants fill mu_i/lambda_i and must agree
 * with any explicit values.  Unknown keys are rejected.
 */
#pragma once

#include "iwg/growth.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwg::cli {

enum ExitCode : int {
    kOk = 0,
    kSchema = 2,
    kHypothesis = 3,
    kVerification = 4,
    kPrecision = 5,
};

struct SchemaError : std::runtime_error {
    SchemaError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), field(path)
    {
    }
    std::string field;
};

struct RunConfig {
    int schema_version = 1;
    GrowthParams params;
    std::vector<CharacterInvariants> characters;
    long N = 40;
    size_t M = 64;
    std::string format = "csv";
};

/// throws SchemaError, then HypothesisError from params.validate()
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  // written to stderr, not part of the table
};

std::string to_csv(const Table& t);
std::string to_jsonl(const Table& t);
/// throws SchemaError on malformed input
Table parse_csv(const std::string& text);
Table parse_jsonl(const std::string& text, const std::vector<std::string>& columns);

extern const std::vector<std::string> kBoundColumns;
extern const std::vector<std::string> kTamagawaColumns;

/* Checks the header and the cell formats of an emitted table of the given
 * kind ("bound", "tamagawa" or "verify"); throws SchemaError naming the cell. */
void validate_table(const Table& t, const std::string& kind);

Table cmd_bound(const RunConfig& cfg);
/// warnings collects one line per negative defect
Table cmd_tamagawa(const RunConfig& cfg, std::vector<std::string>& warnings);

struct VerifyOptions {
    unsigned long p = 0;  // 0: the suite's default primes
    int k = 0;
    std::optional<long> ap;
    int n_max = 0;        // 0: suite default
    int cases = 0;        // 0: suite default
    uint64_t seed = 20240611;
    int jobs = 1;
    long N = 0;           // 0: suite default
    size_t M = 0;
};

extern const std::vector<std::string> kVerifyColumns;
extern const std::vector<std::string> kSuites;

struct VerifyReport {
    Table table;
    size_t failures = 0;
};

/// throws DomainError for an unknown suite
VerifyReport cmd_verify(const std::string& suite, const VerifyOptions& opt);

int run(int argc, char** argv);

}  // namespace iwg::cli
