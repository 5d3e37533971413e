#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "credal/generate.hpp"
#include "credal/inference.hpp"
#include "credal/io.hpp"
#include "credal/model.hpp"

namespace credal {

// Root-mean-square error of a method against the exact reference, pooled
// over the lower and upper bounds of every aligned (query, state) pair.
double compute_rmse(const std::vector<BenchmarkRecord>& method_records,
                    const std::vector<BenchmarkRecord>& exact_records);

// Total reference time divided by total method time over the common queries.
double compute_speedup(const std::vector<BenchmarkRecord>& method_records,
                       const std::vector<BenchmarkRecord>& exact_records);

// "exact", "kN", or "kN-symkl".
ReductionPolicy policy_from_method(const std::string& method);

struct SuiteOptions {
    int n_models = 20;
    GenParams params;
    std::int64_t max_product = 4096;
    std::int64_t min_product = 0;
    int gen_attempts = 200;
};

struct SuiteModel {
    std::string id;
    std::string file;
    Query marginal;
    std::optional<Query> conditional;
};

struct SuiteManifest {
    std::uint64_t seed = 0;
    std::vector<SuiteModel> models;
};

void generate_suite(const std::string& dir, const SuiteOptions& opt);
SuiteManifest read_manifest(const std::string& dir);

struct MethodSummary {
    std::string method;
    double rmse = 0.0;
    double speed_up = 0.0;
    int queries = 0;
    double rmse_marginal = -1.0;     // -1 when the subset is empty
    double rmse_conditional = -1.0;
};

struct BenchmarkSummary {
    std::vector<MethodSummary> methods;
    std::vector<std::string> failures;
    int models_run = 0;
    std::vector<BenchmarkRecord> records;
};

BenchmarkSummary run_benchmark(const std::string& suite_dir,
                               const std::vector<std::string>& methods,
                               const std::vector<std::string>& extern_csvs,
                               const std::string& out_csv);

std::string format_summary(const BenchmarkSummary& summary);

}  // namespace credal
