#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "credal/bench.hpp"
#include "credal/generate.hpp"
#include "credal/geometry.hpp"
#include "credal/inference.hpp"
#include "credal/io.hpp"
#include "credal/model.hpp"
#include "credal/preprocess.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInfeasible = 3;

struct InferArgs {
    std::string model;
    int target = 0;
    std::vector<std::string> evidence;
    std::string method = "exact";
    int k = 10;
    std::string metric = "euclidean";
    std::string out_csv;
};

struct ConvertArgs {
    std::string in, out, to;
};

struct GenerateArgs {
    int n_models = 20;
    int nodes = 5;
    std::uint64_t seed = 1;
    std::string out;
    int card_min = 2, card_max = 3;
    int max_indegree = 3;
    int vert_min = 2, vert_max = 3;
    std::int64_t max_product = 4096;
};

struct ReduceArgs {
    std::string in, out;
    int k = 10;
    std::string metric = "euclidean";
};

struct BenchArgs {
    std::string suite;
    std::string methods = "exact,k10,k5";
    std::vector<std::string> externs;
    std::string out_csv;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) items.push_back(cur);
    return items;
}

credal::ReductionPolicy make_policy(const std::string& method, int k, const std::string& metric) {
    if (method == "exact") return credal::exact_policy();
    const credal::Metric m = metric == "sym-kl" ? credal::Metric::SymKl : credal::Metric::Euclidean;
    return credal::k_policy(k, m);
}

int run_infer(const InferArgs& args) {
    if (args.method == "k-reduce" && args.k < 1) {
        std::fprintf(stderr, "error: --k must be at least 1\n");
        return kExitUsage;
    }
    std::map<int, int> evidence;
    try {
        std::string joined;
        for (const std::string& item : args.evidence) {
            if (!joined.empty()) joined += ';';
            joined += item;
        }
        evidence = credal::decode_evidence(joined);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }

    credal::LoadedNetwork loaded = credal::load_model_text(credal::read_text_file(args.model));
    if (loaded.duplicate_vertices > 0)
        std::fprintf(stderr, "warning: dropped %d duplicate vertices while loading\n",
                     loaded.duplicate_vertices);
    const std::vector<std::string> violations = credal::validate_network(loaded.net);
    if (!violations.empty()) {
        for (const std::string& v : violations) std::fprintf(stderr, "error: model: %s\n", v.c_str());
        return kExitData;
    }

    credal::Query query;
    query.target = args.target;
    for (const auto& [v, s] : evidence) query.evidence[v] = s;

    credal::RequisiteResult req = credal::requisite_graph(loaded.net, query);
    credal::IntervalResult res =
        credal::credal_ve(req.reduced, req.query, make_policy(args.method, args.k, args.metric));

    std::printf("method %s, target %d, %zu states, %.3f ms\n", res.method.c_str(), args.target,
                res.lower.size(), res.time_ms);
    for (std::size_t s = 0; s < res.lower.size(); ++s)
        std::printf("state %zu: [%.9f, %.9f]\n", s, res.lower[s], res.upper[s]);
    if (res.dropped_tables > 0)
        std::printf("dropped %d zero-mass tables\n", res.dropped_tables);

    if (!args.out_csv.empty()) {
        std::vector<credal::BenchmarkRecord> records;
        for (std::size_t s = 0; s < res.lower.size(); ++s) {
            credal::BenchmarkRecord r;
            r.model_id = std::filesystem::path(args.model).stem().string();
            r.task = evidence.empty() ? "marginal" : "conditional";
            r.target = args.target;
            r.evidence = evidence;
            r.method = res.method;
            r.state = (int)s;
            r.lower = res.lower[s];
            r.upper = res.upper[s];
            r.time_ms = res.time_ms;
            records.push_back(std::move(r));
        }
        credal::write_text_file(args.out_csv, credal::serialize_benchmark_csv(records));
    }
    return kExitOk;
}

int run_convert(const ConvertArgs& args) {
    const std::string text = credal::read_text_file(args.in);
    const credal::ModelFormat format = credal::detect_format(text);
    std::string result;
    if (args.to == "v") {
        credal::LoadedNetwork loaded = format == credal::ModelFormat::V
                                           ? credal::parse_v_network(text)
                                           : credal::h_to_network(credal::parse_h_network(text));
        result = credal::serialize_v_network(loaded.net);
    } else {
        credal::HNetwork h = format == credal::ModelFormat::H
                                 ? credal::parse_h_network(text)
                                 : credal::network_to_h(credal::parse_v_network(text).net);
        result = credal::serialize_h_network(h);
    }
    credal::write_text_file(args.out, result);
    return kExitOk;
}

int run_generate(const GenerateArgs& args) {
    credal::SuiteOptions opt;
    opt.n_models = args.n_models;
    opt.params.n_nodes = args.nodes;
    opt.params.seed = args.seed;
    opt.params.card_min = args.card_min;
    opt.params.card_max = args.card_max;
    opt.params.max_indegree = args.max_indegree;
    opt.params.vert_min = args.vert_min;
    opt.params.vert_max = args.vert_max;
    opt.max_product = args.max_product;
    credal::generate_suite(args.out, opt);
    std::printf("wrote %d models and manifest.json to %s\n", args.n_models, args.out.c_str());
    return kExitOk;
}

int run_reduce(const ReduceArgs& args) {
    if (args.k < 1) {
        std::fprintf(stderr, "error: --k must be at least 1\n");
        return kExitUsage;
    }
    credal::LoadedNetwork loaded = credal::load_model_text(credal::read_text_file(args.in));
    const credal::Metric metric =
        args.metric == "sym-kl" ? credal::Metric::SymKl : credal::Metric::Euclidean;
    for (credal::ConditionalCredalTable& t : loaded.net.tables)
        for (credal::CredalSet& cs : t.sets) {
            credal::PointSet ps;
            ps.dim = cs.dim;
            ps.points = cs.vertices;
            cs.vertices = credal::k_reduction(ps, args.k, metric).points;
        }
    credal::write_text_file(args.out, credal::serialize_v_network(loaded.net));
    return kExitOk;
}

int run_benchmark_cmd(const BenchArgs& args) {
    const std::vector<std::string> methods = split_list(args.methods);
    if (methods.empty()) {
        std::fprintf(stderr, "error: --methods must name at least one method\n");
        return kExitUsage;
    }
    try {
        for (const std::string& m : methods) credal::policy_from_method(m);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    credal::BenchmarkSummary summary =
        credal::run_benchmark(args.suite, methods, args.externs, args.out_csv);
    std::fputs(credal::format_summary(summary).c_str(), stdout);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and approximate inference for credal networks"};
    app.require_subcommand(1);

    InferArgs infer_args;
    CLI::App* infer = app.add_subcommand("infer", "Run a marginal or conditional query");
    infer->add_option("--model", infer_args.model, "Model file (V or H format)")->required();
    infer->add_option("--target", infer_args.target, "Target variable id")->required();
    infer->add_option("--evidence", infer_args.evidence, "Observation var=state (repeatable)");
    infer->add_option("--method", infer_args.method, "Inference method")
        ->check(CLI::IsMember({"exact", "k-reduce"}));
    infer->add_option("--k", infer_args.k, "Vertex budget for k-reduce");
    infer->add_option("--metric", infer_args.metric, "Closest-pair metric")
        ->check(CLI::IsMember({"euclidean", "sym-kl"}));
    infer->add_option("--out", infer_args.out_csv, "Write results as CSV");

    ConvertArgs convert_args;
    CLI::App* convert = app.add_subcommand("convert", "Convert between V and H model formats");
    convert->add_option("--in", convert_args.in, "Input model file")->required();
    convert->add_option("--out", convert_args.out, "Output model file")->required();
    convert->add_option("--to", convert_args.to, "Target format")
        ->required()
        ->check(CLI::IsMember({"v", "h"}));

    GenerateArgs generate_args;
    CLI::App* generate = app.add_subcommand("generate", "Generate a random benchmark suite");
    generate->add_option("--n-models", generate_args.n_models, "Number of models");
    generate->add_option("--nodes", generate_args.nodes, "Variables per model");
    generate->add_option("--seed", generate_args.seed, "Base seed");
    generate->add_option("--out", generate_args.out, "Output directory")->required();
    generate->add_option("--card-min", generate_args.card_min, "Minimum cardinality");
    generate->add_option("--card-max", generate_args.card_max, "Maximum cardinality");
    generate->add_option("--max-indegree", generate_args.max_indegree, "Maximum parents per node");
    generate->add_option("--vert-min", generate_args.vert_min, "Minimum vertices per credal set");
    generate->add_option("--vert-max", generate_args.vert_max, "Maximum vertices per credal set");
    generate->add_option("--max-product", generate_args.max_product,
                         "Cap on the product of vertex counts");

    ReduceArgs reduce_args;
    CLI::App* reduce = app.add_subcommand("reduce", "Apply k-reduction to every credal set");
    reduce->add_option("--in", reduce_args.in, "Input model file")->required();
    reduce->add_option("--out", reduce_args.out, "Output model file")->required();
    reduce->add_option("--k", reduce_args.k, "Vertex budget")->required();
    reduce->add_option("--metric", reduce_args.metric, "Closest-pair metric")
        ->check(CLI::IsMember({"euclidean", "sym-kl"}));

    BenchArgs bench_args;
    CLI::App* benchmark = app.add_subcommand("benchmark", "Run the benchmark harness on a suite");
    benchmark->add_option("--suite", bench_args.suite, "Suite directory with manifest.json")->required();
    benchmark->add_option("--methods", bench_args.methods, "Comma-separated method list");
    benchmark->add_option("--extern", bench_args.externs, "External results CSV (repeatable)");
    benchmark->add_option("--out", bench_args.out_csv, "Write merged records as CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*infer) return run_infer(infer_args);
        if (*convert) return run_convert(convert_args);
        if (*generate) return run_generate(generate_args);
        if (*reduce) return run_reduce(reduce_args);
        if (*benchmark) return run_benchmark_cmd(bench_args);
    } catch (const credal::ZeroEvidenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitUsage;
}
