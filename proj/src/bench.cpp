#include "credal/bench.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <stdexcept>

#include "json.hpp"

#include "credal/preprocess.hpp"

namespace credal {
namespace {

using QueryKey = std::tuple<std::string, std::string, int, std::string>;  // model, task, target, evidence
using PairKey = std::tuple<std::string, std::string, int, std::string, int>;

PairKey pair_key(const BenchmarkRecord& r) {
    return {r.model_id, r.task, r.target, encode_evidence(r.evidence), r.state};
}

QueryKey query_key(const BenchmarkRecord& r) {
    return {r.model_id, r.task, r.target, encode_evidence(r.evidence)};
}

double rmse_over(const std::vector<BenchmarkRecord>& method_records,
                 const std::map<PairKey, const BenchmarkRecord*>& exact_by_key,
                 const char* task_filter, int* aligned_out) {
    double sq = 0.0;
    int n = 0;
    for (const BenchmarkRecord& r : method_records) {
        if (task_filter && r.task != task_filter) continue;
        auto it = exact_by_key.find(pair_key(r));
        if (it == exact_by_key.end()) continue;
        const BenchmarkRecord& e = *it->second;
        sq += (r.lower - e.lower) * (r.lower - e.lower);
        sq += (r.upper - e.upper) * (r.upper - e.upper);
        n += 2;
    }
    if (aligned_out) *aligned_out = n / 2;
    if (n == 0) return -1.0;
    return std::sqrt(sq / n);
}

}  // namespace

double compute_rmse(const std::vector<BenchmarkRecord>& method_records,
                    const std::vector<BenchmarkRecord>& exact_records) {
    std::map<PairKey, const BenchmarkRecord*> exact_by_key;
    for (const BenchmarkRecord& r : exact_records) exact_by_key[pair_key(r)] = &r;
    const double rmse = rmse_over(method_records, exact_by_key, nullptr, nullptr);
    if (rmse < 0.0) throw std::invalid_argument("compute_rmse: no aligned records");
    return rmse;
}

double compute_speedup(const std::vector<BenchmarkRecord>& method_records,
                       const std::vector<BenchmarkRecord>& exact_records) {
    std::map<QueryKey, double> exact_time, method_time;
    for (const BenchmarkRecord& r : exact_records) exact_time.emplace(query_key(r), r.time_ms);
    for (const BenchmarkRecord& r : method_records) method_time.emplace(query_key(r), r.time_ms);
    double te = 0.0, tm = 0.0;
    bool any = false;
    for (const auto& [key, t] : method_time) {
        auto it = exact_time.find(key);
        if (it == exact_time.end()) continue;
        any = true;
        tm += t;
        te += it->second;
    }
    if (!any) throw std::invalid_argument("compute_speedup: no common queries");
    if (tm <= 0.0 || te <= 0.0) throw std::invalid_argument("compute_speedup: nonpositive total time");
    return te / tm;
}

ReductionPolicy policy_from_method(const std::string& method) {
    if (method == "exact") return exact_policy();
    if (method.size() >= 2 && method[0] == 'k') {
        std::string digits = method.substr(1);
        Metric metric = Metric::Euclidean;
        const std::string suffix = "-symkl";
        if (digits.size() > suffix.size() && digits.compare(digits.size() - suffix.size(), suffix.size(), suffix) == 0) {
            metric = Metric::SymKl;
            digits = digits.substr(0, digits.size() - suffix.size());
        }
        int k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && k >= 1)
            return k_policy(k, metric);
    }
    throw std::invalid_argument("unknown method '" + method + "' (expected exact, kN, or kN-symkl)");
}

void generate_suite(const std::string& dir, const SuiteOptions& opt) {
    if (opt.n_models < 1) throw std::invalid_argument("generate_suite: need at least one model");
    std::filesystem::create_directories(dir);

    nlohmann::json manifest;
    manifest["seed"] = opt.params.seed;
    manifest["models"] = nlohmann::json::array();

    for (int i = 0; i < opt.n_models; ++i) {
        GenParams p = opt.params;
        p.seed = mix_seed(opt.params.seed, (std::uint64_t)i);
        CredalNetwork net = random_network_capped(p, opt.max_product, opt.gen_attempts, opt.min_product);

        char idbuf[32];
        std::snprintf(idbuf, sizeof idbuf, "model_%03d", i);
        const std::string id = idbuf;
        const std::string file = id + ".credal";
        write_text_file(dir + "/" + file, serialize_v_network(net));

        TaskSelection tasks = select_tasks(net);
        nlohmann::json entry;
        entry["id"] = id;
        entry["file"] = file;
        entry["marginal"] = {{"target", tasks.marginal.target}};
        if (tasks.conditional) {
            std::map<int, int> ev(tasks.conditional->evidence.begin(), tasks.conditional->evidence.end());
            entry["conditional"] = {{"target", tasks.conditional->target},
                                    {"evidence", encode_evidence(ev)}};
        } else {
            entry["conditional"] = nullptr;
        }
        manifest["models"].push_back(entry);
    }
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

SuiteManifest read_manifest(const std::string& dir) {
    const std::string text = read_text_file(dir + "/manifest.json");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("manifest.json: " + std::string(e.what()));
    }
    SuiteManifest out;
    try {
        out.seed = j.value("seed", (std::uint64_t)0);
        for (const auto& entry : j.at("models")) {
            SuiteModel m;
            m.id = entry.at("id").get<std::string>();
            m.file = entry.at("file").get<std::string>();
            m.marginal.target = entry.at("marginal").at("target").get<int>();
            if (entry.contains("conditional") && !entry["conditional"].is_null()) {
                Query q;
                q.target = entry["conditional"].at("target").get<int>();
                for (const auto& [v, s] : decode_evidence(entry["conditional"].at("evidence").get<std::string>()))
                    q.evidence[v] = s;
                m.conditional = q;
            }
            out.models.push_back(std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("manifest.json: " + std::string(e.what()));
    }
    return out;
}

BenchmarkSummary run_benchmark(const std::string& suite_dir,
                               const std::vector<std::string>& methods,
                               const std::vector<std::string>& extern_csvs,
                               const std::string& out_csv) {
    std::vector<std::string> run_methods = methods;
    if (std::find(run_methods.begin(), run_methods.end(), "exact") == run_methods.end())
        run_methods.insert(run_methods.begin(), "exact");
    for (const std::string& m : run_methods) policy_from_method(m);

    SuiteManifest manifest = read_manifest(suite_dir);
    BenchmarkSummary out;

    for (const SuiteModel& model : manifest.models) {
        CredalNetwork net;
        try {
            LoadedNetwork loaded = load_model_text(read_text_file(suite_dir + "/" + model.file));
            const std::vector<std::string> violations = validate_network(loaded.net);
            if (!violations.empty()) throw std::runtime_error("invalid model: " + violations.front());
            net = std::move(loaded.net);
        } catch (const std::exception& e) {
            out.failures.push_back(model.id + ": " + e.what());
            continue;
        }
        ++out.models_run;

        struct Task {
            const char* name;
            Query query;
        };
        std::vector<Task> tasks;
        tasks.push_back({"marginal", model.marginal});
        if (model.conditional) tasks.push_back({"conditional", *model.conditional});

        for (const Task& task : tasks) {
            RequisiteResult req;
            try {
                req = requisite_graph(net, task.query);
            } catch (const std::exception& e) {
                out.failures.push_back(model.id + " " + task.name + ": " + e.what());
                continue;
            }
            std::map<int, int> original_evidence(task.query.evidence.begin(), task.query.evidence.end());

            bool have_reference = false;
            for (const std::string& method : run_methods) {
                IntervalResult res;
                try {
                    res = credal_ve(req.reduced, req.query, policy_from_method(method));
                } catch (const std::exception& e) {
                    out.failures.push_back(model.id + " " + task.name + " " + method + ": " + e.what());
                    if (method == "exact") break;  // nothing to compare against
                    continue;
                }
                if (method == "exact") have_reference = true;
                for (int s = 0; s < (int)res.lower.size(); ++s) {
                    BenchmarkRecord r;
                    r.model_id = model.id;
                    r.task = task.name;
                    r.target = task.query.target;
                    r.evidence = original_evidence;
                    r.method = method;
                    r.state = s;
                    r.lower = res.lower[s];
                    r.upper = res.upper[s];
                    r.time_ms = res.time_ms;
                    out.records.push_back(std::move(r));
                }
            }
            (void)have_reference;
        }
    }

    for (const std::string& path : extern_csvs) {
        std::vector<BenchmarkRecord> ext = parse_benchmark_csv(read_text_file(path));
        out.records.insert(out.records.end(), ext.begin(), ext.end());
    }

    std::vector<std::string> summary_methods;
    for (const std::string& m : run_methods)
        if (std::find(summary_methods.begin(), summary_methods.end(), m) == summary_methods.end())
            summary_methods.push_back(m);
    for (const BenchmarkRecord& r : out.records)
        if (std::find(summary_methods.begin(), summary_methods.end(), r.method) == summary_methods.end())
            summary_methods.push_back(r.method);

    std::vector<BenchmarkRecord> exact_records;
    for (const BenchmarkRecord& r : out.records)
        if (r.method == "exact") exact_records.push_back(r);
    std::map<PairKey, const BenchmarkRecord*> exact_by_key;
    for (const BenchmarkRecord& r : exact_records) exact_by_key[pair_key(r)] = &r;

    for (const std::string& name : summary_methods) {
        std::vector<BenchmarkRecord> mine;
        for (const BenchmarkRecord& r : out.records)
            if (r.method == name) mine.push_back(r);
        if (mine.empty()) continue;

        MethodSummary ms;
        ms.method = name;
        int aligned = 0;
        ms.rmse = rmse_over(mine, exact_by_key, nullptr, &aligned);
        ms.queries = aligned;
        if (ms.rmse < 0.0) {
            out.failures.push_back("method " + name + ": no aligned records, skipped in summary");
            continue;
        }
        ms.rmse_marginal = rmse_over(mine, exact_by_key, "marginal", nullptr);
        ms.rmse_conditional = rmse_over(mine, exact_by_key, "conditional", nullptr);
        try {
            ms.speed_up = compute_speedup(mine, exact_records);
        } catch (const std::invalid_argument&) {
            ms.speed_up = -1.0;
        }
        out.methods.push_back(std::move(ms));
    }

    if (!out_csv.empty()) write_text_file(out_csv, serialize_benchmark_csv(out.records));
    return out;
}

std::string format_summary(const BenchmarkSummary& summary) {
    auto fmt = [](double v, const char* spec) {
        char buf[48];
        std::snprintf(buf, sizeof buf, spec, v);
        return std::string(buf);
    };
    std::vector<std::array<std::string, 5>> rows;
    rows.push_back({"Method", "RMSE", "RMSE marginal", "RMSE conditional", "Speed up"});
    for (const MethodSummary& m : summary.methods) {
        rows.push_back({m.method, fmt(m.rmse, "%.6f"),
                        m.rmse_marginal < 0.0 ? "-" : fmt(m.rmse_marginal, "%.6f"),
                        m.rmse_conditional < 0.0 ? "-" : fmt(m.rmse_conditional, "%.6f"),
                        m.speed_up < 0.0 ? "-" : fmt(m.speed_up, "%.3f")});
    }
    std::array<std::size_t, 5> width{};
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::string cell = row[c];
            cell.resize(width[c], ' ');
            if (c) out += " | ";
            out += cell;
        }
        out += '\n';
    }
    out += '\n';
    out += "models run: " + std::to_string(summary.models_run) + "\n";
    if (!summary.failures.empty()) {
        out += "failures:\n";
        for (const std::string& f : summary.failures) out += "  " + f + "\n";
    }
    return out;
}

}  // namespace credal
