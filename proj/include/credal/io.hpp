#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "credal/geometry.hpp"
#include "credal/model.hpp"

namespace credal {

// Parse failure with a 1-based position in the input text.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + message),
          line(line),
          column(column) {}
};

struct LoadedNetwork {
    CredalNetwork net;
    int duplicate_vertices = 0;  // dropped while loading
};

// Constraint-based counterpart of a conditional credal table: one polytope
// per parent configuration, each over the child's state space.
struct HTable {
    int child = 0;
    std::vector<int> parents;
    std::vector<HPolytope> sets;
};

struct HNetwork {
    std::vector<int> cards;
    Dag dag;
    std::vector<HTable> tables;
    int size() const { return static_cast<int>(cards.size()); }
};

enum class ModelFormat { V, H };

ModelFormat detect_format(const std::string& text);

LoadedNetwork parse_v_network(const std::string& text);
std::string serialize_v_network(const CredalNetwork& net);

HNetwork parse_h_network(const std::string& text);
std::string serialize_h_network(const HNetwork& net);

HNetwork network_to_h(const CredalNetwork& net);
LoadedNetwork h_to_network(const HNetwork& hnet);

// Loads either format, converting constraint models to vertex form.
LoadedNetwork load_model_text(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct BenchmarkRecord {
    std::string model_id;
    std::string task;  // "marginal" or "conditional"
    int target = 0;
    std::map<int, int> evidence;
    std::string method;
    int state = 0;
    double lower = 0.0;
    double upper = 0.0;
    double time_ms = 0.0;
};

std::string encode_evidence(const std::map<int, int>& evidence);
std::map<int, int> decode_evidence(const std::string& text);

std::vector<BenchmarkRecord> parse_benchmark_csv(const std::string& text);
std::string serialize_benchmark_csv(const std::vector<BenchmarkRecord>& records);

}  // namespace credal
