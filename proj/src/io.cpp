#include "credal/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace credal {
namespace {

constexpr std::int64_t kMaxVariables = 10000;
constexpr std::int64_t kMaxCardinality = 1000000;
constexpr std::int64_t kMaxConfigs = 1000000;
constexpr std::int64_t kMaxVertices = 1000000;
constexpr std::int64_t kMaxTotalValues = 50000000;

class Tokenizer {
public:
    explicit Tokenizer(const std::string& text) : text_(text) {}

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }

    std::string_view token(const char* what) {
        skip();
        if (pos_ >= text_.size())
            throw ParseError(line_, col_, std::string("expected ") + what + ", found end of input");
        tok_line_ = line_;
        tok_col_ = col_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace((unsigned char)text_[pos_]) && text_[pos_] != '#')
            advance();
        return std::string_view(text_).substr(start, pos_ - start);
    }

    std::int64_t next_int(const char* what, std::int64_t lo, std::int64_t hi) {
        std::string_view tok = token(what);
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ParseError(tok_line_, tok_col_,
                             std::string("expected ") + what + ", found '" + std::string(tok) + "'");
        if (value < lo || value > hi)
            throw ParseError(tok_line_, tok_col_, std::string(what) + " " + std::to_string(value) +
                                                      " out of range [" + std::to_string(lo) + ", " +
                                                      std::to_string(hi) + "]");
        return value;
    }

    double next_double(const char* what) {
        std::string_view tok = token(what);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value))
            throw ParseError(tok_line_, tok_col_,
                             std::string("expected ") + what + ", found '" + std::string(tok) + "'");
        return value;
    }

    void expect_word(const char* word, const char* what) {
        std::string_view tok = token(what);
        if (tok != word)
            throw ParseError(tok_line_, tok_col_,
                             std::string("expected ") + what + ", found '" + std::string(tok) + "'");
    }

    [[noreturn]] void fail_here(const std::string& message) { throw ParseError(tok_line_, tok_col_, message); }

    [[noreturn]] void fail_at_cursor(const std::string& message) {
        skip();
        throw ParseError(line_, col_, message);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace((unsigned char)c)) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int tok_line_ = 1;
    int tok_col_ = 1;
};

struct Preamble {
    int n = 0;
    std::vector<int> cards;
    std::vector<int> child_of_table;        // table index -> child variable
    std::vector<std::vector<int>> parents;  // per table, declared order
};

Preamble parse_preamble(Tokenizer& tz, const char* header) {
    Preamble pre;
    tz.expect_word(header, (std::string(header) + " header").c_str());
    pre.n = (int)tz.next_int("variable count", 1, kMaxVariables);
    pre.cards.resize(pre.n);
    for (int v = 0; v < pre.n; ++v) pre.cards[v] = (int)tz.next_int("cardinality", 1, kMaxCardinality);
    tz.next_int("table count equal to the variable count", pre.n, pre.n);

    pre.child_of_table.resize(pre.n);
    pre.parents.resize(pre.n);
    std::vector<char> is_child(pre.n, 0);
    for (int t = 0; t < pre.n; ++t) {
        const int m = (int)tz.next_int("scope size", 1, pre.n);
        std::vector<int> scope(m);
        for (int j = 0; j < m; ++j) scope[j] = (int)tz.next_int("variable id", 0, pre.n - 1);
        std::vector<int> sorted = scope;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            tz.fail_here("duplicate variable in scope");
        const int child = scope.back();
        if (is_child[child]) tz.fail_here("variable " + std::to_string(child) + " is the child of two tables");
        is_child[child] = 1;
        pre.child_of_table[t] = child;
        scope.pop_back();
        pre.parents[t] = std::move(scope);
    }
    return pre;
}

std::int64_t parent_config_count(Tokenizer& tz, const Preamble& pre, int t) {
    std::int64_t nconf = 1;
    for (int p : pre.parents[t]) {
        nconf *= pre.cards[p];
        if (nconf > kMaxConfigs)
            tz.fail_at_cursor("parent configuration count exceeds " + std::to_string(kMaxConfigs));
    }
    return nconf;
}

void append_number(std::string& out, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out += buf;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

const char* kCsvHeader = "model_id,task,target,evidence,method,state,lower,upper,time_ms";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

int parse_csv_int(const std::string& field, int row, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || value < 0)
        throw ParseError(row, 1, std::string("csv: expected ") + what + ", found '" + field + "'");
    return value;
}

double parse_csv_double(const std::string& field, int row, const char* what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value))
        throw ParseError(row, 1, std::string("csv: expected ") + what + ", found '" + field + "'");
    return value;
}

}  // namespace

ModelFormat detect_format(const std::string& text) {
    Tokenizer tz(text);
    std::string_view tok = tz.token("V-CREDAL or H-CREDAL header");
    if (tok == "V-CREDAL") return ModelFormat::V;
    if (tok == "H-CREDAL") return ModelFormat::H;
    tz.fail_here("expected V-CREDAL or H-CREDAL header, found '" + std::string(tok) + "'");
}

LoadedNetwork parse_v_network(const std::string& text) {
    Tokenizer tz(text);
    Preamble pre = parse_preamble(tz, "V-CREDAL");

    LoadedNetwork out;
    out.net.cards = pre.cards;
    out.net.dag.parents.resize(pre.n);
    out.net.tables.resize(pre.n);

    std::int64_t total_values = 0;
    std::int64_t total_configs = 0;
    for (int t = 0; t < pre.n; ++t) {
        const int child = pre.child_of_table[t];
        const int ccard = pre.cards[child];
        const std::int64_t nconf = parent_config_count(tz, pre, t);
        total_configs += nconf;
        if (total_configs > 2 * kMaxConfigs)
            tz.fail_at_cursor("model exceeds the parent configuration budget");

        ConditionalCredalTable table;
        table.child = child;
        table.parents = pre.parents[t];
        table.sets.resize(nconf);
        for (std::int64_t c = 0; c < nconf; ++c) {
            const int nv = (int)tz.next_int("vertex count", 1, kMaxVertices);
            total_values += (std::int64_t)nv * ccard;
            if (total_values > kMaxTotalValues) tz.fail_at_cursor("model exceeds the value budget");
            CredalSet& cs = table.sets[c];
            cs.dim = ccard;
            for (int j = 0; j < nv; ++j) {
                Vec v(ccard);
                for (int s = 0; s < ccard; ++s) v[s] = tz.next_double("probability value");
                bool dup = false;
                for (const Vec& kept : cs.vertices) {
                    double diff = 0.0;
                    for (int s = 0; s < ccard; ++s) diff = std::max(diff, std::abs(kept[s] - v[s]));
                    if (diff <= kEpsDup) {
                        dup = true;
                        break;
                    }
                }
                if (dup)
                    ++out.duplicate_vertices;
                else
                    cs.vertices.push_back(std::move(v));
            }
        }
        out.net.dag.parents[child] = table.parents;
        out.net.tables[child] = std::move(table);
    }
    if (!tz.at_end()) tz.fail_at_cursor("expected end of input, found trailing data");
    return out;
}

std::string serialize_v_network(const CredalNetwork& net) {
    std::string out = "V-CREDAL\n";
    out += std::to_string(net.size());
    out += '\n';
    for (int v = 0; v < net.size(); ++v) {
        if (v) out += ' ';
        out += std::to_string(net.cards[v]);
    }
    out += '\n';
    out += std::to_string(net.size());
    out += '\n';
    for (int v = 0; v < net.size(); ++v) {
        const ConditionalCredalTable& t = net.tables[v];
        out += std::to_string(t.parents.size() + 1);
        for (int p : t.parents) {
            out += ' ';
            out += std::to_string(p);
        }
        out += ' ';
        out += std::to_string(t.child);
        out += '\n';
    }
    for (int v = 0; v < net.size(); ++v) {
        const ConditionalCredalTable& t = net.tables[v];
        for (const CredalSet& cs : t.sets) {
            out += std::to_string(cs.vertices.size());
            out += '\n';
            for (const Vec& vx : cs.vertices) {
                for (int s = 0; s < cs.dim; ++s) {
                    if (s) out += ' ';
                    append_number(out, vx[s]);
                }
                out += '\n';
            }
        }
    }
    return out;
}

HNetwork parse_h_network(const std::string& text) {
    Tokenizer tz(text);
    Preamble pre = parse_preamble(tz, "H-CREDAL");

    HNetwork out;
    out.cards = pre.cards;
    out.dag.parents.resize(pre.n);
    out.tables.resize(pre.n);

    std::int64_t total_values = 0;
    std::int64_t total_configs = 0;
    for (int t = 0; t < pre.n; ++t) {
        const int child = pre.child_of_table[t];
        const int ccard = pre.cards[child];
        const std::int64_t nconf = parent_config_count(tz, pre, t);
        total_configs += nconf;
        if (total_configs > 2 * kMaxConfigs)
            tz.fail_at_cursor("model exceeds the parent configuration budget");

        HTable table;
        table.child = child;
        table.parents = pre.parents[t];
        table.sets.resize(nconf);
        for (std::int64_t c = 0; c < nconf; ++c) {
            const int nr = (int)tz.next_int("constraint count", 0, kMaxVertices);
            total_values += (std::int64_t)nr * (ccard + 1);
            if (total_values > kMaxTotalValues) tz.fail_at_cursor("model exceeds the value budget");
            HPolytope& poly = table.sets[c];
            poly.dim = ccard;
            poly.rows.resize(nr);
            for (int j = 0; j < nr; ++j) {
                poly.rows[j].coeffs.resize(ccard);
                for (int s = 0; s < ccard; ++s)
                    poly.rows[j].coeffs[s] = tz.next_double("constraint coefficient");
                poly.rows[j].bound = tz.next_double("constraint bound");
            }
        }
        out.dag.parents[child] = table.parents;
        out.tables[child] = std::move(table);
    }
    if (!tz.at_end()) tz.fail_at_cursor("expected end of input, found trailing data");
    return out;
}

std::string serialize_h_network(const HNetwork& net) {
    std::string out = "H-CREDAL\n";
    out += std::to_string(net.size());
    out += '\n';
    for (int v = 0; v < net.size(); ++v) {
        if (v) out += ' ';
        out += std::to_string(net.cards[v]);
    }
    out += '\n';
    out += std::to_string(net.size());
    out += '\n';
    for (int v = 0; v < net.size(); ++v) {
        const HTable& t = net.tables[v];
        out += std::to_string(t.parents.size() + 1);
        for (int p : t.parents) {
            out += ' ';
            out += std::to_string(p);
        }
        out += ' ';
        out += std::to_string(t.child);
        out += '\n';
    }
    for (int v = 0; v < net.size(); ++v) {
        const HTable& t = net.tables[v];
        for (const HPolytope& poly : t.sets) {
            out += std::to_string(poly.rows.size());
            out += '\n';
            for (const HRow& row : poly.rows) {
                for (int s = 0; s < poly.dim; ++s) {
                    if (s) out += ' ';
                    append_number(out, row.coeffs[s]);
                }
                out += ' ';
                append_number(out, row.bound);
                out += '\n';
            }
        }
    }
    return out;
}

HNetwork network_to_h(const CredalNetwork& net) {
    HNetwork out;
    out.cards = net.cards;
    out.dag = net.dag;
    out.tables.resize(net.size());
    for (int v = 0; v < net.size(); ++v) {
        const ConditionalCredalTable& t = net.tables[v];
        HTable& h = out.tables[v];
        h.child = t.child;
        h.parents = t.parents;
        h.sets.reserve(t.sets.size());
        for (const CredalSet& cs : t.sets) {
            PointSet ps;
            ps.dim = cs.dim;
            ps.points = cs.vertices;
            h.sets.push_back(v_to_h(ps));
        }
    }
    return out;
}

LoadedNetwork h_to_network(const HNetwork& hnet) {
    LoadedNetwork out;
    out.net.cards = hnet.cards;
    out.net.dag = hnet.dag;
    out.net.tables.resize(hnet.size());
    for (int v = 0; v < hnet.size(); ++v) {
        const HTable& h = hnet.tables[v];
        ConditionalCredalTable& t = out.net.tables[v];
        t.child = h.child;
        t.parents = h.parents;
        t.sets.reserve(h.sets.size());
        for (const HPolytope& poly : h.sets) {
            PointSet ps = h_to_v(poly);
            CredalSet cs;
            cs.dim = ps.dim;
            cs.vertices = std::move(ps.points);
            t.sets.push_back(std::move(cs));
        }
    }
    return out;
}

LoadedNetwork load_model_text(const std::string& text) {
    if (detect_format(text) == ModelFormat::V) return parse_v_network(text);
    return h_to_network(parse_h_network(text));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string encode_evidence(const std::map<int, int>& evidence) {
    std::string out;
    for (const auto& [v, s] : evidence) {
        if (!out.empty()) out += ';';
        out += std::to_string(v);
        out += '=';
        out += std::to_string(s);
    }
    return out;
}

std::map<int, int> decode_evidence(const std::string& text) {
    std::map<int, int> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t stop = text.find(';', start);
        if (stop == std::string::npos) stop = text.size();
        const std::string item = text.substr(start, stop - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("evidence: expected var=state, found '" + item + "'");
        int var = 0;
        int state = 0;
        auto [p1, e1] = std::from_chars(item.data(), item.data() + eq, var);
        auto [p2, e2] = std::from_chars(item.data() + eq + 1, item.data() + item.size(), state);
        if (e1 != std::errc{} || p1 != item.data() + eq || e2 != std::errc{} ||
            p2 != item.data() + item.size() || var < 0 || state < 0)
            throw std::invalid_argument("evidence: expected var=state, found '" + item + "'");
        if (out.count(var)) throw std::invalid_argument("evidence: variable " + std::to_string(var) + " repeated");
        out[var] = state;
        if (stop == text.size()) break;
        start = stop + 1;
    }
    return out;
}

std::vector<BenchmarkRecord> parse_benchmark_csv(const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, 1, "csv: missing header");
    if (lines[0] != kCsvHeader)
        throw ParseError(1, 1, std::string("csv: expected header '") + kCsvHeader + "'");

    std::vector<BenchmarkRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const int row = (int)i + 1;
        if (lines[i].empty()) continue;
        std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 9)
            throw ParseError(row, 1, "csv: expected 9 fields, found " + std::to_string(fields.size()));
        BenchmarkRecord r;
        r.model_id = fields[0];
        r.task = fields[1];
        r.target = parse_csv_int(fields[2], row, "target id");
        try {
            r.evidence = decode_evidence(fields[3]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(row, 1, std::string("csv: ") + e.what());
        }
        r.method = fields[4];
        r.state = parse_csv_int(fields[5], row, "state");
        r.lower = parse_csv_double(fields[6], row, "lower bound");
        r.upper = parse_csv_double(fields[7], row, "upper bound");
        r.time_ms = parse_csv_double(fields[8], row, "time in ms");
        out.push_back(std::move(r));
    }
    return out;
}

std::string serialize_benchmark_csv(const std::vector<BenchmarkRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const BenchmarkRecord& r : records) {
        out += r.model_id;
        out += ',';
        out += r.task;
        out += ',';
        out += std::to_string(r.target);
        out += ',';
        out += encode_evidence(r.evidence);
        out += ',';
        out += r.method;
        out += ',';
        out += std::to_string(r.state);
        out += ',';
        append_number(out, r.lower);
        out += ',';
        append_number(out, r.upper);
        out += ',';
        append_number(out, r.time_ms);
        out += '\n';
    }
    return out;
}

}  // namespace credal
