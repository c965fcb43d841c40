#ifndef BWTORDER_CLI_HPP
#define BWTORDER_CLI_HPP

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwtorder/alphabet.hpp"
#include "bwtorder/bwt.hpp"
#include "bwtorder/cao.hpp"
#include "bwtorder/errors.hpp"
#include "bwtorder/ordering_search.hpp"
#include "bwtorder/reductions.hpp"
#include "bwtorder/wheeler.hpp"

namespace bwtorder::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, usage = 2, domain = 3 };

/// Raised for command-line problems that are not domain errors (unreadable
/// files, conflicting flags).
class usage_error : public error {
    using error::error;
};

struct Report {
    std::string command;
    std::string digest;
    std::optional<std::size_t> runs;
    std::vector<std::string> ordering;
    std::string method;
    std::uint64_t explored = 0;
    double elapsed_ms = 0;
    std::vector<std::string> flags;
    json payload = json::object();

    json to_json() const {
        json j;
        j["command"] = command;
        j["digest"] = digest;
        j["runs"] = runs ? json(*runs) : json(nullptr);
        j["ordering"] = ordering;
        j["method"] = method;
        j["explored"] = explored;
        j["elapsed_ms"] = elapsed_ms;
        j["flags"] = flags;
        if (!payload.empty()) j["payload"] = payload;
        return j;
    }
};

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Lines without their terminators; a final newline does not open a new line.
inline std::vector<std::string> split_lines(std::string_view bytes) {
    std::vector<std::string> lines;
    std::size_t at = 0;
    while (at < bytes.size()) {
        auto nl = bytes.find('\n', at);
        if (nl == std::string_view::npos) nl = bytes.size();
        std::string line(bytes.substr(at, nl - at));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        at = nl + 1;
    }
    return lines;
}

inline Text ingest_text(std::string_view bytes) {
    if (bytes.empty()) throw parse_error("text is empty");
    if (bytes.find('$') != std::string_view::npos) throw parse_error("'$' is reserved for the sentinel");
    return Text::from_bytes(bytes);
}

inline StringCollection ingest_collection(std::string_view bytes) {
    auto lines = split_lines(bytes);
    if (lines.empty()) throw parse_error("collection is empty");
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].find('$') != std::string::npos) throw parse_error("'$' is reserved for terminators", i + 1);
    return StringCollection::from_lines(lines);
}

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string t; ss >> t;) out.push_back(t);
    return out;
}

inline std::uint32_t parse_index(const std::string& tok, std::size_t line = 0) {
    if (tok.empty() || tok.size() > 9 || tok.find_first_not_of("0123456789") != std::string::npos)
        throw parse_error("expected a non-negative integer, got '" + tok + "'", line);
    return static_cast<std::uint32_t>(std::stoul(tok));
}

inline bool skip(const std::vector<std::string>& toks) { return toks.empty() || toks.front().starts_with('#'); }

}  // namespace detail

/// "u v" per line, 0-based; blank lines and '#' comments are ignored.
inline TspInstance ingest_edgelist(std::string_view bytes) {
    std::vector<TspInstance::Edge> edges;
    const auto lines = split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto toks = detail::tokens(lines[i]);
        if (detail::skip(toks)) continue;
        if (toks.size() != 2) throw parse_error("expected 'u v'", i + 1);
        const auto u = detail::parse_index(toks[0], i + 1);
        const auto v = detail::parse_index(toks[1], i + 1);
        if (u == v) throw parse_error("self-loop on vertex " + toks[0], i + 1);
        for (auto [a, b] : edges)
            if ((a == u && b == v) || (a == v && b == u)) throw parse_error("duplicate edge " + toks[0] + " " + toks[1], i + 1);
        edges.emplace_back(u, v);
    }
    if (edges.empty()) throw parse_error("edge list is empty");
    return TspInstance::from_edges(std::move(edges));
}

/// "u v label" per line with integer labels; the vertex count is one more
/// than the largest id.
inline WheelerGraph ingest_wg_edgelist(std::string_view bytes) {
    WheelerGraph g;
    const auto lines = split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto toks = detail::tokens(lines[i]);
        if (detail::skip(toks)) continue;
        if (toks.size() != 3) throw parse_error("expected 'u v label'", i + 1);
        const auto u = detail::parse_index(toks[0], i + 1);
        const auto v = detail::parse_index(toks[1], i + 1);
        const auto k = detail::parse_index(toks[2], i + 1);
        g.vertex_count = std::max<std::size_t>({g.vertex_count, u + 1u, v + 1u});
        for (const auto& e : g.edges)
            if (e.from == u && e.to == v && e.label == k) throw parse_error("duplicate edge", i + 1);
        g.edges.push_back({u, v, k});
    }
    if (g.edges.empty()) throw parse_error("edge list is empty");
    return g;
}

/// Rows of '0'/'1' characters, optionally separated by spaces.
inline IncidenceGadget ingest_matrix(std::string_view bytes) {
    std::vector<std::vector<int>> rows;
    const auto lines = split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::vector<int> row;
        for (char ch : lines[i]) {
            if (ch == ' ' || ch == '\t') continue;
            if (ch != '0' && ch != '1') throw parse_error("matrix entries must be 0 or 1", i + 1);
            row.push_back(ch - '0');
        }
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size()) throw parse_error("row length differs from the first row", i + 1);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error("matrix is empty");
    return IncidenceGadget::from_matrix(rows);
}

/// Comma-separated symbol names (or "@path" to read them from a file,
/// separated by commas or newlines). The sentinel is prepended when absent.
inline AlphabetOrdering parse_ordering_spec(const std::string& spec, const Alphabet& alphabet) {
    std::string body = spec;
    if (!spec.empty() && spec.front() == '@') {
        body = read_file(spec.substr(1));
        for (auto& ch : body)
            if (ch == '\n') ch = ',';
        while (!body.empty() && (body.back() == ',' || body.back() == '\r')) body.pop_back();
    }
    std::vector<std::string> names;
    std::size_t at = 0;
    while (at <= body.size()) {
        auto comma = body.find(',', at);
        if (comma == std::string::npos) comma = body.size();
        auto tok = body.substr(at, comma - at);
        if (!tok.empty() && tok.back() == '\r') tok.pop_back();
        if (tok.empty()) throw parse_error("empty symbol in ordering");
        names.push_back(std::move(tok));
        at = comma + 1;
    }

    std::vector<Symbol> seq;
    std::vector<char> seen(alphabet.size(), 0);
    if (names.empty() || names.front() != "$") {
        seq.push_back(kSentinel);
        seen[kSentinel] = 1;
    }
    for (const auto& n : names) {
        const auto s = alphabet.find(n);
        if (!s) throw parse_error("unknown symbol '" + n + "' in ordering");
        if (seen[*s]) throw parse_error("duplicate symbol '" + n + "' in ordering");
        seen[*s] = 1;
        seq.push_back(*s);
    }
    for (Symbol s = 0; s < alphabet.size(); ++s)
        if (!seen[s]) throw parse_error("ordering misses symbol '" + alphabet.name(s) + "'");
    try {
        return AlphabetOrdering::from_sequence(alphabet, seq);
    } catch (const invalid_input& e) {
        throw parse_error(e.what());
    }
}

inline std::vector<std::string> names_of(const Alphabet& a, std::span<const Symbol> syms) {
    std::vector<std::string> out;
    out.reserve(syms.size());
    for (auto s : syms) out.push_back(a.name(s));
    return out;
}

/// A symbol sequence as one string when every name is a single character,
/// otherwise as a list of names.
inline json render(const Alphabet& a, std::span<const Symbol> syms) {
    bool compact = true;
    for (auto s : syms) compact = compact && a.name(s).size() == 1;
    if (!compact) return names_of(a, syms);
    std::string out;
    for (auto s : syms) out += a.name(s);
    return out;
}

template <class T>
std::vector<std::string> numbers(const std::vector<T>& v) {
    std::vector<std::string> out;
    for (auto x : v) out.push_back(std::to_string(x));
    return out;
}

inline std::vector<std::uint32_t> parse_index_list(const std::string& spec) {
    std::vector<std::uint32_t> out;
    std::size_t at = 0;
    while (at <= spec.size()) {
        auto comma = spec.find(',', at);
        if (comma == std::string::npos) comma = spec.size();
        out.push_back(detail::parse_index(spec.substr(at, comma - at)));
        at = comma + 1;
    }
    return out;
}

struct Options {
    std::string text;
    std::string input;
    std::string format = "text";
    std::string order;
    std::string mode = "exact";
    std::uint64_t budget = 1000;
    std::uint64_t seed = 0;
    std::optional<std::size_t> ell;
    unsigned threads = 1;
    std::string out;
    bool emit_tuples = false;
    std::uint64_t limit = 0;
    std::uint64_t samples = 0;
    std::string matrix;
    std::string columns;
    std::string sources;
    bool timing = false;
};

namespace detail {

struct Source {
    std::string bytes;
    bool from_file = false;
};

inline Source text_or_input(const Options& o) {
    if (!o.text.empty() && !o.input.empty()) throw usage_error("give either --text or --input, not both");
    if (!o.input.empty()) return {read_file(o.input), true};
    if (!o.text.empty()) return {o.text, false};
    throw usage_error("one of --text or --input is required");
}

/// The instance as a Text: raw bytes, or for the collection format the
/// terminated concatenation.
inline Text load_text(const Options& o, std::string& canonical, bool& terminated) {
    const auto src = text_or_input(o);
    canonical = o.format + '\n' + src.bytes;
    if (o.format == "text") {
        terminated = false;
        return ingest_text(src.bytes);
    }
    if (o.format == "collection") {
        terminated = true;
        return cao_text(ingest_collection(src.bytes));
    }
    throw usage_error("unknown format '" + o.format + "'");
}

inline double ms(std::chrono::nanoseconds d) { return std::chrono::duration<double, std::milli>(d).count(); }

inline IncidenceGadget load_gadget(const Options& o, std::string& canonical, std::optional<TspInstance>& graph) {
    if (!o.matrix.empty() && !o.input.empty()) throw usage_error("give either --input or --matrix, not both");
    if (!o.matrix.empty()) {
        canonical = "matrix\n" + read_file(o.matrix);
        auto gad = ingest_matrix(canonical.substr(7));
        return gad;
    }
    if (o.input.empty()) throw usage_error("one of --input (edge list) or --matrix is required");
    const auto bytes = read_file(o.input);
    canonical = "edgelist\n" + (o.ell ? std::to_string(*o.ell) : std::string("default")) + '\n' + bytes;
    graph = ingest_edgelist(bytes);
    return build_gadget_matrix(*graph, o.ell);
}

inline ColumnOrdering column_order(const Options& o, const IncidenceGadget& gad) {
    if (o.columns.empty()) return ColumnOrdering::identity(gad.cols);
    ColumnOrdering pi{parse_index_list(o.columns)};
    if (pi.order.size() != gad.cols) throw parse_error("--columns must list all " + std::to_string(gad.cols) + " columns");
    std::vector<char> seen(gad.cols, 0);
    for (auto c : pi.order) {
        if (c >= gad.cols || seen[c]) throw parse_error("--columns is not a permutation");
        seen[c] = 1;
    }
    return pi;
}

inline void gadget_flags(const IncidenceGadget& gad, Report& r) {
    if (gad.outside_theorem_regime) r.flags.push_back("outside-theorem-regime");
}

}  // namespace detail

inline Report cmd_bwt(const Options& o, bool with_payload) {
    Report r;
    std::string canonical;
    bool terminated = false;
    const auto text = detail::load_text(o, canonical, terminated);
    const auto ord = o.order.empty() ? AlphabetOrdering::identity(text.alphabet) : parse_ordering_spec(o.order, text.alphabet);
    const auto b = terminated ? build_bwt_terminated(text, ord) : build_bwt(text, ord);
    r.digest = digest(canonical + '\n' + o.order);
    r.runs = b.runs;
    r.ordering = names_of(text.alphabet, ord.sequence());
    r.method = "direct";
    r.explored = 1;
    if (terminated) r.flags.push_back("no-sentinel");
    if (with_payload) r.payload["bwt"] = render(text.alphabet, b.bwt);
    return r;
}

inline Report cmd_invert(const Options& o) {
    const auto src = detail::text_or_input(o);
    std::string body = src.bytes;
    if (src.from_file && !body.empty() && body.back() == '\n') body.pop_back();
    const auto sentinels = std::count(body.begin(), body.end(), '$');
    if (sentinels != 1) throw malformed_bwt("expected exactly one '$', found " + std::to_string(sentinels));
    std::string rest;
    for (char c : body)
        if (c != '$') rest += c;
    const auto alphabet = Alphabet::of_bytes(rest);
    std::vector<Symbol> bwt;
    for (char c : body) bwt.push_back(c == '$' ? kSentinel : *alphabet.find(std::string(1, c)));
    const auto ord = o.order.empty() ? AlphabetOrdering::identity(alphabet) : parse_ordering_spec(o.order, alphabet);
    const auto text = invert_bwt(bwt, alphabet, ord);

    Report r;
    r.digest = digest("invert\n" + body + '\n' + o.order);
    r.runs = count_runs(bwt);
    r.ordering = names_of(alphabet, ord.sequence());
    r.method = "direct";
    r.explored = 1;
    r.payload["text"] = text.str();
    return r;
}

inline Report cmd_search(const Options& o) {
    std::string canonical;
    bool terminated = false;
    const auto text = detail::load_text(o, canonical, terminated);
    if (terminated) throw usage_error("search works on plain texts; use 'cao' for collections");
    SearchResult res;
    if (o.mode == "exact") {
        ExactSearchOptions eo;
        eo.threads = o.threads;
        if (o.limit) eo.symbol_limit = o.limit;
        res = exact_search(text, eo);
    } else if (o.mode == "local") {
        const auto seed = o.order.empty() ? AlphabetOrdering::identity(text.alphabet) : parse_ordering_spec(o.order, text.alphabet);
        res = local_search(text, seed, o.budget, o.seed);
    } else {
        throw usage_error("--mode must be exact or local");
    }
    Report r;
    r.digest = digest(canonical + '\n' + o.mode + '\n' + o.order + '\n' + std::to_string(o.budget) + '\n' + std::to_string(o.seed));
    r.runs = res.runs;
    r.ordering = names_of(text.alphabet, res.ordering.sequence());
    r.method = to_string(res.method);
    r.explored = res.explored;
    if (o.timing) r.elapsed_ms = detail::ms(res.elapsed);
    return r;
}

inline Report cmd_cao(const Options& o) {
    if (o.input.empty()) throw usage_error("cao needs --input");
    const auto bytes = read_file(o.input);
    const auto c = ingest_collection(bytes);
    const auto start = std::chrono::steady_clock::now();
    const auto sol = solve_cao(c);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const auto text = cao_text(c);

    Report r;
    r.digest = digest("collection\n" + bytes);
    r.runs = sol.runs;
    r.ordering = names_of(text.alphabet, cao_ordering(text, sol.order).sequence());
    r.method = "cao";
    r.explored = sol.blocks.blocks.size();
    r.flags.push_back("no-sentinel");
    if (o.timing) r.elapsed_ms = detail::ms(elapsed);
    r.payload["strings"] = c.size();
    r.payload["total_length"] = c.total_length();
    if (o.emit_tuples) {
        auto tuple_text = [&](const std::vector<Label>& t) {
            std::string s = "(";
            for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + to_string(t[k], c);
            return s + ")";
        };
        json tuples = json::array(), arranged = json::array();
        for (const auto& t : sol.blocks.tuples()) tuples.push_back(tuple_text(t));
        for (const auto& t : sol.arrangement.tuples) arranged.push_back(tuple_text(t));
        r.payload["tuples"] = tuples;
        r.payload["arranged"] = arranged;
        r.payload["matches"] = sol.arrangement.matches;
    }
    return r;
}

inline Report cmd_gadget(const std::string& sub, const Options& o) {
    std::string canonical;
    std::optional<TspInstance> graph;
    const auto gad = detail::load_gadget(o, canonical, graph);
    Report r;
    r.digest = digest(sub + '\n' + canonical + '\n' + o.columns);
    detail::gadget_flags(gad, r);
    r.payload["rows"] = gad.rows;
    r.payload["cols"] = gad.cols;
    if (gad.has_end_columns) {
        r.payload["m"] = gad.edge_rows;
        r.payload["ell"] = gad.ell;
    }

    if (sub == "build") {
        const auto pi = detail::column_order(o, gad);
        const auto cost = linearize_and_cost(gad, pi);
        json rows = json::array();
        for (std::size_t i = 0; i < gad.rows; ++i) {
            std::string row;
            for (std::size_t j = 0; j < gad.cols; ++j) row += static_cast<char>('0' + gad.at(i, j));
            rows.push_back(row);
        }
        r.runs = cost.runs;
        r.ordering = numbers(pi.order);
        r.method = "direct";
        r.explored = 1;
        r.payload["matrix"] = rows;
        if (gad.has_end_columns) {
            r.payload["m1"] = cost.m1;
            r.payload["tsp_cost"] = cost.tsp_cost;
            r.payload["ends_in_place"] = cost.ends_in_place;
            if (cost.ends_in_place) r.payload["closed_form"] = cost.closed_form;
        }
        return r;
    }
    if (sub == "ao-string") {
        const auto ao = build_ao_string(gad);
        const auto pi = detail::column_order(o, gad);
        const auto can = canonical_alphabet_order(gad, ao, pi);
        json subs = json::array();
        for (std::size_t k = 0; k < ao.substrings(); ++k) {
            const std::size_t end = k + 1 < ao.substrings() ? ao.starts[k + 1] : ao.text.size();
            std::string s;
            for (std::size_t p = ao.starts[k]; p < end; ++p) s += (p > ao.starts[k] ? " " : "") + ao.text.alphabet.name(ao.text.symbols[p]);
            subs.push_back(s);
        }
        r.runs = can.ao_runs;
        r.ordering = names_of(ao.text.alphabet, can.ordering.sequence());
        r.method = "canonical";
        r.explored = 1;
        r.flags.push_back("no-sentinel");
        r.payload["sigma"] = ao.sigma();
        r.payload["length"] = ao.text.size();
        r.payload["substrings"] = subs;
        r.payload["co_runs"] = can.co_runs;
        r.payload["r0"] = can.r0;
        return r;
    }
    if (sub == "verify") {
        if (!graph) throw usage_error("verify needs a graph edge list");
        const auto rep = verify_l_reduction(*graph, all_column_orders(gad.cols), o.ell, o.limit ? o.limit : 6);
        r.runs = rep.opt_ao;
        r.method = "exhaustive";
        r.explored = rep.phase1_checked + rep.phase2_checked;
        if (!rep.ok()) r.flags.push_back("violations");
        r.payload["opt_tsp"] = rep.opt_tsp;
        r.payload["opt_co"] = rep.opt_co;
        r.payload["opt_ao"] = rep.opt_ao;
        r.payload["m1_star"] = rep.m1_star;
        r.payload["alpha"] = rep.alpha;
        r.payload["condition_i"] = rep.condition_i;
        r.payload["beta_phase1"] = rep.beta_phase1;
        r.payload["condition_ii_phase1"] = rep.condition_ii_phase1;
        r.payload["beta_phase2"] = rep.beta_phase2;
        r.payload["condition_ii_phase2"] = rep.condition_ii_phase2;
        r.payload["violations"] = rep.violations;
        return r;
    }
    throw usage_error("unknown gadget command '" + sub + "'");
}

inline Report cmd_wheeler(const std::string& sub, const Options& o) {
    if (o.input.empty()) throw usage_error("wheeler commands need --input");
    const auto bytes = read_file(o.input);
    const auto g = ingest_wg_edgelist(bytes);
    Report r;
    r.digest = digest(sub + '\n' + bytes + '\n' + o.order + '\n' + o.sources);
    r.payload["vertices"] = g.vertex_count;
    r.payload["sources"] = numbers(g.sources());

    if (sub == "validate") {
        if (o.order.empty()) throw usage_error("validate needs --order with a vertex list");
        ProperOrdering phi{parse_index_list(o.order)};
        const auto check = validate(g, phi);
        r.ordering = numbers(phi.order);
        r.method = "direct";
        r.explored = 1;
        r.payload["valid"] = check.ok;
        if (check.violation) r.payload["violation"] = check.violation->message;
        return r;
    }
    if (sub == "bwt") {
        const auto sources = o.sources.empty() ? g.sources() : parse_index_list(o.sources);
        const auto phi = proper_order(g, sources);
        const auto b = wg_bwt(g, phi);
        r.runs = b.runs;
        r.ordering = numbers(phi.order);
        r.method = "direct";
        r.explored = 1;
        r.payload["labels"] = numbers(b.labels);
        return r;
    }
    if (sub == "so") {
        const auto start = std::chrono::steady_clock::now();
        const auto res = so_brute_force(g, o.limit ? o.limit : 40320, o.threads);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        r.runs = res.runs;
        r.ordering = numbers(res.source_order);
        r.method = "exact";
        r.explored = res.explored;
        if (!res.siblings_optimized) r.flags.push_back("siblings-in-insertion-order");
        if (o.timing) r.elapsed_ms = detail::ms(elapsed);
        json all = json::array();
        for (const auto& s : res.optimal_orders) all.push_back(numbers(s));
        r.payload["optimal_orders"] = all;
        return r;
    }
    throw usage_error("unknown wheeler command '" + sub + "'");
}

inline Report cmd_ratio(const Options& o) {
    std::string canonical;
    bool terminated = false;
    const auto text = detail::load_text(o, canonical, terminated);
    if (terminated) throw usage_error("ratio works on plain texts");
    const auto mode = o.samples ? RatioMode::sampled(o.samples, o.seed) : RatioMode::exhaustive_mode(o.limit ? o.limit : 10);
    const auto start = std::chrono::steady_clock::now();
    const auto rep = ratio_report(text, mode);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    Report r;
    r.digest = digest(canonical + '\n' + std::to_string(o.samples) + '\n' + std::to_string(o.seed));
    r.runs = rep.min_runs;
    r.method = o.samples ? "sample" : "exact";
    r.explored = rep.evaluated;
    if (o.timing) r.elapsed_ms = detail::ms(elapsed);
    r.payload["min_runs"] = rep.min_runs;
    r.payload["max_runs"] = rep.max_runs;
    r.payload["ratio"] = std::to_string(rep.ratio_num) + "/" + std::to_string(rep.ratio_den);
    r.payload["log2n_squared"] = rep.log2n_reference;
    r.payload["text_runs"] = rep.text_runs;
    r.payload["twice_text_runs_plus_2"] = rep.twice_text_runs_bound;
    return r;
}

/// Parses argv, runs one command and writes its report. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"BWT alphabet-ordering toolkit"};
    app.require_subcommand(1);
    Options o;

    auto text_opts = [&](CLI::App* c) {
        c->add_option("--text", o.text, "input text given inline");
        c->add_option("--input", o.input, "input file");
        c->add_option("--format", o.format, "text or collection")->check(CLI::IsMember({"text", "collection"}));
    };
    auto common = [&](CLI::App* c) {
        c->add_option("--out", o.out, "write the report here instead of stdout");
        c->add_flag("--timing", o.timing, "report wall time instead of 0");
    };

    auto* bwt = app.add_subcommand("bwt", "transform and report runs");
    text_opts(bwt);
    bwt->add_option("--order", o.order, "symbol order, comma separated or @file");
    common(bwt);
    auto* runs = app.add_subcommand("runs", "report runs only");
    text_opts(runs);
    runs->add_option("--order", o.order, "symbol order");
    common(runs);
    auto* inv = app.add_subcommand("invert", "invert a BWT containing one '$'");
    inv->add_option("--text", o.text);
    inv->add_option("--input", o.input);
    inv->add_option("--order", o.order);
    common(inv);
    auto* search = app.add_subcommand("search", "minimise runs over alphabet orderings");
    text_opts(search);
    search->add_option("--mode", o.mode)->check(CLI::IsMember({"exact", "local"}));
    search->add_option("--order", o.order, "seed ordering for local search");
    search->add_option("--budget", o.budget);
    search->add_option("--seed", o.seed);
    search->add_option("--threads", o.threads);
    search->add_option("--limit", o.limit, "permutable-symbol limit for exact search");
    common(search);
    auto* cao = app.add_subcommand("cao", "optimal terminator ordering of a collection");
    cao->add_option("--input", o.input, "one string per line")->required();
    cao->add_flag("--emit-tuples", o.emit_tuples);
    common(cao);

    auto* gadget = app.add_subcommand("gadget", "reduction gadgets");
    gadget->require_subcommand(1);
    std::vector<CLI::App*> gadget_subs;
    for (const char* name : {"build", "ao-string", "verify"}) {
        auto* s = gadget->add_subcommand(name);
        s->add_option("--input", o.input, "edge list, one 'u v' per line");
        s->add_option("--matrix", o.matrix, "0/1 matrix instead of a graph");
        s->add_option("--ell", o.ell);
        s->add_option("--columns", o.columns, "column order, comma separated");
        s->add_option("--limit", o.limit, "largest vertex count for exact optima");
        common(s);
        gadget_subs.push_back(s);
    }

    auto* wheeler = app.add_subcommand("wheeler", "Wheeler graphs");
    wheeler->require_subcommand(1);
    std::vector<CLI::App*> wheeler_subs;
    for (const char* name : {"validate", "bwt", "so"}) {
        auto* s = wheeler->add_subcommand(name);
        s->add_option("--input", o.input, "edge list, one 'u v label' per line");
        s->add_option("--order", o.order, "vertex order for validate");
        s->add_option("--sources", o.sources, "source order for bwt");
        s->add_option("--limit", o.limit);
        s->add_option("--threads", o.threads);
        common(s);
        wheeler_subs.push_back(s);
    }

    auto* ratio = app.add_subcommand("ratio", "spread of runs across orderings");
    text_opts(ratio);
    ratio->add_option("--samples", o.samples, "sample this many orderings instead of enumerating");
    ratio->add_option("--seed", o.seed);
    ratio->add_option("--limit", o.limit);
    common(ratio);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::usage;
    }

    try {
        Report r;
        if (bwt->parsed()) {
            r = cmd_bwt(o, true);
            r.command = "bwt";
        } else if (runs->parsed()) {
            r = cmd_bwt(o, false);
            r.command = "runs";
        } else if (inv->parsed()) {
            r = cmd_invert(o);
            r.command = "invert";
        } else if (search->parsed()) {
            r = cmd_search(o);
            r.command = "search";
        } else if (cao->parsed()) {
            r = cmd_cao(o);
            r.command = "cao";
        } else if (ratio->parsed()) {
            r = cmd_ratio(o);
            r.command = "ratio";
        } else {
            for (auto* s : gadget_subs)
                if (s->parsed()) {
                    r = cmd_gadget(s->get_name(), o);
                    r.command = "gadget " + s->get_name();
                }
            for (auto* s : wheeler_subs)
                if (s->parsed()) {
                    r = cmd_wheeler(s->get_name(), o);
                    r.command = "wheeler " + s->get_name();
                }
        }
        const auto doc = r.to_json().dump(2) + "\n";
        if (o.out.empty()) {
            out << doc;
        } else {
            std::ofstream f(o.out, std::ios::binary);
            if (!f) throw usage_error("cannot write '" + o.out + "'");
            f << doc;
        }
        return ExitCode::ok;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::usage;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::usage;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::domain;
    }
}

}  // namespace bwtorder::cli

#endif
