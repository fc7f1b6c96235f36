#include "sgdnet/errors.hpp"
#include "sgdnet/graph.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace sgdnet {

namespace {

std::string read_gzip(const std::filesystem::path& path) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f) throw DataError("cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(f);
    if (failed) throw DataError("gzip decode failed for " + path.string());
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line, EdgeFormat format) {
    std::vector<std::string_view> out;
    if (format == EdgeFormat::csv_rating) {
        std::size_t start = 0;
        for (;;) {
            const auto pos = line.find(',', start);
            out.push_back(trim(line.substr(start, pos - start)));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return out;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

class IdMapper {
public:
    NodeId map(std::string_view raw) {
        auto [it, inserted] = ids_.try_emplace(std::string(raw), static_cast<NodeId>(raw_.size()));
        if (inserted) raw_.emplace_back(raw);
        return it->second;
    }
    std::vector<std::string> take() { return std::move(raw_); }

private:
    std::unordered_map<std::string, NodeId> ids_;
    std::vector<std::string> raw_;
};

bool looks_like_header(const std::vector<std::string_view>& fields) {
    double v = 0.0;
    return !fields.empty() && !parse_double(fields[0], v);
}

}  // namespace

EdgeFormat parse_edge_format(const std::string& name) {
    if (name == "tsv-sign" || name == "tsv") return EdgeFormat::tsv_sign;
    if (name == "csv-rating" || name == "csv") return EdgeFormat::csv_rating;
    throw ArgumentError("unknown edge format '" + name + "' (expected tsv-sign or csv-rating)");
}

std::string to_string(EdgeFormat f) {
    return f == EdgeFormat::tsv_sign ? "tsv-sign" : "csv-rating";
}

EdgeList parse_edge_list(std::istream& in, EdgeFormat format) {
    IdMapper ids;
    std::vector<SignedEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#' || body.front() == '%') continue;
        const auto fields = split_fields(body, format);
        if (format == EdgeFormat::csv_rating && header_allowed && looks_like_header(fields)) {
            header_allowed = false;
            continue;
        }
        header_allowed = false;

        // A trailing fourth column (timestamp) is ignored in both formats.
        const bool arity_ok = fields.size() == 3 || fields.size() == 4;
        if (!arity_ok) {
            throw ParseError("expected " + std::string(format == EdgeFormat::csv_rating
                                                           ? "SOURCE,TARGET,RATING[,TIME]"
                                                           : "src<TAB>dst<TAB>sign"),
                             lineno);
        }
        if (fields[0].empty() || fields[1].empty()) throw ParseError("empty node id", lineno);

        double value = 0.0;
        if (!parse_double(fields[2], value)) {
            throw ParseError("non-numeric sign/rating '" + std::string(fields[2]) + "'", lineno);
        }
        Sign sign = Sign::positive;
        if (format == EdgeFormat::tsv_sign) {
            if (value != 1.0 && value != -1.0) {
                throw ParseError("sign must be 1 or -1", lineno);
            }
            sign = value > 0 ? Sign::positive : Sign::negative;
        } else {
            if (value == 0.0) {
                throw DataError("zero rating at line " + std::to_string(lineno) +
                                " has no sign");
            }
            sign = value > 0 ? Sign::positive : Sign::negative;
        }
        const NodeId src = ids.map(fields[0]);
        const NodeId dst = ids.map(fields[1]);
        edges.push_back({src, dst, sign});
    }
    if (edges.empty()) throw DataError("edge list contains no edges");

    EdgeList out;
    out.raw_ids = ids.take();
    out.num_nodes = static_cast<NodeId>(out.raw_ids.size());
    // Building the graph applies the keep-last rule; reuse it so both paths agree.
    SignedDigraph g(std::move(edges), out.num_nodes);
    out.edges.assign(g.edges().begin(), g.edges().end());
    return out;
}

EdgeList load_edge_list(const std::filesystem::path& path, EdgeFormat format) {
    if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
    if (path.extension() == ".gz") {
        std::istringstream in(read_gzip(path));
        return parse_edge_list(in, format);
    }
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_edge_list(in, format);
}

void write_edges_tsv(const std::filesystem::path& path, std::span<const SignedEdge> edges) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& e : edges) out << e.src << '\t' << e.dst << '\t' << to_int(e.sign) << '\n';
    if (!out) throw DataError("write failed for " + path.string());
}

std::vector<SignedEdge> read_edges_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<SignedEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto f = split_fields(body, EdgeFormat::tsv_sign);
        double s = 0.0;
        unsigned long src = 0;
        unsigned long dst = 0;
        if (f.size() != 3 || std::from_chars(f[0].data(), f[0].data() + f[0].size(), src).ec != std::errc() ||
            std::from_chars(f[1].data(), f[1].data() + f[1].size(), dst).ec != std::errc() ||
            !parse_double(f[2], s) || (s != 1.0 && s != -1.0)) {
            throw ParseError("bad dense edge line in " + path.string(), lineno);
        }
        edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst),
                         s > 0 ? Sign::positive : Sign::negative});
    }
    return edges;
}

void write_id_map(const std::filesystem::path& path, std::span<const std::string> raw_ids) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (std::size_t i = 0; i < raw_ids.size(); ++i) out << raw_ids[i] << '\t' << i << '\n';
}

std::vector<std::string> read_id_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::string> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("id map line without tab", lineno);
        std::size_t dense = 0;
        const std::string_view d = trim(std::string_view(line).substr(tab + 1));
        if (std::from_chars(d.data(), d.data() + d.size(), dense).ec != std::errc() ||
            dense != raw.size()) {
            throw ParseError("id map dense ids must be 0..n-1 in order", lineno);
        }
        raw.push_back(line.substr(0, tab));
    }
    return raw;
}

}  // namespace sgdnet
