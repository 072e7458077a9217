#include "perron/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "perron/errors.hpp"

namespace perron {

namespace {

struct Header {
    int nodes;
    int layers;
};

struct Line {
    int number;
    std::vector<std::string> fields;
};

std::vector<std::string> split(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) {
        out.push_back(tok);
    }
    return out;
}

// Content lines only: comments and blank lines dropped.
std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> out;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto fields = split(raw);
        if (fields.empty() || fields.front().front() == '#') {
            continue;
        }
        out.push_back({number, std::move(fields)});
    }
    return out;
}

int parse_int(const std::string& s, int line) {
    int v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw InputError("expected an integer, got '" + s + "'", line);
    }
    return v;
}

double parse_double(const std::string& s, int line) {
    // strtod accepts the same decimal and exponent forms as the data files use.
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty()) {
        throw InputError("expected a number, got '" + s + "'", line);
    }
    return v;
}

Header parse_header(const std::vector<Line>& lines) {
    if (lines.empty()) {
        throw InputError("missing header line \"N L\"");
    }
    const auto& h = lines.front();
    if (h.fields.size() != 2) {
        throw InputError("header must be \"N L\"", h.number);
    }
    Header out{parse_int(h.fields[0], h.number), parse_int(h.fields[1], h.number)};
    if (out.nodes <= 0 || out.layers <= 0) {
        throw InputError("N and L must be positive", h.number);
    }
    return out;
}

void check_field_count(const Line& line, std::size_t expected) {
    if (line.fields.size() != expected) {
        throw InputError("expected " + std::to_string(expected) + " fields, got " +
                             std::to_string(line.fields.size()),
                         line.number);
    }
}

struct ParsedEdge {
    WeightedEdge edge;
    int line;
};

// Validates edges line by line so errors point at the offending line.
void validate(const Header& h, const std::vector<ParsedEdge>& edges, bool directed,
              bool multiplex) {
    std::set<EdgeKey> seen;
    for (const auto& [edge, line] : edges) {
        const auto& e = edge.key;
        if (e.i < 1 || e.i > h.nodes || e.j < 1 || e.j > h.nodes) {
            throw InputError("node id out of range (N = " + std::to_string(h.nodes) + ")", line);
        }
        if (e.k < 1 || e.k > h.layers || e.l < 1 || e.l > h.layers) {
            throw InputError("layer id out of range (L = " + std::to_string(h.layers) + ")", line);
        }
        if (!(edge.weight > 0.0)) {
            throw InputError("weight must be positive", line);
        }
        if (multiplex && e.i == e.j) {
            throw InputError("self-loop not allowed in a multiplex", line);
        }
        if (!seen.insert(e).second || (!directed && !is_self_loop(e) && seen.count(reversed(e)))) {
            throw InputError("duplicate edge", line);
        }
    }
}

std::vector<WeightedEdge> strip(const std::vector<ParsedEdge>& edges) {
    std::vector<WeightedEdge> out;
    out.reserve(edges.size());
    for (const auto& e : edges) {
        out.push_back(e.edge);
    }
    return out;
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    return in;
}

std::string format_weight(double w) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
    return std::string(buf, ptr);
}

} // namespace

MultiplexNetwork read_multiplex(std::istream& in, double gamma, bool directed) {
    const auto lines = read_lines(in);
    const auto header = parse_header(lines);
    std::vector<ParsedEdge> edges;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto& line = lines[n];
        check_field_count(line, 4);
        const int layer = parse_int(line.fields[0], line.number);
        edges.push_back({{{parse_int(line.fields[1], line.number),
                           parse_int(line.fields[2], line.number), layer, layer},
                          parse_double(line.fields[3], line.number)},
                         line.number});
    }
    validate(header, edges, directed, true);
    return MultiplexNetwork(header.nodes, header.layers, strip(edges), gamma, directed);
}

MultilayerNetwork read_multilayer(std::istream& in, bool directed) {
    const auto lines = read_lines(in);
    const auto header = parse_header(lines);
    std::vector<ParsedEdge> edges;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto& line = lines[n];
        check_field_count(line, 5);
        const int k = parse_int(line.fields[0], line.number);
        const int i = parse_int(line.fields[1], line.number);
        const int l = parse_int(line.fields[2], line.number);
        const int j = parse_int(line.fields[3], line.number);
        edges.push_back({{{i, j, k, l}, parse_double(line.fields[4], line.number)}, line.number});
    }
    validate(header, edges, directed, false);
    return MultilayerNetwork(header.nodes, header.layers, strip(edges), directed);
}

MultiplexNetwork load_multiplex(const std::filesystem::path& path, double gamma, bool directed) {
    auto in = open(path);
    return read_multiplex(in, gamma, directed);
}

MultilayerNetwork load_multilayer(const std::filesystem::path& path, bool directed) {
    auto in = open(path);
    return read_multilayer(in, directed);
}

Network load_network(const std::filesystem::path& path, Layout layout, double gamma,
                     bool directed) {
    if (layout == Layout::automatic) {
        auto in = open(path);
        const auto lines = read_lines(in);
        layout = (lines.size() > 1 && lines[1].fields.size() == 5) ? Layout::multilayer
                                                                    : Layout::multiplex;
    }
    if (layout == Layout::multilayer) {
        return load_multilayer(path, directed);
    }
    return load_multiplex(path, gamma, directed);
}

void write_multiplex(std::ostream& out, const MultiplexNetwork& net) {
    out << net.nodes() << ' ' << net.layers() << '\n';
    net.for_each_intra_entry([&](const EdgeKey& e, double w) {
        if (!net.directed() && e.i > e.j) {
            return;
        }
        out << e.k << ' ' << e.i << ' ' << e.j << ' ' << format_weight(w) << '\n';
    });
}

void write_multilayer(std::ostream& out, const MultilayerNetwork& net) {
    out << net.nodes() << ' ' << net.layers() << '\n';
    const int n = net.nodes();
    net.for_each_entry([&](const EdgeKey& e, double w) {
        const auto p = supra_position(n, e);
        if (!net.directed() && p.row > p.col) {
            return;
        }
        out << e.k << ' ' << e.i << ' ' << e.l << ' ' << e.j << ' ' << format_weight(w) << '\n';
    });
}

std::filesystem::path resolve_data_path(const std::filesystem::path& path) {
    if (std::filesystem::exists(path) || path.is_absolute()) {
        return path;
    }
    if (const char* root = std::getenv("PERRON_DATA_DIR")) {
        const auto candidate = std::filesystem::path(root) / path;
        if (std::filesystem::exists(candidate)) {
            return candidate;
        }
    }
    return path;
}

} // namespace perron
