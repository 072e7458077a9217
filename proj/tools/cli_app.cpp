#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "perron/communicability.hpp"
#include "perron/eigensolver.hpp"
#include "perron/errors.hpp"
#include "perron/io.hpp"
#include "perron/network.hpp"
#include "perron/recommend.hpp"
#include "perron/sensitivity.hpp"

namespace perron::cli {

namespace {

// ---------------------------------------------------------------------------
// Output model

using Cell = std::variant<std::monostate, std::string, double, long long, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::vector<std::pair<std::string, Cell>> fields;
    std::vector<Table> tables;
};

std::string sig6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fixed4(double v) {
    char buf[32];
    const double a = std::abs(v);
    if (v != 0.0 && (a < 1e-4 || a >= 1e6)) {
        std::snprintf(buf, sizeof buf, "%.4e", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.4f", v);
    }
    return buf;
}

std::string text(const Cell& c, bool table_mode) {
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return table_mode ? "-" : "";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, double>) {
                return table_mode ? fixed4(v) : sig6(v);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else {
                return v ? "true" : "false";
            }
        },
        c);
}

nlohmann::ordered_json to_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) {
                    return nullptr;
                }
                return std::stod(sig6(v));
            } else {
                return v;
            }
        },
        c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return out + "\"";
}

void render_json(const Report& r, std::ostream& out) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fields) {
        j[k] = to_json(v);
    }
    for (const auto& t : r.tables) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json o = nlohmann::ordered_json::object();
            for (std::size_t c = 0; c < t.columns.size(); ++c) {
                o[t.columns[c]] = to_json(row[c]);
            }
            arr.push_back(std::move(o));
        }
        j[t.name] = std::move(arr);
    }
    out << j.dump(2) << '\n';
}

void render_csv(const Report& r, std::ostream& out) {
    bool first = true;
    if (!r.fields.empty()) {
        out << "key,value\n";
        for (const auto& [k, v] : r.fields) {
            out << csv_escape(k) << ',' << csv_escape(text(v, false)) << '\n';
        }
        first = false;
    }
    for (const auto& t : r.tables) {
        if (!first) {
            out << '\n';
        }
        first = false;
        out << "# " << t.name << '\n';
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            out << (c ? "," : "") << csv_escape(t.columns[c]);
        }
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << csv_escape(text(row[c], false));
            }
            out << '\n';
        }
    }
}

void render_table(const Report& r, std::ostream& out) {
    std::size_t key_width = 0;
    for (const auto& f : r.fields) {
        key_width = std::max(key_width, f.first.size());
    }
    for (const auto& [k, v] : r.fields) {
        out << k << std::string(key_width - k.size() + 2, ' ') << text(v, true) << '\n';
    }
    for (const auto& t : r.tables) {
        out << '\n' << t.name << '\n';
        std::vector<std::size_t> width(t.columns.size());
        std::vector<std::vector<std::string>> cells;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            width[c] = t.columns[c].size();
        }
        for (const auto& row : t.rows) {
            auto& line = cells.emplace_back();
            for (std::size_t c = 0; c < row.size(); ++c) {
                line.push_back(text(row[c], true));
                width[c] = std::max(width[c], line.back().size());
            }
        }
        auto emit = [&](const std::vector<std::string>& line) {
            for (std::size_t c = 0; c < line.size(); ++c) {
                out << (c ? "  " : "") << std::string(width[c] - line[c].size(), ' ') << line[c];
            }
            out << '\n';
        };
        emit(t.columns);
        for (const auto& line : cells) {
            emit(line);
        }
    }
}

void render(const Report& r, const std::string& format, std::ostream& out) {
    if (format == "json") {
        render_json(r, out);
    } else if (format == "csv") {
        render_csv(r, out);
    } else {
        render_table(r, out);
    }
}

// ---------------------------------------------------------------------------
// Configuration and loading

struct Config {
    std::string input;
    std::string layout = "auto";
    double gamma = 1.0;
    bool directed = false;
    double eps = 0.3;
    int top_k = 5;
    std::uint64_t seed = 42;
    double tol = 1e-10;
    int max_iter = 100000;
    std::string format = "table";
    std::size_t dense_cap = kDefaultDenseCap;
};

void add_common(CLI::App* app, Config& cfg) {
    app->add_option("input", cfg.input, "Edge-list file (relative paths also tried under $PERRON_DATA_DIR)")
        ->required();
    app->add_option("--layout", cfg.layout, "Input layout")
        ->check(CLI::IsMember({"auto", "multiplex", "multilayer"}))
        ->capture_default_str();
    app->add_option("--gamma", cfg.gamma, "Multiplex inter-layer coupling weight")->capture_default_str();
    app->add_flag("--directed", cfg.directed, "Treat edges as directed");
    app->add_option("--epsilon", cfg.eps, "Perturbation size")->capture_default_str();
    app->add_option("--top-k", cfg.top_k, "Rows in ranked outputs")->capture_default_str();
    app->add_option("--seed", cfg.seed, "Seed for random baselines")->capture_default_str();
    app->add_option("--tol", cfg.tol, "Eigensolver tolerance")->capture_default_str();
    app->add_option("--max-iter", cfg.max_iter, "Eigensolver iteration limit")->capture_default_str();
    app->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    app->add_option("--dense-cap", cfg.dense_cap, "Largest NL for dense computations")
        ->capture_default_str();
}

void validate(const Config& cfg) {
    if (!(cfg.gamma >= 0.0)) {
        throw InputError("--gamma must be nonnegative");
    }
    if (!(cfg.eps > 0.0)) {
        throw InputError("--epsilon must be positive");
    }
    if (cfg.top_k < 1) {
        throw InputError("--top-k must be at least 1");
    }
    if (!(cfg.tol > 0.0)) {
        throw InputError("--tol must be positive");
    }
    if (cfg.max_iter < 1) {
        throw InputError("--max-iter must be at least 1");
    }
}

Layout parse_layout(const std::string& s) {
    if (s == "multiplex") {
        return Layout::multiplex;
    }
    if (s == "multilayer") {
        return Layout::multilayer;
    }
    return Layout::automatic;
}

SolverOptions solver(const Config& cfg) {
    SolverOptions o;
    o.tol = cfg.tol;
    o.max_iter = cfg.max_iter;
    return o;
}

Network load(const Config& cfg, std::ostream& err) {
    validate(cfg);
    auto net = load_network(resolve_data_path(cfg.input), parse_layout(cfg.layout), cfg.gamma,
                            cfg.directed);
    if (!is_strongly_connected(net)) {
        err << "warning: the supra graph is not strongly connected; the Perron root may not be "
               "simple and its vectors may not be positive\n";
    }
    return net;
}

void add_edge_columns(std::vector<std::string>& cols, const std::string& prefix = "") {
    for (const char* c : {"i", "j", "k", "l"}) {
        cols.push_back(prefix + c);
    }
}

void push_edge(std::vector<Cell>& row, const EdgeKey& e) {
    row.emplace_back(static_cast<long long>(e.i));
    row.emplace_back(static_cast<long long>(e.j));
    row.emplace_back(static_cast<long long>(e.k));
    row.emplace_back(static_cast<long long>(e.l));
}

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }
Cell opt(const std::optional<bool>& v) { return v ? Cell(*v) : Cell(); }

EdgeKey parse_edge(const std::string& s) {
    EdgeKey e;
    char c1 = 0;
    char c2 = 0;
    char c3 = 0;
    std::istringstream in(s);
    if (!(in >> e.i >> c1 >> e.j >> c2 >> e.k >> c3 >> e.l) || c1 != ',' || c2 != ',' ||
        c3 != ',' || !(in >> std::ws).eof()) {
        throw InputError("edge must be written i,j,k,l: '" + s + "'");
    }
    return e;
}

std::vector<ExperimentEdge> read_edges_file(const std::string& path, Pairing fallback) {
    std::ifstream in(resolve_data_path(path));
    if (!in) {
        throw InputError("cannot open edge file '" + path + "'");
    }
    std::vector<ExperimentEdge> edges;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == '#') {
            continue;
        }
        ExperimentEdge e{{}, fallback};
        std::istringstream all(line);
        std::string tag;
        if (!(all >> e.edge.i >> e.edge.j >> e.edge.k >> e.edge.l)) {
            throw InputError("expected 'i j k l [single|mirror]'", number);
        }
        if (all >> tag) {
            if (tag == "mirror") {
                e.pairing = Pairing::mirrored;
            } else if (tag == "single") {
                e.pairing = Pairing::single;
            } else {
                throw InputError("unknown pairing '" + tag + "'", number);
            }
        }
        if (all >> tag) {
            throw InputError("trailing text after the edge", number);
        }
        edges.push_back(e);
    }
    return edges;
}

// ---------------------------------------------------------------------------
// Commands

Report cmd_spectrum(const Config& cfg, bool shifts, std::ostream& err) {
    const auto net = load(cfg, err);
    const auto so = solver(cfg);
    const auto t = perron(net, so);
    Report r;
    r.fields = {
        {"nodes", static_cast<long long>(nodes(net))},
        {"layers", static_cast<long long>(layers(net))},
        {"directed", directed(net)},
        {"strongly_connected", is_strongly_connected(net)},
        {"rho", t.rho},
        {"kappa", t.kappa},
        {"kappa_D", structured_condition_number(t, Cone::block_diagonal, net)},
        {"kappa_S", structured_condition_number(t, Cone::sparsity, net)},
        {"iterations", static_cast<long long>(t.iterations)},
        {"residual_right", t.residual_right},
        {"residual_left", t.residual_left},
    };
    if (shifts) {
        const auto base = std::make_shared<SupraOperator>(net);
        const double rw = perron(*perturbed(base, cfg.eps, wilkinson(t)), so).rho;
        const double rj = perron(*perturbed(base, cfg.eps, normalized_all_ones(supra_dim(net))), so).rho;
        r.fields.emplace_back("epsilon", cfg.eps);
        r.fields.emplace_back("rho_wilkinson", rw);
        r.fields.emplace_back("shift_wilkinson", rw - t.rho);
        r.fields.emplace_back("rho_all_ones", rj);
        r.fields.emplace_back("shift_all_ones", rj - t.rho);
    }
    return r;
}

Report cmd_communicability(const Config& cfg, bool total, bool hub_authority, std::ostream& err) {
    const auto net = load(cfg, err);
    const auto so = solver(cfg);
    const auto t = perron(net, so);
    const auto c = perron_communicability(t, nodes(net), layers(net));
    const double slack = 1e-12 * std::max(1.0, c.upper_basic);
    const bool bounds = c.lower <= c.c_pn + slack && c.c_pn <= c.upper_cos + slack &&
                        c.upper_cos <= c.upper_basic + slack;
    Report r;
    r.fields = {
        {"rho", t.rho},
        {"c_pn", c.c_pn},
        {"c_pn_marginal", c.c_pn_marginal},
        {"lower_bound", c.lower},
        {"upper_bound_cos", c.upper_cos},
        {"upper_bound", c.upper_basic},
        {"phi", c.phi},
        {"bounds_hold", bounds},
    };
    if (total) {
        const double c0 = total_communicability0(net, cfg.dense_cap);
        r.fields.emplace_back("c0_total", c0);
        r.fields.emplace_back("c0_total_over_kappa_c_pn", total_to_perron_ratio(c0, t, c));
    }
    if (hub_authority) {
        const auto ha = hub_authority_communicability(net, so);
        r.fields.emplace_back("rho_hub", ha.rho_hub);
        r.fields.emplace_back("c_hub", ha.hub);
        r.fields.emplace_back("rho_authority", ha.rho_authority);
        r.fields.emplace_back("c_authority", ha.authority);
    }

    Table lt{"layers", {"layer", "c_y", "c_x"}, {}};
    for (std::size_t l = 0; l < c.c_y.size(); ++l) {
        lt.rows.push_back({static_cast<long long>(l + 1), c.c_y[l], c.c_x[l]});
    }
    std::vector<std::size_t> order(c.versatility.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return c.versatility[a] > c.versatility[b];
    });
    order.resize(std::min(order.size(), static_cast<std::size_t>(cfg.top_k)));
    Table vt{"versatility", {"node", "value"}, {}};
    for (auto i : order) {
        vt.rows.push_back({static_cast<long long>(i + 1), c.versatility[i]});
    }
    r.tables = {std::move(lt), std::move(vt)};
    return r;
}

Report cmd_sensitivity(const Config& cfg, const std::vector<std::string>& entries,
                       bool structured, std::ostream& err) {
    const auto net = load(cfg, err);
    const auto t = perron(net, solver(cfg));
    const int n = nodes(net);
    const auto s = SensitivityMatrix::unstructured(t, n, layers(net));
    const auto sd = SensitivityMatrix::structured(t, net, Cone::block_diagonal);
    const auto ss = SensitivityMatrix::structured(t, net, Cone::sparsity);

    Report r;
    r.fields = {
        {"rho", t.rho},
        {"kappa", s.frobenius_norm()},
        {"kappa_D", sd.frobenius_norm()},
        {"kappa_S", ss.frobenius_norm()},
        {"sum_S", s.total()},
        {"sum_S_D", sd.total()},
        {"sum_S_S", ss.total()},
    };

    if (!entries.empty()) {
        Table et{"entries", {}, {}};
        add_edge_columns(et.columns);
        for (const char* c : {"S", "S_D", "S_S", "S_sym", "spectral_impact"}) {
            et.columns.emplace_back(c);
        }
        for (const auto& text_edge : entries) {
            const auto e = parse_edge(text_edge);
            check_edge(net, e);
            std::vector<Cell> row;
            push_edge(row, e);
            row.emplace_back(s.entry(e));
            row.emplace_back(sd.entry(e));
            row.emplace_back(ss.entry(e));
            row.emplace_back(directed(net) ? Cell() : Cell(symmetric_sensitivity_entry(t, net, e)));
            row.emplace_back(-weight(net, e) * s.entry(e) / t.rho);
            et.rows.push_back(std::move(row));
        }
        r.tables.push_back(std::move(et));
    }

    RankOptions o;
    o.top_k = static_cast<std::size_t>(cfg.top_k);
    o.structured = structured;
    o.exclude_self_loops = false;
    o.require_connected = false;
    auto ranked = [&](const std::string& name, const std::vector<RankedEdge>& list) {
        Table tt{name, {}, {}};
        add_edge_columns(tt.columns);
        tt.columns.emplace_back("score");
        for (const auto& re : list) {
            std::vector<Cell> row;
            push_edge(row, re.edge);
            row.emplace_back(re.score);
            tt.rows.push_back(std::move(row));
        }
        r.tables.push_back(std::move(tt));
    };
    ranked("largest", rank_insertions(net, t, o));
    ranked("smallest_existing", rank_removals(net, t, o));
    return r;
}

struct RankFlags {
    bool structured = false;
    bool recompute = false;
    bool unordered = false;
    bool mirror = false;
    bool allow_disconnect = false;
    std::string candidates = "all";
};

RankOptions rank_options(const Config& cfg, const RankFlags& f) {
    RankOptions o;
    o.top_k = static_cast<std::size_t>(cfg.top_k);
    o.structured = f.structured;
    o.recompute = f.recompute;
    o.unordered = f.unordered;
    o.pairing = f.mirror ? Pairing::mirrored : Pairing::single;
    o.require_connected = !f.allow_disconnect;
    o.eps = cfg.eps;
    o.solver = solver(cfg);
    o.candidates = f.candidates == "absent"     ? CandidateSet::absent
                   : f.candidates == "existing" ? CandidateSet::existing
                                                : CandidateSet::all;
    return o;
}

Report cmd_rank(const Config& cfg, bool add, const RankFlags& f, std::ostream& err) {
    const auto net = load(cfg, err);
    const auto o = rank_options(cfg, f);
    const auto t = perron(net, o.solver);
    const auto list = add ? rank_insertions(net, t, o) : rank_removals(net, t, o);
    Report r;
    r.fields = {{"rho", t.rho}, {"kappa", t.kappa}};
    if (add) {
        r.fields.emplace_back("epsilon", cfg.eps);
    }
    Table tt{add ? "insertions" : "removals", {}, {}};
    add_edge_columns(tt.columns);
    tt.columns.emplace_back("score");
    if (f.recompute) {
        tt.columns.emplace_back("rho_new");
    }
    if (!add) {
        tt.columns.emplace_back("connected_after");
    }
    for (const auto& re : list) {
        std::vector<Cell> row;
        push_edge(row, re.edge);
        row.emplace_back(re.score);
        if (f.recompute) {
            row.push_back(opt(re.rho_after));
        }
        if (!add) {
            row.push_back(opt(re.connected_after));
        }
        tt.rows.push_back(std::move(row));
    }
    r.tables.push_back(std::move(tt));
    return r;
}

struct ExperimentFlags {
    std::string edges_file;
    bool automatic = false;
    std::string mode = "increase";
    RankFlags rank;
    bool no_baseline = false;
    bool baseline_mirror = false;
};

Report cmd_experiment(const Config& cfg, const ExperimentFlags& f, std::ostream& err) {
    const auto net = load(cfg, err);
    const auto so = solver(cfg);
    const auto t = perron(net, so);
    const Mode mode = f.mode == "remove"     ? Mode::remove
                      : f.mode == "decrease" ? Mode::decrease
                                             : Mode::increase;
    const Pairing pairing = f.rank.mirror ? Pairing::mirrored : Pairing::single;

    std::vector<ExperimentEdge> edges;
    if (!f.edges_file.empty()) {
        edges = read_edges_file(f.edges_file, pairing);
    } else {
        auto o = rank_options(cfg, f.rank);
        o.recompute = false;
        if (mode == Mode::increase) {
            for (const auto& re : rank_insertions(net, t, o)) {
                edges.push_back({re.edge, pairing});
            }
        } else {
            if (mode == Mode::decrease) {
                // Only edges heavier than epsilon can be decreased.
                o.top_k = editable_edges(net).size();
                o.require_connected = false;
            }
            for (const auto& re : rank_removals(net, t, o)) {
                if (mode == Mode::decrease && !(cfg.eps < weight(net, re.edge))) {
                    continue;
                }
                edges.push_back({re.edge, pairing});
                if (edges.size() == static_cast<std::size_t>(cfg.top_k)) {
                    break;
                }
            }
        }
    }

    ExperimentOptions eo;
    eo.eps = cfg.eps;
    eo.mode = mode;
    eo.baseline = !f.no_baseline;
    eo.seed = cfg.seed;
    eo.baseline_pairing = f.baseline_mirror ? Pairing::mirrored : Pairing::single;
    eo.solver = so;
    const auto rows = perturbation_experiment(net, t, edges, eo);

    Report r;
    r.fields = {{"rho", t.rho},
                {"kappa", t.kappa},
                {"mode", f.mode},
                {"epsilon", cfg.eps},
                {"seed", static_cast<long long>(cfg.seed)}};
    Table tt{"experiment", {}, {}};
    add_edge_columns(tt.columns);
    for (const char* c : {"score", "rho_new", "rho_first_order"}) {
        tt.columns.emplace_back(c);
    }
    if (mode == Mode::remove) {
        tt.columns.emplace_back("connected_after");
    }
    tt.columns.emplace_back("error");
    if (eo.baseline) {
        add_edge_columns(tt.columns, "random_");
        for (const char* c : {"random_score", "random_rho_new", "random_error"}) {
            tt.columns.emplace_back(c);
        }
    }
    for (const auto& row : rows) {
        std::vector<Cell> cells;
        push_edge(cells, row.edge);
        cells.emplace_back(row.score);
        cells.push_back(opt(row.rho_new));
        cells.emplace_back(row.rho_first_order);
        if (mode == Mode::remove) {
            cells.push_back(opt(row.connected_after));
        }
        cells.emplace_back(row.error);
        if (eo.baseline) {
            if (row.baseline_edge) {
                push_edge(cells, *row.baseline_edge);
                cells.emplace_back(row.baseline_score);
            } else {
                cells.insert(cells.end(), 5, Cell());
            }
            cells.push_back(opt(row.baseline_rho_new));
            cells.emplace_back(row.baseline_error);
        }
        tt.rows.push_back(std::move(cells));
    }
    r.tables.push_back(std::move(tt));
    return r;
}

void cmd_convert(const Config& cfg, const std::string& to, const std::string& output,
                 bool largest, std::ostream& out, std::ostream& err) {
    auto net = load(cfg, err);
    if (largest) {
        const auto* mx = std::get_if<MultiplexNetwork>(&net);
        if (!mx) {
            throw InputError("--largest-component needs a multiplex input");
        }
        auto restricted = largest_component(*mx);
        err << "kept " << restricted.network.nodes() << " of " << mx->nodes() << " nodes\n";
        net = std::move(restricted.network);
    }
    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) {
            throw InputError("cannot write '" + output + "'");
        }
    }
    std::ostream& sink = output.empty() ? out : file;
    if (to == "multilayer") {
        if (const auto* mx = std::get_if<MultiplexNetwork>(&net)) {
            write_multilayer(sink, to_multilayer(*mx));
        } else {
            write_multilayer(sink, std::get<MultilayerNetwork>(net));
        }
    } else {
        const auto* mx = std::get_if<MultiplexNetwork>(&net);
        if (!mx) {
            throw InputError("a general multilayer network cannot be written as a multiplex");
        }
        write_multiplex(sink, *mx);
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Perron-root analysis of multilayer and multiplex networks", "perron"};
    app.require_subcommand(1);
    Config cfg;

    auto* spectrum = app.add_subcommand("spectrum", "Perron root, condition numbers, solver diagnostics");
    add_common(spectrum, cfg);
    bool shifts = false;
    spectrum->add_flag("--shifts", shifts,
                       "Also report the root under epsilon-sized Wilkinson and all-ones perturbations");

    auto* comm = app.add_subcommand("communicability", "Perron communicability, bounds, layer centralities");
    add_common(comm, cfg);
    bool total = false;
    bool hub = false;
    comm->add_flag("--total", total, "Also compute the total communicability from a dense exponential");
    comm->add_flag("--hub-authority", hub, "Also compute hub and authority communicabilities");

    auto* sens = app.add_subcommand("sensitivity", "Sensitivity matrix norms, totals and entries");
    add_common(sens, cfg);
    std::vector<std::string> entries;
    bool sens_structured = false;
    sens->add_option("--entry", entries, "Report entry i,j,k,l (repeatable)");
    sens->add_flag("--structured", sens_structured, "Rank within existing intra-layer edges");

    auto* rank = app.add_subcommand("rank", "Rank edge insertions or removals by sensitivity");
    rank->require_subcommand(1);
    RankFlags rank_flags;
    auto add_rank_flags = [](CLI::App* a, RankFlags& f) {
        a->add_flag("--structured", f.structured, "Only existing intra-layer edges");
        a->add_flag("--unordered", f.unordered, "One entry per node pair");
        a->add_flag("--mirror", f.mirror, "Edits also change the reverse entry");
        a->add_option("--candidates", f.candidates, "Insertion candidates")
            ->check(CLI::IsMember({"all", "absent", "existing"}))
            ->capture_default_str();
        a->add_flag("--allow-disconnect", f.allow_disconnect,
                    "Removals may break strong connectivity");
    };
    auto* rank_add = rank->add_subcommand("add", "Largest sensitivities");
    auto* rank_remove = rank->add_subcommand("remove", "Smallest sensitivities among existing edges");
    for (auto* sub : {rank_add, rank_remove}) {
        add_common(sub, cfg);
        add_rank_flags(sub, rank_flags);
        sub->add_flag("--recompute", rank_flags.recompute, "Re-solve after each edit");
    }

    auto* exp = app.add_subcommand("experiment", "Perturb edges, re-solve, compare with random edges");
    add_common(exp, cfg);
    ExperimentFlags ef;
    auto* edges_opt = exp->add_option("--edges", ef.edges_file, "File of 'i j k l [single|mirror]' lines");
    auto* auto_opt = exp->add_flag("--auto", ef.automatic, "Use the top-k ranked edges for the mode");
    edges_opt->excludes(auto_opt);
    exp->add_option("--mode", ef.mode, "Edit applied to each edge")
        ->check(CLI::IsMember({"increase", "decrease", "remove"}))
        ->capture_default_str();
    add_rank_flags(exp, ef.rank);
    exp->add_flag("--no-baseline", ef.no_baseline, "Skip random baseline edges");
    exp->add_flag("--baseline-mirror", ef.baseline_mirror, "Baseline edits also change the reverse entry");

    auto* conv = app.add_subcommand("convert", "Rewrite a network in another edge-list layout");
    add_common(conv, cfg);
    std::string to = "multilayer";
    std::string output;
    bool largest = false;
    conv->add_option("--to", to, "Target layout")
        ->check(CLI::IsMember({"multiplex", "multilayer"}))
        ->capture_default_str();
    conv->add_option("-o,--output", output, "Output file (default stdout)");
    conv->add_flag("--largest-component", largest, "Keep the largest connected component of a multiplex");

    try {
        std::vector<std::string> reversed_args(args.rbegin(), args.rend());
        app.parse(reversed_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    try {
        Report report;
        if (spectrum->parsed()) {
            report = cmd_spectrum(cfg, shifts, err);
        } else if (comm->parsed()) {
            report = cmd_communicability(cfg, total, hub, err);
        } else if (sens->parsed()) {
            report = cmd_sensitivity(cfg, entries, sens_structured, err);
        } else if (rank->parsed()) {
            report = cmd_rank(cfg, rank_add->parsed(), rank_flags, err);
        } else if (exp->parsed()) {
            if (ef.edges_file.empty() && !ef.automatic) {
                throw InputError("experiment needs --edges FILE or --auto");
            }
            report = cmd_experiment(cfg, ef, err);
        } else {
            cmd_convert(cfg, to, output, largest, out, err);
            return ok;
        }
        render(report, cfg.format, out);
        return ok;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return infeasible;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }
}

} // namespace perron::cli
