#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hsys/json_io.hpp"

using namespace hsys;
using hsys::io::json;

namespace {

enum Exit { Ok = 0, Precondition = 2, Cap = 3, Usage = 64 };

struct Globals {
    std::string input = "-";
    std::string output = "-";
    std::uint64_t cap = kDefaultCap;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

json read_json(const std::string& path)
{
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot open " + path);
        buf << in.rdbuf();
    }
    try {
        auto j = json::parse(buf.str());
        // Accept the output envelope of another subcommand.
        if (j.is_object() && j.contains("status") && j.contains("result")) return j.at("result");
        return j;
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

void write_json(const std::string& path, const json& j)
{
    std::string text = j.dump(2) + "\n";
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
}

json ok(json result)
{
    return {{"status", "ok"}, {"result", std::move(result)}};
}

// Reads a JSON document from a file path or takes the literal text when the
// argument starts with '{' or '['.
json file_or_literal(const std::string& arg)
{
    if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return json::parse(arg);
    return read_json(arg);
}

json cmd_snf(const Globals& g)
{
    auto a = io::matrix_from_json(read_json(g.input));
    auto d = smith_normal_form(a);
    return io::to_json(d);
}

json cmd_dets(const Globals& g)
{
    auto a = io::matrix_from_json(read_json(g.input));
    auto d = smith_normal_form(a);
    json dets = json::array(), prods = json::array();
    Int prod = 1;
    for (std::size_t i = 0; i < d.diag.size(); ++i) {
        dets.push_back(io::to_json(determinantal_divisor(a, i + 1)));
        prod *= d.diag[i];
        prods.push_back(io::to_json(prod));
    }
    return {{"rank", d.diag.size()}, {"determinantal_divisors", dets}, {"invariant_factor_products", prods}};
}

json cmd_solve(const Globals& g, bool list)
{
    auto sys = io::system_from_json(read_json(g.input));
    json out = {{"count", io::to_json(count_solutions(sys))}};
    if (list) {
        auto sol = enumerate_solutions(sys, {}, Strategy::Automatic, g.cap);
        json arr = json::array();
        for (const auto& x : sol.solutions) arr.push_back(io::tuple_json(x));
        out["solutions"] = arr;
    }
    return out;
}

json cmd_project(const Globals& g, std::size_t var)
{
    auto sys = io::system_from_json(read_json(g.input));
    if (var < 1 || var > sys.m()) throw InvalidInput("--var must lie in [1, m]");
    auto sol = enumerate_solutions(sys, {}, Strategy::Automatic, g.cap);
    json vals = json::array();
    for (const auto& v : project_solutions(sol, var - 1)) vals.push_back(io::tuple_json(v));
    return {{"var", var}, {"size", vals.size()}, {"values", vals}};
}

VerifyOptions verify_options(const Globals& g)
{
    VerifyOptions v;
    v.cap = g.cap;
    v.seed = g.seed;
    return v;
}

json cmd_pipeline_run(const Globals& g, bool constancy)
{
    auto sys = io::system_from_json(read_json(g.input));
    PipelineOptions opt;
    opt.verify = verify_options(g);
    opt.constancy = constancy;
    return io::to_json(run_full_pipeline(sys, opt));
}

json cmd_pipeline_verify(const Globals& g)
{
    auto trace = io::trace_from_json(read_json(g.input));
    json stages = json::array();
    bool all = true, exhaustive = true;
    Int total = 1;
    for (std::size_t i = 1; i < trace.stages.size(); ++i) {
        const auto& s = trace.stages[i];
        if (!s.map) throw InvalidInput("stage " + std::to_string(i) + " has no map");
        auto rep = verify_equivalence(*s.map, trace.stages[i - 1].system, s.system, verify_options(g));
        all = all && rep.ok();
        exhaustive = exhaustive && rep.exhaustive;
        total *= s.map->mu;
        json r = io::to_json(rep);
        r["label"] = s.label;
        stages.push_back(r);
    }
    return {{"ok", all}, {"certified", exhaustive ? "exhaustive" : "sampled"}, {"total_mu", io::to_json(total)},
            {"stages", stages}};
}

json cmd_represent_build(const Globals& g, const std::string& annihilator)
{
    auto sys = io::system_from_json(read_json(g.input));
    if (annihilator.empty()) return io::to_json(build_K_from_circular(sys, g.cap));
    return io::to_json(build_K_from_circular(sys, io::matrix_from_json(file_or_literal(annihilator)), g.cap));
}

json cmd_represent_verify(const Globals& g, bool weak, bool tolerance)
{
    auto cert = io::certificate_from_json(read_json(g.input));
    RpOptions opt;
    opt.strong = !weak;
    opt.tolerance = tolerance;
    opt.cap = g.cap;
    return io::to_json(verify_rp_properties(cert, opt));
}

json cmd_represent_transfer(const Globals& g, const std::string& map_arg, const std::string& target_arg)
{
    auto cert = io::certificate_from_json(read_json(g.input));
    auto map = io::map_from_json(file_or_literal(map_arg));
    auto target = io::system_from_json(file_or_literal(target_arg));
    return io::to_json(transfer(cert, map, target));
}

json cmd_represent_remove(const Globals& g, const std::string& domains_arg, const std::string& eprime_arg)
{
    auto cert = io::certificate_from_json(read_json(g.input));
    auto X = io::domains_from_json(domains_arg.empty() ? json(nullptr) : file_or_literal(domains_arg), cert.m());
    std::vector<std::size_t> eprime;
    std::string source;
    if (eprime_arg.empty()) {
        auto kx = restrict_certificate(cert, X);
        eprime = greedy_edge_cover(cert.H, kx.graph, g.cap);
        source = "greedy";
    } else {
        for (const auto& e : file_or_literal(eprime_arg)) eprime.push_back(e.get<std::size_t>());
        source = "given";
    }
    auto res = removal_deletion(cert, X, eprime, g.cap);
    json out = io::to_json(res);
    out["eprime_source"] = source;
    out["eprime"] = eprime;
    return out;
}

Permutation perm_arg(const std::string& s)
{
    if (!s.empty() && (s[0] == '{' || s[0] == '[')) return io::permutation_from_json(json::parse(s));
    return Permutation::parse(s);
}

// Pattern and text from flags, or {"pattern":..,"text":..} on the input.
std::pair<Permutation, Permutation> perm_pair(const Globals& g, const std::string& pattern, const std::string& text)
{
    if (!pattern.empty() && !text.empty()) return {perm_arg(pattern), perm_arg(text)};
    auto j = read_json(g.input);
    if (!j.contains("pattern") || !j.contains("text")) throw InvalidInput("expected fields 'pattern' and 'text'");
    return {io::permutation_from_json(j.at("pattern")), io::permutation_from_json(j.at("text"))};
}

json cmd_perm_occurrences(const Globals& g, const std::string& pattern, const std::string& text)
{
    auto [tau, sigma] = perm_pair(g, pattern, text);
    auto occ = occurrences(tau, sigma, g.cap);
    return {{"pattern", io::to_json(tau)}, {"text", io::to_json(sigma)}, {"count", occ.size()}, {"occurrences", occ}};
}

json cmd_perm_check(const Globals& g, const std::string& pattern, const std::string& text, bool deletion)
{
    auto [tau, sigma] = perm_pair(g, pattern, text);
    json out = io::to_json(copies_match_occurrences(tau, sigma, g.cap));
    if (deletion) {
        auto d = greedy_pair_deletion(tau, sigma, g.cap);
        json pairs = json::array();
        for (auto [a, b] : d.pairs) pairs.push_back({a, b});
        out["deletion"] = {{"heuristic", "greedy pair cover"},
                           {"pairs", pairs},
                           {"occurrences_before", d.occurrences_before},
                           {"occurrences_after", d.occurrences_after}};
    }
    return out;
}

FiniteAbelianGroup group_arg(const std::string& s)
{
    if (!s.empty() && s[0] == '{') return io::group_from_json(json::parse(s));
    std::vector<std::int64_t> orders;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            orders.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw InvalidInput("bad group order '" + tok + "'");
        }
    }
    if (orders.empty()) throw InvalidInput("--group needs orders such as 3 or 4,2");
    for (auto n : orders)
        if (n < 1) throw InvalidInput("group orders must be positive");
    return FiniteAbelianGroup::product(orders);
}

json cmd_apps_corners(const Globals& g, const std::string& group, std::size_t dim, double density, bool have_input)
{
    auto G = group_arg(group);
    std::set<Tuple> S;
    if (have_input) {
        S = io::subset_from_json(read_json(g.input));
    } else {
        std::mt19937_64 rng(g.seed);
        S = random_subset(G, dim, density, rng);
    }
    auto c = count_corners(G, dim, S, g.cap);
    json out = io::to_json(c);
    out["subset_source"] = have_input ? "input" : "random";
    return out;
}

json cmd_apps_homothetic(const Globals& g)
{
    auto j = read_json(g.input);
    if (!j.contains("group") || !j.contains("phis")) throw InvalidInput("expected fields 'group' and 'phis'");
    auto G = io::group_from_json(j.at("group"));
    std::vector<std::vector<Tuple>> subgroups;
    if (j.contains("subgroups"))
        for (const auto& s : j.at("subgroups")) {
            std::vector<Tuple> gens;
            for (const auto& h : s) gens.push_back(io::tuple_from_json(h));
            subgroups.push_back(gens);
        }
    std::vector<IntMatrix> phis;
    for (const auto& p : j.at("phis")) phis.push_back(io::matrix_from_json(p));
    auto sys = build_homothetic_system(G, subgroups, phis);
    auto d = check_diagonal(sys, g.cap);
    return {{"system", io::to_json(sys)},
            {"count", io::to_json(count_solutions(sys))},
            {"diagonal_inside", d.diagonal_inside},
            {"full_projections", d.full_projections},
            {"closed", d.closed}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Homomorphism systems over finite abelian groups: Smith forms, solution sets, equivalence "
                 "pipelines, hypergraph representations, permutation patterns."};
    app.require_subcommand(1);
    Globals g;
    auto add_io = [&](CLI::App* c) {
        c->add_option("-i,--input", g.input, "input JSON file ('-' for stdin)");
        c->add_option("-o,--output", g.output, "output file ('-' for stdout)");
        c->add_option("--cap", g.cap, "enumeration cap");
        c->add_option("--seed", g.seed, "seed for sampling");
        c->add_option("--threads", g.threads, "worker threads (accepted; work runs on one thread)");
    };
    std::function<json()> action;

    auto snf = app.add_subcommand("snf", "Smith normal form U A V = S of a matrix");
    add_io(snf);
    snf->callback([&] { action = [&] { return cmd_snf(g); }; });

    auto dets = app.add_subcommand("dets", "determinantal divisors D_i of a matrix");
    add_io(dets);
    dets->callback([&] { action = [&] { return cmd_dets(g); }; });

    bool list = false;
    auto solve = app.add_subcommand("solve", "count (and list) the solutions of a system");
    add_io(solve);
    solve->add_flag("--list", list, "list the solutions");
    solve->callback([&] { action = [&] { return cmd_solve(g, list); }; });

    std::size_t var = 1;
    auto project = app.add_subcommand("project", "projection S_i of the solution set");
    add_io(project);
    project->add_option("--var", var, "variable index (1-based)")->required();
    project->callback([&] { action = [&] { return cmd_project(g, var); }; });

    auto pipeline = app.add_subcommand("pipeline", "equivalence pipeline to an n-circular system");
    pipeline->require_subcommand(1);
    bool constancy = false;
    auto prun = pipeline->add_subcommand("run", "run and certify every stage");
    add_io(prun);
    prun->add_flag("--constancy", constancy, "also check fiber constancy of the join map");
    prun->callback([&] { action = [&] { return cmd_pipeline_run(g, constancy); }; });
    auto pver = pipeline->add_subcommand("verify", "re-certify the maps of a trace");
    add_io(pver);
    pver->callback([&] { action = [&] { return cmd_pipeline_verify(g); }; });

    auto represent = app.add_subcommand("represent", "hypergraph representations");
    represent->require_subcommand(1);
    std::string annihilator, map_arg, target_arg, domains_arg, eprime_arg;
    bool weak = false, tolerance = false;
    auto rbuild = represent->add_subcommand("build", "certificate (K, H) of an n-circular system");
    add_io(rbuild);
    rbuild->add_option("--annihilator", annihilator, "band annihilator C (file or JSON); default is computed");
    rbuild->callback([&] { action = [&] { return cmd_represent_build(g, annihilator); }; });
    auto rver = represent->add_subcommand("verify", "check RP1-RP4 exhaustively");
    add_io(rver);
    rver->add_flag("--weak", weak, "skip RP4");
    rver->add_flag("--tolerance", tolerance, "check c_{x,q} >= chi2 instead of equality");
    rver->callback([&] { action = [&] { return cmd_represent_verify(g, weak, tolerance); }; });
    auto rtr = represent->add_subcommand("transfer", "transfer a certificate along an equivalence map");
    add_io(rtr);
    rtr->add_option("--map", map_arg, "map S(target) <- S(certified system) (file or JSON)")->required();
    rtr->add_option("--target", target_arg, "target system (file or JSON)")->required();
    rtr->callback([&] { action = [&] { return cmd_represent_transfer(g, map_arg, target_arg); }; });
    auto rrem = represent->add_subcommand("remove", "deletion sets X' from an edge set E'");
    add_io(rrem);
    rrem->add_option("--domains", domains_arg, "label domains X_i (file or JSON); default is everything");
    rrem->add_option("--eprime", eprime_arg, "edge indices into K_X (file or JSON); default is a greedy cover");
    rrem->callback([&] { action = [&] { return cmd_represent_remove(g, domains_arg, eprime_arg); }; });

    auto perm = app.add_subcommand("perm", "permutation patterns");
    perm->require_subcommand(1);
    std::string pattern, text;
    bool deletion = false;
    auto pocc = perm->add_subcommand("occurrences", "occurrences of a pattern");
    add_io(pocc);
    pocc->add_option("--pattern", pattern, "pattern, e.g. \"1 0\"");
    pocc->add_option("--text", text, "permutation searched, e.g. \"2 0 1\"");
    pocc->callback([&] { action = [&] { return cmd_perm_occurrences(g, pattern, text); }; });
    auto pchk = perm->add_subcommand("check", "copies of G_tau in G_sigma against occurrences");
    add_io(pchk);
    pchk->add_option("--pattern", pattern, "pattern");
    pchk->add_option("--text", text, "permutation searched");
    pchk->add_flag("--deletion", deletion, "add the greedy pair-deletion demo");
    pchk->callback([&] { action = [&] { return cmd_perm_check(g, pattern, text, deletion); }; });

    auto apps = app.add_subcommand("apps", "corner and homothetic configurations");
    apps->require_subcommand(1);
    std::string group = "3";
    std::size_t dim = 2;
    double density = 0.5;
    auto acor = apps->add_subcommand("corners", "count corners in a subset of G^m two ways");
    add_io(acor);
    acor->add_option("--group", group, "cyclic orders, e.g. 3 or 4,2");
    acor->add_option("--dim", dim, "dimension m");
    acor->add_option("--density", density, "density of the random subset when no input is given")
        ->check(CLI::Range(0.0, 1.0));
    acor->callback([&] {
        bool have = acor->count("--input") > 0;
        action = [&, have] { return cmd_apps_corners(g, group, dim, density, have); };
    });
    auto ahom = apps->add_subcommand("homothetic", "homothetic configuration system");
    add_io(ahom);
    ahom->callback([&] { action = [&] { return cmd_apps_homothetic(g); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    auto start = std::chrono::steady_clock::now();
    int code = Ok;
    json out;
    try {
        out = ok(action());
    } catch (const PreconditionError& e) {
        out = {{"status", "precondition-failed"}, {"error", e.what()}};
        code = Precondition;
    } catch (const CapExceeded& e) {
        out = {{"status", "cap-exceeded"}, {"error", e.what()}};
        code = Cap;
    } catch (const InvalidInput& e) {
        out = {{"status", "invalid-input"}, {"error", e.what()}};
        code = Usage;
    } catch (const json::exception& e) {
        out = {{"status", "invalid-input"}, {"error", e.what()}};
        code = Usage;
    }
    try {
        write_json(g.output, out);
    } catch (const InvalidInput& e) {
        std::cerr << e.what() << "\n";
        return Usage;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "status " << out["status"].get<std::string>() << ", " << ms << " ms\n";
    return code;
}
