#include "hsys/json_io.hpp"

namespace hsys::io {

namespace {

void require(bool cond, const std::string& what)
{
    if (!cond) throw InvalidInput("json: " + what);
}

const json& field(const json& j, const char* key)
{
    require(j.is_object() && j.contains(key), std::string("missing field '") + key + "'");
    return j.at(key);
}

std::size_t size_from_json(const json& j)
{
    Int v = int_from_json(j);
    require(v >= 0, "negative size");
    return static_cast<std::size_t>(to_i64(v));
}

} // namespace

json to_json(const Int& a)
{
    return a.get_str();
}

Int int_from_json(const json& j)
{
    if (j.is_number_integer()) return Int(j.get<long>());
    require(j.is_string(), "integer expected");
    Int v;
    require(v.set_str(j.get<std::string>(), 10) == 0, "bad integer '" + j.get<std::string>() + "'");
    return v;
}

json to_json(const Rational& q)
{
    return q.get_str();
}

Rational rational_from_json(const json& j)
{
    if (j.is_number_integer()) return Rational(j.get<long>());
    require(j.is_string(), "rational expected");
    Rational q;
    require(q.set_str(j.get<std::string>(), 10) == 0, "bad rational '" + j.get<std::string>() + "'");
    q.canonicalize();
    return q;
}

json tuple_json(const Tuple& t)
{
    json out = json::array();
    for (auto v : t) out.push_back(v);
    return out;
}

Tuple tuple_from_json(const json& j)
{
    if (j.is_object() && j.contains("coords")) return tuple_from_json(j.at("coords"));
    require(j.is_array(), "tuple expected");
    Tuple t;
    for (const auto& v : j) t.push_back(to_i64(int_from_json(v)));
    return t;
}

json to_json(const FiniteAbelianGroup& g)
{
    return {{"orders", tuple_json(g.orders)}};
}

FiniteAbelianGroup group_from_json(const json& j)
{
    auto orders = tuple_from_json(field(j, "orders"));
    require(!orders.empty(), "group needs at least one factor");
    for (auto n : orders) require(n >= 1, "group orders must be positive");
    return FiniteAbelianGroup::product(orders);
}

json to_json(const IntMatrix& a)
{
    json rows = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) r.push_back(to_json(a(i, j)));
        rows.push_back(r);
    }
    return {{"rows", a.rows()}, {"cols", a.cols()}, {"entries", rows}};
}

IntMatrix matrix_from_json(const json& j)
{
    const auto& e = field(j, "entries");
    require(e.is_array(), "entries must be an array");
    std::size_t rows = j.contains("rows") ? size_from_json(j.at("rows")) : e.size();
    std::size_t cols = j.contains("cols") ? size_from_json(j.at("cols")) : (e.empty() ? 0 : e[0].size());
    require(e.size() == rows, "row count differs from 'rows'");
    IntMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        require(e[i].is_array() && e[i].size() == cols, "row " + std::to_string(i) + " has the wrong length");
        for (std::size_t c = 0; c < cols; ++c) a(i, c) = int_from_json(e[i][c]);
    }
    return a;
}

json to_json(const HomSystem& sys)
{
    json rhs = json::array();
    for (std::size_t r = 0; r < sys.k(); ++r) rhs.push_back(tuple_json(block_value(sys.rhs, r, sys.block)));
    return {{"matrix", to_json(sys.matrix)}, {"block", sys.block}, {"group", to_json(sys.group)}, {"rhs", rhs}};
}

HomSystem system_from_json(const json& j)
{
    HomSystem sys;
    sys.matrix = matrix_from_json(field(j, "matrix"));
    sys.group = group_from_json(field(j, "group"));
    sys.block = j.contains("block") ? size_from_json(j.at("block")) : sys.group.rank();
    require(sys.block == sys.group.rank(), "block must equal the group rank");
    require(sys.block > 0 && sys.matrix.rows() % sys.block == 0 && sys.matrix.cols() % sys.block == 0,
            "matrix shape is not a multiple of the block size");
    if (j.contains("rhs") && !j.at("rhs").is_null()) {
        for (const auto& b : j.at("rhs")) {
            auto t = b.is_array() ? tuple_from_json(b) : Tuple{to_i64(int_from_json(b))};
            sys.rhs.insert(sys.rhs.end(), t.begin(), t.end());
        }
    }
    if (sys.rhs.empty()) sys.rhs.assign(sys.matrix.rows(), 0);
    require(sys.rhs.size() == sys.matrix.rows(), "rhs length differs from the number of rows");
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) sys.rhs[i] = mod(sys.rhs[i], sys.modulus(i));
    validate(sys);
    return sys;
}

json to_json(const SmithDecomposition& d)
{
    json diag = json::array();
    for (const auto& v : d.diag) diag.push_back(to_json(v));
    return {{"S", to_json(d.S)}, {"U", to_json(d.U)}, {"V", to_json(d.V)}, {"diag", diag}};
}

json to_json(const EquivalenceMap& map)
{
    json sigma = json::array(), aff = json::array();
    for (auto s : map.sigma) sigma.push_back(s + 1);
    for (const auto& a : map.affines) aff.push_back({{"linear", to_json(a.linear)}, {"shift", tuple_json(a.shift)}});
    return {{"kind", to_string(map.kind)}, {"sigma", sigma}, {"affines", aff}, {"mu", to_json(map.mu)}};
}

EquivalenceMap map_from_json(const json& j)
{
    EquivalenceMap map;
    if (j.contains("kind")) map.kind = map_kind_from_string(j.at("kind").get<std::string>());
    for (const auto& s : field(j, "sigma")) {
        auto v = size_from_json(s);
        require(v >= 1, "sigma is 1-based");
        map.sigma.push_back(v - 1);
    }
    for (const auto& a : field(j, "affines"))
        map.affines.push_back({matrix_from_json(field(a, "linear")), tuple_from_json(field(a, "shift"))});
    require(map.affines.size() == map.sigma.size(), "one affine map per sigma entry");
    map.mu = j.contains("mu") ? int_from_json(j.at("mu")) : Int(1);
    return map;
}

json to_json(const EquivalenceReport& rep)
{
    json hist = json::array();
    for (const auto& [size, count] : rep.fiber_histogram)
        hist.push_back({{"fiber_size", to_json(size)}, {"targets", to_json(count)}});
    json out = {{"ok", rep.ok()},
                {"certified", rep.exhaustive ? "exhaustive" : "sampled"},
                {"lands_in", rep.lands_in},
                {"surjective", rep.surjective},
                {"uniform", rep.uniform},
                {"counts_match", rep.counts_match},
                {"mu_declared", to_json(rep.mu_declared)},
                {"mu_observed", to_json(rep.mu_observed)},
                {"source_count", to_json(rep.source_count)},
                {"target_count", to_json(rep.target_count)},
                {"fiber_histogram", hist}};
    if (!rep.constancy.empty()) out["constancy"] = rep.constancy;
    if (!rep.exhaustive) out["probes"] = rep.probes;
    if (!rep.failure.empty()) out["failure"] = rep.failure;
    return out;
}

json to_json(const PipelineTrace& trace)
{
    json stages = json::array();
    for (const auto& s : trace.stages) {
        json st = {{"label", s.label}, {"system", to_json(s.system)}};
        st["map"] = s.map ? to_json(*s.map) : json(nullptr);
        st["mu"] = to_json(s.map ? s.map->mu : Int(1));
        if (!s.map) st["certified"] = "exhaustive";
        else if (!s.report) st["certified"] = "uncertified";
        else st["certified"] = s.report->exhaustive ? "exhaustive" : "sampled";
        st["notes"] = s.notes;
        if (s.report) st["report"] = to_json(*s.report);
        stages.push_back(st);
    }
    json out = {{"stages", stages},
                {"no_solution", trace.no_solution},
                {"final_is_circular", trace.final_is_circular},
                {"n", trace.n},
                {"total_mu", to_json(trace.total_mu)},
                {"certified", trace.certified()},
                {"exhaustive", trace.exhaustive()}};
    json comps = json::array();
    for (std::size_t i = 0; i < trace.upsilon.size(); ++i) {
        const auto& c = trace.upsilon[i];
        json cj = {{"kappa", {c.kappa.first, c.kappa.second}}, {"order", c.order}, {"J", to_json(c.J)},
                   {"Jbar", to_json(c.Jbar)}};
        if (i < trace.split_reports.size()) cj["split_report"] = to_json(trace.split_reports[i]);
        if (i < trace.circ_reports.size()) cj["circ_report"] = to_json(trace.circ_reports[i]);
        comps.push_back(cj);
    }
    out["components"] = comps;
    return out;
}

PipelineTrace trace_from_json(const json& j)
{
    PipelineTrace trace;
    for (const auto& s : field(j, "stages")) {
        TraceStage st;
        st.label = field(s, "label").get<std::string>();
        st.system = system_from_json(field(s, "system"));
        if (s.contains("map") && !s.at("map").is_null()) st.map = map_from_json(s.at("map"));
        if (s.contains("notes")) st.notes = s.at("notes").get<std::string>();
        trace.stages.push_back(std::move(st));
    }
    if (j.contains("no_solution")) trace.no_solution = j.at("no_solution").get<bool>();
    if (j.contains("final_is_circular")) trace.final_is_circular = j.at("final_is_circular").get<bool>();
    if (j.contains("n")) trace.n = j.at("n").get<std::int64_t>();
    if (j.contains("total_mu")) trace.total_mu = int_from_json(j.at("total_mu"));
    return trace;
}

json to_json(const ColoredHypergraph& g)
{
    json edges = json::array();
    for (const auto& e : g.edges) {
        json ej = {{"color", e.color + 1}, {"verts", e.verts}};
        ej["label"] = e.label ? tuple_json(*e.label) : json(nullptr);
        edges.push_back(ej);
    }
    json out = {{"num_vertices", g.num_vertices}, {"num_colors", g.num_colors}, {"uniformity", g.uniformity},
                {"directed", g.directed}, {"clusters", g.clusters}};
    if (!g.vertex_tags.empty()) {
        json tags = json::array();
        for (const auto& t : g.vertex_tags) tags.push_back(tuple_json(t));
        out["vertex_tags"] = tags;
    }
    out["edges"] = edges;
    return out;
}

ColoredHypergraph hypergraph_from_json(const json& j)
{
    ColoredHypergraph g;
    g.uniformity = size_from_json(field(j, "uniformity"));
    g.directed = j.value("directed", false);
    if (j.contains("clusters"))
        for (const auto& c : j.at("clusters")) {
            std::vector<std::size_t> cl;
            for (const auto& v : c) cl.push_back(size_from_json(v));
            g.clusters.push_back(cl);
        }
    std::size_t max_v = 0, max_c = 0;
    bool any = false;
    for (const auto& e : field(j, "edges")) {
        auto color = size_from_json(field(e, "color"));
        require(color >= 1, "colors are 1-based");
        std::vector<std::size_t> verts;
        for (const auto& v : field(e, "verts")) verts.push_back(size_from_json(v));
        std::optional<Tuple> label;
        if (e.contains("label") && !e.at("label").is_null()) label = tuple_from_json(e.at("label"));
        for (auto v : verts) max_v = std::max(max_v, v);
        max_c = std::max(max_c, color);
        any = true;
        g.add_edge(color - 1, std::move(verts), std::move(label));
    }
    std::size_t from_clusters = 0;
    for (const auto& c : g.clusters)
        for (auto v : c) from_clusters = std::max(from_clusters, v + 1);
    g.num_vertices = j.contains("num_vertices") ? size_from_json(j.at("num_vertices"))
                                                : std::max(any ? max_v + 1 : 0, from_clusters);
    g.num_colors = j.contains("num_colors") ? size_from_json(j.at("num_colors")) : max_c;
    if (j.contains("vertex_tags"))
        for (const auto& t : j.at("vertex_tags")) g.vertex_tags.push_back(tuple_from_json(t));
    g.validate();
    return g;
}

json to_json(const RepresentationCertificate& cert)
{
    json gamma = json::array();
    for (const auto& g : cert.gamma) gamma.push_back(to_json(g));
    json out = {{"domain", cert.domain == RepresentationCertificate::Domain::Homomorphism ? "homomorphism" : "copies"}};
    out["system"] = cert.system ? to_json(*cert.system) : json(nullptr);
    out["gamma"] = gamma;
    out["p"] = to_json(cert.p);
    out["c"] = to_json(cert.c);
    out["chi1"] = to_json(cert.chi1);
    out["chi2"] = to_json(cert.chi2);
    out["ground_size"] = to_json(cert.ground_size);
    out["lambda"] = to_json(cert.lambda());
    out["q_size"] = to_json(cert.q_size());
    out["strong"] = cert.strong;
    out["K"] = to_json(cert.K);
    out["H"] = to_json(cert.H);
    json layers = json::array();
    for (const auto& l : cert.layers) {
        json kernel = json::array();
        for (const auto& z : l.kernel) kernel.push_back(tuple_json(z));
        layers.push_back({{"kind", to_string(l.kind)},
                          {"map", to_json(l.map)},
                          {"source", to_json(l.source)},
                          {"target", to_json(l.target)},
                          {"kernel", kernel},
                          {"beta", l.beta}});
    }
    if (!cert.layers.empty()) {
        out["base_K"] = to_json(cert.base_K);
        out["base_H"] = to_json(cert.base_H);
    }
    out["layers"] = layers;
    return out;
}

RepresentationCertificate certificate_from_json(const json& j)
{
    RepresentationCertificate cert;
    auto domain = j.value("domain", std::string("homomorphism"));
    require(domain == "homomorphism" || domain == "copies", "domain must be 'homomorphism' or 'copies'");
    cert.domain = domain == "copies" ? RepresentationCertificate::Domain::Copies
                                     : RepresentationCertificate::Domain::Homomorphism;
    if (j.contains("system") && !j.at("system").is_null()) cert.system = system_from_json(j.at("system"));
    cert.K = hypergraph_from_json(field(j, "K"));
    cert.H = hypergraph_from_json(field(j, "H"));
    for (const auto& g : field(j, "gamma")) cert.gamma.push_back(rational_from_json(g));
    cert.p = rational_from_json(field(j, "p"));
    cert.c = rational_from_json(field(j, "c"));
    cert.chi1 = rational_from_json(field(j, "chi1"));
    cert.chi2 = rational_from_json(field(j, "chi2"));
    cert.ground_size = int_from_json(field(j, "ground_size"));
    cert.strong = j.value("strong", false);
    if (j.contains("layers"))
        for (const auto& l : j.at("layers")) {
            TransferLayer layer;
            layer.kind = map_kind_from_string(field(l, "kind").get<std::string>());
            layer.map = map_from_json(field(l, "map"));
            layer.source = system_from_json(field(l, "source"));
            layer.target = system_from_json(field(l, "target"));
            for (const auto& z : field(l, "kernel")) layer.kernel.push_back(tuple_from_json(z));
            layer.beta = l.value("beta", std::int64_t{1});
            cert.layers.push_back(std::move(layer));
        }
    cert.base_K = j.contains("base_K") ? hypergraph_from_json(j.at("base_K")) : cert.K;
    cert.base_H = j.contains("base_H") ? hypergraph_from_json(j.at("base_H")) : cert.H;
    return cert;
}

json to_json(const RpReport& rep)
{
    json sizes = json::array(), through = json::array();
    for (const auto& [s, n] : rep.class_sizes) sizes.push_back({{"size", s}, {"classes", n}});
    for (const auto& [c, n] : rep.edge_copy_counts) through.push_back({{"copies_through_edge", c}, {"edges", n}});
    json out = {{"ok", rep.ok()},
                {"RP1", rep.rp1},
                {"RP2", rep.rp2},
                {"RP3", rep.rp3}};
    out["RP4"] = rep.rp4_checked ? json(rep.rp4) : json(nullptr);
    out["copies"] = rep.copies;
    out["classes"] = rep.classes;
    out["expected_classes"] = to_json(rep.expected_classes);
    out["lambda_declared"] = to_json(rep.lambda_declared);
    out["lambda_min"] = to_json(rep.lambda_min);
    out["lambda_max"] = to_json(rep.lambda_max);
    out["c_min"] = to_json(rep.c_min);
    out["class_size_declared"] = to_json(rep.class_size_declared);
    out["class_sizes"] = sizes;
    out["edge_copy_counts"] = through;
    out["counterexamples"] = rep.counterexamples;
    return out;
}

json to_json(const RemovalResult& res)
{
    json th = json::array(), xp = json::array();
    for (const auto& t : res.thresholds) th.push_back(to_json(t));
    for (const auto& s : res.Xprime) {
        json a = json::array();
        for (const auto& x : s) a.push_back(tuple_json(x));
        xp.push_back(a);
    }
    json out = {{"precondition_ok", res.precondition_ok}, {"thresholds", th}, {"Xprime", xp},
                {"remaining", res.remaining}, {"verified", res.verified}};
    if (!res.failure.empty()) out["failure"] = res.failure;
    return out;
}

LabelDomains domains_from_json(const json& j, std::size_t m)
{
    LabelDomains out(m);
    if (j.is_null()) return out;
    require(j.is_array() && j.size() == m, "one domain per variable expected");
    for (std::size_t i = 0; i < m; ++i) {
        if (j[i].is_null()) continue;
        std::set<Tuple> d;
        for (const auto& x : j[i]) d.insert(x.is_array() ? tuple_from_json(x) : Tuple{to_i64(int_from_json(x))});
        out[i] = std::move(d);
    }
    return out;
}

json to_json(const Permutation& p)
{
    return {{"values", p.values}};
}

Permutation permutation_from_json(const json& j)
{
    if (j.is_string()) return Permutation::parse(j.get<std::string>());
    const json& v = j.is_object() ? field(j, "values") : j;
    require(v.is_array(), "permutation values expected");
    Permutation p;
    for (const auto& x : v) p.values.push_back(size_from_json(x));
    p.validate();
    return p;
}

json to_json(const OccurrenceReport& rep)
{
    json out = {{"ok", rep.ok()},       {"copies", rep.copies}, {"occurrences", rep.occurrences},
                {"monotone", rep.monotone}, {"rigid", rep.rigid},   {"match", rep.match}};
    out["mismatches"] = rep.mismatches;
    return out;
}

json to_json(const ConfigurationCensus& c)
{
    return {{"system", to_json(c.system)},
            {"subset_size", c.subset.size()},
            {"hits", c.hits},
            {"hits_solver", c.hits_solver},
            {"agree", c.agree()},
            {"total", to_json(c.total)}};
}

std::set<Tuple> subset_from_json(const json& j)
{
    const json& v = j.is_object() ? field(j, "points") : j;
    require(v.is_array(), "subset must be a list of tuples");
    std::set<Tuple> out;
    for (const auto& x : v) out.insert(tuple_from_json(x));
    return out;
}

} // namespace hsys::io
