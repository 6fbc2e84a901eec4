#include "hsys/representation.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "hsys/lattice.hpp"

namespace hsys {

namespace {

Rational to_rational(const Int& a)
{
    return Rational(a);
}

Rational pow_rational(const Rational& a, std::size_t e)
{
    Rational r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= a;
    return r;
}

std::string tuple_string(const Tuple& t)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ')';
    return os.str();
}

// H edge index for each color; empty optional when the color is missing or repeated.
std::vector<std::optional<std::size_t>> edge_by_color(const ColoredHypergraph& H, bool* unique = nullptr)
{
    std::vector<std::optional<std::size_t>> out(H.num_colors);
    bool ok = true;
    for (std::size_t e = 0; e < H.edges.size(); ++e) {
        auto c = H.edges[e].color;
        if (c >= out.size() || out[c]) {
            ok = false;
            continue;
        }
        out[c] = e;
    }
    for (const auto& o : out)
        if (!o) ok = false;
    if (unique) *unique = ok;
    return out;
}

// Lexicographic rank of y inside {y + z : z in kernel}, coordinates reduced
// by the given moduli.
std::int64_t fiber_rank(const Tuple& y, const std::vector<Tuple>& kernel, const std::vector<std::int64_t>& moduli)
{
    std::int64_t rank = 0;
    Tuple w(y.size());
    for (const auto& z : kernel) {
        for (std::size_t i = 0; i < y.size(); ++i) w[i] = mod(y[i] + z[i], moduli[i]);
        if (w < y) ++rank;
    }
    return rank;
}

std::vector<std::int64_t> flat_moduli(const HomSystem& sys)
{
    std::vector<std::int64_t> out(sys.matrix.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sys.modulus(i);
    return out;
}

class RuleEvaluator {
public:
    explicit RuleEvaluator(const RepresentationCertificate& cert)
        : cert_(cert), base_index_(cert.base_K), base_edges_(edge_by_color(cert.base_H))
    {
        for (const auto& layer : cert.layers) {
            if (layer.kind == MapKind::MuAuto) source_moduli_.push_back(flat_moduli(layer.source));
            else if (layer.kind == MapKind::MuEquiv1) source_moduli_.push_back(layer.source.group.orders);
            else source_moduli_.push_back({});
        }
    }

    std::optional<RuleValue> operator()(const Copy& copy) const
    {
        RuleValue out;
        if (cert_.domain == RepresentationCertificate::Domain::Copies) {
            auto hc = edge_by_color(cert_.H);
            for (const auto& e : hc) {
                if (!e) return std::nullopt;
                out.x.push_back(static_cast<std::int64_t>(copy.edges[*e]));
            }
            return out;
        }
        Tuple y;
        std::vector<std::size_t> image;
        for (const auto& e : base_edges_) {
            if (!e) return std::nullopt;
            const auto& hv = cert_.base_H.edges[*e].verts;
            image.resize(hv.size());
            for (std::size_t j = 0; j < hv.size(); ++j) image[j] = copy.vertex_map[hv[j]];
            if (!cert_.base_K.directed) std::sort(image.begin(), image.end());
            auto found = base_index_.find(cert_.base_H.edges[*e].color, image);
            if (!found || !cert_.base_K.edges[*found].label) return std::nullopt;
            const auto& l = *cert_.base_K.edges[*found].label;
            y.insert(y.end(), l.begin(), l.end());
        }
        for (std::size_t li = 0; li < cert_.layers.size(); ++li) {
            const auto& layer = cert_.layers[li];
            if (layer.kind == MapKind::MuAuto) {
                out.q.push_back({fiber_rank(y, layer.kernel, source_moduli_[li])});
            } else if (layer.kind == MapKind::MuEquiv1) {
                std::size_t t = layer.source.block, m = layer.source.m();
                Tuple ranks(m);
                for (std::size_t i = 0; i < m; ++i)
                    ranks[i] = fiber_rank(block_value(y, i, t), layer.kernel, source_moduli_[li]);
                Tuple cls;
                for (std::size_t i = 1; i < m; ++i) cls.push_back(mod(ranks[i] - ranks[0], layer.beta));
                out.q.push_back(cls);
            }
            y = apply_map(layer.map, layer.target.group, y);
        }
        out.x = std::move(y);
        return out;
    }

private:
    const RepresentationCertificate& cert_;
    EdgeIndex base_index_;
    std::vector<std::optional<std::size_t>> base_edges_;
    std::vector<std::vector<std::int64_t>> source_moduli_;
};

std::int64_t element_index(const Tuple& g, const std::vector<std::int64_t>& orders)
{
    std::int64_t idx = 0;
    for (std::size_t q = 0; q < orders.size(); ++q) idx = idx * orders[q] + g[q];
    return idx;
}

std::vector<Tuple> all_elements(const FiniteAbelianGroup& g, std::uint64_t cap)
{
    std::vector<Tuple> out;
    for_each_element(g, [&](const Tuple& x) { out.push_back(x); }, cap);
    return out;
}

} // namespace

Rational RepresentationCertificate::lambda() const
{
    Int kv = 1;
    for (std::size_t i = 0; i < K.uniformity; ++i) kv *= static_cast<unsigned long>(K.num_vertices);
    Rational l = c * to_rational(kv) / to_rational(ground_size);
    l.canonicalize();
    return l;
}

Int RepresentationCertificate::q_size() const
{
    Int q = 1;
    for (const auto& layer : layers) {
        if (layer.kind == MapKind::MuAuto) q *= layer.map.mu;
        else if (layer.kind == MapKind::MuEquiv1)
            for (std::size_t i = 1; i < layer.source.m(); ++i) q *= layer.beta;
    }
    return q;
}

RepresentationCertificate build_K_from_circular(const HomSystem& sys, const IntMatrix& C, std::uint64_t cap)
{
    validate(sys);
    if (!sys.homogeneous()) throw PreconditionError("build_K_from_circular: system must be homogeneous");
    std::size_t t = sys.block, k = sys.k(), m = sys.m();
    std::int64_t n = sys.group.exponent();
    if (!is_block_n_circular(sys.matrix, t, n)) throw PreconditionError("build_K_from_circular: system is not n-circular");
    if (m < k + 2) throw PreconditionError("build_K_from_circular: need m >= k + 2");
    if (C.rows() != m * t || C.cols() != m * t) throw PreconditionError("build_K_from_circular: C has the wrong shape");
    const auto& orders = sys.group.orders;

    IntMatrix AC = sys.matrix * C;
    for (std::size_t r = 0; r < AC.rows(); ++r)
        for (std::size_t c = 0; c < AC.cols(); ++c)
            if (mod(AC(r, c), sys.modulus(r)) != 0) throw PreconditionError("build_K_from_circular: A C != 0");
    // Band shape and well-defined entries.
    std::vector<std::int64_t> cred(C.rows() * C.cols());
    for (std::size_t r = 0; r < C.rows(); ++r)
        for (std::size_t c = 0; c < C.cols(); ++c) {
            std::size_t bi = r / t, bj = c / t;
            std::size_t off = (bj + m - bi) % m;
            if (off > k && C(r, c) != 0) throw PreconditionError("build_K_from_circular: C is not band shaped");
            std::int64_t np = orders[r % t], nq = orders[c % t];
            std::int64_t v = mod(C(r, c), np);
            if (mod(static_cast<Int>(v) * nq, np) != 0)
                throw PreconditionError("build_K_from_circular: C entry is not a homomorphism");
            cred[r * C.cols() + c] = v;
        }

    Int order = sys.group.order();
    Int total = order;
    for (std::size_t j = 0; j < k; ++j) total *= order;
    total *= static_cast<unsigned long>(m);
    if (total > Int(static_cast<unsigned long>(cap))) throw CapExceeded("build_K_from_circular: too many edges");
    std::int64_t gsize = to_i64(order);
    auto elems = all_elements(sys.group, cap);

    RepresentationCertificate cert;
    cert.system = sys;
    ColoredHypergraph& K = cert.K;
    K.num_vertices = static_cast<std::size_t>(gsize) * m;
    K.uniformity = k + 1;
    K.num_colors = m;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<std::size_t> cl;
        for (std::int64_t e = 0; e < gsize; ++e) {
            cl.push_back(j * gsize + e);
            K.vertex_tags.push_back(elems[e]);
        }
        K.clusters.push_back(std::move(cl));
    }
    std::vector<std::int64_t> radix(k + 1, gsize);
    for (std::size_t i = 0; i < m; ++i) {
        for (Odometer od(radix); !od.done(); od.next()) {
            const auto& pick = od.value();
            Tuple label(t, 0);
            std::vector<std::size_t> verts(k + 1);
            for (std::size_t j = 0; j <= k; ++j) {
                std::size_t cl = (i + j) % m;
                verts[j] = cl * gsize + pick[j];
                const Tuple& g = elems[pick[j]];
                for (std::size_t p = 0; p < t; ++p) {
                    std::int64_t np = orders[p];
                    std::int64_t acc = label[p];
                    for (std::size_t q = 0; q < t; ++q) {
                        std::int64_t coef = cred[(i * t + p) * C.cols() + cl * t + q];
                        if (coef) acc = (acc + static_cast<std::int64_t>((__int128)coef * g[q] % np)) % np;
                    }
                    label[p] = acc;
                }
            }
            K.add_edge(i, std::move(verts), std::move(label));
        }
    }
    cert.H = build_cycle_template_H(m, k);
    cert.gamma.assign(m, Rational(1));
    cert.p = 1;
    cert.c = pow_rational(Rational(1, static_cast<unsigned long>(m)), k + 1);
    cert.chi1 = static_cast<unsigned long>(m);
    cert.chi2 = cert.c;
    cert.ground_size = order;
    cert.strong = true;
    cert.base_K = cert.K;
    cert.base_H = cert.H;
    return cert;
}

RepresentationCertificate build_K_from_circular(const HomSystem& sys, std::uint64_t cap)
{
    return build_K_from_circular(sys, build_band_annihilator(sys.matrix, sys.block, sys.group.exponent()), cap);
}

RepresentationCertificate identity_representation(const ColoredHypergraph& H0, const ColoredHypergraph& K0)
{
    H0.validate();
    K0.validate();
    bool unique = false;
    edge_by_color(H0, &unique);
    if (!unique || H0.edges.size() != H0.num_colors)
        throw PreconditionError("identity_representation: H0 needs exactly one edge per color");
    if (H0.uniformity != K0.uniformity || H0.directed != K0.directed)
        throw PreconditionError("identity_representation: H0 and K0 differ in uniformity or orientation");
    RepresentationCertificate cert;
    cert.domain = RepresentationCertificate::Domain::Copies;
    cert.H = H0;
    cert.K = K0;
    cert.K.num_colors = std::max(K0.num_colors, H0.num_colors);
    for (std::size_t e = 0; e < cert.K.edges.size(); ++e) cert.K.edges[e].label = Tuple{static_cast<std::int64_t>(e)};
    std::size_t m = H0.num_colors;
    cert.gamma.assign(m, Rational(1));
    cert.p = 1;
    cert.c = 1;
    cert.chi1 = static_cast<unsigned long>(H0.num_vertices);
    cert.chi2 = 1;
    Int g = 1;
    for (std::size_t i = 0; i < K0.uniformity; ++i) g *= static_cast<unsigned long>(K0.num_vertices);
    cert.ground_size = g;
    cert.strong = true;
    cert.base_K = cert.K;
    cert.base_H = cert.H;
    return cert;
}

std::optional<RuleValue> evaluate_rule(const RepresentationCertificate& cert, const Copy& copy)
{
    return RuleEvaluator(cert)(copy);
}

bool RpReport::ok() const
{
    return rp1 && rp2 && rp3 && (!rp4_checked || rp4);
}

RpReport verify_rp_properties(const RepresentationCertificate& cert, const RpOptions& opt)
{
    RpReport rep;
    auto fail = [&](const std::string& s) {
        if (rep.counterexamples.size() < opt.max_counterexamples) rep.counterexamples.push_back(s);
    };
    const auto& K = cert.K;
    const auto& H = cert.H;
    std::size_t m = cert.m();
    bool homomorphism = cert.domain == RepresentationCertificate::Domain::Homomorphism;
    rep.lambda_declared = cert.lambda();

    // RP1
    bool unique = false;
    auto hcolor = edge_by_color(H, &unique);
    rep.rp1 = true;
    if (homomorphism && !cert.system) {
        rep.rp1 = false;
        fail("RP1: certificate has no system");
        return rep;
    }
    try {
        K.validate();
        H.validate();
    } catch (const InvalidInput& e) {
        rep.rp1 = false;
        fail(std::string("RP1: ") + e.what());
        return rep;
    }
    if (!unique || H.num_colors != m || H.edges.size() != m) {
        rep.rp1 = false;
        fail("RP1: H must have exactly one edge of each color 1..m");
        return rep;
    }
    std::size_t s = H.uniformity;
    if (K.uniformity != s || s < 2) {
        rep.rp1 = false;
        fail("RP1: uniformity mismatch or s < 2");
    }
    if (!(cert.chi1 >= Rational(static_cast<unsigned long>(H.num_vertices)) && H.num_vertices > s)) {
        rep.rp1 = false;
        fail("RP1: need chi1 >= |V(H)| > s");
    }
    for (std::size_t e = 0; e < K.edges.size(); ++e) {
        const auto& l = K.edges[e].label;
        bool good = l.has_value();
        if (good && homomorphism) {
            const auto& orders = cert.system->group.orders;
            good = l->size() == orders.size();
            for (std::size_t q = 0; good && q < l->size(); ++q) good = (*l)[q] >= 0 && (*l)[q] < orders[q];
        }
        if (!good) {
            rep.rp1 = false;
            fail("RP1: edge " + std::to_string(e) + " has no valid label");
            break;
        }
    }
    if (K.num_colors < m) {
        rep.rp1 = false;
        fail("RP1: K has fewer colors than H");
    }
    if (!rep.rp1) return rep;

    // Copies and classes.
    RuleEvaluator rule(cert);
    std::optional<SparseSystem> sparse;
    if (homomorphism) sparse.emplace(*cert.system);
    std::size_t t = homomorphism ? cert.system->block : 1;
    std::vector<std::vector<std::size_t>> copy_edges; // by color
    std::map<std::pair<Tuple, QIndex>, std::vector<std::uint32_t>> classes;
    bool rule_ok = true;
    CopySearchOptions copt;
    copt.cap = opt.cap;
    copt.distinct_edge_sets = true;
    for_each_copy(H, K, [&](const Copy& copy) {
        ++rep.copies;
        auto val = rule(copy);
        if (!val) {
            rule_ok = false;
            fail("RP2: a copy does not extend to a copy of the base template");
            return;
        }
        std::vector<std::size_t> by_color(m);
        Tuple labels;
        for (std::size_t i = 0; i < m; ++i) {
            by_color[i] = copy.edges[*hcolor[i]];
            const auto& l = *K.edges[by_color[i]].label;
            labels.insert(labels.end(), l.begin(), l.end());
        }
        if (homomorphism && labels != val->x) {
            rule_ok = false;
            fail("RP2: labels " + tuple_string(labels) + " differ from the rule value " + tuple_string(val->x));
            return;
        }
        if (homomorphism && !sparse->satisfies(val->x)) {
            rule_ok = false;
            fail("RP2: labels " + tuple_string(val->x) + " do not solve the system");
            return;
        }
        classes[{val->x, val->q}].push_back(static_cast<std::uint32_t>(copy_edges.size()));
        copy_edges.push_back(std::move(by_color));
    }, copt);
    rep.classes = classes.size();

    // RP2: r onto S x Q with classes of size p lambda prod gamma.
    Rational gprod = 1;
    for (const auto& g : cert.gamma) gprod *= g;
    rep.class_size_declared = cert.p * rep.lambda_declared * gprod;
    rep.class_size_declared.canonicalize();
    Int s_count;
    if (homomorphism) {
        s_count = count_solutions(*cert.system);
    } else {
        std::set<Tuple> xs;
        for (const auto& [key, _] : classes) xs.insert(key.first);
        s_count = static_cast<unsigned long>(xs.size());
    }
    rep.expected_classes = s_count * cert.q_size();
    rep.rp2 = rule_ok && Int(static_cast<unsigned long>(rep.classes)) == rep.expected_classes;
    if (rule_ok && !rep.rp2)
        fail("RP2: " + std::to_string(rep.classes) + " classes observed, |S||Q| = " + rep.expected_classes.get_str());
    Rational unit = cert.p * gprod;
    Int kv = 1;
    for (std::size_t i = 0; i < s; ++i) kv *= static_cast<unsigned long>(K.num_vertices);
    bool first = true;
    for (const auto& [key, members] : classes) {
        std::uint64_t size = members.size();
        ++rep.class_sizes[size];
        Rational lam = Rational(static_cast<unsigned long>(size)) / unit;
        lam.canonicalize();
        Rational cxq = lam * to_rational(cert.ground_size) / to_rational(kv);
        cxq.canonicalize();
        if (first || lam < rep.lambda_min) rep.lambda_min = lam;
        if (first || lam > rep.lambda_max) rep.lambda_max = lam;
        if (first || cxq < rep.c_min) rep.c_min = cxq;
        first = false;
        bool good = opt.tolerance ? cxq >= cert.chi2 : Rational(static_cast<unsigned long>(size)) == rep.class_size_declared;
        if (!good) {
            rep.rp2 = false;
            fail("RP2: class of " + tuple_string(key.first) + " has " + std::to_string(size) + " copies, declared " +
                 rep.class_size_declared.get_str());
        }
    }

    // RP3: copies of a class through each of its edges.
    rep.rp3 = rule_ok;
    std::unordered_map<std::size_t, std::uint64_t> through;
    for (const auto& [key, members] : classes) {
        through.clear();
        for (auto ci : members)
            for (auto e : copy_edges[ci]) ++through[e];
        for (const auto& [e, cnt] : through) {
            ++rep.edge_copy_counts[cnt];
            std::size_t i = K.edges[e].color;
            Rational expected = cert.p * gprod / cert.gamma[i];
            if (Rational(static_cast<unsigned long>(cnt)) != expected) {
                rep.rp3 = false;
                fail("RP3: edge " + std::to_string(e) + " of color " + std::to_string(i + 1) + " lies in " +
                     std::to_string(cnt) + " copies of its class, expected " + expected.get_str());
            }
        }
    }

    // RP4: every edge colored i labelled x_i is used by every class of x.
    if (opt.strong) {
        rep.rp4_checked = true;
        rep.rp4 = rep.rp2;
        std::map<std::pair<std::size_t, Tuple>, std::uint64_t> label_count;
        for (const auto& e : K.edges)
            if (e.color < m) ++label_count[{e.color, *e.label}];
        std::vector<std::set<std::size_t>> used(m);
        for (const auto& [key, members] : classes) {
            for (auto& u : used) u.clear();
            for (auto ci : members)
                for (std::size_t i = 0; i < m; ++i) used[i].insert(copy_edges[ci][i]);
            for (std::size_t i = 0; i < m; ++i) {
                Tuple xi = homomorphism ? block_value(key.first, i, t) : Tuple{key.first[i]};
                if (!homomorphism) xi = *K.edges[static_cast<std::size_t>(key.first[i])].label;
                auto it = label_count.find({i, xi});
                std::uint64_t want = it == label_count.end() ? 0 : it->second;
                if (used[i].size() != want) {
                    rep.rp4 = false;
                    fail("RP4: class of " + tuple_string(key.first) + " reaches " + std::to_string(used[i].size()) +
                         " of the " + std::to_string(want) + " edges of color " + std::to_string(i + 1) +
                         " labelled " + tuple_string(xi));
                    break;
                }
            }
        }
    }
    return rep;
}

namespace {

const HomSystem& represented_system(const RepresentationCertificate& cert)
{
    if (cert.domain != RepresentationCertificate::Domain::Homomorphism || !cert.system)
        throw PreconditionError("transfer: certificate does not represent a homomorphism system");
    return *cert.system;
}

void check_shape(const EquivalenceMap& map, const HomSystem& sys1, const HomSystem& sys2)
{
    if (map.sigma.size() != sys1.m() || map.affines.size() != sys1.m())
        throw PreconditionError("transfer: map has the wrong number of coordinates");
    std::set<std::size_t> img;
    for (auto s : map.sigma) {
        if (s >= sys2.m()) throw PreconditionError("transfer: sigma out of range");
        if (!img.insert(s).second) throw PreconditionError("transfer: sigma is not injective");
    }
}

void check_cover(const ColoredHypergraph& H, const EquivalenceMap& map)
{
    std::vector<char> covered(H.num_vertices, 0);
    std::set<std::size_t> img(map.sigma.begin(), map.sigma.end());
    for (const auto& e : H.edges)
        if (img.count(e.color))
            for (auto v : e.verts) covered[v] = 1;
    for (std::size_t v = 0; v < H.num_vertices; ++v)
        if (!covered[v])
            throw PreconditionError("transfer: edges colored by sigma do not cover vertex " + std::to_string(v) + " of H");
}

void check_automorphisms(const EquivalenceMap& map, const HomSystem& sys1, const HomSystem& sys2)
{
    if (sys1.group != sys2.group) throw PreconditionError("transfer: the two systems must share the group");
    std::int64_t n = sys1.group.exponent();
    for (std::size_t i = 0; i < map.affines.size(); ++i) {
        const auto& l = map.affines[i].linear;
        if (l.rows() != l.cols() || !det_coprime(l, n))
            throw PreconditionError("transfer: phi_" + std::to_string(i + 1) + " is not an automorphism");
    }
}

EquivalenceReport check_map(const EquivalenceMap& map, const HomSystem& sys1, const HomSystem& sys2, bool constancy)
{
    VerifyOptions vo;
    vo.constancy = constancy;
    auto rep = verify_equivalence(map, sys1, sys2, vo);
    if (!rep.exhaustive) throw PreconditionError("transfer: the map could not be certified exhaustively");
    if (!rep.lands_in || !rep.surjective || !rep.uniform || !rep.counts_match)
        throw PreconditionError("transfer: map is not a mu-to-1 surjection (" + rep.failure + ")");
    for (std::size_t i = 0; i < rep.constancy.size(); ++i)
        if (!rep.constancy[i])
            throw PreconditionError("transfer: fiber constancy fails at coordinate " + std::to_string(i + 1));
    return rep;
}

// Keeps the colors in the image of sigma, repainted and relabelled.
RepresentationCertificate push_forward(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                       const HomSystem& sys1)
{
    std::vector<std::optional<std::size_t>> inv(cert.K.num_colors);
    for (std::size_t i = 0; i < map.sigma.size(); ++i) inv[map.sigma[i]] = i;
    RepresentationCertificate out = cert;
    out.system = sys1;
    auto recolor = [&](const ColoredHypergraph& g, bool relabel) {
        ColoredHypergraph r = g;
        r.edges.clear();
        r.num_colors = map.sigma.size();
        for (const auto& e : g.edges) {
            if (e.color >= inv.size() || !inv[e.color]) continue;
            HyperEdge ne = e;
            ne.color = *inv[e.color];
            if (relabel && e.label) ne.label = apply_coordinate(map.affines[ne.color], sys1.group, *e.label);
            r.edges.push_back(std::move(ne));
        }
        return r;
    };
    out.K = recolor(cert.K, true);
    out.H = recolor(cert.H, false);
    out.gamma.resize(map.sigma.size());
    for (std::size_t i = 0; i < map.sigma.size(); ++i) out.gamma[i] = cert.gamma[map.sigma[i]];
    out.ground_size = sys1.group.order();
    return out;
}

Rational dropped_gamma_product(const RepresentationCertificate& cert, const EquivalenceMap& map)
{
    std::set<std::size_t> img(map.sigma.begin(), map.sigma.end());
    Rational prod = 1;
    for (std::size_t j = 0; j < cert.gamma.size(); ++j)
        if (!img.count(j)) prod *= cert.gamma[j];
    return prod;
}

TransferLayer make_layer(MapKind kind, const EquivalenceMap& map, const HomSystem& sys2, const HomSystem& sys1)
{
    TransferLayer layer;
    layer.kind = kind;
    layer.map = map;
    layer.map.kind = kind;
    layer.source = sys2;
    layer.target = sys1;
    return layer;
}

} // namespace

RepresentationCertificate transfer_1_auto(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                          const HomSystem& sys1)
{
    const auto& sys2 = represented_system(cert);
    check_shape(map, sys1, sys2);
    check_cover(cert.H, map);
    check_automorphisms(map, sys1, sys2);
    if (map.mu != 1) throw PreconditionError("transfer_1_auto: mu must be 1");
    check_map(map, sys1, sys2, false);
    auto out = push_forward(cert, map, sys1);
    out.layers.push_back(make_layer(MapKind::OneAuto, map, sys2, sys1));
    return out;
}

RepresentationCertificate transfer_mu_auto(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                           const HomSystem& sys1)
{
    const auto& sys2 = represented_system(cert);
    check_shape(map, sys1, sys2);
    check_cover(cert.H, map);
    check_automorphisms(map, sys1, sys2);
    check_map(map, sys1, sys2, false);
    auto layer = make_layer(MapKind::MuAuto, map, sys2, sys1);
    // Fibers are cosets of the homogeneous solutions the linear parts kill.
    HomSystem hom2 = sys2;
    std::fill(hom2.rhs.begin(), hom2.rhs.end(), 0);
    EquivalenceMap lin = map;
    for (auto& a : lin.affines) std::fill(a.shift.begin(), a.shift.end(), 0);
    Tuple zero(sys1.matrix.cols(), 0);
    for_each_solution(hom2, [&](const Tuple& z) {
        if (apply_map(lin, sys1.group, z) == zero) layer.kernel.push_back(z);
    });
    std::sort(layer.kernel.begin(), layer.kernel.end());
    if (Int(static_cast<unsigned long>(layer.kernel.size())) != map.mu)
        throw PreconditionError("transfer_mu_auto: fiber kernel size differs from mu");
    auto out = push_forward(cert, map, sys1);
    out.p = cert.p * dropped_gamma_product(cert, map);
    out.p.canonicalize();
    out.layers.push_back(std::move(layer));
    return out;
}

RepresentationCertificate transfer_mu_equiv_1(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                              const HomSystem& sys1)
{
    const auto& sys2 = represented_system(cert);
    check_shape(map, sys1, sys2);
    if (sys1.m() != sys2.m()) throw PreconditionError("transfer_mu_equiv_1: both systems need the same variables");
    for (std::size_t i = 0; i < map.sigma.size(); ++i) {
        if (map.sigma[i] != i) throw PreconditionError("transfer_mu_equiv_1: sigma must be the identity");
        if (map.affines[i].linear != map.affines[0].linear || map.affines[i].shift != map.affines[0].shift)
            throw PreconditionError("transfer_mu_equiv_1: all coordinates must share phi_1");
    }
    const auto& phi = map.affines[0];
    Int g2 = sys2.group.order(), g1 = sys1.group.order();
    if (g2 % g1 != 0) throw PreconditionError("transfer_mu_equiv_1: |G1| must divide |G2|");
    Int beta = g2 / g1;
    if (hom_kernel_size(phi.linear, sys2.group.orders, sys1.group.orders) != beta)
        throw PreconditionError("transfer_mu_equiv_1: phi_1 is not surjective");
    Int want = 1;
    for (std::size_t i = 0; i < sys1.m(); ++i) want *= beta;
    if (map.mu != want) throw PreconditionError("transfer_mu_equiv_1: fibers are not products (mu != beta^m)");
    check_map(map, sys1, sys2, false);
    auto layer = make_layer(MapKind::MuEquiv1, map, sys2, sys1);
    layer.beta = to_i64(beta);
    AffineMap lin{phi.linear, Tuple(phi.shift.size(), 0)};
    Tuple zero(sys1.block, 0);
    for_each_element(sys2.group, [&](const Tuple& z) {
        if (apply_coordinate(lin, sys1.group, z) == zero) layer.kernel.push_back(z);
    });
    std::sort(layer.kernel.begin(), layer.kernel.end());
    auto out = push_forward(cert, map, sys1);
    out.layers.push_back(std::move(layer));
    return out;
}

RepresentationCertificate transfer_mu_equiv_2(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                              const HomSystem& sys1)
{
    const auto& sys2 = represented_system(cert);
    if (!cert.strong) throw PreconditionError("transfer_mu_equiv_2: input certificate must be strong");
    check_shape(map, sys1, sys2);
    check_cover(cert.H, map);
    check_map(map, sys1, sys2, true);
    auto out = push_forward(cert, map, sys1);
    Rational gratio = to_rational(sys1.group.order()) / to_rational(sys2.group.order()); // |G1| / |G2|
    Rational sprod = 1;
    for (std::size_t i = 0; i < map.sigma.size(); ++i) {
        Rational s2 = to_rational(projection_size(sys2, map.sigma[i]));
        Rational s1 = to_rational(projection_size(sys1, i));
        out.gamma[i] = cert.gamma[map.sigma[i]] * s2 / s1 * gratio;
        out.gamma[i].canonicalize();
        sprod *= s1 / s2;
    }
    std::size_t m1 = map.sigma.size();
    out.p = to_rational(map.mu) * cert.p * pow_rational(1 / gratio, m1 - 1) * dropped_gamma_product(cert, map) * sprod;
    out.p.canonicalize();
    out.layers.push_back(make_layer(MapKind::MuEquiv2, map, sys2, sys1));
    return out;
}

RepresentationCertificate transfer(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                   const HomSystem& sys1)
{
    switch (map.kind) {
    case MapKind::OneAuto: return transfer_1_auto(cert, map, sys1);
    case MapKind::MuAuto: return transfer_mu_auto(cert, map, sys1);
    case MapKind::MuEquiv1: return transfer_mu_equiv_1(cert, map, sys1);
    case MapKind::MuEquiv2: return transfer_mu_equiv_2(cert, map, sys1);
    default: throw PreconditionError("transfer: no transfer rule for map kind " + to_string(map.kind));
    }
}

RestrictedHypergraph restrict_certificate(const RepresentationCertificate& cert, const LabelDomains& X)
{
    return restrict_to_domains(cert.K, X);
}

RemovalResult removal_deletion(const RepresentationCertificate& cert, const LabelDomains& X,
                               const std::vector<std::size_t>& eprime, std::uint64_t cap)
{
    const auto& sys = represented_system(cert);
    std::size_t m = cert.m();
    if (X.size() != m) throw InvalidInput("removal_deletion: one domain per variable expected");
    RemovalResult res;
    auto kx = restrict_certificate(cert, X);
    for (auto e : eprime)
        if (e >= kx.graph.edges.size()) throw InvalidInput("removal_deletion: edge index out of range");
    auto rest = remove_edges(kx.graph, eprime);
    std::uint64_t left = 0;
    CopySearchOptions copt;
    copt.cap = cap;
    copt.distinct_edge_sets = true;
    for_each_copy(cert.H, rest, [&](const Copy&) { ++left; }, copt);
    if (left > 0) {
        res.failure = std::to_string(left) + " copies of H survive in K_X without E'";
        return res;
    }
    res.precondition_ok = true;

    std::map<std::pair<std::size_t, Tuple>, std::uint64_t> hits;
    for (auto e : eprime) {
        const auto& edge = kx.graph.edges[e];
        ++hits[{edge.color, *edge.label}];
    }
    Rational lam = cert.lambda();
    res.Xprime.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational th = lam * cert.gamma[i] / Rational(static_cast<unsigned long>(m));
        th.canonicalize();
        res.thresholds.push_back(th);
    }
    for (const auto& [key, cnt] : hits)
        if (Rational(static_cast<unsigned long>(cnt)) >= res.thresholds[key.first]) res.Xprime[key.first].insert(key.second);

    Domains dom(m);
    std::vector<Tuple> elems;
    for (std::size_t i = 0; i < m; ++i) {
        std::set<Tuple> d;
        if (X[i]) {
            d = *X[i];
        } else {
            if (elems.empty()) elems = all_elements(sys.group, cap);
            d.insert(elems.begin(), elems.end());
        }
        for (const auto& x : res.Xprime[i]) d.erase(x);
        dom[i] = std::move(d);
    }
    res.remaining = enumerate_solutions(sys, dom, Strategy::Automatic, cap).count();
    res.verified = res.remaining == 0;
    return res;
}

} // namespace hsys
