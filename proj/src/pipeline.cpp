#include "hsys/pipeline.hpp"

#include <algorithm>

#include "hsys/group.hpp"

namespace hsys {

namespace {

std::int64_t homocyclic_modulus(const HomSystem& sys)
{
    if (!sys.group.is_homocyclic()) throw PreconditionError("stage expects a homocyclic group Z_n^t");
    return sys.group.orders.front();
}

HomSystem with_matrix(const HomSystem& like, IntMatrix a)
{
    HomSystem s{std::move(a), like.block, like.group, {}};
    s.rhs.assign(s.matrix.rows(), 0);
    validate(s);
    return s;
}

std::size_t rank_of(const IntMatrix& a)
{
    auto snf = smith_normal_form(a);
    return static_cast<std::size_t>(std::count_if(snf.diag.begin(), snf.diag.end(), [](const Int& d) { return d != 0; }));
}

IntMatrix diagonal_block(const std::vector<Int>& d)
{
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

} // namespace

DehomogenizeResult dehomogenize(const HomSystem& sys)
{
    DehomogenizeResult out;
    auto y = least_solution(sys);
    if (!y) return out;
    out.has_solution = true;
    out.particular = *y;
    std::size_t t = sys.block;
    EquivalenceMap map = identity_map(sys.m(), t, MapKind::OneAuto);
    for (std::size_t i = 0; i < sys.m(); ++i) map.affines[i].shift = block_value(*y, i, t);
    HomSystem h = sys;
    std::fill(h.rhs.begin(), h.rhs.end(), 0);
    out.stage = StageResult{h, map, sys.homogeneous() ? "already homogeneous" : "shift by least particular solution"};
    return out;
}

StageResult lift_to_homocyclic(const HomSystem& sys)
{
    std::size_t t = sys.block;
    std::int64_t n = sys.group.exponent();
    IntMatrix a = sys.matrix;
    Tuple b = sys.rhs;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::int64_t f = n / sys.modulus(i);
        if (f == 1) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= static_cast<long>(f);
        b[i] *= f;
    }
    HomSystem lifted{a, t, FiniteAbelianGroup::homocyclic(n, t), b};
    validate(lifted);
    Int beta = lifted.group.order() / sys.group.order();
    Int mu;
    mpz_pow_ui(mu.get_mpz_t(), beta.get_mpz_t(), sys.m());
    EquivalenceMap map = identity_map(sys.m(), t, MapKind::MuEquiv1);
    map.mu = mu;
    return {lifted, map, "beta = " + beta.get_str()};
}

StageResult remove_redundant_rows(const HomSystem& sys)
{
    homocyclic_modulus(sys);
    if (!sys.homogeneous()) throw PreconditionError("remove_redundant_rows: system must be homogeneous");
    std::size_t t = sys.block;
    auto snf = smith_normal_form(sys.matrix);
    IntMatrix a1 = snf.U * sys.matrix;
    std::size_t r = rank_of(sys.matrix);
    std::size_t keep = std::max<std::size_t>(1, (r + t - 1) / t) * t;
    IntMatrix kept = a1.submatrix(0, 0, keep, a1.cols());
    HomSystem out = with_matrix(sys, kept);
    return {out, identity_map(sys.m(), t, MapKind::RowReduce),
            "integer rank " + std::to_string(r) + ", kept " + std::to_string(keep / t) + " block equations"};
}

StageResult repair_degenerate(const HomSystem& sys)
{
    std::int64_t n = homocyclic_modulus(sys);
    std::size_t t = sys.block;
    IntMatrix a = sys.matrix;
    std::string notes;
    std::size_t zero_cols = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < a.rows() && zero; ++i) zero = a(i, j) == 0;
        if (!zero) continue;
        ++zero_cols;
        for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) = n;
    }
    if (zero_cols) notes += std::to_string(zero_cols) + " zero columns set to n; ";
    std::size_t kt = a.rows();
    if (kt > a.cols()) throw PreconditionError("repair_degenerate: more equations than variables");
    if (det(a.submatrix(0, 0, kt, kt)) == 0) {
        Int step = n;
        for (unsigned e = 1;; ++e, step *= n) {
            IntMatrix b = a;
            for (std::size_t i = 0; i < kt; ++i) b(i, i) += step;
            if (det(b.submatrix(0, 0, kt, kt)) != 0) {
                a = b;
                notes += "added n^" + std::to_string(e) + " to the leading diagonal";
                break;
            }
            if (e > 64) throw std::logic_error("repair_degenerate: no exponent found");
        }
    }
    return {with_matrix(sys, a), identity_map(sys.m(), t, MapKind::RowReduce), notes};
}

RowReduceStage row_reduce_stage(const HomSystem& sys)
{
    auto rr = row_reduce_to_gcd_rows(sys.matrix);
    return {{with_matrix(sys, rr.A1), identity_map(sys.m(), sys.block, MapKind::RowReduce), "row contents = Smith diagonal"},
            rr.diag};
}

StageResult simulate_independent_vectors(const HomSystem& a1, const std::vector<Int>& divisors)
{
    std::int64_t n = homocyclic_modulus(a1);
    std::size_t t = a1.block;
    for (const auto& d : divisors)
        if (d == 0) throw PreconditionError("simulate: zero row content (degenerate system not repaired)");
    IntMatrix a2 = divide_rows_by_gcd(a1.matrix, divisors);
    std::vector<Int> y(divisors.size());
    Int mu = 1;
    for (std::size_t r = 0; r < divisors.size(); ++r) {
        std::int64_t g = gcd64(mod(divisors[r], n), n);
        y[r] = n / g;
        mu *= n / g;
    }
    HomSystem a3 = with_matrix(a1, hstack(a2, diagonal_block(y)));
    std::vector<std::size_t> sigma(a1.m());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = i;
    return {a3, projection_map(sigma, t, mu, MapKind::MuAuto), "simulating columns n / gcd(n, d_r)"};
}

StageResult determinantal_to_identity(const HomSystem& a3, std::size_t m)
{
    std::size_t t = a3.block, kt = a3.matrix.rows(), mt = m * t;
    if (a3.matrix.cols() < mt) throw InvalidInput("determinantal_to_identity: variable count mismatch");
    IntMatrix a2 = a3.matrix.submatrix(0, 0, kt, mt);
    IntMatrix y = a3.matrix.submatrix(0, mt, kt, a3.matrix.cols() - mt);
    IntMatrix nmat = extend_to_det(a2);
    Int d = det(nmat);
    if (d != 1 && d != -1) throw PreconditionError("determinantal_to_identity: D_kt of the leading part is not 1");
    std::size_t zt = mt - kt, yt = y.cols();
    IntMatrix a4(mt, mt + zt + yt);
    for (std::size_t i = 0; i < mt; ++i)
        for (std::size_t j = 0; j < mt; ++j) a4(i, j) = nmat(i, j);
    for (std::size_t i = 0; i < kt; ++i)
        for (std::size_t j = 0; j < yt; ++j) a4(i, mt + zt + j) = y(i, j);
    for (std::size_t i = 0; i < zt; ++i) a4(kt + i, mt + i) = 1;
    IntMatrix a5 = inverse_unimodular(nmat) * a4;
    HomSystem out = with_matrix(a3, a5);
    if (!out.is_parametric()) throw std::logic_error("determinantal_to_identity: result is not (I | B)");
    std::vector<std::size_t> sigma;
    for (std::size_t i = 0; i < m; ++i) sigma.push_back(i);
    for (std::size_t i = 0; i < yt / t; ++i) sigma.push_back(m + zt / t + i);
    return {out, projection_map(sigma, t, 1, MapKind::OneAuto), "extension rows eliminate the added variables"};
}

BlockReduction block_row_reduce(const HomSystem& a5)
{
    if (!a5.is_parametric()) throw PreconditionError("block_row_reduce: system must have shape (I | B)");
    std::int64_t n = homocyclic_modulus(a5);
    std::size_t t = a5.block, k = a5.k(), kt = k * t, bc = a5.matrix.cols() - kt;
    if (bc < t) throw PreconditionError("block_row_reduce: B narrower than one block");
    IntMatrix b = a5.matrix.submatrix(0, kt, kt, bc);
    BlockReduction out;
    out.B2 = IntMatrix(kt, bc);
    IntMatrix b1(kt, bc);
    EquivalenceMap map = identity_map(a5.m(), t, MapKind::OneAuto);
    std::string notes;
    for (std::size_t i = 0; i < k; ++i) {
        IntMatrix bi = b.submatrix(i * t, 0, t, bc);
        if (rank_of(bi) < t) {
            Int step = n;
            for (unsigned e = 1;; ++e, step *= n) {
                IntMatrix c = bi;
                for (std::size_t p = 0; p < t; ++p) c(p, p) += step;
                if (rank_of(c) == t) {
                    bi = c;
                    notes += "block " + std::to_string(i + 1) + " repaired with n^" + std::to_string(e) + "; ";
                    break;
                }
                if (e > 64) throw std::logic_error("block_row_reduce: no repair exponent found");
            }
        }
        auto rr = row_reduce_to_gcd_rows(bi);
        IntMatrix q = divide_rows_by_gcd(rr.A1, rr.diag);
        for (std::size_t p = 0; p < t; ++p)
            for (std::size_t j = 0; j < bc; ++j) {
                b1(i * t + p, j) = rr.A1(p, j);
                out.B2(i * t + p, j) = q(p, j);
            }
        out.divisors.push_back(rr.diag);
        map.affines[i].linear = inverse_unimodular(rr.U);
    }
    out.stage = {with_matrix(a5, hstack(IntMatrix::identity(kt), b1)), map, notes + "x_i = U_i^{-1} x'_i"};
    return out;
}

HomSystem restrict_to_subgroup(const HomSystem& a6, std::int64_t order)
{
    HomSystem s{a6.matrix, a6.block, FiniteAbelianGroup::homocyclic(order, a6.block), Tuple(a6.matrix.rows(), 0)};
    validate(s);
    return s;
}

std::vector<SplitComponent> split_to_J_systems(const HomSystem& a6, const BlockReduction& br)
{
    if (!a6.is_parametric()) throw PreconditionError("split: system must have shape (I | B)");
    std::int64_t n = homocyclic_modulus(a6);
    std::size_t t = a6.block, m = a6.k(), mt = m * t, pc = a6.matrix.cols() - mt;
    std::size_t zc = mt, pc0 = mt + t, wc = mt + t + pc;
    IntMatrix b1 = a6.matrix.submatrix(0, mt, mt, pc);

    std::vector<std::pair<std::size_t, std::size_t>> kappas{{1, 0}};
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= t; ++j) kappas.emplace_back(i, j);

    std::vector<SplitComponent> out;
    for (auto kappa : kappas) {
        SplitComponent c;
        c.kappa = kappa;
        bool base = kappa.second == 0;
        std::size_t star = base ? 0 : (kappa.first - 1) * t + (kappa.second - 1);
        c.order = base ? n : gcd64(mod(br.divisors[kappa.first - 1][kappa.second - 1], n), n);
        IntMatrix j(mt + t, mt + t + pc + t);
        for (std::size_t r = 0; r < mt; ++r) {
            j(r, r) = 1;
            const IntMatrix& src = (!base && r == star) ? b1 : br.B2;
            for (std::size_t q = 0; q < pc; ++q) j(r, pc0 + q) = src(r, q);
        }
        if (!base) j(star, wc) = -1;
        for (std::size_t q = 0; q < t; ++q) {
            j(mt + q, zc + q) = 1;
            j(mt + q, wc + q) = 1;
        }
        c.J = HomSystem{j, t, FiniteAbelianGroup::homocyclic(c.order, t), Tuple(j.rows(), 0)};
        validate(c.J);

        EquivalenceMap f;
        f.kind = MapKind::Split;
        f.mu = 1;
        for (std::size_t q = 0; q < t; ++q) f.mu *= c.order;
        for (std::size_t i = 0; i < a6.m(); ++i) {
            IntMatrix lin = IntMatrix::identity(t);
            if (i < m)
                for (std::size_t q = 0; q < t; ++q) lin(q, q) = br.divisors[i][q];
            f.sigma.push_back(i < m ? i : i + 1);
            f.affines.push_back({lin, Tuple(t, 0)});
        }
        c.f = f;
        out.push_back(std::move(c));
    }
    return out;
}

StageResult circularize(const HomSystem& j, std::int64_t n)
{
    if (!j.is_parametric()) throw PreconditionError("circularize: system must have shape (I | B)");
    std::size_t t = j.block, k = j.k(), m = j.m(), kt = k * t;
    std::size_t w = m - k, r = w * t;
    if (w == 0) throw PreconditionError("circularize: no parameter variables");
    IntMatrix b = j.matrix.submatrix(0, kt, kt, r);
    IntMatrix stack((4 * k + 1) * r, r);
    std::size_t row = 0;
    for (std::size_t i = 0; i < k; ++i) {
        IntMatrix bi = b.submatrix(i * t, 0, t, r);
        IntMatrix b4 = extend_to_det(bi);
        if (!det_coprime(b4, n)) throw PreconditionError("circularize: block determinantal not coprime with n");
        IntMatrix ext = circular_extension(b4, n);
        std::size_t from = i == 0 ? 0 : r;
        for (std::size_t p = from; p < ext.rows(); ++p, ++row)
            for (std::size_t q = 0; q < r; ++q) stack(row, q) = ext(p, q);
    }
    IntMatrix jbar = hstack(IntMatrix::identity(stack.rows()), stack);
    HomSystem out{jbar, t, j.group, Tuple(jbar.rows(), 0)};
    validate(out);
    std::vector<std::size_t> sigma;
    for (std::size_t i = 0; i < k; ++i) sigma.push_back((4 * i + 2) * w);
    for (std::size_t i = k; i < m; ++i) sigma.push_back((4 * k + 1) * w + (i - k));
    return {out, projection_map(sigma, t, 1, MapKind::OneAuto), "block rows extended to det 1 and made circular"};
}

StageResult join_systems(const std::vector<SplitComponent>& parts, const HomSystem& a6,
                         const std::vector<std::vector<Int>>& divisors)
{
    if (parts.empty()) throw InvalidInput("join: no components");
    std::int64_t n = homocyclic_modulus(a6);
    std::size_t t = a6.block, u = parts.size(), bt = t * u;
    std::size_t rows = parts[0].Jbar.matrix.rows(), cols = parts[0].Jbar.matrix.cols();
    for (const auto& p : parts)
        if (p.Jbar.matrix.rows() != rows || p.Jbar.matrix.cols() != cols || p.Jbar.block != t)
            throw InvalidInput("join: dimension mismatch");
    IntMatrix a7(rows * u, cols * u);
    for (std::size_t c = 0; c < u; ++c) {
        const auto& jb = parts[c].Jbar.matrix;
        for (std::size_t w = 0; w < rows; ++w)
            for (std::size_t v = 0; v < cols; ++v)
                if (jb(w, v) != 0) a7(w * u + c, v * u + c) = jb(w, v);
    }
    std::vector<std::int64_t> orders;
    for (std::size_t q = 0; q < t; ++q)
        for (const auto& p : parts) orders.push_back(p.order);
    HomSystem out{a7, bt, FiniteAbelianGroup::product(orders), Tuple(a7.rows(), 0)};
    validate(out);

    std::size_t k6 = a6.k();
    EquivalenceMap map;
    map.kind = MapKind::Join;
    for (std::size_t i = 0; i < a6.m(); ++i) {
        std::size_t ji = i < k6 ? i : i + 1;
        map.sigma.push_back(parts[0].circ.sigma[ji]);
        IntMatrix lin(t, bt);
        for (std::size_t q = 0; q < t; ++q)
            for (std::size_t c = 0; c < u; ++c) {
                Int v = n / parts[c].order;
                if (i < k6) v *= divisors[i][q];
                lin(q, q * u + c) = v;
            }
        map.affines.push_back({lin, Tuple(t, 0)});
    }
    Int s7 = count_solutions(out), s6 = count_solutions(a6);
    if (s6 == 0 || s7 % s6 != 0) throw std::logic_error("join: solution counts are not commensurable");
    map.mu = s7 / s6;
    return {out, map, std::to_string(u) + " components interleaved"};
}

bool PipelineTrace::certified() const
{
    for (const auto& s : stages)
        if (s.map && (!s.report || !s.report->ok())) return false;
    for (const auto& r : split_reports)
        if (!r.ok()) return false;
    for (const auto& r : circ_reports)
        if (!r.ok()) return false;
    return no_solution || final_is_circular;
}

bool PipelineTrace::exhaustive() const
{
    for (const auto& s : stages)
        if (s.map && (!s.report || !s.report->exhaustive)) return false;
    for (const auto& r : split_reports)
        if (!r.exhaustive) return false;
    for (const auto& r : circ_reports)
        if (!r.exhaustive) return false;
    return true;
}

PipelineTrace run_full_pipeline(const HomSystem& sys, const PipelineOptions& opt)
{
    validate(sys);
    PipelineTrace trace;
    trace.stages.push_back({"input", sys, std::nullopt, "", std::nullopt});
    auto add = [&](const std::string& label, StageResult st) {
        TraceStage s{label, std::move(st.system), std::move(st.map), std::move(st.notes), std::nullopt};
        if (opt.certify) {
            VerifyOptions v = opt.verify;
            v.constancy = opt.constancy && label == "join";
            s.report = verify_equivalence(*s.map, trace.stages.back().system, s.system, v);
        }
        trace.total_mu *= s.map->mu;
        trace.stages.push_back(std::move(s));
    };
    auto cur = [&]() -> const HomSystem& { return trace.stages.back().system; };

    auto dh = dehomogenize(sys);
    if (!dh.has_solution) {
        trace.no_solution = true;
        trace.total_mu = 0;
        return trace;
    }
    add("dehomogenize", *dh.stage);
    add("lift", lift_to_homocyclic(cur()));
    trace.n = cur().group.orders.front();
    if (trace.n < 2) throw PreconditionError("pipeline: trivial group");
    if (cur().k() > cur().m()) add("remove-redundant", remove_redundant_rows(cur()));
    if (cur().m() < cur().k() + 2) {
        HomSystem p = pad_variables(cur());
        std::vector<std::size_t> sigma(cur().m());
        for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = i;
        Int mu = cur().group.order() * cur().group.order();
        add("pad", {p, projection_map(sigma, cur().block, mu, MapKind::MuAuto), "two variables with coefficient |G|"});
    }
    {
        auto rep = repair_degenerate(cur());
        if (rep.system.matrix != cur().matrix) add("repair", rep);
    }
    std::size_t m = cur().m();
    auto rr = row_reduce_stage(cur());
    add("row-reduce", rr.stage);
    add("simulate", simulate_independent_vectors(cur(), rr.divisors));
    add("identity-form", determinantal_to_identity(cur(), m));
    auto br = block_row_reduce(cur());
    add("block-reduce", br.stage);
    trace.divisors = br.divisors;
    const HomSystem a6 = cur();
    trace.upsilon = split_to_J_systems(a6, br);
    for (auto& c : trace.upsilon) {
        auto circ = circularize(c.J, trace.n);
        c.Jbar = circ.system;
        c.circ = circ.map;
        if (opt.certify) {
            trace.split_reports.push_back(verify_equivalence(c.f, restrict_to_subgroup(a6, c.order), c.J, opt.verify));
            trace.circ_reports.push_back(verify_equivalence(c.circ, c.J, c.Jbar, opt.verify));
        }
    }
    add("join", join_systems(trace.upsilon, a6, br.divisors));
    trace.final_is_circular = is_block_n_circular(cur().matrix, 1, trace.n);
    return trace;
}

EquivalenceMap composite_map(const PipelineTrace& trace)
{
    if (trace.stages.size() < 2) return identity_map(trace.stages.front().system.m(), trace.stages.front().system.block);
    EquivalenceMap acc = *trace.stages[1].map;
    for (std::size_t i = 2; i < trace.stages.size(); ++i) acc = compose(acc, *trace.stages[i].map);
    return acc;
}

PartitionReport check_partition(const IntMatrix& a, const FiniteAbelianGroup& g, std::uint64_t cap)
{
    PartitionReport rep;
    std::size_t k = a.rows();
    auto snf = smith_normal_form(a);
    IntMatrix a1 = snf.U * a;
    IntMatrix a2 = a1;
    rep.divisors.assign(k, 0);
    for (std::size_t i = 0; i < k && i < snf.diag.size(); ++i) rep.divisors[i] = snf.diag[i];
    for (std::size_t i = 0; i < k; ++i) {
        if (rep.divisors[i] == 0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j)
            mpz_divexact(a2(i, j).get_mpz_t(), a1(i, j).get_mpz_t(), rep.divisors[i].get_mpz_t());
    }
    auto whole = enumerate_solutions(scalar_system(a, g), {}, Strategy::Automatic, cap).solutions;
    rep.solutions = whole.size();

    GroupRef G = make_group(g);
    std::int64_t e = g.exponent();
    std::vector<std::vector<GroupElement>> kernels(k);
    std::vector<std::int64_t> radix(k);
    for (std::size_t i = 0; i < k; ++i) {
        kernels[i] = kernel_of_mult(mod(rep.divisors[i], e), G);
        radix[i] = static_cast<std::int64_t>(kernels[i].size());
    }
    std::vector<Tuple> pieces;
    for (Odometer od(radix); !od.done(); od.next()) {
        Tuple b;
        for (std::size_t i = 0; i < k; ++i) {
            const auto& c = kernels[i][od.value()[i]].coords;
            b.insert(b.end(), c.begin(), c.end());
        }
        auto part = enumerate_solutions(scalar_system(a2, g, b), {}, Strategy::Automatic, cap).solutions;
        ++rep.pieces;
        rep.total += part.size();
        pieces.insert(pieces.end(), part.begin(), part.end());
    }
    std::sort(pieces.begin(), pieces.end());
    rep.disjoint = std::adjacent_find(pieces.begin(), pieces.end()) == pieces.end();
    rep.holds = rep.disjoint && pieces == whole;
    if (!rep.disjoint) rep.failure = "pieces overlap";
    else if (!rep.holds) rep.failure = "union differs from the solution set";
    return rep;
}

} // namespace hsys
