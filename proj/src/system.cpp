#include "hsys/system.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "hsys/lattice.hpp"

namespace hsys {

bool HomSystem::homogeneous() const
{
    return std::all_of(rhs.begin(), rhs.end(), [](std::int64_t v) { return v == 0; });
}

bool HomSystem::is_parametric() const
{
    std::size_t kt = matrix.rows();
    if (kt > matrix.cols()) return false;
    for (std::size_t i = 0; i < kt; ++i)
        for (std::size_t j = 0; j < kt; ++j)
            if (matrix(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

void validate(const HomSystem& sys)
{
    std::size_t t = sys.block;
    if (t == 0 || sys.group.rank() != t) throw InvalidInput("system: block size must equal group rank");
    if (sys.matrix.rows() % t || sys.matrix.cols() % t) throw InvalidInput("system: matrix not divisible into blocks");
    if (sys.rhs.size() != sys.matrix.rows()) throw InvalidInput("system: rhs length mismatch");
    for (auto n : sys.group.orders)
        if (n < 1) throw InvalidInput("system: group orders must be positive");
    for (std::size_t i = 0; i < sys.matrix.rows(); ++i) {
        std::int64_t np = sys.modulus(i);
        if (sys.rhs[i] < 0 || sys.rhs[i] >= np) throw InvalidInput("system: rhs not reduced");
        for (std::size_t j = 0; j < sys.matrix.cols(); ++j) {
            std::int64_t nq = sys.modulus(j);
            if (mod(sys.matrix(i, j) * static_cast<long>(nq), np) != 0)
                throw InvalidInput("system: entry is not a homomorphism between the coordinate groups");
        }
    }
}

static Tuple reduce_rhs(const Tuple& rhs, std::size_t rows, const FiniteAbelianGroup& g)
{
    Tuple b(rows, 0);
    if (!rhs.empty()) {
        if (rhs.size() != rows) throw InvalidInput("system: rhs length mismatch");
        for (std::size_t i = 0; i < rows; ++i) b[i] = mod(rhs[i], g.orders[i % g.rank()]);
    }
    return b;
}

HomSystem make_system(const IntMatrix& a, const FiniteAbelianGroup& g, const Tuple& rhs)
{
    HomSystem s{a, g.rank(), g, reduce_rhs(rhs, a.rows(), g)};
    validate(s);
    return s;
}

HomSystem scalar_system(const IntMatrix& a, const FiniteAbelianGroup& g, const Tuple& rhs)
{
    std::size_t t = g.rank();
    IntMatrix big(a.rows() * t, a.cols() * t);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t q = 0; q < t; ++q) big(i * t + q, j * t + q) = a(i, j);
    return make_system(big, g, rhs);
}

HomSystem from_blocks(const std::vector<std::vector<IntMatrix>>& blocks, const FiniteAbelianGroup& g,
                      const Tuple& rhs)
{
    std::size_t t = g.rank();
    if (blocks.empty() || blocks[0].empty()) throw InvalidInput("from_blocks: empty grid");
    std::size_t k = blocks.size(), m = blocks[0].size();
    IntMatrix big(k * t, m * t);
    for (std::size_t i = 0; i < k; ++i) {
        if (blocks[i].size() != m) throw InvalidInput("from_blocks: ragged grid");
        for (std::size_t j = 0; j < m; ++j) {
            const auto& b = blocks[i][j];
            if (b.rows() != t || b.cols() != t) throw InvalidInput("from_blocks: block size must equal group rank");
            for (std::size_t p = 0; p < t; ++p)
                for (std::size_t q = 0; q < t; ++q) big(i * t + p, j * t + q) = b(p, q);
        }
    }
    return make_system(big, g, rhs);
}

Tuple residual(const HomSystem& sys, const Tuple& x)
{
    if (x.size() != sys.matrix.cols()) throw InvalidInput("tuple length mismatch");
    Tuple r(sys.matrix.rows());
    for (std::size_t i = 0; i < sys.matrix.rows(); ++i) {
        std::int64_t np = sys.modulus(i);
        __int128 s = 0;
        for (std::size_t j = 0; j < sys.matrix.cols(); ++j)
            if (x[j]) s = (s + static_cast<__int128>(mod(sys.matrix(i, j), np)) * x[j]) % np;
        r[i] = mod(static_cast<std::int64_t>(s) - sys.rhs[i], np);
    }
    return r;
}

bool satisfies(const HomSystem& sys, const Tuple& x)
{
    for (std::size_t j = 0; j < x.size() && j < sys.matrix.cols(); ++j)
        if (x[j] < 0 || x[j] >= sys.modulus(j)) return false;
    auto r = residual(sys, x);
    return std::all_of(r.begin(), r.end(), [](std::int64_t v) { return v == 0; });
}

Tuple block_value(const Tuple& x, std::size_t i, std::size_t t)
{
    return Tuple(x.begin() + i * t, x.begin() + (i + 1) * t);
}

namespace {

Int domain_product(const HomSystem& sys, const Domains& domains, std::size_t from, std::size_t to)
{
    Int p = 1;
    for (std::size_t i = from; i < to; ++i) {
        if (i < domains.size() && domains[i]) p *= static_cast<unsigned long>(domains[i]->size());
        else p *= sys.group.order();
    }
    return p;
}

bool in_domain(const Domains& domains, const Tuple& x, std::size_t i, std::size_t t)
{
    if (i >= domains.size() || !domains[i]) return true;
    return domains[i]->count(block_value(x, i, t)) > 0;
}

std::vector<Tuple> block_values(const HomSystem& sys, const Domains& domains, std::size_t i)
{
    if (i < domains.size() && domains[i]) return {domains[i]->begin(), domains[i]->end()};
    std::vector<Tuple> all;
    for (Odometer od(sys.group.orders); !od.done(); od.next()) all.push_back(od.value());
    return all;
}

// Depth-first scan over block variables with incremental row sums.
void full_scan(const HomSystem& sys, const Domains& domains, const std::function<void(const Tuple&)>& fn)
{
    std::size_t t = sys.block, m = sys.m(), rows = sys.matrix.rows();
    std::vector<std::vector<std::int64_t>> coef(rows, std::vector<std::int64_t>(sys.matrix.cols()));
    std::vector<std::size_t> last(rows, 0);
    std::vector<bool> has(rows, false);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < sys.matrix.cols(); ++j) {
            coef[i][j] = mod(sys.matrix(i, j), sys.modulus(i));
            if (coef[i][j] != 0) {
                last[i] = j / t;
                has[i] = true;
            }
        }
    std::vector<std::vector<std::size_t>> check_at(m);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!has[i]) {
            if (sys.rhs[i] != 0) return;
            continue;
        }
        check_at[last[i]].push_back(i);
    }
    std::vector<std::vector<Tuple>> values(m);
    for (std::size_t i = 0; i < m; ++i) values[i] = block_values(sys, domains, i);
    Tuple x(sys.matrix.cols(), 0);
    std::vector<std::vector<std::int64_t>> sums(m + 1, std::vector<std::int64_t>(rows, 0));
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == m) {
            fn(x);
            return;
        }
        for (const auto& v : values[c]) {
            auto& s = sums[c + 1];
            for (std::size_t i = 0; i < rows; ++i) {
                std::int64_t np = sys.modulus(i);
                std::int64_t acc = sums[c][i];
                for (std::size_t q = 0; q < t; ++q)
                    if (v[q]) acc = (acc + coef[i][c * t + q] * v[q]) % np;
                s[i] = acc;
            }
            bool ok = true;
            for (auto i : check_at[c])
                if (s[i] != sys.rhs[i]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            std::copy(v.begin(), v.end(), x.begin() + c * t);
            rec(c + 1);
        }
    };
    rec(0);
}

void parametric_scan(const HomSystem& sys, const Domains& domains, const std::function<void(const Tuple&)>& fn)
{
    std::size_t t = sys.block, k = sys.k(), m = sys.m(), kt = k * t;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> coef(kt);
    for (std::size_t i = 0; i < kt; ++i)
        for (std::size_t j = kt; j < sys.matrix.cols(); ++j) {
            std::int64_t c = mod(sys.matrix(i, j), sys.modulus(i));
            if (c) coef[i].emplace_back(j, c);
        }
    std::size_t np = m - k;
    std::vector<std::vector<Tuple>> values(np);
    for (std::size_t i = 0; i < np; ++i) values[i] = block_values(sys, domains, k + i);
    std::vector<std::int64_t> radix(np);
    for (std::size_t i = 0; i < np; ++i) radix[i] = static_cast<std::int64_t>(values[i].size());
    Tuple x(sys.matrix.cols(), 0);
    for (Odometer od(radix); !od.done(); od.next()) {
        for (std::size_t i = 0; i < np; ++i) {
            const auto& v = values[i][od.value()[i]];
            std::copy(v.begin(), v.end(), x.begin() + kt + i * t);
        }
        bool ok = true;
        for (std::size_t r = 0; r < kt; ++r) {
            std::int64_t n = sys.modulus(r);
            __int128 s = 0;
            for (auto [j, c] : coef[r])
                if (x[j]) s += static_cast<__int128>(c) * x[j];
            x[r] = mod(sys.rhs[r] - static_cast<std::int64_t>(s % n), n);
        }
        for (std::size_t i = 0; i < k && ok; ++i) ok = in_domain(domains, x, i, t);
        if (ok) fn(x);
    }
}

// Embedding of the system into Z_n, n the exponent: X_q = (n / n_q) x_q.
struct Embedded {
    IntMatrix a;
    Tuple b;
    std::int64_t n;
};

Embedded embed(const HomSystem& sys)
{
    std::int64_t n = sys.group.exponent();
    std::size_t rows = sys.matrix.rows(), cols = sys.matrix.cols();
    std::vector<std::size_t> torsion_cols;
    for (std::size_t j = 0; j < cols; ++j)
        if (sys.modulus(j) != n) torsion_cols.push_back(j);
    Embedded e{IntMatrix(rows + torsion_cols.size(), cols), Tuple(rows + torsion_cols.size(), 0), n};
    for (std::size_t i = 0; i < rows; ++i) {
        std::int64_t np = sys.modulus(i);
        for (std::size_t j = 0; j < cols; ++j) {
            if (sys.matrix(i, j) == 0) continue;
            Int v = mod(sys.matrix(i, j), n) * static_cast<long>(sys.modulus(j));
            mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(np));
            e.a(i, j) = v;
        }
        e.b[i] = sys.rhs[i] * (n / np);
    }
    for (std::size_t r = 0; r < torsion_cols.size(); ++r) {
        std::size_t j = torsion_cols[r];
        e.a(rows + r, j) = sys.modulus(j);
    }
    return e;
}

Tuple unembed(const HomSystem& sys, const Tuple& big, std::int64_t n)
{
    Tuple x(big.size());
    for (std::size_t j = 0; j < big.size(); ++j) x[j] = big[j] / (n / sys.modulus(j));
    return x;
}

} // namespace

SolutionSet enumerate_solutions(const HomSystem& sys, const Domains& domains, Strategy strategy, std::uint64_t cap)
{
    validate(sys);
    Int capz(static_cast<unsigned long>(cap));
    if (strategy == Strategy::Automatic) {
        if (sys.is_parametric() && domain_product(sys, domains, sys.k(), sys.m()) <= capz)
            strategy = Strategy::Parametric;
        else if (domain_product(sys, domains, 0, sys.m()) <= capz)
            strategy = Strategy::FullScan;
        else
            strategy = Strategy::Lattice;
    }
    SolutionSet out;
    out.block = sys.block;
    auto push = [&](const Tuple& x) {
        if (out.solutions.size() >= cap) throw CapExceeded("solution set exceeds cap");
        out.solutions.push_back(x);
    };
    switch (strategy) {
    case Strategy::FullScan:
        if (domain_product(sys, domains, 0, sys.m()) > capz) throw CapExceeded("full scan exceeds cap");
        full_scan(sys, domains, push);
        break;
    case Strategy::Parametric:
        if (!sys.is_parametric()) throw PreconditionError("parametric enumeration needs shape (I | B)");
        if (domain_product(sys, domains, sys.k(), sys.m()) > capz) throw CapExceeded("parameter space exceeds cap");
        parametric_scan(sys, domains, push);
        break;
    case Strategy::Lattice: {
        auto e = embed(sys);
        CongruenceSolver solver(e.a, e.b, e.n);
        solver.for_each([&](const Tuple& big) {
            Tuple x = unembed(sys, big, e.n);
            bool ok = true;
            for (std::size_t i = 0; i < sys.m() && ok; ++i) ok = in_domain(domains, x, i, sys.block);
            if (ok) push(x);
        }, cap);
        break;
    }
    case Strategy::Automatic:
        break;
    }
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

void for_each_solution(const HomSystem& sys, const std::function<void(const Tuple&)>& fn, std::uint64_t cap)
{
    validate(sys);
    Int capz(static_cast<unsigned long>(cap));
    if (sys.is_parametric()) {
        if (domain_product(sys, {}, sys.k(), sys.m()) > capz) throw CapExceeded("parameter space exceeds cap");
        parametric_scan(sys, {}, fn);
    } else if (domain_product(sys, {}, 0, sys.m()) <= capz) {
        full_scan(sys, {}, fn);
    } else {
        auto e = embed(sys);
        CongruenceSolver solver(e.a, e.b, e.n);
        solver.for_each([&](const Tuple& big) { fn(unembed(sys, big, e.n)); }, cap);
    }
}

Int count_solutions(const HomSystem& sys)
{
    validate(sys);
    if (sys.is_parametric()) {
        Int c = 1;
        for (std::size_t j = sys.matrix.rows(); j < sys.matrix.cols(); ++j) c *= static_cast<long>(sys.modulus(j));
        return c;
    }
    auto e = embed(sys);
    return CongruenceSolver(e.a, e.b, e.n).count();
}

std::optional<Tuple> least_solution(const HomSystem& sys, std::uint64_t)
{
    validate(sys);
    auto e = embed(sys);
    if (!CongruenceSolver(e.a, e.b, e.n).consistent()) return std::nullopt;
    // Fix coordinates one at a time to the smallest value that keeps the
    // system consistent.
    std::size_t len = sys.matrix.cols(), rows = e.a.rows();
    IntMatrix a(rows + len, len);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < len; ++j) a(i, j) = e.a(i, j);
    Tuple b = e.b;
    b.resize(rows + len, 0);
    Tuple x(len, 0);
    for (std::size_t j = 0; j < len; ++j) {
        std::int64_t unit = e.n / sys.modulus(j);
        a(rows + j, j) = 1;
        bool found = false;
        for (std::int64_t v = 0; v < sys.modulus(j); ++v) {
            b[rows + j] = v * unit;
            if (CongruenceSolver(a, b, e.n).consistent()) {
                x[j] = v;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("least_solution: lost consistency");
    }
    return x;
}

SparseSystem::SparseSystem(const HomSystem& sys)
    : parametric_(sys.is_parametric()), cols_(sys.matrix.cols()), rhs_(sys.rhs)
{
    rows_.resize(sys.matrix.rows());
    moduli_.resize(sys.matrix.rows());
    col_moduli_.resize(cols_);
    for (std::size_t j = 0; j < cols_; ++j) col_moduli_[j] = sys.modulus(j);
    for (std::size_t i = 0; i < sys.matrix.rows(); ++i) {
        moduli_[i] = sys.modulus(i);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (sys.matrix(i, j) == 0) continue;
            std::int64_t c = mod(sys.matrix(i, j), moduli_[i]);
            if (c) rows_[i].emplace_back(j, c);
        }
    }
}

bool SparseSystem::satisfies(const Tuple& x) const
{
    if (x.size() != cols_) return false;
    for (std::size_t j = 0; j < cols_; ++j)
        if (x[j] < 0 || x[j] >= col_moduli_[j]) return false;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        __int128 s = 0;
        for (auto [j, c] : rows_[i])
            if (x[j]) s += static_cast<__int128>(c) * x[j];
        if (mod(static_cast<std::int64_t>(s % moduli_[i]), moduli_[i]) != rhs_[i]) return false;
    }
    return true;
}

Tuple SparseSystem::complete_parametric(Tuple x) const
{
    std::size_t kt = rows_.size();
    for (std::size_t r = 0; r < kt; ++r) {
        __int128 s = 0;
        for (auto [j, c] : rows_[r])
            if (j >= kt && x[j]) s += static_cast<__int128>(c) * x[j];
        x[r] = mod(rhs_[r] - static_cast<std::int64_t>(s % moduli_[r]), moduli_[r]);
    }
    return x;
}

Tuple random_solution(const HomSystem& sys, std::mt19937_64& rng)
{
    return random_solution(SparseSystem(sys), sys, rng);
}

Tuple SparseSystem::sample(const HomSystem& sys, std::mt19937_64& rng) const
{
    if (parametric_) {
        Tuple x(cols_, 0);
        for (std::size_t j = rows_.size(); j < cols_; ++j) {
            std::uniform_int_distribution<std::int64_t> d(0, col_moduli_[j] - 1);
            x[j] = d(rng);
        }
        return complete_parametric(std::move(x));
    }
    if (!solver_) {
        auto e = embed(sys);
        solver_ = std::make_shared<const CongruenceSolver>(e.a, e.b, e.n);
        solver_n_ = e.n;
    }
    return unembed(sys, solver_->sample(rng), solver_n_);
}

Tuple random_solution(const SparseSystem& sparse, const HomSystem& sys, std::mt19937_64& rng)
{
    return sparse.sample(sys, rng);
}

std::vector<Tuple> project_solutions(const SolutionSet& sol, std::size_t i)
{
    std::set<Tuple> s;
    for (const auto& x : sol.solutions) {
        if ((i + 1) * sol.block > x.size()) throw InvalidInput("projection index out of range");
        s.insert(block_value(x, i, sol.block));
    }
    return {s.begin(), s.end()};
}

Int projection_size(const HomSystem& sys, std::size_t i)
{
    // S_i of the homogeneous system is the image of a homomorphism; its size
    // is |S| / |{x in S : x_i = 0}|. For b != 0 the projection is a coset.
    if (i >= sys.m()) throw InvalidInput("projection index out of range");
    HomSystem h = sys;
    std::fill(h.rhs.begin(), h.rhs.end(), 0);
    if (count_solutions(sys) == 0) return 0;
    std::size_t t = sys.block;
    IntMatrix extra(t, sys.matrix.cols());
    for (std::size_t q = 0; q < t; ++q) extra(q, i * t + q) = 1;
    HomSystem fixed{vstack(h.matrix, extra), t, sys.group, Tuple(h.rhs.size() + t, 0)};
    return count_solutions(h) / count_solutions(fixed);
}

std::set<Tuple> span(const std::vector<Tuple>& generators, const FiniteAbelianGroup& g, std::size_t m,
                     std::uint64_t cap)
{
    std::size_t t = g.rank(), len = m * t;
    std::set<Tuple> seen;
    std::deque<Tuple> todo;
    Tuple zero(len, 0);
    seen.insert(zero);
    todo.push_back(zero);
    while (!todo.empty()) {
        Tuple x = todo.front();
        todo.pop_front();
        for (const auto& gen : generators) {
            if (gen.size() != len) throw InvalidInput("span: generator length mismatch");
            Tuple y(len);
            for (std::size_t j = 0; j < len; ++j) y[j] = mod(x[j] + gen[j], g.orders[j % t]);
            if (seen.insert(y).second) {
                if (seen.size() > cap) throw CapExceeded("span exceeds cap");
                todo.push_back(y);
            }
        }
    }
    return seen;
}

HomSystem subgroup_to_system(const std::vector<Tuple>& generators, const Tuple& shift, const FiniteAbelianGroup& g,
                             std::size_t m)
{
    if (!g.is_canonical()) throw PreconditionError("subgroup_to_system: group must be in invariant-factor form");
    std::size_t t = g.rank(), len = m * t;
    std::int64_t n = g.exponent();
    // Characters w with sum_j w_j (n / n_j) g_j = 0 mod n for every generator.
    IntMatrix cons(std::max<std::size_t>(generators.size(), 1), len);
    for (std::size_t r = 0; r < generators.size(); ++r) {
        if (generators[r].size() != len) throw InvalidInput("subgroup_to_system: generator length mismatch");
        for (std::size_t j = 0; j < len; ++j) cons(r, j) = mod(generators[r][j], g.orders[j % t]) * (n / g.orders[j % t]);
    }
    auto snf = smith_normal_form(cons);
    std::vector<Tuple> chars;
    std::size_t rank = std::min(cons.rows(), len);
    for (std::size_t i = 0; i < len; ++i) {
        std::int64_t step = 1;
        if (i < rank) step = n / gcd64(mod(snf.diag[i], n), n);
        Tuple w(len);
        bool trivial = true;
        for (std::size_t j = 0; j < len; ++j) {
            std::int64_t nj = g.orders[j % t];
            w[j] = mod(snf.V(j, i) * static_cast<long>(step), nj);
            if (w[j] != 0) trivial = false;
        }
        if (!trivial) chars.push_back(w);
    }
    std::size_t k = std::max<std::size_t>(chars.size(), 1);
    IntMatrix a(k * t, len);
    Tuple b(k * t, 0);
    if (!shift.empty() && shift.size() != len) throw InvalidInput("subgroup_to_system: shift length mismatch");
    for (std::size_t r = 0; r < chars.size(); ++r) {
        Int rhs = 0;
        for (std::size_t j = 0; j < len; ++j) {
            std::int64_t coef = chars[r][j] * (n / g.orders[j % t]);
            a(r * t, j) = coef;
            if (!shift.empty()) rhs += Int(static_cast<long>(coef)) * static_cast<long>(shift[j]);
        }
        b[r * t] = mod(rhs, n);
    }
    return make_system(a, g, b);
}

HomSystem pad_variables(const HomSystem& sys)
{
    std::size_t t = sys.block;
    IntMatrix extra(sys.matrix.rows(), 2 * t);
    Int order = sys.group.order();
    for (std::size_t i = 0; i < extra.rows(); ++i)
        for (std::size_t j = 0; j < extra.cols(); ++j) extra(i, j) = order;
    HomSystem out{hstack(sys.matrix, extra), t, sys.group, sys.rhs};
    validate(out);
    return out;
}

ExtensionReport extension_count_check(const HomSystem& sys, std::uint64_t cap)
{
    std::size_t t = sys.block, k = sys.k(), m = sys.m();
    if (m < 2 * k) throw PreconditionError("extension_count_check: B must have at least k block columns");
    IntMatrix b = sys.matrix.submatrix(0, k * t, k * t, (m - k) * t);
    Int dk = determinantal_divisor(b, k * t);
    if (gcd(dk, Int(static_cast<long>(sys.group.exponent()))) != 1)
        throw PreconditionError("extension_count_check: D_k(B) not coprime with n");
    ExtensionReport rep;
    Int g = sys.group.order();
    mpz_pow_ui(rep.expected.get_mpz_t(), g.get_mpz_t(), m - 2 * k);
    std::map<Tuple, Int> tally;
    for (const auto& x : enumerate_solutions(sys, {}, Strategy::Automatic, cap).solutions)
        tally[Tuple(x.begin(), x.begin() + k * t)] += 1;
    Int prefixes = 1;
    for (std::size_t i = 0; i < k; ++i) prefixes *= g;
    bool first = true;
    for (auto& [p, c] : tally) {
        if (first || c < rep.min_completions) rep.min_completions = c;
        if (first || c > rep.max_completions) rep.max_completions = c;
        first = false;
    }
    if (Int(static_cast<unsigned long>(tally.size())) != prefixes) rep.min_completions = 0;
    rep.holds = rep.min_completions == rep.expected && rep.max_completions == rep.expected;
    return rep;
}

} // namespace hsys
