#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hsys {

using Int = mpz_class;
using Rational = mpq_class;

// Flattened tuple of residues. A solution of a block system with m block
// variables of width t is stored as coordinate (C, q) at index C*t + q.
using Tuple = std::vector<std::int64_t>;

// FNV-1a over the residues; used for hash maps keyed by tuples.
struct TupleHash {
    std::size_t operator()(const Tuple& t) const
    {
        std::size_t h = 1469598103934665603ull;
        for (auto v : t) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

constexpr std::uint64_t kDefaultCap = 1000000;

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::int64_t mod(std::int64_t a, std::int64_t n)
{
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

inline std::int64_t mod(const Int& a, std::int64_t n)
{
    Int r = a % n;
    if (r < 0) r += n;
    return r.get_si();
}

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);
Int gcd(const Int& a, const Int& b);
// Inverse of a modulo n; a must be a unit.
std::int64_t inverse_mod(std::int64_t a, std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);
std::int64_t to_i64(const Int& a);

} // namespace hsys
