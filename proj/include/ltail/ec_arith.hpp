#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ltail {

enum class Reduction : std::int8_t { Good, Split, NonSplit, Additive };

const char* reduction_name(Reduction r);
Reduction parse_reduction(const std::string& s);

struct EllipticCurve {
    std::string label;
    std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    std::uint64_t N = 1;
    std::uint64_t N0 = 8;
    int eps_global = 1;
    std::map<std::uint64_t, Reduction> bad;

    // validates and fills N0
    static EllipticCurve make(std::string label, std::array<std::int64_t, 5> a, std::uint64_t N, int eps,
                              std::map<std::uint64_t, Reduction> bad);

    std::int64_t b2() const { return a1 * a1 + 4 * a2; }
    std::int64_t b4() const { return 2 * a4 + a1 * a3; }
    std::int64_t b6() const { return a3 * a3 + 4 * a6; }
    std::int64_t b8() const;
    std::int64_t c4() const;
    std::int64_t c6() const;
    std::int64_t discriminant() const;
    Reduction reduction_at(std::uint64_t p) const;
};

// curve registry: "label a1 a2 a3 a4 a6 N eps p:type[,p:type...]"
EllipticCurve parse_registry_line(const std::string& line);
std::vector<EllipticCurve> load_registry(const std::string& path);
std::vector<EllipticCurve> builtin_registry();
EllipticCurve registry_curve(const std::string& label);
std::string format_registry_line(const EllipticCurve& c);

constexpr std::uint64_t kMaxPointCountPrime = 1ULL << 31;
constexpr std::uint64_t kBsgsThreshold = 230;

// #E(F_p) by enumeration over x with a Legendre table; includes the singular point at bad p
std::int64_t count_points_naive(const EllipticCurve& c, std::uint64_t p);
// p + 1 - #E(F_p) at good p >= 5 via baby-step giant-step on E and its twist
std::int64_t trace_bsgs(const EllipticCurve& c, std::uint64_t p);
// unnormalized trace at a good prime, dispatching on p
std::int64_t trace_good(const EllipticCurve& c, std::uint64_t p);

double ap_good(const EllipticCurve& c, std::uint64_t p);
double ap_bad(const EllipticCurve& c, std::uint64_t p);

class HeckeTable {
public:
    HeckeTable() = default;
    // parallel over primes
    static HeckeTable build(const EllipticCurve& c, std::uint64_t bound);
    static HeckeTable build_serial(const EllipticCurve& c, std::uint64_t bound);

    const EllipticCurve& curve() const { return curve_; }
    std::uint64_t bound() const { return bound_; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }

    // unnormalized A_p
    std::int32_t trace(std::uint64_t p) const;
    // normalized a(p) = A_p / sqrt(p)
    double ap(std::uint64_t p) const;
    // normalized a(n), multiplicative extension
    double an(std::uint64_t n) const;
    // unnormalized A_n (exact integer)
    std::int64_t an_unnormalized(std::uint64_t n) const;

private:
    EllipticCurve curve_;
    std::uint64_t bound_ = 0;
    std::vector<std::uint32_t> primes_;
    std::vector<std::int32_t> trace_;  // indexed by p
};

double hecke_an(const HeckeTable& t, std::uint64_t n);

// dense b(n) = a(n)/sqrt(n) = A_n/n for 0 <= n <= limit (b(0) = 0)
class SeriesCoefficients {
public:
    SeriesCoefficients() = default;
    SeriesCoefficients(const HeckeTable& t, std::uint64_t limit);

    std::uint64_t limit() const { return b_.empty() ? 0 : b_.size() - 1; }
    const double* data() const { return b_.data(); }
    double operator[](std::uint64_t n) const { return b_[n]; }
    const EllipticCurve& curve() const { return curve_; }

private:
    EllipticCurve curve_;
    std::vector<double> b_;
};

}  // namespace ltail
