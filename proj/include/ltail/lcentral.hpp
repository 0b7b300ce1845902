#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ltail/ec_arith.hpp"
#include "ltail/family.hpp"

namespace ltail {

constexpr double kDefaultRelTol = 1e-6;
// values are accurate to ~1e-9 absolute; nonzero central values at desk scale exceed 1e-4
constexpr double kVanishingFloor = 1e-6;

struct CentralValue {
    std::int64_t d = 0;
    double value = 0;
    std::uint64_t n_max = 0;
    double tail_bound = 0;
};

// exp(-2 pi n / (sqrt(N)|d|)) decay rate per step
double series_decay(const EllipticCurve& c, std::int64_t d);
// smallest M with 4 r^{M+1}/(1-r) < rel_tol
std::uint64_t truncation_length(const EllipticCurve& c, std::int64_t d, double rel_tol);
double tail_bound(const EllipticCurve& c, std::int64_t d, std::uint64_t n_max);
// largest n_max over a family
std::uint64_t required_coefficients(const EllipticCurve& c, const TwistFamily& fam, double rel_tol);

// direct summation with kronecker per term; independent reference path
CentralValue central_value_reference(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol,
                                     std::uint64_t n_max_override = 0);
CentralValue central_value_entry(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol = kDefaultRelTol);
double central_value(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol = kDefaultRelTol);

// batched OpenMP kernel over the family, results in family order
std::vector<CentralValue> sweep_parallel(const SeriesCoefficients& coeffs, const std::vector<std::int64_t>& ds,
                                         double rel_tol = kDefaultRelTol);
// one twist at a time, reference summation
std::vector<CentralValue> sweep_serial(const SeriesCoefficients& coeffs, const std::vector<std::int64_t>& ds,
                                       double rel_tol = kDefaultRelTol);

// |Lambda(1/2+delta) - eps Lambda(1/2-delta)|, each side from the series split at t0
double functional_equation_check(const SeriesCoefficients& coeffs, std::int64_t d, double delta, int eps_hypothesis,
                                 double t0 = 1.2);
double functional_equation_check(const SeriesCoefficients& coeffs, std::int64_t d, double delta);
std::uint64_t fe_coefficients_needed(const EllipticCurve& c, std::int64_t d, double t0 = 1.2);

double log_central(double value);
double log_central(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol = kDefaultRelTol);

class CentralValueCache {
public:
    CentralValueCache() = default;
    CentralValueCache(std::string label, FamilyKey key, double rel_tol)
        : label_(std::move(label)), key_(key), rel_tol_(rel_tol) {}

    const std::string& label() const { return label_; }
    const FamilyKey& key() const { return key_; }
    double rel_tol() const { return rel_tol_; }
    std::size_t size() const { return entries_.size(); }

    // enforces the storage invariants
    void insert(const CentralValue& v);
    bool contains(std::int64_t d) const { return entries_.count(d) != 0; }
    const CentralValue& at(std::int64_t d) const;
    double value(std::int64_t d) const { return at(d).value; }
    bool covers(const TwistFamily& fam) const;
    const std::map<std::int64_t, CentralValue>& entries() const { return entries_; }

    void write_csv(const std::string& path) const;
    static CentralValueCache read_csv(const std::string& path);

private:
    std::string label_;
    FamilyKey key_;
    double rel_tol_ = kDefaultRelTol;
    std::map<std::int64_t, CentralValue> entries_;
};

std::string cache_dir();
std::string cache_path(const std::string& label, const FamilyKey& key);

// reads LTAIL_CACHE_DIR/<label>_<tag>.csv when present and complete, otherwise computes and stores
CentralValueCache load_or_compute(const SeriesCoefficients& coeffs, const TwistFamily& fam,
                                  double rel_tol = kDefaultRelTol, bool use_disk = true);

}  // namespace ltail
