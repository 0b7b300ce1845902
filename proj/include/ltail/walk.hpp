#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltail/ec_arith.hpp"
#include "ltail/family.hpp"
#include "ltail/schedule.hpp"

namespace ltail {

struct WalkTrace {
    std::int64_t d = 0;
    std::vector<double> increments;  // P_1 .. P_R at index 0 .. R-1
    std::vector<double> partials;    // S_0 = 0, S_1 .. S_R
};

struct EventFlags {
    bool in_H = false;
    std::vector<bool> A, B, G;  // index 0 .. R, all true at 0
    std::optional<int> first_exit;
};

// primes p in (lo, hi] with a(p) from the table
struct IntervalPrimes {
    std::vector<std::uint32_t> p;
    std::vector<double> weight;  // a(p)/sqrt(p)
};
std::vector<IntervalPrimes> interval_primes(const HeckeTable& t, const WalkSchedule& s);

WalkTrace trace(const HeckeTable& t, const WalkSchedule& s, std::int64_t d);
std::vector<WalkTrace> trace_family(const HeckeTable& t, const WalkSchedule& s, const TwistFamily& fam);
std::vector<WalkTrace> trace_family_serial(const HeckeTable& t, const WalkSchedule& s, const TwistFamily& fam);

// threshold of H: V - loglog(X)/2, or V - loglog|d|/2 with h_uses_d (loglog clamped at 0 for |d| <= e)
double h_threshold(const WalkSchedule& s, std::int64_t d, bool h_uses_d);
EventFlags classify(const WalkTrace& tr, const WalkSchedule& s, double logL, bool h_uses_d = false);

struct DecompositionRow {
    int r = 0;  // slice H & G_r & not G_{r+1}; r == R is H & G_R
    std::uint64_t count = 0;
    double probability = 0;
    double asymptotic_bound_rhs = 0;
};

struct DecompositionReport {
    std::uint64_t family_size = 0;
    std::uint64_t count_H = 0;
    double prob_H = 0;
    std::vector<DecompositionRow> rows;  // r = 0 .. R

    bool exact() const;
};

DecompositionReport empirical_decomposition(const WalkSchedule& s, const std::vector<EventFlags>& flags);

// int_V^inf e^{-y^2/(2 var)} / sqrt(var) dy
double gaussian_tail(double V, double variance);

}  // namespace ltail
