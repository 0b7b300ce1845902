#include "ltail/lcentral.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ltail/errors.hpp"

namespace ltail {

double series_decay(const EllipticCurve& c, std::int64_t d) {
    return 2.0 * std::numbers::pi / (std::sqrt(static_cast<double>(c.N)) * static_cast<double>(std::llabs(d)));
}

std::uint64_t truncation_length(const EllipticCurve& c, std::int64_t d, double rel_tol) {
    double k = series_decay(c, d);
    double M = std::log(4.0 / (rel_tol * -std::expm1(-k))) / k;
    auto n = static_cast<std::uint64_t>(std::ceil(M));
    while (tail_bound(c, d, n) >= rel_tol) ++n;
    return n;
}

double tail_bound(const EllipticCurve& c, std::int64_t d, std::uint64_t n_max) {
    double k = series_decay(c, d);
    return 4.0 * std::exp(-k * static_cast<double>(n_max + 1)) / -std::expm1(-k);
}

std::uint64_t required_coefficients(const EllipticCurve& c, const TwistFamily& fam, double rel_tol) {
    std::uint64_t m = 1;
    for (auto d : fam.discriminants) m = std::max(m, truncation_length(c, d, rel_tol));
    return m;
}

static void check_twist(const EllipticCurve& c, std::int64_t d) {
    if (d == 0 || !is_fundamental(d)) fail(Errc::NonFundamental, "d=" + std::to_string(d));
    (void)root_number(c, d);
}

CentralValue central_value_reference(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol,
                                     std::uint64_t n_max_override) {
    const EllipticCurve& c = coeffs.curve();
    check_twist(c, d);
    CentralValue out;
    out.d = d;
    if (root_number(c, d) == -1) return out;
    std::uint64_t M = n_max_override ? n_max_override : truncation_length(c, d, rel_tol);
    if (M > coeffs.limit())
        fail(Errc::TableTooSmall, "need " + std::to_string(M) + " coefficients, have " + std::to_string(coeffs.limit()));
    double k = series_decay(c, d);
    double s = 0;
    for (std::uint64_t n = 1; n <= M; ++n) {
        int chi = kronecker(d, static_cast<std::int64_t>(n));
        if (chi == 0) continue;
        s += chi * coeffs[n] * std::exp(-k * static_cast<double>(n));
    }
    out.value = 2.0 * s;
    out.n_max = M;
    out.tail_bound = tail_bound(c, d, M);
    return out;
}

double central_value(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol) {
    return central_value_entry(coeffs, d, rel_tol).value;
}

std::uint64_t fe_coefficients_needed(const EllipticCurve& c, std::int64_t d, double t0) {
    double Q = 1.0 / series_decay(c, d);
    double tmin = std::min(t0, 1.0 / t0);
    return static_cast<std::uint64_t>(std::ceil(45.0 * Q / tmin)) + 10;
}

double functional_equation_check(const SeriesCoefficients& coeffs, std::int64_t d, double delta, int eps_hypothesis,
                                 double t0) {
    const EllipticCurve& c = coeffs.curve();
    check_twist(c, d);
    if (!(delta >= 0 && delta < 0.25)) fail(Errc::ConstraintViolation, "delta must lie in [0, 1/4)");
    std::uint64_t M = fe_coefficients_needed(c, d, t0);
    if (M > coeffs.limit())
        fail(Errc::TableTooSmall, "need " + std::to_string(M) + " coefficients, have " + std::to_string(coeffs.limit()));
    double Q = 1.0 / series_decay(c, d);
    CharacterTable chi(d);
    auto lambda = [&](double s, double t) {
        double acc = 0;
        for (std::uint64_t n = 1; n <= M; ++n) {
            int x = chi(n);
            if (x == 0 || coeffs[n] == 0) continue;
            double nn = static_cast<double>(n);
            double an = coeffs[n] * std::sqrt(nn);
            double q = Q / nn;
            double term = std::pow(q, s) * boost::math::tgamma(s + 0.5, nn * t / Q) +
                          eps_hypothesis * std::pow(q, 1.0 - s) * boost::math::tgamma(1.5 - s, nn / (t * Q));
            acc += x * an * term;
        }
        return acc;
    };
    return std::abs(lambda(0.5 + delta, t0) - eps_hypothesis * lambda(0.5 - delta, t0));
}

double functional_equation_check(const SeriesCoefficients& coeffs, std::int64_t d, double delta) {
    return functional_equation_check(coeffs, d, delta, root_number(coeffs.curve(), d));
}

double log_central(double value) {
    if (value <= kVanishingFloor) return -std::numeric_limits<double>::infinity();
    return std::log(value);
}

double log_central(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol) {
    if (root_number(coeffs.curve(), d) != 1) fail(Errc::WrongSign, "eps_E(d) = -1 for d=" + std::to_string(d));
    return log_central(central_value(coeffs, d, rel_tol));
}

void CentralValueCache::insert(const CentralValue& v) {
    if (v.value < -v.tail_bound - 1e-12)
        fail(Errc::ConstraintViolation, fmt::format("negative central value {} at d={}", v.value, v.d));
    if (!(v.tail_bound < 1e-6 * std::max(v.value, 1.0)))
        fail(Errc::ConstraintViolation, fmt::format("tail bound {} too large at d={}", v.tail_bound, v.d));
    entries_[v.d] = v;
}

const CentralValue& CentralValueCache::at(std::int64_t d) const {
    auto it = entries_.find(d);
    if (it == entries_.end()) fail(Errc::CacheMiss, "d=" + std::to_string(d));
    return it->second;
}

bool CentralValueCache::covers(const TwistFamily& fam) const {
    for (auto d : fam.discriminants)
        if (!contains(d)) return false;
    return true;
}

void CentralValueCache::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail(Errc::IoError, "cannot write " + path);
    out << fmt::format("# ltail-cache curve={} sign={} residue={} divisor={} X={} rel_tol={:.17g}\n", label_, key_.sign,
                       key_.residue, key_.divisor, static_cast<std::uint64_t>(key_.X), rel_tol_);
    out << "d,value,n_max,tail_bound\n";
    for (auto& [d, v] : entries_) out << fmt::format("{},{:.17g},{},{:.17g}\n", d, v.value, v.n_max, v.tail_bound);
}

CentralValueCache CentralValueCache::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoError, "cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ltail-cache", 0) != 0) fail(Errc::ParseError, path + ": bad header");
    CentralValueCache cache;
    std::istringstream hs(line.substr(13));
    std::string kv;
    while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "curve") cache.label_ = v;
        else if (k == "sign") cache.key_.sign = std::stoi(v);
        else if (k == "residue") cache.key_.residue = std::stoull(v);
        else if (k == "divisor") cache.key_.divisor = std::stoull(v);
        else if (k == "X") cache.key_.X = std::stod(v);
        else if (k == "rel_tol") cache.rel_tol_ = std::strtod(v.c_str(), nullptr);
    }
    if (!std::getline(in, line) || line != "d,value,n_max,tail_bound") fail(Errc::ParseError, path + ": bad columns");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CentralValue v;
        char* p = line.data();
        v.d = std::strtoll(p, &p, 10);
        v.value = std::strtod(p + 1, &p);
        v.n_max = std::strtoull(p + 1, &p, 10);
        v.tail_bound = std::strtod(p + 1, &p);
        cache.entries_[v.d] = v;
    }
    return cache;
}

std::string cache_dir() {
    const char* env = std::getenv("LTAIL_CACHE_DIR");
    return env && *env ? std::string(env) : std::string(".ltail_cache");
}

std::string cache_path(const std::string& label, const FamilyKey& key) {
    return (std::filesystem::path(cache_dir()) / ("lvalues_" + label + "_" + key.file_tag() + ".csv")).string();
}

CentralValueCache load_or_compute(const SeriesCoefficients& coeffs, const TwistFamily& fam, double rel_tol,
                                  bool use_disk) {
    const std::string label = coeffs.curve().label;
    std::string path = cache_path(label, fam.key);
    CentralValueCache cache(label, fam.key, rel_tol);
    if (use_disk && std::filesystem::exists(path)) {
        auto disk = CentralValueCache::read_csv(path);
        if (disk.label() == label && disk.rel_tol() <= rel_tol) cache = std::move(disk);
    }
    std::vector<std::int64_t> missing;
    for (auto d : fam.discriminants)
        if (!cache.contains(d)) missing.push_back(d);
    if (!missing.empty()) {
        for (auto& v : sweep_parallel(coeffs, missing, cache.rel_tol())) cache.insert(v);
        if (use_disk) {
            std::filesystem::create_directories(cache_dir());
            cache.write_csv(path);
        }
    }
    return cache;
}

}  // namespace ltail
