#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ltail/walk.hpp"

namespace ltail {

// Fixed header per report type; every row ends with the effective constants.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::vector<std::string> header);
    void row(const std::vector<std::string>& cells, const std::string& constants);
    static std::string num(double v);
    static std::string num(std::uint64_t v);

private:
    std::ostream& os_;
    std::size_t width_;
};

struct TailReport {
    double X = 0;
    double alpha = 0;
    double V = 0;
    std::string family;
    std::uint64_t count_H = 0;
    std::uint64_t family_size = 0;
    std::uint64_t vanishing = 0;
    double empirical_prob = 0;
    double gaussian_rhs = 0;  // per member
    double ratio = 0;
    double logpow_rhs = 0;       // (log X)^{-alpha^2/2}
    double logpow_ratio = 0;
    double frac_moment = 0;   // mean of L^alpha
    double frac_shape = 0;    // (log X)^{(alpha^2 - alpha)/2}
    double frac_ratio = 0;
};

struct MomentRow {
    std::string quantity;
    std::string params;
    double empirical = 0;
    double reference = 0;
    double ratio = 0;
};

void write_tail_reports(std::ostream& os, const std::vector<TailReport>& rows, const std::string& constants);
void write_decomposition(std::ostream& os, const DecompositionReport& rep, const std::string& constants);
void write_moments(std::ostream& os, const std::vector<MomentRow>& rows, const std::string& constants);

}  // namespace ltail
