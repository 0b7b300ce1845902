#include "ltail/report.hpp"

#include <fmt/format.h>

#include "ltail/errors.hpp"

namespace ltail {

namespace {

std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), width_(header.size()) {
    for (auto& h : header) os_ << h << ',';
    os_ << "constants\n";
}

void CsvWriter::row(const std::vector<std::string>& cells, const std::string& constants) {
    if (cells.size() != width_) fail(Errc::DimMismatch, fmt::format("row has {} cells, header {}", cells.size(), width_));
    for (auto& c : cells) os_ << cell(c) << ',';
    os_ << cell(constants) << '\n';
}

// 12 significant digits keeps reruns byte-identical without printing summation noise
std::string CsvWriter::num(double v) { return fmt::format("{:.12g}", v); }
std::string CsvWriter::num(std::uint64_t v) { return fmt::format("{}", v); }

void write_tail_reports(std::ostream& os, const std::vector<TailReport>& rows, const std::string& constants) {
    CsvWriter w(os, {"X", "alpha", "V", "family", "count_H", "family_size", "vanishing", "empirical_prob",
                     "gaussian_rhs", "ratio", "logpow_rhs", "logpow_ratio", "frac_moment", "frac_shape", "frac_ratio"});
    for (auto& r : rows)
        w.row({CsvWriter::num(r.X), CsvWriter::num(r.alpha), CsvWriter::num(r.V), r.family, CsvWriter::num(r.count_H),
               CsvWriter::num(r.family_size), CsvWriter::num(r.vanishing), CsvWriter::num(r.empirical_prob),
               CsvWriter::num(r.gaussian_rhs), CsvWriter::num(r.ratio), CsvWriter::num(r.logpow_rhs),
               CsvWriter::num(r.logpow_ratio), CsvWriter::num(r.frac_moment), CsvWriter::num(r.frac_shape),
               CsvWriter::num(r.frac_ratio)},
              constants);
}

void write_decomposition(std::ostream& os, const DecompositionReport& rep, const std::string& constants) {
    CsvWriter w(os, {"r", "count", "probability", "asymptotic_bound_rhs"});
    for (auto& r : rep.rows)
        w.row({fmt::format("{}", r.r), CsvWriter::num(r.count), CsvWriter::num(r.probability),
               CsvWriter::num(r.asymptotic_bound_rhs)},
              constants);
}

void write_moments(std::ostream& os, const std::vector<MomentRow>& rows, const std::string& constants) {
    CsvWriter w(os, {"quantity", "params", "empirical", "reference", "ratio"});
    for (auto& r : rows)
        w.row({r.quantity, r.params, CsvWriter::num(r.empirical), CsvWriter::num(r.reference), CsvWriter::num(r.ratio)},
              constants);
}

}  // namespace ltail
