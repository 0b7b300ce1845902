#include <fstream>
#include <sstream>

#include "ltail/ec_arith.hpp"
#include "ltail/errors.hpp"

namespace ltail {

namespace {

const char* kBuiltin =
    "11a1 0 -1 1 -10 -20 11 1 11:split\n"
    "37a1 0 0 1 -1 0 37 -1 37:nonsplit\n"
    "14a1 1 0 1 4 -6 14 1 2:nonsplit,7:split\n";

}  // namespace

EllipticCurve parse_registry_line(const std::string& line) {
    std::istringstream in(line);
    std::string label, red;
    std::array<std::int64_t, 5> a{};
    std::uint64_t N = 0;
    int eps = 0;
    if (!(in >> label >> a[0] >> a[1] >> a[2] >> a[3] >> a[4] >> N >> eps >> red))
        fail(Errc::ParseError, "registry line: '" + line + "'");
    std::map<std::uint64_t, Reduction> bad;
    std::istringstream rs(red);
    std::string item;
    while (std::getline(rs, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) fail(Errc::ParseError, "reduction item '" + item + "'");
        bad[std::stoull(item.substr(0, colon))] = parse_reduction(item.substr(colon + 1));
    }
    return EllipticCurve::make(label, a, N, eps, bad);
}

std::string format_registry_line(const EllipticCurve& c) {
    std::ostringstream out;
    out << c.label << ' ' << c.a1 << ' ' << c.a2 << ' ' << c.a3 << ' ' << c.a4 << ' ' << c.a6 << ' ' << c.N << ' '
        << c.eps_global << ' ';
    bool first = true;
    for (auto& [p, r] : c.bad) {
        if (!first) out << ',';
        out << p << ':' << reduction_name(r);
        first = false;
    }
    return out.str();
}

static std::vector<EllipticCurve> parse_stream(std::istream& in) {
    std::vector<EllipticCurve> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_registry_line(line));
    }
    return out;
}

std::vector<EllipticCurve> load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoError, "cannot open registry " + path);
    return parse_stream(in);
}

std::vector<EllipticCurve> builtin_registry() {
    std::istringstream in(kBuiltin);
    return parse_stream(in);
}

EllipticCurve registry_curve(const std::string& label) {
    for (auto& c : builtin_registry())
        if (c.label == label) return c;
    fail(Errc::ParseError, "unknown curve label " + label);
}

}  // namespace ltail
