#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltail/ec_arith.hpp"

namespace ltail {

int kronecker(std::int64_t d, std::int64_t n);
bool is_fundamental(std::int64_t d);
int root_number(const EllipticCurve& c, std::int64_t d);

struct FamilyConstraints {
    int sign = 1;                // O in {-1, +1}
    std::uint64_t residue = 1;   // a mod N0
    std::uint64_t divisor = 1;   // v
    double X = 0;

    // throws InvalidConstraints with the violated condition
    void validate(const EllipticCurve& c) const;
    // eps_E(d) for every d in the class: eps_E * sign * kronecker(a, N)
    int class_root_number(const EllipticCurve& c) const;
};

// sign == 0 / residue == 0 mean "all"
struct FamilyKey {
    int sign = 0;
    std::uint64_t residue = 0;
    std::uint64_t divisor = 1;
    double X = 0;

    std::string describe() const;
    std::string file_tag() const;
    bool operator==(const FamilyKey&) const = default;
};

struct TwistFamily {
    FamilyKey key;
    std::vector<std::int64_t> discriminants;

    std::size_t size() const { return discriminants.size(); }
    bool empty() const { return discriminants.empty(); }
};

TwistFamily enumerate(const EllipticCurve& c, const FamilyConstraints& fc);
// all admissible signs and residue classes (sign = 0 for both signs)
TwistFamily enumerate_union(const EllipticCurve& c, std::uint64_t divisor, double X, int sign = 0);
std::vector<FamilyConstraints> admissible_classes(const EllipticCurve& c, std::uint64_t divisor, double X);
TwistFamily enumerate_key(const EllipticCurve& c, const FamilyKey& key);

// chi_d on one period |d| (d = 1 mod 4, squarefree), followed by `pad` repeated entries
void fill_character_table(std::int64_t d, std::size_t pad, std::vector<std::int8_t>& out);

class CharacterTable {
public:
    explicit CharacterTable(std::int64_t d, std::size_t pad = 0);
    std::int64_t d() const { return d_; }
    std::uint64_t period() const { return period_; }
    int operator()(std::uint64_t n) const { return table_[n % period_]; }
    const std::int8_t* data() const { return table_.data(); }

private:
    std::int64_t d_;
    std::uint64_t period_;
    std::vector<std::int8_t> table_;
};

}  // namespace ltail
