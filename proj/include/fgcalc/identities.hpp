#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fgcalc/scalar.hpp"

namespace fgcalc {

// Sampling range for one parameter. Complex values are drawn as r e^{it}
// with r in [min, max] and |t| <= phase; integers uniformly in [min, max].
struct ParamDomain {
    std::string name;
    bool integer = false;
    double min = 0, max = 0, phase = 0;
};

// One row of the expansion table: the pair, x_n and b_n that turn the
// identity into an (f,g)-expansion.
struct FgDescriptor {
    std::string row;      // e.g. "II.8"; empty when the row is not in the table
    std::string name;     // classical name
    std::string pair;     // human-readable f, g
    std::string x_n, b_n;
    std::string case_id;  // implementing corpus case, empty for stubs
    bool implemented = false;
    int max_order = 40;
};

struct IdentityCase {
    std::string id, title, description, anchor;
    bool terminating = false;
    double tolerance = 1e-8;
    double truncation_eps = 1e-20;
    int max_terms = 4000;
    std::map<std::string, Complex> defaults;
    std::vector<ParamDomain> domain;
    int sweep_trials = 20;
    std::optional<FgDescriptor> fg;
};

const std::vector<IdentityCase>& corpus();
const std::vector<FgDescriptor>& table_rows();  // implemented rows and transcription stubs
const IdentityCase& find_case(const std::string& id);  // throws Usage
std::vector<std::string> case_ids();

struct Check {
    std::string label;
    Complex lhs, rhs;
    double rel_error = 0;
    double tolerance = 0;
    bool passed = false;
};

struct VerifyReport {
    std::string id, anchor;
    std::map<std::string, Complex> params;
    std::vector<Check> checks;
    double worst_rel_error = 0;
    bool divergent = false;
    bool passed = false;
    std::string message;
};

// Defaults overridden by `overrides`. Unknown keys raise Usage; values
// outside the identity's convergence region raise DomainViolation.
std::map<std::string, Complex> resolve_params(const IdentityCase& c, const std::map<std::string, Complex>& overrides);
std::optional<std::string> admissibility_problem(const IdentityCase& c, const std::map<std::string, Complex>& params);

// tolerance <= 0 keeps each check's own tolerance.
VerifyReport verify(const IdentityCase& c, const std::map<std::string, Complex>& params, double tolerance = 0);

struct FgReport {
    std::string id, row;
    int max_order = 0;
    int coefficient_orders = 0;
    double max_coefficient_error = 0;
    double coefficient_tolerance = 1e-9;
    Complex probe, expansion_value, direct_value;
    double value_error = 0;
    double value_tolerance = 1e-7;
    bool passed = false;
    std::string note;
};

FgReport verify_fg_interpretation(const IdentityCase& c, const std::map<std::string, Complex>& params);

struct SweepReport {
    std::string id;
    std::uint64_t seed = 0;
    int trials = 0;
    int rejected_draws = 0;
    double worst_rel_error = 0;
    std::map<std::string, Complex> worst_params;
    int failures = 0;
    bool passed = false;
};

SweepReport sweep(const IdentityCase& c, std::uint64_t seed, int trials);

}  // namespace fgcalc
