#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "factor.h"

namespace lve {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using QuerySet = std::vector<VariableId>;
using Evidence = std::map<VariableId, int>;

// Variables with cardinalities plus the factor set. Variable ids are
// stable; evidence application drops variables from factor scopes but
// never renumbers.
struct Model {
    std::vector<int> cardinalities;
    std::vector<Factor> factors;

    int num_vars() const { return static_cast<int>(cardinalities.size()); }

    // Checks factor shapes against cardinalities and that every
    // variable is mentioned by at least one factor.
    void validate() const;

    // Variables still mentioned by some factor.
    std::vector<bool> active_vars() const;
};

// Text formats (see README): MARKOV header, cardinalities, scopes,
// tables in row-major last-fastest layout. '#' starts a comment.
Model load_model(std::istream& in);
void save_model(const Model& m, std::ostream& out);

Evidence load_evidence(std::istream& in);
QuerySet load_queries(std::istream& in);

// Replaces every factor mentioning an evidence variable by its slice.
// Evidence on a query variable is a conflict error.
Model apply_evidence(const Model& m, const Evidence& e, const QuerySet& queries);

}  // namespace lve
