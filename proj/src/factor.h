#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lve {

using VariableId = int;

// Scalar multiply/add tally for the arithmetic-op metrics.
struct OpCount {
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;

    OpCount& operator+=(const OpCount& o) {
        mults += o.mults;
        adds += o.adds;
        return *this;
    }
};

enum class ElimOp { Sum, Max };

struct FactorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense table over an ordered scope of discrete variables. Layout is
// row-major with the last scope position varying fastest. Immutable
// after construction.
class Factor {
public:
    Factor(std::vector<VariableId> scope, std::vector<int> shape,
           std::vector<double> values);

    // Empty-scope scalar factor.
    static Factor unit() { return Factor({}, {}, {1.0}); }
    static Factor scalar(double v) { return Factor({}, {}, {v}); }

    const std::vector<VariableId>& scope() const { return scope_; }
    const std::vector<int>& shape() const { return shape_; }
    const std::vector<double>& values() const { return values_; }

    int arity() const { return static_cast<int>(scope_.size()); }
    std::size_t size() const { return values_.size(); }

    bool contains(VariableId v) const;
    int position_of(VariableId v) const;  // -1 if absent
    double total() const;

    // Reinterprets the same table over a different scope (positional
    // re-scoping). Arity must match; cardinalities are carried over.
    Factor with_scope(std::vector<VariableId> new_scope) const;

private:
    std::vector<VariableId> scope_;
    std::vector<int> shape_;
    std::vector<double> values_;
};

Factor multiply(const Factor& f1, const Factor& f2, OpCount* ops = nullptr);
Factor eliminate(const Factor& f, VariableId v, ElimOp op,
                 OpCount* ops = nullptr);
Factor reduce(const Factor& f, VariableId v, int value);
Factor normalize(const Factor& f);

// Shared factors: position-wise equal shapes and bitwise-equal tables,
// regardless of which variables the scopes mention.
bool is_shared(const Factor& f1, const Factor& f2);

// Root-mean-squared difference over the common joint domain; returns
// +inf when the shapes differ position-wise (not binnable).
double rms_distance(const Factor& f1, const Factor& f2);

inline constexpr double kInfiniteDistance =
    std::numeric_limits<double>::infinity();

}  // namespace lve
