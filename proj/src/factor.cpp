#include "factor.h"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace lve {

namespace {

std::size_t product(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int s : shape) n *= static_cast<std::size_t>(s);
    return n;
}

// strides[p] = number of table cells one step of scope position p spans.
std::vector<std::size_t> strides_of(const std::vector<int>& shape) {
    std::vector<std::size_t> st(shape.size(), 1);
    for (int p = static_cast<int>(shape.size()) - 2; p >= 0; --p)
        st[p] = st[p + 1] * static_cast<std::size_t>(shape[p + 1]);
    return st;
}

}  // namespace

Factor::Factor(std::vector<VariableId> scope, std::vector<int> shape,
               std::vector<double> values)
    : scope_(std::move(scope)), shape_(std::move(shape)),
      values_(std::move(values)) {
    if (scope_.size() != shape_.size())
        throw FactorError("factor: scope/shape size mismatch");
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        if (shape_[i] <= 0) throw FactorError("factor: non-positive cardinality");
        for (std::size_t j = i + 1; j < scope_.size(); ++j)
            if (scope_[i] == scope_[j])
                throw FactorError("factor: duplicate variable in scope");
    }
    if (values_.size() != product(shape_))
        throw FactorError("factor: table length does not match shape");
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0)
            throw FactorError("factor: values must be finite and non-negative");
    }
}

bool Factor::contains(VariableId v) const {
    return std::find(scope_.begin(), scope_.end(), v) != scope_.end();
}

int Factor::position_of(VariableId v) const {
    auto it = std::find(scope_.begin(), scope_.end(), v);
    return it == scope_.end() ? -1 : static_cast<int>(it - scope_.begin());
}

double Factor::total() const {
    double t = 0.0;
    for (double v : values_) t += v;
    return t;
}

Factor Factor::with_scope(std::vector<VariableId> new_scope) const {
    if (new_scope.size() != scope_.size())
        throw FactorError("with_scope: arity mismatch");
    return Factor(std::move(new_scope), shape_, values_);
}

Factor multiply(const Factor& f1, const Factor& f2, OpCount* ops) {
    // Result scope: f1's scope followed by f2-only variables in f2's
    // order (first-appearance order).
    std::vector<VariableId> scope = f1.scope();
    std::vector<int> shape = f1.shape();
    for (int q = 0; q < f2.arity(); ++q) {
        VariableId v = f2.scope()[q];
        int p = f1.position_of(v);
        if (p >= 0) {
            if (f1.shape()[p] != f2.shape()[q])
                throw FactorError("multiply: cardinality mismatch on shared variable " +
                                  std::to_string(v));
        } else {
            scope.push_back(v);
            shape.push_back(f2.shape()[q]);
        }
    }

    const std::size_t dims = shape.size();
    auto st1 = strides_of(f1.shape());
    auto st2 = strides_of(f2.shape());
    // Per result dimension, the stride it contributes to each operand.
    std::vector<std::size_t> c1(dims, 0), c2(dims, 0);
    for (std::size_t d = 0; d < dims; ++d) {
        int p = f1.position_of(scope[d]);
        if (p >= 0) c1[d] = st1[p];
        int q = f2.position_of(scope[d]);
        if (q >= 0) c2[d] = st2[q];
    }

    std::size_t n = 1;
    for (int s : shape) n *= static_cast<std::size_t>(s);
    std::vector<double> values(n);
    std::vector<int> idx(dims, 0);
    std::size_t i1 = 0, i2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = f1.values()[i1] * f2.values()[i2];
        // odometer, last dimension fastest
        for (int d = static_cast<int>(dims) - 1; d >= 0; --d) {
            i1 += c1[d];
            i2 += c2[d];
            if (++idx[d] < shape[d]) break;
            idx[d] = 0;
            i1 -= c1[d] * static_cast<std::size_t>(shape[d]);
            i2 -= c2[d] * static_cast<std::size_t>(shape[d]);
        }
    }
    if (ops) ops->mults += n;
    return Factor(std::move(scope), std::move(shape), std::move(values));
}

Factor eliminate(const Factor& f, VariableId v, ElimOp op, OpCount* ops) {
    int pos = f.position_of(v);
    if (pos < 0)
        throw FactorError("eliminate: variable " + std::to_string(v) +
                          " not in scope");
    std::vector<VariableId> scope = f.scope();
    std::vector<int> shape = f.shape();
    const int card = shape[pos];
    scope.erase(scope.begin() + pos);
    shape.erase(shape.begin() + pos);

    auto st = strides_of(f.shape());
    const std::size_t stride = st[pos];
    const std::size_t block = stride * static_cast<std::size_t>(card);

    std::size_t out_n = f.size() / static_cast<std::size_t>(card);
    std::vector<double> values(out_n, op == ElimOp::Sum
                                          ? 0.0
                                          : -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::size_t o = (i / block) * stride + (i % stride);
        if (op == ElimOp::Sum)
            values[o] += f.values()[i];
        else
            values[o] = std::max(values[o], f.values()[i]);
    }
    if (ops && op == ElimOp::Sum) ops->adds += f.size() - out_n;
    return Factor(std::move(scope), std::move(shape), std::move(values));
}

Factor reduce(const Factor& f, VariableId v, int value) {
    int pos = f.position_of(v);
    if (pos < 0)
        throw FactorError("reduce: variable " + std::to_string(v) +
                          " not in scope");
    if (value < 0 || value >= f.shape()[pos])
        throw FactorError("reduce: value " + std::to_string(value) +
                          " out of range for variable " + std::to_string(v));
    std::vector<VariableId> scope = f.scope();
    std::vector<int> shape = f.shape();
    const int card = shape[pos];
    scope.erase(scope.begin() + pos);
    shape.erase(shape.begin() + pos);

    auto st = strides_of(f.shape());
    const std::size_t stride = st[pos];
    const std::size_t block = stride * static_cast<std::size_t>(card);

    std::size_t out_n = f.size() / static_cast<std::size_t>(card);
    std::vector<double> values(out_n);
    for (std::size_t o = 0; o < out_n; ++o)
        values[o] = f.values()[(o / stride) * block +
                               static_cast<std::size_t>(value) * stride +
                               (o % stride)];
    return Factor(std::move(scope), std::move(shape), std::move(values));
}

Factor normalize(const Factor& f) {
    double t = f.total();
    if (t <= 0.0)
        throw FactorError("normalize: table has zero total mass");
    std::vector<double> values = f.values();
    for (double& v : values) v /= t;
    return Factor(f.scope(), f.shape(), std::move(values));
}

bool is_shared(const Factor& f1, const Factor& f2) {
    if (f1.shape() != f2.shape()) return false;
    return std::memcmp(f1.values().data(), f2.values().data(),
                       f1.size() * sizeof(double)) == 0;
}

double rms_distance(const Factor& f1, const Factor& f2) {
    if (f1.shape() != f2.shape()) return kInfiniteDistance;
    double sq = 0.0;
    for (std::size_t i = 0; i < f1.size(); ++i) {
        double d = f1.values()[i] - f2.values()[i];
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(f1.size()));
}

}  // namespace lve
