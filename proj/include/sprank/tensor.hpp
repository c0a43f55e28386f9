#pragma once

#include <cstdint>
#include <vector>

#include "sprank/enumerate.hpp"
#include "sprank/field.hpp"
#include "sprank/linalg.hpp"

namespace sprank {

/// Dense order-d tensor over a field. Entries are stored row-major over
/// (i1,...,id) with the last index fastest. Shapes with a zero dimension are
/// legal and hold no entries.
class Tensor {
  public:
    Tensor() = default;
    Tensor(FieldCtx field, std::vector<uint32_t> shape)
        : field_(std::move(field)), shape_(std::move(shape)) {
        if (shape_.empty()) fail(Errc::SHAPE_MISMATCH, "tensor needs at least one slot");
        data_.assign(total_entries(), field_.zero());
    }

    const FieldCtx& field() const { return field_; }
    const std::vector<uint32_t>& shape() const { return shape_; }
    int order() const { return static_cast<int>(shape_.size()); }

    size_t total_entries() const {
        size_t t = 1;
        for (uint32_t n : shape_) t *= n;
        return t;
    }

    /// Flat offset of a multi-index (0-based entries).
    size_t offset(const std::vector<uint32_t>& idx) const {
        size_t off = 0;
        for (size_t j = 0; j < shape_.size(); ++j) {
            if (idx[j] >= shape_[j]) fail(Errc::BAD_INDEX, "tensor index out of range");
            off = off * shape_[j] + idx[j];
        }
        return off;
    }

    std::vector<uint32_t> index_at(size_t off) const {
        std::vector<uint32_t> idx(shape_.size());
        for (size_t j = shape_.size(); j-- > 0;) {
            idx[j] = shape_[j] ? static_cast<uint32_t>(off % shape_[j]) : 0;
            off /= shape_[j] ? shape_[j] : 1;
        }
        return idx;
    }

    const FieldElement& at(const std::vector<uint32_t>& idx) const { return data_[offset(idx)]; }
    void set(const std::vector<uint32_t>& idx, const FieldElement& v) {
        field_.check(v);
        data_[offset(idx)] = v;
    }

    const FieldElement& flat(size_t off) const { return data_[off]; }
    void set_flat(size_t off, const FieldElement& v) {
        field_.check(v);
        data_[off] = v;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!field_.is_zero(v)) return false;
        return true;
    }

    Tensor scaled(const FieldElement& c) const {
        Tensor out(field_, shape_);
        for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.mul(data_[i], c);
        return out;
    }

    Tensor plus(const Tensor& o) const {
        require_compatible(o);
        Tensor out(field_, shape_);
        for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.add(data_[i], o.data_[i]);
        return out;
    }

    Tensor minus(const Tensor& o) const { return plus(o.scaled(field_.from_int(-1))); }

    bool operator==(const Tensor& o) const {
        return field_ == o.field_ && shape_ == o.shape_ && data_ == o.data_;
    }
    bool operator!=(const Tensor& o) const { return !(*this == o); }

    void require_compatible(const Tensor& o) const {
        if (field_ != o.field_) fail(Errc::FIELD_MISMATCH, "tensors over different fields");
        if (shape_ != o.shape_) fail(Errc::SHAPE_MISMATCH, "tensor shapes differ");
    }

  private:
    FieldCtx field_;
    std::vector<uint32_t> shape_;
    std::vector<FieldElement> data_;
};

/// A dual functional on V_I, stored as a tensor of the matching shape.
using Functional = Tensor;

/// Row-major offset of a (0-based) multi-index in the given shape.
inline size_t shape_offset(const std::vector<uint32_t>& shape, const std::vector<uint32_t>& idx) {
    size_t off = 0;
    for (size_t j = 0; j < shape.size(); ++j) off = off * shape[j] + idx[j];
    return off;
}

/// Decode a row-major offset over the given shape.
inline std::vector<uint32_t> shape_index(const std::vector<uint32_t>& shape, size_t off) {
    std::vector<uint32_t> idx(shape.size());
    for (size_t j = shape.size(); j-- > 0;) {
        idx[j] = shape[j] ? static_cast<uint32_t>(off % shape[j]) : 0;
        off /= shape[j] ? shape[j] : 1;
    }
    return idx;
}

inline void check_subset(const std::vector<int>& I, int d, bool proper_nonempty = true) {
    if (proper_nonempty && (I.empty() || static_cast<int>(I.size()) >= d))
        fail(Errc::BAD_SUBSET, "subset must be proper and nonempty");
    int prev = 0;
    for (int v : I) {
        if (v <= prev || v > d) fail(Errc::BAD_SUBSET, "subset entries must be increasing in [d]");
        prev = v;
    }
}

inline std::vector<uint32_t> subshape(const std::vector<uint32_t>& shape, const std::vector<int>& I) {
    std::vector<uint32_t> out;
    for (int v : I) out.push_back(shape[v - 1]);
    return out;
}

/// Matrix of the flattening V_I x V_{I^c}: rows indexed by the merged I
/// multi-index (row-major in slot order), columns by the I^c multi-index.
inline Matrix flatten(const Tensor& t, const std::vector<int>& I) {
    check_subset(I, t.order());
    auto Ic = complement_subset(I, t.order());
    auto rshape = subshape(t.shape(), I);
    auto cshape = subshape(t.shape(), Ic);
    size_t rows = 1, cols = 1;
    for (uint32_t n : rshape) rows *= n;
    for (uint32_t n : cshape) cols *= n;
    Matrix m(t.field(), rows, cols);
    size_t total = t.total_entries();
    for (size_t off = 0; off < total; ++off) {
        auto idx = t.index_at(off);
        size_t r = 0, c = 0;
        for (size_t k = 0; k < I.size(); ++k) r = r * t.shape()[I[k] - 1] + idx[I[k] - 1];
        for (size_t k = 0; k < Ic.size(); ++k) c = c * t.shape()[Ic[k] - 1] + idx[Ic[k] - 1];
        m.at(r, c) = t.flat(off);
    }
    return m;
}

/// An m-tuple of tensors of identical field and shape.
class TensorTuple {
  public:
    explicit TensorTuple(std::vector<Tensor> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) fail(Errc::UNSUPPORTED, "empty tensor tuple");
        for (const auto& t : entries_) entries_.front().require_compatible(t);
    }

    size_t size() const { return entries_.size(); }
    const Tensor& operator[](size_t i) const { return entries_[i]; }
    const std::vector<Tensor>& entries() const { return entries_; }
    const FieldCtx& field() const { return entries_.front().field(); }
    const std::vector<uint32_t>& shape() const { return entries_.front().shape(); }
    int order() const { return entries_.front().order(); }

    Tensor combine(const std::vector<FieldElement>& c) const {
        if (c.size() != entries_.size()) fail(Errc::SHAPE_MISMATCH, "coefficient count != m");
        Tensor acc(field(), shape());
        for (size_t k = 0; k < entries_.size(); ++k) acc = acc.plus(entries_[k].scaled(c[k]));
        return acc;
    }

  private:
    std::vector<Tensor> entries_;
};

/// Proper contraction: sum_i xi_i(t_i), pairing the I^c slots of each t_i with
/// the functional xi_i. Returns a tensor on the I slots.
inline Tensor contract(const TensorTuple& ts, const std::vector<int>& I,
                       const std::vector<Functional>& xis) {
    int d = ts.order();
    check_subset(I, d);
    if (xis.size() != ts.size()) fail(Errc::SHAPE_MISMATCH, "one functional per tuple entry");
    auto Ic = complement_subset(I, d);
    auto cshape = subshape(ts.shape(), Ic);
    for (const auto& xi : xis) {
        if (xi.field() != ts.field()) fail(Errc::FIELD_MISMATCH, "functional over wrong field");
        if (xi.shape() != cshape) fail(Errc::SHAPE_MISMATCH, "functional shape must match I^c slots");
    }
    const FieldCtx& F = ts.field();
    Tensor out(F, subshape(ts.shape(), I));
    size_t total = ts[0].total_entries();
    for (size_t m = 0; m < ts.size(); ++m) {
        for (size_t off = 0; off < total; ++off) {
            auto idx = ts[m].index_at(off);
            std::vector<uint32_t> iidx, cidx;
            for (int v : I) iidx.push_back(idx[v - 1]);
            for (int v : Ic) cidx.push_back(idx[v - 1]);
            FieldElement term = F.mul(xis[m].at(cidx), ts[m].flat(off));
            size_t o = out.offset(iidx);
            out.set_flat(o, F.add(out.flat(o), term));
        }
    }
    return out;
}

/// Functorial action: applies one matrix per slot (maps[j] is n'_j x n_j).
inline Tensor apply_maps(const Tensor& t, const std::vector<Matrix>& maps) {
    int d = t.order();
    if (static_cast<int>(maps.size()) != d) fail(Errc::SHAPE_MISMATCH, "need one map per slot");
    std::vector<uint32_t> out_shape(d);
    for (int j = 0; j < d; ++j) {
        if (maps[j].field() != t.field()) fail(Errc::FIELD_MISMATCH, "map over wrong field");
        if (maps[j].cols() != t.shape()[j]) fail(Errc::SHAPE_MISMATCH, "map columns must match slot dim");
        out_shape[j] = static_cast<uint32_t>(maps[j].rows());
    }
    const FieldCtx& F = t.field();
    Tensor out(F, out_shape);
    size_t in_total = t.total_entries();
    size_t out_total = out.total_entries();
    for (size_t oo = 0; oo < out_total; ++oo) {
        auto oidx = out.index_at(oo);
        FieldElement acc = F.zero();
        for (size_t io = 0; io < in_total; ++io) {
            auto iidx = t.index_at(io);
            FieldElement w = t.flat(io);
            if (F.is_zero(w)) continue;
            for (int j = 0; j < d; ++j) {
                w = F.mul(w, maps[j].at(oidx[j], iidx[j]));
                if (F.is_zero(w)) break;
            }
            acc = F.add(acc, w);
        }
        out.set_flat(oo, acc);
    }
    return out;
}

struct ConciseReduction {
    TensorTuple reduced;
    std::vector<Matrix> inclusions; // inclusions[j]: n_j x n'_j, reduced -> original
};

/// Minimal supporting subspace of slot j across the tuple: the span of the
/// slot-j fibers of all entries, via a deterministic RREF basis.
inline std::vector<std::vector<FieldElement>> slot_span_basis(const TensorTuple& ts, int slot) {
    const FieldCtx& F = ts.field();
    uint32_t nj = ts.shape()[slot - 1];
    size_t fibers = 0;
    for (size_t m = 0; m < ts.size(); ++m) fibers += ts[m].total_entries() / (nj ? nj : 1);
    Matrix rowsm(F, fibers, nj);
    size_t row = 0;
    for (size_t m = 0; m < ts.size(); ++m) {
        const Tensor& t = ts[m];
        size_t total = t.total_entries();
        if (nj == 0 || total == 0) continue;
        // each choice of the other indices contributes one fiber vector
        size_t per = total / nj;
        for (size_t rest = 0; rest < per; ++rest) {
            auto idx = t.index_at(0);
            // decode "rest" over the non-slot dims
            size_t v = rest;
            for (size_t j = t.shape().size(); j-- > 0;) {
                if (static_cast<int>(j) == slot - 1) continue;
                idx[j] = t.shape()[j] ? static_cast<uint32_t>(v % t.shape()[j]) : 0;
                v /= t.shape()[j] ? t.shape()[j] : 1;
            }
            for (uint32_t i = 0; i < nj; ++i) {
                idx[slot - 1] = i;
                rowsm.at(row, i) = t.at(idx);
            }
            ++row;
        }
    }
    return row_space_basis(rowsm);
}

/// Concise reduction: expresses the tuple over the minimal slot subspaces and
/// returns the inclusion matrices; applying the inclusions reproduces the
/// input exactly. Pivot-coordinate extraction is exact because the bases are
/// RREF rows.
inline ConciseReduction concise_reduce(const TensorTuple& ts) {
    const FieldCtx& F = ts.field();
    int d = ts.order();
    std::vector<Matrix> inclusions;
    std::vector<Matrix> projections;
    for (int j = 1; j <= d; ++j) {
        auto basis = slot_span_basis(ts, j);
        uint32_t nj = ts.shape()[j - 1];
        size_t r = basis.size();
        Matrix inc(F, nj, r);
        Matrix proj(F, r, nj);
        for (size_t b = 0; b < r; ++b) {
            size_t pivot = 0;
            while (pivot < nj && F.is_zero(basis[b][pivot])) ++pivot;
            for (uint32_t i = 0; i < nj; ++i) inc.at(i, b) = basis[b][i];
            proj.at(b, pivot) = F.one();
        }
        inclusions.push_back(std::move(inc));
        projections.push_back(std::move(proj));
    }
    std::vector<Tensor> reduced;
    for (const auto& t : ts.entries()) reduced.push_back(apply_maps(t, projections));
    return ConciseReduction{TensorTuple(std::move(reduced)), std::move(inclusions)};
}

} // namespace sprank
