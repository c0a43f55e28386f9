#pragma once

#include <optional>
#include <vector>

#include "sprank/poly.hpp"
#include "sprank/tensor.hpp"

namespace sprank {

enum class DecompKind { Strength, Partition };

struct StrengthTerm {
    Form a;
    Form b;
};

struct PartitionTerm {
    std::vector<int> slots; // I, sorted 1-based
    Tensor a;               // on V_I
    Tensor b;               // on V_{I^c}
};

/// A decomposition certificate. For m = 1 the coefficient vector is (1); for
/// m > 1 it is the collective coefficient vector, never all zero.
struct Decomposition {
    DecompKind kind = DecompKind::Partition;
    std::vector<StrengthTerm> sterms;
    std::vector<PartitionTerm> pterms;
    std::vector<FieldElement> coeffs;
    FieldCtx coeff_field;

    size_t term_count() const {
        return kind == DecompKind::Strength ? sterms.size() : pterms.size();
    }
};

struct RankCertificate {
    std::optional<uint64_t> value; // nullopt encodes INFINITY
    std::optional<Decomposition> witness;
    bool exhaustive = false;
    bool budget_hit = false;
};

/// Sum of the strength terms: sum_i a_i * b_i.
inline Form reassemble_strength(const Decomposition& dec, const FieldCtx& field, int nvars,
                                int degree) {
    Form acc(field, nvars, degree);
    for (const auto& term : dec.sterms) acc = acc.plus(form_mul(term.a, term.b));
    return acc;
}

/// Sum of the partition terms placed back into the ambient shape:
/// sum_i a_i (x) b_i with the I_i slots taken from a_i.
inline Tensor reassemble_partition(const Decomposition& dec, const FieldCtx& field,
                                   const std::vector<uint32_t>& shape) {
    Tensor acc(field, shape);
    int d = static_cast<int>(shape.size());
    for (const auto& term : dec.pterms) {
        check_subset(term.slots, d);
        auto Ic = complement_subset(term.slots, d);
        if (term.a.shape() != subshape(shape, term.slots) || term.b.shape() != subshape(shape, Ic))
            fail(Errc::SHAPE_MISMATCH, "term factor shapes do not match the ambient shape");
        size_t total = acc.total_entries();
        for (size_t off = 0; off < total; ++off) {
            auto idx = acc.index_at(off);
            std::vector<uint32_t> ia, ib;
            for (int v : term.slots) ia.push_back(idx[v - 1]);
            for (int v : Ic) ib.push_back(idx[v - 1]);
            FieldElement prod = field.mul(term.a.at(ia), term.b.at(ib));
            acc.set_flat(off, field.add(acc.flat(off), prod));
        }
    }
    return acc;
}

/// True when the witness reassembles to the coefficient combination of the
/// tuple, the defining equality of a valid certificate.
inline bool decomposition_matches(const Decomposition& dec, const FormTuple& fs) {
    Form target = fs.combine(dec.coeffs);
    Form got = reassemble_strength(dec, fs.field(), fs.nvars(), fs.degree());
    return got == target;
}

inline bool decomposition_matches(const Decomposition& dec, const TensorTuple& ts) {
    Tensor target = ts.combine(dec.coeffs);
    Tensor got = reassemble_partition(dec, ts.field(), ts.shape());
    return got == target;
}

} // namespace sprank
