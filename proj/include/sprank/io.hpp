#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sprank/poly.hpp"
#include "sprank/ranktypes.hpp"
#include "sprank/tensor.hpp"

namespace sprank {

// Line-oriented exact formats. `#` lines are comments and are skipped on
// input; emitters write keys and terms in a fixed order so identical objects
// serialise to identical bytes.

namespace iodetail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

/// key=value field of a header line.
inline std::string header_value(const std::vector<std::string>& toks, const std::string& key) {
    for (const auto& t : toks) {
        if (t.rfind(key + "=", 0) == 0) return t.substr(key.size() + 1);
    }
    fail(Errc::PARSE_ERROR, "missing header field " + key);
}

} // namespace iodetail

// -- forms ---------------------------------------------------------------------

inline void emit_form(std::ostream& os, const Form& f) {
    os << "FORM " << f.field().spec() << " n=" << f.nvars() << " d=" << f.degree() << "\n";
    for (const auto& [e, c] : f.terms()) {
        for (size_t i = 0; i < e.size(); ++i) os << e[i] << " ";
        os << ": " << f.field().format(c) << "\n";
    }
}

inline std::string form_to_string(const Form& f) {
    std::ostringstream os;
    emit_form(os, f);
    return os.str();
}

/// Parses one FORM block starting at line `pos` (which must be its header).
/// Consumes term lines until EOF or a line starting a new block.
inline Form parse_form_block(const std::vector<std::string>& lines, size_t& pos) {
    auto toks = iodetail::split_ws(lines[pos]);
    if (toks.size() < 4 || toks[0] != "FORM") fail(Errc::PARSE_ERROR, "expected FORM header");
    FieldCtx field = field_make(toks[1]);
    int n = 0, d = 0;
    try {
        n = std::stoi(iodetail::header_value(toks, "n"));
        d = std::stoi(iodetail::header_value(toks, "d"));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(Errc::PARSE_ERROR, "bad FORM header: " + lines[pos]);
    }
    Form f(field, n, d);
    ++pos;
    while (pos < lines.size()) {
        const std::string& line = lines[pos];
        if (iodetail::is_comment_or_blank(line)) {
            ++pos;
            continue;
        }
        auto t = iodetail::split_ws(line);
        if (!t.empty() && (t[0] == "FORM" || t[0] == "TENSOR" || t[0] == "CERT" || t[0] == "TERM"))
            break;
        if (t.size() != static_cast<size_t>(n) + 2 || t[n] != ":")
            fail(Errc::PARSE_ERROR, "bad term line: " + line);
        Expo e(n);
        try {
            for (int i = 0; i < n; ++i) e[i] = static_cast<uint32_t>(std::stoul(t[i]));
        } catch (const std::exception&) {
            fail(Errc::PARSE_ERROR, "bad exponent in: " + line);
        }
        f.add_term(e, field.parse(t[n + 1]));
        ++pos;
    }
    return f;
}

// -- tensors ---------------------------------------------------------------------

inline void emit_tensor(std::ostream& os, const Tensor& t) {
    os << "TENSOR " << t.field().spec() << " shape=";
    for (size_t j = 0; j < t.shape().size(); ++j) {
        if (j) os << ",";
        os << t.shape()[j];
    }
    os << "\n";
    size_t total = t.total_entries();
    for (size_t off = 0; off < total; ++off) {
        if (t.field().is_zero(t.flat(off))) continue;
        auto idx = t.index_at(off);
        for (size_t j = 0; j < idx.size(); ++j) os << idx[j] + 1 << " ";
        os << ": " << t.field().format(t.flat(off)) << "\n";
    }
}

inline std::string tensor_to_string(const Tensor& t) {
    std::ostringstream os;
    emit_tensor(os, t);
    return os.str();
}

inline Tensor parse_tensor_block(const std::vector<std::string>& lines, size_t& pos) {
    auto toks = iodetail::split_ws(lines[pos]);
    if (toks.size() < 3 || toks[0] != "TENSOR") fail(Errc::PARSE_ERROR, "expected TENSOR header");
    FieldCtx field = field_make(toks[1]);
    std::vector<uint32_t> shape;
    {
        std::istringstream is(iodetail::header_value(toks, "shape"));
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                shape.push_back(static_cast<uint32_t>(std::stoul(tok)));
            } catch (const std::exception&) {
                fail(Errc::PARSE_ERROR, "bad shape: " + lines[pos]);
            }
        }
    }
    Tensor t(field, shape);
    int d = t.order();
    ++pos;
    while (pos < lines.size()) {
        const std::string& line = lines[pos];
        if (iodetail::is_comment_or_blank(line)) {
            ++pos;
            continue;
        }
        auto tk = iodetail::split_ws(line);
        if (!tk.empty() && (tk[0] == "FORM" || tk[0] == "TENSOR" || tk[0] == "CERT" || tk[0] == "TERM"))
            break;
        if (tk.size() != static_cast<size_t>(d) + 2 || tk[d] != ":")
            fail(Errc::PARSE_ERROR, "bad entry line: " + line);
        std::vector<uint32_t> idx(d);
        try {
            for (int i = 0; i < d; ++i) {
                unsigned long v = std::stoul(tk[i]);
                if (v == 0) fail(Errc::PARSE_ERROR, "tensor indices are 1-based: " + line);
                idx[i] = static_cast<uint32_t>(v - 1);
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(Errc::PARSE_ERROR, "bad index in: " + line);
        }
        t.set(idx, field.parse(tk[d + 1]));
        ++pos;
    }
    return t;
}

// -- certificates ------------------------------------------------------------------

inline void emit_decomposition_body(std::ostream& os, const Decomposition& dec) {
    if (dec.coeffs.size() > 1) {
        os << "c:";
        for (const auto& c : dec.coeffs) os << " " << dec.coeff_field.format(c);
        os << "\n";
    }
    if (dec.kind == DecompKind::Strength) {
        int k = 0;
        for (const auto& term : dec.sterms) {
            os << "TERM " << ++k << "\n";
            emit_form(os, term.a);
            emit_form(os, term.b);
        }
    } else {
        int k = 0;
        for (const auto& term : dec.pterms) {
            os << "TERM " << ++k << " I=";
            for (size_t i = 0; i < term.slots.size(); ++i) {
                if (i) os << ",";
                os << term.slots[i];
            }
            os << "\n";
            emit_tensor(os, term.a);
            emit_tensor(os, term.b);
        }
    }
}

inline void emit_certificate(std::ostream& os, const RankCertificate& cert, DecompKind kind) {
    os << "CERT " << (kind == DecompKind::Strength ? "STRENGTH" : "PARTITION") << " value=";
    if (cert.value)
        os << *cert.value;
    else
        os << "INF";
    os << " exhaustive=" << (cert.exhaustive ? 1 : 0) << "\n";
    if (cert.witness) emit_decomposition_body(os, *cert.witness);
}

inline std::string certificate_to_string(const RankCertificate& cert, DecompKind kind) {
    std::ostringstream os;
    emit_certificate(os, cert, kind);
    return os.str();
}

struct ParsedCertificate {
    RankCertificate cert;
    DecompKind kind;
};

inline ParsedCertificate parse_certificate(const std::vector<std::string>& lines, size_t& pos,
                                           const FieldCtx& field, size_t m) {
    while (pos < lines.size() && iodetail::is_comment_or_blank(lines[pos])) ++pos;
    if (pos >= lines.size()) fail(Errc::PARSE_ERROR, "empty certificate");
    auto toks = iodetail::split_ws(lines[pos]);
    if (toks.size() < 4 || toks[0] != "CERT") fail(Errc::PARSE_ERROR, "expected CERT header");
    DecompKind kind;
    if (toks[1] == "STRENGTH")
        kind = DecompKind::Strength;
    else if (toks[1] == "PARTITION")
        kind = DecompKind::Partition;
    else
        fail(Errc::PARSE_ERROR, "bad certificate kind: " + toks[1]);
    RankCertificate cert;
    std::string val = iodetail::header_value(toks, "value");
    if (val == "INF")
        cert.value = std::nullopt;
    else {
        try {
            cert.value = std::stoull(val);
        } catch (const std::exception&) {
            fail(Errc::PARSE_ERROR, "bad value: " + val);
        }
    }
    cert.exhaustive = iodetail::header_value(toks, "exhaustive") == "1";
    ++pos;

    Decomposition dec;
    dec.kind = kind;
    dec.coeff_field = field;
    dec.coeffs.assign(m, field.zero());
    if (m >= 1) dec.coeffs[m - 1] = field.one();
    bool any_body = false;

    while (pos < lines.size() && iodetail::is_comment_or_blank(lines[pos])) ++pos;
    if (pos < lines.size()) {
        auto t = iodetail::split_ws(lines[pos]);
        if (!t.empty() && t[0] == "c:") {
            if (t.size() != m + 1) fail(Errc::PARSE_ERROR, "coefficient count != m");
            for (size_t k = 0; k < m; ++k) dec.coeffs[k] = field.parse(t[k + 1]);
            any_body = true;
            ++pos;
        }
    }
    while (pos < lines.size()) {
        if (iodetail::is_comment_or_blank(lines[pos])) {
            ++pos;
            continue;
        }
        auto t = iodetail::split_ws(lines[pos]);
        if (t.empty() || t[0] != "TERM") break;
        ++pos;
        while (pos < lines.size() && iodetail::is_comment_or_blank(lines[pos])) ++pos;
        if (kind == DecompKind::Strength) {
            Form a = parse_form_block(lines, pos);
            while (pos < lines.size() && iodetail::is_comment_or_blank(lines[pos])) ++pos;
            Form b = parse_form_block(lines, pos);
            dec.sterms.push_back({std::move(a), std::move(b)});
        } else {
            std::vector<int> slots;
            std::string ival = iodetail::header_value(t, "I");
            std::istringstream is(ival);
            std::string tok;
            while (std::getline(is, tok, ',')) slots.push_back(std::stoi(tok));
            Tensor a = parse_tensor_block(lines, pos);
            while (pos < lines.size() && iodetail::is_comment_or_blank(lines[pos])) ++pos;
            Tensor b = parse_tensor_block(lines, pos);
            dec.pterms.push_back({std::move(slots), std::move(a), std::move(b)});
        }
        any_body = true;
    }
    if (any_body || cert.value == std::optional<uint64_t>(0)) cert.witness = std::move(dec);
    return ParsedCertificate{std::move(cert), kind};
}

// -- whole files ----------------------------------------------------------------------

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IO_ERROR, "cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::IO_ERROR, "cannot open " + path + " for writing");
    out << content;
}

/// A tuple file is one or more concatenated FORM (or TENSOR) blocks.
inline FormTuple parse_form_tuple(const std::vector<std::string>& lines) {
    std::vector<Form> forms;
    size_t pos = 0;
    while (pos < lines.size()) {
        if (iodetail::is_comment_or_blank(lines[pos])) {
            ++pos;
            continue;
        }
        forms.push_back(parse_form_block(lines, pos));
    }
    if (forms.empty()) fail(Errc::PARSE_ERROR, "no FORM blocks found");
    return FormTuple(std::move(forms));
}

inline TensorTuple parse_tensor_tuple(const std::vector<std::string>& lines) {
    std::vector<Tensor> tensors;
    size_t pos = 0;
    while (pos < lines.size()) {
        if (iodetail::is_comment_or_blank(lines[pos])) {
            ++pos;
            continue;
        }
        tensors.push_back(parse_tensor_block(lines, pos));
    }
    if (tensors.empty()) fail(Errc::PARSE_ERROR, "no TENSOR blocks found");
    return TensorTuple(std::move(tensors));
}

} // namespace sprank
