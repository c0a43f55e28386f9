// Command-line front end: rank, descend, mine, bounds, dspace, verify, check.
// Reports are flat `key = value` lines on stdout; artifact files are written
// bit-exactly, so identical invocations produce identical bytes.
// Exit codes: 0 success, 2 verification failure, 3 input error, 4 budget
// exceeded.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sprank/sprank.hpp"

namespace {

using namespace sprank;

int classify_exit(const Error& e) {
    switch (e.code()) {
        case Errc::CAP_EXCEEDED: return 4;
        case Errc::VERIFICATION_FAILED:
        case Errc::IE_MISMATCH:
        case Errc::UNSOLVABLE: return 2;
        default: return 3;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << " = " << value << "\n";
}

std::string value_str(const RankCertificate& cert) {
    return cert.value ? std::to_string(*cert.value) : "INF";
}

std::vector<uint32_t> parse_shape(const std::string& s) {
    std::vector<uint32_t> shape;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) shape.push_back(static_cast<uint32_t>(std::stoul(tok)));
    if (shape.empty()) fail(Errc::PARSE_ERROR, "empty shape");
    return shape;
}

/// Partitions like "1|2,3" (I_1 = {1}, I_2 = {2,3}).
std::vector<std::vector<int>> parse_partitions(const std::string& s) {
    std::vector<std::vector<int>> out;
    std::istringstream is(s);
    std::string group;
    while (std::getline(is, group, '|')) {
        std::vector<int> I;
        std::istringstream gs(group);
        std::string tok;
        while (std::getline(gs, tok, ',')) I.push_back(std::stoi(tok));
        out.push_back(std::move(I));
    }
    return out;
}

bool file_is_tensor(const std::vector<std::string>& lines) {
    for (const auto& line : lines) {
        if (iodetail::is_comment_or_blank(line)) continue;
        auto toks = iodetail::split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "TENSOR") return true;
        if (toks[0] == "FORM") return false;
        break;
    }
    fail(Errc::PARSE_ERROR, "input file has neither FORM nor TENSOR blocks");
}

void require_field_match(const FieldCtx& file_field, const std::string& flag_field) {
    if (flag_field.empty()) return;
    if (field_make(flag_field) != file_field)
        fail(Errc::FIELD_MISMATCH, "--field disagrees with the field of the input file");
}

int run(int argc, char** argv) {
    CLI::App app{"exact strength / partition rank toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string opt_field;
    uint64_t opt_seed = 0;
    uint64_t opt_budget = 0;
    std::string opt_in, opt_out;
    app.add_option("--field", opt_field, "field spec: Q | GF(p) | GF(p^e) | GF(p^e;c0,...,ce)");
    app.add_option("--seed", opt_seed, "seed for all randomness");
    app.add_option("--budget", opt_budget, "cap on linear systems solved per search");
    app.add_option("--in", opt_in, "input file");
    app.add_option("--out", opt_out, "output file");

    auto budget = [&]() {
        Budget b;
        if (opt_budget) b.max_systems = opt_budget;
        return b;
    };

    // rank prk|strength
    auto* rank = app.add_subcommand("rank", "exact rank search with certificate output");
    auto* rank_prk = rank->add_subcommand("prk", "partition rank of a tensor tuple");
    auto* rank_strength = rank->add_subcommand("strength", "strength of a form tuple");
    rank->require_subcommand(1);

    // descend
    auto* desc = app.add_subcommand("descend", "field-extension descent of a certificate");
    std::string desc_ext, desc_cert;
    desc->add_option("--ext", desc_ext, "extension field spec (L)")->required();
    desc->add_option("--cert", desc_cert, "certificate file over L")->required();

    // mine
    auto* mine = app.add_subcommand("mine", "mine a defining equation of a bounded-rank locus");
    std::string mine_shape, mine_partitions, mine_splits;
    int mine_d = 0, mine_m = 1, mine_r = 1, mine_cap = 2, mine_nvars = 0;
    uint64_t mine_margin = 16;
    bool mine_form = false;
    mine->add_option("--shape", mine_shape, "tensor shape n1,n2,...,nd");
    mine->add_option("--d", mine_d, "degree (form mode)");
    mine->add_option("--m", mine_m, "tuple length");
    mine->add_option("--r", mine_r, "rank of the locus");
    mine->add_option("--partitions", mine_partitions, "subsets per term, e.g. 1|2,3");
    mine->add_option("--splits", mine_splits, "degree splits per term, e.g. 1,1");
    mine->add_option("--degree-cap", mine_cap, "maximal equation degree D");
    mine->add_option("--margin", mine_margin, "extra samples and verification samples");
    mine->add_flag("--form", mine_form, "mine the form locus instead of the tensor locus");
    mine->add_option("--nvars", mine_nvars, "variable count (form mode)");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate the explicit numeric bounds");
    int b_d = 0, b_m = 1, b_r = 0;
    std::string b_shape;
    uint64_t b_degh = 0;
    bounds->add_option("--d", b_d, "order / degree")->required();
    bounds->add_option("--m", b_m, "tuple length");
    bounds->add_option("--r", b_r, "rank");
    bounds->add_option("--shape", b_shape, "shape for prk_bound (default: cubical min_n)");
    bounds->add_option("--deg-h", b_degh, "degree of h for the extension-degree rule");

    // dspace
    auto* dsp = app.add_subcommand("dspace", "derivative space basis and membership experiment");
    std::string dsp_gens;
    dsp->add_option("--gens", dsp_gens, "optional generator file for subalgebra membership");

    // verify
    auto* ver = app.add_subcommand("verify", "run a seeded invariant suite");
    std::string ver_suite, ver_K, ver_shape;
    int ver_d = 3, ver_n = 2, ver_m = 1;
    uint32_t ver_e = 2;
    uint64_t ver_count = 100;
    ver->add_option("suite", ver_suite, "pi-iota | prop-sym | descent | coeff-extract")->required();
    ver->add_option("--d", ver_d, "degree / order");
    ver->add_option("--n", ver_n, "variables / cubical dimension");
    ver->add_option("--count", ver_count, "sample count (0 = exhaustive for prop-sym)");
    ver->add_option("--K", ver_K, "base field (descent suite)");
    ver->add_option("--e", ver_e, "extension degree (descent suite)");
    ver->add_option("--shape", ver_shape, "tensor shape (descent / coeff-extract suites)");
    ver->add_option("--m", ver_m, "tuple length (descent suite)");

    // check
    auto* chk = app.add_subcommand("check", "re-verify a certificate against a tuple file");
    std::string chk_cert;
    chk->add_option("--cert", chk_cert, "certificate file")->required();

    CLI11_PARSE(app, argc, argv);

    Timer timer;

    if (rank->parsed()) {
        if (opt_in.empty()) fail(Errc::IO_ERROR, "--in is required");
        auto lines = read_lines(opt_in);
        RankCertificate cert;
        DecompKind kind;
        FieldCtx field;
        if (rank_prk->parsed()) {
            TensorTuple ts = parse_tensor_tuple(lines);
            require_field_match(ts.field(), opt_field);
            field = ts.field();
            cert = prk_exact(ts, budget());
            kind = DecompKind::Partition;
        } else {
            FormTuple fs = parse_form_tuple(lines);
            require_field_match(fs.field(), opt_field);
            field = fs.field();
            cert = strength_exact(fs, budget());
            kind = DecompKind::Strength;
            uint64_t ch = field.characteristic();
            if (ch != 0 && ch <= static_cast<uint64_t>(fs.degree()))
                print_kv("outside_theorem_hypotheses", "1");
        }
        print_kv("value", value_str(cert));
        print_kv("exhaustive", cert.exhaustive ? "1" : "0");
        print_kv("budget_hit", cert.budget_hit ? "1" : "0");
        print_kv("elapsed_ms", std::to_string(timer.ms()));
        if (!opt_out.empty()) {
            write_file(opt_out, certificate_to_string(cert, kind));
            print_kv("certificate", opt_out);
        }
        return cert.budget_hit ? 4 : 0;
    }

    if (desc->parsed()) {
        if (opt_in.empty()) fail(Errc::IO_ERROR, "--in is required");
        auto tuple_lines = read_lines(opt_in);
        auto cert_lines = read_lines(desc_cert);
        FieldCtx L = field_make(desc_ext);
        size_t pos = 0;
        Decomposition down;
        uint64_t in_terms = 0;
        if (file_is_tensor(tuple_lines)) {
            TensorTuple ts = parse_tensor_tuple(tuple_lines);
            require_field_match(ts.field(), opt_field);
            FieldExt ext = FieldExt::make(ts.field(), L);
            auto parsed = parse_certificate(cert_lines, pos, L, ts.size());
            if (!parsed.cert.witness) fail(Errc::NOT_A_DECOMPOSITION, "certificate has no witness");
            in_terms = parsed.cert.witness->term_count();
            down = descend(ts, ext, *parsed.cert.witness);
        } else {
            FormTuple fs = parse_form_tuple(tuple_lines);
            require_field_match(fs.field(), opt_field);
            FieldExt ext = FieldExt::make(fs.field(), L);
            auto parsed = parse_certificate(cert_lines, pos, L, fs.size());
            if (!parsed.cert.witness) fail(Errc::NOT_A_DECOMPOSITION, "certificate has no witness");
            in_terms = parsed.cert.witness->term_count();
            down = descend(fs, ext, *parsed.cert.witness);
        }
        print_kv("input_terms", std::to_string(in_terms));
        print_kv("output_terms", std::to_string(down.term_count()));
        print_kv("elapsed_ms", std::to_string(timer.ms()));
        if (!opt_out.empty()) {
            RankCertificate out_cert;
            out_cert.value = down.term_count();
            out_cert.exhaustive = false; // descent only witnesses an upper bound
            out_cert.witness = down;
            write_file(opt_out, certificate_to_string(out_cert, down.kind));
            print_kv("certificate", opt_out);
        }
        return 0;
    }

    if (mine->parsed()) {
        FieldCtx F = field_make(opt_field.empty() ? "GF(101)" : opt_field);
        LocusSpec spec;
        if (mine_form) {
            if (mine_nvars < 1 || mine_d < 2) fail(Errc::UNSUPPORTED, "--form needs --nvars and --d");
            spec = LocusSpec::forms(mine_nvars, mine_d, mine_m, mine_r,
                                    mine_splits.empty() ? std::vector<int>{}
                                                        : [&] {
                                                              std::vector<int> v;
                                                              std::istringstream is(mine_splits);
                                                              std::string tok;
                                                              while (std::getline(is, tok, ','))
                                                                  v.push_back(std::stoi(tok));
                                                              return v;
                                                          }());
        } else {
            if (mine_shape.empty()) fail(Errc::UNSUPPORTED, "--shape is required for tensor loci");
            spec = LocusSpec::tensors(parse_shape(mine_shape), mine_m, mine_r,
                                      mine_partitions.empty() ? std::vector<std::vector<int>>{}
                                                              : parse_partitions(mine_partitions));
        }
        MiningRun mrun = mine_equation_run(spec, F, mine_cap, mine_margin, opt_seed, budget());
        print_kv("kernel_dim", std::to_string(mrun.kernel.size()));
        if (!mrun.equation) {
            print_kv("result", "NONE_FOUND");
            print_kv("elapsed_ms", std::to_string(timer.ms()));
            return 0;
        }
        const MinedEquation& eq = *mrun.equation;
        print_kv("result", "FOUND");
        print_kv("degree", std::to_string(eq.polynomial.degree()));
        print_kv("terms", std::to_string(eq.polynomial.term_count()));
        print_kv("samples_used", std::to_string(eq.samples_used));
        print_kv("verification_samples", std::to_string(eq.verification_samples));
        print_kv("elapsed_ms", std::to_string(timer.ms()));
        if (!opt_out.empty()) {
            std::ostringstream os;
            os << "# mined equation: degree_cap=" << eq.degree_cap << " margin=" << mine_margin
               << " seed=" << eq.seed << " samples=" << eq.samples_used
               << " verification_samples=" << eq.verification_samples << "\n";
            emit_form(os, eq.polynomial);
            write_file(opt_out, os.str());
            print_kv("equation", opt_out);
        }
        return 0;
    }

    if (bounds->parsed()) {
        print_kv("min_n", std::to_string(min_n(b_d, b_m, b_r)));
        std::vector<uint32_t> shape;
        if (!b_shape.empty())
            shape = parse_shape(b_shape);
        else
            shape.assign(b_d, static_cast<uint32_t>(min_n(b_d, b_m, b_r)));
        {
            std::ostringstream os;
            os << prk_bound(b_d, b_m, shape);
            print_kv("prk_bound", os.str());
        }
        try {
            DegreeBound db = degree_bound(b_d, b_m, b_r);
            print_kv("degree_bound_n", std::to_string(db.n));
            std::ostringstream os;
            os << db.D;
            print_kv("degree_bound_D", os.str());
        } catch (const Error& e) {
            if (e.code() != Errc::NBOUND_UNMET) throw;
            print_kv("degree_bound_D", "NBOUND_UNMET");
        }
        if (b_degh > 0)
            print_kv("ext_degree_needed", std::to_string(ext_degree_needed(b_d, b_degh)));
        print_kv("elapsed_ms", std::to_string(timer.ms()));
        return 0;
    }

    if (dsp->parsed()) {
        if (opt_in.empty()) fail(Errc::IO_ERROR, "--in is required");
        auto lines = read_lines(opt_in);
        size_t pos = 0;
        while (pos < lines.size() && iodetail::is_comment_or_blank(lines[pos])) ++pos;
        Form f = parse_form_block(lines, pos);
        require_field_match(f.field(), opt_field);
        if (!dsp_gens.empty()) {
            FormTuple gens = parse_form_tuple(read_lines(dsp_gens));
            MembershipVerdict v = subalgebra_member(f, gens.entries());
            print_kv("member", v.member ? "1" : "0");
            print_kv("combination_terms", std::to_string(v.combination.size()));
            print_kv("elapsed_ms", std::to_string(timer.ms()));
            return 0;
        }
        DfReport rep = df_experiment(f, budget());
        DerivativeSpace ds = f.is_zero() ? DerivativeSpace{} : dspace(f);
        print_kv("dspace_dim", std::to_string(rep.dspace_dim));
        for (const auto& [deg, basis] : ds.by_degree)
            print_kv("dim_degree_" + std::to_string(deg), std::to_string(basis.size()));
        print_kv("member", rep.member ? "1" : "0");
        print_kv("pruned_generators", std::to_string(rep.pruned_generator_count));
        if (rep.strength)
            print_kv("strength", value_str(*rep.strength));
        else
            print_kv("strength", "unavailable");
        if (rep.outside_char_hypotheses) print_kv("outside_theorem_hypotheses", "1");
        print_kv("elapsed_ms", std::to_string(timer.ms()));
        if (!opt_out.empty()) {
            std::ostringstream os;
            os << "# derivative space basis\n";
            for (const auto& b : ds.basis) emit_form(os, b);
            write_file(opt_out, os.str());
            print_kv("basis", opt_out);
        }
        return 0;
    }

    if (ver->parsed()) {
        SuiteReport rep;
        FieldCtx F = field_make(opt_field.empty() ? "GF(5)" : opt_field);
        if (ver_suite == "pi-iota") {
            rep = verify_pi_iota(F, ver_d, ver_n, opt_seed, ver_count);
        } else if (ver_suite == "prop-sym") {
            rep = verify_prop_sym(F, ver_d, ver_n, opt_seed, ver_count, budget());
        } else if (ver_suite == "descent") {
            FieldCtx K = field_make(ver_K.empty() ? "GF(2)" : ver_K);
            std::vector<uint32_t> shape =
                ver_shape.empty() ? std::vector<uint32_t>{2, 2, 2} : parse_shape(ver_shape);
            rep = verify_descent(K, ver_e, shape, ver_m, opt_seed, ver_count, budget());
        } else if (ver_suite == "coeff-extract") {
            std::vector<uint32_t> shape =
                ver_shape.empty() ? std::vector<uint32_t>{2, 2, 2} : parse_shape(ver_shape);
            rep = verify_coeff_extract(F, shape, opt_seed, ver_count);
        } else {
            fail(Errc::UNSUPPORTED, "unknown suite: " + ver_suite);
        }
        print_kv("suite", rep.suite);
        print_kv("count", std::to_string(rep.count));
        print_kv("passes", std::to_string(rep.passes));
        print_kv("failures", std::to_string(rep.failures));
        print_kv("skipped", std::to_string(rep.skipped));
        for (const auto& note : rep.notes) print_kv("note", note);
        print_kv("elapsed_ms", std::to_string(timer.ms()));
        return rep.ok() ? 0 : 2;
    }

    if (chk->parsed()) {
        if (opt_in.empty()) fail(Errc::IO_ERROR, "--in is required");
        auto tuple_lines = read_lines(opt_in);
        auto cert_lines = read_lines(chk_cert);
        size_t pos = 0;
        bool ok = false;
        if (file_is_tensor(tuple_lines)) {
            TensorTuple ts = parse_tensor_tuple(tuple_lines);
            auto parsed = parse_certificate(cert_lines, pos, ts.field(), ts.size());
            if (!parsed.cert.witness) fail(Errc::NOT_A_DECOMPOSITION, "certificate has no witness");
            ok = decomposition_matches(*parsed.cert.witness, ts) &&
                 parsed.cert.value == std::optional<uint64_t>(parsed.cert.witness->term_count());
        } else {
            FormTuple fs = parse_form_tuple(tuple_lines);
            auto parsed = parse_certificate(cert_lines, pos, fs.field(), fs.size());
            if (!parsed.cert.witness) fail(Errc::NOT_A_DECOMPOSITION, "certificate has no witness");
            ok = decomposition_matches(*parsed.cert.witness, fs) &&
                 parsed.cert.value == std::optional<uint64_t>(parsed.cert.witness->term_count());
        }
        print_kv("check", ok ? "PASS" : "FAIL");
        print_kv("elapsed_ms", std::to_string(timer.ms()));
        return ok ? 0 : 2;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sprank::Error& e) {
        std::cout << "error = " << e.name() << "\n";
        std::cerr << e.what() << "\n";
        return classify_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "unexpected: " << e.what() << "\n";
        return 3;
    }
}
