#include "spectra/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spectra/cnf.hpp"
#include "spectra/encoding.hpp"
#include "spectra/evaluate.hpp"
#include "spectra/parse.hpp"
#include "spectra/reduction.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {
std::string verification_report_json(const VerificationReport& report);
}

namespace spectra::cli {

namespace {

ReduceOptions::LoopHandling parse_loop_mode(const std::string& name) {
    if (name == "auto") return ReduceOptions::LoopHandling::Auto;
    if (name == "assume-free" || name == "assume-loop-free")
        return ReduceOptions::LoopHandling::AssumeLoopFree;
    if (name == "eliminate") return ReduceOptions::LoopHandling::Eliminate;
    throw Error("unknown loop mode '" + name + "'");
}

std::vector<std::string> default_names(int m) {
    std::vector<std::string> names;
    for (int l = 1; l <= m; ++l) names.push_back("R" + std::to_string(l));
    return names;
}

std::vector<std::string> split_words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

// Recover m from a graph by counting line vertices (4m+1 of them).
int infer_m(const Graph& g) {
    std::vector<bool> pendant(static_cast<size_t>(g.size()) + 1, false);
    for (int v = 1; v <= g.size(); ++v) pendant[v] = g.degree(v) == 1;
    int line = 0;
    for (int v = 1; v <= g.size(); ++v) {
        if (pendant[v]) continue;
        int count = 0;
        for (int w : g.neighbors(v)) count += pendant[w] ? 1 : 0;
        if (g.degree(v) >= 2 && count == 1) ++line;
    }
    if (line < 13 || (line - 1) % 4 != 0)
        throw Error("cannot infer m: graph has " + std::to_string(line) + " line vertices");
    return (line - 1) / 4;
}

ModelQuery build_query(const std::string& method, const std::string& kind, uint64_t budget,
                       int max_atoms, bool force, bool loop_free) {
    ModelQuery query;
    if (method == "brute") query.method = SearchMethod::BruteForce;
    else if (method == "ground") query.method = SearchMethod::Grounding;
    else throw Error("unknown method '" + method + "'");
    if (kind == "graph") query.kind = GroundKind::GraphOverE;
    else if (kind == "structure") query.kind = GroundKind::StructureOverVocab;
    else if (kind != "auto") throw Error("unknown kind '" + kind + "'");
    query.budget.solver_steps = budget;
    query.budget.max_ground_atoms = max_atoms;
    query.budget.force = force;
    query.loop_free = loop_free;
    return query;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"first-order spectra toolkit: reduce sentences over binary relations to "
                 "one symmetric relation on bipartite graphs"};
    app.name("spectra");
    app.require_subcommand(1);

    int exit_code = 0;

    // reduce
    std::string reduce_in, reduce_out, reduce_report, reduce_loops = "auto";
    auto* cmd_reduce = app.add_subcommand("reduce", "compile a sentence to one over E");
    cmd_reduce->add_option("--in", reduce_in, "input .fo file")->required();
    cmd_reduce->add_option("--out", reduce_out, "output .fo file for phi'");
    cmd_reduce->add_option("--report", reduce_report, "JSON parameter report path");
    cmd_reduce->add_option("--loops", reduce_loops, "auto | assume-free | eliminate");
    cmd_reduce->callback([&] {
        FoDocument doc = load_fo_file(reduce_in);
        ReduceOptions options;
        options.loops = parse_loop_mode(reduce_loops);
        ReductionOutput output = reduce_sentence(doc.formula, doc.vocab, options);
        if (!reduce_out.empty())
            save_text_file(reduce_out,
                           render_fo_document(Vocabulary({"E"}), output.phi_prime));
        if (!reduce_report.empty()) save_text_file(reduce_report, reduction_report_json(output));
        out << "m=" << output.params.m() << " p=" << output.params.p()
            << " q=" << output.params.q() << "\n";
        if (reduce_out.empty()) out << print_formula(output.phi_prime) << "\n";
    });

    // encode
    std::string encode_in, encode_out, encode_format = "graph";
    auto* cmd_encode = app.add_subcommand("encode", "encode a structure as a graph");
    cmd_encode->add_option("--structure", encode_in, "input .structure file")->required();
    cmd_encode->add_option("--out", encode_out, "output path");
    cmd_encode->add_option("--format", encode_format, "graph | dot");
    cmd_encode->callback([&] {
        Structure s = load_structure_file(encode_in);
        auto names = s.relation_names();
        if (names.size() < 3)
            throw Error("encode: structure must interpret at least three relations");
        ReductionParams params(static_cast<int>(names.size()), names);
        EncodedGraph enc = encode_structure(s, params);
        std::string rendered = encode_format == "dot"
                                   ? encoded_graph_dot(enc.graph, enc.classification, params)
                                   : render_graph(enc.graph);
        if (encode_out.empty()) out << rendered;
        else save_text_file(encode_out, rendered);
        err << "encoded: " << enc.graph.size() << " vertices, " << enc.graph.edge_count()
            << " edges\n";
    });

    // decode
    std::string decode_in, decode_out, decode_vocab;
    int decode_m = 0;
    auto* cmd_decode = app.add_subcommand("decode", "decode a graph back to a structure");
    cmd_decode->add_option("--graph", decode_in, "input .graph file")->required();
    cmd_decode->add_option("--out", decode_out, "output .structure path");
    cmd_decode->add_option("--m", decode_m, "relation count (inferred when omitted)");
    cmd_decode->add_option("--vocab", decode_vocab, "relation names, space separated");
    cmd_decode->callback([&] {
        Graph g = load_graph_file(decode_in);
        int m = decode_m > 0 ? decode_m : infer_m(g);
        std::vector<std::string> names =
            decode_vocab.empty() ? default_names(m) : split_words(decode_vocab);
        ReductionParams params(m, names);
        Structure s = decode_graph(g, params);
        std::string rendered = render_structure(s);
        if (decode_out.empty()) out << rendered;
        else save_text_file(decode_out, rendered);
    });

    // check
    std::string check_formula, check_graph, check_structure;
    auto* cmd_check = app.add_subcommand("check", "model-check a formula on a model");
    cmd_check->add_option("--formula", check_formula, "input .fo file")->required();
    cmd_check->add_option("--graph", check_graph, "graph model");
    cmd_check->add_option("--structure", check_structure, "structure model");
    cmd_check->callback([&] {
        FoDocument doc = load_fo_file(check_formula);
        bool holds;
        if (!check_graph.empty()) {
            Graph g = load_graph_file(check_graph);
            holds = evaluate(doc.formula, g);
        } else if (!check_structure.empty()) {
            Structure s = load_structure_file(check_structure);
            holds = evaluate(doc.formula, s);
        } else {
            throw Error("check: provide --graph or --structure");
        }
        out << (holds ? "true" : "false") << "\n";
        exit_code = holds ? 0 : 1;
    });

    // spectrum
    std::string spec_formula, spec_method = "brute", spec_kind = "auto";
    int spec_max = 0, spec_atoms = 25;
    uint64_t spec_budget = 50'000'000;
    bool spec_force = false, spec_loop_free = false;
    auto* cmd_spectrum = app.add_subcommand("spectrum", "enumerate model sizes");
    cmd_spectrum->add_option("--formula", spec_formula, "input .fo file")->required();
    cmd_spectrum->add_option("--max", spec_max, "largest size to try")->required();
    cmd_spectrum->add_option("--method", spec_method, "brute | ground");
    cmd_spectrum->add_option("--kind", spec_kind, "auto | graph | structure");
    cmd_spectrum->add_option("--budget", spec_budget, "solver step budget");
    cmd_spectrum->add_option("--max-atoms", spec_atoms, "brute-force feasibility bound");
    cmd_spectrum->add_flag("--force", spec_force, "override the feasibility bound");
    cmd_spectrum->add_flag("--loop-free", spec_loop_free, "enumerate loop-free structures only");
    cmd_spectrum->callback([&] {
        FoDocument doc = load_fo_file(spec_formula);
        ModelQuery query = build_query(spec_method, spec_kind, spec_budget, spec_atoms,
                                       spec_force, spec_loop_free);
        SpectrumResult result = spectrum(doc.formula, doc.vocab, spec_max, query);
        out << "members:";
        for (int n : result.members) out << " " << n;
        out << "\n";
        if (!result.unknown_sizes.empty()) {
            out << "unknown:";
            for (int n : result.unknown_sizes) out << " " << n;
            out << "\n";
        }
    });

    // ground
    std::string ground_formula, ground_out, ground_map, ground_kind = "auto";
    int ground_size = 0;
    auto* cmd_ground = app.add_subcommand("ground", "ground a sentence to DIMACS CNF");
    cmd_ground->add_option("--formula", ground_formula, "input .fo file")->required();
    cmd_ground->add_option("--size", ground_size, "domain size")->required();
    cmd_ground->add_option("--out", ground_out, "DIMACS output path");
    cmd_ground->add_option("--map", ground_map, "variable map sidecar path");
    cmd_ground->add_option("--kind", ground_kind, "auto | graph | structure");
    cmd_ground->callback([&] {
        FoDocument doc = load_fo_file(ground_formula);
        GroundKind kind;
        if (ground_kind == "graph") kind = GroundKind::GraphOverE;
        else if (ground_kind == "structure") kind = GroundKind::StructureOverVocab;
        else
            kind = doc.vocab.size() == 1 && doc.vocab.symbols()[0] == "E"
                       ? GroundKind::GraphOverE
                       : GroundKind::StructureOverVocab;
        Cnf cnf = ground_to_cnf(doc.formula, ground_size, kind);
        if (ground_out.empty()) out << render_dimacs(cnf);
        else save_text_file(ground_out, render_dimacs(cnf));
        if (!ground_map.empty()) save_text_file(ground_map, render_variable_map(cnf));
        err << "vars=" << cnf.num_vars << " (original " << cnf.num_original << "), clauses="
            << cnf.clause_count() << "\n";
    });

    // gadget
    std::string gadget_which, gadget_format = "dot", gadget_out;
    int gadget_m = 3;
    auto* cmd_gadget = app.add_subcommand("gadget", "emit the ruler (C) or block (D) gadget");
    cmd_gadget->add_option("--which", gadget_which, "C | D")->required();
    cmd_gadget->add_option("--m", gadget_m, "relation count (default 3)");
    cmd_gadget->add_option("--format", gadget_format, "dot | text");
    cmd_gadget->add_option("--out", gadget_out, "output path");
    cmd_gadget->callback([&] {
        std::string rendered;
        if (gadget_which == "C") {
            RulerGadget g = ruler_gadget(gadget_m);
            rendered = gadget_format == "text" ? gadget_text(g) : gadget_dot(g);
        } else if (gadget_which == "D") {
            ElementGadget g = element_gadget(gadget_m);
            rendered = gadget_format == "text" ? gadget_text(g) : gadget_dot(g);
        } else {
            throw Error("gadget: --which must be C or D");
        }
        if (gadget_out.empty()) out << rendered;
        else save_text_file(gadget_out, rendered);
    });

    // verify
    std::string verify_formula, verify_report;
    int verify_max = 2, verify_mutations = 60, verify_cap = 20;
    uint64_t verify_seed = 1;
    auto* cmd_verify = app.add_subcommand("verify", "end-to-end reduction verification");
    cmd_verify->add_option("--formula", verify_formula, "input .fo file")->required();
    cmd_verify->add_option("--max-n", verify_max, "largest structure size to search");
    cmd_verify->add_option("--mutations", verify_mutations, "single-edge mutations to sample");
    cmd_verify->add_option("--seed", verify_seed, "mutation seed");
    cmd_verify->add_option("--witness-cap", verify_cap, "encodes confirmed per size");
    cmd_verify->add_option("--report", verify_report, "JSON report path");
    cmd_verify->callback([&] {
        FoDocument doc = load_fo_file(verify_formula);
        VerifyOptions options;
        options.mutations = verify_mutations;
        options.seed = verify_seed;
        options.witness_cap = verify_cap;
        VerificationReport report = verify_reduction(doc.formula, doc.vocab, verify_max, options);
        out << verification_report_text(report);
        if (!verify_report.empty())
            save_text_file(verify_report, verification_report_json(report));
        exit_code = report.ok ? 0 : 1;
    });

    // roundtrip
    std::string roundtrip_in;
    auto* cmd_roundtrip = app.add_subcommand("roundtrip", "check decode(encode(A)) = A");
    cmd_roundtrip->add_option("--structure", roundtrip_in, "input .structure file")->required();
    cmd_roundtrip->callback([&] {
        Structure s = load_structure_file(roundtrip_in);
        auto names = s.relation_names();
        if (names.size() < 3)
            throw Error("roundtrip: structure must interpret at least three relations");
        ReductionParams params(static_cast<int>(names.size()), names);
        EncodedGraph enc = encode_structure(s, params);
        Structure back = decode_graph(enc.graph, params);
        bool same = back == s;
        out << (same ? "roundtrip ok" : "roundtrip MISMATCH") << "\n";
        exit_code = same ? 0 : 1;
    });

    std::vector<const char*> argv;
    argv.push_back("spectra");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace spectra::cli
