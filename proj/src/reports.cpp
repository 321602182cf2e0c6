#include <json.hpp>

#include "spectra/reduction.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

namespace {

const char* mode_string(ReduceOptions::LoopHandling mode) {
    switch (mode) {
        case ReduceOptions::LoopHandling::Auto: return "auto";
        case ReduceOptions::LoopHandling::AssumeLoopFree: return "assume-loop-free";
        case ReduceOptions::LoopHandling::Eliminate: return "eliminate";
    }
    return "?";
}

}  // namespace

std::string reduction_report_json(const ReductionOutput& output) {
    nlohmann::json j;
    j["m"] = output.params.m();
    j["p"] = output.params.p();
    j["q"] = output.params.q();
    j["line_vertices"] = output.params.line_count();
    j["loop_mode"] = mode_string(output.effective_mode);
    j["vocabulary"] = output.vocab_pre.symbols();
    nlohmann::json roles = nlohmann::json::array();
    for (const auto& role : output.params.all_roles()) {
        nlohmann::json r;
        r["role"] = role.name();
        r["walk_length"] = output.params.walk_length(role);
        r["attach_positions"] = output.params.attach_positions(role);
        roles.push_back(r);
    }
    j["attachment"] = roles;
    nlohmann::json stats;
    stats["nodes"] = output.phi_prime->node_count;
    stats["quantifier_depth"] = output.phi_prime->quantifier_depth;
    stats["variables"] = variables_used(output.phi_prime);
    j["phi_prime"] = stats;
    nlohmann::json pre;
    pre["nodes"] = output.phi_pre->node_count;
    pre["quantifier_depth"] = output.phi_pre->quantifier_depth;
    j["phi_pre"] = pre;
    return j.dump(2) + "\n";
}

std::string verification_report_json(const VerificationReport& report) {
    nlohmann::json j;
    j["formula"] = report.formula_text;
    j["m"] = report.m;
    j["p"] = report.p;
    j["q"] = report.q;
    j["loop_mode"] = report.loop_mode;
    j["n_max"] = report.n_max;
    j["spectrum_members"] = report.spec_members;
    nlohmann::json forward = nlohmann::json::array();
    for (const auto& check : report.forward) {
        nlohmann::json c;
        c["n"] = check.n;
        c["graph_size"] = check.graph_size;
        c["models_total"] = check.models_total;
        c["models_confirmed"] = check.models_confirmed;
        c["all_satisfy_phi_prime"] = check.all_satisfy;
        c["size_law_exact"] = check.size_law_exact;
        c["bipartite"] = check.bipartite;
        forward.push_back(c);
    }
    j["forward"] = forward;
    j["roundtrip"] = {{"checked", report.roundtrip_checked}, {"ok", report.roundtrip_ok}};
    j["mutations"] = {{"tested", report.mutations_tested},
                      {"wellformed", report.mutations_wellformed},
                      {"dual_path_ok", report.mutation_dual_path_ok},
                      {"coherent_ok", report.mutation_coherent_ok}};
    j["grounding_witness_ok"] = report.grounding_witness_ok;
    j["backward_note"] = report.backward_note;
    j["ok"] = report.ok;
    return j.dump(2) + "\n";
}

}  // namespace spectra
