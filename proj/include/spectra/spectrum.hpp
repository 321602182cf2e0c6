#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectra/cnf.hpp"
#include "spectra/formula.hpp"
#include "spectra/structure.hpp"

namespace spectra {

enum class SearchMethod { BruteForce, Grounding };

struct SearchBudget {
    uint64_t solver_steps = 50'000'000;
    int max_ground_atoms = 25;  // brute force enumerates at most 2^this models
    bool force = false;         // lift the brute-force feasibility guard
};

struct ModelQuery {
    SearchMethod method = SearchMethod::BruteForce;
    SearchBudget budget;
    std::optional<GroundKind> kind;  // default: graphs iff the vocabulary is {E}
    bool loop_free = false;          // restrict brute force to loop-free structures
};

enum class Answer : uint8_t { Yes, No, Unknown };

// Does the sentence have a model of the exact size n? Brute force enumerates
// and is exact; grounding runs the solver within budget and may answer
// Unknown, never a wrong boolean.
Answer has_model(const FormulaPtr& f, const Vocabulary& vocab, int n,
                 const ModelQuery& query = {});

// A witness model of size n, when one exists and the search completes.
std::optional<Structure> find_model(const FormulaPtr& f, const Vocabulary& vocab, int n,
                                    const ModelQuery& query = {});

struct SpectrumResult {
    std::string formula_text;
    int max_size = 0;
    std::vector<int> members;                 // sorted
    std::vector<int> unknown_sizes;           // budget ran out
    std::vector<std::string> method_per_size;  // 1-based description per n
};

SpectrumResult spectrum(const FormulaPtr& f, const Vocabulary& vocab, int max,
                        const ModelQuery& query = {});

struct VerificationReport {
    std::string formula_text;
    int m = 0, p = 0, q = 0;
    std::string loop_mode;
    int n_max = 0;
    std::vector<int> spec_members;  // Spec(phi_pre) within 1..n_max

    struct ForwardCheck {
        int n = 0;
        int graph_size = 0;
        int models_total = 0;      // models of this size found by the search
        int models_confirmed = 0;  // encodes checked against phi_prime
        bool all_satisfy = false;
        bool size_law_exact = false;
        bool bipartite = false;
    };
    std::vector<ForwardCheck> forward;

    int roundtrip_checked = 0;
    bool roundtrip_ok = false;

    int mutations_tested = 0;
    int mutations_wellformed = 0;  // mutants still satisfying the encoding axioms
    bool mutation_dual_path_ok = false;  // classifier agrees with the axioms
    bool mutation_coherent_ok = false;   // decode preserves satisfaction

    bool grounding_witness_ok = false;  // encode-derived assignment satisfies ground(phi')

    std::string backward_note;
    bool ok = false;
};

struct VerifyOptions {
    int witness_cap = 20;   // encodes confirmed per size
    int mutations = 60;
    uint64_t seed = 1;
    bool check_grounding = true;
};

// End-to-end check of the reduction at desk scale; see the report fields.
VerificationReport verify_reduction(const FormulaPtr& phi, const Vocabulary& vocab, int n_max,
                                    const VerifyOptions& options = {});

std::string verification_report_text(const VerificationReport& report);
std::string verification_report_json(const VerificationReport& report);

}  // namespace spectra
