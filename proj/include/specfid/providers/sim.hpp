#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specfid/core/rng.hpp"
#include "specfid/core/types.hpp"
#include "specfid/providers/provider.hpp"

namespace specfid::providers {

// Per-fact document state. correct: the spec states the truth. wrong: it
// states something else. missing: it is silent. spurious: it asserts a
// behaviour the program does not have (negative-probe territory).
enum class FactStatus { correct, wrong, missing, spurious };
const char* to_string(FactStatus s);

struct WorldFact {
    std::string id;
    std::string truth;       // canonical answer read off the code
    std::string wrong_text;  // what the document says when it is wrong
    FactStatus status = FactStatus::missing;
    Category category = Category::guard;  // negative for spurious facts
};

// A closed universe of M behaviour facts plus the document's per-fact
// status. pi/r drive the revision chain, d injects spec-echo drift into
// generated probes. Everything downstream is deterministic given a seed.
struct SyntheticWorld {
    std::vector<WorldFact> facts;
    double pi = 1.0;  // P(actioned fact becomes correct)
    double r = 0.0;   // P(untouched correct fact regresses)
    double d = 0.0;   // P(generated probe echoes the document wording)

    std::size_t correct_count() const;
    double fidelity() const;  // fraction of facts in status correct
};

// Deterministic universe: statuses are dealt by exact count (fractions of
// m, remainder to correct) and shuffled with the seed. Spurious facts get
// category negative; the rest cycle through the symbolic categories.
SyntheticWorld make_world(std::size_t m, double wrong_frac, double missing_frac,
                          double spurious_frac, std::uint64_t seed);

// n uniform-with-replacement draws over the universe. With probability d a
// probe's truth is replaced by the document's current wording for that fact
// (no-op for missing facts, which have no wording to echo). Probe ids are
// "<fact>#<draw>"; the fact id rides in metadata["fact"].
std::vector<Probe> sim_generate(const SyntheticWorld& world, std::size_t n,
                                std::uint64_t seed);

// Status-driven judge: correct -> the truth, wrong/spurious -> the wrong
// text, missing -> SILENT. Unknown fact ids are a ValidationError.
JudgeAnswer sim_judge(const SyntheticWorld& world, const Probe& probe);

// One revision round: every actioned fact flips to correct with probability
// pi; every untouched correct fact regresses to wrong with probability r.
// Duplicate actions on one fact count once.
SyntheticWorld sim_revise(const SyntheticWorld& world, const std::vector<Action>& actions,
                          std::uint64_t seed);

// Deterministic text backend for wiring tests: a fixed reply per role when
// configured, otherwise an echo derived from the prompt. Token counts are
// synthetic (proportional to text length) so usage plumbing is exercised.
class SimTextProvider : public TextProvider {
  public:
    void set_reply(Role role, std::string reply);
    Completion complete(Role role, const std::string& prompt) override;

  private:
    std::map<Role, std::string> replies_;
};

// Comparator backend used in simulated mode: normalized-match semantics.
class SimComparator : public AnswerComparator {
  public:
    CompareLabel compare(const std::string& a, const std::string& b) override;
};

}  // namespace specfid::providers
