#include "specfid/loop/revise.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <thread>
#include <vector>

#include "specfid/core/errors.hpp"
#include "specfid/core/json_io.hpp"
#include "specfid/core/text.hpp"
#include "specfid/providers/prompt.hpp"

namespace specfid::loop {

namespace {

const char* kRevisePrompt =
    "You revise a requirements document so it matches the program's actual "
    "behaviour.\n"
    "Apply every action below to the document. Keep every requirement anchor "
    "id that\n"
    "the actions do not tell you to remove, and leave unrelated lines "
    "untouched.\n"
    "Reply with the complete revised document and nothing else.\n"
    "\n"
    "--- document ---\n"
    "{document}\n"
    "--- end document ---\n"
    "\n"
    "actions:\n"
    "{actions}\n";

// Revisers tend to wrap documents in a markdown fence; unwrap one if present.
std::string strip_fences(const std::string& reply) {
    auto lines = text::split_lines(reply);
    while (!lines.empty() && text::trim(lines.front()).empty()) lines.erase(lines.begin());
    while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
    if (lines.size() >= 2 && text::trim(lines.front()).rfind("```", 0) == 0 &&
        text::trim(lines.back()) == "```") {
        lines.erase(lines.begin());
        lines.pop_back();
    }
    return text::join(lines, "\n");
}

// Lines off a longest common subsequence: the changed set on each side.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> diff_lines(
    const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::uint32_t>> dp(n + 1, std::vector<std::uint32_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            dp[i][j] = a[i] == b[j] ? dp[i + 1][j + 1] + 1
                                    : std::max(dp[i + 1][j], dp[i][j + 1]);
    std::vector<std::size_t> changed_a, changed_b;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j]) {
            ++i;
            ++j;
        } else if (dp[i + 1][j] >= dp[i][j + 1]) {
            changed_a.push_back(i++);
        } else {
            changed_b.push_back(j++);
        }
    }
    while (i < n) changed_a.push_back(i++);
    while (j < m) changed_b.push_back(j++);
    return {std::move(changed_a), std::move(changed_b)};
}

bool near_cited_span(const judgement::SpecDocument& doc, std::size_t idx0,
                     const std::set<std::string>& cited) {
    const long line = static_cast<long>(idx0) + 1;  // spans are 1-based
    for (const auto& id : cited) {
        const auto it = doc.anchors.find(id);
        if (it == doc.anchors.end()) continue;
        if (line >= static_cast<long>(it->second.line_begin) - 5 &&
            line <= static_cast<long>(it->second.line_end) + 5)
            return true;
    }
    return false;
}

// Fraction of changed lines (either side of the diff) that fall inside a
// cited anchor span widened by 5 lines. 1.0 when nothing changed.
double anchor_locality(const judgement::SpecDocument& before,
                       const judgement::SpecDocument& after,
                       const std::set<std::string>& cited) {
    const auto a = text::split_lines(before.text);
    const auto b = text::split_lines(after.text);
    const auto [changed_a, changed_b] = diff_lines(a, b);
    const std::size_t total = changed_a.size() + changed_b.size();
    if (total == 0) return 1.0;
    std::size_t inside = 0;
    for (const auto i : changed_a) inside += near_cited_span(before, i, cited);
    for (const auto j : changed_b) inside += near_cited_span(after, j, cited);
    return static_cast<double>(inside) / static_cast<double>(total);
}

}  // namespace

RevisionResult revise(const judgement::SpecDocument& spec, const std::vector<Action>& actions,
                      TextProvider& provider, const judgement::RetryPolicy& retry) {
    RevisionResult result;
    result.spec = spec;
    if (actions.empty()) {
        result.accepted = true;  // byte-identical document, no call
        return result;
    }

    const std::string prompt = providers::render_prompt(
        kRevisePrompt, {{"document", spec.text}, {"actions", canonical_dump(json(actions))}});

    const int attempts = std::max(1, retry.attempts);
    std::string parse_failure;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0 && retry.backoff_ms > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(retry.backoff_ms << (attempt - 1)));
        std::string reply;
        try {
            reply = provider.complete(Role::reviser, prompt).text;
        } catch (const ProviderError&) {
            if (attempt + 1 == attempts) throw;
            continue;
        }
        judgement::SpecDocument revised;
        try {
            revised = judgement::make_spec_document(strip_fences(reply));
        } catch (const ValidationError& e) {
            parse_failure = e.what();
            continue;
        }

        std::size_t lost = 0;
        for (const auto& [id, span] : spec.anchors) {
            (void)span;
            lost += revised.anchors.count(id) == 0;
        }
        if (!spec.anchors.empty() && 5 * lost > spec.anchors.size()) {  // > 20%
            result.accepted = false;
            result.reject_reason = "revision dropped " + std::to_string(lost) + " of " +
                                   std::to_string(spec.anchors.size()) + " anchors";
            return result;
        }

        std::set<std::string> cited;
        for (const auto& action : actions)
            for (const auto& id : action.anchors) cited.insert(id);
        result.anchor_locality = anchor_locality(spec, revised, cited);
        result.spec = std::move(revised);
        result.accepted = true;
        return result;
    }
    result.accepted = false;
    result.reject_reason = "unparseable revised document after " + std::to_string(attempts) +
                           " attempts: " + parse_failure;
    return result;
}

}  // namespace specfid::loop
