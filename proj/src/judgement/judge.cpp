#include "specfid/judgement/judge.hpp"

#include <cctype>
#include <chrono>
#include <set>
#include <thread>

#include "specfid/core/errors.hpp"
#include "specfid/core/text.hpp"
#include "specfid/providers/prompt.hpp"

namespace specfid::judgement {

namespace {

const char* kJudgePrompt =
    "You are auditing a functional specification. Answer the question using "
    "only the document below; do not use outside knowledge. Reply with "
    "exactly three lines:\n"
    "answer: <short answer, or SILENT when the document does not address it>\n"
    "evidence: <comma-separated requirement ids, or none>\n"
    "confidence: confirmed|contradicted|not_addressed\n\n"
    "--- document ---\n{document}\n--- end document ---\n\n"
    "question: {question}\n";

void backoff_sleep(const RetryPolicy& retry, int attempt) {
    if (retry.backoff_ms <= 0) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(retry.backoff_ms << attempt));
}

// strict line-oriented reply format; anything else reads as false
bool parse_reply(const std::string& reply, JudgeAnswer& out) {
    std::optional<std::string> answer;
    std::optional<std::string> evidence;
    std::optional<std::string> confidence;
    for (const auto& raw : text::split_lines(reply)) {
        const std::string line = text::trim(raw);
        const std::string low = text::lower(line);
        if (low.rfind("answer:", 0) == 0 && !answer)
            answer = text::trim(line.substr(7));
        else if (low.rfind("evidence:", 0) == 0 && !evidence)
            evidence = text::trim(line.substr(9));
        else if (low.rfind("confidence:", 0) == 0 && !confidence)
            confidence = text::lower(text::trim(line.substr(11)));
    }
    if (!answer || !confidence) return false;

    JudgeAnswer ja;
    if (text::lower(*answer) == "silent") {
        ja.answer.reset();
        ja.confidence = Confidence::not_addressed;
    } else if (answer->empty()) {
        return false;
    } else {
        ja.answer = *answer;
        try {
            ja.confidence = confidence_from_string(*confidence);
        } catch (const ValidationError&) {
            return false;
        }
        // an answered probe cannot be not_addressed; that reply is malformed
        if (ja.confidence == Confidence::not_addressed) return false;
    }

    if (evidence && !evidence->empty() && text::lower(*evidence) != "none") {
        std::string spaced = *evidence;
        for (char& c : spaced)
            if (c == ',' || c == ';') c = ' ';
        for (const auto& part : text::split_ws(spaced)) ja.evidence.push_back(part);
    }
    out = std::move(ja);
    return true;
}

}  // namespace

JudgeAnswer judge(const SpecDocument& spec, const Probe& probe, TextProvider& provider,
                  const RetryPolicy& retry) {
    const std::string prompt = providers::render_prompt(
        kJudgePrompt, {{"document", spec.text}, {"question", probe.question}});

    JudgeAnswer ja;
    bool parsed = false;
    for (int attempt = 0; attempt < retry.attempts; ++attempt) {
        if (attempt > 0) backoff_sleep(retry, attempt - 1);
        std::string reply;
        try {
            reply = provider.complete(Role::judge, prompt).text;
        } catch (const ProviderError&) {
            if (attempt + 1 == retry.attempts) throw;
            continue;
        }
        if (parse_reply(reply, ja)) {
            parsed = true;
            break;
        }
    }
    if (!parsed) {
        ja = JudgeAnswer{};
        ja.diagnostic = "unparseable judge output after " +
                        std::to_string(retry.attempts) + " attempts";
        return ja;
    }

    std::vector<std::string> unknown;
    for (const auto& e : ja.evidence)
        if (!spec.anchors.count(e)) unknown.push_back(e);
    if (!unknown.empty())
        ja.diagnostic = "unknown anchors: " + text::join(unknown, ", ");
    return ja;
}

std::string normalize_answer(const std::string& s) {
    std::string expanded;
    for (char c : s) {
        if (c == '%')
            expanded += " percent ";
        else if (std::isalnum(static_cast<unsigned char>(c)))
            expanded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else
            expanded.push_back(' ');
    }
    std::vector<std::string> kept;
    for (const auto& tok : text::split_ws(expanded))
        if (tok != "a" && tok != "an" && tok != "the") kept.push_back(tok);
    return text::join(kept, " ");
}

CompareLabel normalized_compare(const std::string& truth, const std::string& answer) {
    const auto toks = [](const std::string& s) {
        std::set<std::string> out;
        for (const auto& t : text::split_ws(normalize_answer(s))) out.insert(t);
        return out;
    };
    const auto a = toks(truth);
    const auto b = toks(answer);
    if (a.empty() || b.empty())
        return a.empty() && b.empty() ? CompareLabel::equivalent : CompareLabel::unrelated;
    const auto subset = [](const std::set<std::string>& x, const std::set<std::string>& y) {
        for (const auto& t : x)
            if (!y.count(t)) return false;
        return true;
    };
    if (subset(a, b) || subset(b, a)) return CompareLabel::equivalent;
    for (const auto& t : a)
        if (b.count(t)) return CompareLabel::contradictory;
    return CompareLabel::unrelated;
}

CompareLabel compare(const std::string& truth, const std::string& answer,
                     AnswerComparator& comparator, const RetryPolicy& retry) {
    for (int attempt = 0;; ++attempt) {
        if (attempt > 0) backoff_sleep(retry, attempt - 1);
        try {
            return comparator.compare(truth, answer);
        } catch (const ProviderError&) {
            if (attempt + 1 >= retry.attempts) throw;
        }
    }
}

VerdictValue verdict(const JudgeAnswer& answer, const std::optional<CompareLabel>& comparison) {
    if (answer.silent()) {
        if (comparison.has_value())
            throw ValidationError("comparison supplied for a silent judge answer");
        return VerdictValue::gap;
    }
    if (!comparison.has_value())
        throw ValidationError("comparison missing for an answered probe");
    return *comparison == CompareLabel::equivalent ? VerdictValue::agree
                                                   : VerdictValue::contradict;
}

std::optional<Action> classify_action(const Probe& probe, VerdictValue v,
                                      const JudgeAnswer& answer) {
    if (v == VerdictValue::agree) return std::nullopt;

    Action a;
    a.probe_id = probe.id;
    a.evidence = text::join(answer.evidence, ", ");
    std::set<std::string> seen;
    for (const auto& e : answer.evidence)
        if (is_anchor_id(e) && seen.insert(e).second) a.anchors.push_back(e);

    const std::string said = answer.answer.value_or("");
    if (v == VerdictValue::gap) {
        a.kind = ActionKind::add;
        a.guidance = "The document is silent on this behaviour. Add a clause stating: " +
                     probe.truth;
    } else if (probe.category == Category::negative) {
        a.kind = ActionKind::remove;
        a.guidance = "Remove or negate the contradicted clause. The document claims: " + said +
                     ". The program's actual behaviour: " + probe.truth;
    } else {
        a.kind = ActionKind::fix;
        a.guidance = "Fix the clause to match the behaviour: " + probe.truth +
                     ". The document currently answers: " + said;
    }
    return a;
}

}  // namespace specfid::judgement
