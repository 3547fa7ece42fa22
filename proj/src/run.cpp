// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/run.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "dialectic/error.hpp"

namespace dialectic {

void ReplacementMap::insert(AxiomId from, AxiomId to) {
    if (auto it = map_.find(from); it != map_.end()) {
        if (it->second == to) return;
        throw Error(ErrorCode::kDomain, "r(" + format_axiom(from) + ") is already " +
                                            format_axiom(it->second));
    }
    const bool whitelisted = allowed_cycles_.count({from, to}) != 0;
    if (from == to) {
        throw Error(ErrorCode::kCyclicReplacement, "r(" + format_axiom(from) + ") maps to itself");
    }
    map_.emplace(from, to);
    if (whitelisted) return;
    AxiomId cur = to;
    for (std::size_t n = 2; n <= depth_; ++n) {
        auto it = map_.find(cur);
        if (it == map_.end()) return;
        cur = it->second;
        if (cur == from) {
            map_.erase(from);
            throw Error(ErrorCode::kCyclicReplacement,
                        "r^" + std::to_string(n) + "(" + format_axiom(from) + ") returns to itself");
        }
    }
}

void ReplacementMap::allow_two_cycle(AxiomId a, AxiomId b) {
    allowed_cycles_.insert({a, b});
    allowed_cycles_.insert({b, a});
}

std::optional<AxiomId> ReplacementMap::at(AxiomId from) const {
    auto it = map_.find(from);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t ReplacementMap::least_undefined() const {
    std::uint64_t k = 0;
    for (const auto& [from, to] : map_) {
        if (from.index != k) break;
        ++k;
    }
    return k;
}

std::optional<std::uint64_t> ReplacementMap::max_index() const {
    std::optional<std::uint64_t> out;
    for (const auto& [from, to] : map_) {
        out = std::max(out.value_or(0), std::max(from.index, to.index));
    }
    return out;
}

void check_loadable(const RuleTable& table) {
    for (const auto& r : table.rules()) {
        if (r.premises.empty() && r.conclusion.is_trigger()) {
            throw Error(ErrorCode::kRejectedTable,
                        "'" + format_rule(r) + "' derives a trigger from the empty set");
        }
    }
}

QSystem::QSystem(RuleTable table, ReplacementMap replacement)
    : table_(std::move(table)), replacement_(std::move(replacement)) {
    check_loadable(table_);
}

void QSystem::append_rule(ConsequenceRule rule) {
    if (rule.premises.empty() && rule.conclusion.is_trigger()) {
        throw Error(ErrorCode::kRejectedTable, "trigger rule with empty premises");
    }
    table_.append(std::move(rule));
}

const char* to_string(TraceEvent::Kind kind) {
    switch (kind) {
        case TraceEvent::Kind::kExpansion: return "EXP";
        case TraceEvent::Kind::kExcision: return "EXC";
        case TraceEvent::Kind::kReplacement: return "REP";
    }
    return "?";
}

void apply_event(BeliefString& sigma, const TraceEvent& e) {
    switch (e.kind) {
        case TraceEvent::Kind::kExpansion:
            sigma.push_back(Token::of(e.new_axiom.value_or(AxiomId{sigma.size()})));
            break;
        case TraceEvent::Kind::kExcision:
            sigma.truncate(e.k - 1);
            sigma.push_back(Token::gap());
            break;
        case TraceEvent::Kind::kReplacement:
            sigma.truncate(e.k - 1);
            sigma.push_back(Token::of(*e.new_axiom));
            break;
    }
}

BeliefString RunTrace::sigma_at(std::uint64_t stage) const {
    if (stage > events.size()) {
        throw Error(ErrorCode::kOutOfRange, "stage " + std::to_string(stage) + " beyond trace");
    }
    BeliefString sigma;
    for (std::uint64_t s = 0; s < stage; ++s) apply_event(sigma, events[s]);
    return sigma;
}

void RunTrace::for_each_sigma(
    const std::function<void(std::uint64_t, const BeliefString&)>& fn) const {
    BeliefString sigma;
    fn(0, sigma);
    for (std::uint64_t s = 0; s < events.size(); ++s) {
        apply_event(sigma, events[s]);
        fn(s + 1, sigma);
    }
}

namespace {
constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;
}

void TriggerIndex::push(Token t) {
    const std::size_t position = length_++;
    if (t.is_gap()) return;
    const std::uint64_t i = t.axiom().index;
    if (i >= kDenseLimit) {
        throw Error(ErrorCode::kDomain, "axiom index " + std::to_string(i) + " is too large");
    }
    if (i >= positions_.size()) {
        positions_.resize(std::max<std::size_t>(i + 1, positions_.size() * 2));
    }
    positions_[i].push_back(position);
}

void TriggerIndex::truncate(std::size_t length, const BeliefString& before) {
    for (std::size_t p = before.size(); p > length; --p) {
        const Token t = before[p - 1];
        if (t.is_axiom()) positions_[t.axiom().index].pop_back();
    }
    length_ = std::min(length_, length);
}

std::size_t TriggerIndex::first_position(AxiomId id) const {
    if (id.index >= positions_.size() || positions_[id.index].empty()) return npos;
    return positions_[id.index].front();
}

std::optional<Trigger> TriggerIndex::find(const RuleTable& table, std::uint64_t stage) const {
    std::optional<Trigger> best;
    for (const auto& rule : table.rules()) {
        if (rule.stage > stage || !rule.conclusion.is_trigger()) continue;
        std::size_t k = 0;
        bool present = true;
        for (AxiomId p : rule.premises) {
            const std::size_t f = first_position(p);
            if (f == npos) {
                present = false;
                break;
            }
            k = std::max(k, f + 1);
        }
        if (!present) continue;
        const bool bottom = rule.conclusion.is_bottom();
        if (!best || k < best->k) {
            best = Trigger{k, bottom};
        } else if (k == best->k && bottom) {
            best->bottom = true;
        }
    }
    return best;
}

namespace {

TraceEvent decide(const QSystem& system, const BeliefString& sigma, const TriggerIndex& index,
                  std::uint64_t s) {
    TraceEvent e;
    e.stage = s;
    auto trigger = index.find(system.table(), s);
    if (!trigger) {
        e.kind = TraceEvent::Kind::kExpansion;
        e.new_axiom = AxiomId{sigma.size()};
        e.length_after = sigma.size() + 1;
        return e;
    }
    if (trigger->k == 0 || trigger->k > sigma.size()) {
        throw Error(ErrorCode::kInvariant, "trigger index out of range at stage " +
                                               std::to_string(s));
    }
    e.k = trigger->k;
    e.length_after = trigger->k;
    const Token t = sigma[trigger->k - 1];
    if (t.is_gap()) {
        throw Error(ErrorCode::kInvariant,
                    "trigger at a gap position " + std::to_string(trigger->k) + " at stage " +
                        std::to_string(s));
    }
    e.old_axiom = t.axiom();
    if (trigger->bottom) {
        e.kind = TraceEvent::Kind::kExcision;
        return e;
    }
    auto r = system.replacement().at(t.axiom());
    if (!r) {
        throw Error(ErrorCode::kMissingReplacement,
                    "r(" + format_axiom(t.axiom()) + ") undefined at stage " + std::to_string(s));
    }
    e.kind = TraceEvent::Kind::kReplacement;
    e.new_axiom = *r;
    return e;
}

}  // namespace

std::pair<BeliefString, TraceEvent> step(const QSystem& system, const BeliefString& sigma,
                                         std::uint64_t s) {
    TriggerIndex index;
    for (Token t : sigma) index.push(t);
    TraceEvent e = decide(system, sigma, index, s);
    BeliefString next = sigma;
    apply_event(next, e);
    return {std::move(next), e};
}

TraceEvent Runner::advance(const QSystem& system) {
    TraceEvent e = decide(system, sigma_, index_, stage_);
    if (e.kind == TraceEvent::Kind::kExpansion) {
        sigma_.push_back(Token::of(*e.new_axiom));
        index_.push(sigma_.back());
    } else {
        index_.truncate(e.k - 1, sigma_);
        sigma_.truncate(e.k - 1);
        const Token t = e.kind == TraceEvent::Kind::kExcision ? Token::gap()
                                                              : Token::of(*e.new_axiom);
        sigma_.push_back(t);
        index_.push(t);
    }
    ++stage_;
    return e;
}

RunTrace run(const QSystem& system, std::uint64_t horizon) {
    if (horizon == 0) throw Error(ErrorCode::kDomain, "horizon must be at least 1");
    RunTrace trace;
    trace.horizon = horizon;
    trace.events.reserve(horizon);
    Runner runner;
    for (std::uint64_t s = 0; s < horizon; ++s) trace.events.push_back(runner.advance(system));
    trace.final_sigma = runner.sigma();
    return trace;
}

StabilityReport estimate_beliefs(const RunTrace& trace, std::uint64_t window) {
    return estimate_beliefs(trace.events, trace.horizon, window);
}

StabilityReport estimate_beliefs(std::span<const TraceEvent> events, std::uint64_t horizon,
                                 std::uint64_t window) {
    if (window == 0 || window > horizon) {
        throw Error(ErrorCode::kDomain, "window must lie in 1..horizon");
    }
    StabilityReport out;
    out.horizon = horizon;
    out.window = window;
    const std::uint64_t cutoff = horizon - window;
    BeliefString sigma;
    std::vector<PositionInfo>& pos = out.positions;
    bool case1_in_window = false;
    for (const TraceEvent& e : events) {
        const std::uint64_t changed = e.stage + 1;
        apply_event(sigma, e);
        pos.resize(sigma.size());
        PositionInfo& p = pos.back();
        p.last = sigma.back();
        p.last_change = changed;
        p.revised_in_window = false;
        if (e.kind != TraceEvent::Kind::kExpansion && changed > cutoff) {
            p.revised_in_window = true;
            case1_in_window = true;
        }
    }
    // A position re-expanded after truncation keeps the flag of the fresh entry only.
    std::size_t stable = 0;
    while (stable < pos.size() && pos[stable].last_change <= cutoff) ++stable;
    out.stable_prefix_length = stable;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i].revised_in_window) out.loop_suspects.insert(i);
        if (i < stable && pos[i].last.is_axiom()) out.belief_estimate.insert(pos[i].last.axiom());
    }
    out.clean_window = !case1_in_window;
    return out;
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::kD: return "d";
        case Variant::kP: return "p";
        case Variant::kQ: return "q";
    }
    return "?";
}

Variant parse_variant(std::string_view text) {
    if (text == "d") return Variant::kD;
    if (text == "p") return Variant::kP;
    if (text == "q") return Variant::kQ;
    throw Error(ErrorCode::kParse, "unknown variant '" + std::string(text) + "'");
}

VariantInfo classify_variant(const QSystem& system) {
    VariantInfo info;
    info.is_d = !system.table().has_counterexample();
    info.is_p = !system.table().has_bottom();
    info.variant = info.is_d ? Variant::kD : (info.is_p ? Variant::kP : Variant::kQ);
    return info;
}

void write_trace(const RunTrace& trace, std::ostream& out) {
    BeliefString sigma;
    for (const TraceEvent& e : trace.events) {
        apply_event(sigma, e);
        out << e.stage << '\t' << to_string(e.kind) << '\t';
        if (e.kind == TraceEvent::Kind::kExpansion) out << '-';
        else out << e.k;
        out << '\t' << (e.old_axiom ? format_axiom(*e.old_axiom) : "-");
        out << '\t' << (e.new_axiom && e.kind != TraceEvent::Kind::kExcision
                            ? format_axiom(*e.new_axiom)
                            : "-");
        out << '\t' << format(sigma) << '\n';
    }
}

std::string format_trace(const RunTrace& trace) {
    std::ostringstream os;
    write_trace(trace, os);
    return os.str();
}

std::string format(const StabilityReport& r) {
    std::ostringstream os;
    os << "horizon=" << r.horizon << " window=" << r.window << '\n';
    os << "stable_prefix=" << r.stable_prefix_length << '\n';
    os << "clean_window=" << (r.clean_window ? "yes" : "no") << '\n';
    os << "beliefs=" << format(r.belief_estimate) << '\n';
    os << "loop_suspects={";
    bool first = true;
    for (std::size_t p : r.loop_suspects) {
        os << (first ? "" : ",") << p;
        first = false;
    }
    os << "}\n";
    return os.str();
}

}  // namespace dialectic
