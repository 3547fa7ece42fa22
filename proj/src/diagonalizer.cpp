// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#include "dialectic/diagonalizer.hpp"

#include <algorithm>
#include <sstream>

#include "dialectic/error.hpp"

namespace dialectic {

namespace {

/// Extends tau while iterates converge; true once all j < n are known.
bool extend_tau(PartialPSystem& theta, const AxiomSet& E, std::uint64_t n,
                std::vector<AxiomId>& tau, std::uint64_t fuel) {
    while (tau.size() < n) {
        auto it = theta.r_iterate(tau.size(), E, fuel);
        if (!it) return false;
        tau.push_back(it->value);
    }
    return true;
}

std::optional<std::vector<AxiomId>> shortest_hit(const std::vector<AxiomId>& tau,
                                                 const AxiomSet& targets) {
    for (std::size_t j = 0; j < tau.size(); ++j) {
        if (targets.count(tau[j])) return std::vector<AxiomId>(tau.begin(), tau.begin() + j + 1);
    }
    return std::nullopt;
}

std::string tokens(const std::vector<AxiomId>& seq) {
    std::string out;
    for (AxiomId a : seq) {
        if (!out.empty()) out += ' ';
        out += format_axiom(a);
    }
    return out;
}

}  // namespace

const char* to_string(StrategyStep step) {
    switch (step) {
        case StrategyStep::kDeactivated: return "deactivated";
        case StrategyStep::kS2Wait: return "S2wait";
        case StrategyStep::kPO2Wait: return "PO2wait";
        case StrategyStep::kS5Wait: return "S5wait";
        case StrategyStep::kS7Wait: return "S7wait";
        case StrategyStep::kS8Done: return "S8done";
    }
    return "?";
}

std::optional<std::vector<AxiomId>> predict_order(PartialPSystem& theta, const AxiomSet& E,
                                                  std::uint64_t n, const AxiomSet& targets,
                                                  std::uint64_t fuel) {
    std::vector<AxiomId> tau;
    if (!extend_tau(theta, E, n, tau, fuel)) return std::nullopt;
    return shortest_hit(tau, targets);
}

std::optional<std::vector<AxiomId>> predict_order(PartialPSystem& theta,
                                                  const StrategyState& strategy,
                                                  std::uint64_t fuel) {
    if (!strategy.n) throw Error(ErrorCode::kDomain, "PredictOrder before Step 2");
    return predict_order(theta, strategy.E, *strategy.n, strategy.targets, fuel);
}

Scheduler::Scheduler(std::vector<PartialPSystem> opponents, DiagonalizerOptions options)
    : options_(options),
      opponents_(std::move(opponents)),
      gamma_(RuleTable{}, ReplacementMap{}),
      injuries_(opponents_.size()),
      actions_(opponents_.size()) {
    strategies_.resize(opponents_.size());
    for (std::size_t i = 0; i < strategies_.size(); ++i) strategies_[i].index = i;
}

std::uint64_t Scheduler::fuel() const { return std::min(stage_ + 1, options_.fuel_cap); }

void Scheduler::log(std::size_t i, std::string text) {
    timeline_.push_back(TimelineEntry{stage_, i, std::move(text)});
}

void Scheduler::mention(std::uint64_t index) { mentioned_ = std::max(mentioned_, index); }

AxiomSet Scheduler::protected_above(std::size_t i) const {
    AxiomSet out;
    for (std::size_t j = 0; j < i; ++j) out.insert(strategies_[j].Z.begin(), strategies_[j].Z.end());
    return out;
}

void Scheduler::append(StrategyState& st, const char* step, AxiomSet premises, Symbol conclusion) {
    ConsequenceRule rule{stage_, std::move(premises), conclusion};
    for (AxiomId a : rule.premises) mention(a.index);
    gamma_.append_rule(rule);
    rules_.push_back(AppendedRule{st.index, step, st.N, st.S, rule});
    log(st.index, std::string(step) + " " + format_symbol(conclusion) + " Z=" + format(st.Z));
}

void Scheduler::deactivate_below(std::size_t i) {
    for (std::size_t j = i + 1; j < strategies_.size(); ++j) {
        StrategyState& st = strategies_[j];
        if (st.step == StrategyStep::kDeactivated) continue;
        st = StrategyState{};
        st.index = j;
        injuries_[j].push_back(stage_);
        log(j, "deactivated");
    }
}

void Scheduler::activate(StrategyState& st) {
    std::uint64_t m = mentioned_;
    for (const auto& theta : opponents_) m = std::max(m, theta.max_mentioned());
    const std::size_t i = st.index;
    st = StrategyState{};
    st.index = i;
    st.N = m + 3;
    st.step = StrategyStep::kS2Wait;
    const AxiomSet above = protected_above(i);
    for (std::uint64_t k = 0; k < st.N; ++k) {
        if (!above.count(AxiomId{k})) st.S.insert(AxiomId{k});
    }
    gamma_.mutable_replacement().insert(AxiomId{st.N}, AxiomId{st.N + 2});
    mention(st.N + 2);
    activations_.push_back(ActivationRecord{stage_, i, st.N, m});
    log(i, "activated N=" + std::to_string(st.N));
}

bool Scheduler::ready(StrategyState& st) {
    PartialPSystem& theta = opponents_[st.index];
    const std::uint64_t f = fuel();
    switch (st.step) {
        case StrategyStep::kS2Wait: {
            const std::uint64_t N = st.N;
            for (; st.scan < theta.g_known(); ++st.scan) {
                const std::uint64_t v = theta.g_cached(st.scan).index;
                if (v >= N && v <= N + 2 && !st.first_seen[v - N]) st.first_seen[v - N] = st.scan;
            }
            std::array<std::uint64_t, 3> pos{};
            for (int k = 0; k < 3; ++k) {
                if (!st.first_seen[k]) return false;
                pos[k] = *st.first_seen[k];
            }
            std::sort(pos.begin(), pos.end());
            if (theta.sigma().size() <= pos[2]) return false;
            if (!theta.r_index(pos[0], f)) return false;
            st.l = pos[0];
            st.m = pos[1];
            st.n = pos[2];
            return true;
        }
        case StrategyStep::kPO2Wait:
            return extend_tau(theta, st.E, *st.n, st.tau, f);
        case StrategyStep::kS5Wait: {
            const auto& history = theta.history();
            for (; st.history_seen < history.size(); ++st.history_seen) {
                const TraceEvent& e = history[st.history_seen];
                const std::size_t at = e.length_after - 1;
                if (st.matched > at) st.matched = at;
                if (st.matched == at && at < st.rho.size() && *e.new_axiom == st.rho[at]) {
                    st.matched = at + 1;
                }
            }
            return st.matched == st.rho.size();
        }
        case StrategyStep::kS7Wait: {
            AxiomSet range(st.rho.begin(), st.rho.end());
            auto hit = theta.ce_in(stage_, range, f);
            return hit && *hit;
        }
        default:
            return false;
    }
}

void Scheduler::enter_predict(StrategyState& st) {
    PartialPSystem& theta = opponents_[st.index];
    const AxiomId g_l = theta.g_cached(*st.l);
    const AxiomId aN{st.N}, aN1{st.N + 1}, aN2{st.N + 2};
    st.E = protected_above(st.index);
    st.tau.clear();
    if (g_l != aN) {
        // Part 1 is already won; still drop the third fresh axiom so that
        // rules left behind by injured lower strategies stop firing.
        st.direct = true;
        st.a_I = g_l;
        st.a_J = g_l == aN1 ? aN : aN1;
        st.a_X = g_l == aN1 ? aN2 : aN;
        st.E.insert(*st.a_X);
        st.targets = {g_l};
        st.Z = {*st.a_X};
        log(st.index, "S3 direct l=" + std::to_string(*st.l) + " m=" + std::to_string(*st.m) +
                          " n=" + std::to_string(*st.n));
        AxiomSet premises = st.S;
        premises.insert(*st.a_X);
        append(st, "S3", std::move(premises), Symbol::bottom());
        deactivate_below(st.index);
    } else {
        st.a_X = aN;
        st.E.insert(aN);
        st.targets = {aN1, aN2};
        log(st.index, "S3 predict l=" + std::to_string(*st.l) + " m=" + std::to_string(*st.m) +
                          " n=" + std::to_string(*st.n));
    }
    st.step = StrategyStep::kPO2Wait;
}

void Scheduler::finish_predict(StrategyState& st) {
    auto rho = shortest_hit(st.tau, st.targets);
    if (!rho) throw Error(ErrorCode::kInvariant, "PredictOrder found no target");
    st.rho = std::move(*rho);
    log(st.index, "PO3 rho=" + tokens(st.rho));
    if (!st.direct) {
        const AxiomId aN{st.N}, aN1{st.N + 1}, aN2{st.N + 2};
        st.a_I = st.rho.back();
        st.a_J = *st.a_I == aN1 ? aN2 : aN1;
        st.Z = {aN};
        AxiomSet premises = st.S;
        premises.insert(aN);
        append(st, "S4",
               std::move(premises),
               *st.a_I == aN1 ? Symbol::counterexample() : Symbol::bottom());
        deactivate_below(st.index);
    }
    enter_s5(st);
}

void Scheduler::enter_s5(StrategyState& st) {
    st.step = StrategyStep::kS5Wait;
    const BeliefString& sigma = opponents_[st.index].sigma();
    st.matched = 0;
    while (st.matched < st.rho.size() && st.matched < sigma.size() &&
           sigma[st.matched] == Token::of(st.rho[st.matched])) {
        ++st.matched;
    }
    st.history_seen = opponents_[st.index].history().size();
}

void Scheduler::act(StrategyState& st) {
    actions_[st.index].push_back(stage_);
    switch (st.step) {
        case StrategyStep::kS2Wait:
            enter_predict(st);
            if (ready(st)) finish_predict(st);
            break;
        case StrategyStep::kPO2Wait:
            finish_predict(st);
            break;
        case StrategyStep::kS5Wait: {
            st.Z = {*st.a_X, *st.a_I};
            append(st, "S6", [&] {
                AxiomSet p = st.S;
                p.insert(*st.a_I);
                p.insert(*st.a_J);
                return p;
            }(), Symbol::bottom());
            deactivate_below(st.index);
            st.step = StrategyStep::kS7Wait;
            break;
        }
        case StrategyStep::kS7Wait: {
            st.Z = {*st.a_X, *st.a_J};
            AxiomSet p = st.S;
            p.insert(*st.a_J);
            append(st, "S8", std::move(p), Symbol::bottom());
            deactivate_below(st.index);
            st.step = StrategyStep::kS8Done;
            break;
        }
        default:
            throw Error(ErrorCode::kInvariant, "strategy acted without a wait condition");
    }
}

void Scheduler::schedule_stage() {
    if (stage_ > 0) {
        bool acted = false;
        for (auto& st : strategies_) {
            if (st.step == StrategyStep::kDeactivated || st.step == StrategyStep::kS8Done) continue;
            if (ready(st)) {
                act(st);
                acted = true;
                break;
            }
        }
        if (!acted) {
            for (auto& st : strategies_) {
                if (st.step == StrategyStep::kDeactivated) {
                    activate(st);
                    break;
                }
            }
            ReplacementMap& r = gamma_.mutable_replacement();
            while (r.defined(AxiomId{r_cursor_})) ++r_cursor_;
            r.insert(AxiomId{r_cursor_}, AxiomId{r_cursor_ + 1});
            mention(r_cursor_ + 1);
        }
    }
    TraceEvent e = runner_.advance(gamma_);
    if (e.new_axiom) mention(e.new_axiom->index);
    events_.push_back(e);
    for (auto& theta : opponents_) {
        if (!theta.invalid()) theta.step(stage_, fuel());
    }
    ++stage_;
}

DiagonalizationReport Scheduler::report() const {
    DiagonalizationReport out;
    out.horizon = stage_;
    out.window = options_.window != 0 ? options_.window : std::max<std::uint64_t>(1, stage_ / 4);
    out.timeline = timeline_;
    out.rules = rules_;
    out.replacement = gamma_.replacement();
    out.trace.events = events_;
    out.trace.horizon = stage_;
    out.trace.final_sigma = runner_.sigma();
    out.activations = activations_;
    out.injuries = injuries_;
    out.actions = actions_;
    out.strategies = strategies_;
    if (stage_ == 0) return out;

    const StabilityReport gamma = estimate_beliefs(out.trace, out.window);
    for (std::size_t i = 0; i < opponents_.size(); ++i) {
        const PartialPSystem& theta = opponents_[i];
        const StrategyState& st = strategies_[i];
        OpponentVerdict v;
        v.index = i;
        v.name = theta.name();
        v.step = st.step;
        v.N = st.N;
        const StabilityReport mine = estimate_beliefs(theta.history(), stage_, out.window);
        v.gamma_stable = gamma.clean_window;
        v.theta_stable = mine.clean_window;
        const AxiomSet& bg = gamma.belief_estimate;
        const AxiomSet& bt = mine.belief_estimate;
        auto differs = [&](AxiomId a) { return bg.count(a) != bt.count(a); };
        if (st.step != StrategyStep::kDeactivated) {
            for (std::uint64_t k = st.N; k <= st.N + 2 && !v.witness; ++k) {
                if (differs(AxiomId{k})) v.witness = AxiomId{k};
            }
        }
        if (!v.witness) {
            AxiomSet diff;
            std::set_symmetric_difference(bg.begin(), bg.end(), bt.begin(), bt.end(),
                                          std::inserter(diff, diff.end()));
            if (!diff.empty()) v.witness = *diff.begin();
        }
        if (theta.invalid()) {
            v.status = "invalid: " + *theta.invalid_reason();
        } else if (st.step == StrategyStep::kPO2Wait) {
            v.status = "not-a-p-system: r never leaves E";
        } else if (theta.last_divergence()) {
            v.status = "diverging: " + *theta.last_divergence();
        }
        out.verdicts.push_back(std::move(v));
    }
    return out;
}

DiagonalizationReport diagonalize(std::vector<PartialPSystem> opponents, std::uint64_t horizon,
                                  const DiagonalizerOptions& options) {
    if (horizon == 0) throw Error(ErrorCode::kDomain, "horizon must be at least 1");
    Scheduler scheduler(std::move(opponents), options);
    for (std::uint64_t s = 0; s < horizon; ++s) scheduler.schedule_stage();
    return scheduler.report();
}

std::string format(const DiagonalizationReport& report) {
    std::ostringstream out;
    out << "horizon=" << report.horizon << " window=" << report.window << "\n";
    out << "# timeline\n";
    for (const auto& t : report.timeline) {
        out << "stage " << t.stage << ": R" << t.strategy << ' ' << t.text << "\n";
    }
    out << "# rules\n";
    for (const auto& r : report.rules) {
        out << "R" << r.strategy << ' ' << r.step << ' ' << format_rule(r.rule) << "\n";
    }
    out << "# verdicts\n";
    for (const auto& v : report.verdicts) {
        out << "opponent " << v.index << ": " << to_string(v.step)
            << " witness=" << (v.witness ? format_axiom(*v.witness) : "-") << "\n";
        out << "opponent " << v.index << " estimate: name=" << v.name << " N=" << v.N
            << " gamma=" << (v.gamma_stable ? "stable" : "unsettled")
            << " theta=" << (v.theta_stable ? "stable" : "unsettled") << "\n";
        if (v.status) out << "opponent " << v.index << " status: " << *v.status << "\n";
    }
    return out.str();
}

}  // namespace dialectic
